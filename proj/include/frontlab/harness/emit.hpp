#pragma once

#include "frontlab/core/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace frontlab {

/// %.17g, which round-trips every double; NaN and infinities print as nan/inf.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using CsvCell = std::variant<double, long long, std::string>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvCell>> rows;

    void add(std::vector<CsvCell> row) {
        if (row.size() != header.size()) throw Error(ErrorKind::ShapeMismatch, "CSV row width differs from header");
        rows.push_back(std::move(row));
    }
};

inline std::string to_csv_text(const CsvTable& t) {
    std::string out;
    for (std::size_t k = 0; k < t.header.size(); ++k) out += (k ? "," : "") + t.header[k];
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>)
                        out += format_double(v);
                    else if constexpr (std::is_same_v<T, long long>)
                        out += std::to_string(v);
                    else
                        out += v;
                },
                row[k]);
        }
        out += '\n';
    }
    return out;
}

namespace detail {

inline void write_json_value(const nlohmann::json& j, std::string& out, int indent, int depth) {
    const std::string pad(std::size_t(indent * (depth + 1)), ' ');
    const std::string close(std::size_t(indent * depth), ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + nlohmann::json(it.key()).dump() + ": ";
            write_json_value(it.value(), out, indent, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[";
        for (std::size_t k = 0; k < j.size(); ++k) {
            if (k) out += ", ";
            write_json_value(j[k], out, indent, depth + 1);
        }
        out += "]";
        return;
    }
    case nlohmann::json::value_t::number_float: {
        const double v = j.get<double>();
        out += std::isfinite(v) ? format_double(v) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

}  // namespace detail

/// JSON with sorted keys, two-space indent, floats at 17 significant digits
/// and non-finite numbers as null.
inline std::string to_json_text(const nlohmann::json& j) {
    std::string out;
    detail::write_json_value(j, out, 2, 0);
    out += '\n';
    return out;
}

/// Writes through a sibling temporary file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorKind::IOError, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::IOError, "cannot open " + tmp.string() + " for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        out.flush();
        if (!out) throw Error(ErrorKind::IOError, "write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::IOError, "cannot move " + tmp.string() + " to " + path.string());
    }
}

inline void emit_csv(const std::filesystem::path& path, const CsvTable& table) {
    write_file_atomic(path, to_csv_text(table));
}

inline void emit_json(const std::filesystem::path& path, const nlohmann::json& j) {
    write_file_atomic(path, to_json_text(j));
}

}  // namespace frontlab
