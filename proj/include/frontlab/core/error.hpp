#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace frontlab {

enum class ErrorKind {
    NotInvading,
    NoConvergence,
    GridTooShort,
    FitWindowUnderResolved,
    ShapeMismatch,
    DegenerateGap,
    CFLViolation,
    BlowUp,
    TrackingLost,
    EmptyWindow,
    PinchedDomain,
    SphereConditionFail,
    EnvelopeViolation,
    OutsideDomain,
    ParameterViolation,
    ParseError,
    ValidationError,
    UnknownExperiment,
    IOError,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NotInvading: return "NotInvading";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::GridTooShort: return "GridTooShort";
    case ErrorKind::FitWindowUnderResolved: return "FitWindowUnderResolved";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DegenerateGap: return "DegenerateGap";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::TrackingLost: return "TrackingLost";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::PinchedDomain: return "PinchedDomain";
    case ErrorKind::SphereConditionFail: return "SphereConditionFail";
    case ErrorKind::EnvelopeViolation: return "EnvelopeViolation";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::ParameterViolation: return "ParameterViolation";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::UnknownExperiment: return "UnknownExperiment";
    case ErrorKind::IOError: return "IOError";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable kind and, when known, the config
/// field path that induced it.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, std::string path = {})
        : std::runtime_error(compose(kind, message, path)),
          kind_(kind), path_(std::move(path)), detail_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& path() const noexcept { return path_; }
    const std::string& detail() const noexcept { return detail_; }

    /// Same error re-anchored at a config field path.
    Error at(const std::string& path) const { return Error(kind_, detail_, path); }

    /// Numerical failures map to CLI exit code 3, input problems to 2.
    bool is_numerical() const noexcept {
        switch (kind_) {
        case ErrorKind::NoConvergence:
        case ErrorKind::BlowUp:
        case ErrorKind::GridTooShort:
        case ErrorKind::DegenerateGap:
        case ErrorKind::TrackingLost:
        case ErrorKind::FitWindowUnderResolved:
        case ErrorKind::EmptyWindow:
            return true;
        default:
            return false;
        }
    }

private:
    static std::string compose(ErrorKind kind, const std::string& message, const std::string& path) {
        std::string out(to_string(kind));
        if (!path.empty()) out += " at '" + path + "'";
        out += ": " + message;
        return out;
    }

    ErrorKind kind_;
    std::string path_;
    std::string detail_;
};

}  // namespace frontlab
