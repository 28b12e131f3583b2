#pragma once

#include "frontlab/core/error.hpp"
#include "frontlab/sim2d/domain.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace frontlab {

/// Tensor grid on [x_min, x_max] x [z_lo, z_hi] for the affine map
///   y = b-(x) + (z - z_lo) w(x) / W,  w = b+ - b-,  W = z_hi - z_lo,
/// whose z-range is the limit section, so the map is the identity on the
/// straight part of the domain. Nodes are stored x-major: idx = i nz + j.
struct MappedGrid {
    double x_min = 0.0, hx = 0.0;
    std::size_t nx = 0;
    double z_lo = 0.0, z_hi = 1.0, hz = 0.0;
    std::size_t nz = 0;

    // Per x-node boundary data.
    std::vector<double> bm, bm1, bm2, bp, bp1, bp2, w, w1, w2;
    // Per node metric: z_x, z_xx, z_y.
    std::vector<double> zx, zxx, zy;

    std::size_t size() const { return nx * nz; }
    std::size_t idx(std::size_t i, std::size_t j) const { return i * nz + j; }
    double x(std::size_t i) const { return x_min + double(i) * hx; }
    double z(std::size_t j) const { return z_lo + double(j) * hz; }
    double W() const { return z_hi - z_lo; }
    double y(std::size_t i, std::size_t j) const { return bm[i] + (z(j) - z_lo) * w[i] / W(); }
};

/// Samples the boundary graphs and the metric on nx x nz nodes; nz_cells is
/// the number of intervals across the section.
inline MappedGrid build_grid(const DomainSpec2D& d, double x_min, double x_max, double hx, std::size_t nz_cells) {
    if (!(hx > 0.0) || nz_cells < 2) throw Error(ErrorKind::ValidationError, "grid too coarse", "sim2d.grid");
    const double span = (x_max - x_min) / hx;
    if (std::abs(span - std::round(span)) > 1e-6)
        throw Error(ErrorKind::ValidationError, "hx must divide the x-range", "sim2d.grid.hx");
    MappedGrid g;
    g.x_min = x_min;
    g.hx = hx;
    g.nx = static_cast<std::size_t>(std::lround(span)) + 1;
    g.z_lo = d.omega_lo;
    g.z_hi = d.omega_hi;
    g.nz = nz_cells + 1;
    g.hz = g.W() / double(nz_cells);
    for (auto* v : {&g.bm, &g.bm1, &g.bm2, &g.bp, &g.bp1, &g.bp2, &g.w, &g.w1, &g.w2}) v->resize(g.nx);
    g.zx.resize(g.size());
    g.zxx.resize(g.size());
    g.zy.resize(g.size());
    const double W = g.W();
    for (std::size_t i = 0; i < g.nx; ++i) {
        double lo[4], hi[4];
        d.b_minus.eval(g.x(i), lo);
        d.b_plus.eval(g.x(i), hi);
        g.bm[i] = lo[0];
        g.bm1[i] = lo[1];
        g.bm2[i] = lo[2];
        g.bp[i] = hi[0];
        g.bp1[i] = hi[1];
        g.bp2[i] = hi[2];
        g.w[i] = hi[0] - lo[0];
        g.w1[i] = hi[1] - lo[1];
        g.w2[i] = hi[2] - lo[2];
        if (!(g.w[i] > 0.0)) throw Error(ErrorKind::PinchedDomain, "non-positive width on the grid", "domain");
        for (std::size_t j = 0; j < g.nz; ++j) {
            const double s = g.z(j) - g.z_lo;
            const double zx = -(W * lo[1] + s * g.w1[i]) / g.w[i];
            const std::size_t k = g.idx(i, j);
            g.zx[k] = zx;
            g.zxx[k] = -(W * lo[2] + s * g.w2[i] + 2.0 * zx * g.w1[i]) / g.w[i];
            g.zy[k] = W / g.w[i];
        }
    }
    return g;
}

/// Per-node coefficients of D = a_xx d_xx + a_xz d_xz + a_zz d_zz + a_z d_z.
struct StencilCoefficients {
    double a_xx = 1.0, a_xz = 0.0, a_zz = 1.0, a_z = 0.0;
};

inline StencilCoefficients coefficients(const MappedGrid& g, std::size_t i, std::size_t j) {
    const std::size_t k = g.idx(i, j);
    return {1.0, 2.0 * g.zx[k], g.zx[k] * g.zx[k] + g.zy[k] * g.zy[k], g.zxx[k]};
}

/// Finite-difference derivatives of a grid field at an interior node:
/// d_xx fourth order where five points fit, the rest second order central.
struct NodeDerivatives {
    double ux = 0.0, uz = 0.0, uxx = 0.0, uzz = 0.0, uxz = 0.0;
};

inline NodeDerivatives interior_derivatives(const MappedGrid& g, std::span<const double> u, std::size_t i,
                                            std::size_t j) {
    auto U = [&](std::size_t a, std::size_t b) { return u[g.idx(a, b)]; };
    NodeDerivatives d;
    const double hx = g.hx, hz = g.hz;
    d.ux = (U(i + 1, j) - U(i - 1, j)) / (2 * hx);
    d.uz = (U(i, j + 1) - U(i, j - 1)) / (2 * hz);
    if (i >= 2 && i + 2 < g.nx)
        d.uxx = (-U(i + 2, j) + 16 * U(i + 1, j) - 30 * U(i, j) + 16 * U(i - 1, j) - U(i - 2, j)) / (12 * hx * hx);
    else
        d.uxx = (U(i + 1, j) - 2 * U(i, j) + U(i - 1, j)) / (hx * hx);
    d.uzz = (U(i, j + 1) - 2 * U(i, j) + U(i, j - 1)) / (hz * hz);
    d.uxz = (U(i + 1, j + 1) - U(i + 1, j - 1) - U(i - 1, j + 1) + U(i - 1, j - 1)) / (4 * hx * hz);
    return d;
}

/// Mapped Laplacian at the interior nodes (1 <= i <= nx-2, 1 <= j <= nz-2);
/// other entries are NaN.
inline std::vector<double> apply_mapped_laplacian(const MappedGrid& g, std::span<const double> u) {
    if (u.size() != g.size()) throw Error(ErrorKind::ShapeMismatch, "field does not match the mapped grid");
    std::vector<double> out(g.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i + 1 < g.nx; ++i)
        for (std::size_t j = 1; j + 1 < g.nz; ++j) {
            const auto c = coefficients(g, i, j);
            const auto d = interior_derivatives(g, u, i, j);
            out[g.idx(i, j)] = c.a_xx * d.uxx + c.a_xz * d.uxz + c.a_zz * d.uzz + c.a_z * d.uz;
        }
    return out;
}

enum class Wall { Lower, Upper };

/// z-derivative of u on a wall implied by the physical Neumann condition:
/// u_z = w b' u_x / (W (1 + b'^2)) with b = b- or b+.
inline double neumann_uz(const MappedGrid& g, std::size_t i, Wall wall, double ux) {
    const double b1 = wall == Wall::Lower ? g.bm1[i] : g.bp1[i];
    return g.w[i] * b1 * ux / (g.W() * (1.0 + b1 * b1));
}

/// Outward physical normal derivative on a wall, from second-order one-sided
/// differences in z and central differences in x, at 1 <= i <= nx-2.
inline std::vector<double> apply_neumann_mapped(const MappedGrid& g, std::span<const double> u, Wall wall) {
    if (u.size() != g.size()) throw Error(ErrorKind::ShapeMismatch, "field does not match the mapped grid");
    std::vector<double> out(g.nx, std::numeric_limits<double>::quiet_NaN());
    const std::size_t j = wall == Wall::Lower ? 0 : g.nz - 1;
    for (std::size_t i = 1; i + 1 < g.nx; ++i) {
        auto U = [&](std::size_t a, std::size_t b) { return u[g.idx(a, b)]; };
        const double ux = (U(i + 1, j) - U(i - 1, j)) / (2 * g.hx);
        const double uz = wall == Wall::Lower ? (-3 * U(i, 0) + 4 * U(i, 1) - U(i, 2)) / (2 * g.hz)
                                              : (3 * U(i, j) - 4 * U(i, j - 1) + U(i, j - 2)) / (2 * g.hz);
        const std::size_t k = g.idx(i, j);
        const double px = ux + g.zx[k] * uz;  // physical d/dx
        const double py = g.zy[k] * uz;       // physical d/dy
        const double b1 = wall == Wall::Lower ? g.bm1[i] : g.bp1[i];
        const double norm = std::sqrt(1.0 + b1 * b1);
        out[i] = wall == Wall::Lower ? (b1 * px - py) / norm : (-b1 * px + py) / norm;
    }
    return out;
}

struct ResidualNorms {
    double R1_sup = 0.0;  ///< sup over interior nodes of mapped Laplacian minus flat Laplacian
    double R2_sup = 0.0;  ///< sup over wall nodes of the flat-wall normal derivative
};

/// R1 = 2 z_x u_xz + (z_x^2 + z_y^2 - 1) u_zz + z_xx u_z, the part of the
/// mapped operator that is absent on the limit cylinder, and
/// R2 = +-u_z on the walls, the flat-wall Neumann data that the curved
/// boundary imposes.
inline ResidualNorms residual_diagnostics(const MappedGrid& g, std::span<const double> u) {
    if (u.size() != g.size()) throw Error(ErrorKind::ShapeMismatch, "field does not match the mapped grid");
    ResidualNorms r;
    for (std::size_t i = 1; i + 1 < g.nx; ++i) {
        for (std::size_t j = 1; j + 1 < g.nz; ++j) {
            const auto c = coefficients(g, i, j);
            const auto d = interior_derivatives(g, u, i, j);
            const double R1 = c.a_xz * d.uxz + (c.a_zz - 1.0) * d.uzz + c.a_z * d.uz;
            r.R1_sup = std::max(r.R1_sup, std::abs(R1));
        }
        for (Wall wall : {Wall::Lower, Wall::Upper}) {
            const std::size_t j = wall == Wall::Lower ? 0 : g.nz - 1;
            const double ux = (u[g.idx(i + 1, j)] - u[g.idx(i - 1, j)]) / (2 * g.hx);
            r.R2_sup = std::max(r.R2_sup, std::abs(neumann_uz(g, i, wall, ux)));
        }
    }
    return r;
}

/// Largest deviation of the metric from the identity map among x-nodes with
/// x <= X, scaled by e^{-kappa X}.
inline double metric_envelope_ratio(const MappedGrid& g, double X, double kappa) {
    double dev = 0.0;
    for (std::size_t i = 0; i < g.nx && g.x(i) <= X; ++i)
        for (std::size_t j = 0; j < g.nz; ++j) {
            const std::size_t k = g.idx(i, j);
            dev = std::max({dev, std::abs(g.zx[k]), std::abs(g.zxx[k]), std::abs(g.zy[k] - 1.0)});
        }
    return dev * std::exp(-kappa * X);
}

}  // namespace frontlab
