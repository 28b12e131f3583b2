#pragma once

#include "frontlab/core/error.hpp"
#include "frontlab/core/interpolation.hpp"
#include "frontlab/spectral.hpp"
#include "frontlab/wave.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace frontlab {

/// Field sampled on a uniform grid x_i = x0 + i h.
struct UniformField {
    double x0 = 0.0;
    double h = 1.0;
    std::span<const double> u;

    double x_max() const { return x0 + double(u.size() - 1) * h; }

    /// Six-point interpolation, constant continuation beyond the ends.
    double at(double x) const {
        if (x <= x0) return u.front();
        if (x >= x_max()) return u.back();
        return lagrange_uniform(u, x0, h, x);
    }
};

struct TrackResult {
    double chi = 0.0;
    std::vector<double> u_frame;  ///< state resampled on the wave grid
    std::vector<double> v;        ///< u_frame - phi(. + chi)
    double pairing = 0.0;         ///< <e*, v> after the solve
    int iterations = 0;
};

/// Resamples u into the frame xi = x - shift (shift = c t - M for the
/// translated problem).
inline std::vector<double> resample_to_frame(const UniformField& field, const ProjectionContext& ctx, double shift) {
    const auto& xi = ctx.xi();
    std::vector<double> out(xi.size());
    for (std::size_t j = 0; j < xi.size(); ++j) out[j] = field.at(xi[j] + shift);
    return out;
}

/// Solves <e*, u_frame - phi(. + chi)> = 0 for chi near chi_prev by Newton
/// safeguarded with bisection on [chi_prev - 1, chi_prev + 1].
inline TrackResult track_front_frame(std::vector<double> u_frame, const ProjectionContext& ctx,
                                     const WaveInterpolant& wave, double chi_prev, double eps1 = 0.1) {
    const auto& xi = ctx.xi();
    const std::size_t n = xi.size();
    if (u_frame.size() != n) throw Error(ErrorKind::ShapeMismatch, "frame state does not match the wave grid");

    const double target = pair_e_star(ctx, u_frame);
    auto G = [&](double chi, double* slope) {
        double acc = 0.0, dacc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const auto s = wave.sample(xi[j] + chi);
            const double w = ctx.quad[j] * ctx.weight[j];
            acc += w * s.value;
            dacc += w * s.slope;
        }
        if (slope) *slope = -dacc / ctx.Lambda;
        return target - acc / ctx.Lambda;
    };

    double lo = chi_prev - 1.0, hi = chi_prev + 1.0;
    double glo = G(lo, nullptr), ghi = G(hi, nullptr);
    if (glo * ghi > 0.0)
        throw Error(ErrorKind::TrackingLost, "no phase root within distance 1 of " + std::to_string(chi_prev));

    TrackResult res;
    double chi = chi_prev;
    double slope = 0.0;
    double g = G(chi, &slope);
    for (int it = 0; it < 100; ++it) {
        res.iterations = it + 1;
        if (std::abs(g) <= 1e-15 || hi - lo <= 1e-14) break;
        if ((g > 0.0) == (glo > 0.0)) {
            lo = chi;
            glo = g;
        } else {
            hi = chi;
            ghi = g;
        }
        double next = slope != 0.0 ? chi - g / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        const double gnext = G(next, &slope);
        if (std::abs(gnext) > 0.5 * std::abs(g) && std::abs(next - chi) > 1e-12) {
            // Poor progress: take a bisection step instead.
            const double mid = 0.5 * (lo + hi);
            chi = mid;
            g = G(chi, &slope);
        } else {
            chi = next;
            g = gnext;
        }
    }

    res.chi = chi;
    res.v.resize(n);
    for (std::size_t j = 0; j < n; ++j) res.v[j] = u_frame[j] - wave.value(xi[j] + chi);
    res.u_frame = std::move(u_frame);
    res.pairing = pair_e_star(ctx, res.v);
    const double vmax = max_abs(res.v);
    if (vmax > eps1)
        throw Error(ErrorKind::TrackingLost,
                    "state is " + std::to_string(vmax) + " away from the nearest translate (eps1 = " +
                        std::to_string(eps1) + ")");
    return res;
}

/// Tracks a field on the simulation grid at time t. `offset` is the frame
/// translation M of the problem started from phi(x + M).
inline TrackResult track_front(const UniformField& field, const ProjectionContext& ctx, const WaveInterpolant& wave,
                               double t, double chi_prev, double offset = 0.0, double eps1 = 0.1) {
    return track_front_frame(resample_to_frame(field, ctx, ctx.c() * t - offset), ctx, wave, chi_prev, eps1);
}

/// ||e^{c xi/2} v||_{L^2} by the trapezoid rule on the wave grid.
inline double w_energy(const ProjectionContext& ctx, std::span<const double> v) {
    detail::check_shape(ctx, v);
    const auto& xi = ctx.xi();
    const auto w = quadrature_weights(v.size(), ctx.h(), Quadrature::Trapezoid);
    double acc = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) acc += w[j] * std::exp(ctx.c() * xi[j]) * v[j] * v[j];
    return std::sqrt(acc);
}

struct TrackedState {
    double t = 0.0;
    double chi = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> v;
    double sup_err = 0.0;
    double w_l2 = std::numeric_limits<double>::quiet_NaN();
    bool tracked = false;
};

struct KernelOdeSample {
    double t = 0.0;
    double chi_dot = 0.0;  ///< centered difference of the tracked phase
    double rhs = 0.0;      ///< <e*, R> + <e*, r (f'(phi) v + f(phi_chi))> (+ forcing)
    double residual = 0.0;
};

/// r evaluated in the moving frame: (xi, t) -> r(xi + c t - offset).
using FrameRate = std::function<double(double xi, double t)>;
/// Optional forcing added to the equation for v, as a grid function of time.
using FrameForcing = std::function<std::vector<double>(double t)>;

/// Residual of the phase equation
///   chi' = <e*, R> + <e*, r (f'(phi) v + f(phi_chi))>,
///   R = (1 + r)[f(phi_chi + v) - f(phi_chi) - f'(phi) v] - chi' (phi'_chi - phi'),
/// at every interior tracked snapshot.
inline std::vector<KernelOdeSample> kernel_ode_residual(const std::vector<TrackedState>& states,
                                                        const ProjectionContext& ctx, const WaveInterpolant& wave,
                                                        const FrameRate& rate, const FrameForcing& forcing = {}) {
    const auto& p = *ctx.profile;
    const auto& nl = p.nonlinearity;
    const auto& xi = ctx.xi();
    const std::size_t n = xi.size();
    std::vector<KernelOdeSample> out;
    for (std::size_t k = 1; k + 1 < states.size(); ++k) {
        const auto& a = states[k - 1];
        const auto& s = states[k];
        const auto& b = states[k + 1];
        if (!a.tracked || !s.tracked || !b.tracked) continue;
        const double h1 = s.t - a.t, h2 = b.t - s.t;
        const double chi_dot =
            (-h2 / (h1 * (h1 + h2))) * a.chi + ((h2 - h1) / (h1 * h2)) * s.chi + (h1 / (h2 * (h1 + h2))) * b.chi;

        std::vector<double> integrand(n);
        for (std::size_t j = 0; j < n; ++j) {
            const auto shifted = wave.sample(xi[j] + s.chi);
            const double phi = p.phi[j];
            const double v = s.v[j];
            const double r = rate ? rate(xi[j], s.t) : 0.0;
            const double fprime = nl.f_prime(phi);
            const double R = (1.0 + r) * (nl.f(shifted.value + v) - nl.f(shifted.value) - fprime * v) -
                             chi_dot * (shifted.slope - p.phi_prime[j]);
            integrand[j] = R + r * (fprime * v + nl.f(shifted.value));
        }
        if (forcing) {
            const auto extra = forcing(s.t);
            for (std::size_t j = 0; j < n; ++j) integrand[j] += extra[j];
        }
        KernelOdeSample sample;
        sample.t = s.t;
        sample.chi_dot = chi_dot;
        sample.rhs = pair_e_star(ctx, integrand);
        sample.residual = chi_dot - sample.rhs;
        out.push_back(sample);
    }
    return out;
}

}  // namespace frontlab
