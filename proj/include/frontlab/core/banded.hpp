#pragma once

#include "frontlab/core/error.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace frontlab {

/// Square band matrix with `lower` sub- and `upper` super-diagonals, stored
/// row-wise: entry (i, j) lives at row i, column offset j - i + lower.
class BandMatrix {
public:
    BandMatrix() = default;
    BandMatrix(std::size_t n, std::size_t lower, std::size_t upper)
        : n_(n), kl_(lower), ku_(upper), data_(n * (lower + upper + 1), 0.0) {}

    std::size_t size() const noexcept { return n_; }
    std::size_t lower() const noexcept { return kl_; }
    std::size_t upper() const noexcept { return ku_; }

    bool in_band(std::size_t i, std::size_t j) const noexcept {
        return j + kl_ >= i && j <= i + ku_;
    }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * width() + (j + kl_ - i)]; }
    double operator()(std::size_t i, std::size_t j) const {
        return in_band(i, j) ? data_[i * width() + (j + kl_ - i)] : 0.0;
    }

    void multiply(std::span<const double> x, std::span<double> y) const {
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j0 = i >= kl_ ? i - kl_ : 0;
            const std::size_t j1 = std::min(n_ - 1, i + ku_);
            double acc = 0.0;
            for (std::size_t j = j0; j <= j1; ++j) acc += (*this)(i, j) * x[j];
            y[i] = acc;
        }
    }

private:
    friend class BandLU;
    std::size_t width() const noexcept { return kl_ + ku_ + 1; }

    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::vector<double> data_;
};

/// LU factorization of a band matrix without pivoting. Intended for the
/// diagonally dominant systems produced by implicit diffusion steps; a
/// vanishing pivot is reported instead of silently producing garbage.
class BandLU {
public:
    BandLU() = default;
    explicit BandLU(BandMatrix a) : lu_(std::move(a)) { factor(); }

    std::size_t size() const noexcept { return lu_.size(); }

    void solve_in_place(std::span<double> b) const {
        const std::size_t n = lu_.size();
        const std::size_t kl = lu_.lower();
        const std::size_t ku = lu_.upper();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j0 = i >= kl ? i - kl : 0;
            double acc = b[i];
            for (std::size_t j = j0; j < i; ++j) acc -= lu_(i, j) * b[j];
            b[i] = acc;
        }
        for (std::size_t ii = n; ii-- > 0;) {
            const std::size_t j1 = std::min(n - 1, ii + ku);
            double acc = b[ii];
            for (std::size_t j = ii + 1; j <= j1; ++j) acc -= lu_(ii, j) * b[j];
            b[ii] = acc / lu_(ii, ii);
        }
    }

private:
    void factor() {
        const std::size_t n = lu_.size();
        const std::size_t kl = lu_.lower();
        const std::size_t ku = lu_.upper();
        for (std::size_t k = 0; k < n; ++k) {
            const double pivot = lu_(k, k);
            if (!(std::abs(pivot) > 1e-300))
                throw Error(ErrorKind::NoConvergence, "band LU hit a zero pivot");
            const std::size_t i1 = std::min(n - 1, k + kl);
            const std::size_t j1 = std::min(n - 1, k + ku);
            for (std::size_t i = k + 1; i <= i1; ++i) {
                const double m = lu_(i, k) / pivot;
                lu_(i, k) = m;
                for (std::size_t j = k + 1; j <= j1; ++j) lu_(i, j) -= m * lu_(k, j);
            }
        }
    }

    BandMatrix lu_;
};

/// Symmetric tridiagonal matrix: `diag` has n entries, `off` has n - 1.
struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off;

    std::size_t size() const noexcept { return diag.size(); }

    void multiply(std::span<const double> x, std::span<double> y) const {
        const std::size_t n = diag.size();
        for (std::size_t i = 0; i < n; ++i) {
            double acc = diag[i] * x[i];
            if (i > 0) acc += off[i - 1] * x[i - 1];
            if (i + 1 < n) acc += off[i] * x[i + 1];
            y[i] = acc;
        }
    }
};

/// Solves a general tridiagonal system (sub, diag, super) in place (Thomas).
inline void solve_tridiagonal(std::span<const double> sub, std::span<const double> diag,
                              std::span<const double> super, std::span<double> rhs) {
    const std::size_t n = diag.size();
    std::vector<double> c(n, 0.0);
    double denom = diag[0];
    if (denom == 0.0) throw Error(ErrorKind::NoConvergence, "tridiagonal solve hit a zero pivot");
    c[0] = n > 1 ? super[0] / denom : 0.0;
    rhs[0] /= denom;
    for (std::size_t i = 1; i < n; ++i) {
        denom = diag[i] - sub[i - 1] * c[i - 1];
        if (denom == 0.0) throw Error(ErrorKind::NoConvergence, "tridiagonal solve hit a zero pivot");
        if (i + 1 < n) c[i] = super[i] / denom;
        rhs[i] = (rhs[i] - sub[i - 1] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
}

}  // namespace frontlab
