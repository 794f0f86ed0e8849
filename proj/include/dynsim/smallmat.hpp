#pragma once
// Fixed-size dense vectors and square matrices with an SPD solver.
//
// Everything lives on the stack; the mass matrices this is built for are at
// most 4x4, state vectors at most 8 long.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>

#include "dynsim/error.hpp"

namespace dynsim {

template <std::size_t N>
struct Vec {
    static_assert(N >= 1);
    std::array<double, N> v{};

    static constexpr std::size_t size() noexcept { return N; }

    constexpr double& operator[](std::size_t i) noexcept { return v[i]; }
    constexpr double operator[](std::size_t i) const noexcept { return v[i]; }

    constexpr auto begin() noexcept { return v.begin(); }
    constexpr auto end() noexcept { return v.end(); }
    constexpr auto begin() const noexcept { return v.begin(); }
    constexpr auto end() const noexcept { return v.end(); }

    std::span<const double, N> span() const noexcept { return v; }

    static constexpr Vec zero() noexcept { return Vec{}; }

    constexpr Vec& operator+=(const Vec& o) noexcept {
        for (std::size_t i = 0; i < N; ++i) v[i] += o.v[i];
        return *this;
    }
    constexpr Vec& operator-=(const Vec& o) noexcept {
        for (std::size_t i = 0; i < N; ++i) v[i] -= o.v[i];
        return *this;
    }
    constexpr Vec& operator*=(double s) noexcept {
        for (auto& x : v) x *= s;
        return *this;
    }

    friend constexpr Vec operator+(Vec a, const Vec& b) noexcept { return a += b; }
    friend constexpr Vec operator-(Vec a, const Vec& b) noexcept { return a -= b; }
    friend constexpr Vec operator-(Vec a) noexcept { return a *= -1.0; }
    friend constexpr Vec operator*(Vec a, double s) noexcept { return a *= s; }
    friend constexpr Vec operator*(double s, Vec a) noexcept { return a *= s; }
    friend constexpr bool operator==(const Vec&, const Vec&) = default;
};

template <std::size_t N>
constexpr double dot(const Vec<N>& a, const Vec<N>& b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t N>
double norm_inf(const Vec<N>& a) noexcept {
    double m = 0.0;
    for (double x : a) m = std::max(m, std::abs(x));
    return m;
}

template <std::size_t N>
bool all_finite(const Vec<N>& a) noexcept {
    return std::all_of(a.begin(), a.end(), [](double x) { return std::isfinite(x); });
}

/// Square matrix, row-major, indexed as m(row, col).
template <std::size_t N>
struct Mat {
    static_assert(N >= 1 && N <= 4, "Mat is limited to 4x4");
    std::array<double, N * N> a{};

    static constexpr std::size_t rows() noexcept { return N; }

    constexpr double& operator()(std::size_t r, std::size_t c) noexcept { return a[r * N + c]; }
    constexpr double operator()(std::size_t r, std::size_t c) const noexcept {
        return a[r * N + c];
    }

    static constexpr Mat zero() noexcept { return Mat{}; }
    static constexpr Mat identity() noexcept {
        Mat m{};
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }
    static constexpr Mat diagonal(const Vec<N>& d) noexcept {
        Mat m{};
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    constexpr Mat& operator+=(const Mat& o) noexcept {
        for (std::size_t i = 0; i < N * N; ++i) a[i] += o.a[i];
        return *this;
    }
    constexpr Mat& operator-=(const Mat& o) noexcept {
        for (std::size_t i = 0; i < N * N; ++i) a[i] -= o.a[i];
        return *this;
    }
    constexpr Mat& operator*=(double s) noexcept {
        for (auto& x : a) x *= s;
        return *this;
    }

    friend constexpr Mat operator+(Mat x, const Mat& y) noexcept { return x += y; }
    friend constexpr Mat operator-(Mat x, const Mat& y) noexcept { return x -= y; }
    friend constexpr Mat operator*(Mat x, double s) noexcept { return x *= s; }
    friend constexpr Mat operator*(double s, Mat x) noexcept { return x *= s; }
    friend constexpr bool operator==(const Mat&, const Mat&) = default;
};

template <std::size_t N>
constexpr Mat<N> transpose(const Mat<N>& m) noexcept {
    Mat<N> t{};
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) t(c, r) = m(r, c);
    return t;
}

template <std::size_t N>
double max_abs(const Mat<N>& m) noexcept {
    double s = 0.0;
    for (double x : m.a) s = std::max(s, std::abs(x));
    return s;
}

/// y = A x, each row summed left to right.
template <std::size_t N>
constexpr Vec<N> mat_vec(const Mat<N>& A, const Vec<N>& x) noexcept {
    Vec<N> y{};
    for (std::size_t r = 0; r < N; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < N; ++c) s += A(r, c) * x[c];
        y[r] = s;
    }
    return y;
}

template <std::size_t N>
constexpr Mat<N> mat_mul(const Mat<N>& A, const Mat<N>& B) noexcept {
    Mat<N> C{};
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < N; ++k) s += A(r, k) * B(k, c);
            C(r, c) = s;
        }
    return C;
}

/// Relative tolerance for the symmetry precondition of cholesky_solve.
inline constexpr double kSymmetryTolerance = 1e-12;

/// Solves A x = b for symmetric positive-definite A.
///
/// A must be symmetric to kSymmetryTolerance relative to its largest entry;
/// it is then symmetrized as (A + A^T)/2 before factorization. Throws
/// NotSymmetric or NotPositiveDefinite (some pivot <= 0).
template <std::size_t N>
Vec<N> cholesky_solve(const Mat<N>& A, const Vec<N>& b) {
    const double scale = max_abs(A);
    Mat<N> L{};
    for (std::size_t r = 0; r < N; ++r) {
        for (std::size_t c = 0; c <= r; ++c) {
            const double upper = A(c, r);
            const double lower = A(r, c);
            if (std::abs(upper - lower) > kSymmetryTolerance * scale)
                throw NotSymmetric("cholesky_solve: matrix not symmetric at (" +
                                   std::to_string(r) + "," + std::to_string(c) + ")");
            L(r, c) = 0.5 * (upper + lower);
        }
    }

    // In-place lower factor: L L^T = sym(A).
    for (std::size_t j = 0; j < N; ++j) {
        double d = L(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
        if (!(d > 0.0))
            throw NotPositiveDefinite("cholesky_solve: non-positive pivot at index " +
                                      std::to_string(j));
        const double ljj = std::sqrt(d);
        L(j, j) = ljj;
        for (std::size_t i = j + 1; i < N; ++i) {
            double s = L(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
            L(i, j) = s / ljj;
        }
    }

    Vec<N> y{};
    for (std::size_t i = 0; i < N; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * y[k];
        y[i] = s / L(i, i);
    }
    Vec<N> x{};
    for (std::size_t ii = N; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < N; ++k) s -= L(k, ii) * x[k];
        x[ii] = s / L(ii, ii);
    }
    return x;
}

/// True when the Cholesky factorization of A succeeds.
template <std::size_t N>
bool is_positive_definite(const Mat<N>& A) {
    try {
        (void)cholesky_solve(A, Vec<N>{});
        return true;
    } catch (const NotPositiveDefinite&) {
        return false;
    }
}

}  // namespace dynsim
