#pragma once

// Reference computations that share no code with the library: power series
// for matrix exponentials, composite Simpson quadrature, the closed-form
// radial law of the zonal torus and integer-only Landau level arithmetic.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <numeric>

namespace oracle {

using Mat = std::array<double, 4>;  // row-major 2x2

inline Mat mul(const Mat& a, const Mat& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

/// exp(tY) for Y = [[a, b], [c, -a]] by scaling and squaring of a Taylor
/// series truncated at 40 terms.
inline Mat series_exp(double a, double b, double c, double t) {
    double norm = std::abs(a * t) + std::abs(b * t) + std::abs(c * t);
    int squarings = 0;
    while (norm > 0.25) {
        norm *= 0.5;
        ++squarings;
    }
    const double s = t / std::ldexp(1.0, squarings);
    const Mat y{a * s, b * s, c * s, -a * s};
    Mat term{1, 0, 0, 1}, sum{1, 0, 0, 1};
    for (int n = 1; n <= 40; ++n) {
        term = mul(term, y);
        for (auto& v : term) v /= n;
        for (int i = 0; i < 4; ++i) sum[i] += term[i];
    }
    for (int k = 0; k < squarings; ++k) sum = mul(sum, sum);
    return sum;
}

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

inline double bump(double r, double r0) {
    if (r >= r0) return 0.0;
    const double u = r / r0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

/// Liouville average of a radial base bump on a surface of area 4 pi:
/// (1 / 4 pi) int_0^r0 bump(r) 2 pi sinh r dr.
inline double bump_liouville_average(double r0) {
    const auto f = [r0](double r) { return bump(r, r0) * 2.0 * std::numbers::pi * std::sinh(r); };
    return simpson(f, 0.0, r0, 20000) / (4.0 * std::numbers::pi);
}

/// Radial law of d(i, exp(tY) i) for uniform t over one period, with
/// K = (B^2 + 2E) / (B^2 - 2E): cosh r = 1 + sin^2(w t) (K - 1).
struct ZonalRadialLaw {
    double K;
    explicit ZonalRadialLaw(double B, double E) : K((B * B + 2 * E) / (B * B - 2 * E)) {}

    double r_max() const { return std::acosh(K); }

    double cdf(double r) const {
        if (r <= 0) return 0.0;
        if (r >= r_max()) return 1.0;
        const double u = (std::cosh(r) - 1.0) / (K - 1.0);
        return 2.0 / std::numbers::pi * std::asin(std::sqrt(u));
    }

    double pdf(double r) const {
        const double u = (std::cosh(r) - 1.0) / (K - 1.0);
        return std::sinh(r) / ((K - 1.0) * std::numbers::pi * std::sqrt(u * (1.0 - u)));
    }

    double pdf_at_zero() const { return std::sqrt(2.0) / (std::numbers::pi * std::sqrt(K - 1.0)); }
};

/// Fraction of a uniform grid of n times over [0, period) whose orbit point
/// exp(tY) i lies within distance r of i, with exp from the series oracle.
inline double brute_force_radial_cdf(double B, double E, double period, double r, int n) {
    const double a = 0.5 * std::sqrt(2.0 * E), b = -0.5 * B, c = 0.5 * B;
    const double ch = std::cosh(r);
    int inside = 0;
    for (int j = 0; j < n; ++j) {
        const Mat g = series_exp(a, b, c, (j + 0.5) * period / n);
        // cosh d(i, g i) = (sum of squared entries) / 2
        const double cd = 0.5 * (g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
        if (cd <= ch) ++inside;
    }
    return static_cast<double>(inside) / n;
}

/// Integer fraction num/den in lowest terms, den > 0.
struct Frac {
    std::int64_t num, den;
    Frac(std::int64_t n, std::int64_t d) {
        if (d < 0) n = -n, d = -d;
        const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        num = n / (g ? g : 1);
        den = d / (g ? g : 1);
    }
    bool operator==(const Frac&) const = default;
};

/// lambda_{k,m} for B = p/q: (k p (2m + 1) - q m (m + 1)) / (2q).
inline Frac landau_level(std::int64_t k, std::int64_t m, std::int64_t p, std::int64_t q) {
    return Frac(k * p * (2 * m + 1) - q * m * (m + 1), 2 * q);
}

}  // namespace oracle
