#pragma once

// Landau levels of the constant-field magnetic Laplacian in exact rational
// arithmetic, and the finite diagonal model of the averaged operator
// A_k = k^{-1} sum_m m Pi_{k,m}.

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hyperlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parse "3/2", "-1/4", "2" or a finite decimal such as "0.7" exactly.
Rational parse_rational(std::string_view text);

/// "num/den" with den > 0 (den = 1 printed explicitly).
std::string format_rational(const Rational& q);

double to_double(const Rational& q);

/// 2 B (genus - 1) is an integer.
bool quantization_check(const Rational& B, int genus = 2);

/// N_k = floor(k B).
std::int64_t level_count(std::int64_t k, const Rational& B);

struct LandauLevel {
    std::int64_t k = 0;
    std::int64_t m = 0;
    Rational B;
    Rational lambda;
    std::int64_t level_count = 0;
};

/// lambda_{k,m} = k B (m + 1/2) - m (m + 1) / 2. Requires k >= 1,
/// 0 <= m < floor(kB) and the quantization condition.
Rational eigenvalue(std::int64_t k, std::int64_t m, const Rational& B, int genus = 2);
LandauLevel landau_level(std::int64_t k, std::int64_t m, const Rational& B, int genus = 2);

/// lambda_{k, N_k - 1} / k^2 exactly.
Rational scaled_top_level_exact(std::int64_t k, const Rational& B, int genus = 2);
double scaled_top_level(std::int64_t k, const Rational& B, int genus = 2);

/// beta(s) = B s - s^2 / 2 on [0, B].
double beta(double s, double B);

/// Inverse of beta on [0, B^2/2]: B - sqrt(B^2 - 2p).
double symbol_a(double p, double B);

/// k^{-2} lambda_{k,m} - [B (a + 1/(2k)) - a (a + 1/k) / 2] with a = m/k.
Rational weinstein_identity_residual(std::int64_t k, std::int64_t m, const Rational& B,
                                     int genus = 2);

/// Finite model of A_k: diagonal with entries level_j / k, where level_j are
/// non-negative integers listed with multiplicity.
struct WeinsteinModel {
    std::int64_t k = 1;
    std::vector<std::int64_t> levels;

    /// Levels 0..count-1 each with the given multiplicity.
    static WeinsteinModel consecutive(std::int64_t k, std::int64_t count, int multiplicity = 1);

    std::size_t dimension() const { return levels.size(); }
    std::vector<double> spectrum() const;
};

using Diagonal = std::vector<std::complex<double>>;

/// Discrete Fourier average (1/M) sum_j e^{-i m t_j} e^{i t_j k A} at
/// t_j = 2 pi j / M, which reproduces the spectral projector onto level m
/// exactly for M > max(levels, m).
Diagonal projector(const WeinsteinModel& model, std::int64_t m);

/// Number of nodes used by `projector`.
std::int64_t projector_nodes(const WeinsteinModel& model, std::int64_t m);

/// max_j |exp(2 pi i k lambda_j) - 1| over the model spectrum.
double circle_periodicity(const WeinsteinModel& model);

/// Same over an arbitrary real spectrum; a non-zero result flags spectrum
/// values outside k^{-1} Z.
double circle_periodicity(std::int64_t k, const std::vector<double>& spectrum);

}  // namespace hyperlab
