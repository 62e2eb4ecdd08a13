#pragma once

// Birkhoff averages along one-parameter subgroups and equidistribution
// error tables over increasing time horizons.

#include "hyperlab/observables.hpp"
#include "hyperlab/sl2.hpp"

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyperlab {

inline constexpr double kDefaultBirkhoffStep = 0.01;

/// Midpoint-rule (1/T) int_0^T obs(frame exp(tY)) dt with step <= dt.
double birkhoff(const Observable& obs, const GroupElement& frame, const AlgebraElement& y,
                double T, double dt = kDefaultBirkhoffStep);

/// Birkhoff averages of every frame at every horizon, result[state][horizon].
/// Horizons sharing the same midpoint step are computed in one pass per orbit.
std::vector<std::vector<double>> birkhoff_table(const Observable& obs,
                                                std::span<const GroupElement> frames,
                                                const AlgebraElement& y,
                                                std::span<const double> horizons, double dt,
                                                int shards = 1);

struct DecayTable {
    std::vector<double> horizons;
    std::vector<double> sup_errors;
    double reference = 0.0;  // Liouville average the errors are measured against
    nlohmann::json metadata = nlohmann::json::object();
};

/// e_j = max over states |birkhoff(T_j) - reference|; horizons are sorted.
DecayTable equidistribution_scan(const Observable& obs, std::span<const GroupElement> states,
                                 const AlgebraElement& y, std::vector<double> horizons,
                                 double reference, double dt = kDefaultBirkhoffStep,
                                 int shards = 1);

struct ThetaFit {
    double theta = 0.0;
    double r_squared = 0.0;
    int rows_used = 0;
};

/// A row with zero error: the average converged exactly, no rate to fit.
class ExactConvergence : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kFitMinHorizon = 10.0;

/// theta = -slope of log e_j against log T_j over rows with T_j >= 10.
ThetaFit decay_fit(const DecayTable& table);

/// CSV with header "T,sup_error", LF endings.
void write_csv(std::ostream& os, const DecayTable& table);
DecayTable read_decay_csv(std::istream& is);

}  // namespace hyperlab
