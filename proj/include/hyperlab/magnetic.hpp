#pragma once

// Magnetic flow on the energy shell {p = E}, realized as right translation
// of frames by exp(t (sqrt(2E) X - B V)) followed by reduction into the
// Dirichlet domain.

#include "hyperlab/fuchsian.hpp"
#include "hyperlab/sl2.hpp"

#include <optional>

namespace hyperlab {

struct MagneticParams {
    double B = 1.0;
    double E = 0.0;
    int genus = 2;

    /// Throws std::invalid_argument for B <= 0, E < 0 or genus < 2.
    MagneticParams(double field, double energy, int g = 2);

    double critical_energy() const { return 0.5 * B * B; }

    /// (B^2 - 2E)^{-1/2} below E_c, (2E - B^2)^{-1/2} above; empty at E_c.
    std::optional<double> period_scale() const;

    /// 2 B (genus - 1) is an integer to 1e-12.
    bool quantized() const;
};

struct PhaseState {
    GroupElement frame;  // base point frame . i lies in the fundamental domain
    MagneticParams params;

    HalfPlanePoint base() const { return base_point(frame); }
};

/// Reduce `frame` and wrap it as a state.
PhaseState make_state(const GroupElement& frame, const MagneticParams& params);

/// Y = sqrt(2E) X - B V.
AlgebraElement generator(const MagneticParams& params);

ElementClass classify(const MagneticParams& params);

/// Longest single exp step used when composing long flows.
inline constexpr double kMaxFlowStep = 1.0;

/// Right translation by exp(tY), in steps of at most kMaxFlowStep with
/// reduction after each.
PhaseState flow(const PhaseState& state, double t);

/// Same as `flow` along an arbitrary generator.
GroupElement flow_frame(const GroupElement& frame, const AlgebraElement& y, double t);

/// frame * exp(theta V): rotation by theta in the fiber.
PhaseState fiber_rotation(const PhaseState& state, double theta);

/// Smallest t > 0 with exp(tY) = +-I; equals 2 pi T_E. Elliptic only.
double primitive_period(const MagneticParams& params);

/// sqrt(2 (E - E_c))_+.
double lyapunov_rate(const MagneticParams& params);

struct GrowthFit {
    double rate = 0.0;         // slope of log |Ad| against t on the tail
    double poly_degree = 0.0;  // coefficient of log t in the joint tail fit
    std::vector<double> times;
    std::vector<double> log_norms;
};

/// Growth of |Ad(exp(tY))| on a log-spaced grid over [1, t_max].
GrowthFit derivative_growth_fit(const MagneticParams& params, double t_max, int n_points);
GrowthFit derivative_growth_fit(const AlgebraElement& y, double t_max, int n_points);

struct ConjugacyReport {
    NormalForm normal;
    double flow_residual = 0.0;   // max_t |C exp(tY) C^-1 - exp(t s model)|_inf
    double scale_residual = 0.0;  // | |s| - 1/T_E |, zero for parabolic
    double residual() const { return flow_residual + scale_residual; }
};

ConjugacyReport conjugacy_check(const MagneticParams& params);

}  // namespace hyperlab
