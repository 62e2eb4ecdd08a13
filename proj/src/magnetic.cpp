#include "hyperlab/magnetic.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hyperlab {

MagneticParams::MagneticParams(double field, double energy, int g) : B(field), E(energy), genus(g) {
    if (!(field > 0) || !std::isfinite(field))
        throw std::invalid_argument("MagneticParams: B must be a positive finite number");
    if (!(energy >= 0) || !std::isfinite(energy))
        throw std::invalid_argument("MagneticParams: E must be a non-negative finite number");
    if (g < 2) throw std::invalid_argument("MagneticParams: genus must be >= 2");
}

std::optional<double> MagneticParams::period_scale() const {
    const double gap = B * B - 2.0 * E;
    if (classify(*this) == ElementClass::parabolic) return std::nullopt;
    return 1.0 / std::sqrt(std::abs(gap));
}

bool MagneticParams::quantized() const {
    const double v = 2.0 * B * (genus - 1);
    return std::abs(v - std::round(v)) <= 1e-12;
}

PhaseState make_state(const GroupElement& frame, const MagneticParams& params) {
    return {reduce_frame(frame.renormalized()).frame, params};
}

AlgebraElement generator(const MagneticParams& params) {
    return std::sqrt(2.0 * params.E) * kX - params.B * kV;
}

ElementClass classify(const MagneticParams& params) { return classify(generator(params)); }

GroupElement flow_frame(const GroupElement& frame, const AlgebraElement& y, double t) {
    if (t == 0.0) return frame;
    const auto steps = static_cast<long>(std::ceil(std::abs(t) / kMaxFlowStep));
    const GroupElement step = exp_algebra(y, t / static_cast<double>(steps));
    GroupElement g = frame;
    for (long k = 0; k < steps; ++k) g = reduce_frame((g * step).renormalized()).frame;
    return g;
}

PhaseState flow(const PhaseState& state, double t) {
    return {flow_frame(state.frame, generator(state.params), t), state.params};
}

PhaseState fiber_rotation(const PhaseState& state, double theta) {
    return {(state.frame * exp_algebra(kV, theta)).renormalized(), state.params};
}

double primitive_period(const MagneticParams& params) {
    if (classify(params) != ElementClass::elliptic)
        throw std::invalid_argument("primitive_period: parameters are not in the elliptic regime");
    // exp(tY) = cos(wt) I + sin(wt)/w Y first equals -I at w t = pi.
    return std::numbers::pi / std::sqrt(det(generator(params)));
}

double lyapunov_rate(const MagneticParams& params) {
    return std::sqrt(2.0 * std::max(0.0, params.E - params.critical_energy()));
}

namespace {

// log |Ad(exp(tY))|_2 with the exponential factor pulled out analytically so
// that hyperbolic generators do not overflow at long times.
double log_adjoint_norm(const AlgebraElement& y, double t) {
    const double d = det(y);
    double c = 1.0, s = t, log_scale = 0.0;
    if (std::abs(d) < kParabolicThreshold) {
    } else if (d > 0) {
        const double w = std::sqrt(d);
        c = std::cos(w * t);
        s = std::sin(w * t) / w;
    } else {
        const double rho = std::sqrt(-d), x = rho * std::abs(t);
        const double decay = std::exp(-2.0 * x);
        c = 0.5 * (1.0 + decay);
        s = std::copysign(0.5 * (1.0 - decay) / rho, t);
        log_scale = 2.0 * x;  // Ad is quadratic in the group element
    }
    const GroupElement g{c + s * y.a11, s * y.a12, s * y.a21, c - s * y.a11};
    const GroupElement adj{g.m22, -g.m12, -g.m21, g.m11};
    Eigen::Matrix3d m;
    const AlgebraElement basis[3] = {kX, kV, kUplus};
    for (int j = 0; j < 3; ++j) {
        const GroupElement b{basis[j].a11, basis[j].a12, basis[j].a21, -basis[j].a11};
        const GroupElement r = g * b * adj;
        const auto col = basis_coordinates({0.5 * (r.m11 - r.m22), r.m12, r.m21});
        for (int i = 0; i < 3; ++i) m(i, j) = col[i];
    }
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m);
    return std::log(svd.singularValues()(0)) + log_scale;
}

}  // namespace

GrowthFit derivative_growth_fit(const AlgebraElement& y, double t_max, int n_points) {
    if (!(t_max >= 10.0)) throw std::invalid_argument("derivative_growth_fit: t_max must be >= 10");
    if (n_points < 8)
        throw std::invalid_argument("derivative_growth_fit: need at least 8 grid points");
    GrowthFit fit;
    const double lmax = std::log(t_max);
    for (int k = 0; k < n_points; ++k) {
        const double t = std::exp(lmax * k / (n_points - 1));
        fit.times.push_back(t);
        fit.log_norms.push_back(log_adjoint_norm(y, t));
    }
    // Tail window: last half of the grid.
    const int first = n_points / 2;
    const int m = n_points - first;
    if (m < 4) throw std::invalid_argument("derivative_growth_fit: degenerate fit");

    Eigen::VectorXd rhs(m), t(m), lt(m);
    for (int k = 0; k < m; ++k) {
        rhs(k) = fit.log_norms[first + k];
        t(k) = fit.times[first + k];
        lt(k) = std::log(t(k));
    }
    Eigen::MatrixXd a1(m, 2);
    a1.col(0).setOnes();
    a1.col(1) = t;
    fit.rate = a1.colPivHouseholderQr().solve(rhs)(1);

    Eigen::MatrixXd a2(m, 3);
    a2.col(0).setOnes();
    a2.col(1) = t;
    a2.col(2) = lt;
    fit.poly_degree = a2.colPivHouseholderQr().solve(rhs)(2);
    return fit;
}

GrowthFit derivative_growth_fit(const MagneticParams& params, double t_max, int n_points) {
    return derivative_growth_fit(generator(params), t_max, n_points);
}

ConjugacyReport conjugacy_check(const MagneticParams& params) {
    const AlgebraElement y = generator(params);
    ConjugacyReport rep;
    rep.normal = normal_form(y);
    const GroupElement& c = rep.normal.conjugator;
    const GroupElement ci = c.inverse();
    const AlgebraElement model = rep.normal.scale * rep.normal.model();
    for (int k = -10; k <= 10; ++k) {
        const double t = 0.5 * k;
        const GroupElement lhs = c * exp_algebra(y, t) * ci;
        rep.flow_residual = std::max(rep.flow_residual, max_abs_diff(lhs, exp_algebra(model, t)));
    }
    if (const auto te = params.period_scale(); te && rep.normal.cls != ElementClass::parabolic)
        rep.scale_residual = std::abs(std::abs(rep.normal.scale) - 1.0 / *te);
    return rep;
}

}  // namespace hyperlab
