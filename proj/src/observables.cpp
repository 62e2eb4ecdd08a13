#include "hyperlab/observables.hpp"

#include "hyperlab/parallel.hpp"
#include "hyperlab/simd/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperlab {

double bump_profile(double r, double r0) {
    if (!(r0 > 0)) throw std::invalid_argument("bump_profile: r0 must be positive");
    const double x = r / r0;
    if (!(std::abs(x) < 1.0)) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

Observable::Observable(HalfPlanePoint center, double r0, int fiber_mode) {
    if (!(center.im > 0)) throw std::invalid_argument("Observable: center must satisfy Im > 0");
    if (!(r0 > 0 && r0 <= kMaxBumpRadius))
        throw std::invalid_argument("Observable: r0 must lie in (0, 1.4]");
    if (fiber_mode < 0) throw std::invalid_argument("Observable: fiber_mode must be >= 0");
    center_ = reduce(center).point;
    r0_ = r0;
    cosh_r0_ = std::cosh(r0);
    fiber_mode_ = fiber_mode;
    for (const auto& w : bolza().ball2.words) {
        const HalfPlanePoint p = mobius(w, center_);
        images_re_.push_back(p.re);
        images_im_.push_back(p.im);
    }
}

Observable Observable::constant(double value) {
    Observable o;
    o.constant_ = true;
    o.value_ = value;
    return o;
}

double Observable::at_reduced(const GroupElement& frame) const {
    if (constant_) return value_;
    const HalfPlanePoint z = base_point(frame);
    const double c =
        simd::active().min_cosh_distance(z, images_re_.data(), images_im_.data(), images_re_.size());
    if (c >= cosh_r0_) return 0.0;
    const double q = c - 1.0;
    const double r = std::log1p(q + std::sqrt(q * (q + 2.0)));
    double v = bump_profile(r, r0_);
    // Angle from the upward vertical at the reduced base point.
    if (fiber_mode_ > 0) v *= std::cos(fiber_mode_ * frame_angle(frame));
    return v;
}

double Observable::operator()(const GroupElement& frame) const {
    if (constant_) return value_;
    return at_reduced(reduce_frame(frame).frame);
}

double evaluate(const Observable& obs, const PhaseState& state) { return obs(state.frame); }

MonteCarloEstimate liouville_average(const Observable& obs, std::int64_t n, std::uint64_t seed,
                                     int shards) {
    if (n < 100) throw std::invalid_argument("liouville_average: n must be >= 100");
    const auto frames = haar_sample(n, seed, shards);
    std::vector<double> values(frames.size());
    for_shards(frames.size(), shards, [&](int, std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) values[k] = obs.at_reduced(frames[k]);
    });
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double var = values.size() > 1 ? ss / static_cast<double>(values.size() - 1) : 0.0;
    return {mean, std::sqrt(var / static_cast<double>(values.size()))};
}

void to_json(nlohmann::json& j, const Observable& obs) {
    if (obs.is_constant()) {
        j = nlohmann::json{{"constant", obs(GroupElement::identity())}};
        return;
    }
    j = nlohmann::json{{"center_re", obs.center().re},
                       {"center_im", obs.center().im},
                       {"r0", obs.r0()},
                       {"fiber_mode", obs.fiber_mode()}};
}

Observable observable_from_json(const nlohmann::json& j) {
    if (j.contains("constant")) return Observable::constant(j.at("constant").get<double>());
    return Observable({j.at("center_re").get<double>(), j.at("center_im").get<double>()},
                      j.at("r0").get<double>(), j.value("fiber_mode", 0));
}

}  // namespace hyperlab
