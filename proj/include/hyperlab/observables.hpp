#pragma once

// Gamma-invariant test functions on the frame bundle of the Bolza surface.

#include "hyperlab/fuchsian.hpp"
#include "hyperlab/magnetic.hpp"

#include "json.hpp"

#include <cstdint>
#include <vector>

namespace hyperlab {

/// exp(1 - 1/(1 - (r/r0)^2)) on r < r0, zero outside.
double bump_profile(double r, double r0);

inline constexpr double kMaxBumpRadius = 1.4;

class Observable {
public:
    /// Smooth bump of radius r0 about `center` (reduced into the domain on
    /// construction), times cos(fiber_mode * frame angle) when fiber_mode > 0.
    Observable(HalfPlanePoint center, double r0, int fiber_mode = 0);

    /// The constant function `value`.
    static Observable constant(double value);

    HalfPlanePoint center() const { return center_; }
    double r0() const { return r0_; }
    int fiber_mode() const { return fiber_mode_; }
    bool is_constant() const { return constant_; }

    /// Value at a frame; the frame is reduced first, so any lift works.
    double operator()(const GroupElement& frame) const;

    /// Value at a frame already reduced into the domain.
    double at_reduced(const GroupElement& frame) const;

private:
    Observable() = default;

    HalfPlanePoint center_{};
    double r0_ = 0.0;
    double cosh_r0_ = 1.0;
    int fiber_mode_ = 0;
    bool constant_ = false;
    double value_ = 0.0;
    // Images of the center under words of length <= 2, SoA for the kernels.
    std::vector<double> images_re_, images_im_;
};

double evaluate(const Observable& obs, const PhaseState& state);

struct MonteCarloEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

/// Mean over haar_sample(n, seed); shard-count independent.
MonteCarloEstimate liouville_average(const Observable& obs, std::int64_t n, std::uint64_t seed,
                                     int shards = 1);

void to_json(nlohmann::json& j, const Observable& obs);
Observable observable_from_json(const nlohmann::json& j);

}  // namespace hyperlab
