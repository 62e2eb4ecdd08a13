#pragma once

// The invariant torus swept by the closed magnetic orbits through one base
// point at energy E < E_c, its normalized Lebesgue measure, and the radial
// profile of the measure's projection to the surface.

#include "hyperlab/magnetic.hpp"
#include "hyperlab/observables.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace hyperlab {

class ZonalTorus {
public:
    /// Throws unless params are elliptic. The anchor frame must be based at i
    /// for the radial routines to measure distances from i.
    explicit ZonalTorus(const MagneticParams& params,
                        const GroupElement& anchor = GroupElement::identity());

    const MagneticParams& params() const { return params_; }
    const GroupElement& anchor() const { return anchor_; }
    double period() const { return period_; }
    const AlgebraElement& generator() const { return generator_; }

    /// anchor * exp(theta V) * exp(t Y) on the universal cover.
    GroupElement point(double theta, double t) const;

    /// The same point reduced into the fundamental domain.
    GroupElement reduced_point(double theta, double t) const;

private:
    MagneticParams params_;
    GroupElement anchor_;
    AlgebraElement generator_;
    double period_;
};

inline constexpr int kMinMomentGrid = 32;

using FrameFunction = std::function<double(const GroupElement&)>;

/// Product midpoint rule for the integral of f against
/// d theta dt / (2 pi t*) over [0, 2pi) x [0, t*), on reduced torus points.
double defect_moment(const ZonalTorus& torus, const FrameFunction& f, int grid_theta,
                     int grid_t);
double defect_moment(const ZonalTorus& torus, const Observable& obs, int grid_theta, int grid_t);

struct RadialHistogram {
    double bin_width = 0.005;
    std::vector<std::uint64_t> counts;
    std::uint64_t overflow = 0;  // samples beyond the last bin
    std::uint64_t total = 0;

    double r_mid(std::size_t b) const { return (static_cast<double>(b) + 0.5) * bin_width; }
    double pdf(std::size_t b) const;
    /// Fraction of samples accounted for (bins plus overflow); 1 for any
    /// non-empty histogram.
    double mass() const;
};

inline constexpr double kRadialBinWidth = 0.005;
inline constexpr std::int64_t kMinRadialSamples = 100000;

/// Largest base excursion d(i, exp(tY) i) of the orbit circle.
double max_excursion(const MagneticParams& params);

/// Bins needed to cover [0, max_excursion] at kRadialBinWidth.
int default_radial_bins(const MagneticParams& params);

/// Empirical pdf of r = d(i, base(point(theta, t))) for uniform (theta, t).
/// Sample k depends on (seed, k) only.
RadialHistogram radial_density(const ZonalTorus& torus, std::int64_t n, std::uint64_t seed,
                               int bins, int shards = 1);

struct BlowupFit {
    double q = 0.0;  // alpha(r) ~ c r^{-q}
    double c = 0.0;
    int bins_used = 0;
    double window = 0.1;
};

inline constexpr double kBlowupWindow = 0.1;

/// Fit alpha(r) = pdf(r) / (2 pi sinh r) to c r^{-q} on bins with r_mid <= 0.1.
BlowupFit blowup_fit(const RadialHistogram& hist, double window = kBlowupWindow);

/// Candidate normalizations of the near-anchor density constant.
struct DensityConstants {
    double fitted = 0.0;
    double from_area_formula = 0.0;  // 1 / (4 pi T_E E)
    double from_orbit_speed = 0.0;   // 2 / (sqrt(2E) t*) / (2 pi)
    double ratio = 0.0;              // from_area_formula / from_orbit_speed
};

DensityConstants density_constants(const MagneticParams& params, const BlowupFit& fit);

}  // namespace hyperlab
