#include "doctest.h"
#include "oracles.hpp"

#include "hyperlab/zonal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace hyperlab;
using std::numbers::pi;

namespace {

RadialHistogram synthetic(double (*shape)(double), int bins) {
    RadialHistogram h;
    h.counts.resize(static_cast<std::size_t>(bins));
    for (int b = 0; b < bins; ++b) {
        h.counts[static_cast<std::size_t>(b)] =
            static_cast<std::uint64_t>(std::llround(1e8 * shape(h.r_mid(static_cast<std::size_t>(b)))));
        h.total += h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

double empirical_cdf(const RadialHistogram& h, double r) {
    // r on a bin edge.
    const auto edge = static_cast<std::size_t>(std::llround(r / h.bin_width));
    std::uint64_t s = 0;
    for (std::size_t b = 0; b < edge && b < h.counts.size(); ++b) s += h.counts[b];
    return static_cast<double>(s) / static_cast<double>(h.total);
}

}  // namespace

TEST_SUITE("zonal") {

TEST_CASE("torus geometry") {
    const MagneticParams p(2, 1);
    const ZonalTorus torus(p);
    CHECK(std::abs(torus.period() - primitive_period(p)) < 1e-15);
    CHECK_THROWS_AS(ZonalTorus(MagneticParams(2, 2)), std::invalid_argument);
    CHECK_THROWS_AS(ZonalTorus(MagneticParams(2, 3)), std::invalid_argument);

    for (double theta : {0.0, 0.7, 2.0, 5.5}) {
        const HalfPlanePoint z = base_point(torus.point(theta, 0.0));
        CHECK(hyp_distance(z, kBasePoint) < 1e-14);
        CHECK(projective_distance(torus.point(theta, torus.period()), torus.point(theta, 0.0)) < 1e-9);
        const double dt = 1e-6;
        const double speed =
            hyp_distance(base_point(torus.point(theta, dt)), base_point(torus.point(theta, 0))) / dt;
        CHECK(std::abs(speed - std::sqrt(2.0)) < 1e-5);
        CHECK(in_domain(base_point(torus.reduced_point(theta, 1.9))));
    }
}

TEST_CASE("defect moment") {
    const MagneticParams p(2, 1);
    const ZonalTorus torus(p);
    CHECK(defect_moment(torus, [](const GroupElement&) { return 1.0; }, 32, 32) == 1.0);
    CHECK(defect_moment(torus, Observable::constant(1.0), 64, 64) == 1.0);
    CHECK_THROWS_AS(defect_moment(torus, Observable::constant(1.0), 16, 64), std::invalid_argument);

    const Observable obs({0.1, 1.1}, 1.2);
    const double m = defect_moment(torus, obs, 128, 256);
    CHECK(m > 0.0);
    CHECK(m < 1.0);

    // The moment does not depend on which frame over i anchors the torus.
    for (double phi : {0.3, 1.7, 4.0}) {
        const ZonalTorus rotated(p, exp_algebra(kV, phi));
        CHECK(std::abs(defect_moment(rotated, obs, 128, 256) - m) < 1e-10);
    }

    // Invariance under the flow.
    const AlgebraElement y = generator(p);
    for (double s : {0.1, 1.0, 7.0}) {
        const double ms = defect_moment(
            torus, [&](const GroupElement& g) { return obs(g * exp_algebra(y, s)); }, 128, 256);
        CHECK(std::abs(ms - m) < 1e-6);
    }

    // A bump that the torus never reaches.
    const ZonalTorus small(MagneticParams(2, 0.1));
    CHECK(max_excursion(small.params()) < 0.5);
    const HalfPlanePoint far = base_point(exp_algebra(kV, 0.4) * exp_algebra(kX, 1.8));
    REQUIRE(in_domain(far));
    CHECK(defect_moment(small, Observable(far, 0.5), 64, 64) == 0.0);
}

TEST_CASE("radial density") {
    const MagneticParams p(2, 1);
    const ZonalTorus torus(p);
    const int bins = default_radial_bins(p);
    CHECK(std::abs(max_excursion(p) - std::acosh(3.0)) < 1e-15);
    CHECK(bins * kRadialBinWidth >= max_excursion(p));

    const RadialHistogram h = radial_density(torus, 200000, 3, bins);
    CHECK(h.total == 200000);
    CHECK(h.overflow == 0);
    CHECK(std::abs(h.mass() - 1.0) < 1e-15);

    const RadialHistogram h4 = radial_density(torus, 200000, 3, bins, 4);
    CHECK(h4.counts == h.counts);
    CHECK(radial_density(torus, 200000, 3, bins, 16).counts == h.counts);

    const oracle::ZonalRadialLaw law(2, 1);
    CHECK(std::abs(law.pdf_at_zero() - 1 / pi) < 1e-15);
    for (double r : {0.1, 0.5, 1.0, 1.5, 1.75}) {
        const double want = law.cdf(r);
        CHECK(std::abs(empirical_cdf(h, r) - want) < 5e-3);
        CHECK(std::abs(oracle::brute_force_radial_cdf(2, 1, torus.period(), r, 20000) - want) < 1e-3);
    }

    // Truncated bins push the rest into overflow without losing mass.
    const RadialHistogram cut = radial_density(torus, 100000, 3, 50);
    CHECK(cut.overflow > 0);
    CHECK(std::abs(cut.mass() - 1.0) < 1e-15);

    CHECK_THROWS_AS(radial_density(torus, 1000, 3, bins), std::invalid_argument);
    CHECK_THROWS_AS(radial_density(torus, 100000, 3, 0), std::invalid_argument);
}

TEST_CASE("blowup fit on synthetic histograms") {
    const RadialHistogram flat = synthetic([](double) { return 1.0; }, 40);
    const BlowupFit f = blowup_fit(flat);
    CHECK(std::abs(f.q - 1.0) < 2e-3);
    CHECK(f.bins_used == 20);

    const RadialHistogram linear = synthetic([](double r) { return r; }, 40);
    CHECK(std::abs(blowup_fit(linear).q) < 2e-3);

    RadialHistogram holes = flat;
    holes.counts[3] = 0;
    CHECK_THROWS_AS(blowup_fit(holes), std::invalid_argument);
    CHECK_THROWS_AS(blowup_fit(synthetic([](double) { return 1.0; }, 5)), std::invalid_argument);
}

TEST_CASE("density constants") {
    const MagneticParams p(2, 1);
    BlowupFit fit;
    fit.c = 0.25;
    const DensityConstants c = density_constants(p, fit);
    CHECK(c.fitted == 0.25);
    CHECK(std::abs(c.from_area_formula - std::sqrt(2.0) / (4 * pi)) < 1e-15);
    CHECK(std::abs(c.from_orbit_speed - 1 / (2 * pi * pi)) < 1e-15);
    CHECK(std::abs(c.ratio - c.from_area_formula / c.from_orbit_speed) < 1e-15);
    CHECK_THROWS_AS(density_constants(MagneticParams(2, 0), fit), std::invalid_argument);
}

}  // TEST_SUITE
