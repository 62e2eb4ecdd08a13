#include "doctest.h"

#include "hyperlab/ergodic.hpp"
#include "hyperlab/magnetic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace hyperlab;

namespace {

DecayTable synthetic(std::vector<double> T, std::vector<double> e) {
    DecayTable t;
    t.horizons = std::move(T);
    t.sup_errors = std::move(e);
    return t;
}

}  // namespace

TEST_SUITE("ergodic") {

TEST_CASE("constant observables average exactly") {
    const Observable c = Observable::constant(0.75);
    const GroupElement g = haar_sample(1, 2).front();
    for (double T : {0.05, 1.0, 33.3, 1000.0}) CHECK(birkhoff(c, g, kUplus, T) == 0.75);
}

TEST_CASE("argument validation") {
    const Observable obs(kBasePoint, 1.0);
    const GroupElement g;
    CHECK_THROWS_AS(birkhoff(obs, g, kUplus, 10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(birkhoff(obs, g, kUplus, 10, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(birkhoff(obs, g, kUplus, 0.001, 0.01), std::invalid_argument);
}

TEST_CASE("closed orbits give period-independent averages") {
    const MagneticParams p(2, 1);
    const double ts = primitive_period(p);
    const Observable obs({0.1, 0.8}, 1.2);
    const auto frames = haar_sample(5, 31);
    for (const auto& g : frames) {
        const double a1 = birkhoff(obs, g, generator(p), ts);
        const double a2 = birkhoff(obs, g, generator(p), 2 * ts);
        const double a3 = birkhoff(obs, g, generator(p), 3 * ts);
        CHECK(std::abs(a1 - a2) < 1e-6);
        CHECK(std::abs(a1 - a3) < 1e-6);
    }
}

TEST_CASE("time reversal") {
    const Observable obs({0.0, 1.2}, 1.1, 1);
    const auto frames = haar_sample(4, 8);
    const double T = 40.0;
    for (const auto& g : frames) {
        const double fwd = birkhoff(obs, g, kUplus, T);
        const GroupElement end = flow_frame(g, kUplus, T);
        const double bwd = birkhoff(obs, end, -1.0 * kUplus, T);
        CHECK(std::abs(fwd - bwd) < 1e-8);
    }
}

TEST_CASE("quadrature consistency under step halving") {
    const Observable obs(kBasePoint, 1.2);
    const auto frames = haar_sample(4, 9);
    for (const auto& g : frames) {
        const double a = birkhoff(obs, g, kUplus, 50.0, 0.01);
        const double b = birkhoff(obs, g, kUplus, 50.0, 0.005);
        CHECK(std::abs(a - b) < 1e-6);
    }
}

TEST_CASE("table agrees with single averages and is shard independent") {
    const Observable obs({0.2, 0.9}, 1.0);
    const auto frames = haar_sample(12, 10);
    const std::vector<double> horizons = {10, 25.5, 100};
    const auto t1 = birkhoff_table(obs, frames, kX, horizons, 0.01, 1);
    const auto t5 = birkhoff_table(obs, frames, kX, horizons, 0.01, 5);
    for (std::size_t k = 0; k < frames.size(); ++k)
        for (std::size_t j = 0; j < horizons.size(); ++j) {
            REQUIRE(t1[k][j] == t5[k][j]);
            REQUIRE(std::abs(t1[k][j] - birkhoff(obs, frames[k], kX, horizons[j])) < 1e-12);
        }
}

TEST_CASE("equidistribution scan bookkeeping") {
    const auto states = haar_sample(10, 4);
    const std::vector<double> horizons = {10, 20, 40, 80};

    const DecayTable c = equidistribution_scan(Observable::constant(1.0), states, kUplus,
                                               horizons, 1.0);
    for (double e : c.sup_errors) CHECK(e == 0.0);

    const Observable obs(kBasePoint, 1.2);
    const DecayTable a = equidistribution_scan(obs, states, kUplus, {10, 20, 40, 80}, 0.15);
    const DecayTable b = equidistribution_scan(obs, states, kUplus, {80, 10, 40, 20}, 0.15);
    CHECK(a.horizons == b.horizons);
    CHECK(a.sup_errors == b.sup_errors);
    CHECK(std::is_sorted(a.horizons.begin(), a.horizons.end()));
    CHECK(a.reference == 0.15);

    const DecayTable s = equidistribution_scan(obs, states, kUplus, horizons, 0.15, 0.01, 3);
    CHECK(s.sup_errors == a.sup_errors);

    CHECK_THROWS_AS(equidistribution_scan(obs, std::span(states).first(9), kUplus, horizons, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(equidistribution_scan(obs, states, kUplus, {10, 20, 40}, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(equidistribution_scan(obs, states, kUplus, {10, 20, 20, 40}, 0.1),
                    std::invalid_argument);
}

TEST_CASE("elliptic scans stabilize instead of decaying") {
    const MagneticParams p(2, 1);
    const Observable obs(kBasePoint, 1.2);
    const auto states = haar_sample(10, 6);
    const double ref = liouville_average(obs, 100000, 6).mean;
    const DecayTable t = equidistribution_scan(obs, states, generator(p), {10, 30, 100, 300}, ref);
    CHECK(t.sup_errors.back() > 0.05);
    CHECK(t.sup_errors.back() > 0.3 * t.sup_errors.front());
}

TEST_CASE("decay fit on synthetic tables") {
    const std::vector<double> T = {10, 100, 1000, 10000};
    std::vector<double> half, flat;
    for (double x : T) {
        half.push_back(0.3 / std::sqrt(x));
        flat.push_back(0.3);
    }
    const ThetaFit f = decay_fit(synthetic(T, half));
    CHECK(std::abs(f.theta - 0.5) < 1e-12);
    CHECK(std::abs(f.r_squared - 1.0) < 1e-12);
    CHECK(f.rows_used == 4);

    const ThetaFit g = decay_fit(synthetic(T, flat));
    CHECK(std::abs(g.theta) < 1e-12);
    CHECK(g.r_squared >= 0.0);
    CHECK(g.r_squared <= 1.0);

    // Rows below T = 10 are skipped.
    const ThetaFit h = decay_fit(synthetic({1, 5, 10, 100, 1000, 10000}, {9, 9, 0.3 / std::sqrt(10.0),
                                                                          0.03, 0.3 / std::sqrt(1000.0),
                                                                          0.003}));
    CHECK(h.rows_used == 4);
    CHECK(std::abs(h.theta - 0.5) < 1e-12);

    CHECK_THROWS_AS(decay_fit(synthetic(T, {0.1, 0.0, 0.01, 0.001})), ExactConvergence);
    CHECK_THROWS_AS(decay_fit(synthetic({10, 100, 1000}, {0.1, 0.01, 0.001})), std::invalid_argument);
    CHECK_THROWS_AS(decay_fit(synthetic({10, 100, 100, 1000}, {0.1, 0.01, 0.01, 0.001})),
                    std::invalid_argument);
    CHECK_THROWS_AS(decay_fit(synthetic(T, {0.1, 0.01})), std::invalid_argument);
}

TEST_CASE("CSV round trip") {
    const DecayTable t = synthetic({10, 100, 1000, 10000}, {0.1234567890123456789, 1.0 / 3.0,
                                                              2e-5, 7.25e-9});
    std::ostringstream os;
    write_csv(os, t);
    const std::string text = os.str();
    CHECK(text.rfind("T,sup_error\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    std::istringstream is(text);
    const DecayTable back = read_decay_csv(is);
    CHECK(back.horizons == t.horizons);
    CHECK(back.sup_errors == t.sup_errors);

    std::istringstream bad("T,err\n1,2\n");
    CHECK_THROWS_AS(read_decay_csv(bad), std::invalid_argument);
    std::istringstream junk("T,sup_error\n10,abc\n");
    CHECK_THROWS_AS(read_decay_csv(junk), std::invalid_argument);
}

}  // TEST_SUITE
