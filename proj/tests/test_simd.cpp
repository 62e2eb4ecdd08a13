#include "doctest.h"

#include "hyperlab/fuchsian.hpp"
#include "hyperlab/rng.hpp"
#include "hyperlab/simd/kernels.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <string>

using namespace hyperlab;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Odd length so the vector tail is exercised.
constexpr std::size_t kN = 1027;

struct Inputs {
    std::vector<GroupElement> frames;
    std::vector<double> re, im;
};

Inputs make_inputs() {
    Inputs in;
    in.frames = haar_sample(kN, 77, 1);
    IndexedStream rng(77, 1);
    for (auto& g : in.frames) {
        // Push some frames far out to stress large entries.
        g = g * exp_algebra(kX, 6 * rng.uniform());
        const HalfPlanePoint z = base_point(g);
        in.re.push_back(z.re);
        in.im.push_back(z.im);
    }
    return in;
}

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("kernel selection") {
    const std::string before = simd::active().name;
    CHECK(simd::select("scalar"));
    CHECK(std::string(simd::active().name) == "scalar");
    CHECK_FALSE(simd::select("neon"));
    CHECK(std::string(simd::active().name) == "scalar");
    if (simd::avx2_kernels()) {
        CHECK(simd::select("avx2"));
        CHECK(std::string(simd::active().name) == "avx2");
    } else {
        CHECK_FALSE(simd::select("avx2"));
    }
    CHECK(simd::select(before));
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
    const simd::KernelTable* v = simd::avx2_kernels();
    if (!v) {
        MESSAGE("AVX2 unavailable; skipping");
        return;
    }
    const simd::KernelTable& s = simd::scalar_kernels();
    const Inputs in = make_inputs();

    SUBCASE("right_multiply") {
        simd::FrameBatch a(in.frames), b(in.frames);
        const GroupElement m = exp_algebra({0.3, -1.1, 0.7}, 0.9);
        for (int rep = 0; rep < 5; ++rep) {
            s.right_multiply(a.span(), m);
            v->right_multiply(b.span(), m);
        }
        for (std::size_t k = 0; k < kN; ++k) {
            const GroupElement x = a.get(k), y = b.get(k);
            REQUIRE(std::memcmp(&x, &y, sizeof x) == 0);
        }
    }

    SUBCASE("base_points") {
        const simd::FrameBatch batch(in.frames);
        std::vector<double> r1(kN), i1(kN), r2(kN), i2(kN);
        s.base_points(batch.span(), r1.data(), i1.data());
        v->base_points(batch.span(), r2.data(), i2.data());
        CHECK(same_bits(r1, r2));
        CHECK(same_bits(i1, i2));
    }

    SUBCASE("cosh_distance_to") {
        std::vector<double> a(kN), b(kN);
        for (HalfPlanePoint w : {kBasePoint, HalfPlanePoint{0.3, 2.5}, HalfPlanePoint{-4.0, 0.01}}) {
            s.cosh_distance_to(in.re.data(), in.im.data(), kN, w, a.data());
            v->cosh_distance_to(in.re.data(), in.im.data(), kN, w, b.data());
            CHECK(same_bits(a, b));
        }
    }

    SUBCASE("min_cosh_distance") {
        for (std::size_t n : {std::size_t{0}, std::size_t{1}, std::size_t{3}, std::size_t{4},
                              std::size_t{5}, kN}) {
            for (HalfPlanePoint z : {kBasePoint, HalfPlanePoint{1.0, 0.2}}) {
                const double a = s.min_cosh_distance(z, in.re.data(), in.im.data(), n);
                const double b = v->min_cosh_distance(z, in.re.data(), in.im.data(), n);
                REQUIRE(std::memcmp(&a, &b, sizeof a) == 0);
            }
        }
        CHECK(s.min_cosh_distance(kBasePoint, nullptr, nullptr, 0) ==
              std::numeric_limits<double>::infinity());
    }

    SUBCASE("frame_cosh_radius") {
        const simd::FrameBatch batch(in.frames);
        std::vector<double> a(kN), b(kN);
        s.frame_cosh_radius(batch.span(), a.data());
        v->frame_cosh_radius(batch.span(), b.data());
        CHECK(same_bits(a, b));
    }
}

TEST_CASE("scalar kernels agree with the pointwise geometry") {
    const simd::KernelTable& s = simd::scalar_kernels();
    const Inputs in = make_inputs();
    const simd::FrameBatch batch(in.frames);
    std::vector<double> re(kN), im(kN), c(kN);
    s.base_points(batch.span(), re.data(), im.data());
    s.frame_cosh_radius(batch.span(), c.data());
    for (std::size_t k = 0; k < kN; ++k) {
        const HalfPlanePoint z = base_point(in.frames[k]);
        REQUIRE(std::abs(re[k] - z.re) <= 1e-12 * (1 + std::abs(z.re)));
        REQUIRE(std::abs(im[k] - z.im) <= 1e-12 * z.im);
        const double want = cosh_distance(z, kBasePoint);
        REQUIRE(std::abs(c[k] - want) <= 1e-10 * want);
    }
}

TEST_CASE("library results do not depend on the kernel table") {
    if (!simd::avx2_kernels()) return;
    const std::string before = simd::active().name;
    simd::select("scalar");
    const auto a = haar_sample_with_stats(5000, 12, 1);
    simd::select("avx2");
    const auto b = haar_sample_with_stats(5000, 12, 1);
    simd::select(before);
    CHECK(a.candidates == b.candidates);
    for (std::size_t k = 0; k < a.frames.size(); ++k)
        REQUIRE(max_abs_diff(a.frames[k], b.frames[k]) == 0.0);
}

}  // TEST_SUITE
