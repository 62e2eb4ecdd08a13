#include "hyperlab/fuchsian.hpp"

#include "hyperlab/parallel.hpp"
#include "hyperlab/rng.hpp"
#include "hyperlab/simd/kernels.hpp"

#include <cmath>
#include <numbers>
#include <unordered_map>

namespace hyperlab {

namespace {

constexpr double kDistanceSlack = 1e-12;

// d(z, i) <= d(z, w) + slack, phrased on cosh values: cosh is increasing and
// cosh(d + e) = cosh d + e sinh d to first order.
bool closer_to_center(double cosh_center, double cosh_other) {
    const double sinh_other = std::sqrt(std::max(0.0, cosh_other * cosh_other - 1.0));
    return cosh_center <= cosh_other + kDistanceSlack * sinh_other;
}

}  // namespace

double bolza_translation_length() { return 2.0 * std::acosh(1.0 + std::numbers::sqrt2); }

SurfaceGroup bolza_group() {
    SurfaceGroup g;
    g.translation_length = bolza_translation_length();
    const GroupElement axis = exp_algebra(kX, g.translation_length);
    for (int k = 0; k < 8; ++k) {
        const double angle = k * std::numbers::pi / 4.0;
        g.generators[k] = exp_algebra(kV, angle) * axis * exp_algebra(kV, -angle);
    }
    return g;
}

FundamentalDomain dirichlet_domain(const SurfaceGroup& group) {
    FundamentalDomain d;
    // Circumradius of the regular octagon with interior angle pi/4:
    // cosh r_v = cot^2(pi/8) = 3 + 2 sqrt 2.
    d.vertex_radius = std::acosh(3.0 + 2.0 * std::numbers::sqrt2);
    for (int k = 0; k < 8; ++k) d.neighbor_images[k] = base_point(group.generators[k]);
    return d;
}

WordBall word_ball(const SurfaceGroup& group, int radius) {
    WordBall ball;
    // Hash buckets narrow the search; equality is decided by distance, so a
    // collision can never drop a word.
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    auto add = [&](const GroupElement& w, int len) {
        auto& bucket = buckets[projective_hash(w, 1e-7)];
        for (std::size_t k : bucket)
            if (projective_distance(ball.words[k], w) < 1e-7) return false;
        bucket.push_back(ball.words.size());
        ball.words.push_back(w);
        ball.lengths.push_back(len);
        return true;
    };
    add(GroupElement::identity(), 0);
    std::vector<GroupElement> frontier{GroupElement::identity()};
    for (int len = 1; len <= radius; ++len) {
        std::vector<GroupElement> next;
        for (const auto& w : frontier)
            for (const auto& g : group.generators) {
                const GroupElement c = (g * w).renormalized();
                if (add(c, len)) next.push_back(c);
            }
        frontier = std::move(next);
    }
    return ball;
}

Surface::Surface(SurfaceGroup g)
    : group(g), domain(dirichlet_domain(g)), ball2(word_ball(g, 2)) {}

const Surface& bolza() {
    static const Surface surface(bolza_group());
    return surface;
}

bool in_domain(HalfPlanePoint z, const FundamentalDomain& domain) {
    const double c0 = cosh_distance(z, domain.center);
    for (const auto& w : domain.neighbor_images)
        if (!closer_to_center(c0, cosh_distance(z, w))) return false;
    return true;
}

bool in_domain(HalfPlanePoint z, const Surface& s) { return in_domain(z, s.domain); }

void in_domain_batch(std::span<const double> re, std::span<const double> im,
                     std::span<std::uint8_t> out, const Surface& s) {
    const std::size_t n = re.size();
    if (im.size() != n || out.size() != n)
        throw std::invalid_argument("in_domain_batch: size mismatch");
    const auto& k = simd::active();
    thread_local std::vector<double> c0, c;
    c0.resize(n);
    c.resize(n);
    k.cosh_distance_to(re.data(), im.data(), n, s.domain.center, c0.data());
    for (std::size_t j = 0; j < n; ++j) out[j] = 1;
    for (const auto& w : s.domain.neighbor_images) {
        k.cosh_distance_to(re.data(), im.data(), n, w, c.data());
        for (std::size_t j = 0; j < n; ++j)
            if (out[j] && !closer_to_center(c0[j], c[j])) out[j] = 0;
    }
}

PointReduction reduce(HalfPlanePoint z, const Surface& s) {
    if (!(z.im > 0)) throw std::invalid_argument("reduce: point must satisfy Im z > 0");
    PointReduction r{z, GroupElement::identity(), 0};
    const auto& gens = s.group.generators;
    while (true) {
        const double current = hyp_distance(r.point, kBasePoint);
        int best = -1;
        double best_d = current - kDistanceSlack;
        for (int k = 0; k < 8; ++k) {
            // d(g_k z, i) = d(z, g_k^{-1} i)
            const double d = hyp_distance(r.point, s.domain.neighbor_images[(k + 4) % 8]);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        if (best < 0) return r;
        if (++r.steps > kReductionCap)
            throw ReductionError("reduce: iteration cap exceeded; group data is inconsistent");
        r.word = (gens[best] * r.word).renormalized();
        r.point = mobius(gens[best], r.point);
    }
}

FrameReduction reduce_frame(const GroupElement& g, const Surface& s) {
    const PointReduction pr = reduce(base_point(g), s);
    if (pr.steps == 0) return {g, GroupElement::identity(), 0};
    return {(pr.word * g).renormalized(), pr.word, pr.steps};
}

double quotient_distance(HalfPlanePoint x, HalfPlanePoint y, int radius, const Surface& s) {
    if (radius < 1) throw std::invalid_argument("quotient_distance: radius must be >= 1");
    const WordBall local = radius == 2 ? WordBall{} : word_ball(s.group, radius);
    const WordBall& ball = radius == 2 ? s.ball2 : local;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& w : ball.words) best = std::min(best, hyp_distance(x, mobius(w, y)));
    return best;
}

bool same_in_quotient(const GroupElement& g, const GroupElement& h, double tol,
                      const Surface& s) {
    for (const auto& w : s.ball2.words)
        if (projective_distance(w * g, h) <= tol) return true;
    return false;
}

double sampling_disk_area(const FundamentalDomain& domain) {
    return 2.0 * std::numbers::pi * (std::cosh(domain.vertex_radius) - 1.0);
}

HaarSampleResult haar_sample_with_stats(std::int64_t n, std::uint64_t seed, int shards,
                                        const Surface& s) {
    if (n < 0) throw std::invalid_argument("haar_sample: n must be >= 0");
    const auto count = static_cast<std::size_t>(n);
    HaarSampleResult result;
    result.frames.resize(count);
    std::vector<std::uint64_t> drawn(count, 0);
    const double cosh_rv_minus_1 = std::cosh(s.domain.vertex_radius) - 1.0;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    for_shards(count, shards, [&](int, std::size_t lo, std::size_t hi) {
        // Rounds over the still-pending indices; index k always consumes its
        // own stream in the same order, so batching does not change results.
        std::vector<IndexedStream> streams;
        std::vector<std::size_t> pending;
        streams.reserve(hi - lo);
        for (std::size_t k = lo; k < hi; ++k) {
            streams.emplace_back(seed, k);
            pending.push_back(k);
        }
        std::vector<GroupElement> cand;
        std::vector<double> re, im;
        std::vector<std::uint8_t> inside;
        while (!pending.empty()) {
            const std::size_t m = pending.size();
            cand.resize(m);
            re.resize(m);
            im.resize(m);
            inside.resize(m);
            for (std::size_t j = 0; j < m; ++j) {
                auto& rng = streams[pending[j] - lo];
                const double r = std::acosh(1.0 + rng.uniform() * cosh_rv_minus_1);
                const double phi = two_pi * rng.uniform();
                cand[j] = exp_algebra(kV, phi) * exp_algebra(kX, r);
                const HalfPlanePoint z = base_point(cand[j]);
                re[j] = z.re;
                im[j] = z.im;
                ++drawn[pending[j]];
            }
            in_domain_batch(re, im, inside, s);
            std::size_t keep = 0;
            for (std::size_t j = 0; j < m; ++j) {
                const std::size_t k = pending[j];
                if (inside[j]) {
                    const double theta = two_pi * streams[k - lo].uniform();
                    result.frames[k] = (cand[j] * exp_algebra(kV, theta)).renormalized();
                } else {
                    pending[keep++] = k;
                }
            }
            pending.resize(keep);
        }
    });
    for (auto d : drawn) result.candidates += d;
    return result;
}

std::vector<GroupElement> haar_sample(std::int64_t n, std::uint64_t seed, int shards,
                                      const Surface& s) {
    return haar_sample_with_stats(n, seed, shards, s).frames;
}

}  // namespace hyperlab
