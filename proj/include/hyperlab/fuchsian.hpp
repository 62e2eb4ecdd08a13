#pragma once

// The Bolza genus-2 surface as a cocompact Fuchsian group acting on the
// upper half plane, with its Dirichlet domain about i.

#include "hyperlab/sl2.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hyperlab {

/// Raised when greedy reduction fails to terminate; indicates corrupt group data.
class ReductionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SurfaceGroup {
    /// g_0..g_7 with g_{k+4} = g_k^{-1}.
    std::array<GroupElement, 8> generators;
    int genus = 2;
    /// Translation length of every generator.
    double translation_length = 0.0;
};

struct FundamentalDomain {
    HalfPlanePoint center = kBasePoint;
    /// Hyperbolic radius of the octagon's vertices.
    double vertex_radius = 0.0;
    /// g_k . i for k = 0..7.
    std::array<HalfPlanePoint, 8> neighbor_images{};
};

/// Group words of bounded length together with their images of a point.
struct WordBall {
    std::vector<GroupElement> words;  // identity first, deduplicated in PSL
    std::vector<int> lengths;
};

/// Translation length 2 arccosh(1 + sqrt 2) of the Bolza side pairings.
double bolza_translation_length();

SurfaceGroup bolza_group();

FundamentalDomain dirichlet_domain(const SurfaceGroup& group);

/// Group and domain bundled; `bolza()` is a process-wide immutable instance.
struct Surface {
    SurfaceGroup group;
    FundamentalDomain domain;
    WordBall ball2;  // words of length <= 2

    explicit Surface(SurfaceGroup g);
};

const Surface& bolza();

/// All distinct words of length <= radius in the generators.
WordBall word_ball(const SurfaceGroup& group, int radius);

/// z belongs to the closed Dirichlet domain (1e-12 slack on distances).
bool in_domain(HalfPlanePoint z, const FundamentalDomain& domain);
bool in_domain(HalfPlanePoint z, const Surface& s = bolza());

/// Batched in_domain over the SIMD kernels; out[k] = 1 when inside.
void in_domain_batch(std::span<const double> re, std::span<const double> im,
                     std::span<std::uint8_t> out, const Surface& s = bolza());

struct PointReduction {
    HalfPlanePoint point;
    GroupElement word;  // point = word . z
    int steps = 0;
};

struct FrameReduction {
    GroupElement frame;
    GroupElement word;  // frame = word * g
    int steps = 0;
};

inline constexpr int kReductionCap = 10000;

/// Greedy descent towards i through the side pairings.
PointReduction reduce(HalfPlanePoint z, const Surface& s = bolza());

FrameReduction reduce_frame(const GroupElement& g, const Surface& s = bolza());

/// min over words of length <= radius of d(x, w . y).
double quotient_distance(HalfPlanePoint x, HalfPlanePoint y, int radius = 2,
                         const Surface& s = bolza());

/// True when h = w * g in PSL for some word w of length <= 2, to `tol`.
bool same_in_quotient(const GroupElement& g, const GroupElement& h, double tol,
                      const Surface& s = bolza());

struct HaarSampleResult {
    std::vector<GroupElement> frames;
    /// Total candidates drawn by the polar rejection sampler.
    std::uint64_t candidates = 0;
};

/// Frames distributed by normalized Haar measure on the quotient. Sample k is
/// a function of (seed, k) alone, so the output is independent of `shards`.
HaarSampleResult haar_sample_with_stats(std::int64_t n, std::uint64_t seed, int shards = 1,
                                        const Surface& s = bolza());

std::vector<GroupElement> haar_sample(std::int64_t n, std::uint64_t seed, int shards = 1,
                                      const Surface& s = bolza());

/// Area of the polar sampling disk, 2 pi (cosh r_v - 1).
double sampling_disk_area(const FundamentalDomain& domain);

}  // namespace hyperlab
