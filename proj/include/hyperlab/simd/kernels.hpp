#pragma once

// Data-parallel inner loops over batches of frames and half-plane points.
//
// Every kernel has a scalar reference and an AVX2 variant. The variants use
// the same operation order without fused multiply-add, so results are
// bit-identical; the active table is picked once at startup from the CPU
// features and may be forced with HYPERLAB_KERNELS=scalar|avx2.

#include "hyperlab/sl2.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace hyperlab::simd {

struct ConstFrameSpan {
    const double* m11;
    const double* m12;
    const double* m21;
    const double* m22;
    std::size_t n;
};

/// Structure-of-arrays view of n frames.
struct FrameSpan {
    double* m11;
    double* m12;
    double* m21;
    double* m22;
    std::size_t n;

    operator ConstFrameSpan() const { return {m11, m12, m21, m22, n}; }
};

struct KernelTable {
    const char* name;
    /// frames[k] <- frames[k] * m
    void (*right_multiply)(FrameSpan frames, const GroupElement& m);
    /// (re, im)[k] <- frames[k] . i
    void (*base_points)(ConstFrameSpan frames, double* re, double* im);
    /// out[k] <- cosh d(z_k, w)
    void (*cosh_distance_to)(const double* re, const double* im, std::size_t n,
                             HalfPlanePoint w, double* out);
    /// min_k cosh d(z, w_k); +inf for n = 0
    double (*min_cosh_distance)(HalfPlanePoint z, const double* re, const double* im,
                                std::size_t n);
    /// out[k] <- |frames[k]|_F^2 / 2 = cosh d(i, frames[k] . i)
    void (*frame_cosh_radius)(ConstFrameSpan frames, double* out);
};

const KernelTable& scalar_kernels();

/// nullptr when the build or the CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Table used by the library.
const KernelTable& active();

/// Override the active table ("scalar" or "avx2"); returns false if unavailable.
bool select(std::string_view name);

/// Owning SoA batch.
class FrameBatch {
public:
    FrameBatch() = default;
    explicit FrameBatch(std::span<const GroupElement> frames);

    std::size_t size() const { return m11_.size(); }
    void resize(std::size_t n);
    GroupElement get(std::size_t k) const { return {m11_[k], m12_[k], m21_[k], m22_[k]}; }
    void set(std::size_t k, const GroupElement& g);

    FrameSpan span() { return {m11_.data(), m12_.data(), m21_.data(), m22_.data(), size()}; }
    ConstFrameSpan span() const {
        return {m11_.data(), m12_.data(), m21_.data(), m22_.data(), size()};
    }

private:
    std::vector<double> m11_, m12_, m21_, m22_;
};

}  // namespace hyperlab::simd
