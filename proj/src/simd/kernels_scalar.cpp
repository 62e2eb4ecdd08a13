#include "hyperlab/simd/kernels.hpp"

#include <limits>

namespace hyperlab::simd {

namespace {

void right_multiply(FrameSpan f, const GroupElement& m) {
    for (std::size_t k = 0; k < f.n; ++k) {
        const double a = f.m11[k], b = f.m12[k], c = f.m21[k], d = f.m22[k];
        f.m11[k] = a * m.m11 + b * m.m21;
        f.m12[k] = a * m.m12 + b * m.m22;
        f.m21[k] = c * m.m11 + d * m.m21;
        f.m22[k] = c * m.m12 + d * m.m22;
    }
}

void base_points(ConstFrameSpan f, double* re, double* im) {
    for (std::size_t k = 0; k < f.n; ++k) {
        const double den = f.m21[k] * f.m21[k] + f.m22[k] * f.m22[k];
        re[k] = (f.m11[k] * f.m21[k] + f.m12[k] * f.m22[k]) / den;
        im[k] = 1.0 / den;
    }
}

void cosh_distance_to(const double* re, const double* im, std::size_t n, HalfPlanePoint w,
                      double* out) {
    const double w2 = 2.0 * w.im;
    for (std::size_t k = 0; k < n; ++k) {
        const double dx = re[k] - w.re, dy = im[k] - w.im;
        out[k] = 1.0 + (dx * dx + dy * dy) / (im[k] * w2);
    }
}

double min_cosh_distance(HalfPlanePoint z, const double* re, const double* im, std::size_t n) {
    const double z2 = 2.0 * z.im;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        const double dx = z.re - re[k], dy = z.im - im[k];
        const double c = 1.0 + (dx * dx + dy * dy) / (z2 * im[k]);
        best = c < best ? c : best;
    }
    return best;
}

void frame_cosh_radius(ConstFrameSpan f, double* out) {
    for (std::size_t k = 0; k < f.n; ++k) {
        const double s = (f.m11[k] * f.m11[k] + f.m12[k] * f.m12[k]) +
                         (f.m21[k] * f.m21[k] + f.m22[k] * f.m22[k]);
        out[k] = 0.5 * s;
    }
}

constexpr KernelTable kScalar{"scalar",         right_multiply,    base_points,
                              cosh_distance_to, min_cosh_distance, frame_cosh_radius};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace hyperlab::simd
