#include "hyperlab/simd/kernels.hpp"

#include <algorithm>
#include <limits>

#if defined(__x86_64__) || defined(_M_X64)
#define HYPERLAB_HAVE_AVX2 1
#include <immintrin.h>
#else
#define HYPERLAB_HAVE_AVX2 0
#endif

namespace hyperlab::simd {

#if HYPERLAB_HAVE_AVX2

namespace {

// No FMA: the products and sums must round exactly like the scalar path.
#define HYPERLAB_AVX2 __attribute__((target("avx2")))

HYPERLAB_AVX2 void right_multiply(FrameSpan f, const GroupElement& m) {
    const __m256d x11 = _mm256_set1_pd(m.m11), x12 = _mm256_set1_pd(m.m12);
    const __m256d x21 = _mm256_set1_pd(m.m21), x22 = _mm256_set1_pd(m.m22);
    std::size_t k = 0;
    for (; k + 4 <= f.n; k += 4) {
        const __m256d a = _mm256_loadu_pd(f.m11 + k), b = _mm256_loadu_pd(f.m12 + k);
        const __m256d c = _mm256_loadu_pd(f.m21 + k), d = _mm256_loadu_pd(f.m22 + k);
        _mm256_storeu_pd(f.m11 + k, _mm256_add_pd(_mm256_mul_pd(a, x11), _mm256_mul_pd(b, x21)));
        _mm256_storeu_pd(f.m12 + k, _mm256_add_pd(_mm256_mul_pd(a, x12), _mm256_mul_pd(b, x22)));
        _mm256_storeu_pd(f.m21 + k, _mm256_add_pd(_mm256_mul_pd(c, x11), _mm256_mul_pd(d, x21)));
        _mm256_storeu_pd(f.m22 + k, _mm256_add_pd(_mm256_mul_pd(c, x12), _mm256_mul_pd(d, x22)));
    }
    scalar_kernels().right_multiply({f.m11 + k, f.m12 + k, f.m21 + k, f.m22 + k, f.n - k}, m);
}

HYPERLAB_AVX2 void base_points(ConstFrameSpan f, double* re, double* im) {
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t k = 0;
    for (; k + 4 <= f.n; k += 4) {
        const __m256d a = _mm256_loadu_pd(f.m11 + k), b = _mm256_loadu_pd(f.m12 + k);
        const __m256d c = _mm256_loadu_pd(f.m21 + k), d = _mm256_loadu_pd(f.m22 + k);
        const __m256d den = _mm256_add_pd(_mm256_mul_pd(c, c), _mm256_mul_pd(d, d));
        const __m256d num = _mm256_add_pd(_mm256_mul_pd(a, c), _mm256_mul_pd(b, d));
        _mm256_storeu_pd(re + k, _mm256_div_pd(num, den));
        _mm256_storeu_pd(im + k, _mm256_div_pd(one, den));
    }
    scalar_kernels().base_points({f.m11 + k, f.m12 + k, f.m21 + k, f.m22 + k, f.n - k}, re + k,
                                 im + k);
}

HYPERLAB_AVX2 void cosh_distance_to(const double* re, const double* im, std::size_t n,
                                    HalfPlanePoint w, double* out) {
    const __m256d wr = _mm256_set1_pd(w.re), wi = _mm256_set1_pd(w.im);
    const __m256d w2 = _mm256_set1_pd(2.0 * w.im), one = _mm256_set1_pd(1.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d zr = _mm256_loadu_pd(re + k), zi = _mm256_loadu_pd(im + k);
        const __m256d dx = _mm256_sub_pd(zr, wr), dy = _mm256_sub_pd(zi, wi);
        const __m256d num = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        _mm256_storeu_pd(out + k, _mm256_add_pd(one, _mm256_div_pd(num, _mm256_mul_pd(zi, w2))));
    }
    scalar_kernels().cosh_distance_to(re + k, im + k, n - k, w, out + k);
}

HYPERLAB_AVX2 double min_cosh_distance(HalfPlanePoint z, const double* re, const double* im,
                                       std::size_t n) {
    const __m256d zr = _mm256_set1_pd(z.re), zi = _mm256_set1_pd(z.im);
    const __m256d z2 = _mm256_set1_pd(2.0 * z.im), one = _mm256_set1_pd(1.0);
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d wr = _mm256_loadu_pd(re + k), wi = _mm256_loadu_pd(im + k);
        const __m256d dx = _mm256_sub_pd(zr, wr), dy = _mm256_sub_pd(zi, wi);
        const __m256d num = _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy));
        const __m256d c = _mm256_add_pd(one, _mm256_div_pd(num, _mm256_mul_pd(z2, wi)));
        best = _mm256_min_pd(best, c);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    const double tail = scalar_kernels().min_cosh_distance(z, re + k, im + k, n - k);
    return std::min({lanes[0], lanes[1], lanes[2], lanes[3], tail});
}

HYPERLAB_AVX2 void frame_cosh_radius(ConstFrameSpan f, double* out) {
    const __m256d half = _mm256_set1_pd(0.5);
    std::size_t k = 0;
    for (; k + 4 <= f.n; k += 4) {
        const __m256d a = _mm256_loadu_pd(f.m11 + k), b = _mm256_loadu_pd(f.m12 + k);
        const __m256d c = _mm256_loadu_pd(f.m21 + k), d = _mm256_loadu_pd(f.m22 + k);
        const __m256d top = _mm256_add_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        const __m256d bot = _mm256_add_pd(_mm256_mul_pd(c, c), _mm256_mul_pd(d, d));
        _mm256_storeu_pd(out + k, _mm256_mul_pd(half, _mm256_add_pd(top, bot)));
    }
    scalar_kernels().frame_cosh_radius({f.m11 + k, f.m12 + k, f.m21 + k, f.m22 + k, f.n - k},
                                       out + k);
}

#undef HYPERLAB_AVX2

constexpr KernelTable kAvx2{"avx2",           right_multiply,    base_points,
                            cosh_distance_to, min_cosh_distance, frame_cosh_radius};

}  // namespace

const KernelTable* avx2_kernels() {
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &kAvx2 : nullptr;
}

#else

const KernelTable* avx2_kernels() { return nullptr; }

#endif

}  // namespace hyperlab::simd
