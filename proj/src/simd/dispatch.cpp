#include "hyperlab/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace hyperlab::simd {

namespace {

const KernelTable* initial_table() {
    if (const char* env = std::getenv("HYPERLAB_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_kernels();
        if (want == "avx2" && avx2_kernels()) return avx2_kernels();
    }
    if (const KernelTable* t = avx2_kernels()) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

bool select(std::string_view name) {
    const KernelTable* t = nullptr;
    if (name == "scalar") t = &scalar_kernels();
    else if (name == "avx2") t = avx2_kernels();
    if (!t) return false;
    slot().store(t, std::memory_order_release);
    return true;
}

FrameBatch::FrameBatch(std::span<const GroupElement> frames) {
    resize(frames.size());
    for (std::size_t k = 0; k < frames.size(); ++k) set(k, frames[k]);
}

void FrameBatch::resize(std::size_t n) {
    m11_.resize(n);
    m12_.resize(n);
    m21_.resize(n);
    m22_.resize(n);
}

void FrameBatch::set(std::size_t k, const GroupElement& g) {
    m11_[k] = g.m11;
    m12_[k] = g.m12;
    m21_[k] = g.m21;
    m22_[k] = g.m22;
}

}  // namespace hyperlab::simd
