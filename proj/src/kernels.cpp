#include "shiftlab/kernels.hpp"

#include <atomic>

namespace shiftlab::kernels {

namespace {

std::size_t count_mismatch_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (a[i] != b[i]);
    return c;
}

std::size_t count_nonzero_scalar(const std::uint8_t* a, std::size_t n) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (a[i] != 0);
    return c;
}

void mismatch_indicator_scalar(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] != b[i]) ? 1 : 0;
}

void or_accumulate_scalar(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] |= src[i];
}

const Backend kScalar = {
    "scalar",
    count_mismatch_scalar,
    count_nonzero_scalar,
    mismatch_indicator_scalar,
    or_accumulate_scalar,
};

std::atomic<bool> g_force_scalar{false};

}  // namespace

const Backend& scalar_backend() { return kScalar; }

#if !defined(SHIFTLAB_HAVE_AVX2_TU)
const Backend* avx2_backend() { return nullptr; }
#endif

const Backend& active() {
    if (g_force_scalar.load(std::memory_order_relaxed)) return kScalar;
    static const Backend* chosen = [] {
        if (const Backend* v = avx2_backend()) return v;
        return &kScalar;
    }();
    return *chosen;
}

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

}  // namespace shiftlab::kernels
