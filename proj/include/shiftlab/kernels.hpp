#pragma once
// Byte-array counting kernels. Scalar reference implementations plus an
// AVX2 variant chosen at runtime; both are exposed so tests can check
// they agree bit-for-bit.

#include <cstddef>
#include <cstdint>

namespace shiftlab::kernels {

// Number of positions i < n with a[i] != b[i].
using CountMismatchFn = std::size_t (*)(const std::uint8_t*, const std::uint8_t*, std::size_t);
// Number of positions i < n with a[i] != 0.
using CountNonzeroFn = std::size_t (*)(const std::uint8_t*, std::size_t);
// out[i] = (a[i] != b[i]) ? 1 : 0.
using MismatchIndicatorFn = void (*)(const std::uint8_t*, const std::uint8_t*, std::uint8_t*, std::size_t);
// dst[i] |= src[i].
using OrAccumulateFn = void (*)(std::uint8_t*, const std::uint8_t*, std::size_t);

struct Backend {
    const char* name;
    CountMismatchFn count_mismatch;
    CountNonzeroFn count_nonzero;
    MismatchIndicatorFn mismatch_indicator;
    OrAccumulateFn or_accumulate;
};

// Active backend: AVX2 when the CPU supports it, scalar otherwise.
// force_scalar(true) pins the scalar path (used by equivalence tests).
const Backend& active();
void force_scalar(bool on);

const Backend& scalar_backend();
const Backend* avx2_backend();  // nullptr when not compiled in or unsupported

inline std::size_t count_mismatch(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    return active().count_mismatch(a, b, n);
}
inline std::size_t count_nonzero(const std::uint8_t* a, std::size_t n) {
    return active().count_nonzero(a, n);
}
inline void mismatch_indicator(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) {
    active().mismatch_indicator(a, b, out, n);
}
inline void or_accumulate(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    active().or_accumulate(dst, src, n);
}

}  // namespace shiftlab::kernels
