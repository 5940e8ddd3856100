// AVX2 variants of the byte kernels. This TU is compiled with -mavx2;
// callers reach it only through the runtime-dispatched backend table.

#include "shiftlab/kernels.hpp"

#include <algorithm>
#include <immintrin.h>

namespace shiftlab::kernels {

namespace {

// Counts equal bytes with the cmpeq/psadbw idiom, mismatches are n - equal.
std::size_t count_equal_avx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    std::size_t i = 0;
    std::uint64_t total = 0;
    while (i + 32 <= n) {
        __m256i acc = _mm256_setzero_si256();
        // cmpeq yields 0xFF per equal byte; subtracting accumulates +1 per
        // lane, safe for up to 255 iterations before widening.
        std::size_t block_end = i + std::min<std::size_t>(255 * 32, ((n - i) / 32) * 32);
        for (; i + 32 <= block_end; i += 32) {
            __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
            __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
            acc = _mm256_sub_epi8(acc, _mm256_cmpeq_epi8(va, vb));
        }
        __m256i sums = _mm256_sad_epu8(acc, _mm256_setzero_si256());
        total += static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 0)) +
                 static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 1)) +
                 static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 2)) +
                 static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 3));
    }
    for (; i < n; ++i) total += (a[i] == b[i]);
    return total;
}

std::size_t count_mismatch_avx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
    return n - count_equal_avx2(a, b, n);
}

std::size_t count_nonzero_avx2(const std::uint8_t* a, std::size_t n) {
    std::size_t i = 0;
    std::uint64_t zeros = 0;
    const __m256i vz = _mm256_setzero_si256();
    while (i + 32 <= n) {
        __m256i acc = _mm256_setzero_si256();
        std::size_t block_end = i + std::min<std::size_t>(255 * 32, ((n - i) / 32) * 32);
        for (; i + 32 <= block_end; i += 32) {
            __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
            acc = _mm256_sub_epi8(acc, _mm256_cmpeq_epi8(va, vz));
        }
        __m256i sums = _mm256_sad_epu8(acc, _mm256_setzero_si256());
        zeros += static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 0)) +
                 static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 1)) +
                 static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 2)) +
                 static_cast<std::uint64_t>(_mm256_extract_epi64(sums, 3));
    }
    std::size_t nonzero = i - zeros;  // i == floor(n/32)*32 here
    for (; i < n; ++i) nonzero += (a[i] != 0);
    return nonzero;
}

void mismatch_indicator_avx2(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, std::size_t n) {
    const __m256i ones = _mm256_set1_epi8(1);
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i eq = _mm256_cmpeq_epi8(va, vb);
        __m256i ind = _mm256_andnot_si256(eq, ones);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(out + i), ind);
    }
    for (; i < n; ++i) out[i] = (a[i] != b[i]) ? 1 : 0;
}

void or_accumulate_avx2(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
    std::size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i vd = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i vs = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_or_si256(vd, vs));
    }
    for (; i < n; ++i) dst[i] |= src[i];
}

const Backend kAvx2 = {
    "avx2",
    count_mismatch_avx2,
    count_nonzero_avx2,
    mismatch_indicator_avx2,
    or_accumulate_avx2,
};

}  // namespace

const Backend* avx2_backend() {
#if defined(__GNUC__) || defined(__clang__)
    __builtin_cpu_init();
    if (__builtin_cpu_supports("avx2")) return &kAvx2;
#endif
    return nullptr;
}

}  // namespace shiftlab::kernels
