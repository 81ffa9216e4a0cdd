// Compiled with -mavx2. Only reached after a runtime CPU check.

#include <immintrin.h>

#include "stdrep/simd/coins.hpp"

namespace stdrep::simd {
namespace {

// Low 64 bits of a 64x64 product; AVX2 only has 32x32->64 multiplies.
inline __m256i mullo64(__m256i a, __m256i b) {
    const __m256i lo = _mm256_mul_epu32(a, b);
    const __m256i a_hi_b = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), b);
    const __m256i a_b_hi = _mm256_mul_epu32(a, _mm256_srli_epi64(b, 32));
    const __m256i cross = _mm256_slli_epi64(_mm256_add_epi64(a_hi_b, a_b_hi), 32);
    return _mm256_add_epi64(lo, cross);
}

inline __m256i avalanche4(__m256i x) {
    const __m256i m1 = _mm256_set1_epi64x(static_cast<long long>(kMul1));
    const __m256i m2 = _mm256_set1_epi64x(static_cast<long long>(kMul2));
    x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 30));
    x = mullo64(x, m1);
    x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 27));
    x = mullo64(x, m2);
    x = _mm256_xor_si256(x, _mm256_srli_epi64(x, 31));
    return x;
}

// Exact conversion of (x >> 11) < 2^53 to double, times 2^-53.
inline __m256d to_unit4(__m256i x) {
    const __m256i v = _mm256_srli_epi64(x, 11);
    const __m256i lo = _mm256_blend_epi32(v, _mm256_setzero_si256(), 0xAA);
    const __m256i hi = _mm256_srli_epi64(v, 32);
    const __m256d two52 = _mm256_set1_pd(0x1.0p52);
    const __m256d two84 = _mm256_set1_pd(0x1.0p84);
    const __m256d lo_d = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(lo, _mm256_castpd_si256(two52))), two52);
    const __m256d hi_d = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(hi, _mm256_castpd_si256(two84))), two84);
    return _mm256_mul_pd(_mm256_add_pd(hi_d, lo_d), _mm256_set1_pd(0x1.0p-53));
}

// Local copy so no header inline function is emitted with AVX2 codegen.
std::uint64_t avalanche1(std::uint64_t x) {
    x ^= x >> 30;
    x *= kMul1;
    x ^= x >> 27;
    x *= kMul2;
    x ^= x >> 31;
    return x;
}

// The prefix avalanche(avalanche(seed+g) ^ stream) ^ i is shared by a row.
std::uint64_t row_prefix(std::uint64_t seed, std::uint64_t stream, std::uint64_t i) {
    std::uint64_t x = avalanche1(seed + kGolden);
    x = avalanche1(x ^ stream);
    return avalanche1(x ^ i);
}

inline __m256d uniform4(__m256i prefix, std::uint64_t j) {
    const __m256i js = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(j)),
                                        _mm256_set_epi64x(3, 2, 1, 0));
    return to_unit4(avalanche4(_mm256_xor_si256(prefix, js)));
}

} // namespace

void uniform_row_avx2(std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                      std::uint64_t j0, std::size_t count, double* out) noexcept {
    const __m256i prefix = _mm256_set1_epi64x(static_cast<long long>(row_prefix(seed, stream, i)));
    std::size_t t = 0;
    for (; t + 4 <= count; t += 4) _mm256_storeu_pd(out + t, uniform4(prefix, j0 + t));
    uniform_row_scalar(seed, stream, i, j0 + t, count - t, out + t);
}

void edge_row_avx2(std::uint64_t seed, std::uint64_t i, std::uint64_t j0, std::size_t count,
                   const double* threshold, std::uint8_t* out) noexcept {
    const __m256i prefix = _mm256_set1_epi64x(static_cast<long long>(row_prefix(seed, 1, i)));
    std::size_t t = 0;
    for (; t + 4 <= count; t += 4) {
        const __m256d u = uniform4(prefix, j0 + t);
        const __m256d thr = _mm256_loadu_pd(threshold + t);
        const int mask = _mm256_movemask_pd(_mm256_cmp_pd(u, thr, _CMP_LT_OQ));
        out[t] = mask & 1;
        out[t + 1] = (mask >> 1) & 1;
        out[t + 2] = (mask >> 2) & 1;
        out[t + 3] = (mask >> 3) & 1;
    }
    edge_row_scalar(seed, i, j0 + t, count - t, threshold + t, out + t);
}

} // namespace stdrep::simd
