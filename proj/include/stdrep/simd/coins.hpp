#pragma once

// Batched counter-based uniforms and edge coins. Every lane computes
// mix(seed, stream, i, j) independently, so the scalar reference and the
// vector variants are required to agree bit for bit.

#include <cstddef>
#include <cstdint>

namespace stdrep::simd {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
inline constexpr std::uint64_t kMul1 = 0xBF58476D1CE4E5B9ULL;
inline constexpr std::uint64_t kMul2 = 0x94D049BB133111EBULL;

constexpr std::uint64_t avalanche(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= kMul1;
    x ^= x >> 27;
    x *= kMul2;
    x ^= x >> 31;
    return x;
}

constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                            std::uint64_t j) noexcept {
    std::uint64_t x = avalanche(seed + kGolden);
    x = avalanche(x ^ stream);
    x = avalanche(x ^ i);
    x = avalanche(x ^ j);
    return x;
}

/// High 53 bits scaled into [0,1).
constexpr double to_unit(std::uint64_t x) noexcept {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

enum class Isa { Scalar, Avx2 };

const char* isa_name(Isa isa) noexcept;

/// Best variant this CPU supports.
Isa detected_isa() noexcept;

/// Variant used by the dispatching entry points: detected_isa(), unless the
/// environment variable STDREP_SIMD is set to "scalar".
Isa active_isa() noexcept;

/// out[t] = to_unit(mix(seed, stream, i, j0 + t)) for t < count.
void uniform_row_scalar(std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                        std::uint64_t j0, std::size_t count, double* out) noexcept;

/// out[t] = uniform(seed, 1, i, j0 + t) < threshold[t] ? 1 : 0.
void edge_row_scalar(std::uint64_t seed, std::uint64_t i, std::uint64_t j0, std::size_t count,
                     const double* threshold, std::uint8_t* out) noexcept;

#if defined(__x86_64__) || defined(_M_X64)
void uniform_row_avx2(std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                      std::uint64_t j0, std::size_t count, double* out) noexcept;
void edge_row_avx2(std::uint64_t seed, std::uint64_t i, std::uint64_t j0, std::size_t count,
                   const double* threshold, std::uint8_t* out) noexcept;
#endif

/// Dispatching entry points.
void uniform_row(std::uint64_t seed, std::uint64_t stream, std::uint64_t i, std::uint64_t j0,
                 std::size_t count, double* out) noexcept;
void edge_row(std::uint64_t seed, std::uint64_t i, std::uint64_t j0, std::size_t count,
              const double* threshold, std::uint8_t* out) noexcept;

/// Same, forcing a given variant (for equivalence tests and benchmarks).
/// Falls back to scalar when the variant is unavailable.
void uniform_row(Isa isa, std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                 std::uint64_t j0, std::size_t count, double* out) noexcept;
void edge_row(Isa isa, std::uint64_t seed, std::uint64_t i, std::uint64_t j0, std::size_t count,
              const double* threshold, std::uint8_t* out) noexcept;

} // namespace stdrep::simd
