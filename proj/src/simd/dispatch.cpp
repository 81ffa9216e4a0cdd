#include <cstdlib>
#include <cstring>

#include "stdrep/simd/coins.hpp"

namespace stdrep::simd {

const char* isa_name(Isa isa) noexcept {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    }
    return "?";
}

Isa detected_isa() noexcept {
#if defined(STDREP_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
    static const bool avx2 = __builtin_cpu_supports("avx2");
    if (avx2) return Isa::Avx2;
#endif
    return Isa::Scalar;
}

Isa active_isa() noexcept {
    static const Isa isa = [] {
        const char* env = std::getenv("STDREP_SIMD");
        if (env && std::strcmp(env, "scalar") == 0) return Isa::Scalar;
        return detected_isa();
    }();
    return isa;
}

void uniform_row(Isa isa, std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                 std::uint64_t j0, std::size_t count, double* out) noexcept {
#if defined(STDREP_HAVE_AVX2_TU)
    if (isa == Isa::Avx2 && detected_isa() == Isa::Avx2)
        return uniform_row_avx2(seed, stream, i, j0, count, out);
#endif
    (void)isa;
    uniform_row_scalar(seed, stream, i, j0, count, out);
}

void edge_row(Isa isa, std::uint64_t seed, std::uint64_t i, std::uint64_t j0, std::size_t count,
              const double* threshold, std::uint8_t* out) noexcept {
#if defined(STDREP_HAVE_AVX2_TU)
    if (isa == Isa::Avx2 && detected_isa() == Isa::Avx2)
        return edge_row_avx2(seed, i, j0, count, threshold, out);
#endif
    (void)isa;
    edge_row_scalar(seed, i, j0, count, threshold, out);
}

void uniform_row(std::uint64_t seed, std::uint64_t stream, std::uint64_t i, std::uint64_t j0,
                 std::size_t count, double* out) noexcept {
    uniform_row(active_isa(), seed, stream, i, j0, count, out);
}

void edge_row(std::uint64_t seed, std::uint64_t i, std::uint64_t j0, std::size_t count,
              const double* threshold, std::uint8_t* out) noexcept {
    edge_row(active_isa(), seed, i, j0, count, threshold, out);
}

} // namespace stdrep::simd
