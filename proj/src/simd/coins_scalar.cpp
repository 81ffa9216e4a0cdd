#include "stdrep/simd/coins.hpp"

namespace stdrep::simd {

void uniform_row_scalar(std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                        std::uint64_t j0, std::size_t count, double* out) noexcept {
    for (std::size_t t = 0; t < count; ++t) out[t] = to_unit(mix(seed, stream, i, j0 + t));
}

void edge_row_scalar(std::uint64_t seed, std::uint64_t i, std::uint64_t j0, std::size_t count,
                     const double* threshold, std::uint8_t* out) noexcept {
    for (std::size_t t = 0; t < count; ++t)
        out[t] = to_unit(mix(seed, 1, i, j0 + t)) < threshold[t] ? 1 : 0;
}

} // namespace stdrep::simd
