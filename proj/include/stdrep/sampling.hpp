#pragma once

// Counter-based sampling of latent variables, exchangeable arrays, and
// W-random graphs. Every random draw is a pure function of
// (seed, stream, i, j), so results do not depend on thread count or
// evaluation order.
//
// Streams: 0 latents (X_i = unit_uniform(seed, 0, 0, i)), 1 edge coins
// (unit_uniform(seed, 1, i, j), i < j). Vertex indices are 1-based.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "stdrep/kernels.hpp"
#include "stdrep/spaces.hpp"

namespace stdrep {

inline constexpr std::uint64_t kStreamLatent = 0;
inline constexpr std::uint64_t kStreamEdge = 1;

/// Marker for an infinite vertex set, which is not supported.
inline constexpr std::size_t kInfiniteVertices = std::numeric_limits<std::size_t>::max();

double unit_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                    std::uint64_t j) noexcept;

/// Seed of run r derived from a base seed, for repeated independent samples.
std::uint64_t run_seed(std::uint64_t base, std::uint64_t run) noexcept;

struct Latents {
    std::vector<double> u;          ///< X_1..X_n in [0,1)
    std::vector<std::size_t> cells; ///< lookup_cell(partition, X_i), 0-based
};

/// Throws DomainError for n = 0 and UnsupportedError for kInfiniteVertices.
Latents sample_latents(const IntervalPartition& partition, std::size_t n, std::uint64_t seed);
Latents sample_latents(const DiscreteSpace& space, std::size_t n, std::uint64_t seed);

struct RandomGraph {
    std::size_t n = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges; ///< 1-based, i < j, sorted
    Latents latents;
};

/// Connection probabilities between latent classes, for the sampler.
struct EdgeKernel {
    std::size_t classes = 0;
    std::vector<double> prob; ///< row-major classes x classes, symmetric, in [0,1]
};

/// Validates an arity-2 kernel for graph sampling: SymmetryError if it is
/// not symmetric, RangeError if a value falls outside [0,1], ArityError for
/// other arities.
EdgeKernel edge_kernel(const Kernel& k);

/// Edges {i,j} present iff unit_uniform(seed, 1, i, j) < prob[class_i][class_j].
RandomGraph sample_graph_from_classes(const EdgeKernel& ek, Latents latents, std::uint64_t seed,
                                      unsigned threads = 1);

/// W-random graph from a symmetric unit-valued arity-2 kernel. Table kernels
/// draw each latent atom through the quantile of the atom-index CDF; step
/// kernels through lookup_cell. Both map X_i to the same atom.
RandomGraph sample_graph(const Kernel& k, std::size_t n, std::uint64_t seed, unsigned threads = 1);

struct KernelSample {
    std::string name;
    std::size_t arity = 0;
    std::vector<std::vector<std::uint32_t>> tuples; ///< distinct 1-based indices, lexicographic
    std::vector<double> values;
};

struct SampleArray {
    std::size_t n = 0;
    Latents latents;
    std::vector<KernelSample> kernels;
};

/// Every ordered tuple of distinct indices in [n], lexicographic, 1-based.
std::vector<std::vector<std::uint32_t>> distinct_tuples(std::size_t n, std::size_t arity);

/// Values of every kernel at every ordered distinct-index tuple. Throws
/// ArityError when some arity exceeds n.
SampleArray sample_array(const KernelFamily& family, std::size_t n, std::uint64_t seed);

} // namespace stdrep
