#pragma once

// Deciding whether two kernel families induce the same joint law of all
// evaluations at iid points: exactly by enumeration on small instances,
// statistically by Monte Carlo beyond that.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stdrep/kernels.hpp"
#include "stdrep/sampling.hpp"
#include "stdrep/spaces.hpp"

namespace stdrep {

inline constexpr std::size_t kDefaultEnumCap = 10'000'000;

/// The enumeration cap: REP_MAX_ENUM from the environment when set to a
/// positive integer, kDefaultEnumCap otherwise.
std::size_t enumeration_cap();

/// A coordinate of the joint law: kernel name and an ordered tuple of
/// distinct 1-based indices.
struct LawKey {
    std::string kernel;
    std::vector<std::uint32_t> tuple;
    friend bool operator==(const LawKey&, const LawKey&) = default;
};

struct SupportPoint {
    std::vector<double> values; ///< one entry per key
    double prob = 0.0;
};

/// Exact finite distribution of the value vector over all keys.
struct JointLaw {
    std::size_t n = 0;
    std::vector<LawKey> keys;
    std::vector<SupportPoint> support; ///< distinct vectors, sorted by bit pattern

    double total_mass() const;
};

/// Keys for a family at n points: kernels in family order, tuples
/// lexicographic within each kernel.
std::vector<LawKey> law_keys(const KernelFamily& family, std::size_t n);

struct EnumOptions {
    std::size_t cap = 0;    ///< 0 means enumeration_cap()
    unsigned threads = 1;   ///< affects speed only
};

/// Enumerates all of Omega^n. A step family is first converted with
/// step_family_as_space. Throws ArityError when an arity exceeds n and
/// ScaleError when |Omega|^n exceeds the cap.
JointLaw exact_joint_law(const KernelFamily& family, std::size_t n, EnumOptions opts = {});
/// Same, additionally checking that the family lives on `space`.
JointLaw exact_joint_law(const DiscreteSpace& space, const KernelFamily& family, std::size_t n,
                         EnumOptions opts = {});

/// Cells become atoms (ids = cell labels, probabilities = lengths) and cell
/// maps become tables over them.
std::pair<std::shared_ptr<const DiscreteSpace>, KernelFamily>
step_family_as_space(const KernelFamily& step_family);

/// Half the L1 distance, matching support points bit-exactly. Throws
/// SpecError when the key structures differ.
double tv_distance(const JointLaw& a, const JointLaw& b);

struct ExchangeabilityReport {
    bool pass = true;
    double max_tv = 0.0;
    std::vector<std::uint32_t> worst_permutation; ///< 1-based image of 1..n
};

/// Relabels indices by every permutation of [n] and compares with the
/// original law at tolerance `tol`.
ExchangeabilityReport exchangeability_check(const JointLaw& law, double tol = 1e-9);
ExchangeabilityReport exchangeability_check(const KernelFamily& family, std::size_t n,
                                            double tol = 1e-9, EnumOptions opts = {});

struct PatternGraph {
    std::size_t vertices = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges; ///< 0-based

    static PatternGraph edge();
    static PatternGraph triangle();
    static PatternGraph cycle(std::size_t k);
    static PatternGraph path(std::size_t edges);
    /// "edge", "triangle", "c4", "cK", "pK"; throws SpecError otherwise.
    static PatternGraph named(const std::string& name);
};

/// t(F, k) = sum over maps c: V(F) -> cells of prod weight(c(v)) *
/// prod_{uv in E(F)} k(c(u), c(v)). Works for step and table kernels
/// (weights are cell lengths or atom probabilities).
double hom_density(const Kernel& k, const PatternGraph& pattern);

/// Probability of every labeled graph on [n]. Entry g is the graph whose
/// edge e (pairs (1,2),(1,3),...,(n-1,n) in that order) is present iff bit e
/// of g is set. Throws ScaleError past the cap.
std::vector<double> graph_law_exact(const Kernel& k, std::size_t n, std::size_t cap = 0);

/// Index into graph_law_exact's vector for a sampled graph.
std::uint64_t graph_code(const RandomGraph& g);

using GraphSampler = std::function<RandomGraph(std::size_t n, std::uint64_t seed)>;

struct McReport {
    bool pass = true;
    std::map<std::string, double> p_values;
    std::map<std::string, double> statistics;
    double alpha = 0.01;
    std::string method;
};

inline constexpr std::size_t kLabeledGraphMaxN = 5;

/// Two-sample comparison of graph samplers. n <= 5: chi-squared on labeled
/// graph frequencies. Larger n: z-tests on means and variances of edge and
/// triangle counts, Bonferroni-corrected. Sampler A draws run r with
/// run_seed(seed, 2r), sampler B with run_seed(seed, 2r+1).
McReport mc_two_sample_test(const GraphSampler& a, const GraphSampler& b, std::size_t n,
                            std::size_t runs, std::uint64_t seed, double alpha = 0.01);

std::uint64_t triangle_count(const RandomGraph& g);

} // namespace stdrep
