#include "stdrep/equivalence.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>
#include <unordered_map>

#include "stdrep/errors.hpp"
#include "stdrep/stats.hpp"

namespace stdrep {

std::size_t enumeration_cap() {
    if (const char* env = std::getenv("REP_MAX_ENUM")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return kDefaultEnumCap;
}

double JointLaw::total_mass() const {
    double s = 0.0;
    for (const auto& p : support) s += p.prob;
    return s;
}

std::vector<LawKey> law_keys(const KernelFamily& family, std::size_t n) {
    std::vector<LawKey> keys;
    for (const auto& k : family.kernels())
        for (auto& t : distinct_tuples(n, k.arity())) keys.push_back({k.name(), std::move(t)});
    return keys;
}

namespace {

using BitKey = std::vector<std::uint64_t>;

struct BitKeyHash {
    std::size_t operator()(const BitKey& k) const noexcept {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto w : k) {
            h ^= w;
            h *= 0x100000001b3ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

BitKey bits_of(const std::vector<double>& v) {
    BitKey k(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) k[i] = std::bit_cast<std::uint64_t>(v[i]);
    return k;
}

std::vector<double> values_of(const BitKey& k) {
    std::vector<double> v(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) v[i] = std::bit_cast<double>(k[i]);
    return v;
}

// Fixed block size, so the reduction order does not depend on thread count.
constexpr std::size_t kEnumBlock = std::size_t(1) << 14;

} // namespace

std::pair<std::shared_ptr<const DiscreteSpace>, KernelFamily>
step_family_as_space(const KernelFamily& step_family) {
    const auto& partition = *step_family.partition();
    auto space = std::make_shared<const DiscreteSpace>(
        validate_space(SpaceSpec{partition.cell_labels(), partition.lengths()}));
    std::vector<Kernel> tables;
    for (const auto& k : step_family.kernels())
        tables.push_back(Kernel::table(k.name(), space, k.arity(), k.value_space(), k.values(),
                                       k.symmetric()));
    return {space, KernelFamily(std::move(tables))};
}

JointLaw exact_joint_law(const KernelFamily& family, std::size_t n, EnumOptions opts) {
    if (family.empty()) throw SpecError("exact_joint_law: empty family");
    if (family.body() == KernelBody::Step) {
        auto [space, tables] = step_family_as_space(family);
        return exact_joint_law(*space, tables, n, opts);
    }
    return exact_joint_law(*family.space(), family, n, opts);
}

JointLaw exact_joint_law(const DiscreteSpace& space, const KernelFamily& family, std::size_t n,
                         EnumOptions opts) {
    if (family.body() != KernelBody::Table)
        throw SpecError("exact_joint_law: expected a table family over the given space");
    if (!(*family.space() == space))
        throw SpecError("exact_joint_law: family is defined over a different space");
    if (n == 0) throw DomainError("exact_joint_law: n must be at least 1");
    for (const auto& k : family.kernels())
        if (k.arity() > n)
            throw ArityError("kernel '" + k.name() + "': arity " + std::to_string(k.arity()) +
                             " exceeds n = " + std::to_string(n));
    const std::size_t cap = opts.cap ? opts.cap : enumeration_cap();
    std::size_t total = 0;
    try {
        total = tuple_count(space.size(), n, cap);
    } catch (const ScaleError&) {
        throw ScaleError("exact_joint_law: " + std::to_string(space.size()) + "^" +
                         std::to_string(n) + " assignments exceed the enumeration cap " +
                         std::to_string(cap) + "; use the Monte Carlo mode (--mode mc)");
    }

    JointLaw law;
    law.n = n;
    law.keys = law_keys(family, n);

    struct KeyRef {
        const Kernel* kernel;
        std::vector<std::size_t> positions;
    };
    std::vector<KeyRef> refs;
    for (const auto& key : law.keys) {
        KeyRef r{&family.find(key.kernel), {}};
        for (auto i : key.tuple) r.positions.push_back(i - 1);
        refs.push_back(std::move(r));
    }

    const std::size_t d = space.size();
    const auto& probs = space.probs();
    const std::size_t blocks = (total + kEnumBlock - 1) / kEnumBlock;
    using Partial = std::unordered_map<BitKey, double, BitKeyHash>;
    std::vector<Partial> partial(blocks);

    auto run_block = [&](std::size_t b) {
        const std::size_t begin = b * kEnumBlock;
        const std::size_t end = std::min(total, begin + kEnumBlock);
        std::vector<std::size_t> omega(n);
        for (std::size_t r = n, rem = begin; r-- > 0; rem /= d) omega[r] = rem % d;
        std::vector<std::size_t> at;
        BitKey key(refs.size());
        auto& out = partial[b];
        for (std::size_t idx = begin; idx < end; ++idx, next_tuple(omega, d)) {
            double p = 1.0;
            for (auto a : omega) p *= probs[a];
            if (p == 0.0) continue;
            for (std::size_t q = 0; q < refs.size(); ++q) {
                at.resize(refs[q].positions.size());
                for (std::size_t r = 0; r < at.size(); ++r) at[r] = omega[refs[q].positions[r]];
                key[q] = std::bit_cast<std::uint64_t>(refs[q].kernel->at(at));
            }
            out[key] += p;
        }
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(blocks)));
    if (threads <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t b; (b = next.fetch_add(1)) < blocks;) run_block(b);
            });
    }

    std::map<BitKey, double> merged;
    for (auto& part : partial) {
        // Sorting each partial fixes the order of additions within a block too.
        std::vector<std::pair<BitKey, double>> sorted(part.begin(), part.end());
        std::sort(sorted.begin(), sorted.end());
        for (auto& [k, p] : sorted) merged[k] += p;
    }
    law.support.reserve(merged.size());
    for (const auto& [k, p] : merged) law.support.push_back({values_of(k), p});
    return law;
}

double tv_distance(const JointLaw& a, const JointLaw& b) {
    if (a.keys != b.keys) throw SpecError("tv_distance: laws have different key structures");
    std::map<BitKey, std::pair<double, double>> both;
    for (const auto& s : a.support) both[bits_of(s.values)].first += s.prob;
    for (const auto& s : b.support) both[bits_of(s.values)].second += s.prob;
    double sum = 0.0;
    for (const auto& [k, pq] : both) sum += std::abs(pq.first - pq.second);
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

ExchangeabilityReport exchangeability_check(const JointLaw& law, double tol) {
    ExchangeabilityReport rep;
    std::map<std::pair<std::string, std::vector<std::uint32_t>>, std::size_t> index;
    for (std::size_t q = 0; q < law.keys.size(); ++q)
        index[{law.keys[q].kernel, law.keys[q].tuple}] = q;

    std::vector<std::uint32_t> perm(law.n);
    std::iota(perm.begin(), perm.end(), 1u);
    std::vector<std::size_t> source(law.keys.size());
    while (std::next_permutation(perm.begin(), perm.end())) {
        // Coordinate (k, t) of the relabeled law reads (k, perm(t)).
        for (std::size_t q = 0; q < law.keys.size(); ++q) {
            auto t = law.keys[q].tuple;
            for (auto& i : t) i = perm[i - 1];
            source[q] = index.at({law.keys[q].kernel, t});
        }
        JointLaw moved;
        moved.n = law.n;
        moved.keys = law.keys;
        for (const auto& s : law.support) {
            SupportPoint m{std::vector<double>(s.values.size()), s.prob};
            for (std::size_t q = 0; q < source.size(); ++q) m.values[q] = s.values[source[q]];
            moved.support.push_back(std::move(m));
        }
        const double tv = tv_distance(law, moved);
        if (tv > rep.max_tv) {
            rep.max_tv = tv;
            rep.worst_permutation = perm;
        }
    }
    rep.pass = rep.max_tv <= tol;
    return rep;
}

ExchangeabilityReport exchangeability_check(const KernelFamily& family, std::size_t n, double tol,
                                            EnumOptions opts) {
    return exchangeability_check(exact_joint_law(family, n, opts), tol);
}

PatternGraph PatternGraph::edge() { return {2, {{0, 1}}}; }
PatternGraph PatternGraph::triangle() { return cycle(3); }

PatternGraph PatternGraph::cycle(std::size_t k) {
    if (k < 3) throw SpecError("pattern: cycles need at least 3 vertices");
    PatternGraph g{k, {}};
    for (std::size_t v = 0; v < k; ++v) g.edges.emplace_back(v, (v + 1) % k);
    return g;
}

PatternGraph PatternGraph::path(std::size_t edges) {
    if (edges < 1) throw SpecError("pattern: paths need at least one edge");
    PatternGraph g{edges + 1, {}};
    for (std::size_t v = 0; v < edges; ++v) g.edges.emplace_back(v, v + 1);
    return g;
}

PatternGraph PatternGraph::named(const std::string& name) {
    if (name == "edge") return edge();
    if (name == "triangle") return triangle();
    if (name.size() >= 2 && (name[0] == 'c' || name[0] == 'p') &&
        std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        const std::size_t k = std::stoul(name.substr(1));
        if (k > 12) throw SpecError("pattern '" + name + "': too large");
        return name[0] == 'c' ? cycle(k) : path(k);
    }
    throw SpecError("unknown pattern '" + name + "' (expected edge, triangle, cK or pK)");
}

double hom_density(const Kernel& k, const PatternGraph& pattern) {
    if (k.arity() != 2) throw ArityError("hom_density: kernel '" + k.name() + "' is not arity 2");
    const std::vector<double> weights =
        k.body() == KernelBody::Step ? k.partition()->lengths() : k.space()->probs();
    const std::size_t d = k.domain_size();
    const auto& w = k.values();
    tuple_count(d, pattern.vertices, enumeration_cap());

    std::vector<std::size_t> c(pattern.vertices, 0);
    double sum = 0.0;
    do {
        double term = 1.0;
        for (auto v : c) term *= weights[v];
        if (term == 0.0) continue;
        for (auto [u, v] : pattern.edges) term *= w[c[u] * d + c[v]];
        sum += term;
    } while (next_tuple(c, d));
    return sum;
}

std::vector<double> graph_law_exact(const Kernel& k, std::size_t n, std::size_t cap) {
    const EdgeKernel ek = edge_kernel(k);
    if (n == 0) throw DomainError("graph_law_exact: n must be at least 1");
    if (!cap) cap = enumeration_cap();
    const std::size_t pairs = n * (n - 1) / 2;
    if (pairs >= 40) throw ScaleError("graph_law_exact: too many vertex pairs");
    const std::size_t graphs = std::size_t(1) << pairs;
    const std::size_t assignments = tuple_count(ek.classes, n, cap);
    if (assignments > cap / graphs)
        throw ScaleError("graph_law_exact: 2^C(n,2) * K^n exceeds the enumeration cap");

    const std::vector<double> weights =
        k.body() == KernelBody::Step ? k.partition()->lengths() : k.space()->probs();
    std::vector<double> law(graphs, 0.0);
    std::vector<double> cond(graphs);
    std::vector<std::size_t> c(n, 0);
    do {
        double wgt = 1.0;
        for (auto v : c) wgt *= weights[v];
        if (wgt == 0.0) continue;
        cond[0] = 1.0;
        std::size_t filled = 1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double p = ek.prob[c[i] * ek.classes + c[j]];
                for (std::size_t g = 0; g < filled; ++g) {
                    cond[g + filled] = cond[g] * p;
                    cond[g] *= 1.0 - p;
                }
                filled *= 2;
            }
        for (std::size_t g = 0; g < graphs; ++g) law[g] += wgt * cond[g];
    } while (next_tuple(c, ek.classes));
    return law;
}

std::uint64_t graph_code(const RandomGraph& g) {
    std::uint64_t code = 0;
    const std::uint64_t n = g.n;
    for (auto [i, j] : g.edges) {
        const std::uint64_t e = (i - 1) * n - (i - 1) * i / 2 + (j - i - 1);
        code |= std::uint64_t{1} << e;
    }
    return code;
}

std::uint64_t triangle_count(const RandomGraph& g) {
    const std::size_t words = (g.n + 63) / 64;
    std::vector<std::uint64_t> adj(g.n * words, 0);
    for (auto [i, j] : g.edges) {
        adj[(i - 1) * words + (j - 1) / 64] |= std::uint64_t{1} << ((j - 1) % 64);
        adj[(j - 1) * words + (i - 1) / 64] |= std::uint64_t{1} << ((i - 1) % 64);
    }
    std::uint64_t count = 0;
    for (auto [i, j] : g.edges) {
        const auto* a = &adj[(i - 1) * words];
        const auto* b = &adj[(j - 1) * words];
        for (std::size_t w = 0; w < words; ++w) count += std::popcount(a[w] & b[w]);
    }
    return count / 3;
}

McReport mc_two_sample_test(const GraphSampler& a, const GraphSampler& b, std::size_t n,
                            std::size_t runs, std::uint64_t seed, double alpha) {
    McReport rep;
    rep.alpha = alpha;
    if (runs < 2) throw PowerError("mc_two_sample_test: at least two runs per sampler", 2);

    if (n <= kLabeledGraphMaxN) {
        rep.method = "labeled-graph chi-squared";
        const std::size_t graphs = std::size_t(1) << (n * (n - 1) / 2);
        std::vector<std::uint64_t> ca(graphs, 0);
        std::vector<std::uint64_t> cb(graphs, 0);
        for (std::size_t r = 0; r < runs; ++r) {
            ++ca[graph_code(a(n, run_seed(seed, 2 * r)))];
            ++cb[graph_code(b(n, run_seed(seed, 2 * r + 1)))];
        }
        const auto res = stats::chi_squared_two_sample(ca, cb);
        rep.p_values["labeled_graphs"] = res.p_value;
        rep.statistics["chi2"] = res.statistic;
        rep.statistics["dof"] = res.dof;
        rep.pass = res.p_value >= alpha;
        return rep;
    }

    rep.method = "edge/triangle z-tests (Bonferroni)";
    std::vector<double> ea, eb, ta, tb;
    for (std::size_t r = 0; r < runs; ++r) {
        const auto ga = a(n, run_seed(seed, 2 * r));
        const auto gb = b(n, run_seed(seed, 2 * r + 1));
        ea.push_back(static_cast<double>(ga.edges.size()));
        eb.push_back(static_cast<double>(gb.edges.size()));
        ta.push_back(static_cast<double>(triangle_count(ga)));
        tb.push_back(static_cast<double>(triangle_count(gb)));
    }
    const std::pair<const char*, stats::TestResult> tests[] = {
        {"edges_mean", stats::z_test_means(ea, eb)},
        {"edges_var", stats::z_test_variances(ea, eb)},
        {"triangles_mean", stats::z_test_means(ta, tb)},
        {"triangles_var", stats::z_test_variances(ta, tb)},
    };
    const double level = alpha / static_cast<double>(std::size(tests));
    for (const auto& [name, res] : tests) {
        rep.p_values[name] = res.p_value;
        rep.statistics[std::string(name) + "_z"] = res.statistic;
        if (res.p_value < level) rep.pass = false;
    }
    return rep;
}

} // namespace stdrep
