#pragma once

// Test-only builders, random instance generators, and brute-force oracles.
// The oracles deliberately avoid the library's enumeration and lookup code.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "stdrep/equivalence.hpp"
#include "stdrep/kernels.hpp"
#include "stdrep/spaces.hpp"

namespace testsupport {

using namespace stdrep;

inline SpacePtr make_space(std::vector<std::string> ids, std::vector<double> probs) {
    return std::make_shared<const DiscreteSpace>(validate_space({std::move(ids), std::move(probs)}));
}

inline std::vector<std::string> atom_names(std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t k = 0; k < n; ++k) ids.push_back(std::string(1, static_cast<char>('a' + k)));
    return ids;
}

/// Probabilities from normalized uniform weights; with `allow_zero`, one atom
/// in four is given probability zero (never all of them).
inline SpacePtr random_space(std::mt19937_64& rng, std::size_t atoms, bool allow_zero = false) {
    std::uniform_real_distribution<double> w(0.05, 1.0);
    std::bernoulli_distribution zero(0.25);
    std::vector<double> p(atoms);
    double sum = 0.0;
    for (std::size_t k = 0; k < atoms; ++k) {
        p[k] = (allow_zero && k > 0 && zero(rng)) ? 0.0 : w(rng);
        sum += p[k];
    }
    for (auto& x : p) x /= sum;
    return make_space(atom_names(atoms), p);
}

inline double random_value(std::mt19937_64& rng, const ValueSpace& vs) {
    switch (vs.kind) {
    case ValueKind::Real: return std::normal_distribution<double>(0.0, 3.0)(rng);
    case ValueKind::UnitInterval: return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    case ValueKind::FiniteLabels:
        return static_cast<double>(std::uniform_int_distribution<std::size_t>(0, vs.labels - 1)(rng));
    }
    return 0.0;
}

/// Random table with values from a small pool, so coincident values occur.
inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t domain,
                                         std::size_t arity, const ValueSpace& vs, bool symmetric) {
    std::vector<double> pool(3);
    for (auto& v : pool) v = random_value(rng, vs);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const std::size_t count = tuple_count(domain, arity);
    std::vector<double> values(count);
    std::vector<std::size_t> t(arity, 0);
    std::size_t off = 0;
    do {
        if (symmetric) {
            auto s = t;
            std::sort(s.begin(), s.end());
            std::size_t so = 0;
            for (auto c : s) so = so * domain + c;
            values[off] = so == off ? pool[pick(rng)] : values[so];
        } else {
            values[off] = pool[pick(rng)];
        }
        ++off;
    } while (next_tuple(t, domain));
    return values;
}

inline ValueSpace random_value_space(std::mt19937_64& rng) {
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
    case 0: return ValueSpace::real();
    case 1: return ValueSpace::finite_labels(3);
    default: return ValueSpace::unit();
    }
}

/// One or two kernels of arity at most `max_arity`.
inline KernelFamily random_family(std::mt19937_64& rng, const SpacePtr& space,
                                  std::size_t max_arity) {
    const std::size_t kernels = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    std::vector<Kernel> ks;
    for (std::size_t i = 0; i < kernels; ++i) {
        const std::size_t arity = std::uniform_int_distribution<std::size_t>(1, max_arity)(rng);
        const ValueSpace vs = random_value_space(rng);
        const bool sym = arity > 1 && std::bernoulli_distribution(0.5)(rng);
        ks.push_back(Kernel::table("k" + std::to_string(i), space, arity, vs,
                                   random_values(rng, space->size(), arity, vs, sym), sym));
    }
    return KernelFamily(std::move(ks));
}

/// Brute-force joint law: recursive enumeration of atom assignments, values
/// read through eval_kernel with atom ids, aggregation in an ordered map.
inline std::map<std::vector<double>, double> oracle_joint_law(const KernelFamily& family,
                                                              std::size_t n) {
    const auto& space = *family.space();
    std::map<std::vector<double>, double> law;
    std::vector<std::string> omega(n);
    auto rec = [&](auto&& self, std::size_t pos, double p) -> void {
        if (pos == n) {
            if (p == 0.0) return;
            std::vector<double> v;
            for (const auto& k : family.kernels())
                for (const auto& t : distinct_tuples(n, k.arity())) {
                    std::vector<std::string> atoms;
                    for (auto i : t) atoms.push_back(omega[i - 1]);
                    v.push_back(eval_kernel(k, atoms));
                }
            law[v] += p;
            return;
        }
        for (std::size_t a = 0; a < space.size(); ++a) {
            omega[pos] = space.id(a);
            self(self, pos + 1, p * space.prob(a));
        }
    };
    rec(rec, 0, 1.0);
    return law;
}

inline double oracle_tv(const std::map<std::vector<double>, double>& a, const JointLaw& b) {
    std::map<std::vector<double>, std::pair<double, double>> both;
    for (const auto& [v, p] : a) both[v].first += p;
    for (const auto& s : b.support) both[s.values].second += s.prob;
    double sum = 0.0;
    for (const auto& [v, pq] : both) sum += std::abs(pq.first - pq.second);
    return 0.5 * sum;
}

/// Brute-force homomorphism density for a 2-block style kernel given as a
/// weight vector and a dense matrix.
inline double oracle_density(const std::vector<double>& w, const std::vector<double>& m,
                             const std::vector<std::pair<int, int>>& edges, int vertices) {
    const int d = static_cast<int>(w.size());
    int total = 1;
    for (int v = 0; v < vertices; ++v) total *= d;
    double sum = 0.0;
    for (int code = 0; code < total; ++code) {
        std::vector<int> c(vertices);
        int x = code;
        for (int v = 0; v < vertices; ++v) {
            c[v] = x % d;
            x /= d;
        }
        double term = 1.0;
        for (int v = 0; v < vertices; ++v) term *= w[c[v]];
        for (auto [u, v] : edges) term *= m[c[u] * d + c[v]];
        sum += term;
    }
    return sum;
}

} // namespace testsupport
