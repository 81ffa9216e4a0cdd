// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. `--only 5,6,8` restricts the run.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "stdrep/cli.hpp"
#include "stdrep/equivalence.hpp"
#include "stdrep/errors.hpp"
#include "stdrep/io.hpp"
#include "stdrep/representation.hpp"
#include "stdrep/sampling.hpp"
#include "stdrep/simd/coins.hpp"
#include "stdrep/stats.hpp"
#include "support.hpp"

using namespace stdrep;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

struct GridInstance {
    SpacePtr space;
    KernelFamily family;
};

// |Omega| in {2,3,4}, 20 instances each, at most two kernels of arity <= 2.
std::vector<GridInstance> grid() {
    std::mt19937_64 rng(20240601);
    std::vector<GridInstance> out;
    for (std::size_t atoms : {2u, 3u, 4u})
        for (int rep = 0; rep < 20; ++rep) {
            auto s = testsupport::random_space(rng, atoms);
            out.push_back({s, testsupport::random_family(rng, s, 2)});
        }
    return out;
}

// Kernels with arity <= n; an arity-2 kernel has no coordinates at n = 1.
std::optional<KernelFamily> usable(const KernelFamily& f, std::size_t n) {
    std::vector<Kernel> ks;
    for (const auto& k : f.kernels())
        if (k.arity() <= n) ks.push_back(k);
    if (ks.empty()) return std::nullopt;
    return KernelFamily(std::move(ks));
}

Outcome criterion1() {
    double worst = 0.0, worst_oracle = 0.0;
    std::size_t laws = 0;
    for (const auto& g : grid()) {
        const auto rep = KernelFamily(represent_family(g.family));
        for (std::size_t n = 1; n <= 3; ++n) {
            auto src = usable(g.family, n);
            if (!src) continue;
            auto dst = *usable(rep, n);
            const auto la = exact_joint_law(*src, n);
            const auto lb = exact_joint_law(dst, n);
            worst = std::max(worst, tv_distance(la, lb));
            worst_oracle =
                std::max(worst_oracle, testsupport::oracle_tv(testsupport::oracle_joint_law(*src, n), la));
            ++laws;
        }
    }
    return {worst <= 1e-9 && worst_oracle <= 1e-9,
            std::to_string(laws) + " laws, max TV " + fmt("%.3g", worst) + ", max oracle TV " +
                fmt("%.3g", worst_oracle)};
}

// A_i = atoms whose index has bit i set: separating for any |Omega|.
Generators binary_digits(const DiscreteSpace& s) {
    Generators g;
    for (std::size_t bit = 0; (std::size_t(1) << bit) < s.size(); ++bit) {
        std::vector<std::string> set;
        for (std::size_t k = 0; k < s.size(); ++k)
            if (k >> bit & 1) set.push_back(s.id(k));
        g.push_back(set);
    }
    return g;
}

Outcome criterion2() {
    double worst = 0.0;
    std::size_t laws = 0;
    for (const auto& g : grid()) {
        const auto direct = KernelFamily(represent_family(g.family));
        const auto cantor = cantor_represent_family(g.family, binary_digits(*g.space)).family;
        for (std::size_t n = 1; n <= 3; ++n) {
            auto a = usable(direct, n);
            if (!a) continue;
            worst = std::max(worst, tv_distance(exact_joint_law(*a, n),
                                                exact_joint_law(*usable(cantor, n), n)));
            ++laws;
        }
    }

    // Generators that merge a and b, against kernels telling a from b.
    std::mt19937_64 rng(77);
    std::size_t witnesses = 0, bad = 0;
    for (std::size_t atoms : {3u, 4u})
        for (int rep = 0; rep < 10; ++rep) {
            auto s = testsupport::random_space(rng, atoms);
            const std::size_t arity = 1 + rep % 2;
            auto vals = testsupport::random_values(rng, atoms, arity, ValueSpace::real(), arity == 2);
            vals[0] = 100.0; // f(a, ...) differs from f(b, ...)
            if (arity == 2) vals[atoms] = vals[1] = -100.0; // f(b,a) = f(a,b)
            auto f = Kernel::table("f", s, arity, ValueSpace::real(), vals, arity == 2);
            try {
                cantor_represent_family(KernelFamily({f}), Generators{{"a", "b"}});
                ++bad;
            } catch (const MeasurabilityError& e) {
                const auto& x = e.witness_first();
                const auto& y = e.witness_second();
                const auto codes = cantor_encode(*s, Generators{{"a", "b"}});
                bool same_class = x.size() == arity && y.size() == arity;
                for (std::size_t r = 0; same_class && r < arity; ++r)
                    same_class = codes[s->index_of(x[r])] == codes[s->index_of(y[r])];
                if (same_class && eval_kernel(f, x) != eval_kernel(f, y))
                    ++witnesses;
                else
                    ++bad;
            }
        }
    return {worst <= 1e-9 && bad == 0,
            std::to_string(laws) + " laws, max TV " + fmt("%.3g", worst) + ", " +
                std::to_string(witnesses) + "/20 valid witnesses"};
}

Outcome criterion3() {
    std::mt19937_64 rng(3);
    std::size_t bad = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t jumps = 1 + rng() % 10;
        std::vector<double> xs(jumps), w(jumps);
        double x = std::normal_distribution<double>(0.0, 5.0)(rng);
        for (auto& v : xs) v = (x += 0.01 + std::exponential_distribution<double>(1.0)(rng));
        double sum = 0.0;
        for (auto& v : w) sum += (v = std::uniform_real_distribution<double>(0.01, 1.0)(rng));
        std::vector<double> cs(jumps);
        double acc = 0.0;
        for (std::size_t j = 0; j < jumps; ++j) cs[j] = (acc += w[j] / sum);
        cs.back() = 1.0;
        const auto F = Cdf::step(xs, cs);
        // quantile is nondecreasing, so the preimage of x_j is the interval
        // [c_{j-1}, c_j) when its endpoints map as below; its Lebesgue
        // measure is then exactly the jump of F at x_j.
        for (std::size_t j = 0; j < jumps; ++j) {
            const double lo = j ? F.cs()[j - 1] : 0.0;
            const double hi = F.cs()[j];
            if (quantile(F, lo) != xs[j]) ++bad;
            if (quantile(F, std::nextafter(hi, 0.0)) != xs[j]) ++bad;
            if (j > 0 && quantile(F, std::nextafter(lo, 0.0)) != xs[j - 1]) ++bad;
            // Right-continuity at the jump cumulative: u = c_j already maps past x_j.
            if (j + 1 < jumps && quantile(F, hi) != xs[j + 1]) ++bad;
        }
        for (int t = 0; t < 100; ++t) {
            const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            const auto j = static_cast<std::size_t>(
                std::upper_bound(F.cs().begin(), F.cs().end(), u) - F.cs().begin());
            if (quantile(F, u) != xs[std::min(j, jumps - 1)]) ++bad;
        }
    }
    return {bad == 0, "50 step CDFs, " + std::to_string(bad) + " mismatches"};
}

Outcome criterion4() {
    std::mt19937_64 rng(4);
    int passes = 0;
    double min_p = 1.0;
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t pieces = 1 + rng() % 6;
        std::vector<double> knots{std::normal_distribution<double>(0.0, 2.0)(rng)};
        for (std::size_t k = 0; k < pieces; ++k)
            knots.push_back(knots.back() + 0.05 + std::exponential_distribution<double>(1.0)(rng));
        std::vector<double> mass(pieces);
        double sum = 0.0;
        for (auto& m : mass) sum += (m = std::uniform_real_distribution<double>(0.05, 1.0)(rng));
        std::vector<double> vals{0.0};
        for (auto m : mass) vals.push_back(vals.back() + m / sum);
        vals.back() = 1.0;
        const auto F = Cdf::piecewise_linear(knots, vals);
        const auto T = transport_map(F);

        // Draws from the encoded law by an independent route: choose a piece
        // by its mass, then a uniform point inside it.
        std::discrete_distribution<std::size_t> piece(mass.begin(), mass.end());
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> moved(100000);
        for (auto& y : moved) {
            const std::size_t k = piece(rng);
            y = T(knots[k] + unif(rng) * (knots[k + 1] - knots[k]));
        }
        const double p = stats::ks_uniform(moved).p_value;
        min_p = std::min(min_p, p);
        passes += p > 0.01;
    }
    return {passes >= 9, std::to_string(passes) + "/10 pass KS at 0.01, min p " + fmt("%.3g", min_p)};
}

Outcome criterion5() {
    auto s = testsupport::make_space({"x"}, {1.0});
    auto f = Kernel::table("f", s, 2, ValueSpace::unit(), {0.3}, true);
    const std::size_t n = 1000, runs = 200;
    const double pairs = n * (n - 1) / 2.0;
    double total = 0.0;
    for (std::size_t r = 0; r < runs; ++r)
        total += static_cast<double>(sample_graph(f, n, run_seed(5, r)).edges.size());
    const double mean = total / runs;
    const double sigma = std::sqrt(pairs * 0.3 * 0.7);
    const double dev = std::abs(mean - 0.3 * pairs);
    const double bound = 4.0 * sigma / std::sqrt(static_cast<double>(runs));
    return {dev <= bound, "mean " + fmt("%.2f", mean) + ", |dev| " + fmt("%.2f", dev) + " <= " +
                              fmt("%.2f", bound) + " [" + simd::isa_name(simd::active_isa()) + "]"};
}

Outcome criterion6() {
    auto part = std::make_shared<const IntervalPartition>(std::vector<double>{0.0, 0.4, 1.0},
                                                          std::vector<std::string>{"L", "R"});
    auto w = Kernel::step("w", part, 2, ValueSpace::unit(), {0.8, 0.15, 0.15, 0.5}, true);
    const auto law = graph_law_exact(w, 3);
    std::vector<std::uint64_t> counts(law.size(), 0);
    const std::size_t runs = 100000;
    for (std::size_t r = 0; r < runs; ++r) ++counts[graph_code(sample_graph(w, 3, run_seed(6, r)))];
    const auto t = stats::chi_squared_gof(counts, law);
    return {t.p_value > 0.01, "chi2 " + fmt("%.3f", t.statistic) + " on " + fmt("%.0f", t.dof) +
                                  " dof, p " + fmt("%.4f", t.p_value)};
}

Outcome criterion7() {
    const auto spec = io::load_spec(std::string(STDREP_TEST_DATA) + "/demo3.json");
    const Kernel& f = spec.family.find("f");
    const auto g = represent_family(spec.family)[0];
    GraphSampler a = [&](std::size_t n, std::uint64_t s) { return sample_graph(f, n, s); };
    GraphSampler b = [&](std::size_t n, std::uint64_t s) { return sample_graph(g, n, s); };
    const auto r = mc_two_sample_test(a, b, 3, 10000, 7, 0.01);
    double p = 1.0;
    for (const auto& [k, v] : r.p_values) p = std::min(p, v);
    return {r.pass, r.method + ", min p " + fmt("%.4f", p)};
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Outcome criterion8() {
    const auto dir = fs::temp_directory_path() / "stdrep_acceptance";
    fs::create_directories(dir);
    const std::string spec = std::string(STDREP_TEST_DATA) + "/demo3.json";
    std::set<std::uint64_t> hashes;
    std::size_t bytes = 0;
    int runs = 0;
    for (const char* threads : {"1", "8"})
        for (int again = 0; again < 2; ++again) {
            const auto out = dir / ("edges_" + std::string(threads) + "_" + std::to_string(again));
            std::ostringstream sink, err;
            const int code = cli::run({"stdrep", "sample", spec, "--n", "3000", "--seed", "8",
                                       "--threads", threads, "--out", out.string()},
                                      sink, err);
            if (code != 0) return {false, "sample exited " + std::to_string(code) + ": " + err.str()};
            std::ifstream in(out, std::ios::binary);
            std::ostringstream buf;
            buf << in.rdbuf();
            bytes = buf.str().size();
            hashes.insert(fnv1a(buf.str()));
            ++runs;
        }
    char h[32];
    std::snprintf(h, sizeof h, "%016llx", static_cast<unsigned long long>(*hashes.begin()));
    return {hashes.size() == 1 && bytes > 0,
            std::to_string(runs) + " files, " + std::to_string(hashes.size()) + " distinct hash (" +
                h + ", " + std::to_string(bytes) + " bytes)"};
}

Outcome criterion9() {
    std::mt19937_64 rng(9);
    std::size_t ok = 0;
    for (int rep = 0; rep < 100; ++rep) {
        auto s = testsupport::random_space(rng, 1 + rng() % 5, true);
        const std::size_t arity = 2 + rep % 2;
        const auto vs = testsupport::random_value_space(rng);
        auto f = Kernel::table("f", s, arity, vs,
                               testsupport::random_values(rng, s->size(), arity, vs, true), true);
        const auto g = represent_family(KernelFamily({f}))[0];
        ok += check_symmetry(g).symmetric;
    }
    return {ok == 100, std::to_string(ok) + "/100 represented kernels symmetric"};
}

Outcome criterion10() {
    std::size_t laws = 0, fails = 0;
    double worst = 0.0;
    for (const auto& g : grid()) {
        const auto rep = KernelFamily(represent_family(g.family));
        for (const auto* fam : {&g.family, &rep}) {
            const auto r = exchangeability_check(*fam, 3);
            worst = std::max(worst, r.max_tv);
            fails += !r.pass;
            ++laws;
        }
    }
    return {fails == 0, std::to_string(laws) + " laws x 6 permutations, max TV " + fmt("%.3g", worst)};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    std::vector<int> only;
    app.add_option("--only", only, "Comma-separated criterion numbers")->delimiter(',');
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<Outcome()>> criteria{
        criterion1, criterion2, criterion3, criterion4, criterion5,
        criterion6, criterion7, criterion8, criterion9, criterion10};

    int failures = 0;
    for (std::size_t c = 0; c < criteria.size(); ++c) {
        const int id = static_cast<int>(c) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[c]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d: %s  (%.2fs)  %s\n", id, o.pass ? "PASS" : "FAIL", secs,
                    o.detail.c_str());
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
