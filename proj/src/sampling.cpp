#include "stdrep/sampling.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "stdrep/errors.hpp"
#include "stdrep/representation.hpp"
#include "stdrep/simd/coins.hpp"

namespace stdrep {

double unit_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t i,
                    std::uint64_t j) noexcept {
    return simd::to_unit(simd::mix(seed, stream, i, j));
}

std::uint64_t run_seed(std::uint64_t base, std::uint64_t run) noexcept {
    return simd::avalanche(base ^ simd::avalanche(run + simd::kGolden));
}

namespace {

void check_vertex_count(std::size_t n) {
    if (n == kInfiniteVertices) throw UnsupportedError("infinite vertex sets are not supported");
    if (n == 0) throw DomainError("vertex count must be at least 1");
    if (n > std::numeric_limits<std::uint32_t>::max())
        throw ScaleError("vertex count exceeds 2^32-1");
}

std::vector<double> latent_uniforms(std::size_t n, std::uint64_t seed) {
    std::vector<double> u(n);
    simd::uniform_row(seed, kStreamLatent, 0, 1, n, u.data());
    return u;
}

} // namespace

Latents sample_latents(const IntervalPartition& partition, std::size_t n, std::uint64_t seed) {
    check_vertex_count(n);
    Latents out;
    out.u = latent_uniforms(n, seed);
    out.cells.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.cells[i] = lookup_cell(partition, out.u[i]);
    return out;
}

Latents sample_latents(const DiscreteSpace& space, std::size_t n, std::uint64_t seed) {
    return sample_latents(interval_partition(space), n, seed);
}

EdgeKernel edge_kernel(const Kernel& k) {
    if (k.arity() != 2)
        throw ArityError("kernel '" + k.name() + "': graph sampling needs arity 2");
    for (double v : k.values())
        if (!(v >= 0.0 && v <= 1.0))
            throw RangeError("kernel '" + k.name() + "': edge probabilities must lie in [0,1]");
    if (auto rep = check_symmetry(k); !rep.symmetric)
        throw SymmetryError("kernel '" + k.name() + "': graph sampling needs a symmetric kernel");
    return EdgeKernel{k.domain_size(), k.values()};
}

RandomGraph sample_graph_from_classes(const EdgeKernel& ek, Latents latents, std::uint64_t seed,
                                      unsigned threads) {
    const std::size_t n = latents.u.size();
    check_vertex_count(n);
    threads = std::max(1u, threads);

    // Row i (1-based) holds the n - i pairs (i, j > i). Chunks of rows get
    // roughly equal pair counts.
    const std::size_t total = n * (n - 1) / 2;
    std::vector<std::size_t> row_start{1};
    {
        std::size_t acc = 0;
        std::size_t chunk = 1;
        for (std::size_t i = 1; i < n && chunk < threads; ++i) {
            acc += n - i;
            if (acc * threads >= total * chunk) {
                row_start.push_back(i + 1);
                ++chunk;
            }
        }
        row_start.push_back(n);
    }
    const std::size_t chunks = row_start.size() - 1;

    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> parts(chunks);
    auto work = [&](std::size_t c) {
        std::vector<double> thr(n);
        std::vector<std::uint8_t> hit(n);
        auto& out = parts[c];
        for (std::size_t i = row_start[c]; i < row_start[c + 1]; ++i) {
            const std::size_t count = n - i;
            const double* row = ek.prob.data() + latents.cells[i - 1] * ek.classes;
            for (std::size_t t = 0; t < count; ++t) thr[t] = row[latents.cells[i + t]];
            simd::edge_row(seed, i, i + 1, count, thr.data(), hit.data());
            for (std::size_t t = 0; t < count; ++t)
                if (hit[t])
                    out.emplace_back(static_cast<std::uint32_t>(i),
                                     static_cast<std::uint32_t>(i + 1 + t));
        }
    };

    if (chunks <= 1) {
        if (chunks == 1) work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(chunks);
        for (std::size_t c = 0; c < chunks; ++c) pool.emplace_back(work, c);
    }

    RandomGraph g;
    g.n = n;
    std::size_t m = 0;
    for (const auto& p : parts) m += p.size();
    g.edges.reserve(m);
    for (auto& p : parts) g.edges.insert(g.edges.end(), p.begin(), p.end());
    g.latents = std::move(latents);
    return g;
}

RandomGraph sample_graph(const Kernel& k, std::size_t n, std::uint64_t seed, unsigned threads) {
    const EdgeKernel ek = edge_kernel(k);
    check_vertex_count(n);
    Latents lat;
    if (k.body() == KernelBody::Step) {
        lat = sample_latents(*k.partition(), n, seed);
    } else {
        const auto& space = *k.space();
        std::vector<double> index(space.size());
        std::iota(index.begin(), index.end(), 0.0);
        const Cdf atom_cdf = cdf_of_pushforward(space, index);
        lat.u = latent_uniforms(n, seed);
        lat.cells.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            lat.cells[i] = static_cast<std::size_t>(quantile(atom_cdf, lat.u[i]));
    }
    return sample_graph_from_classes(ek, std::move(lat), seed, threads);
}

std::vector<std::vector<std::uint32_t>> distinct_tuples(std::size_t n, std::size_t arity) {
    std::vector<std::vector<std::uint32_t>> out;
    if (arity == 0 || arity > n) return out;
    std::vector<std::uint32_t> t(arity);
    std::vector<bool> used(n + 1, false);
    // Depth-first over positions yields lexicographic order.
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == arity) {
            out.push_back(t);
            return;
        }
        for (std::uint32_t v = 1; v <= n; ++v) {
            if (used[v]) continue;
            used[v] = true;
            t[pos] = v;
            self(self, pos + 1);
            used[v] = false;
        }
    };
    rec(rec, 0);
    return out;
}

SampleArray sample_array(const KernelFamily& family, std::size_t n, std::uint64_t seed) {
    check_vertex_count(n);
    for (const auto& k : family.kernels())
        if (k.arity() > n)
            throw ArityError("kernel '" + k.name() + "': arity " + std::to_string(k.arity()) +
                             " exceeds n = " + std::to_string(n));
    SampleArray out;
    out.n = n;
    out.latents = family.body() == KernelBody::Step ? sample_latents(*family.partition(), n, seed)
                                                     : sample_latents(*family.space(), n, seed);
    std::vector<std::size_t> cells;
    for (const auto& k : family.kernels()) {
        KernelSample ks;
        ks.name = k.name();
        ks.arity = k.arity();
        ks.tuples = distinct_tuples(n, k.arity());
        ks.values.reserve(ks.tuples.size());
        cells.resize(k.arity());
        for (const auto& t : ks.tuples) {
            for (std::size_t r = 0; r < t.size(); ++r) cells[r] = out.latents.cells[t[r] - 1];
            ks.values.push_back(k.at(cells));
        }
        out.kernels.push_back(std::move(ks));
    }
    return out;
}

} // namespace stdrep
