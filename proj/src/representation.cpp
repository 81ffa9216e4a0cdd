#include "stdrep/representation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stdrep/errors.hpp"

namespace stdrep {

double quantile(const Cdf& cdf, double u) {
    if (!(u >= 0.0 && u < 1.0)) throw DomainError("quantile: u must lie in [0,1)");
    const auto& xs = cdf.xs();
    const auto& cs = cdf.cs();
    if (cdf.kind() == CdfKind::Step) {
        // First j with c_j > u; c_k = 1 > u guarantees one exists.
        auto it = std::upper_bound(cs.begin(), cs.end(), u);
        return xs[static_cast<std::size_t>(it - cs.begin())];
    }
    // First knot with F >= u. Below it F < u, so the segment is not flat.
    auto it = std::lower_bound(cs.begin(), cs.end(), u);
    const std::size_t j = static_cast<std::size_t>(it - cs.begin());
    if (j == 0) return xs.front();
    const double t = (u - cs[j - 1]) / (cs[j] - cs[j - 1]);
    return xs[j - 1] + t * (xs[j] - xs[j - 1]);
}

BorelEmbedding borel_embed(const ValueSpace& vs) {
    if (vs.kind == ValueKind::FiniteLabels && vs.labels == 0)
        throw KindError("borel_embed: label space with K = 0 is empty");
    return BorelEmbedding(vs);
}

UnitPoint BorelEmbedding::forward(double s) const {
    switch (vs_.kind) {
    case ValueKind::Real: {
        if (!std::isfinite(s)) throw DomainError("borel_embed: real value must be finite");
        // Both branches evaluate e^{-|s|}, which never overflows.
        const double e = std::exp(-std::abs(s));
        const double big = 1.0 / (1.0 + e);
        const double small = e / (1.0 + e);
        return s >= 0.0 ? UnitPoint{big, small} : UnitPoint{small, big};
    }
    case ValueKind::FiniteLabels: {
        if (!vs_.contains(s)) throw DomainError("borel_embed: not a label of this space");
        const double k1 = static_cast<double>(vs_.labels + 1);
        return UnitPoint{(s + 1.0) / k1, (k1 - s - 1.0) / k1};
    }
    case ValueKind::UnitInterval:
        if (!vs_.contains(s)) throw DomainError("borel_embed: value outside [0,1]");
        return UnitPoint::from_value(s);
    }
    throw KindError("borel_embed: unsupported value space");
}

double BorelEmbedding::inverse(UnitPoint x) const {
    const double v = x.value;
    const double c = x.complement;
    switch (vs_.kind) {
    case ValueKind::Real: {
        if (!(v > 0.0 && v < 1.0 && c > 0.0 && c < 1.0)) return default_element();
        const double log_v = v < 0.5 ? std::log(v) : std::log1p(-c);
        const double log_c = c < 0.5 ? std::log(c) : std::log1p(-v);
        return log_v - log_c;
    }
    case ValueKind::FiniteLabels: {
        if (!(v > 0.0 && v < 1.0)) return default_element();
        const double j = std::nearbyint(v * static_cast<double>(vs_.labels + 1)) - 1.0;
        if (j < 0.0 || j >= static_cast<double>(vs_.labels)) return default_element();
        return j;
    }
    case ValueKind::UnitInterval:
        return (v >= 0.0 && v <= 1.0) ? v : default_element();
    }
    return default_element();
}

double CantorCode::dyadic_point() const noexcept {
    double x = 0.0;
    double w = 0.5;
    for (auto b : bits) {
        if (b) x += w;
        w *= 0.5;
    }
    return x;
}

std::string CantorCode::str() const {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s.push_back(b ? '1' : '0');
    return s;
}

std::vector<CantorCode> cantor_encode(const DiscreteSpace& space, const Generators& generators) {
    std::vector<CantorCode> codes(space.size());
    for (auto& c : codes) c.bits.assign(generators.size(), 0);
    for (std::size_t i = 0; i < generators.size(); ++i) {
        for (const auto& id : generators[i]) {
            auto k = space.find(id);
            if (!k)
                throw SpecError("generators[" + std::to_string(i) + "]: unknown atom id '" + id + "'");
            codes[*k].bits[i] = 1;
        }
    }
    return codes;
}

std::vector<std::vector<std::size_t>> sigma_atoms(const DiscreteSpace& space,
                                                  const Generators& generators) {
    const auto codes = cantor_encode(space, generators);
    std::vector<std::vector<std::size_t>> classes;
    std::map<CantorCode, std::size_t> slot;
    for (std::size_t k = 0; k < codes.size(); ++k) {
        auto [it, fresh] = slot.try_emplace(codes[k], classes.size());
        if (fresh) classes.emplace_back();
        classes[it->second].push_back(k);
    }
    return classes;
}

KernelFamily represent_family(const KernelFamily& family) {
    if (family.body() != KernelBody::Table)
        throw UnsupportedError("represent_family: family is already a step family on [0,1]");
    auto partition = std::make_shared<const IntervalPartition>(interval_partition(*family.space()));
    std::vector<Kernel> out;
    out.reserve(family.size());
    for (const auto& k : family.kernels())
        out.push_back(Kernel::step(k.name(), partition, k.arity(), k.value_space(), k.values(),
                                   k.symmetric()));
    return KernelFamily(std::move(out));
}

namespace {

std::vector<std::string> labels_of(const DiscreteSpace& space, std::span<const std::size_t> idx) {
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (auto k : idx) out.push_back(space.id(k));
    return out;
}

} // namespace

CantorRepresentation cantor_represent_family(const KernelFamily& family,
                                             const Generators& generators) {
    if (family.body() != KernelBody::Table)
        throw UnsupportedError("cantor_represent_family: needs a table family");
    const DiscreteSpace& space = *family.space();
    const auto codes = cantor_encode(space, generators);
    auto classes = sigma_atoms(space, generators);

    std::vector<std::size_t> class_of(space.size());
    for (std::size_t c = 0; c < classes.size(); ++c)
        for (auto k : classes[c]) class_of[k] = c;

    // f_i = g_i o h^m requires f_i to be constant on products of sigma-atoms.
    for (const auto& k : family.kernels()) {
        std::vector<std::size_t> t(k.arity(), 0);
        std::vector<std::size_t> rep(k.arity());
        do {
            for (std::size_t r = 0; r < t.size(); ++r) rep[r] = classes[class_of[t[r]]].front();
            if (k.at(t) != k.at(rep))
                throw MeasurabilityError("kernel '" + k.name() +
                                             "' is not measurable with respect to the generated "
                                             "sigma-field",
                                         k.name(), labels_of(space, rep), labels_of(space, t));
        } while (next_tuple(t, space.size()));
    }

    std::sort(classes.begin(), classes.end(), [&](const auto& a, const auto& b) {
        return codes[a.front()] < codes[b.front()];
    });

    CantorRepresentation out;
    SpaceSpec merged;
    for (const auto& members : classes) {
        std::string label;
        double p = 0.0;
        for (auto k : members) {
            if (!label.empty()) label += '+';
            label += space.id(k);
            p += space.prob(k);
        }
        merged.atom_ids.push_back(std::move(label));
        merged.probs.push_back(p);
        out.codes.push_back(codes[members.front()]);
    }
    out.members = classes;
    out.merged_space = std::make_shared<const DiscreteSpace>(validate_space(std::move(merged)));

    auto partition = std::make_shared<const IntervalPartition>(interval_partition(*out.merged_space));
    const std::size_t d = classes.size();
    std::vector<Kernel> kernels;
    for (const auto& k : family.kernels()) {
        std::vector<double> values(tuple_count(d, k.arity()));
        std::vector<std::size_t> t(k.arity(), 0);
        std::vector<std::size_t> rep(k.arity());
        std::size_t off = 0;
        do {
            for (std::size_t r = 0; r < t.size(); ++r) rep[r] = classes[t[r]].front();
            values[off++] = k.at(rep);
        } while (next_tuple(t, d));
        kernels.push_back(Kernel::step(k.name(), partition, k.arity(), k.value_space(),
                                       std::move(values), k.symmetric()));
    }
    out.family = KernelFamily(std::move(kernels));
    return out;
}

} // namespace stdrep
