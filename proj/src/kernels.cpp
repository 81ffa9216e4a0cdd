#include "stdrep/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "stdrep/errors.hpp"

namespace stdrep {

bool ValueSpace::contains(double v) const noexcept {
    switch (kind) {
    case ValueKind::Real:
        return std::isfinite(v);
    case ValueKind::UnitInterval:
        return v >= 0.0 && v <= 1.0;
    case ValueKind::FiniteLabels:
        return v >= 0.0 && v < static_cast<double>(labels) && std::floor(v) == v;
    }
    return false;
}

std::string ValueSpace::describe() const {
    switch (kind) {
    case ValueKind::Real: return "real";
    case ValueKind::UnitInterval: return "unit";
    case ValueKind::FiniteLabels: return "labels(" + std::to_string(labels) + ")";
    }
    return "?";
}

std::size_t tuple_count(std::size_t domain, std::size_t arity, std::size_t cap) {
    std::size_t n = 1;
    for (std::size_t r = 0; r < arity; ++r) {
        if (domain != 0 && n > cap / domain)
            throw ScaleError("tuple count " + std::to_string(domain) + "^" + std::to_string(arity) +
                             " exceeds the cap");
        n *= domain;
    }
    return n;
}

bool next_tuple(std::span<std::size_t> idx, std::size_t domain) noexcept {
    for (std::size_t r = idx.size(); r-- > 0;) {
        if (++idx[r] < domain) return true;
        idx[r] = 0;
    }
    return false;
}

Kernel Kernel::table(std::string name, SpacePtr space, std::size_t arity, ValueSpace vs,
                     std::vector<double> values, bool symmetric) {
    if (!space) throw SpecError("kernel '" + name + "': missing space");
    Kernel k;
    k.name_ = std::move(name);
    k.arity_ = arity;
    k.vs_ = vs;
    k.body_ = KernelBody::Table;
    k.domain_ = space->size();
    k.space_ = std::move(space);
    k.values_ = std::move(values);
    k.check(symmetric);
    return k;
}

Kernel Kernel::step(std::string name, PartitionPtr partition, std::size_t arity, ValueSpace vs,
                    std::vector<double> values, bool symmetric) {
    if (!partition) throw SpecError("kernel '" + name + "': missing partition");
    Kernel k;
    k.name_ = std::move(name);
    k.arity_ = arity;
    k.vs_ = vs;
    k.body_ = KernelBody::Step;
    k.domain_ = partition->cells();
    k.partition_ = std::move(partition);
    k.values_ = std::move(values);
    k.check(symmetric);
    return k;
}

void Kernel::check(bool symmetric_declared) {
    if (arity_ == 0) throw ArityError("kernel '" + name_ + "': arity must be positive");
    if (vs_.kind == ValueKind::FiniteLabels && vs_.labels == 0)
        throw KindError("kernel '" + name_ + "': label value space needs K >= 1");
    const std::size_t expected = tuple_count(domain_, arity_);
    if (values_.size() != expected)
        throw SpecError("kernel '" + name_ + "'.values: expected " + std::to_string(expected) +
                        " entries, got " + std::to_string(values_.size()));
    for (double v : values_)
        if (!vs_.contains(v))
            throw SpecError("kernel '" + name_ + "'.values: value " + std::to_string(v) +
                            " outside value space " + vs_.describe());
    if (symmetric_declared) {
        symmetric_ = true;
        if (auto rep = check_symmetry(*this); !rep.symmetric)
            throw SymmetryError("kernel '" + name_ + "' is declared symmetric but is not");
    }
}

const std::vector<std::string>& Kernel::domain_labels() const {
    return body_ == KernelBody::Table ? space_->atom_ids() : partition_->cell_labels();
}

std::size_t Kernel::offset(std::span<const std::size_t> idx) const {
    if (idx.size() != arity_)
        throw ArityError("kernel '" + name_ + "': expected " + std::to_string(arity_) +
                         " coordinates, got " + std::to_string(idx.size()));
    std::size_t off = 0;
    for (std::size_t c : idx) {
        if (c >= domain_) throw DomainError("kernel '" + name_ + "': index out of range");
        off = off * domain_ + c;
    }
    return off;
}

double Kernel::at(std::span<const std::size_t> idx) const { return values_[offset(idx)]; }

KernelFamily::KernelFamily(std::vector<Kernel> kernels) : kernels_(std::move(kernels)) {
    std::unordered_set<std::string> names;
    for (const auto& k : kernels_) {
        if (!names.insert(k.name()).second)
            throw SpecError("kernels: duplicate kernel name '" + k.name() + "'");
        const auto& first = kernels_.front();
        if (k.body() != first.body())
            throw SpecError("kernels: family mixes table and step kernels");
        if (k.body() == KernelBody::Table && k.space() != first.space() &&
            !(*k.space() == *first.space()))
            throw SpecError("kernels: kernel '" + k.name() + "' is over a different space");
        if (k.body() == KernelBody::Step && k.partition() != first.partition() &&
            !(*k.partition() == *first.partition()))
            throw SpecError("kernels: kernel '" + k.name() + "' is over a different partition");
    }
}

const Kernel& KernelFamily::find(const std::string& name) const {
    for (const auto& k : kernels_)
        if (k.name() == name) return k;
    throw SpecError("no kernel named '" + name + "'");
}

KernelBody KernelFamily::body() const {
    if (kernels_.empty()) throw SpecError("kernels: empty family");
    return kernels_.front().body();
}

std::size_t KernelFamily::max_arity() const noexcept {
    std::size_t m = 0;
    for (const auto& k : kernels_) m = std::max(m, k.arity());
    return m;
}

const SpacePtr& KernelFamily::space() const {
    if (body() != KernelBody::Table) throw KindError("family is not a table family");
    return kernels_.front().space();
}

const PartitionPtr& KernelFamily::partition() const {
    if (body() != KernelBody::Step) throw KindError("family is not a step family");
    return kernels_.front().partition();
}

double eval_kernel(const Kernel& k, std::span<const std::string> atoms) {
    if (k.body() != KernelBody::Table)
        throw KindError("kernel '" + k.name() + "': step kernels are evaluated at points of [0,1)");
    if (atoms.size() != k.arity())
        throw ArityError("kernel '" + k.name() + "': expected " + std::to_string(k.arity()) +
                         " atoms, got " + std::to_string(atoms.size()));
    std::vector<std::size_t> idx(atoms.size());
    for (std::size_t r = 0; r < atoms.size(); ++r) idx[r] = k.space()->index_of(atoms[r]);
    return k.at(idx);
}

double eval_kernel(const Kernel& k, std::span<const double> point) {
    if (k.body() != KernelBody::Step)
        throw KindError("kernel '" + k.name() + "': table kernels are evaluated at atom ids");
    if (point.size() != k.arity())
        throw ArityError("kernel '" + k.name() + "': expected " + std::to_string(k.arity()) +
                         " coordinates, got " + std::to_string(point.size()));
    std::vector<std::size_t> idx(point.size());
    for (std::size_t r = 0; r < point.size(); ++r) idx[r] = lookup_cell(*k.partition(), point[r]);
    return k.at(idx);
}

SymmetryReport check_symmetry(const Kernel& k) {
    SymmetryReport rep;
    const std::size_t m = k.arity();
    if (m < 2) return rep;
    std::vector<std::size_t> t(m, 0);
    std::vector<std::size_t> perm(m);
    std::vector<std::size_t> moved(m);
    do {
        const double v = k.at(t);
        std::iota(perm.begin(), perm.end(), 0);
        while (std::next_permutation(perm.begin(), perm.end())) {
            for (std::size_t r = 0; r < m; ++r) moved[r] = t[perm[r]];
            if (k.at(moved) != v) {
                rep.symmetric = false;
                rep.counterexample.emplace(t, moved);
                return rep;
            }
        }
    } while (next_tuple(t, k.domain_size()));
    return rep;
}

} // namespace stdrep
