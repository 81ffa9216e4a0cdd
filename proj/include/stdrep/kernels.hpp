#pragma once

// Multivariate kernels: finite-arity functions given as a table over atom
// tuples of a discrete space, or as a step function over the cells of an
// interval partition of [0,1].

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stdrep/spaces.hpp"

namespace stdrep {

enum class ValueKind { Real, FiniteLabels, UnitInterval };

/// Value space of a kernel. `labels` is K for FiniteLabels, unused otherwise.
struct ValueSpace {
    ValueKind kind = ValueKind::Real;
    std::size_t labels = 0;

    static ValueSpace real() { return {ValueKind::Real, 0}; }
    static ValueSpace unit() { return {ValueKind::UnitInterval, 0}; }
    static ValueSpace finite_labels(std::size_t k) { return {ValueKind::FiniteLabels, k}; }

    bool contains(double v) const noexcept;
    std::string describe() const;

    friend bool operator==(const ValueSpace&, const ValueSpace&) = default;
};

using SpacePtr = std::shared_ptr<const DiscreteSpace>;
using PartitionPtr = std::shared_ptr<const IntervalPartition>;

enum class KernelBody { Table, Step };

/// An arity-m function. Values are stored row-major over domain^m, where the
/// domain is the atoms of a space (Table) or the cells of a partition (Step).
class Kernel {
public:
    /// Builds a table kernel; throws SpecError on size or range violations and
    /// SymmetryError when `symmetric` is declared but does not hold.
    static Kernel table(std::string name, SpacePtr space, std::size_t arity, ValueSpace vs,
                        std::vector<double> values, bool symmetric);
    static Kernel step(std::string name, PartitionPtr partition, std::size_t arity,
                       ValueSpace vs, std::vector<double> values, bool symmetric);

    const std::string& name() const noexcept { return name_; }
    std::size_t arity() const noexcept { return arity_; }
    const ValueSpace& value_space() const noexcept { return vs_; }
    bool symmetric() const noexcept { return symmetric_; }
    KernelBody body() const noexcept { return body_; }
    std::size_t domain_size() const noexcept { return domain_; }
    const std::vector<double>& values() const noexcept { return values_; }

    const SpacePtr& space() const noexcept { return space_; }
    const PartitionPtr& partition() const noexcept { return partition_; }
    /// Atom ids (Table) or cell labels (Step).
    const std::vector<std::string>& domain_labels() const;

    /// Value at a tuple of domain indices (atoms or cells).
    double at(std::span<const std::size_t> idx) const;
    /// Row-major offset of a domain-index tuple.
    std::size_t offset(std::span<const std::size_t> idx) const;

private:
    Kernel() = default;
    void check(bool symmetric_declared);

    std::string name_;
    std::size_t arity_ = 0;
    ValueSpace vs_;
    bool symmetric_ = false;
    KernelBody body_ = KernelBody::Table;
    std::size_t domain_ = 0;
    std::vector<double> values_;
    SpacePtr space_;
    PartitionPtr partition_;
};

/// Ordered, named kernels over one common space or partition.
class KernelFamily {
public:
    KernelFamily() = default;
    /// Throws SpecError on duplicate names, mixed bodies, or kernels that do
    /// not share a domain.
    explicit KernelFamily(std::vector<Kernel> kernels);

    std::size_t size() const noexcept { return kernels_.size(); }
    bool empty() const noexcept { return kernels_.empty(); }
    const std::vector<Kernel>& kernels() const noexcept { return kernels_; }
    const Kernel& operator[](std::size_t i) const { return kernels_.at(i); }
    const Kernel& find(const std::string& name) const;
    KernelBody body() const;
    std::size_t max_arity() const noexcept;
    const SpacePtr& space() const;
    const PartitionPtr& partition() const;

private:
    std::vector<Kernel> kernels_;
};

/// Table lookup by atom ids. Throws ArityError on a wrong tuple length,
/// SpecError for unknown atoms, KindError when `k` is a step kernel.
double eval_kernel(const Kernel& k, std::span<const std::string> atoms);
/// Per-coordinate lookup_cell, then cell-table lookup. Throws ArityError,
/// DomainError for points outside [0,1), KindError when `k` is a table kernel.
double eval_kernel(const Kernel& k, std::span<const double> point);

struct SymmetryReport {
    bool symmetric = true;
    /// Domain-index tuples t and a permutation of t with different values.
    std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> counterexample;
};

/// Exhaustive over all domain tuples and all m! permutations.
SymmetryReport check_symmetry(const Kernel& k);

/// Number of domain tuples, d^m; throws ScaleError past `cap`.
std::size_t tuple_count(std::size_t domain, std::size_t arity, std::size_t cap = std::size_t(1) << 40);

/// Advances a mixed-radix counter over domain^m. Returns false on wrap.
bool next_tuple(std::span<std::size_t> idx, std::size_t domain) noexcept;

} // namespace stdrep
