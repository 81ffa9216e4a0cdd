#pragma once

// Probability spaces: finite discrete spaces, distribution functions, and
// the interval partitions of [0,1] that realize a discrete space on the
// unit interval with Lebesgue measure.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stdrep {

/// Unvalidated input for a discrete space.
struct SpaceSpec {
    std::vector<std::string> atom_ids;
    std::vector<double> probs;
};

/// A finite probability space. Only obtainable through `validate_space`, so
/// every instance has distinct ids, nonnegative probabilities, and a sum that
/// was within 1e-9 of one before renormalization.
class DiscreteSpace {
public:
    std::size_t size() const noexcept { return ids_.size(); }
    const std::vector<std::string>& atom_ids() const noexcept { return ids_; }
    const std::vector<double>& probs() const noexcept { return probs_; }
    const std::string& id(std::size_t k) const { return ids_.at(k); }
    double prob(std::size_t k) const { return probs_.at(k); }

    /// Index of an atom id, or nullopt.
    std::optional<std::size_t> find(const std::string& id) const;
    /// Index of an atom id; throws SpecError for unknown ids.
    std::size_t index_of(const std::string& id) const;

    /// Indices of atoms with probability zero (kept as empty cells).
    const std::vector<std::size_t>& zero_prob_atoms() const noexcept { return zero_atoms_; }
    /// True when the input probabilities were divided by their sum.
    bool renormalized() const noexcept { return renormalized_; }

    friend bool operator==(const DiscreteSpace&, const DiscreteSpace&) = default;

private:
    friend DiscreteSpace validate_space(SpaceSpec spec);
    std::vector<std::string> ids_;
    std::vector<double> probs_;
    std::vector<std::size_t> zero_atoms_;
    bool renormalized_ = false;
};

inline constexpr double kProbSumTolerance = 1e-9;

/// Checks and renormalizes a space. Throws SpecError on a sum off by more
/// than 1e-9, a negative or non-finite probability, a duplicate id, or an
/// empty atom list.
DiscreteSpace validate_space(SpaceSpec spec);

/// Ordered subintervals of [0,1]. Cell k (0-based) is
/// [breakpoints[k], breakpoints[k+1]), the last cell is closed at 1.
class IntervalPartition {
public:
    IntervalPartition(std::vector<double> breakpoints, std::vector<std::string> cell_labels);

    std::size_t cells() const noexcept { return labels_.size(); }
    const std::vector<double>& breakpoints() const noexcept { return breaks_; }
    const std::vector<std::string>& cell_labels() const noexcept { return labels_; }
    double length(std::size_t k) const { return breaks_.at(k + 1) - breaks_.at(k); }
    std::vector<double> lengths() const;

    friend bool operator==(const IntervalPartition&, const IntervalPartition&) = default;

private:
    std::vector<double> breaks_;
    std::vector<std::string> labels_;
};

/// Cells in the space's atom order; cell lengths are prefix-sum differences.
IntervalPartition interval_partition(const DiscreteSpace& space);

/// The 0-based cell containing u, never an empty cell. O(log K).
/// Throws DomainError unless 0 <= u < 1.
std::size_t lookup_cell(const IntervalPartition& partition, double u);

enum class CdfKind { Step, PiecewiseLinear };

/// A distribution function.
///
/// Step: `xs` are the jump points y_1 < ... < y_k and `cs` the cumulative
/// values c_1 <= ... <= c_k = 1 (c_0 = 0 is implicit).
/// PiecewiseLinear: knots (xs[j], cs[j]) with cs[0] = 0 and cs.back() = 1,
/// linear in between, so the encoded measure has no atoms.
class Cdf {
public:
    static Cdf step(std::vector<double> jumps, std::vector<double> cumulative);
    static Cdf piecewise_linear(std::vector<double> knots, std::vector<double> values);

    CdfKind kind() const noexcept { return kind_; }
    const std::vector<double>& xs() const noexcept { return xs_; }
    const std::vector<double>& cs() const noexcept { return cs_; }

    /// F(x).
    double operator()(double x) const;

    friend bool operator==(const Cdf&, const Cdf&) = default;

private:
    Cdf(CdfKind kind, std::vector<double> xs, std::vector<double> cs)
        : kind_(kind), xs_(std::move(xs)), cs_(std::move(cs)) {}
    CdfKind kind_;
    std::vector<double> xs_;
    std::vector<double> cs_;
};

/// x -> F(x) for a continuous distribution function. Pushes the measure
/// encoded by F forward to Lebesgue measure on [0,1].
class TransportMap {
public:
    double operator()(double x) const { return cdf_(x); }
    const Cdf& cdf() const noexcept { return cdf_; }

private:
    friend TransportMap transport_map(const Cdf& cdf);
    explicit TransportMap(Cdf cdf) : cdf_(std::move(cdf)) {}
    Cdf cdf_;
};

/// Throws KindError for Step input: an atomic measure has no transport to
/// Lebesgue measure.
TransportMap transport_map(const Cdf& cdf);

/// Distribution function of g under the space's measure. Jumps sit at the
/// sorted distinct values of g carrying positive mass.
Cdf cdf_of_pushforward(const DiscreteSpace& space, std::span<const double> g);

} // namespace stdrep
