#pragma once

// Representation of random variables and kernel families on [0,1] with
// Lebesgue measure: the quantile transform, embeddings of value spaces into
// [0,1], and two constructions of unit-interval step kernels (a direct one
// over the atom partition and one through Cantor codes of generator sets).

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stdrep/kernels.hpp"
#include "stdrep/spaces.hpp"

namespace stdrep {

/// inf{y : F(y) > u} for a Step CDF, i.e. y_j for u in [c_{j-1}, c_j).
/// For a PiecewiseLinear CDF, inf{y : F(y) >= u} by linear interpolation.
/// Throws DomainError unless 0 <= u < 1.
double quantile(const Cdf& cdf, double u);

/// A point of [0,1] stored together with its distance to 1, so that points
/// close to either end keep full relative precision.
struct UnitPoint {
    double value = 0.0;
    double complement = 1.0;

    static UnitPoint from_value(double x) { return {x, 1.0 - x}; }
    friend bool operator==(const UnitPoint&, const UnitPoint&) = default;
};

/// Injection of a supported value space into [0,1] with a measurable inverse.
///
///   Real:            s -> 1/(1+e^{-s}), inverse logit, default 0
///   FiniteLabels(K): j -> (j+1)/(K+1), inverse nearest grid point, default 0
///   UnitInterval:    identity, default 0
///
/// `inverse` maps points outside the image to the default element.
class BorelEmbedding {
public:
    const ValueSpace& value_space() const noexcept { return vs_; }
    UnitPoint forward(double s) const;
    double inverse(UnitPoint x) const;
    double inverse(double x) const { return inverse(UnitPoint::from_value(x)); }
    double default_element() const noexcept { return 0.0; }

private:
    friend BorelEmbedding borel_embed(const ValueSpace& vs);
    explicit BorelEmbedding(ValueSpace vs) : vs_(vs) {}
    ValueSpace vs_;
};

/// Throws KindError for unsupported value spaces (FiniteLabels with K = 0).
BorelEmbedding borel_embed(const ValueSpace& vs);

/// Membership bits of one atom in the generator sets, bit i for set A_i.
struct CantorCode {
    std::vector<std::uint8_t> bits;

    /// The point sum_i bits[i] 2^{-(i+1)} of [0,1]; exact for up to 53 bits.
    double dyadic_point() const noexcept;
    std::string str() const;
    friend auto operator<=>(const CantorCode&, const CantorCode&) = default;
};

using Generators = std::vector<std::vector<std::string>>;

/// One code per atom, in atom order. Throws SpecError when a generator names
/// an unknown atom.
std::vector<CantorCode> cantor_encode(const DiscreteSpace& space, const Generators& generators);

/// Atoms grouped by equal code, classes and members in first-occurrence
/// order. Each class is a list of atom indices.
std::vector<std::vector<std::size_t>> sigma_atoms(const DiscreteSpace& space,
                                                  const Generators& generators);

/// Step kernels over interval_partition(space) with values copied from the
/// tables: g(u_1..u_m) = f(atom(u_1)..atom(u_m)). Throws UnsupportedError for
/// step input (already represented).
KernelFamily represent_family(const KernelFamily& family);

struct CantorRepresentation {
    /// Merged space: one atom per sigma-atom, ordered lexicographically by code.
    std::shared_ptr<const DiscreteSpace> merged_space;
    std::vector<CantorCode> codes;
    /// Source atom indices behind each merged atom.
    std::vector<std::vector<std::size_t>> members;
    /// Step kernels over interval_partition(*merged_space).
    KernelFamily family;
};

/// Factors each f_i through the Cantor code map and represents the factored
/// kernels on [0,1]. Throws MeasurabilityError with a witness when a kernel
/// separates atoms that share a code.
CantorRepresentation cantor_represent_family(const KernelFamily& family,
                                             const Generators& generators);

} // namespace stdrep
