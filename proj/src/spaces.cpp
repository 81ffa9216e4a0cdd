#include "stdrep/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "stdrep/errors.hpp"

namespace stdrep {

std::optional<std::size_t> DiscreteSpace::find(const std::string& id) const {
    auto it = std::find(ids_.begin(), ids_.end(), id);
    if (it == ids_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - ids_.begin());
}

std::size_t DiscreteSpace::index_of(const std::string& id) const {
    if (auto k = find(id)) return *k;
    throw SpecError("unknown atom id '" + id + "'");
}

DiscreteSpace validate_space(SpaceSpec spec) {
    if (spec.atom_ids.empty()) throw SpecError("probs: space has no atoms");
    if (spec.atom_ids.size() != spec.probs.size())
        throw SpecError("probs: length " + std::to_string(spec.probs.size()) +
                        " does not match atoms length " + std::to_string(spec.atom_ids.size()));

    std::unordered_set<std::string> seen;
    for (const auto& id : spec.atom_ids)
        if (!seen.insert(id).second) throw SpecError("atoms: duplicate atom id '" + id + "'");

    double sum = 0.0;
    for (std::size_t k = 0; k < spec.probs.size(); ++k) {
        const double p = spec.probs[k];
        if (!std::isfinite(p) || p < 0.0)
            throw SpecError("probs[" + std::to_string(k) + "]: probability must be finite and >= 0");
        if (p > 1.0)
            throw SpecError("probs[" + std::to_string(k) + "]: probability exceeds 1");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbSumTolerance)
        throw SpecError("probs: sum " + std::to_string(sum) + " differs from 1 by more than 1e-9");

    DiscreteSpace space;
    space.ids_ = std::move(spec.atom_ids);
    space.probs_ = std::move(spec.probs);
    if (sum != 1.0) {
        for (auto& p : space.probs_) p /= sum;
        space.renormalized_ = true;
    }
    for (std::size_t k = 0; k < space.probs_.size(); ++k)
        if (space.probs_[k] == 0.0) space.zero_atoms_.push_back(k);
    return space;
}

IntervalPartition::IntervalPartition(std::vector<double> breakpoints,
                                     std::vector<std::string> cell_labels)
    : breaks_(std::move(breakpoints)), labels_(std::move(cell_labels)) {
    if (labels_.empty() || breaks_.size() != labels_.size() + 1)
        throw SpecError("partition: need K >= 1 labels and K+1 breakpoints");
    if (breaks_.front() != 0.0 || breaks_.back() != 1.0)
        throw SpecError("partition.breakpoints: must start at 0 and end at 1");
    for (std::size_t k = 1; k < breaks_.size(); ++k)
        if (!(breaks_[k] >= breaks_[k - 1]))
            throw SpecError("partition.breakpoints: not nondecreasing at index " + std::to_string(k));
}

std::vector<double> IntervalPartition::lengths() const {
    std::vector<double> out(cells());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = breaks_[k + 1] - breaks_[k];
    return out;
}

IntervalPartition interval_partition(const DiscreteSpace& space) {
    const auto& probs = space.probs();
    std::vector<double> breaks(probs.size() + 1, 0.0);
    for (std::size_t k = 0; k < probs.size(); ++k) breaks[k + 1] = breaks[k] + probs[k];

    // Pin the end to exactly 1 from the last positive atom on, so trailing
    // zero-probability atoms stay empty.
    std::size_t last = probs.size();
    while (last > 0 && probs[last - 1] == 0.0) --last;
    for (std::size_t k = last; k < breaks.size(); ++k) breaks[k] = 1.0;
    return IntervalPartition(std::move(breaks), space.atom_ids());
}

std::size_t lookup_cell(const IntervalPartition& partition, double u) {
    if (!(u >= 0.0 && u < 1.0)) throw DomainError("lookup_cell: u must lie in [0,1)");
    const auto& b = partition.breakpoints();
    auto it = std::upper_bound(b.begin() + 1, b.end(), u);
    return static_cast<std::size_t>(it - (b.begin() + 1));
}

namespace {

void require_increasing(const std::vector<double>& xs, const char* what) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
        if (!std::isfinite(xs[j])) throw SpecError(std::string(what) + ": non-finite point");
        if (j > 0 && !(xs[j] > xs[j - 1]))
            throw SpecError(std::string(what) + ": points must be strictly increasing");
    }
}

void require_cumulative(std::vector<double>& cs, const char* what) {
    for (std::size_t j = 0; j < cs.size(); ++j) {
        if (!(cs[j] >= 0.0 && cs[j] <= 1.0 + 1e-12))
            throw SpecError(std::string(what) + ": cumulative value outside [0,1]");
        if (j > 0 && cs[j] < cs[j - 1])
            throw SpecError(std::string(what) + ": cumulative values must be nondecreasing");
    }
    if (std::abs(cs.back() - 1.0) > 1e-12)
        throw SpecError(std::string(what) + ": cumulative values must end at 1");
    cs.back() = 1.0;
}

} // namespace

Cdf Cdf::step(std::vector<double> jumps, std::vector<double> cumulative) {
    if (jumps.empty() || jumps.size() != cumulative.size())
        throw SpecError("cdf.points: step CDF needs matching, nonempty jumps and cumulatives");
    require_increasing(jumps, "cdf.points");
    require_cumulative(cumulative, "cdf.points");
    return Cdf(CdfKind::Step, std::move(jumps), std::move(cumulative));
}

Cdf Cdf::piecewise_linear(std::vector<double> knots, std::vector<double> values) {
    if (knots.size() < 2 || knots.size() != values.size())
        throw SpecError("cdf.points: piecewise-linear CDF needs at least two knots");
    require_increasing(knots, "cdf.points");
    require_cumulative(values, "cdf.points");
    if (values.front() != 0.0) throw SpecError("cdf.points: piecewise-linear CDF must start at 0");
    return Cdf(CdfKind::PiecewiseLinear, std::move(knots), std::move(values));
}

double Cdf::operator()(double x) const {
    if (kind_ == CdfKind::Step) {
        // Number of jumps at or below x.
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        if (it == xs_.begin()) return 0.0;
        return cs_[static_cast<std::size_t>(it - xs_.begin()) - 1];
    }
    if (x <= xs_.front()) return 0.0;
    if (x >= xs_.back()) return 1.0;
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs_.begin());
    const double t = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
    return cs_[j - 1] + t * (cs_[j] - cs_[j - 1]);
}

TransportMap transport_map(const Cdf& cdf) {
    if (cdf.kind() != CdfKind::PiecewiseLinear)
        throw KindError("transport_map: a step CDF describes an atomic measure, which cannot be "
                        "transported to Lebesgue measure");
    return TransportMap(cdf);
}

Cdf cdf_of_pushforward(const DiscreteSpace& space, std::span<const double> g) {
    if (g.size() != space.size())
        throw SpecError("cdf_of_pushforward: one value per atom required");
    std::vector<std::pair<double, double>> mass;
    mass.reserve(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        if (space.prob(k) > 0.0) mass.emplace_back(g[k], space.prob(k));
    std::stable_sort(mass.begin(), mass.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<double> jumps;
    std::vector<double> cum;
    double acc = 0.0;
    for (std::size_t k = 0; k < mass.size(); ++k) {
        acc += mass[k].second;
        if (k + 1 < mass.size() && mass[k + 1].first == mass[k].first) continue;
        jumps.push_back(mass[k].first);
        cum.push_back(acc);
    }
    cum.back() = 1.0;
    return Cdf::step(std::move(jumps), std::move(cum));
}

} // namespace stdrep
