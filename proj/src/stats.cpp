#include "stdrep/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "stdrep/errors.hpp"

namespace stdrep::stats {

double chi_squared_sf(double x, double dof) {
    if (x <= 0.0) return 1.0;
    return boost::math::cdf(boost::math::complement(boost::math::chi_squared(dof), x));
}

double normal_two_sided(double z) {
    if (!std::isfinite(z)) return 0.0;
    return 2.0 * boost::math::cdf(boost::math::complement(boost::math::normal(), std::abs(z)));
}

double kolmogorov_sf(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    if (lambda < 0.2) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16 * std::abs(sum)) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_uniform(std::span<const double> xs) {
    std::vector<double> s(xs.begin(), xs.end());
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double d = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double x = std::clamp(s[i], 0.0, 1.0);
        d = std::max({d, (static_cast<double>(i) + 1.0) / n - x, x - static_cast<double>(i) / n});
    }
    return {d, 0.0, kolmogorov_sf(d, s.size())};
}

TestResult chi_squared_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                           double min_expected) {
    if (counts.size() != probs.size())
        throw SpecError("chi_squared_gof: counts and probabilities differ in length");
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
    double min_p = 1.0;
    for (double p : probs)
        if (p > 0.0) min_p = std::min(min_p, p);
    if (total * min_p < min_expected)
        throw PowerError("chi_squared_gof: expected counts below " + std::to_string(min_expected),
                         static_cast<std::size_t>(std::ceil(min_expected / min_p)));

    double stat = 0.0;
    std::size_t bins = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (probs[c] <= 0.0) {
            if (counts[c] != 0) return {INFINITY, 0.0, 0.0};
            continue;
        }
        const double e = total * probs[c];
        const double o = static_cast<double>(counts[c]);
        stat += (o - e) * (o - e) / e;
        ++bins;
    }
    const double dof = static_cast<double>(bins) - 1.0;
    return {stat, dof, dof > 0 ? chi_squared_sf(stat, dof) : 1.0};
}

TestResult chi_squared_two_sample(std::span<const std::uint64_t> a,
                                  std::span<const std::uint64_t> b, double min_expected) {
    if (a.size() != b.size()) throw SpecError("chi_squared_two_sample: length mismatch");
    const double na = static_cast<double>(std::accumulate(a.begin(), a.end(), std::uint64_t{0}));
    const double nb = static_cast<double>(std::accumulate(b.begin(), b.end(), std::uint64_t{0}));
    if (na == 0.0 || nb == 0.0) throw PowerError("chi_squared_two_sample: empty sample", 1);

    std::vector<std::size_t> order;
    for (std::size_t c = 0; c < a.size(); ++c)
        if (a[c] + b[c] > 0) order.push_back(c);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a[x] + b[x] < a[y] + b[y]; });

    // Merge from the rarest end until each bin's expected count reaches the
    // floor in the smaller sample.
    const double pooled = na + nb;
    const double n_small = std::min(na, nb);
    std::vector<std::pair<double, double>> bins;
    double acc_a = 0.0;
    double acc_b = 0.0;
    for (std::size_t c : order) {
        acc_a += static_cast<double>(a[c]);
        acc_b += static_cast<double>(b[c]);
        if ((acc_a + acc_b) / pooled * n_small >= min_expected) {
            bins.emplace_back(acc_a, acc_b);
            acc_a = acc_b = 0.0;
        }
    }
    if (acc_a + acc_b > 0.0) {
        if (bins.empty()) {
            bins.emplace_back(acc_a, acc_b);
        } else {
            bins.back().first += acc_a;
            bins.back().second += acc_b;
        }
    }
    if (bins.size() < 2) {
        // Two bins need the mass outside the modal category to reach the floor.
        double top = 0.0;
        for (std::size_t c : order) top = std::max(top, static_cast<double>(a[c] + b[c]) / pooled);
        const double rest = 1.0 - top;
        const double need = rest > 0.0 ? min_expected / rest : 10.0 * n_small;
        throw PowerError("chi_squared_two_sample: fewer than two bins reach the expected-count floor",
                         static_cast<std::size_t>(std::ceil(need)));
    }

    double stat = 0.0;
    for (auto [oa, ob] : bins) {
        const double share = (oa + ob) / pooled;
        const double ea = share * na;
        const double eb = share * nb;
        stat += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    }
    const double dof = static_cast<double>(bins.size()) - 1.0;
    return {stat, dof, chi_squared_sf(stat, dof)};
}

double mean(std::span<const double> xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

TestResult z_test_means(std::span<const double> a, std::span<const double> b) {
    const double se = std::sqrt(variance(a) / static_cast<double>(a.size()) +
                                variance(b) / static_cast<double>(b.size()));
    const double diff = mean(a) - mean(b);
    if (se == 0.0) return {0.0, 0.0, diff == 0.0 ? 1.0 : 0.0};
    const double z = diff / se;
    return {z, 0.0, normal_two_sided(z)};
}

TestResult z_test_variances(std::span<const double> a, std::span<const double> b) {
    auto sq_dev = [](std::span<const double> xs) {
        const double m = mean(xs);
        std::vector<double> d(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) d[i] = (xs[i] - m) * (xs[i] - m);
        return d;
    };
    const auto da = sq_dev(a);
    const auto db = sq_dev(b);
    return z_test_means(da, db);
}

} // namespace stdrep::stats
