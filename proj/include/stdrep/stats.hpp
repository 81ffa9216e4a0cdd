#pragma once

// Small set of classical tests used by the statistical checks.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stdrep::stats {

struct TestResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_value = 1.0;
};

/// Upper tail of the chi-squared distribution.
double chi_squared_sf(double x, double dof);

/// Two-sided normal tail probability of |Z| >= |z|.
double normal_two_sided(double z);

/// Asymptotic Kolmogorov p-value with the Stephens small-sample correction.
double kolmogorov_sf(double d, std::size_t n);

/// One-sample KS test of `xs` against Uniform[0,1]. Sorts a copy.
TestResult ks_uniform(std::span<const double> xs);

/// Goodness of fit of counts against exact probabilities. Categories with
/// probability 0 must have count 0. Throws PowerError when some expected
/// count is below `min_expected`.
TestResult chi_squared_gof(std::span<const std::uint64_t> counts, std::span<const double> probs,
                           double min_expected = 5.0);

/// Two-sample homogeneity test on frequency vectors with equal run counts.
/// Categories are sorted by pooled frequency and the rarest are merged until
/// every bin reaches `min_expected` per sample. Throws PowerError when fewer
/// than two bins remain.
TestResult chi_squared_two_sample(std::span<const std::uint64_t> a,
                                  std::span<const std::uint64_t> b, double min_expected = 5.0);

/// Welch z-test for equal means.
TestResult z_test_means(std::span<const double> a, std::span<const double> b);

/// z-test for equal variances, comparing mean squared deviations.
TestResult z_test_variances(std::span<const double> a, std::span<const double> b);

double mean(std::span<const double> xs);
double variance(std::span<const double> xs); ///< unbiased

} // namespace stdrep::stats
