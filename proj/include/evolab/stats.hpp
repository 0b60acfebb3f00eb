#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace evolab {
namespace stats {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::string method;  // e.g. "mwu-exact", "mwu-normal", "welch-t", "ks-asymptotic"
};

struct Descriptive {
  double mean = 0.0;
  double sd = 0.0;  // sample SD, n-1 denominator; 0 for n=1
};

double mean(const std::vector<double>& xs);
// Sample standard deviation (n-1 denominator); 0 for a single element.
double sample_sd(const std::vector<double>& xs);
Descriptive descriptive(const std::vector<double>& xs);

// Two-sided Mann-Whitney U with midranks for ties. Uses the exact null
// distribution (full enumeration by dynamic programming) when the combined
// sample size is below 16 and there are no ties; otherwise the normal
// approximation with tie and continuity corrections. statistic is U of the
// first sample.
TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b);

// Two-sided Welch's t test (unequal variances, Welch-Satterthwaite dof).
// Degenerate samples (both variances zero) give p = 1 when the means are
// equal and p = 0 otherwise.
TestResult welch_t(const std::vector<double>& a, const std::vector<double>& b);

// Two-sample Kolmogorov-Smirnov: statistic is the max ECDF gap D, and the
// p value is the asymptotic Kolmogorov distribution at sqrt(nm/(n+m)) * D.
TestResult ks_2samp(const std::vector<double>& a, const std::vector<double>& b);

// Bonferroni correction for m comparisons: min(1, p * m).
double bonferroni(double p, std::size_t m);

// Internal pieces exposed for testing.
namespace detail {
// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double incomplete_beta(double a, double b, double x);
// Standard normal CDF.
double normal_cdf(double z);
// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);
// The two Mann-Whitney p-value paths, individually (no-ties samples only
// for the exact path).
double mwu_exact_p(const std::vector<double>& a, const std::vector<double>& b);
double mwu_normal_p(const std::vector<double>& a, const std::vector<double>& b);
}  // namespace detail

}  // namespace stats
}  // namespace evolab
