#include "evolab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace evolab {
namespace stats {

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("sample_sd: empty sample");
  if (xs.size() == 1) return 0.0;
  double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

Descriptive descriptive(const std::vector<double>& xs) {
  return Descriptive{mean(xs), sample_sd(xs)};
}

namespace {

void require_samples(const std::vector<double>& a, const std::vector<double>& b,
                     const char* who) {
  if (a.empty() || b.empty())
    throw std::invalid_argument(std::string(who) + ": empty sample");
}

// Midranks of the pooled sample plus tie bookkeeping.
struct RankInfo {
  double rank_sum_a = 0.0;
  bool has_ties = false;
  double tie_sum = 0.0;  // sum of t^3 - t over tied groups
};

RankInfo midranks(const std::vector<double>& a, const std::vector<double>& b) {
  struct Entry {
    double value;
    bool from_a;
  };
  std::vector<Entry> pooled;
  pooled.reserve(a.size() + b.size());
  for (double x : a) pooled.push_back({x, true});
  for (double x : b) pooled.push_back({x, false});
  std::sort(pooled.begin(), pooled.end(),
            [](const Entry& l, const Entry& r) { return l.value < r.value; });

  RankInfo info;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    double t = static_cast<double>(j - i);
    // Ranks are 1-based; tied values share the average of their ranks.
    double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    if (j - i > 1) {
      info.has_ties = true;
      info.tie_sum += t * t * t - t;
    }
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].from_a) info.rank_sum_a += rank;
    i = j;
  }
  return info;
}

double u_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  double m = static_cast<double>(a.size());
  return midranks(a, b).rank_sum_a - m * (m + 1.0) / 2.0;
}

// Exact null distribution of the rank sum for sample sizes (m, n):
// counts[s] = number of m-subsets of ranks 1..m+n with rank sum s.
std::vector<double> rank_sum_counts(std::size_t m, std::size_t n) {
  std::size_t total = m + n;
  std::size_t max_sum = m * total;
  std::vector<std::vector<double>> dp(m + 1, std::vector<double>(max_sum + 1, 0.0));
  dp[0][0] = 1.0;
  for (std::size_t r = 1; r <= total; ++r)
    for (std::size_t k = std::min(r, m); k >= 1; --k)
      for (std::size_t s = max_sum; s >= r; --s)
        if (dp[k - 1][s - r] > 0.0) dp[k][s] += dp[k - 1][s - r];
  return dp[m];
}

}  // namespace

namespace detail {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    double term = 2.0 * std::exp(-2.0 * j * j * lambda * lambda);
    if (j % 2 == 0) term = -term;
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-14;
  constexpr double kTiny = 1e-300;

  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (a <= 0.0 || b <= 0.0)
    throw std::invalid_argument("incomplete_beta: a and b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                 a * std::log(x) + b * std::log1p(-x);
  double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double mwu_exact_p(const std::vector<double>& a, const std::vector<double>& b) {
  require_samples(a, b, "mwu_exact_p");
  RankInfo info = midranks(a, b);
  if (info.has_ties)
    throw std::invalid_argument("mwu_exact_p: exact enumeration requires no ties");
  double m = static_cast<double>(a.size());
  double u1 = info.rank_sum_a - m * (m + 1.0) / 2.0;

  auto counts = rank_sum_counts(a.size(), b.size());
  double min_sum = m * (m + 1.0) / 2.0;
  double total = 0.0, below = 0.0, above = 0.0;
  for (std::size_t s = 0; s < counts.size(); ++s) {
    double u = static_cast<double>(s) - min_sum;
    if (u < 0.0) continue;
    total += counts[s];
    if (u <= u1) below += counts[s];
    if (u >= u1) above += counts[s];
  }
  return std::min(1.0, 2.0 * std::min(below, above) / total);
}

double mwu_normal_p(const std::vector<double>& a, const std::vector<double>& b) {
  require_samples(a, b, "mwu_normal_p");
  double m = static_cast<double>(a.size());
  double n = static_cast<double>(b.size());
  RankInfo info = midranks(a, b);
  double u1 = info.rank_sum_a - m * (m + 1.0) / 2.0;

  double mu = m * n / 2.0;
  double nt = m + n;
  double var = m * n / 12.0 * ((nt + 1.0) - info.tie_sum / (nt * (nt - 1.0)));
  // All pooled values identical: no evidence either way.
  if (var <= 0.0) return 1.0;
  double diff = u1 - mu;
  double cc = diff > 0.0 ? -0.5 : (diff < 0.0 ? 0.5 : 0.0);  // continuity, toward the mean
  double z = (diff + cc) / std::sqrt(var);
  return std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(z))));
}

}  // namespace detail

TestResult mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b) {
  require_samples(a, b, "mann_whitney_u");
  RankInfo info = midranks(a, b);

  TestResult res;
  res.statistic = u_statistic(a, b);
  res.n_a = a.size();
  res.n_b = b.size();
  if (a.size() + b.size() < 16 && !info.has_ties) {
    res.p_value = detail::mwu_exact_p(a, b);
    res.method = "mwu-exact";
  } else {
    res.p_value = detail::mwu_normal_p(a, b);
    res.method = "mwu-normal";
  }
  return res;
}

TestResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  require_samples(a, b, "welch_t");
  if (a.size() < 2 || b.size() < 2)
    throw std::invalid_argument("welch_t: each sample needs at least 2 values");
  double m1 = mean(a), m2 = mean(b);
  double s1 = sample_sd(a), s2 = sample_sd(b);
  double n1 = static_cast<double>(a.size()), n2 = static_cast<double>(b.size());
  double se1 = s1 * s1 / n1, se2 = s2 * s2 / n2;

  TestResult res;
  res.n_a = a.size();
  res.n_b = b.size();
  res.method = "welch-t";
  if (se1 + se2 == 0.0) {
    // Zero variance in both samples: identical means are indistinguishable,
    // different means are unambiguously separated.
    res.statistic =
        m1 == m2 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), m1 - m2);
    res.p_value = m1 == m2 ? 1.0 : 0.0;
    return res;
  }

  double t = (m1 - m2) / std::sqrt(se1 + se2);
  double dof = (se1 + se2) * (se1 + se2) /
               (se1 * se1 / (n1 - 1.0) + se2 * se2 / (n2 - 1.0));
  res.statistic = t;
  // Two-sided p from Student's t: P(|T| >= |t|) = I_{nu/(nu+t^2)}(nu/2, 1/2).
  double x = dof / (dof + t * t);
  res.p_value = std::clamp(detail::incomplete_beta(dof / 2.0, 0.5, x), 0.0, 1.0);
  return res;
}

TestResult ks_2samp(const std::vector<double>& a, const std::vector<double>& b) {
  require_samples(a, b, "ks_2samp");
  std::vector<double> sa = a, sb = b;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  double n1 = static_cast<double>(sa.size()), n2 = static_cast<double>(sb.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < sa.size() && j < sb.size()) {
    double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= x) ++i;
    while (j < sb.size() && sb[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }

  TestResult res;
  res.statistic = d;
  res.n_a = sa.size();
  res.n_b = sb.size();
  res.method = "ks-asymptotic";
  double en = std::sqrt(n1 * n2 / (n1 + n2));
  res.p_value = detail::kolmogorov_q(en * d);
  return res;
}

double bonferroni(double p, std::size_t m) {
  if (m == 0) throw std::invalid_argument("bonferroni: m must be positive");
  return std::min(1.0, p * static_cast<double>(m));
}

}  // namespace stats
}  // namespace evolab
