#include "pssmp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pssmp {

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_exact_pvalue(double d, std::size_t n, std::size_t m) {
  if (n == 0 || m == 0) throw std::invalid_argument("empty sample");
  if (m > n) std::swap(m, n);
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  // Paths strictly inside |i/m - j/n| < d; q is the grid-adjusted threshold.
  const double q = (0.5 + std::floor(d * md * nd - 1e-7)) / (md * nd);
  std::vector<double> u(n + 1);
  for (std::size_t j = 0; j <= n; ++j) u[j] = (static_cast<double>(j) / nd > q) ? 0.0 : 1.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(i + n);
    u[0] = (static_cast<double>(i) / md > q) ? 0.0 : w * u[0];
    for (std::size_t j = 1; j <= n; ++j) {
      u[j] = (std::fabs(static_cast<double>(i) / md - static_cast<double>(j) / nd) > q) ? 0.0
                                                                                      : w * u[j] + u[j - 1];
    }
  }
  return std::clamp(1.0 - u[n], 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, std::size_t exact_limit) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample needs non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  KsResult r;
  r.statistic = d;
  if (a.size() * b.size() <= exact_limit) {
    r.exact = true;
    r.p_value = d == 0.0 ? 1.0 : ks_exact_pvalue(d, a.size(), b.size());
  } else {
    const double en = std::sqrt(na * nb / (na + nb));
    r.p_value = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
  }
  return r;
}

Ecdf::Ecdf(std::vector<double> samples) : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw std::invalid_argument("Ecdf needs samples");
  std::sort(sorted_.begin(), sorted_.end());
}

double Ecdf::cdf(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double Ecdf::cdf_strict(double x) const {
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double Ecdf::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  const double pos = p * static_cast<double>(sorted_.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted_.size() - 1);
  return sorted_[lo] + (pos - static_cast<double>(lo)) * (sorted_[hi] - sorted_[lo]);
}

SampleSummary summarize(const std::vector<double>& x) {
  SampleSummary s;
  s.n = x.size();
  if (x.empty()) return s;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  s.mean = mean;
  s.sd = x.size() > 1 ? std::sqrt(ss / static_cast<double>(x.size() - 1)) : 0.0;
  s.stderr_ = s.sd / std::sqrt(static_cast<double>(x.size()));
  return s;
}

double median(std::vector<double> x) { return Ecdf(std::move(x)).quantile(0.5); }

double iqr(std::vector<double> x) {
  const Ecdf e(std::move(x));
  return e.quantile(0.75) - e.quantile(0.25);
}

}  // namespace pssmp
