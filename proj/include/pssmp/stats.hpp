#pragma once

#include <cstddef>
#include <vector>

namespace pssmp {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  bool exact = false;
};

// Two-sample Kolmogorov-Smirnov. Small problems (n m <= exact_limit) use the
// exact lattice-path distribution, larger ones the Kolmogorov limit with the
// Stephens effective-n correction.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, std::size_t exact_limit = 10000);

// P(D >= d) for continuous data, exact.
double ks_exact_pvalue(double d, std::size_t n, std::size_t m);
// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_q(double lambda);

class Ecdf {
 public:
  explicit Ecdf(std::vector<double> samples);
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }
  // P(X <= x)
  double cdf(double x) const;
  // P(X < x)
  double cdf_strict(double x) const;
  double quantile(double p) const;

 private:
  std::vector<double> sorted_;
};

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double stderr_ = 0.0;
};

SampleSummary summarize(const std::vector<double>& x);
double median(std::vector<double> x);
// Interquartile range with linear interpolation between order statistics.
double iqr(std::vector<double> x);

}  // namespace pssmp
