#pragma once
// Monte Carlo aggregation, survival curves, reference comparisons and
// Kolmogorov-Smirnov tests.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace wentzell {

// stderr is sqrt(sum (x - mean)^2 / n) / sqrt(n).
struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

// Throws DomainError for n < 2. Sums use the fixed-order batch kernels, so the
// result is the same for every ISA and thread count.
McEstimate mc_estimate(std::span<const double> samples, std::uint64_t seed = 0);

// Streaming form (Welford); merge() combines partial results from workers.
class McAccumulator {
 public:
  void add(double x);
  void merge(const McAccumulator& other);
  std::size_t count() const { return n_; }
  McEstimate estimate(std::uint64_t seed = 0) const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct SurvivalPoint {
  double t;
  double p;          // fraction of samples > t
  double std_error;  // sqrt(p (1 - p) / n)
};

std::vector<SurvivalPoint> empirical_survival(std::span<const double> samples, std::span<const double> t_grid);

double empirical_median(std::span<const double> samples);

struct ComparisonPoint {
  double x;
  McEstimate mc;
  double reference;
  double z;  // (mean - reference) / stderr
  bool pass;
};

struct ComparisonReport {
  double k = 3.0;
  double bias_budget = 0.0;
  std::vector<ComparisonPoint> points;
  double pass_fraction = 0.0;
  bool pass = false;
};

// A point passes when |mean - reference| <= k stderr + bias_budget. The report
// passes when at least 95% of points pass and none is off by more than
// 2k stderr + bias_budget. Throws DomainError on mismatched lengths.
ComparisonReport compare_with_reference(std::span<const double> grid, std::span<const McEstimate> mc,
                                        std::span<const double> reference, double k = 3.0,
                                        double bias_budget = 0.0);

struct KsResult {
  double statistic;
  double p_value;
  std::size_t n1, n2;  // n2 = 0 for the one-sample test
};

// Asymptotic Kolmogorov distribution tail P(K > x).
double kolmogorov_tail(double x);

KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf);
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

void to_json(nlohmann::json& j, const McEstimate& e);
void to_json(nlohmann::json& j, const SurvivalPoint& s);
void to_json(nlohmann::json& j, const ComparisonReport& r);
void to_json(nlohmann::json& j, const KsResult& r);

// "x,mean,stderr,reference,z,pass"
void write_comparison_csv(std::ostream& out, const ComparisonReport& r);
// "t,survival,stderr"
void write_survival_csv(std::ostream& out, std::span<const SurvivalPoint> s);

}  // namespace wentzell
