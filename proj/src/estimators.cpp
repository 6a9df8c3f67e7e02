#include "wentzell/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "wentzell/error.hpp"
#include "wentzell/simd/kernels.hpp"

namespace wentzell {

McEstimate mc_estimate(std::span<const double> samples, std::uint64_t seed) {
  const std::size_t n = samples.size();
  if (n < 2) throw DomainError("mc_estimate needs at least two samples");
  const auto& k = simd::kernels();
  const double mean = k.sum(samples.data(), n) / static_cast<double>(n);
  const double var = k.sum_sq_dev(samples.data(), n, mean) / static_cast<double>(n);
  return {mean, std::sqrt(var / static_cast<double>(n)), n, seed};
}

void McAccumulator::add(double x) {
  ++n_;
  const double d = x - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (x - mean_);
}

void McAccumulator::merge(const McAccumulator& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double n = static_cast<double>(n_ + o.n_);
  const double d = o.mean_ - mean_;
  mean_ += d * static_cast<double>(o.n_) / n;
  m2_ += o.m2_ + d * d * static_cast<double>(n_) * static_cast<double>(o.n_) / n;
  n_ += o.n_;
}

McEstimate McAccumulator::estimate(std::uint64_t seed) const {
  if (n_ < 2) throw DomainError("mc_estimate needs at least two samples");
  const double n = static_cast<double>(n_);
  return {mean_, std::sqrt(m2_ / n / n), n_, seed};
}

std::vector<SurvivalPoint> empirical_survival(std::span<const double> samples, std::span<const double> t_grid) {
  if (samples.empty()) throw DomainError("empirical_survival: empty sample set");
  std::vector<double> s(samples.begin(), samples.end());
  for (double v : s)
    if (!(v >= 0.0)) throw DomainError("empirical_survival: samples must be >= 0");
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  std::vector<SurvivalPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto above = s.end() - std::upper_bound(s.begin(), s.end(), t);
    const double p = static_cast<double>(above) / n;
    out.push_back({t, p, std::sqrt(p * (1.0 - p) / n)});
  }
  return out;
}

double empirical_median(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("empirical_median: empty sample set");
  std::vector<double> s(samples.begin(), samples.end());
  const std::size_t mid = s.size() / 2;
  std::nth_element(s.begin(), s.begin() + mid, s.end());
  if (s.size() % 2 == 1) return s[mid];
  const double hi = s[mid];
  const double lo = *std::max_element(s.begin(), s.begin() + mid);
  return 0.5 * (lo + hi);
}

ComparisonReport compare_with_reference(std::span<const double> grid, std::span<const McEstimate> mc,
                                        std::span<const double> reference, double k, double bias_budget) {
  if (grid.size() != mc.size() || grid.size() != reference.size())
    throw DomainError("compare_with_reference: grid, estimates and reference differ in length");
  if (grid.empty()) throw DomainError("compare_with_reference: empty grid");
  if (!(k > 0.0) || !(bias_budget >= 0.0)) throw DomainError("compare_with_reference: need k > 0, budget >= 0");
  ComparisonReport r;
  r.k = k;
  r.bias_budget = bias_budget;
  std::size_t passed = 0;
  bool within_hard_limit = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double diff = std::fabs(mc[i].mean - reference[i]);
    double z = 0.0;
    if (mc[i].std_error > 0.0)
      z = (mc[i].mean - reference[i]) / mc[i].std_error;
    else if (diff > 0.0)
      z = std::copysign(std::numeric_limits<double>::infinity(), mc[i].mean - reference[i]);
    const bool pass = diff <= k * mc[i].std_error + bias_budget;
    if (!(diff <= 2.0 * k * mc[i].std_error + bias_budget)) within_hard_limit = false;
    passed += pass;
    r.points.push_back({grid[i], mc[i], reference[i], z, pass});
  }
  r.pass_fraction = static_cast<double>(passed) / static_cast<double>(grid.size());
  r.pass = r.pass_fraction >= 0.95 && within_hard_limit;
  return r;
}

double kolmogorov_tail(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * x * x);
    sum += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

namespace {

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> s(x.begin(), x.end());
  for (double v : s)
    if (std::isnan(v)) throw DomainError("KS test: NaN sample");
  std::sort(s.begin(), s.end());
  return s;
}

double ks_p_value(double d, double ne) {
  const double rn = std::sqrt(ne);
  return kolmogorov_tail((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

KsResult ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_one_sample: empty sample set");
  const auto s = sorted_copy(samples);
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, ks_p_value(d, n), s.size(), 0};
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample set");
  const auto x = sorted_copy(a);
  const auto y = sorted_copy(b);
  const double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  return {d, ks_p_value(d, n1 * n2 / (n1 + n2)), x.size(), y.size()};
}

void to_json(nlohmann::json& j, const McEstimate& e) {
  j = {{"mean", e.mean}, {"stderr", e.std_error}, {"n", e.n}, {"seed", e.seed}};
}

void to_json(nlohmann::json& j, const SurvivalPoint& s) {
  j = {{"t", s.t}, {"survival", s.p}, {"stderr", s.std_error}};
}

void to_json(nlohmann::json& j, const ComparisonReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) {
    nlohmann::json z = std::isfinite(p.z) ? nlohmann::json(p.z) : nlohmann::json(p.z > 0 ? "inf" : "-inf");
    pts.push_back({{"x", p.x}, {"mc", p.mc}, {"reference", p.reference}, {"z", z}, {"pass", p.pass}});
  }
  j = {{"k", r.k}, {"bias_budget", r.bias_budget}, {"pass_fraction", r.pass_fraction}, {"pass", r.pass},
       {"points", pts}};
}

void to_json(nlohmann::json& j, const KsResult& r) {
  j = {{"statistic", r.statistic}, {"p_value", r.p_value}, {"n1", r.n1}, {"n2", r.n2}};
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& r) {
  const auto old = out.precision(17);
  out << "x,mean,stderr,reference,z,pass\n";
  for (const auto& p : r.points)
    out << p.x << ',' << p.mc.mean << ',' << p.mc.std_error << ',' << p.reference << ',' << p.z << ','
        << (p.pass ? 1 : 0) << '\n';
  out.precision(old);
}

void write_survival_csv(std::ostream& out, std::span<const SurvivalPoint> s) {
  const auto old = out.precision(17);
  out << "t,survival,stderr\n";
  for (const auto& p : s) out << p.t << ',' << p.p << ',' << p.std_error << '\n';
  out.precision(old);
}

}  // namespace wentzell
