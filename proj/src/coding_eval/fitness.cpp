#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "ncga/coding_eval.hpp"
#include "ncga/error.hpp"

namespace ncga {

bool FitnessCoefficients::valid() const {
  if (std::any_of(a.begin(), a.end(), [](double x) { return !(x > 0); })) return false;
  if (target_rate == 0) return false;
  return std::min(a[0], a[1]) > std::max(a[2], a[3]) && std::min(a[4], a[5]) > std::max(a[0], a[1]);
}

void FitnessCoefficients::validate() const {
  if (!valid()) {
    throw InvalidCoefficients("coefficients must be positive with min(a1,a2) > max(a3,a4) and "
                              "min(a5,a6) > max(a1,a2)");
  }
}

double fitness(std::span<const std::uint32_t> achieved, ResourceCount resources, const FitnessCoefficients& c) {
  c.validate();
  if (achieved.empty()) throw std::invalid_argument("fitness needs at least one receiver");
  const double min_rate = *std::min_element(achieved.begin(), achieved.end());
  const double avg_rate = std::accumulate(achieved.begin(), achieved.end(), 0.0) / static_cast<double>(achieved.size());
  const bool reached = min_rate >= c.target_rate;
  const double node_weight = reached ? c.a[4] : c.a[2];
  const double link_weight = reached ? c.a[5] : c.a[3];
  return c.a[0] * min_rate + c.a[1] * avg_rate + node_weight / static_cast<double>(resources.coding_nodes + 1) +
         link_weight / static_cast<double>(resources.coding_links + 1);
}

FitnessReport make_report(const Network& net, std::span<const std::uint32_t> achieved, ResourceCount resources,
                          const FitnessCoefficients& c) {
  FitnessReport report;
  for (std::size_t i = 0; i < achieved.size(); ++i) report.achieved.emplace_back(net.receivers().at(i), achieved[i]);
  report.min_rate = achieved.empty() ? 0 : *std::min_element(achieved.begin(), achieved.end());
  report.avg_rate = achieved.empty() ? 0.0
                                     : std::accumulate(achieved.begin(), achieved.end(), 0.0) /
                                           static_cast<double>(achieved.size());
  report.resources = resources;
  report.objective = fitness(achieved, resources, c);
  return report;
}

void FitnessEstimator::push(double sample) {
  // Welford update.
  ++n_;
  const double delta = sample - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (sample - mean_);
}

double FitnessEstimator::variance() const {
  if (n_ < 2) throw std::logic_error("variance needs at least two samples");
  return std::max(0.0, m2_ / static_cast<double>(n_ - 1));
}

double student_t_quantile(double p, double degrees_of_freedom) {
  const boost::math::students_t dist(degrees_of_freedom);
  return boost::math::quantile(dist, p);
}

double FitnessEstimator::half_width(double confidence) const {
  const double t_crit = student_t_quantile(0.5 + confidence / 2.0, static_cast<double>(n_ - 1));
  return t_crit * std::sqrt(variance() / static_cast<double>(n_));
}

double FitnessEstimator::t_statistic(double mu) const {
  return (mean_ - mu) * std::sqrt(static_cast<double>(n_ - 1)) / std::sqrt(variance());
}

EstimateResult estimate_fitness(const std::function<double(std::size_t)>& sampler, double confidence,
                                double tolerance, std::size_t max_trials) {
  if (max_trials < 2) throw std::invalid_argument("estimate_fitness needs max_trials >= 2");
  if (!(confidence > 0 && confidence < 1)) throw std::invalid_argument("confidence must lie in (0, 1)");
  FitnessEstimator est;
  while (est.count() < max_trials) {
    est.push(sampler(est.count()));
    if (est.count() >= 2 && est.half_width(confidence) <= tolerance) {
      return {est.mean(), est.count(), false};
    }
  }
  return {est.mean(), est.count(), true};
}

}  // namespace ncga
