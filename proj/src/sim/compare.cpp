#include <cmath>
#include <sstream>

#include "ncga/p2p_sim.hpp"

namespace ncga {

namespace {

MetricSummary summarize(const std::vector<double>& xs) {
  MetricSummary s;
  s.n = xs.size();
  if (xs.empty()) return s;
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

}  // namespace

Comparison compare_strategies(const Network& net, const SimConfig& cfg_base, const CodingAssignment* ga_result,
                              const std::vector<std::uint64_t>& seeds, const CompareOptions& options) {
  Comparison out;
  for (Strategy strategy : options.strategies) {
    std::vector<double> red, avg, mx, thr, fail;
    for (std::uint64_t seed : seeds) {
      SimConfig cfg = cfg_base;
      cfg.seed = seed;
      cfg.strategy = strategy;
      if (options.dynamic_links > 0) cfg.churn = random_link_churn(net, options.dynamic_links, options.churn_horizon, seed);
      const EffectiveCoding coding = select_coding_nodes(net, strategy, cfg.rsn_count, ga_result, seed);
      const SimMetrics m = run_simulation(net, coding.assignment, cfg);
      out.rows.push_back({strategy, seed, coding.coding_nodes.size(), m});
      red.push_back(m.packet_redundancy);
      if (m.avg_distribution_time) avg.push_back(*m.avg_distribution_time);
      if (m.max_download_time) mx.push_back(*m.max_download_time);
      thr.push_back(m.system_throughput);
      fail.push_back(m.failure_rate);
    }
    out.summary.push_back({strategy, summarize(red), summarize(avg), summarize(mx), summarize(thr), summarize(fail)});
  }
  return out;
}

std::string metrics_csv_header() { return "strategy,seed,redundancy,avg_time,max_time,throughput,failure_rate"; }

std::string metrics_csv_row(Strategy s, std::uint64_t seed, const SimMetrics& m) {
  std::ostringstream out;
  out.precision(10);
  out << to_string(s) << ',' << seed << ',' << m.packet_redundancy << ',';
  if (m.avg_distribution_time) out << *m.avg_distribution_time;
  out << ',';
  if (m.max_download_time) out << *m.max_download_time;
  out << ',' << m.system_throughput << ',' << m.failure_rate;
  return out.str();
}

}  // namespace ncga
