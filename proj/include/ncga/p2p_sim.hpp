#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ncga/coding_eval.hpp"
#include "ncga/galois.hpp"
#include "ncga/netgraph.hpp"

namespace ncga {

enum class Strategy { GANS, RSN, CAN, NONE };

std::string to_string(Strategy s);
/// Accepts GANS, RSN, CAN, NONE (any case). Throws std::invalid_argument.
Strategy parse_strategy(const std::string& name);

/// What a forwarding (single-input) link sends.
enum class ForwardPolicy {
  round_robin,          // cycle through the buffered packets of the input
  innovative_if_known,  // first buffered packet the receiver can use, else round robin
};

struct SimConfig {
  std::size_t content_size_bytes = 4096;
  std::size_t block_size_bytes = 64;
  std::size_t blocks_per_segment = 8;
  Strategy strategy = Strategy::CAN;
  std::size_t rsn_count = 0;
  ChurnSchedule churn;
  std::uint32_t deadline_rounds = 1000;
  std::uint64_t seed = 1;
  ForwardPolicy forward = ForwardPolicy::innovative_if_known;
  bool record_trace = false;
  bool keep_buffers = false;

  std::size_t segment_bytes() const { return block_size_bytes * blocks_per_segment; }
  std::size_t segment_count() const;
  std::size_t total_blocks() const { return segment_count() * blocks_per_segment; }
  /// Throws InvalidParams.
  void validate() const;
};

struct EffectiveCoding {
  std::set<NodeId> coding_nodes;
  CodingAssignment assignment;
};

/// CAN: all-ones masks at every merging node. RSN: rsn_count random merging
/// nodes with all-ones masks. GANS: the GA result as given. NONE: no coding.
/// Non-coding masks get one uniformly chosen bit. Throws MissingGaResult for
/// GANS without a result and InvalidParams when rsn_count exceeds the number
/// of merging nodes.
EffectiveCoding select_coding_nodes(const Network& net, Strategy strategy, std::size_t rsn_count,
                                    const CodingAssignment* ga_result, std::uint64_t seed);

struct SimMetrics {
  double packet_redundancy = 0;
  std::optional<double> avg_distribution_time;  // rounds; absent without completions
  std::optional<double> max_download_time;      // rounds; absent without completions
  double system_throughput = 0;                  // decoded bytes per round
  double failure_rate = 0;

  std::size_t peers = 0;  // receivers; failure_rate is over these
  std::size_t completed = 0;
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_received = 0;
  std::uint64_t packets_lost = 0;
  std::uint64_t packets_innovative = 0;
  std::uint64_t ideal_traffic = 0;  // non-source nodes times total blocks
  std::uint32_t rounds_run = 0;
  bool content_verified = true;  // every decoded segment matched the source bit for bit

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

struct TraceEntry {
  std::uint32_t round;
  LinkId link;
  std::uint32_t segment;
  bool innovative;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct SimResult {
  SimMetrics metrics;
  std::map<NodeId, std::uint32_t> completion_round;  // receivers that finished
  std::vector<double> decoded_bytes_by_round;        // cumulative, one entry per round run
  std::vector<TraceEntry> trace;                     // with record_trace
  std::vector<std::uint8_t> content;
  /// With keep_buffers: [node][segment] innovative packets held at the end.
  std::vector<std::vector<std::vector<gf::CodedBlock>>> buffers;
};

/// Synchronous rounds. Each round applies the churn due, lets every node put
/// `capacity` packets on each alive outgoing link, then delivers them. A
/// packet targets the lowest segment the receiving end still needs and for
/// which the sender's permitted inputs span more than the link has carried.
/// Each node decodes a segment once its innovative packets reach rank B;
/// what arrived on each input is kept separately for relaying.
SimResult simulate(const Network& net, const CodingAssignment& coding, const SimConfig& cfg);
SimMetrics run_simulation(const Network& net, const CodingAssignment& coding, const SimConfig& cfg);

struct CompareOptions {
  std::size_t dynamic_links = 0;  // per seed, a fresh random_link_churn shared by all strategies
  std::uint32_t churn_horizon = 100;
  std::vector<Strategy> strategies{Strategy::GANS, Strategy::RSN, Strategy::CAN, Strategy::NONE};
};

struct ComparisonRow {
  Strategy strategy;
  std::uint64_t seed;
  std::size_t coding_nodes;
  SimMetrics metrics;
};

struct MetricSummary {
  double mean = 0;
  double stddev = 0;
  std::size_t n = 0;
};

struct StrategySummary {
  Strategy strategy;
  MetricSummary redundancy, avg_time, max_time, throughput, failure_rate;
};

struct Comparison {
  std::vector<ComparisonRow> rows;  // strategy-major, seeds in the given order
  std::vector<StrategySummary> summary;
};

/// Runs every strategy over the seed list. For seed k the simulation seed,
/// the RSN/NONE selection seed and the churn schedule are shared across
/// strategies.
Comparison compare_strategies(const Network& net, const SimConfig& cfg_base, const CodingAssignment* ga_result,
                              const std::vector<std::uint64_t>& seeds, const CompareOptions& options = {});

/// `strategy,seed,redundancy,avg_time,max_time,throughput,failure_rate` rows.
std::string metrics_csv_header();
std::string metrics_csv_row(Strategy s, std::uint64_t seed, const SimMetrics& m);

}  // namespace ncga
