#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncga/ga.hpp"
#include "ncga/p2p_sim.hpp"

namespace ncga::cli {

/// Process exit codes.
enum ExitCode : int { kOk = 0, kInvalidInput = 2, kInfeasible = 3, kTooLarge = 4 };

/// Everything a subcommand needs. The text form is one `key = value` per
/// line with keys spelled like the long flags; lists are comma separated.
struct ExperimentConfig {
  // Network: a graph file, or generator parameters when `graph` is empty.
  std::string graph;
  std::size_t nodes = 30;
  std::size_t links = 90;
  std::size_t receivers = 20;
  std::uint32_t rate = 5;
  std::uint32_t target = 0;  // 0: the network's own rate

  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::string out = "out";
  std::string assignment;  // GA result file for GANS; optimized on the fly when empty

  GaParams ga;
  std::array<double, 6> a = FitnessCoefficients{}.a;

  std::string strategy = "CAN";  // simulate only
  std::vector<std::size_t> file_sizes{64, 128, 256};  // in blocks
  std::size_t block_size = 64;
  std::size_t segment_blocks = 8;
  std::optional<std::size_t> rsn_count;  // unset: the GA's coding-node count
  std::uint32_t deadline = 0;            // 0: one round per block of the file
  std::vector<std::size_t> dynamic_links{0};
  std::uint32_t churn_horizon = 0;       // 0: the deadline
  ForwardPolicy forward = ForwardPolicy::innovative_if_known;

  /// Throws ConfigError.
  void validate() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::string serialize_config(const ExperimentConfig& cfg);
/// Throws ConfigError on unknown keys or bad values.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Keys accepted by parse_config, in serialization order. Each is also a flag.
std::vector<std::string> config_keys();
/// Sets one key from its text form. Throws ConfigError.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

enum class ChartKind { download_time_vs_filesize, failure_vs_dynamic_links, redundancy_vs_filesize, throughput_vs_time };

std::string to_string(ChartKind kind);

struct ChartSpec {
  ChartKind kind;
  std::vector<double> x;
  std::vector<std::pair<std::string, std::vector<double>>> series;  // NaN leaves a gap

  /// Throws InvalidParams when a series length differs from x.
  void validate() const;
};

/// 800x500 SVG, one polyline per series, legend, axis labels.
std::string render_svg(const ChartSpec& chart);

/// Entry point behind the `ncga` binary. Returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ncga::cli
