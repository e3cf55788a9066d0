#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncga/netgraph.hpp"

namespace ncga {

/// One bit per incoming link of the owning node, ascending link id.
/// Bit set = that input may contribute to the outgoing link.
using Mask = std::vector<bool>;

/// Flat bit string holding every mask, in layout order.
using Genome = std::vector<bool>;

/// Fixed ordering of masks for a network: merging nodes in topological
/// order, then each node's outgoing links by id. Built from structure only,
/// so churn snapshots of one network share a layout.
class GenomeLayout {
 public:
  struct Slot {
    NodeId node;
    LinkId out_link;
    std::size_t offset;  // first bit in the genome
    std::size_t width;   // in-degree of `node`
  };

  GenomeLayout() = default;
  explicit GenomeLayout(const Network& net);

  const std::vector<NodeId>& merging() const { return merging_; }
  const std::vector<Slot>& slots() const { return slots_; }
  std::size_t length() const { return length_; }
  std::optional<std::size_t> slot_index(NodeId node, LinkId out_link) const;

  /// Slot indices owned by a merging node (empty for other nodes).
  std::span<const std::size_t> slots_of(NodeId node) const;
  bool is_merging(NodeId node) const { return node < slot_ranges_.size() && !slots_of(node).empty(); }
  /// Incoming links of a merging node; bit i of its masks refers to in_links[i].
  std::span<const LinkId> in_links(NodeId node) const { return in_links_.at(node); }

 private:
  std::vector<NodeId> merging_;
  std::vector<Slot> slots_;
  std::vector<std::vector<std::size_t>> slot_ranges_;
  std::vector<std::vector<LinkId>> in_links_;
  std::size_t length_ = 0;
};

/// Per (merging node, outgoing link) contribution masks.
class CodingAssignment {
 public:
  using Key = std::pair<NodeId, LinkId>;

  void set(NodeId node, LinkId out_link, Mask mask) { masks_[{node, out_link}] = std::move(mask); }
  const Mask* find(NodeId node, LinkId out_link) const;
  const std::map<Key, Mask>& masks() const { return masks_; }
  std::size_t size() const { return masks_.size(); }

  friend bool operator==(const CodingAssignment&, const CodingAssignment&) = default;

 private:
  std::map<Key, Mask> masks_;
};

/// Throws InconsistentAssignment unless the assignment has exactly one mask of
/// the right width for every layout slot.
Genome encode_assignment(const GenomeLayout& layout, const CodingAssignment& a);
CodingAssignment decode_genome(const GenomeLayout& layout, const Genome& genome);

Genome full_coding_genome(const GenomeLayout& layout);
/// Every mask gets exactly one uniformly chosen bit.
Genome single_input_genome(const GenomeLayout& layout, std::uint64_t seed);

/// Assignment text: `mask <node> <out_link_id> <bits>`, first character of
/// `bits` = lowest incoming link id.
std::string serialize_assignment(const CodingAssignment& a);
CodingAssignment parse_assignment(std::istream& in);
CodingAssignment parse_assignment(const std::string& text);

struct ResourceCount {
  std::size_t coding_nodes = 0;  // N_n
  std::size_t coding_links = 0;  // N_l

  friend auto operator<=>(const ResourceCount&, const ResourceCount&) = default;
};

ResourceCount count_resources(const GenomeLayout& layout, const Genome& genome);
ResourceCount count_resources(const Network& net, const CodingAssignment& a);

/// Merging nodes with at least one mask of two or more set bits.
std::vector<NodeId> coding_nodes(const GenomeLayout& layout, const Genome& genome);

// ---------------------------------------------------------------------------
// Achieved rates

/// Achieved rank at every receiver under random linear coding.
///
/// The source injects `dimension` messages (default: the network's target
/// rate) as random combinations on each outgoing symbol. A link of capacity c
/// carries c symbols. Every outgoing symbol of a node is a random nonzero
/// combination of the symbols on its permitted inputs: all inputs for
/// non-merging nodes, the mask's inputs for merging nodes. Coefficients are a
/// hash of (seed, trial, output symbol, input symbol), so they do not depend
/// on evaluation order or on which links are alive.
class RateEvaluator {
 public:
  RateEvaluator(const Network& net, unsigned q = 8, std::uint32_t dimension = 0);

  const Network& network() const { return *net_; }
  const GenomeLayout& layout() const { return layout_; }
  std::uint32_t dimension() const { return dimension_; }

  /// Per-receiver maximum over `trials` independent coefficient draws, in
  /// receivers() order.
  std::vector<std::uint32_t> rates(const Genome& genome, std::uint32_t trials, std::uint64_t seed) const;

  /// A single trial.
  std::vector<std::uint32_t> trial_rates(const Genome& genome, std::uint64_t trial_seed) const;

 private:
  const Network* net_;
  GenomeLayout layout_;
  unsigned q_;
  std::uint32_t dimension_;
  std::vector<std::size_t> first_symbol_;  // per link, prefix sum of capacities
  std::size_t symbol_count_ = 0;
};

std::map<NodeId, std::uint32_t> evaluate_rates(const Network& net, const CodingAssignment& a, unsigned q,
                                               std::uint32_t trials, std::uint64_t seed);

/// Generic (maximum over all coefficient choices) rank at every receiver,
/// capped at `dimension`: the max-flow of the symbol-level line graph where
/// symbol t feeds symbol s iff t's link is a permitted input of s's link.
/// Independent of any field arithmetic.
std::vector<std::uint32_t> structural_rates(const Network& net, const GenomeLayout& layout, const Genome& genome,
                                            std::uint32_t dimension);

/// Every receiver reaches `target` (trials = 3).
bool is_feasible(const Network& net, const CodingAssignment& a, std::uint32_t target, std::uint64_t seed = 0);
bool is_feasible(const RateEvaluator& eval, const Genome& genome, std::uint32_t target, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Objective

struct FitnessCoefficients {
  std::array<double, 6> a{10, 10, 1, 1, 100, 100};
  std::uint32_t target_rate = 1;

  /// min(a1,a2) > max(a3,a4) and min(a5,a6) > max(a1,a2), all positive.
  bool valid() const;
  /// Throws InvalidCoefficients.
  void validate() const;

  friend bool operator==(const FitnessCoefficients&, const FitnessCoefficients&) = default;
};

struct FitnessReport {
  std::vector<std::pair<NodeId, std::uint32_t>> achieved;  // receiver ascending
  std::uint32_t min_rate = 0;
  double avg_rate = 0;
  ResourceCount resources;
  double objective = 0;

  bool feasible(std::uint32_t target) const { return min_rate >= target; }
};

/// Two-branch objective: rate terms plus resource terms weighted by a3/a4
/// below target and a5/a6 at or above it.
double fitness(std::span<const std::uint32_t> achieved, ResourceCount resources, const FitnessCoefficients& c);

FitnessReport make_report(const Network& net, std::span<const std::uint32_t> achieved, ResourceCount resources,
                          const FitnessCoefficients& c);

// ---------------------------------------------------------------------------
// Sequential Student-t estimator

class FitnessEstimator {
 public:
  void push(double sample);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; requires count() >= 2.
  double variance() const;
  /// t_{(1+confidence)/2, N-1} * sqrt(variance / N).
  double half_width(double confidence) const;
  /// (mean - mu) * sqrt(N - 1) / sqrt(variance).
  double t_statistic(double mu) const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

double student_t_quantile(double p, double degrees_of_freedom);

struct EstimateResult {
  double mean = 0;
  std::size_t trials = 0;
  bool hit_max_trials = false;
};

/// Draws samples until the confidence half-width is <= tolerance (at least
/// two samples) or max_trials samples have been drawn.
EstimateResult estimate_fitness(const std::function<double(std::size_t)>& sampler, double confidence,
                                double tolerance, std::size_t max_trials);

// ---------------------------------------------------------------------------
// Exact oracle

struct OracleResult {
  bool feasible = false;
  ResourceCount optimum;
  CodingAssignment witness;
  std::uint64_t candidates_checked = 0;
};

inline constexpr std::size_t kOracleMaxGenomeBits = 24;

/// Lexicographically smallest (N_n, N_l) over all assignments whose generic
/// rank reaches `target` at every receiver. Throws TooLarge when the genome
/// has more than kOracleMaxGenomeBits bits.
OracleResult brute_force_min_coding(const Network& net, std::uint32_t target);

}  // namespace ncga
