#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ncga {

using NodeId = std::uint32_t;
using LinkId = std::uint32_t;

struct Link {
  LinkId id = 0;
  NodeId tail = 0;
  NodeId head = 0;
  std::uint32_t capacity = 1;  // blocks per round
  bool alive = true;

  friend bool operator==(const Link&, const Link&) = default;
};

/// Input to build_network; ids are assigned in list order.
struct LinkSpec {
  NodeId tail = 0;
  NodeId head = 0;
  std::uint32_t capacity = 1;
};

/// Directed acyclic overlay with one source and a receiver set.
///
/// Immutable once built: churn produces new snapshots rather than mutating.
/// Adjacency lists hold every link (dead ones included) so the genome layout
/// derived from a network stays stable under churn; only flow computations
/// look at `Link::alive`.
class Network {
 public:
  Network() = default;

  std::size_t node_count() const { return in_.size(); }
  const std::vector<Link>& links() const { return links_; }
  const Link& link(LinkId id) const { return links_.at(id); }
  NodeId source() const { return source_; }
  const std::vector<NodeId>& receivers() const { return receivers_; }
  bool is_receiver(NodeId v) const;
  std::uint32_t target_rate() const { return target_rate_; }

  /// Link ids ascending.
  std::span<const LinkId> in_links(NodeId v) const { return in_.at(v); }
  std::span<const LinkId> out_links(NodeId v) const { return out_.at(v); }
  std::size_t in_degree(NodeId v) const { return in_.at(v).size(); }
  std::size_t out_degree(NodeId v) const { return out_.at(v).size(); }

  /// Deterministic (smallest id first) topological order.
  const std::vector<NodeId>& topological_order() const { return topo_; }

  /// Copy with one link's aliveness changed.
  Network with_link_alive(LinkId id, bool alive) const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  friend Network build_network(std::size_t, std::span<const LinkSpec>, NodeId, std::vector<NodeId>,
                               std::uint32_t);
  friend Network build_network_unchecked(std::size_t, std::span<const LinkSpec>, NodeId,
                                         std::vector<NodeId>, std::uint32_t);

  std::vector<Link> links_;
  std::vector<std::vector<LinkId>> in_;
  std::vector<std::vector<LinkId>> out_;
  std::vector<NodeId> topo_;
  std::vector<NodeId> receivers_;
  NodeId source_ = 0;
  std::uint32_t target_rate_ = 1;
};

/// Validates and builds a network.
/// Throws InvalidNetwork (bad endpoints, self loop, receiver == source, links
/// into the source), EmptyReceiverSet, CycleDetected, UnreachableReceiver
/// (some receiver's max-flow is below target_rate).
Network build_network(std::size_t n_nodes, std::span<const LinkSpec> links, NodeId source,
                      std::vector<NodeId> receivers, std::uint32_t target_rate);

/// Same structural checks as build_network but skips the max-flow test. Used
/// when a caller needs to inspect an instance whose rate is not attainable.
Network build_network_unchecked(std::size_t n_nodes, std::span<const LinkSpec> links,
                                NodeId source, std::vector<NodeId> receivers,
                                std::uint32_t target_rate);

/// Nodes other than the source with in-degree >= 2 and out-degree >= 1,
/// in topological order. Degrees count all links, alive or not.
std::vector<NodeId> merging_nodes(const Network& net);

/// Maximum source -> receiver flow over alive links.
std::uint32_t max_flow(const Network& net, NodeId receiver);

/// Minimum over receivers of max_flow.
std::uint32_t min_receiver_flow(const Network& net);

// ---------------------------------------------------------------------------
// Churn

enum class ChurnAction { down, up };

struct ChurnEvent {
  std::uint32_t time = 0;
  LinkId link = 0;
  ChurnAction action = ChurnAction::down;

  friend bool operator==(const ChurnEvent&, const ChurnEvent&) = default;
};

class ChurnSchedule {
 public:
  ChurnSchedule() = default;

  /// Stable-sorts by time. Throws InvalidSchedule if a link goes down twice
  /// without an intervening up.
  explicit ChurnSchedule(std::vector<ChurnEvent> events);

  const std::vector<ChurnEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

  friend bool operator==(const ChurnSchedule&, const ChurnSchedule&) = default;

 private:
  std::vector<ChurnEvent> events_;
};

/// Topology at round t: every event with time <= t applied in order.
/// Throws UnknownLink for an event naming a link the network lacks.
Network apply_churn(const Network& net, const ChurnSchedule& schedule, std::uint32_t t);

/// A peer leaving at round t, expressed as down events on all its links.
std::vector<ChurnEvent> peer_departure(const Network& net, NodeId peer, std::uint32_t t);

/// Picks `n_dynamic` distinct links; each goes down at a uniform round in
/// [0, horizon/2) and comes back after an outage drawn from [horizon/4, horizon].
ChurnSchedule random_link_churn(const Network& net, std::size_t n_dynamic, std::uint32_t horizon,
                                std::uint64_t seed);

// ---------------------------------------------------------------------------
// Generation

/// Rank-ordered random DAG with exact node/link/receiver counts. Every
/// non-source node is reachable from the source; receivers' min-cuts are
/// lifted to target_rate by raising capacities on min-cut links.
/// Throws InfeasibleParameters.
Network generate_random_dag(std::size_t n_nodes, std::size_t n_links, std::size_t n_receivers,
                            std::uint32_t target_rate, std::uint64_t seed);

/// The canonical 7-node butterfly (s=0, a=1, b=2, m1=3, m2=4, r1=5, r2=6).
Network butterfly(std::uint32_t target_rate = 2);

// ---------------------------------------------------------------------------
// Text format
//
//   nodes N links M source S rate R
//   recv <id>
//   link <id> <tail> <head> <cap>
//   churn <time> <link_id> <down|up>

struct GraphFile {
  Network network;
  ChurnSchedule churn;

  friend bool operator==(const GraphFile&, const GraphFile&) = default;
};

/// `validate_rate = false` skips the max-flow check so an over-demanding file
/// can still be loaded and reported on.
GraphFile parse_graph(std::istream& in, bool validate_rate = true);
GraphFile parse_graph(const std::string& text, bool validate_rate = true);
std::string serialize_graph(const GraphFile& file);
std::string serialize_graph(const Network& net);

}  // namespace ncga
