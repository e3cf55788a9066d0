#include <algorithm>
#include <queue>
#include <string>

#include "ncga/error.hpp"
#include "ncga/max_flow.hpp"
#include "ncga/netgraph.hpp"

namespace ncga {

namespace {

std::string node_str(NodeId v) { return std::to_string(v); }

}  // namespace

bool Network::is_receiver(NodeId v) const {
  return std::binary_search(receivers_.begin(), receivers_.end(), v);
}

Network Network::with_link_alive(LinkId id, bool alive) const {
  if (id >= links_.size()) throw UnknownLink("unknown link " + std::to_string(id));
  Network copy = *this;
  copy.links_[id].alive = alive;
  return copy;
}

Network build_network_unchecked(std::size_t n_nodes, std::span<const LinkSpec> links,
                                NodeId source, std::vector<NodeId> receivers,
                                std::uint32_t target_rate) {
  if (n_nodes == 0) throw InvalidNetwork("network needs at least one node");
  if (source >= n_nodes) throw InvalidNetwork("source " + node_str(source) + " out of range");
  if (receivers.empty()) throw EmptyReceiverSet("receiver set is empty");
  if (target_rate == 0) throw InvalidNetwork("target rate must be positive");

  std::sort(receivers.begin(), receivers.end());
  receivers.erase(std::unique(receivers.begin(), receivers.end()), receivers.end());
  for (NodeId r : receivers) {
    if (r >= n_nodes) throw InvalidNetwork("receiver " + node_str(r) + " out of range");
    if (r == source) throw InvalidNetwork("source cannot be a receiver");
  }

  Network net;
  net.source_ = source;
  net.receivers_ = std::move(receivers);
  net.target_rate_ = target_rate;
  net.in_.assign(n_nodes, {});
  net.out_.assign(n_nodes, {});
  net.links_.reserve(links.size());
  for (const LinkSpec& spec : links) {
    const auto id = static_cast<LinkId>(net.links_.size());
    if (spec.tail >= n_nodes || spec.head >= n_nodes) {
      throw InvalidNetwork("link " + std::to_string(id) + " endpoint out of range");
    }
    if (spec.tail == spec.head) throw InvalidNetwork("link " + std::to_string(id) + " is a self loop");
    if (spec.head == source) throw InvalidNetwork("link " + std::to_string(id) + " enters the source");
    if (spec.capacity == 0) throw InvalidNetwork("link " + std::to_string(id) + " has zero capacity");
    net.links_.push_back({id, spec.tail, spec.head, spec.capacity, true});
    net.out_[spec.tail].push_back(id);
    net.in_[spec.head].push_back(id);
  }

  // Kahn's algorithm, smallest ready id first.
  std::vector<std::size_t> pending(n_nodes);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (NodeId v = 0; v < n_nodes; ++v) {
    pending[v] = net.in_[v].size();
    if (pending[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    const NodeId v = ready.top();
    ready.pop();
    net.topo_.push_back(v);
    for (LinkId l : net.out_[v]) {
      if (--pending[net.links_[l].head] == 0) ready.push(net.links_[l].head);
    }
  }
  if (net.topo_.size() != n_nodes) throw CycleDetected("link list contains a directed cycle");
  return net;
}

Network build_network(std::size_t n_nodes, std::span<const LinkSpec> links, NodeId source,
                      std::vector<NodeId> receivers, std::uint32_t target_rate) {
  Network net = build_network_unchecked(n_nodes, links, source, std::move(receivers), target_rate);
  for (NodeId r : net.receivers()) {
    const std::uint32_t flow = max_flow(net, r);
    if (flow < target_rate) {
      throw UnreachableReceiver("receiver " + node_str(r) + " has max-flow " + std::to_string(flow) +
                                " < target rate " + std::to_string(target_rate));
    }
  }
  return net;
}

std::vector<NodeId> merging_nodes(const Network& net) {
  std::vector<NodeId> result;
  for (NodeId v : net.topological_order()) {
    if (v != net.source() && net.in_degree(v) >= 2 && net.out_degree(v) >= 1) result.push_back(v);
  }
  return result;
}

std::uint32_t max_flow(const Network& net, NodeId receiver) {
  FlowNetwork flow(net.node_count());
  for (const Link& l : net.links()) {
    if (l.alive) flow.add_arc(l.tail, l.head, l.capacity);
  }
  return static_cast<std::uint32_t>(flow.max_flow(net.source(), receiver));
}

std::uint32_t min_receiver_flow(const Network& net) {
  std::uint32_t best = UINT32_MAX;
  for (NodeId r : net.receivers()) best = std::min(best, max_flow(net, r));
  return best;
}

Network butterfly(std::uint32_t target_rate) {
  // s=0 a=1 b=2 m1=3 m2=4 r1=5 r2=6
  const LinkSpec links[] = {{0, 1}, {0, 2}, {1, 5}, {2, 6}, {1, 3},
                            {2, 3}, {3, 4}, {4, 5}, {4, 6}};
  return build_network(7, links, 0, {5, 6}, target_rate);
}

}  // namespace ncga
