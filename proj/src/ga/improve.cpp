#include <algorithm>

#include "ncga/ga.hpp"

namespace ncga {

namespace {

using FlowSet = std::uint64_t;  // bit k = source flow k

// Which source flows each link carries when masks are read as routing: the
// source's outgoing symbols take flows 0..h-1 round-robin, forwarding nodes
// pass on the union of their inputs and a merging node's outgoing link
// carries the union of its permitted inputs.
std::vector<FlowSet> flow_sketch(const Network& net, const GenomeLayout& layout, const Genome& g, std::uint32_t h) {
  std::vector<FlowSet> flow(net.links().size(), 0);
  std::uint32_t next = 0;
  for (NodeId v : net.topological_order()) {
    FlowSet in_union = 0;
    const auto ins = net.in_links(v);
    for (LinkId l : ins) {
      if (net.link(l).alive) in_union |= flow[l];
    }
    for (LinkId out : net.out_links(v)) {
      const Link& link = net.link(out);
      if (!link.alive) continue;
      if (v == net.source()) {
        for (std::uint32_t c = 0; c < link.capacity; ++c) flow[out] |= FlowSet{1} << (next++ % h);
      } else if (layout.is_merging(v)) {
        const auto& slot = layout.slots()[*layout.slot_index(v, out)];
        for (std::size_t i = 0; i < ins.size(); ++i) {
          if (g[slot.offset + i] && net.link(ins[i]).alive) flow[out] |= flow[ins[i]];
        }
      } else {
        flow[out] = in_union;
      }
    }
  }
  return flow;
}

struct Candidate {
  std::size_t slot;
  std::size_t input;
};

}  // namespace

Genome improve_gene(const Genome& g, FitnessFunction& fit, Rng& rng, LcpMarks* marks) {
  const GenomeLayout& layout = fit.layout();
  const Network& net = fit.network();
  const auto& merging = layout.merging();
  if (merging.empty()) return g;

  LcpMarks local;
  LcpMarks& marked = marks ? *marks : local;
  marked.resize(merging.size(), false);

  const std::uint32_t h = std::clamp<std::uint32_t>(fit.coefficients().target_rate, 1, 64);
  const auto flow = flow_sketch(net, layout, g, h);
  const double base = fit(g);

  for (std::size_t m = 0; m < merging.size(); ++m) {
    if (marked[m]) continue;
    const NodeId v = merging[m];
    const auto ins = layout.in_links(v);

    FlowSet have = 0;
    std::vector<LinkId> duplicated;
    for (std::size_t i = 0; i < ins.size(); ++i) {
      if (!net.link(ins[i]).alive) continue;
      have |= flow[ins[i]];
      for (std::size_t j = 0; j < ins.size(); ++j) {
        if (i != j && net.link(ins[j]).alive && flow[ins[i]] != 0 && flow[ins[i]] == flow[ins[j]]) {
          duplicated.push_back(ins[i]);
          break;
        }
      }
    }
    if (duplicated.empty()) continue;

    // Could the upstream merging node put a flow on this link that v lacks?
    std::vector<Candidate> candidates;
    for (LinkId l : duplicated) {
      const NodeId u = net.link(l).tail;
      if (!layout.is_merging(u)) continue;
      const std::size_t s = *layout.slot_index(u, l);
      const auto u_ins = layout.in_links(u);
      for (std::size_t i = 0; i < u_ins.size(); ++i) {
        if (net.link(u_ins[i]).alive && (flow[u_ins[i]] & ~have) != 0) candidates.push_back({s, i});
      }
    }
    for (std::size_t k = candidates.size(); k > 1; --k) std::swap(candidates[k - 1], candidates[uniform_below(rng, k)]);

    for (const Candidate& c : candidates) {
      const auto& slot = layout.slots()[c.slot];
      Genome next = g;
      for (std::size_t b = 0; b < slot.width; ++b) next[slot.offset + b] = (b == c.input);
      if (next == g) continue;
      if (fit(next) >= base) return next;
    }
    marked[m] = true;
  }
  return g;
}

}  // namespace ncga
