#pragma once

#include <cstdint>
#include <vector>

namespace ncga {

/// Dinic max-flow over an explicit arc list. Used for the node-level
/// min-cut bound and for the line-graph rank oracle in coding-eval.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t vertices);

  /// Returns the arc index; the reverse arc is index ^ 1.
  std::size_t add_arc(std::size_t from, std::size_t to, std::int64_t capacity);

  std::int64_t max_flow(std::size_t source, std::size_t sink);

  /// Vertices reachable from `source` in the residual graph after max_flow.
  std::vector<bool> source_side(std::size_t source) const;

  std::size_t vertex_count() const { return adjacency_.size(); }
  std::int64_t flow_on(std::size_t arc) const { return arcs_[arc ^ 1].residual; }

 private:
  struct Arc {
    std::size_t to;
    std::int64_t residual;
  };

  bool build_levels(std::size_t source, std::size_t sink);
  std::int64_t push(std::size_t v, std::size_t sink, std::int64_t limit);

  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

}  // namespace ncga
