#include "ncga/max_flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace ncga {

FlowNetwork::FlowNetwork(std::size_t vertices) : adjacency_(vertices) {}

std::size_t FlowNetwork::add_arc(std::size_t from, std::size_t to, std::int64_t capacity) {
  const std::size_t index = arcs_.size();
  arcs_.push_back({to, capacity});
  arcs_.push_back({from, 0});
  adjacency_[from].push_back(index);
  adjacency_[to].push_back(index + 1);
  return index;
}

bool FlowNetwork::build_levels(std::size_t source, std::size_t sink) {
  level_.assign(adjacency_.size(), -1);
  std::queue<std::size_t> frontier;
  level_[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    for (std::size_t a : adjacency_[v]) {
      const Arc& arc = arcs_[a];
      if (arc.residual > 0 && level_[arc.to] < 0) {
        level_[arc.to] = level_[v] + 1;
        frontier.push(arc.to);
      }
    }
  }
  return level_[sink] >= 0;
}

std::int64_t FlowNetwork::push(std::size_t v, std::size_t sink, std::int64_t limit) {
  if (v == sink) return limit;
  for (std::size_t& i = cursor_[v]; i < adjacency_[v].size(); ++i) {
    const std::size_t a = adjacency_[v][i];
    Arc& arc = arcs_[a];
    if (arc.residual <= 0 || level_[arc.to] != level_[v] + 1) continue;
    const std::int64_t pushed = push(arc.to, sink, std::min(limit, arc.residual));
    if (pushed > 0) {
      arc.residual -= pushed;
      arcs_[a ^ 1].residual += pushed;
      return pushed;
    }
  }
  return 0;
}

std::int64_t FlowNetwork::max_flow(std::size_t source, std::size_t sink) {
  if (source == sink) return 0;
  std::int64_t total = 0;
  while (build_levels(source, sink)) {
    cursor_.assign(adjacency_.size(), 0);
    while (const std::int64_t pushed = push(source, sink, std::numeric_limits<std::int64_t>::max())) {
      total += pushed;
    }
  }
  return total;
}

std::vector<bool> FlowNetwork::source_side(std::size_t source) const {
  std::vector<bool> seen(adjacency_.size(), false);
  std::vector<std::size_t> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t a : adjacency_[v]) {
      const Arc& arc = arcs_[a];
      if (arc.residual > 0 && !seen[arc.to]) {
        seen[arc.to] = true;
        stack.push_back(arc.to);
      }
    }
  }
  return seen;
}

}  // namespace ncga
