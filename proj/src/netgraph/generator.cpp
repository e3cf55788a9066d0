#include <algorithm>
#include <numeric>
#include <string>

#include "ncga/error.hpp"
#include "ncga/max_flow.hpp"
#include "ncga/netgraph.hpp"
#include "ncga/rng.hpp"

namespace ncga {

namespace {

constexpr int kMaxAttempts = 100;

template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[uniform_below(rng, i)]);
}

// Raises capacities on random min-cut links until every receiver's max-flow
// reaches `rate`. Returns false if the capacity budget is exhausted.
bool lift_min_cuts(std::size_t n_nodes, std::vector<LinkSpec>& links, const std::vector<NodeId>& receivers,
                   std::uint32_t rate, Rng& rng) {
  const std::size_t budget = links.size() * rate;
  std::size_t spent = 0;
  for (NodeId r : receivers) {
    for (;;) {
      FlowNetwork flow(n_nodes);
      for (const LinkSpec& l : links) flow.add_arc(l.tail, l.head, l.capacity);
      if (flow.max_flow(0, r) >= rate) break;
      const std::vector<bool> side = flow.source_side(0);
      std::vector<std::size_t> cut;
      for (std::size_t i = 0; i < links.size(); ++i) {
        if (side[links[i].tail] && !side[links[i].head]) cut.push_back(i);
      }
      if (cut.empty() || ++spent > budget) return false;
      ++links[cut[uniform_below(rng, cut.size())]].capacity;
    }
  }
  return true;
}

}  // namespace

Network generate_random_dag(std::size_t n_nodes, std::size_t n_links, std::size_t n_receivers,
                            std::uint32_t target_rate, std::uint64_t seed) {
  const std::size_t max_links = n_nodes * (n_nodes - (n_nodes > 0 ? 1 : 0)) / 2;
  if (n_nodes < 2 || n_receivers == 0 || n_receivers >= n_nodes || n_links + 1 < n_nodes ||
      n_links > max_links || target_rate == 0) {
    throw InfeasibleParameters("no DAG with " + std::to_string(n_nodes) + " nodes, " +
                               std::to_string(n_links) + " links and " + std::to_string(n_receivers) +
                               " receivers exists");
  }

  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng = make_rng({seed, static_cast<std::uint64_t>(attempt)});

    // rank -> node id; the source (id 0) has rank 0.
    std::vector<NodeId> by_rank(n_nodes);
    std::iota(by_rank.begin(), by_rank.end(), NodeId{0});
    {
      std::vector<NodeId> rest(by_rank.begin() + 1, by_rank.end());
      shuffle(rest, rng);
      std::copy(rest.begin(), rest.end(), by_rank.begin() + 1);
    }

    // Spanning arborescence first so every node is reachable, then forward
    // pairs drawn without replacement.
    std::vector<std::vector<bool>> used(n_nodes, std::vector<bool>(n_nodes, false));
    std::vector<LinkSpec> links;
    links.reserve(n_links);
    for (std::size_t j = 1; j < n_nodes; ++j) {
      const std::size_t i = uniform_below(rng, j);
      used[i][j] = true;
      links.push_back({by_rank[i], by_rank[j], 1});
    }
    std::vector<std::pair<std::size_t, std::size_t>> free_pairs;
    for (std::size_t i = 0; i < n_nodes; ++i) {
      for (std::size_t j = i + 1; j < n_nodes; ++j) {
        if (!used[i][j]) free_pairs.emplace_back(i, j);
      }
    }
    shuffle(free_pairs, rng);
    for (std::size_t k = 0; links.size() < n_links; ++k) {
      links.push_back({by_rank[free_pairs[k].first], by_rank[free_pairs[k].second], 1});
    }

    // Receivers come from the deeper ranks, where in-degree is larger.
    const std::size_t pool = std::min(n_nodes - 1, n_receivers + (n_nodes - 1 - n_receivers) / 2);
    std::vector<NodeId> candidates(by_rank.end() - static_cast<std::ptrdiff_t>(pool), by_rank.end());
    shuffle(candidates, rng);
    std::vector<NodeId> receivers(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n_receivers));
    std::sort(receivers.begin(), receivers.end());

    if (!lift_min_cuts(n_nodes, links, receivers, target_rate, rng)) continue;

    std::sort(links.begin(), links.end(), [](const LinkSpec& a, const LinkSpec& b) {
      return a.tail != b.tail ? a.tail < b.tail : a.head < b.head;
    });
    return build_network(n_nodes, links, 0, std::move(receivers), target_rate);
  }
  throw InfeasibleParameters("no feasible topology after " + std::to_string(kMaxAttempts) + " attempts");
}

}  // namespace ncga
