// Test-only reference implementations. None of these share code paths with
// the library routines they check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "ncga/galois.hpp"
#include "ncga/netgraph.hpp"
#include "ncga/rng.hpp"

namespace oracle {

using ncga::LinkId;
using ncga::LinkSpec;
using ncga::Network;
using ncga::NodeId;

/// Max number of pairwise edge-disjoint source->receiver paths, by
/// enumerating every simple path as a link bitmask. Unit capacities, alive
/// links only, <= 64 links.
inline std::uint32_t disjoint_paths(const Network& net, NodeId receiver) {
  std::vector<std::uint64_t> paths;
  std::function<void(NodeId, std::uint64_t)> walk = [&](NodeId v, std::uint64_t used) {
    if (v == receiver) {
      paths.push_back(used);
      return;
    }
    for (LinkId l : net.out_links(v)) {
      if (net.link(l).alive) walk(net.link(l).head, used | (std::uint64_t{1} << l));
    }
  };
  walk(net.source(), 0);
  std::uint32_t best = 0;
  std::function<void(std::size_t, std::uint64_t, std::uint32_t)> pack = [&](std::size_t i, std::uint64_t used,
                                                                           std::uint32_t count) {
    best = std::max(best, count);
    for (std::size_t j = i; j < paths.size(); ++j) {
      if ((paths[j] & used) == 0) pack(j + 1, used | paths[j], count + 1);
    }
  };
  pack(0, 0, 0);
  return best;
}

/// Determinant by Leibniz expansion over the field (char 2: no signs).
inline ncga::gf::Symbol leibniz_det(const std::vector<std::vector<ncga::gf::Symbol>>& m, unsigned q) {
  const auto& f = ncga::gf::Field::get(q);
  std::vector<std::size_t> perm(m.size());
  std::iota(perm.begin(), perm.end(), 0);
  ncga::gf::Symbol det = 0;
  do {
    ncga::gf::Symbol term = 1;
    for (std::size_t i = 0; i < m.size() && term != 0; ++i) term = f.mul(term, m[i][perm[i]]);
    det ^= term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

/// Rank = order of the largest nonzero minor.
inline std::size_t minor_rank(const ncga::gf::GfMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  for (std::size_t k = std::min(rows, cols); k > 0; --k) {
    std::vector<bool> rsel(rows, false), csel(cols, false);
    std::fill(rsel.begin(), rsel.begin() + static_cast<std::ptrdiff_t>(k), true);
    do {
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.begin(), csel.begin() + static_cast<std::ptrdiff_t>(k), true);
      do {
        std::vector<std::vector<ncga::gf::Symbol>> sub;
        for (std::size_t r = 0; r < rows; ++r) {
          if (!rsel[r]) continue;
          sub.emplace_back();
          for (std::size_t c = 0; c < cols; ++c) {
            if (csel[c]) sub.back().push_back(m.at(r, c));
          }
        }
        if (leibniz_det(sub, m.q()) != 0) return k;
      } while (std::prev_permutation(csel.begin(), csel.end()));
    } while (std::prev_permutation(rsel.begin(), rsel.end()));
  }
  return 0;
}

/// Small random DAG with unit capacities built straight from an edge list:
/// node 0 is the source, edges only go from lower to higher index.
inline Network small_dag(ncga::Rng& rng, std::size_t n_nodes, std::size_t max_links, std::size_t n_receivers) {
  std::vector<LinkSpec> links;
  for (NodeId j = 1; j < n_nodes; ++j) links.push_back({static_cast<NodeId>(ncga::uniform_below(rng, j)), j, 1});
  while (links.size() < max_links) {
    const auto a = static_cast<NodeId>(ncga::uniform_below(rng, n_nodes - 1));
    const auto b = static_cast<NodeId>(a + 1 + ncga::uniform_below(rng, n_nodes - 1 - a));
    links.push_back({a, b, 1});
  }
  std::vector<NodeId> receivers;
  for (std::size_t i = 0; i < n_receivers; ++i) receivers.push_back(static_cast<NodeId>(n_nodes - 1 - i));
  return ncga::build_network(n_nodes, links, 0, receivers, 1);
}

}  // namespace oracle
