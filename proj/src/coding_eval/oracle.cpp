#include <algorithm>
#include <string>

#include "ncga/coding_eval.hpp"
#include "ncga/error.hpp"

namespace ncga {

// Adding a permitted input never lowers a generic rank, so every feasible
// assignment can be rewritten without changing (N_n, N_l): coding masks to
// all-ones, zero masks to a single bit. The search therefore walks sets of
// coding slots in (N_n, N_l) order and, for each, tries every single-bit
// choice on the remaining slots. The first hit is the optimum.
OracleResult brute_force_min_coding(const Network& net, std::uint32_t target) {
  const GenomeLayout layout(net);
  if (layout.length() > kOracleMaxGenomeBits) {
    throw TooLarge("genome has " + std::to_string(layout.length()) + " bits; the oracle enumerates at most " +
                   std::to_string(kOracleMaxGenomeBits));
  }
  OracleResult result;
  auto feasible = [&](const Genome& g) {
    ++result.candidates_checked;
    const auto rates = structural_rates(net, layout, g, target);
    return std::all_of(rates.begin(), rates.end(), [&](std::uint32_t x) { return x >= target; });
  };

  if (!feasible(full_coding_genome(layout))) return result;

  const auto& slots = layout.slots();
  const std::size_t n_slots = slots.size();
  std::vector<std::size_t> slot_owner(n_slots);
  for (std::size_t s = 0; s < n_slots; ++s) {
    slot_owner[s] = static_cast<std::size_t>(
        std::find(layout.merging().begin(), layout.merging().end(), slots[s].node) - layout.merging().begin());
  }

  struct Candidate {
    std::uint64_t subset;
    ResourceCount cost;
  };
  std::vector<Candidate> subsets;
  subsets.reserve(std::size_t{1} << n_slots);
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << n_slots); ++subset) {
    std::vector<bool> node_used(layout.merging().size(), false);
    ResourceCount cost;
    for (std::size_t s = 0; s < n_slots; ++s) {
      if (!(subset >> s & 1u)) continue;
      ++cost.coding_links;
      if (!node_used[slot_owner[s]]) {
        node_used[slot_owner[s]] = true;
        ++cost.coding_nodes;
      }
    }
    subsets.push_back({subset, cost});
  }
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });

  for (const Candidate& c : subsets) {
    std::vector<std::size_t> free_slots;
    Genome genome(layout.length(), false);
    for (std::size_t s = 0; s < n_slots; ++s) {
      if (c.subset >> s & 1u) {
        std::fill_n(genome.begin() + static_cast<std::ptrdiff_t>(slots[s].offset), slots[s].width, true);
      } else {
        free_slots.push_back(s);
      }
    }
    // Mixed-radix counter over the single input each free slot forwards.
    std::vector<std::size_t> choice(free_slots.size(), 0);
    for (;;) {
      for (std::size_t i = 0; i < free_slots.size(); ++i) {
        const auto& slot = slots[free_slots[i]];
        for (std::size_t b = 0; b < slot.width; ++b) genome[slot.offset + b] = (b == choice[i]);
      }
      if (feasible(genome)) {
        result.feasible = true;
        result.optimum = c.cost;
        result.witness = decode_genome(layout, genome);
        return result;
      }
      std::size_t i = 0;
      while (i < free_slots.size() && ++choice[i] == slots[free_slots[i]].width) choice[i++] = 0;
      if (i == free_slots.size()) break;
    }
  }
  return result;  // unreachable: the all-coding subset is feasible
}

}  // namespace ncga
