#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "ncga/error.hpp"
#include "ncga/p2p_sim.hpp"
#include "ncga/rng.hpp"

namespace ncga {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::GANS: return "GANS";
    case Strategy::RSN: return "RSN";
    case Strategy::CAN: return "CAN";
    case Strategy::NONE: return "NONE";
  }
  return "?";
}

Strategy parse_strategy(const std::string& name) {
  std::string up = name;
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  for (Strategy s : {Strategy::GANS, Strategy::RSN, Strategy::CAN, Strategy::NONE}) {
    if (to_string(s) == up) return s;
  }
  throw std::invalid_argument("unknown strategy '" + name + "'");
}

EffectiveCoding select_coding_nodes(const Network& net, Strategy strategy, std::size_t rsn_count,
                                    const CodingAssignment* ga_result, std::uint64_t seed) {
  const GenomeLayout layout(net);
  const auto& merging = layout.merging();
  Rng rng = make_rng({seed, 0x5E1u});
  Genome genome(layout.length(), false);

  auto single_bits_except = [&](const std::vector<bool>& coding) {
    for (const auto& slot : layout.slots()) {
      const auto m = static_cast<std::size_t>(std::find(merging.begin(), merging.end(), slot.node) - merging.begin());
      if (coding[m]) {
        std::fill_n(genome.begin() + static_cast<std::ptrdiff_t>(slot.offset), slot.width, true);
      } else {
        genome[slot.offset + uniform_below(rng, slot.width)] = true;
      }
    }
  };

  switch (strategy) {
    case Strategy::CAN:
      genome = full_coding_genome(layout);
      break;
    case Strategy::GANS:
      if (ga_result == nullptr) throw MissingGaResult("GANS needs a GA coding assignment");
      genome = encode_assignment(layout, *ga_result);
      break;
    case Strategy::RSN: {
      if (rsn_count > merging.size()) {
        throw InvalidParams("rsn_count " + std::to_string(rsn_count) + " exceeds the " +
                            std::to_string(merging.size()) + " merging nodes");
      }
      std::vector<std::size_t> order(merging.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::vector<bool> coding(merging.size(), false);
      for (std::size_t k = 0; k < rsn_count; ++k) {
        std::swap(order[k], order[k + uniform_below(rng, order.size() - k)]);
        coding[order[k]] = true;
      }
      single_bits_except(coding);
      break;
    }
    case Strategy::NONE:
      single_bits_except(std::vector<bool>(merging.size(), false));
      break;
  }

  EffectiveCoding out;
  const auto nodes = coding_nodes(layout, genome);
  out.coding_nodes.insert(nodes.begin(), nodes.end());
  out.assignment = decode_genome(layout, genome);
  return out;
}

}  // namespace ncga
