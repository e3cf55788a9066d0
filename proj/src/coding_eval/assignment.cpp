#include <algorithm>
#include <istream>
#include <sstream>
#include <string>

#include "ncga/coding_eval.hpp"
#include "ncga/error.hpp"
#include "ncga/rng.hpp"

namespace ncga {

GenomeLayout::GenomeLayout(const Network& net)
    : merging_(merging_nodes(net)), slot_ranges_(net.node_count()), in_links_(net.node_count()) {
  for (NodeId v : merging_) {
    const auto ins = net.in_links(v);
    in_links_[v].assign(ins.begin(), ins.end());
    for (LinkId out : net.out_links(v)) {
      slot_ranges_[v].push_back(slots_.size());
      slots_.push_back({v, out, length_, ins.size()});
      length_ += ins.size();
    }
  }
}

std::optional<std::size_t> GenomeLayout::slot_index(NodeId node, LinkId out_link) const {
  if (node >= slot_ranges_.size()) return std::nullopt;
  for (std::size_t s : slot_ranges_[node]) {
    if (slots_[s].out_link == out_link) return s;
  }
  return std::nullopt;
}

std::span<const std::size_t> GenomeLayout::slots_of(NodeId node) const {
  if (node >= slot_ranges_.size()) return {};
  return slot_ranges_[node];
}

const Mask* CodingAssignment::find(NodeId node, LinkId out_link) const {
  auto it = masks_.find({node, out_link});
  return it == masks_.end() ? nullptr : &it->second;
}

Genome encode_assignment(const GenomeLayout& layout, const CodingAssignment& a) {
  if (a.size() != layout.slots().size()) {
    throw InconsistentAssignment("assignment has " + std::to_string(a.size()) + " masks, network needs " +
                                 std::to_string(layout.slots().size()));
  }
  Genome genome(layout.length(), false);
  for (const auto& slot : layout.slots()) {
    const Mask* mask = a.find(slot.node, slot.out_link);
    if (mask == nullptr) {
      throw InconsistentAssignment("no mask for node " + std::to_string(slot.node) + " link " +
                                   std::to_string(slot.out_link));
    }
    if (mask->size() != slot.width) {
      throw InconsistentAssignment("mask for node " + std::to_string(slot.node) + " link " +
                                   std::to_string(slot.out_link) + " has " + std::to_string(mask->size()) +
                                   " bits, expected " + std::to_string(slot.width));
    }
    std::copy(mask->begin(), mask->end(), genome.begin() + static_cast<std::ptrdiff_t>(slot.offset));
  }
  return genome;
}

CodingAssignment decode_genome(const GenomeLayout& layout, const Genome& genome) {
  if (genome.size() != layout.length()) {
    throw LengthMismatch("genome has " + std::to_string(genome.size()) + " bits, layout needs " +
                         std::to_string(layout.length()));
  }
  CodingAssignment a;
  for (const auto& slot : layout.slots()) {
    const auto first = genome.begin() + static_cast<std::ptrdiff_t>(slot.offset);
    a.set(slot.node, slot.out_link, Mask(first, first + static_cast<std::ptrdiff_t>(slot.width)));
  }
  return a;
}

Genome full_coding_genome(const GenomeLayout& layout) { return Genome(layout.length(), true); }

Genome single_input_genome(const GenomeLayout& layout, std::uint64_t seed) {
  Rng rng = make_rng({seed, 0x51u});
  Genome genome(layout.length(), false);
  for (const auto& slot : layout.slots()) genome[slot.offset + uniform_below(rng, slot.width)] = true;
  return genome;
}

std::string serialize_assignment(const CodingAssignment& a) {
  std::ostringstream out;
  for (const auto& [key, mask] : a.masks()) {
    out << "mask " << key.first << ' ' << key.second << ' ';
    for (bool b : mask) out << (b ? '1' : '0');
    out << '\n';
  }
  return out.str();
}

CodingAssignment parse_assignment(std::istream& in) {
  CodingAssignment a;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string kind, bits, extra;
    long long node = -1, link = -1;
    if (!(fields >> kind)) continue;
    if (kind != "mask" || !(fields >> node >> link >> bits) || (fields >> extra) || node < 0 || link < 0) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'mask <node> <out_link> <bits>'");
    }
    Mask mask;
    for (char c : bits) {
      if (c != '0' && c != '1') throw ParseError("line " + std::to_string(line_no) + ": mask must be 0/1");
      mask.push_back(c == '1');
    }
    if (a.find(static_cast<NodeId>(node), static_cast<LinkId>(link)) != nullptr) {
      throw ParseError("line " + std::to_string(line_no) + ": duplicate mask");
    }
    a.set(static_cast<NodeId>(node), static_cast<LinkId>(link), std::move(mask));
  }
  return a;
}

CodingAssignment parse_assignment(const std::string& text) {
  std::istringstream in(text);
  return parse_assignment(in);
}

namespace {

bool is_coding_slot(const GenomeLayout::Slot& slot, const Genome& genome) {
  std::size_t ones = 0;
  for (std::size_t i = 0; i < slot.width; ++i) ones += genome[slot.offset + i] ? 1 : 0;
  return ones >= 2;
}

}  // namespace

ResourceCount count_resources(const GenomeLayout& layout, const Genome& genome) {
  if (genome.size() != layout.length()) throw LengthMismatch("genome length differs from layout");
  ResourceCount count;
  for (NodeId v : layout.merging()) {
    bool coding = false;
    for (std::size_t s : layout.slots_of(v)) {
      if (is_coding_slot(layout.slots()[s], genome)) {
        ++count.coding_links;
        coding = true;
      }
    }
    if (coding) ++count.coding_nodes;
  }
  return count;
}

ResourceCount count_resources(const Network& net, const CodingAssignment& a) {
  const GenomeLayout layout(net);
  return count_resources(layout, encode_assignment(layout, a));
}

std::vector<NodeId> coding_nodes(const GenomeLayout& layout, const Genome& genome) {
  std::vector<NodeId> nodes;
  for (NodeId v : layout.merging()) {
    for (std::size_t s : layout.slots_of(v)) {
      if (is_coding_slot(layout.slots()[s], genome)) {
        nodes.push_back(v);
        break;
      }
    }
  }
  return nodes;
}

}  // namespace ncga
