#include <algorithm>
#include <string>

#include "ncga/coding_eval.hpp"
#include "ncga/error.hpp"
#include "ncga/galois.hpp"
#include "ncga/max_flow.hpp"
#include "ncga/rng.hpp"

namespace ncga {

namespace {

bool permitted(const GenomeLayout& layout, const Genome& genome, NodeId node, LinkId out_link, std::size_t input) {
  if (!layout.is_merging(node)) return true;
  const auto& slot = layout.slots()[*layout.slot_index(node, out_link)];
  return genome[slot.offset + input];
}

}  // namespace

RateEvaluator::RateEvaluator(const Network& net, unsigned q, std::uint32_t dimension)
    : net_(&net), layout_(net), q_(q), dimension_(dimension == 0 ? net.target_rate() : dimension) {
  (void)gf::Field::get(q);
  first_symbol_.reserve(net.links().size() + 1);
  for (const Link& l : net.links()) {
    first_symbol_.push_back(symbol_count_);
    symbol_count_ += l.capacity;
  }
  first_symbol_.push_back(symbol_count_);
}

std::vector<std::uint32_t> RateEvaluator::trial_rates(const Genome& genome, std::uint64_t trial_seed) const {
  if (genome.size() != layout_.length()) throw LengthMismatch("genome length differs from layout");
  const Network& net = *net_;
  const gf::Field& field = gf::Field::get(q_);
  const std::uint32_t nonzero = field.order() - 1;
  const std::size_t h = dimension_;

  auto coefficient = [&](std::size_t out_symbol, std::size_t input) -> gf::Symbol {
    const std::uint64_t x = splitmix64(trial_seed ^ splitmix64((static_cast<std::uint64_t>(out_symbol) << 32) | input));
    return static_cast<gf::Symbol>(1 + x % nonzero);
  };

  std::vector<gf::Symbol> vectors(symbol_count_ * h, 0);
  auto symbol = [&](std::size_t s) { return std::span<gf::Symbol>(vectors.data() + s * h, h); };

  for (NodeId v : net.topological_order()) {
    const auto ins = net.in_links(v);
    for (LinkId out : net.out_links(v)) {
      const Link& link = net.link(out);
      if (!link.alive) continue;
      for (std::size_t s = first_symbol_[out]; s < first_symbol_[out + 1]; ++s) {
        auto dst = symbol(s);
        if (v == net.source()) {
          for (std::size_t k = 0; k < h; ++k) dst[k] = coefficient(s, symbol_count_ + k);
          continue;
        }
        for (std::size_t i = 0; i < ins.size(); ++i) {
          if (!net.link(ins[i]).alive || !permitted(layout_, genome, v, out, i)) continue;
          for (std::size_t t = first_symbol_[ins[i]]; t < first_symbol_[ins[i] + 1]; ++t) {
            field.axpy(dst, symbol(t), coefficient(s, t));
          }
        }
      }
    }
  }

  std::vector<std::uint32_t> result;
  result.reserve(net.receivers().size());
  for (NodeId r : net.receivers()) {
    gf::EchelonBasis basis(h, q_);
    for (LinkId in : net.in_links(r)) {
      if (!net.link(in).alive) continue;
      for (std::size_t t = first_symbol_[in]; t < first_symbol_[in + 1] && basis.rank() < h; ++t) {
        basis.insert(symbol(t));
      }
    }
    result.push_back(static_cast<std::uint32_t>(basis.rank()));
  }
  return result;
}

std::vector<std::uint32_t> RateEvaluator::rates(const Genome& genome, std::uint32_t trials, std::uint64_t seed) const {
  std::vector<std::uint32_t> best(net_->receivers().size(), 0);
  for (std::uint32_t t = 0; t < std::max<std::uint32_t>(trials, 1); ++t) {
    const auto r = trial_rates(genome, derive_seed({seed, t}));
    for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::max(best[i], r[i]);
    if (std::all_of(best.begin(), best.end(), [&](std::uint32_t x) { return x >= dimension_; })) break;
  }
  return best;
}

std::map<NodeId, std::uint32_t> evaluate_rates(const Network& net, const CodingAssignment& a, unsigned q,
                                               std::uint32_t trials, std::uint64_t seed) {
  const RateEvaluator eval(net, q);
  const auto rates = eval.rates(encode_assignment(eval.layout(), a), trials, seed);
  std::map<NodeId, std::uint32_t> out;
  for (std::size_t i = 0; i < rates.size(); ++i) out[net.receivers()[i]] = rates[i];
  return out;
}

std::vector<std::uint32_t> structural_rates(const Network& net, const GenomeLayout& layout, const Genome& genome,
                                            std::uint32_t dimension) {
  if (genome.size() != layout.length()) throw LengthMismatch("genome length differs from layout");
  std::vector<std::size_t> first(net.links().size() + 1, 0);
  for (const Link& l : net.links()) first[l.id + 1] = first[l.id] + l.capacity;
  const std::size_t symbols = first.back();
  // Vertices: 2 per symbol (in/out halves), then super-source, message hub, sink.
  const std::size_t super_source = 2 * symbols, hub = super_source + 1, sink = hub + 1;

  std::vector<std::uint32_t> result;
  for (NodeId r : net.receivers()) {
    FlowNetwork flow(sink + 1);
    flow.add_arc(super_source, hub, dimension);
    for (const Link& l : net.links()) {
      if (!l.alive) continue;
      for (std::size_t s = first[l.id]; s < first[l.id + 1]; ++s) {
        flow.add_arc(2 * s, 2 * s + 1, 1);
        if (l.tail == net.source()) flow.add_arc(hub, 2 * s, 1);
        if (l.head == r) flow.add_arc(2 * s + 1, sink, 1);
      }
      const auto ins = net.in_links(l.tail);
      for (std::size_t i = 0; i < ins.size(); ++i) {
        if (!net.link(ins[i]).alive || !permitted(layout, genome, l.tail, l.id, i)) continue;
        for (std::size_t t = first[ins[i]]; t < first[ins[i] + 1]; ++t) {
          for (std::size_t s = first[l.id]; s < first[l.id + 1]; ++s) flow.add_arc(2 * t + 1, 2 * s, 1);
        }
      }
    }
    result.push_back(static_cast<std::uint32_t>(flow.max_flow(super_source, sink)));
  }
  return result;
}

bool is_feasible(const RateEvaluator& eval, const Genome& genome, std::uint32_t target, std::uint64_t seed) {
  if (target == 0) return true;
  const auto rates = eval.rates(genome, 3, seed);
  return std::all_of(rates.begin(), rates.end(), [&](std::uint32_t x) { return x >= target; });
}

bool is_feasible(const Network& net, const CodingAssignment& a, std::uint32_t target, std::uint64_t seed) {
  if (target == 0) return true;
  const RateEvaluator eval(net, 8, target);
  return is_feasible(eval, encode_assignment(eval.layout(), a), target, seed);
}

}  // namespace ncga
