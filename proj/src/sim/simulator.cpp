#include <algorithm>
#include <numeric>

#include "ncga/error.hpp"
#include "ncga/p2p_sim.hpp"
#include "ncga/rng.hpp"

namespace ncga {

std::size_t SimConfig::segment_count() const {
  if (segment_bytes() == 0) return 0;
  return (content_size_bytes + segment_bytes() - 1) / segment_bytes();
}

void SimConfig::validate() const {
  if (content_size_bytes == 0) throw InvalidParams("content_size_bytes must be positive");
  if (block_size_bytes == 0) throw InvalidParams("block_size_bytes must be positive");
  if (blocks_per_segment == 0) throw InvalidParams("blocks_per_segment must be positive");
}

namespace {

constexpr unsigned kQ = 8;

struct Packet {
  std::uint32_t input = 0;  // index into the holder's in_links
  gf::CodingVector coeffs;
  std::vector<std::uint8_t> payload;
};

struct SegmentState {
  explicit SegmentState(std::size_t b) : basis(b, kQ) {}
  gf::EchelonBasis basis;
  std::vector<Packet> packets;  // innovative for the node on arrival
  bool decoded = false;
};

// Per (link, segment). The head keeps what arrived over the link, kept apart
// from its node-level buffer because a masked output may forward only this
// input. `offer` is the span the tail may put on the link.
struct LinkSegment {
  explicit LinkSegment(std::size_t b) : received(b, kQ), offer(b, kQ) {}
  gf::EchelonBasis received;
  std::vector<Packet> packets;
  gf::EchelonBasis offer;
};

struct PeerState {
  std::vector<SegmentState> segments;
  std::size_t next_needed = 0;
  std::size_t decoded = 0;
};

class Simulation {
 public:
  Simulation(const Network& net, const CodingAssignment& coding, const SimConfig& cfg)
      : net_(net), cfg_(cfg), layout_(net), field_(gf::Field::get(kQ)), rng_(make_rng({cfg.seed, 0x5171u})) {
    cfg.validate();
    const Genome genome = encode_assignment(layout_, coding);
    B_ = cfg.blocks_per_segment;
    S_ = cfg.block_size_bytes;
    n_seg_ = cfg.segment_count();

    // Content and its padded segments.
    Rng content_rng = make_rng({cfg.seed, 0xC0u});
    result_.content.resize(cfg.content_size_bytes);
    for (auto& byte : result_.content) byte = static_cast<std::uint8_t>(content_rng() >> 56);
    original_.assign(n_seg_, std::vector<std::vector<std::uint8_t>>(B_, std::vector<std::uint8_t>(S_, 0)));
    for (std::size_t i = 0; i < result_.content.size(); ++i) {
      const std::size_t seg = i / cfg.segment_bytes(), off = i % cfg.segment_bytes();
      original_[seg][off / S_][off % S_] = result_.content[i];
    }

    // Which inputs each link may draw from.
    const auto& links = net.links();
    permitted_.resize(links.size());
    permitted_count_.assign(links.size(), 0);
    input_index_.assign(links.size(), 0);
    for (NodeId v = 0; v < net.node_count(); ++v) {
      const auto ins = net.in_links(v);
      for (std::size_t i = 0; i < ins.size(); ++i) input_index_[ins[i]] = static_cast<std::uint32_t>(i);
    }
    for (const Link& l : links) {
      const std::size_t width = net.in_degree(l.tail);
      if (layout_.is_merging(l.tail)) {
        const auto& slot = layout_.slots()[*layout_.slot_index(l.tail, l.id)];
        permitted_[l.id].assign(genome.begin() + static_cast<std::ptrdiff_t>(slot.offset),
                                genome.begin() + static_cast<std::ptrdiff_t>(slot.offset + slot.width));
      } else {
        permitted_[l.id].assign(width, true);
      }
      permitted_count_[l.id] = static_cast<std::size_t>(std::count(permitted_[l.id].begin(), permitted_[l.id].end(), true));
    }

    // Systematic offsets for the uncoded source: spread its links over the segment.
    source_offset_.assign(links.size(), 0);
    const auto outs = net.out_links(net.source());
    for (std::size_t j = 0; j < outs.size(); ++j) source_offset_[outs[j]] = j * B_ / std::max<std::size_t>(outs.size(), 1);

    peers_.resize(net.node_count());
    for (NodeId v = 0; v < net.node_count(); ++v) {
      peers_[v].segments.reserve(n_seg_);
      for (std::size_t g = 0; g < n_seg_; ++g) peers_[v].segments.emplace_back(B_);
    }
    link_segs_.reserve(links.size() * n_seg_);
    for (std::size_t k = 0; k < links.size() * n_seg_; ++k) link_segs_.emplace_back(B_);
    demand_.assign(net.node_count(), std::vector<char>(n_seg_, 1));
    relays_.assign(links.size(), false);
    for (const Link& l : links) {
      for (LinkId o : net.out_links(l.head)) relays_[l.id] = relays_[l.id] || permitted_[o][input_index_[l.id]];
    }
    counters_.assign(links.size() * std::max<std::size_t>(n_seg_, 1), 0);
    alive_.resize(links.size());
    for (const Link& l : links) alive_[l.id] = l.alive;
  }

  SimResult run() {
    SimMetrics& m = result_.metrics;
    const auto& receivers = net_.receivers();
    m.peers = receivers.size();
    m.ideal_traffic = static_cast<std::uint64_t>(net_.node_count() - 1) * cfg_.total_blocks();
    const auto& events = cfg_.churn.events();
    std::size_t next_event = 0;
    double decoded_bytes = 0;

    for (std::uint32_t round = 0; round < cfg_.deadline_rounds && result_.completion_round.size() < receivers.size();
         ++round) {
      for (; next_event < events.size() && events[next_event].time <= round; ++next_event) {
        const ChurnEvent& e = events[next_event];
        if (e.link >= alive_.size()) throw UnknownLink("churn event names link " + std::to_string(e.link));
        alive_[e.link] = e.action == ChurnAction::up;
      }

      update_demand();
      std::vector<std::pair<LinkId, std::pair<std::uint32_t, Packet>>> in_flight;
      for (NodeId v : net_.topological_order()) {
        for (LinkId l : net_.out_links(v)) {
          if (!alive_[l]) continue;
          for (std::uint32_t c = 0; c < net_.link(l).capacity; ++c) {
            const auto g = pick_segment(v, l);
            if (!g) break;
            in_flight.push_back({l, {static_cast<std::uint32_t>(*g), build_packet(v, l, *g)}});
            ++m.packets_sent;
          }
        }
      }

      for (auto& [l, item] : in_flight) {
        auto& [g, packet] = item;
        const NodeId w = net_.link(l).head;
        ++m.packets_received;
        SegmentState& seg = peers_[w].segments[g];
        packet.input = input_index_[l];
        const bool innovative = !seg.decoded && seg.basis.insert(packet.coeffs);
        if (cfg_.record_trace) result_.trace.push_back({round, l, g, innovative});
        LinkSegment& ls = link_seg(l, g);
        if (ls.received.insert(packet.coeffs)) {
          for (LinkId o : net_.out_links(w)) {
            if (permitted_[o][packet.input]) link_seg(o, g).offer.insert(packet.coeffs);
          }
          ls.packets.push_back(packet);
        }
        if (!innovative) continue;
        ++m.packets_innovative;
        seg.packets.push_back(std::move(packet));
        if (seg.basis.rank() == B_) decoded_bytes += finish_segment(w, g, round);
      }
      result_.decoded_bytes_by_round.push_back(decoded_bytes);
      m.rounds_run = round + 1;
    }

    m.completed = result_.completion_round.size();
    m.packets_lost = 0;  // senders skip links that are down
    m.packet_redundancy = m.ideal_traffic ? static_cast<double>(m.packets_sent) / static_cast<double>(m.ideal_traffic) : 0;
    m.failure_rate = m.peers ? static_cast<double>(m.peers - m.completed) / static_cast<double>(m.peers) : 0;
    if (m.completed > 0) {
      double sum = 0, mx = 0;
      for (const auto& [node, r] : result_.completion_round) {
        sum += r;
        mx = std::max<double>(mx, r);
      }
      m.avg_distribution_time = sum / static_cast<double>(m.completed);
      m.max_download_time = mx;
    }
    const double span = m.max_download_time ? *m.max_download_time : static_cast<double>(m.rounds_run);
    m.system_throughput = span > 0 ? decoded_bytes / span : 0;

    if (cfg_.keep_buffers) {
      result_.buffers.resize(net_.node_count());
      for (NodeId v = 0; v < net_.node_count(); ++v) {
        for (const SegmentState& seg : peers_[v].segments) {
          auto& out = result_.buffers[v].emplace_back();
          for (const Packet& p : seg.packets) out.push_back({p.coeffs, {p.payload.begin(), p.payload.end()}});
        }
      }
    }
    return std::move(result_);
  }

 private:
  LinkSegment& link_seg(LinkId l, std::size_t g) { return link_segs_[l * n_seg_ + g]; }
  const LinkSegment& link_seg(LinkId l, std::size_t g) const { return link_segs_[l * n_seg_ + g]; }

  // demand_[v][g]: v or some peer it can reach over alive links lacks segment g.
  void update_demand() {
    const auto& order = net_.topological_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const NodeId v = *it;
      auto& d = demand_[v];
      for (std::size_t g = 0; g < n_seg_; ++g) d[g] = !peers_[v].segments[g].decoded;
      for (LinkId o : net_.out_links(v)) {
        if (!alive_[o]) continue;
        const auto& below = demand_[net_.link(o).head];
        for (std::size_t g = 0; g < n_seg_; ++g) d[g] = d[g] || below[g];
      }
    }
  }

  // Whether the head of l needs segment g over l, to decode or to relay.
  bool wanted(LinkId l, std::size_t g) const {
    const NodeId w = net_.link(l).head;
    if (!peers_[w].segments[g].decoded) return true;
    for (LinkId o : net_.out_links(w)) {
      if (alive_[o] && permitted_[o][input_index_[l]] && demand_[net_.link(o).head][g]) return true;
    }
    return false;
  }

  // Lowest wanted segment for which v can tell the head of l something it
  // has not yet received over l.
  std::optional<std::size_t> pick_segment(NodeId v, LinkId l) const {
    const PeerState& w = peers_[net_.link(l).head];
    const std::size_t limit = v == net_.source() ? B_ : 0;
    for (std::size_t g = relays_[l] ? 0 : w.next_needed; g < n_seg_; ++g) {
      if (!wanted(l, g)) continue;
      const LinkSegment& ls = link_seg(l, g);
      if (ls.received.rank() < std::max(limit, ls.offer.rank())) return g;
    }
    return std::nullopt;
  }

  Packet combine(const std::vector<const Packet*>& parts) {
    Packet out;
    out.coeffs.assign(B_, 0);
    out.payload.assign(S_, 0);
    for (const Packet* p : parts) {
      const auto c = field_.random_nonzero(rng_);
      field_.axpy(out.coeffs, p->coeffs, c);
      field_.axpy_bytes(out.payload, p->payload, static_cast<std::uint8_t>(c));
    }
    return out;
  }

  Packet build_packet(NodeId v, LinkId l, std::size_t g) {
    std::uint64_t& counter = counters_[l * n_seg_ + g];
    if (v == net_.source()) {
      if (cfg_.strategy == Strategy::NONE) {
        const std::size_t k = (source_offset_[l] + counter++) % B_;
        Packet p;
        p.coeffs.assign(B_, 0);
        p.coeffs[k] = 1;
        p.payload = original_[g][k];
        return p;
      }
      ++counter;
      Packet out;
      out.coeffs.resize(B_);
      out.payload.assign(S_, 0);
      for (std::size_t k = 0; k < B_; ++k) {
        out.coeffs[k] = field_.random_nonzero(rng_);
        field_.axpy_bytes(out.payload, original_[g][k], static_cast<std::uint8_t>(out.coeffs[k]));
      }
      return out;
    }

    std::vector<const Packet*> usable;
    const auto ins = net_.in_links(v);
    for (std::size_t i = 0; i < ins.size(); ++i) {
      if (!permitted_[l][i]) continue;
      for (const Packet& p : link_seg(ins[i], g).packets) usable.push_back(&p);
    }
    if (permitted_count_[l] >= 2) {
      ++counter;
      return combine(usable);
    }
    // Forwarding: one permitted input.
    std::size_t pick = counter % usable.size();
    if (cfg_.forward == ForwardPolicy::innovative_if_known) {
      // Prefer what the head can decode with, then what it can relay.
      const SegmentState& theirs = peers_[net_.link(l).head].segments[g];
      const auto& carried = link_seg(l, g).received;
      bool found = false;
      for (int pass = theirs.decoded ? 1 : 0; pass < 2 && !found; ++pass) {
        const auto& basis = pass == 0 ? theirs.basis : carried;
        for (std::size_t k = 0; k < usable.size(); ++k) {
          const std::size_t idx = (counter + k) % usable.size();
          if (basis.would_increase_rank(usable[idx]->coeffs)) {
            pick = idx;
            found = true;
            break;
          }
        }
      }
    }
    ++counter;
    return *usable[pick];
  }

  // Decodes segment g at node w; returns the bytes credited to a receiver.
  double finish_segment(NodeId w, std::size_t g, std::uint32_t round) {
    PeerState& peer = peers_[w];
    SegmentState& seg = peer.segments[g];
    std::vector<gf::CodedBlock> blocks;
    blocks.reserve(seg.packets.size());
    for (const Packet& p : seg.packets) blocks.push_back({p.coeffs, {p.payload.begin(), p.payload.end()}});
    const gf::GfMatrix m = gf::decode_segment(blocks, kQ);
    for (std::size_t k = 0; k < B_; ++k) {
      for (std::size_t b = 0; b < S_; ++b) {
        if (m.at(k, b) != original_[g][k][b]) result_.metrics.content_verified = false;
      }
    }
    seg.decoded = true;
    ++peer.decoded;
    while (peer.next_needed < n_seg_ && peer.segments[peer.next_needed].decoded) ++peer.next_needed;
    if (!net_.is_receiver(w)) return 0;
    if (peer.decoded == n_seg_) result_.completion_round[w] = round + 1;
    const std::size_t start = g * cfg_.segment_bytes();
    return static_cast<double>(std::min(cfg_.segment_bytes(), cfg_.content_size_bytes - start));
  }

  const Network& net_;
  const SimConfig& cfg_;
  GenomeLayout layout_;
  const gf::Field& field_;
  Rng rng_;
  std::size_t B_ = 0, S_ = 0, n_seg_ = 0;
  std::vector<std::vector<std::vector<std::uint8_t>>> original_;
  std::vector<std::vector<bool>> permitted_;
  std::vector<std::size_t> permitted_count_;
  std::vector<std::uint32_t> input_index_;
  std::vector<std::size_t> source_offset_;
  std::vector<PeerState> peers_;
  std::vector<LinkSegment> link_segs_;
  std::vector<bool> relays_;  // the head forwards this input somewhere
  std::vector<std::vector<char>> demand_;
  std::vector<std::uint64_t> counters_;
  std::vector<bool> alive_;
  SimResult result_;
};

}  // namespace

SimResult simulate(const Network& net, const CodingAssignment& coding, const SimConfig& cfg) {
  return Simulation(net, coding, cfg).run();
}

SimMetrics run_simulation(const Network& net, const CodingAssignment& coding, const SimConfig& cfg) {
  return simulate(net, coding, cfg).metrics;
}

}  // namespace ncga
