#include <algorithm>
#include <numeric>
#include <string>

#include "ncga/error.hpp"
#include "ncga/netgraph.hpp"
#include "ncga/rng.hpp"

namespace ncga {

ChurnSchedule::ChurnSchedule(std::vector<ChurnEvent> events) : events_(std::move(events)) {
  std::stable_sort(events_.begin(), events_.end(),
                   [](const ChurnEvent& a, const ChurnEvent& b) { return a.time < b.time; });
  std::vector<LinkId> down;
  for (const ChurnEvent& e : events_) {
    auto it = std::find(down.begin(), down.end(), e.link);
    if (e.action == ChurnAction::down) {
      if (it != down.end()) {
        throw InvalidSchedule("link " + std::to_string(e.link) + " goes down twice at t=" +
                              std::to_string(e.time));
      }
      down.push_back(e.link);
    } else if (it != down.end()) {
      down.erase(it);
    }
  }
}

Network apply_churn(const Network& net, const ChurnSchedule& schedule, std::uint32_t t) {
  Network snapshot = net;
  for (const ChurnEvent& e : schedule.events()) {
    if (e.link >= net.links().size()) throw UnknownLink("churn names unknown link " + std::to_string(e.link));
    if (e.time > t) break;
    snapshot = snapshot.with_link_alive(e.link, e.action == ChurnAction::up);
  }
  return snapshot;
}

std::vector<ChurnEvent> peer_departure(const Network& net, NodeId peer, std::uint32_t t) {
  std::vector<ChurnEvent> events;
  for (LinkId l : net.in_links(peer)) events.push_back({t, l, ChurnAction::down});
  for (LinkId l : net.out_links(peer)) events.push_back({t, l, ChurnAction::down});
  std::sort(events.begin(), events.end(),
            [](const ChurnEvent& a, const ChurnEvent& b) { return a.link < b.link; });
  return events;
}

ChurnSchedule random_link_churn(const Network& net, std::size_t n_dynamic, std::uint32_t horizon,
                                std::uint64_t seed) {
  Rng rng = make_rng({seed, 0xC4u});
  std::vector<LinkId> ids(net.links().size());
  std::iota(ids.begin(), ids.end(), LinkId{0});
  n_dynamic = std::min(n_dynamic, ids.size());
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < n_dynamic; ++i) {
    std::swap(ids[i], ids[i + uniform_below(rng, ids.size() - i)]);
  }
  const std::uint32_t span = std::max<std::uint32_t>(horizon, 1);
  std::vector<ChurnEvent> events;
  for (std::size_t i = 0; i < n_dynamic; ++i) {
    const auto down_at = static_cast<std::uint32_t>(uniform_below(rng, std::max<std::uint32_t>(span / 2, 1)));
    const std::uint32_t min_outage = std::max<std::uint32_t>(span / 4, 1);
    const auto outage = min_outage + static_cast<std::uint32_t>(uniform_below(rng, span - min_outage + 1));
    events.push_back({down_at, ids[i], ChurnAction::down});
    events.push_back({down_at + outage, ids[i], ChurnAction::up});
  }
  return ChurnSchedule(std::move(events));
}

}  // namespace ncga
