#include <doctest.h>

#include "ncga/error.hpp"
#include "ncga/p2p_sim.hpp"
#include "oracles.hpp"

using namespace ncga;

namespace {

SimConfig small_config(std::size_t blocks, std::size_t b, Strategy s = Strategy::CAN) {
  SimConfig cfg;
  cfg.block_size_bytes = 16;
  cfg.blocks_per_segment = b;
  cfg.content_size_bytes = blocks * cfg.block_size_bytes;
  cfg.strategy = s;
  cfg.deadline_rounds = 500;
  return cfg;
}

SimMetrics run(const Network& net, Strategy s, const SimConfig& base, std::uint64_t seed) {
  SimConfig cfg = base;
  cfg.strategy = s;
  cfg.seed = seed;
  return run_simulation(net, select_coding_nodes(net, s, cfg.rsn_count, nullptr, seed).assignment, cfg);
}

Network star(std::size_t leaves) {
  std::vector<LinkSpec> links;
  std::vector<NodeId> receivers;
  for (NodeId v = 1; v <= leaves; ++v) {
    links.push_back({0, v});
    receivers.push_back(v);
  }
  return build_network(leaves + 1, links, 0, receivers, 1);
}

}  // namespace

TEST_CASE("select_coding_nodes examples") {
  const Network bf = butterfly();
  CHECK(select_coding_nodes(bf, Strategy::CAN, 0, nullptr, 1).coding_nodes == std::set<NodeId>{3});

  const EffectiveCoding rsn0 = select_coding_nodes(bf, Strategy::RSN, 0, nullptr, 1);
  CHECK(rsn0.coding_nodes.empty());
  for (const auto& [key, mask] : rsn0.assignment.masks()) CHECK(std::count(mask.begin(), mask.end(), true) == 1);

  const Network big = generate_random_dag(30, 90, 20, 5, 1);
  const EffectiveCoding a = select_coding_nodes(big, Strategy::RSN, 5, nullptr, 2);
  const EffectiveCoding b = select_coding_nodes(big, Strategy::RSN, 5, nullptr, 2);
  CHECK(a.coding_nodes.size() == 5);
  CHECK(a.coding_nodes == b.coding_nodes);
  CHECK(a.assignment == b.assignment);

  CHECK_THROWS_AS(select_coding_nodes(bf, Strategy::GANS, 0, nullptr, 1), MissingGaResult);
  CHECK_THROWS_AS(select_coding_nodes(bf, Strategy::RSN, 2, nullptr, 1), InvalidParams);

  const EffectiveCoding none = select_coding_nodes(big, Strategy::NONE, 0, nullptr, 3);
  CHECK(none.coding_nodes.empty());
  const EffectiveCoding all = select_coding_nodes(big, Strategy::RSN, merging_nodes(big).size(), nullptr, 3);
  CHECK(all.assignment == select_coding_nodes(big, Strategy::CAN, 0, nullptr, 3).assignment);
}

TEST_CASE("butterfly CAN with two blocks completes after one fill round plus two") {
  const Network bf = butterfly();
  const SimConfig cfg = small_config(2, 2);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SimMetrics m = run(bf, Strategy::CAN, cfg, seed);
    CHECK(m.failure_rate == 0);
    REQUIRE(m.max_download_time);
    CHECK(*m.max_download_time == 3);
    CHECK(m.content_verified);
  }
}

TEST_CASE("butterfly without coding is slower than with coding") {
  const Network bf = butterfly();
  const SimConfig cfg = small_config(8, 8);
  int slower = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const SimMetrics can = run(bf, Strategy::CAN, cfg, seed);
    const SimMetrics none = run(bf, Strategy::NONE, cfg, seed);
    slower += *none.max_download_time > *can.max_download_time;
  }
  CHECK(slower >= 90);
}

TEST_CASE("deadline zero delivers nothing") {
  SimConfig cfg = small_config(8, 4);
  cfg.deadline_rounds = 0;
  const SimMetrics m = run(butterfly(), Strategy::CAN, cfg, 1);
  CHECK(m.failure_rate == 1.0);
  CHECK(m.system_throughput == 0);
  CHECK_FALSE(m.avg_distribution_time);
  CHECK_FALSE(m.max_download_time);
}

TEST_CASE("redundancy is exactly one when every packet is needed") {
  const LinkSpec links[] = {{0, 1}};
  const Network net = build_network(2, links, 0, {1}, 1);
  const SimMetrics m = run(net, Strategy::NONE, small_config(12, 4), 1);
  CHECK(m.packet_redundancy == 1.0);
  CHECK(m.failure_rate == 0);
  CHECK(*m.max_download_time == 12);
  CHECK(*m.avg_distribution_time <= *m.max_download_time);
}

TEST_CASE("failure rate counts peers that miss the deadline") {
  const Network net = star(20);
  SimConfig cfg = small_config(4, 4);
  cfg.deadline_rounds = 10;
  cfg.churn = ChurnSchedule({{0, 18, ChurnAction::down}, {0, 19, ChurnAction::down}});
  const SimMetrics m = run(net, Strategy::CAN, cfg, 1);
  CHECK(m.failure_rate == doctest::Approx(0.10));
  CHECK(m.completed == 18);
  cfg.churn = ChurnSchedule{};
  CHECK(run(net, Strategy::CAN, cfg, 1).failure_rate == 0);
}

TEST_CASE("throughput is decoded bytes over the last completion") {
  const LinkSpec links[] = {{0, 1}};
  const Network net = build_network(2, links, 0, {1}, 1);
  SimConfig cfg = small_config(8, 4);
  cfg.content_size_bytes = 8 * 16 - 5;  // last segment padded
  const SimResult r = simulate(net, select_coding_nodes(net, Strategy::NONE, 0, nullptr, 1).assignment, cfg);
  CHECK(r.metrics.system_throughput == doctest::Approx((8.0 * 16 - 5) / 8));
  CHECK(r.decoded_bytes_by_round.back() == doctest::Approx(8.0 * 16 - 5));
  CHECK(r.metrics.content_verified);
}

TEST_CASE("property: simulator invariants on generated networks") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Network net = generate_random_dag(15, 35, 5, 2, seed);
    SimConfig cfg = small_config(24, 4);
    cfg.seed = seed;
    cfg.record_trace = true;
    cfg.deadline_rounds = static_cast<std::uint32_t>(net.node_count() + cfg.blocks_per_segment +
                                                     cfg.segment_count() * cfg.blocks_per_segment);
    const auto coding = select_coding_nodes(net, Strategy::CAN, 0, nullptr, seed).assignment;
    const SimResult r = simulate(net, coding, cfg);
    CHECK(r.metrics.failure_rate == 0);
    CHECK(r.metrics.content_verified);
    CHECK(r.metrics.packets_received + r.metrics.packets_lost == r.metrics.packets_sent);
    CHECK(r.metrics.packet_redundancy >= 1.0);
    CHECK(r.trace.size() == r.metrics.packets_sent);

    // Determinism.
    CHECK(run_simulation(net, coding, cfg) == r.metrics);

    // Per (peer, segment) rank never decreases and never exceeds B.
    std::map<std::pair<NodeId, std::uint32_t>, std::size_t> rank;
    for (const TraceEntry& e : r.trace) {
      const auto key = std::make_pair(net.link(e.link).head, e.segment);
      rank[key] += e.innovative;
      CHECK(rank[key] <= cfg.blocks_per_segment);
    }
  }
}

TEST_CASE("property: churned runs still decode bit-exactly") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Network net = generate_random_dag(15, 35, 5, 2, 100 + seed);
    for (Strategy s : {Strategy::CAN, Strategy::NONE, Strategy::RSN}) {
      SimConfig cfg = small_config(16, 4, s);
      cfg.churn = random_link_churn(net, 5, 30, seed);
      cfg.rsn_count = merging_nodes(net).size() / 2;
      const SimMetrics m = run(net, s, cfg, seed);
      CHECK(m.content_verified);
      CHECK(m.packets_received == m.packets_sent);
    }
  }
}

TEST_CASE("coded packets are equally useful: any surviving independent set decodes") {
  // Source 0 feeds peers 1 and 2; both feed 3; 1 also feeds 2.
  const LinkSpec links[] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {1, 2}};
  const Network net = build_network(4, links, 0, {1, 2, 3}, 1);
  SimConfig cfg = small_config(4, 4);
  cfg.keep_buffers = true;
  const auto coding = select_coding_nodes(net, Strategy::CAN, 0, nullptr, 1).assignment;
  const SimResult r = simulate(net, coding, cfg);
  REQUIRE(r.metrics.failure_rate == 0);

  gf::GfMatrix original(4, 16);
  for (std::size_t i = 0; i < 64; ++i) original.at(i / 16, i % 16) = r.content[i];

  Rng rng(3);
  for (NodeId removed = 1; removed <= 3; ++removed) {
    std::vector<gf::CodedBlock> pool;
    for (NodeId v = 1; v <= 3; ++v) {
      if (v == removed) continue;
      for (const auto& block : r.buffers[v][0]) pool.push_back(block);
    }
    int decoded = 0;
    for (int attempt = 0; attempt < 200; ++attempt) {
      std::vector<gf::CodedBlock> pick;
      gf::EchelonBasis basis(4);
      std::vector<std::size_t> order(pool.size());
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t k = order.size(); k > 1; --k) std::swap(order[k - 1], order[uniform_below(rng, k)]);
      for (std::size_t idx : order) {
        if (pick.size() < 4 && basis.insert(pool[idx].coefficients)) pick.push_back(pool[idx]);
      }
      if (pick.size() < 4) continue;
      CHECK(gf::decode_segment(pick) == original);
      ++decoded;
    }
    CHECK(decoded > 0);
  }
}

TEST_CASE("compare_strategies on the butterfly") {
  const Network bf = butterfly();
  CodingAssignment ga;
  ga.set(3, 6, {true, true});
  std::vector<std::uint64_t> seeds(10);
  std::iota(seeds.begin(), seeds.end(), 1);
  const Comparison c = compare_strategies(bf, small_config(16, 4), &ga, seeds);
  CHECK(c.rows.size() == 40);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(c.rows[i].strategy == Strategy::GANS);
    CHECK(c.rows[20 + i].strategy == Strategy::CAN);
    CHECK(c.rows[i].metrics == c.rows[20 + i].metrics);
  }
  SimConfig rsn_all = small_config(16, 4);
  rsn_all.rsn_count = 1;
  CompareOptions opts;
  opts.strategies = {Strategy::RSN, Strategy::CAN};
  const Comparison d = compare_strategies(bf, rsn_all, nullptr, seeds, opts);
  for (std::size_t i = 0; i < 10; ++i) CHECK(d.rows[i].metrics == d.rows[10 + i].metrics);
  CHECK(d.summary[0].redundancy.mean == d.summary[1].redundancy.mean);
}

TEST_CASE("metrics CSV") {
  SimMetrics m;
  m.packet_redundancy = 1.5;
  m.avg_distribution_time = 4;
  m.max_download_time = 6;
  m.system_throughput = 10;
  m.failure_rate = 0.25;
  CHECK(metrics_csv_header() == "strategy,seed,redundancy,avg_time,max_time,throughput,failure_rate");
  CHECK(metrics_csv_row(Strategy::RSN, 7, m) == "RSN,7,1.5,4,6,10,0.25");
  m.avg_distribution_time.reset();
  m.max_download_time.reset();
  CHECK(metrics_csv_row(Strategy::NONE, 7, m) == "NONE,7,1.5,,,10,0.25");
  CHECK(parse_strategy("gans") == Strategy::GANS);
  CHECK_THROWS_AS(parse_strategy("x"), std::invalid_argument);
}
