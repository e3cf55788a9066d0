#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ncga/coding_eval.hpp"
#include "ncga/error.hpp"
#include "oracles.hpp"

using namespace ncga;

namespace {

constexpr NodeId kM1 = 3;
constexpr LinkId kM1M2 = 6;

CodingAssignment butterfly_mask(Mask m) {
  CodingAssignment a;
  a.set(kM1, kM1M2, std::move(m));
  return a;
}

// Butterfly whose m1 also feeds r2 directly: m1 has two outgoing links.
Network butterfly_two_outs() {
  const LinkSpec links[] = {{0, 1}, {0, 2}, {1, 5}, {2, 6}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {4, 6}, {3, 6}};
  return build_network(7, links, 0, {5, 6}, 2);
}

// s -> a, s -> b, a -> m, b -> m, m -> r: the receiver hears only through m.
Network funnel() {
  const LinkSpec links[] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}};
  return build_network(5, links, 0, {4}, 1);
}

Genome random_genome(const GenomeLayout& layout, Rng& rng, double p_one = 0.5) {
  Genome g(layout.length());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = bernoulli(rng, p_one);
  return g;
}

std::vector<std::uint32_t> rates_vec(const std::map<NodeId, std::uint32_t>& m) {
  std::vector<std::uint32_t> out;
  for (const auto& [node, rate] : m) out.push_back(rate);
  return out;
}

}  // namespace

TEST_CASE("layout of the butterfly") {
  const GenomeLayout layout(butterfly());
  CHECK(layout.merging() == std::vector<NodeId>{kM1});
  REQUIRE(layout.slots().size() == 1);
  CHECK(layout.slots()[0].out_link == kM1M2);
  CHECK(layout.length() == 2);
  CHECK(layout.in_links(kM1)[0] == 4);
  CHECK(layout.in_links(kM1)[1] == 5);
}

TEST_CASE("count_resources examples") {
  const Network net = butterfly();
  CHECK(count_resources(net, butterfly_mask({true, true})) == ResourceCount{1, 1});
  CHECK(count_resources(net, butterfly_mask({false, true})) == ResourceCount{0, 0});

  const Network two = butterfly_two_outs();
  CodingAssignment both;
  both.set(kM1, kM1M2, {true, true});
  both.set(kM1, 9, {true, true});
  CHECK(count_resources(two, both) == ResourceCount{1, 2});

  CHECK_THROWS_AS(count_resources(net, CodingAssignment{}), InconsistentAssignment);
  CHECK_THROWS_AS(count_resources(net, butterfly_mask({true})), InconsistentAssignment);
}

TEST_CASE("evaluate_rates examples") {
  const Network net = butterfly();
  CHECK(evaluate_rates(net, butterfly_mask({true, true}), 8, 3, 1) == std::map<NodeId, std::uint32_t>{{5, 2}, {6, 2}});
  // Forwarding only a's input duplicates r1's direct flow.
  CHECK(evaluate_rates(net, butterfly_mask({true, false}), 8, 3, 1) == std::map<NodeId, std::uint32_t>{{5, 1}, {6, 2}});
  CHECK(evaluate_rates(net, butterfly_mask({false, true}), 8, 3, 1) == std::map<NodeId, std::uint32_t>{{5, 2}, {6, 1}});

  CodingAssignment idle;
  idle.set(3, 4, {false, false});
  CHECK(evaluate_rates(funnel(), idle, 8, 3, 1) == std::map<NodeId, std::uint32_t>{{4, 0}});
}

TEST_CASE("fitness examples") {
  FitnessCoefficients c;
  c.target_rate = 2;
  const std::uint32_t above[] = {2, 2};
  CHECK(fitness(above, {1, 1}, c) == doctest::Approx(140));
  const std::uint32_t below[] = {1, 2};
  CHECK(fitness(below, {0, 0}, c) == doctest::Approx(27));
  FitnessCoefficients bad;
  bad.a = {1, 1, 2, 2, 3, 3};
  CHECK_THROWS_AS(fitness(above, {0, 0}, bad), InvalidCoefficients);
  bad.a = {10, 10, 1, 1, 5, 100};
  CHECK_THROWS_AS(bad.validate(), InvalidCoefficients);
}

TEST_CASE("make_report fills every field") {
  FitnessCoefficients c;
  c.target_rate = 2;
  const std::uint32_t rates[] = {1, 2};
  const FitnessReport r = make_report(butterfly(), rates, {0, 0}, c);
  CHECK(r.achieved == std::vector<std::pair<NodeId, std::uint32_t>>{{5, 1}, {6, 2}});
  CHECK(r.min_rate == 1);
  CHECK(r.avg_rate == doctest::Approx(1.5));
  CHECK(r.objective == doctest::Approx(27));
  CHECK_FALSE(r.feasible(2));
}

TEST_CASE("property: a feasible report beats the same rates scored below target") {
  Rng rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    FitnessCoefficients c;
    const double a12 = 2 + 10 * uniform01(rng);
    c.a = {a12, a12 + uniform01(rng), a12 * uniform01(rng), a12 * uniform01(rng), 0, 0};
    c.a[4] = c.a[1] + 1 + 50 * uniform01(rng);
    c.a[5] = c.a[1] + 1 + 50 * uniform01(rng);
    REQUIRE(c.valid());
    const std::uint32_t rates[] = {static_cast<std::uint32_t>(1 + uniform_below(rng, 5)),
                                   static_cast<std::uint32_t>(1 + uniform_below(rng, 5))};
    const ResourceCount res{uniform_below(rng, 10), uniform_below(rng, 20)};
    c.target_rate = std::min(rates[0], rates[1]);
    const double above = fitness(rates, res, c);
    c.target_rate += 1;
    const double below = fitness(rates, res, c);
    CHECK(above > below);
  }
}

TEST_CASE("is_feasible examples") {
  const Network net = butterfly();
  CHECK(is_feasible(net, butterfly_mask({true, true}), 2));
  CHECK_FALSE(is_feasible(net, butterfly_mask({true, false}), 2));
  CHECK(is_feasible(net, butterfly_mask({false, false}), 0));
  CHECK(is_feasible(net, butterfly_mask({false, false}), 1));
}

TEST_CASE("estimator examples") {
  FitnessEstimator est;
  est.push(2);
  est.push(4);
  CHECK(est.mean() == doctest::Approx(3));
  CHECK(est.variance() == doctest::Approx(2));

  const EstimateResult constant = estimate_fitness([](std::size_t) { return 5.0; }, 0.95, 0.1, 1000);
  CHECK(constant.trials == 2);
  CHECK(constant.mean == doctest::Approx(5));
  CHECK_FALSE(constant.hit_max_trials);

  std::size_t calls = 0;
  const EstimateResult capped =
      estimate_fitness([&](std::size_t i) { ++calls; return static_cast<double>(i % 2) * 100; }, 0.95, 1e-6, 7);
  CHECK(capped.hit_max_trials);
  CHECK(capped.trials == 7);
  CHECK(calls == 7);
  CHECK(student_t_quantile(0.975, 1e9) == doctest::Approx(1.959964).epsilon(1e-5));
  CHECK(student_t_quantile(0.975, 4) == doctest::Approx(2.776445).epsilon(1e-5));
}

TEST_CASE("t statistic") {
  FitnessEstimator est;
  for (double x : {1.0, 2.0, 3.0, 4.0}) est.push(x);
  // mean 2.5, var 5/3
  CHECK(est.t_statistic(2.0) == doctest::Approx(0.5 * std::sqrt(3.0) / std::sqrt(5.0 / 3.0)));
}

TEST_CASE("oracle examples") {
  const OracleResult b2 = brute_force_min_coding(butterfly(), 2);
  CHECK(b2.feasible);
  CHECK(b2.optimum == ResourceCount{1, 1});
  CHECK(is_feasible(butterfly(), b2.witness, 2));

  const LinkSpec path[] = {{0, 1}, {1, 2}};
  const OracleResult p = brute_force_min_coding(build_network(3, path, 0, {2}, 1), 1);
  CHECK(p.feasible);
  CHECK(p.optimum == ResourceCount{0, 0});

  const OracleResult b1 = brute_force_min_coding(butterfly(), 1);
  CHECK(b1.optimum == ResourceCount{0, 0});

  CHECK_THROWS_AS(brute_force_min_coding(generate_random_dag(50, 130, 30, 4, 1), 4), TooLarge);
  CHECK_FALSE(brute_force_min_coding(butterfly(), 3).feasible);
}

TEST_CASE("property: codec is a bijection") {
  Rng rng(41);
  for (int trial = 0; trial < 1000; ++trial) {
    const Network net = oracle::small_dag(rng, 5 + uniform_below(rng, 6), 8 + uniform_below(rng, 12), 2);
    const GenomeLayout layout(net);
    const Genome g = random_genome(layout, rng);
    const CodingAssignment a = decode_genome(layout, g);
    CHECK(encode_assignment(layout, a) == g);
    CHECK(decode_genome(layout, encode_assignment(layout, a)) == a);
    CHECK(parse_assignment(serialize_assignment(a)) == a);
  }
}

TEST_CASE("assignment text format") {
  const std::string text = serialize_assignment(butterfly_mask({true, false}));
  CHECK(text == "mask 3 6 10\n");
  CHECK_THROWS_AS(parse_assignment(std::string("mask 3 6 1x\n")), ParseError);
  CHECK_THROWS_AS(decode_genome(GenomeLayout(butterfly()), Genome(3)), LengthMismatch);
}

TEST_CASE("property: random and structural evaluation agree, both bounded by max-flow") {
  Rng rng(43);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const Network net = oracle::small_dag(rng, 6 + uniform_below(rng, 3), 10 + uniform_below(rng, 5), 2);
    const GenomeLayout layout(net);
    if (layout.length() == 0 || layout.length() > 10) continue;
    const std::uint32_t target = min_receiver_flow(net);
    const RateEvaluator eval(net, 8, target);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << layout.length()); ++bits) {
      Genome g(layout.length());
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = bits >> i & 1u;
      const auto symbolic = structural_rates(net, layout, g, target);
      const auto random = eval.rates(g, 3, bits);
      CHECK(random == symbolic);
      const bool symbolic_ok = std::all_of(symbolic.begin(), symbolic.end(), [&](auto x) { return x >= target; });
      CHECK(is_feasible(eval, g, target, bits) == symbolic_ok);
      for (std::size_t i = 0; i < random.size(); ++i) CHECK(random[i] <= max_flow(net, net.receivers()[i]));
    }
    ++checked;
  }
  CHECK(checked >= 20);
}

TEST_CASE("property: adding a contribution bit never lowers a rate") {
  Rng rng(47);
  int perturbations = 0;
  while (perturbations < 200) {
    const Network net = generate_random_dag(10, 22, 3, 2, rng());
    const GenomeLayout layout(net);
    if (layout.length() == 0) continue;
    Genome g = random_genome(layout, rng, 0.4);
    std::vector<std::size_t> zeros;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i]) zeros.push_back(i);
    }
    if (zeros.empty()) continue;
    const auto before = structural_rates(net, layout, g, 2);
    g[zeros[uniform_below(rng, zeros.size())]] = true;
    const auto after = structural_rates(net, layout, g, 2);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(after[i] >= before[i]);
    ++perturbations;
  }
}

TEST_CASE("property: full coding achieves the min-cut") {
  int hits = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Network net = generate_random_dag(15, 40, 5, 3, seed);
    const std::uint32_t cut = min_receiver_flow(net);
    const RateEvaluator eval(net, 8, cut);
    const Genome all = full_coding_genome(eval.layout());
    for (std::uint64_t t = 0; t < 4; ++t) {
      const auto r = eval.trial_rates(all, derive_seed({seed, t}));
      hits += *std::min_element(r.begin(), r.end()) == cut;
      ++total;
    }
  }
  CHECK(static_cast<double>(hits) / total >= 0.99);
}

TEST_CASE("property: downing a non-contributing input leaves rates unchanged") {
  Rng rng(53);
  int cases = 0;
  while (cases < 100) {
    const Network net = generate_random_dag(12, 28, 3, 2, rng());
    const GenomeLayout layout(net);
    if (layout.length() == 0) continue;
    const Genome g = random_genome(layout, rng);
    const RateEvaluator full(net);
    const auto base = full.rates(g, 3, 9);
    for (NodeId v : layout.merging()) {
      if (net.is_receiver(v)) continue;
      const auto ins = layout.in_links(v);
      for (std::size_t i = 0; i < ins.size(); ++i) {
        bool used = false;
        for (std::size_t s : layout.slots_of(v)) used = used || g[layout.slots()[s].offset + i];
        if (used) continue;
        const Network cut = net.with_link_alive(ins[i], false);
        const RateEvaluator eval(cut);
        CHECK(eval.rates(g, 3, 9) == base);
        ++cases;
      }
    }
  }
}

TEST_CASE("evaluation is deterministic and q-independent in outcome on the butterfly") {
  const Network net = butterfly();
  for (unsigned q : {4u, 8u, 16u}) {
    CHECK(rates_vec(evaluate_rates(net, butterfly_mask({true, true}), q, 3, 5)) == std::vector<std::uint32_t>{2, 2});
  }
  const RateEvaluator eval(net);
  const Genome g{true, true};
  CHECK(eval.trial_rates(g, 77) == eval.trial_rates(g, 77));
}
