#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ncga/error.hpp"
#include "ncga/ga.hpp"

namespace ncga {

void GaParams::validate() const {
  auto prob = [](double p) { return p >= 0 && p <= 1; };
  if (pop_size < 2) throw InvalidParams("pop_size must be at least 2");
  if (elite_count < 1 || elite_count >= pop_size) throw InvalidParams("elite_count must lie in [1, pop_size)");
  if (!prob(crossover_prob) || !prob(mutation_prob) || !prob(p_uniform) || !prob(p_struct)) {
    throw InvalidParams("probabilities must lie in [0, 1]");
  }
  if (max_generations < 1) throw InvalidParams("max_generations must be at least 1");
  if (improvement_threshold < 0) throw InvalidParams("improvement_threshold must be non-negative");
  if (eval_trials < 1) throw InvalidParams("eval_trials must be at least 1");
  if (q != 4 && q != 8 && q != 16) throw InvalidParams("q must be 4, 8 or 16");
  if (churn_links > 0) {
    if (!(churn_confidence > 0 && churn_confidence < 1)) throw InvalidParams("churn_confidence must lie in (0, 1)");
    if (!(churn_tolerance > 0)) throw InvalidParams("churn_tolerance must be positive");
    if (churn_max_trials < 2) throw InvalidParams("churn_max_trials must be at least 2");
  }
}

std::uint64_t genome_hash(const Genome& g) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (bool b : g) {
    h ^= b ? 0x31u : 0x30u;
    h *= 0x100000001B3ULL;
  }
  return h ^ g.size();
}

FitnessFunction::FitnessFunction(const Network& net, const FitnessCoefficients& coeffs, const GaParams& params,
                                 std::uint64_t seed)
    : net_(&net), coeffs_(coeffs), params_(params), seed_(seed), eval_(net, params.q, coeffs.target_rate) {
  coeffs_.validate();
}

std::vector<std::uint32_t> FitnessFunction::rates(const Genome& g) {
  auto it = rate_cache_.find(g);
  if (it != rate_cache_.end()) return it->second;
  auto r = eval_.rates(g, params_.eval_trials, derive_seed({seed_, genome_hash(g)}));
  rate_cache_.emplace(g, r);
  return r;
}

FitnessReport FitnessFunction::report(const Genome& g) {
  const auto r = rates(g);
  FitnessReport rep = make_report(*net_, r, count_resources(layout(), g), coeffs_);
  if (params_.churn_links > 0) rep.objective = (*this)(g);
  return rep;
}

double FitnessFunction::churn_fitness(const Genome& g) {
  const std::uint64_t h = genome_hash(g);
  const ResourceCount res = count_resources(layout(), g);
  const std::size_t n_links = net_->links().size();
  const std::size_t down = std::min(params_.churn_links, n_links);
  auto sampler = [&](std::size_t j) {
    Rng rng = make_rng({seed_, h, 0xC4u, j});
    std::vector<LinkId> ids(n_links);
    std::iota(ids.begin(), ids.end(), LinkId{0});
    Network snap = *net_;
    for (std::size_t k = 0; k < down; ++k) {
      std::swap(ids[k], ids[k + uniform_below(rng, n_links - k)]);
      snap = snap.with_link_alive(ids[k], false);
    }
    const RateEvaluator eval(snap, params_.q, coeffs_.target_rate);
    const auto r = eval.rates(g, params_.eval_trials, derive_seed({seed_, h, j}));
    return fitness(r, res, coeffs_);
  };
  return estimate_fitness(sampler, params_.churn_confidence, params_.churn_tolerance, params_.churn_max_trials).mean;
}

double FitnessFunction::operator()(const Genome& g) {
  auto it = fitness_cache_.find(g);
  if (it != fitness_cache_.end()) return it->second;
  ++evaluations_;
  const double f = params_.churn_links > 0 ? churn_fitness(g) : fitness(rates(g), count_resources(layout(), g), coeffs_);
  fitness_cache_.emplace(g, f);
  return f;
}

Genome opposite(const Genome& g) {
  Genome o(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) o[i] = !g[i];
  return o;
}

Population init_population_opposition(FitnessFunction& fit, std::size_t s, Rng& rng, bool seed_full_coding) {
  if (s < 2) throw InvalidParams("population size must be at least 2");
  const std::size_t len = fit.layout().length();
  std::vector<Chromosome> pool;
  pool.reserve(2 * s);
  for (std::size_t i = 0; i < s; ++i) {
    Genome g(len);
    for (std::size_t j = 0; j < len; ++j) g[j] = bernoulli(rng, 0.5);
    pool.push_back({std::move(g), std::nullopt});
  }
  if (seed_full_coding) pool.front().genes = full_coding_genome(fit.layout());
  for (std::size_t i = 0; i < s; ++i) pool.push_back({opposite(pool[i].genes), std::nullopt});
  for (auto& c : pool) c.fitness = fit(c.genes);
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Chromosome& a, const Chromosome& b) { return *a.fitness > *b.fitness; });
  pool.resize(s);
  return {std::move(pool), 0};
}

std::size_t select_parent_roulette(std::span<const double> fitnesses, Rng& rng, bool* degenerate) {
  if (fitnesses.empty()) throw std::invalid_argument("roulette over an empty population");
  double total = 0;
  for (double f : fitnesses) {
    if (!(f >= 0)) throw std::invalid_argument("roulette needs non-negative fitness");
    total += f;
  }
  if (degenerate) *degenerate = total == 0;
  if (total == 0) return uniform_below(rng, fitnesses.size());
  const double spin = uniform01(rng) * total;
  double cumulative = 0;
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    cumulative += fitnesses[i];
    if (spin < cumulative) return i;
  }
  // Rounding left the spin past the last boundary.
  for (std::size_t i = fitnesses.size(); i-- > 0;) {
    if (fitnesses[i] > 0) return i;
  }
  return fitnesses.size() - 1;
}

Genome crossover_uniform(const Genome& p1, const Genome& p2, double p_uniform, Rng& rng) {
  if (p1.size() != p2.size()) throw LengthMismatch("parents differ in length");
  Genome child(p1.size());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    child[i] = p1[i] == p2[i] ? p1[i] : (bernoulli(rng, p_uniform) ? p1[i] : p2[i]);
  }
  return child;
}

Genome mutate(const Genome& g, const GenomeLayout& layout, double pm, double p_struct, Rng& rng) {
  if (g.size() != layout.length()) throw LengthMismatch("genome length differs from layout");
  Genome out = g;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (bernoulli(rng, pm)) out[i] = !out[i];
  }
  if (p_struct > 0 && bernoulli(rng, p_struct)) {
    const auto coding = coding_nodes(layout, out);
    if (!coding.empty()) {
      const NodeId v = coding[uniform_below(rng, coding.size())];
      for (std::size_t s : layout.slots_of(v)) {
        const auto& slot = layout.slots()[s];
        const std::size_t keep = uniform_below(rng, slot.width);
        for (std::size_t b = 0; b < slot.width; ++b) out[slot.offset + b] = (b == keep);
      }
    }
  }
  return out;
}

}  // namespace ncga
