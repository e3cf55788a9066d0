#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncga/ga.hpp"

namespace ncga {

namespace {

void sort_by_fitness(Population& pop) {
  std::stable_sort(pop.members.begin(), pop.members.end(),
                   [](const Chromosome& a, const Chromosome& b) { return *a.fitness > *b.fitness; });
}

GenerationStats summarize(const Population& pop, FitnessFunction& fit) {
  GenerationStats st;
  st.generation = pop.generation;
  const Chromosome& best = pop.members.front();
  st.best_f = *best.fitness;
  double sum = 0;
  for (const auto& c : pop.members) sum += *c.fitness;
  st.mean_f = sum / static_cast<double>(pop.members.size());
  const FitnessReport rep = fit.report(best.genes);
  st.best_resources = rep.resources;
  st.min_rate = rep.min_rate;
  st.avg_rate = rep.avg_rate;
  return st;
}

}  // namespace

RunResult run_ga(const Network& net, const GaParams& params, const FitnessCoefficients& coeffs, std::uint64_t seed,
                 const GenerationObserver& observer) {
  params.validate();
  FitnessFunction fit(net, coeffs, params, seed);
  RunResult result;

  Rng init_rng = make_rng({seed, 0x1A17u});
  Population pop = init_population_opposition(fit, params.pop_size, init_rng, params.seed_full_coding);
  sort_by_fitness(pop);
  result.history.push_back(summarize(pop, fit));
  if (observer) observer(pop, result.history.back());

  std::size_t stall = 0;
  if (fit.layout().length() == 0) {
    // Nothing to search: every chromosome is the empty string.
    result.terminated_by = Termination::stall;
  } else {
    result.terminated_by = Termination::max_gen;
    while (pop.generation + 1 < params.max_generations) {
      Rng rng = make_rng({seed, 0x6E7u, pop.generation + 1});
      std::vector<double> fitnesses;
      for (const auto& c : pop.members) fitnesses.push_back(*c.fitness);

      Population next;
      next.generation = pop.generation + 1;
      next.members.assign(pop.members.begin(), pop.members.begin() + static_cast<std::ptrdiff_t>(params.elite_count));
      while (next.members.size() < params.pop_size) {
        const Genome& p1 = pop.members[select_parent_roulette(fitnesses, rng)].genes;
        const Genome& p2 = pop.members[select_parent_roulette(fitnesses, rng)].genes;
        Genome child = bernoulli(rng, params.crossover_prob) ? crossover_uniform(p1, p2, params.p_uniform, rng) : p1;
        child = mutate(child, fit.layout(), params.mutation_prob, params.p_struct, rng);
        if (params.improve) child = improve_gene(child, fit, rng);
        const double f = fit(child);
        next.members.push_back({std::move(child), f});
      }
      sort_by_fitness(next);

      const double old_best = *pop.members.front().fitness;
      const double new_best = *next.members.front().fitness;
      const double gain = old_best == 0 ? (new_best > 0 ? 1.0 : 0.0) : (new_best - old_best) / std::abs(old_best);
      pop = std::move(next);
      result.history.push_back(summarize(pop, fit));
      if (observer) observer(pop, result.history.back());

      stall = gain < params.improvement_threshold ? stall + 1 : 0;
      if (stall >= params.stall_generations) {
        result.terminated_by = Termination::stall;
        break;
      }
    }
  }

  result.best = pop.members.front();
  result.best_report = fit.report(result.best.genes);
  result.best_assignment = decode_genome(fit.layout(), result.best.genes);
  result.generations_run = result.history.size();
  return result;
}

std::string history_csv(const RunResult& result) {
  std::ostringstream out;
  out << "generation,best_F,mean_F,best_Nn,best_Nl,min_rate,avg_rate\n";
  out.precision(10);
  for (const auto& h : result.history) {
    out << h.generation << ',' << h.best_f << ',' << h.mean_f << ',' << h.best_resources.coding_nodes << ','
        << h.best_resources.coding_links << ',' << h.min_rate << ',' << h.avg_rate << '\n';
  }
  return out.str();
}

}  // namespace ncga
