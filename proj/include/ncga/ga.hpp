#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ncga/coding_eval.hpp"
#include "ncga/rng.hpp"

namespace ncga {

struct GaParams {
  std::size_t pop_size = 50;
  double crossover_prob = 0.8;
  double mutation_prob = 0.01;
  std::size_t max_generations = 100;
  std::size_t elite_count = 2;
  double p_uniform = 0.5;  // chance a disagreeing gene comes from the first parent
  double p_struct = 0.1;   // chance of the structural (de-coding) mutation
  double improvement_threshold = 1e-3;
  std::size_t stall_generations = 10;
  bool improve = true;
  // Put the all-ones (full coding) chromosome among the random individuals
  // so the search starts from a feasible point whenever one exists.
  bool seed_full_coding = true;

  // Rate evaluation.
  unsigned q = 8;
  std::uint32_t eval_trials = 3;

  // Churn sampling: when churn_links > 0 every fitness is the sequential
  // Student-t mean over random snapshots with churn_links links down.
  std::size_t churn_links = 0;
  double churn_confidence = 0.95;
  double churn_tolerance = 0.5;
  std::size_t churn_max_trials = 50;

  /// Throws InvalidParams.
  void validate() const;

  friend bool operator==(const GaParams&, const GaParams&) = default;
};

struct Chromosome {
  Genome genes;
  std::optional<double> fitness;

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct Population {
  std::vector<Chromosome> members;
  std::size_t generation = 0;
};

/// FNV-1a over the bits; stable across platforms.
std::uint64_t genome_hash(const Genome& g);

/// Fitness of genomes on one network, memoised by genome. Evaluation seeds are
/// derived from (run seed, genome hash) so a genome always scores the same.
class FitnessFunction {
 public:
  FitnessFunction(const Network& net, const FitnessCoefficients& coeffs, const GaParams& params,
                  std::uint64_t seed);

  const Network& network() const { return *net_; }
  const GenomeLayout& layout() const { return eval_.layout(); }
  const FitnessCoefficients& coefficients() const { return coeffs_; }

  double operator()(const Genome& g);
  /// Rates (static topology), resources and objective for `g`.
  FitnessReport report(const Genome& g);
  std::vector<std::uint32_t> rates(const Genome& g);

  std::size_t evaluations() const { return evaluations_; }

 private:
  double churn_fitness(const Genome& g);

  const Network* net_;
  FitnessCoefficients coeffs_;
  GaParams params_;
  std::uint64_t seed_;
  RateEvaluator eval_;
  std::unordered_map<Genome, double> fitness_cache_;
  std::unordered_map<Genome, std::vector<std::uint32_t>> rate_cache_;
  std::size_t evaluations_ = 0;
};

/// Bitwise complement: the opposite point of a {0,1} gene.
Genome opposite(const Genome& g);

/// s uniform random individuals plus their opposites; the s fittest of the
/// union survive (ties keep the earlier individual). With `seed_full_coding`
/// the first random individual is replaced by the all-ones chromosome.
Population init_population_opposition(FitnessFunction& fit, std::size_t s, Rng& rng, bool seed_full_coding = false);

/// Index drawn with probability fitness[i] / sum. When every fitness is zero
/// the draw is uniform and *degenerate (if given) is set.
std::size_t select_parent_roulette(std::span<const double> fitnesses, Rng& rng, bool* degenerate = nullptr);

/// Genes the parents share are kept; the rest come from p1 with probability
/// p_uniform, else from p2. Throws LengthMismatch.
Genome crossover_uniform(const Genome& p1, const Genome& p2, double p_uniform, Rng& rng);

/// Independent bit flips at rate pm, then with probability p_struct one
/// random coding node has each of its masks reduced to a single random bit.
Genome mutate(const Genome& g, const GenomeLayout& layout, double pm, double p_struct, Rng& rng);

/// Marks carried across improve_gene calls; one flag per merging node in
/// layout order.
using LcpMarks = std::vector<bool>;

/// Changes at most one mask so that a merging node which receives the same
/// flow on two inputs gets a different flow on one of them. Candidates that
/// would lower fitness are rejected. Returns the input when nothing applies.
Genome improve_gene(const Genome& g, FitnessFunction& fit, Rng& rng, LcpMarks* marks = nullptr);

enum class Termination { max_gen, stall };

struct GenerationStats {
  std::size_t generation = 0;
  double best_f = 0;
  double mean_f = 0;
  ResourceCount best_resources;
  std::uint32_t min_rate = 0;
  double avg_rate = 0;
};

struct RunResult {
  Chromosome best;
  FitnessReport best_report;
  CodingAssignment best_assignment;
  std::vector<GenerationStats> history;
  std::size_t generations_run = 0;
  Termination terminated_by = Termination::max_gen;
};

/// Called after each generation with the population in fitness order.
using GenerationObserver = std::function<void(const Population&, const GenerationStats&)>;

RunResult run_ga(const Network& net, const GaParams& params, const FitnessCoefficients& coeffs,
                 std::uint64_t seed, const GenerationObserver& observer = {});

/// `generation,best_F,mean_F,best_Nn,best_Nl,min_rate,avg_rate` plus one row per generation.
std::string history_csv(const RunResult& result);

}  // namespace ncga
