#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ghmdenoise/ghm_transform.hpp"
#include "ghmdenoise/rng.hpp"
#include "ghmdenoise/window_select.hpp"

namespace ghmdenoise {

/// Genetic search for the windows closest to one reference window.
///
/// A chromosome is a list of n_c distinct window indices; its fitness is the
/// mean distance of those windows to the reference (lower is better). Each
/// generation keeps the fitter half of the population as parents, breeds one
/// child per parent by two-point crossover with the next parent, mutates the
/// child adaptively and refills the population with parents plus children.
/// Every gene closer than l2_t is offered to a bounded archive that keeps the
/// n_c closest windows found so far; the archive is the result.
struct GaParams {
  std::size_t n_c = 16;
  std::size_t n_p = 10;
  std::size_t g_max = 100;
  std::size_t c_p1 = 5;
  std::size_t c_p2 = 12;
  double l2_t = 0.0;
  std::size_t max_rounds = 5;
  std::uint64_t seed = 0;

  /// Defaults with crossover points scaled to gene length n_c: the swapped
  /// band starts at floor(5 n_c / 16) and spans n_c / 2 genes, so the
  /// crossover rate stays 0.5 (n_c = 16 gives 5 and 12).
  static GaParams for_gene_length(std::size_t n_c);

  double crossover_rate() const {
    return static_cast<double>(c_p2 - c_p1 + 1) / static_cast<double>(n_c);
  }

  /// Throws ValidationError when the parameters cannot run on n_w windows.
  void validate(std::size_t n_w) const;
};

struct Chromosome {
  std::vector<std::size_t> genes;
  std::vector<double> dists;
  double fitness = 0.0;
};

/// Per-run memo of distances from the reference window to candidate windows.
class DistanceCache {
 public:
  DistanceCache(std::size_t ref_idx, std::span<const TransformedWindow> all);

  double operator()(std::size_t idx);

  std::size_t ref_idx() const { return ref_idx_; }
  std::size_t n_w() const { return all_.size(); }
  std::size_t evaluations() const { return evaluations_; }

  /// Every (index, distance) evaluated so far, ascending by closer().
  std::vector<Neighbor> evaluated() const;

 private:
  std::size_t ref_idx_;
  std::span<const TransformedWindow> all_;
  std::vector<double> dist_;
  std::vector<bool> known_;
  std::size_t evaluations_ = 0;
};

/// Archive of the closest windows found so far, ascending by closer().
/// The last fallback_count members were added by the final fill and may lie
/// at or beyond l2_t.
struct BestSet {
  std::size_t ref_idx = 0;
  std::size_t capacity = 0;
  std::vector<Neighbor> members;
  std::size_t fallback_count = 0;

  bool full() const { return members.size() >= capacity; }
};

/// Fills dists and fitness from the cache.
void evaluate(Chromosome& chrom, DistanceCache& cache);

/// Mean gene distance.
double fitness(const Chromosome& chrom, DistanceCache& cache);

std::vector<Chromosome> init_population(const GaParams& p, DistanceCache& cache, Rng& rng);

/// The n_p / 2 fittest chromosomes, ascending by fitness, ties by lower
/// population index.
std::vector<Chromosome> select_parents(std::span<const Chromosome> population);

/// pa's genes with positions [c_p1, c_p2] taken from pb. No repair.
std::vector<std::size_t> splice_genes(std::span<const std::size_t> pa, std::span<const std::size_t> pb,
                                      std::size_t c_p1, std::size_t c_p2);

/// splice_genes followed by duplicate repair: any gene equal to an earlier
/// gene is redrawn uniformly from [0, n_w) until the child is all-distinct.
/// The child's dists are left empty.
Chromosome crossover(const Chromosome& pa, const Chromosome& pb, const GaParams& p, std::size_t n_w,
                     Rng& rng);

/// Genes at or beyond l2_t are marked; if none are, only the farthest gene
/// (first on ties) is marked. Never empty for n_c >= 1.
std::vector<bool> mutation_mask(const Chromosome& child, double l2_t);

/// Replaces each marked gene with a uniform draw from [0, n_w) that differs
/// from every gene currently in the chromosome, then re-evaluates. When
/// n_c == n_w no distinct replacement exists and the chromosome is returned
/// unchanged.
Chromosome mutate(const Chromosome& child, const std::vector<bool>& mask, DistanceCache& cache,
                  Rng& rng);

/// Offers every population gene with distance < l2_t to the archive and keeps
/// the capacity closest distinct windows.
BestSet update_best_set(const BestSet& best, std::span<const Chromosome> population, double l2_t);

/// Snapshot handed to an observer after each generation.
struct GaGeneration {
  std::size_t ref_idx = 0;
  std::size_t round = 0;
  std::size_t generation = 0;
  std::span<const Chromosome> population;
  std::span<const Chromosome> children_before_mutation;
  std::span<const std::vector<bool>> masks;
  const BestSet* best = nullptr;
  std::size_t distance_evals = 0;
};

using GaObserver = std::function<void(const GaGeneration&)>;

struct GaResult {
  ClosestSet selection;
  BestSet archive;
  std::size_t rounds = 0;
  std::size_t generations = 0;
  double best_initial_fitness = 0.0;
};

/// Runs rounds of g_max generations until the archive is full or max_rounds
/// is reached, then tops the archive up with the closest windows ever
/// evaluated. The random stream is Rng(mix_seed(p.seed, ref_idx)).
GaResult ga_select(std::size_t ref_idx, std::span<const TransformedWindow> all, const GaParams& p,
                   const GaObserver& observer = {});

}  // namespace ghmdenoise

namespace ghmdenoise {

/// One line of the optional per-generation trace.
struct GaTraceRecord {
  std::size_t ref_idx = 0;
  std::size_t round = 0;
  std::size_t generation = 0;
  double best_fitness = 0.0;      ///< lowest chromosome fitness in the population
  std::size_t archive_size = 0;
  double archive_mean = 0.0;      ///< 0 when the archive is empty
  double mutation_rate = 0.0;     ///< mean marked genes per child / n_c
  std::size_t distance_evals = 0;
};

GaTraceRecord make_trace_record(const GaGeneration& view);

}  // namespace ghmdenoise
