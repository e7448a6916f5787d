#include "ghmdenoise/ga_select.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "ghmdenoise/errors.hpp"

namespace ghmdenoise {

GaParams GaParams::for_gene_length(std::size_t n_c) {
  GaParams p;
  p.n_c = n_c;
  if (n_c < 2) return p;  // rejected by validate()
  const std::size_t band = std::max<std::size_t>(2, n_c / 2);
  p.c_p1 = std::min(5 * n_c / 16, n_c - band);
  p.c_p2 = p.c_p1 + band - 1;
  return p;
}

void GaParams::validate(std::size_t n_w) const {
  if (n_c < 2) throw ValidationError("GA gene length n_c must be >= 2");
  if (n_c > n_w) {
    throw ValidationError("gene length " + std::to_string(n_c) + " exceeds window count " +
                          std::to_string(n_w));
  }
  if (n_p < 2 || n_p % 2 != 0) throw ValidationError("population size must be even and >= 2");
  if (!(c_p1 < c_p2 && c_p2 <= n_c - 1)) {
    throw ValidationError("crossover points must satisfy 0 <= c_p1 < c_p2 <= n_c - 1");
  }
  if (g_max < 1) throw ValidationError("g_max must be >= 1");
  if (max_rounds < 1) throw ValidationError("max_rounds must be >= 1");
  if (!(l2_t > 0.0)) throw ValidationError("L2 threshold must be > 0");
}

DistanceCache::DistanceCache(std::size_t ref_idx, std::span<const TransformedWindow> all)
    : ref_idx_(ref_idx), all_(all), dist_(all.size(), 0.0), known_(all.size(), false) {
  if (ref_idx >= all.size()) throw ValidationError("reference window out of range");
}

double DistanceCache::operator()(std::size_t idx) {
  if (!known_[idx]) {
    dist_[idx] = l2_distance(all_[ref_idx_], all_[idx]);
    known_[idx] = true;
    ++evaluations_;
  }
  return dist_[idx];
}

std::vector<Neighbor> DistanceCache::evaluated() const {
  std::vector<Neighbor> out;
  out.reserve(evaluations_);
  for (std::size_t j = 0; j < dist_.size(); ++j)
    if (known_[j]) out.push_back({j, dist_[j]});
  std::sort(out.begin(), out.end(), closer);
  return out;
}

void evaluate(Chromosome& chrom, DistanceCache& cache) {
  chrom.dists.resize(chrom.genes.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < chrom.genes.size(); ++k) {
    chrom.dists[k] = cache(chrom.genes[k]);
    sum += chrom.dists[k];
  }
  chrom.fitness = sum / static_cast<double>(chrom.genes.size());
}

double fitness(const Chromosome& chrom, DistanceCache& cache) {
  double sum = 0.0;
  for (std::size_t g : chrom.genes) sum += cache(g);
  return sum / static_cast<double>(chrom.genes.size());
}

namespace {

bool contains(std::span<const std::size_t> genes, std::size_t value) {
  return std::find(genes.begin(), genes.end(), value) != genes.end();
}

// Draw from [0, n_w) excluding every value currently in genes.
std::size_t draw_absent(std::span<const std::size_t> genes, std::size_t n_w, Rng& rng) {
  for (;;) {
    const std::size_t v = rng.uniform_index(n_w);
    if (!contains(genes, v)) return v;
  }
}

}  // namespace

std::vector<Chromosome> init_population(const GaParams& p, DistanceCache& cache, Rng& rng) {
  const std::size_t n_w = cache.n_w();
  if (p.n_c > n_w) {
    throw ValidationError("cannot draw " + std::to_string(p.n_c) + " distinct genes from " +
                          std::to_string(n_w) + " windows");
  }
  std::vector<Chromosome> population(p.n_p);
  for (auto& chrom : population) {
    chrom.genes.reserve(p.n_c);
    while (chrom.genes.size() < p.n_c) {
      const std::size_t v = rng.uniform_index(n_w);
      if (!contains(chrom.genes, v)) chrom.genes.push_back(v);
    }
    evaluate(chrom, cache);
  }
  return population;
}

std::vector<Chromosome> select_parents(std::span<const Chromosome> population) {
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return population[a].fitness < population[b].fitness;
  });
  std::vector<Chromosome> parents;
  parents.reserve(population.size() / 2);
  for (std::size_t i = 0; i < population.size() / 2; ++i) parents.push_back(population[order[i]]);
  return parents;
}

std::vector<std::size_t> splice_genes(std::span<const std::size_t> pa, std::span<const std::size_t> pb,
                                      std::size_t c_p1, std::size_t c_p2) {
  std::vector<std::size_t> child(pa.begin(), pa.end());
  for (std::size_t k = c_p1; k <= c_p2 && k < child.size(); ++k) child[k] = pb[k];
  return child;
}

Chromosome crossover(const Chromosome& pa, const Chromosome& pb, const GaParams& p, std::size_t n_w,
                     Rng& rng) {
  Chromosome child;
  child.genes = splice_genes(pa.genes, pb.genes, p.c_p1, p.c_p2);
  for (std::size_t k = 1; k < child.genes.size(); ++k) {
    const std::span<const std::size_t> earlier(child.genes.data(), k);
    if (contains(earlier, child.genes[k])) child.genes[k] = draw_absent(child.genes, n_w, rng);
  }
  return child;
}

std::vector<bool> mutation_mask(const Chromosome& child, double l2_t) {
  std::vector<bool> mask(child.dists.size(), false);
  bool any = false;
  for (std::size_t k = 0; k < child.dists.size(); ++k) {
    if (child.dists[k] >= l2_t) {
      mask[k] = true;
      any = true;
    }
  }
  if (!any && !child.dists.empty()) {
    const auto farthest = std::max_element(child.dists.begin(), child.dists.end());
    mask[static_cast<std::size_t>(farthest - child.dists.begin())] = true;
  }
  return mask;
}

Chromosome mutate(const Chromosome& child, const std::vector<bool>& mask, DistanceCache& cache,
                  Rng& rng) {
  Chromosome out = child;
  const std::size_t n_w = cache.n_w();
  if (out.genes.size() < n_w) {
    for (std::size_t k = 0; k < out.genes.size(); ++k) {
      if (mask[k]) out.genes[k] = draw_absent(out.genes, n_w, rng);
    }
  }
  evaluate(out, cache);
  return out;
}

BestSet update_best_set(const BestSet& best, std::span<const Chromosome> population, double l2_t) {
  BestSet out = best;
  std::vector<Neighbor> pool = best.members;
  for (const auto& chrom : population) {
    for (std::size_t k = 0; k < chrom.genes.size(); ++k) {
      if (chrom.dists[k] < l2_t) pool.push_back({chrom.genes[k], chrom.dists[k]});
    }
  }
  std::sort(pool.begin(), pool.end(), closer);
  out.members.clear();
  for (const auto& cand : pool) {
    if (out.members.size() >= out.capacity) break;
    const bool seen = std::any_of(out.members.begin(), out.members.end(),
                                  [&](const Neighbor& m) { return m.index == cand.index; });
    if (!seen) out.members.push_back(cand);
  }
  return out;
}

GaResult ga_select(std::size_t ref_idx, std::span<const TransformedWindow> all, const GaParams& p,
                   const GaObserver& observer) {
  p.validate(all.size());
  DistanceCache cache(ref_idx, all);
  Rng rng(mix_seed(p.seed, ref_idx));
  const std::size_t half = p.n_p / 2;

  std::vector<Chromosome> population = init_population(p, cache, rng);
  GaResult result;
  result.best_initial_fitness = std::numeric_limits<double>::infinity();
  for (const auto& c : population)
    result.best_initial_fitness = std::min(result.best_initial_fitness, c.fitness);

  BestSet best;
  best.ref_idx = ref_idx;
  best.capacity = p.n_c;
  best = update_best_set(best, population, p.l2_t);

  std::vector<Chromosome> pre_mutation(half);
  std::vector<std::vector<bool>> masks(half);
  for (std::size_t round = 1; round <= p.max_rounds; ++round) {
    for (std::size_t gen = 1; gen <= p.g_max; ++gen) {
      std::vector<Chromosome> next = select_parents(population);
      for (std::size_t j = 0; j < half; ++j) {
        Chromosome child = crossover(next[j], next[(j + 1) % half], p, cache.n_w(), rng);
        evaluate(child, cache);
        masks[j] = mutation_mask(child, p.l2_t);
        pre_mutation[j] = child;
        next.push_back(mutate(child, masks[j], cache, rng));
      }
      population = std::move(next);
      // Children are offered before mutation as well, so every evaluated gene
      // has been seen by the archive.
      best = update_best_set(best, pre_mutation, p.l2_t);
      best = update_best_set(best, population, p.l2_t);
      ++result.generations;

      if (observer) {
        GaGeneration view;
        view.ref_idx = ref_idx;
        view.round = round;
        view.generation = gen;
        view.population = population;
        view.children_before_mutation = pre_mutation;
        view.masks = masks;
        view.best = &best;
        view.distance_evals = cache.evaluations();
        observer(view);
      }
    }
    result.rounds = round;
    if (best.full()) break;
  }

  // Every evaluated gene under l2_t is already archived, so the fill only
  // appends windows at or beyond l2_t and the order is preserved.
  if (!best.full()) {
    for (const auto& cand : cache.evaluated()) {
      if (best.full()) break;
      const bool seen = std::any_of(best.members.begin(), best.members.end(),
                                    [&](const Neighbor& m) { return m.index == cand.index; });
      if (seen) continue;
      best.members.push_back(cand);
      ++best.fallback_count;
    }
  }

  result.selection.ref_idx = ref_idx;
  result.selection.members = best.members;
  result.selection.distance_evals = cache.evaluations();
  result.selection.fallback_count = best.fallback_count;
  result.archive = std::move(best);
  return result;
}

}  // namespace ghmdenoise

namespace ghmdenoise {

GaTraceRecord make_trace_record(const GaGeneration& view) {
  GaTraceRecord rec;
  rec.ref_idx = view.ref_idx;
  rec.round = view.round;
  rec.generation = view.generation;
  rec.best_fitness = std::numeric_limits<double>::infinity();
  for (const auto& c : view.population) rec.best_fitness = std::min(rec.best_fitness, c.fitness);
  if (view.best != nullptr) {
    rec.archive_size = view.best->members.size();
    double sum = 0.0;
    for (const auto& m : view.best->members) sum += m.distance;
    rec.archive_mean = rec.archive_size > 0 ? sum / static_cast<double>(rec.archive_size) : 0.0;
  }
  std::size_t marked = 0;
  std::size_t genes = 0;
  for (const auto& mask : view.masks) {
    marked += static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
    genes += mask.size();
  }
  rec.mutation_rate = genes > 0 ? static_cast<double>(marked) / static_cast<double>(genes) : 0.0;
  rec.distance_evals = view.distance_evals;
  return rec;
}

}  // namespace ghmdenoise
