#include "godet/inject.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "godet/rng.hpp"

namespace godet {

namespace {

std::vector<std::size_t> sample_distinct(std::size_t population, std::size_t count, Pcg32& rng) {
  std::vector<std::size_t> ids(population);
  for (std::size_t i = 0; i < population; ++i) ids[i] = i;
  for (std::size_t i = population; i > 1; --i) {
    std::size_t j = rng.next_below(static_cast<std::uint32_t>(i));
    std::swap(ids[i - 1], ids[j]);
  }
  ids.resize(count);
  return ids;
}

}  // namespace

InjectionResult gen_structural_outliers(const Graph& g, std::size_t clique_size,
                                        std::size_t clique_count, std::uint64_t seed) {
  if (clique_size < 2) throw ContractError("clique size must be >= 2");
  if (clique_size * clique_count > g.num_nodes)
    throw ContractError("clique_size * clique_count exceeds num_nodes");

  Pcg32 rng(seed);
  auto chosen = sample_distinct(g.num_nodes, clique_size * clique_count, rng);

  // Rebuild the edge set with all missing intra-group edges added.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < g.num_nodes; ++u)
    for (std::size_t k = g.row_offsets[u]; k < g.row_offsets[u + 1]; ++k)
      if (u < g.col_indices[k]) edges.emplace_back(u, g.col_indices[k]);
  for (std::size_t c = 0; c < clique_count; ++c)
    for (std::size_t a = 0; a < clique_size; ++a)
      for (std::size_t b = a + 1; b < clique_size; ++b)
        edges.emplace_back(chosen[c * clique_size + a], chosen[c * clique_size + b]);

  InjectionResult r;
  r.kind = InjectionKind::structural;
  r.graph = graph_from_edges(g.num_nodes, edges);
  r.graph.features = g.features;
  r.graph.labels = g.labels;
  r.y.assign(g.num_nodes, 0);
  for (std::size_t id : chosen) r.y[id] = 1;
  return r;
}

InjectionResult gen_attribute_outliers(const Graph& g, std::size_t target_count,
                                       std::size_t pool_size, std::uint64_t seed) {
  if (target_count > g.num_nodes) throw ContractError("target count exceeds num_nodes");
  if (pool_size < 1) throw ContractError("candidate pool size must be >= 1");

  Pcg32 rng(seed);
  auto targets = sample_distinct(g.num_nodes, target_count, rng);

  InjectionResult r;
  r.kind = InjectionKind::attribute;
  r.graph = g;
  r.y.assign(g.num_nodes, 0);

  const Matrix& original = g.features;  // distances use pre-injection features throughout
  for (std::size_t i : targets) {
    r.y[i] = 1;
    std::set<std::size_t> pool;
    if (pool_size >= g.num_nodes - 1) {
      for (std::size_t j = 0; j < g.num_nodes; ++j)
        if (j != i) pool.insert(j);
    } else {
      while (pool.size() < pool_size) {
        std::size_t j = rng.next_below(static_cast<std::uint32_t>(g.num_nodes));
        if (j != i) pool.insert(j);
      }
    }
    std::size_t best = *pool.begin();
    double best_dist = -1.0;
    for (std::size_t j : pool) {
      double d = 0.0;
      for (std::size_t c = 0; c < original.cols(); ++c) {
        double v = original(i, c) - original(j, c);
        d += v * v;
      }
      if (d > best_dist || (d == best_dist && j < best)) {
        best_dist = d;
        best = j;
      }
    }
    for (std::size_t c = 0; c < original.cols(); ++c) r.graph.features(i, c) = original(best, c);
  }
  return r;
}

}  // namespace godet
