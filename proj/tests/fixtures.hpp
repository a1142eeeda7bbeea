#pragma once

// Shared test fixtures: random graphs for oracle comparisons and the
// seeded 300-node community benchmark with injected outliers.

#include <cmath>
#include <utility>
#include <vector>

#include "godet/graph.hpp"
#include "godet/inject.hpp"
#include "godet/rng.hpp"

namespace fixtures {

inline double gaussian(godet::Pcg32& rng) {
  // Box-Muller; discard the second deviate to keep the stream simple.
  double u1 = rng.next_double();
  double u2 = rng.next_double();
  while (u1 <= 0.0) u1 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline godet::Graph random_graph(std::size_t n, double edge_prob, std::size_t feat_dim,
                                 std::uint64_t seed) {
  godet::Pcg32 rng(seed);
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (rng.next_double() < edge_prob) edges.emplace_back(u, v);
  godet::Graph g = godet::graph_from_edges(n, edges);
  g.features = godet::Matrix(n, feat_dim);
  for (double& f : g.features.data()) f = 2.0 * rng.next_double() - 1.0;
  return g;
}

/// 300 nodes in 5 communities of 60 (intra edge prob 0.1, inter 0.01);
/// 16-dim Gaussian features around per-community means.
inline godet::Graph community_graph(std::uint64_t seed, std::size_t num_nodes = 300,
                                    std::size_t communities = 5, std::size_t feat_dim = 16,
                                    double intra_p = 0.1, double inter_p = 0.01,
                                    double mean_scale = 2.0, double noise_std = 1.0) {
  godet::Pcg32 rng(seed);
  std::size_t per = num_nodes / communities;
  std::vector<std::vector<double>> means(communities, std::vector<double>(feat_dim));
  for (auto& m : means)
    for (double& v : m) v = mean_scale * gaussian(rng);

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  auto community_of = [&](std::size_t u) { return std::min(u / per, communities - 1); };
  for (std::size_t u = 0; u < num_nodes; ++u)
    for (std::size_t v = u + 1; v < num_nodes; ++v) {
      double p = community_of(u) == community_of(v) ? intra_p : inter_p;
      if (rng.next_double() < p) edges.emplace_back(u, v);
    }

  godet::Graph g = godet::graph_from_edges(num_nodes, edges);
  g.features = godet::Matrix(num_nodes, feat_dim);
  for (std::size_t u = 0; u < num_nodes; ++u)
    for (std::size_t k = 0; k < feat_dim; ++k)
      g.features(u, k) = means[community_of(u)][k] + noise_std * gaussian(rng);
  return g;
}

struct BenchmarkFixture {
  godet::Graph graph;
  std::vector<int> y_union;      // structural + attribute targets
  std::vector<int> y_attribute;  // attribute targets only
};

/// Community graph with 15 structural (3 cliques of 5) and 15 attribute
/// (pool 50) injected outliers.  Tight feature noise (0.05) keeps the
/// community structure crisp so every algorithm family has a fair shot.
inline BenchmarkFixture benchmark_fixture(std::uint64_t seed) {
  BenchmarkFixture f;
  godet::Graph g = community_graph(seed, 300, 5, 16, 0.1, 0.01, 2.0, 0.05);
  auto st = godet::gen_structural_outliers(g, 5, 3, seed * 2 + 1);
  auto at = godet::gen_attribute_outliers(st.graph, 15, 50, seed * 2 + 2);
  f.graph = std::move(at.graph);
  f.y_attribute = at.y;
  f.y_union.resize(g.num_nodes);
  for (std::size_t i = 0; i < f.y_union.size(); ++i) f.y_union[i] = st.y[i] | at.y[i];
  return f;
}

}  // namespace fixtures
