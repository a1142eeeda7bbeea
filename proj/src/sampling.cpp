#include "godet/sampling.hpp"

#include <algorithm>

#include "godet/rng.hpp"

namespace godet {

std::vector<Batch> node_batches(std::size_t num_nodes, std::size_t batch_size, std::uint64_t seed,
                                std::size_t epoch) {
  if (batch_size < 1) throw ContractError("batch_size must be >= 1");
  std::vector<std::size_t> perm(num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i) perm[i] = i;

  // Per-epoch reshuffle on an independent stream so one seed reproduces
  // the full run.
  Pcg32 rng(seed, 0x9e3779b97f4a7c15ULL ^ epoch);
  for (std::size_t i = num_nodes; i > 1; --i) {
    std::size_t j = rng.next_below(static_cast<std::uint32_t>(i));
    std::swap(perm[i - 1], perm[j]);
  }

  std::vector<Batch> batches;
  for (std::size_t start = 0; start < num_nodes; start += batch_size) {
    Batch b;
    std::size_t end = std::min(start + batch_size, num_nodes);
    b.nodes.assign(perm.begin() + static_cast<std::ptrdiff_t>(start),
                   perm.begin() + static_cast<std::ptrdiff_t>(end));
    // Ascending ids inside a batch keep local CSR ordering and make the
    // single-batch case identical to the full graph.
    std::sort(b.nodes.begin(), b.nodes.end());
    batches.push_back(std::move(b));
  }
  return batches;
}

Graph induced_subgraph(const Graph& g, const std::vector<std::size_t>& nodes) {
  std::vector<std::ptrdiff_t> global_to_local(g.num_nodes, -1);
  for (std::size_t l = 0; l < nodes.size(); ++l) global_to_local[nodes[l]] = static_cast<std::ptrdiff_t>(l);

  Graph sub;
  sub.num_nodes = nodes.size();
  sub.row_offsets.assign(nodes.size() + 1, 0);
  for (std::size_t l = 0; l < nodes.size(); ++l) {
    std::size_t u = nodes[l];
    for (std::size_t k = g.row_offsets[u]; k < g.row_offsets[u + 1]; ++k) {
      std::ptrdiff_t lv = global_to_local[g.col_indices[k]];
      if (lv >= 0) sub.col_indices.push_back(static_cast<std::size_t>(lv));
    }
    sub.row_offsets[l + 1] = sub.col_indices.size();
  }

  sub.features = Matrix(nodes.size(), g.features.cols());
  for (std::size_t l = 0; l < nodes.size(); ++l)
    for (std::size_t c = 0; c < g.features.cols(); ++c) sub.features(l, c) = g.features(nodes[l], c);

  if (g.labels) {
    std::vector<int> y(nodes.size());
    for (std::size_t l = 0; l < nodes.size(); ++l) y[l] = (*g.labels)[nodes[l]];
    sub.labels = std::move(y);
  }
  return sub;
}

}  // namespace godet
