#pragma once

#include <cstdint>
#include <vector>

#include "godet/graph.hpp"

namespace godet {

/// One mini-batch: the chosen global node ids (ascending) and, for GNN
/// paths, their induced subgraph in local coordinates.
struct Batch {
  std::vector<std::size_t> nodes;  // local index -> global id, ascending
};

/// Per-epoch batch plan: a seeded shuffle split into consecutive chunks
/// (last chunk possibly smaller). Each node appears in exactly one
/// batch. Node ids are sorted within each batch, so batch_size >= n
/// yields the identity batch.
std::vector<Batch> node_batches(std::size_t num_nodes, std::size_t batch_size, std::uint64_t seed,
                                std::size_t epoch);

/// Node-induced subgraph: keeps only edges with both ends in the batch;
/// features (and labels) sliced to the batch rows.
Graph induced_subgraph(const Graph& g, const std::vector<std::size_t>& nodes);

}  // namespace godet
