#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "godet/matrix.hpp"

namespace godet {

/// Undirected attributed graph. Adjacency is CSR over binary edges:
/// symmetric, no self-loops, column indices strictly ascending per row.
struct Graph {
  std::size_t num_nodes = 0;
  std::vector<std::size_t> row_offsets;  // size num_nodes + 1
  std::vector<std::size_t> col_indices;
  Matrix features;                       // num_nodes x feature_dim
  std::optional<std::vector<int>> labels;

  std::size_t num_edges() const { return col_indices.size() / 2; }
  std::size_t degree(std::size_t i) const { return row_offsets[i + 1] - row_offsets[i]; }
  bool has_edge(std::size_t u, std::size_t v) const;

  /// Dense binary adjacency, optionally with ones on the diagonal.
  Matrix dense_adjacency(bool self_loops = false) const;
};

/// General CSR matrix with values. Also the shape of the GCN-normalized
/// adjacency D^-1/2 (A+I) D^-1/2.
struct CsrMatrix {
  std::size_t n = 0;
  std::vector<std::size_t> row_offsets;
  std::vector<std::size_t> col_indices;
  std::vector<double> values;

  static CsrMatrix identity(std::size_t n);
  Matrix to_dense() const;
};

/// Builds a Graph from an undirected edge set. Symmetrizes, dedups and
/// strips self-loops. Node count is max(declared, max id + 1).
Graph graph_from_edges(std::size_t num_nodes, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

constexpr std::size_t kOneHotFeatureCap = 128;

/// Loads a whitespace/comma-separated `u v` edge list with optional
/// companion feature file (one row of reals per node) and label file
/// (one 0/1 per line). Without a feature file, nodes get one-hot
/// features of dimension min(num_nodes, kOneHotFeatureCap), overridable
/// through num_features.
Graph load_edge_list(const std::string& path,
                     const std::optional<std::string>& features_path = std::nullopt,
                     const std::optional<std::string>& labels_path = std::nullopt,
                     std::optional<std::size_t> num_features = std::nullopt);

/// JSON container: {"num_nodes": n, "edges": [[u,v],...],
/// "features": [[...],...], "labels": [...]}.
Graph load_graph_json(const std::string& path);
void save_graph_json(const Graph& g, const std::string& path);

/// One `u v` line per undirected edge, u < v.
void save_edge_list(const Graph& g, const std::string& path);

void save_labels(const std::vector<int>& y, const std::string& path);
std::vector<int> load_labels(const std::string& path);

/// A_hat = D^-1/2 (A+I) D^-1/2 with d_i = 1 + degree(i).
CsrMatrix gcn_normalize(const Graph& g);

/// Row-normalized adjacency (mean over neighbors); isolated nodes get
/// all-zero rows. Used by neighborhood-mean (homophily) terms.
CsrMatrix row_normalized_adjacency(const Graph& g);

/// Exact sparse-dense product with fixed ascending-column accumulation
/// order per row, so results are bitwise reproducible.
Matrix spmm(const CsrMatrix& adj, const Matrix& dense);

/// Gradient side of spmm: A^T * G, same determinism contract.
Matrix spmm_transposed(const CsrMatrix& adj, const Matrix& grad);

}  // namespace godet
