#include "godet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace godet {

bool Graph::has_edge(std::size_t u, std::size_t v) const {
  auto begin = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[u]);
  auto end = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[u + 1]);
  return std::binary_search(begin, end, v);
}

Matrix Graph::dense_adjacency(bool self_loops) const {
  Matrix a(num_nodes, num_nodes);
  for (std::size_t i = 0; i < num_nodes; ++i) {
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) a(i, col_indices[k]) = 1.0;
    if (self_loops) a(i, i) = 1.0;
  }
  return a;
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  CsrMatrix m;
  m.n = n;
  m.row_offsets.resize(n + 1);
  m.col_indices.resize(n);
  m.values.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    m.row_offsets[i] = i;
    m.col_indices[i] = i;
  }
  m.row_offsets[n] = n;
  return m;
}

Matrix CsrMatrix::to_dense() const {
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      d(i, col_indices[k]) = values[k];
  return d;
}

Graph graph_from_edges(std::size_t num_nodes,
                       const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::set<std::pair<std::size_t, std::size_t>> dir;
  for (auto [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes)
      throw ContractError("edge endpoint " + std::to_string(std::max(u, v)) +
                          " >= num_nodes " + std::to_string(num_nodes));
    if (u == v) continue;  // self-loops stripped
    dir.emplace(u, v);
    dir.emplace(v, u);
  }
  Graph g;
  g.num_nodes = num_nodes;
  g.row_offsets.assign(num_nodes + 1, 0);
  g.col_indices.reserve(dir.size());
  for (auto [u, v] : dir) {
    g.row_offsets[u + 1]++;
    g.col_indices.push_back(v);
  }
  for (std::size_t i = 0; i < num_nodes; ++i) g.row_offsets[i + 1] += g.row_offsets[i];
  return g;
}

namespace {

Matrix one_hot_features(std::size_t n, std::size_t dim) {
  Matrix f(n, dim);
  for (std::size_t i = 0; i < n; ++i) f(i, i % dim) = 1.0;
  return f;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_edge_lines(std::istream& in,
                                                                  std::size_t& max_id) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::string line;
  std::size_t lineno = 0;
  max_id = 0;
  while (std::getline(in, line)) {
    ++lineno;
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue;  // blank line
    if (!(ls >> v) || u < 0 || v < 0) throw ParseError("malformed edge line", lineno);
    std::string rest;
    if (ls >> rest) throw ParseError("trailing tokens on edge line", lineno);
    edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
    max_id = std::max({max_id, static_cast<std::size_t>(u), static_cast<std::size_t>(v)});
  }
  return edges;
}

}  // namespace

Graph load_edge_list(const std::string& path, const std::optional<std::string>& features_path,
                     const std::optional<std::string>& labels_path,
                     std::optional<std::size_t> num_features) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open edge list: " + path);
  std::size_t max_id = 0;
  auto edges = parse_edge_lines(in, max_id);

  Matrix features;
  std::size_t declared_nodes = edges.empty() ? 0 : max_id + 1;
  if (features_path) {
    std::ifstream fin(*features_path);
    if (!fin) throw IoError("cannot open feature file: " + *features_path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(fin, line)) {
      ++lineno;
      std::istringstream ls(line);
      std::vector<double> row;
      double x;
      while (ls >> x) row.push_back(x);
      if (row.empty()) continue;
      if (!rows.empty() && row.size() != rows.front().size())
        throw ParseError("inconsistent feature width", lineno);
      rows.push_back(std::move(row));
    }
    if (!edges.empty() && max_id >= rows.size())
      throw ContractError("edge references node " + std::to_string(max_id) + " but feature file has " +
                          std::to_string(rows.size()) + " rows");
    declared_nodes = std::max(declared_nodes, rows.size());
    features = Matrix(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < rows[i].size(); ++j) features(i, j) = rows[i][j];
  }

  Graph g = graph_from_edges(declared_nodes, edges);
  if (features_path) {
    g.features = std::move(features);
  } else {
    std::size_t dim = num_features.value_or(std::min(g.num_nodes, kOneHotFeatureCap));
    g.features = one_hot_features(g.num_nodes, std::max<std::size_t>(dim, 1));
  }
  if (labels_path) {
    auto y = load_labels(*labels_path);
    if (y.size() != g.num_nodes)
      throw ContractError("label file has " + std::to_string(y.size()) + " entries for " +
                          std::to_string(g.num_nodes) + " nodes");
    g.labels = std::move(y);
  }
  return g;
}

Graph load_graph_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph json: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid graph json: ") + e.what(), 0);
  }
  std::size_t n = j.at("num_nodes").get<std::size_t>();
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& e : j.at("edges")) edges.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>());
  Graph g = graph_from_edges(n, edges);
  if (j.contains("features") && !j["features"].is_null()) {
    const auto& rows = j["features"];
    if (rows.size() != n) throw ContractError("features row count != num_nodes");
    std::size_t d = rows.empty() ? 0 : rows[0].size();
    g.features = Matrix(n, d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != d) throw ContractError("ragged feature rows");
      for (std::size_t k = 0; k < d; ++k) g.features(i, k) = rows[i][k].get<double>();
    }
  } else {
    g.features = one_hot_features(n, std::max<std::size_t>(std::min(n, kOneHotFeatureCap), 1));
  }
  if (j.contains("labels") && !j["labels"].is_null()) {
    std::vector<int> y = j["labels"].get<std::vector<int>>();
    if (y.size() != n) throw ContractError("labels length != num_nodes");
    g.labels = std::move(y);
  }
  return g;
}

void save_graph_json(const Graph& g, const std::string& path) {
  nlohmann::json j;
  j["num_nodes"] = g.num_nodes;
  auto edges = nlohmann::json::array();
  for (std::size_t u = 0; u < g.num_nodes; ++u)
    for (std::size_t k = g.row_offsets[u]; k < g.row_offsets[u + 1]; ++k)
      if (u < g.col_indices[k]) edges.push_back({u, g.col_indices[k]});
  j["edges"] = std::move(edges);
  auto feats = nlohmann::json::array();
  for (std::size_t i = 0; i < g.features.rows(); ++i) {
    auto row = nlohmann::json::array();
    for (std::size_t k = 0; k < g.features.cols(); ++k) row.push_back(g.features(i, k));
    feats.push_back(std::move(row));
  }
  j["features"] = std::move(feats);
  if (g.labels) j["labels"] = *g.labels;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write graph json: " + path);
  out << j.dump() << "\n";
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write edge list: " + path);
  for (std::size_t u = 0; u < g.num_nodes; ++u)
    for (std::size_t k = g.row_offsets[u]; k < g.row_offsets[u + 1]; ++k)
      if (u < g.col_indices[k]) out << u << " " << g.col_indices[k] << "\n";
}

void save_labels(const std::vector<int>& y, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write labels: " + path);
  for (int v : y) out << v << "\n";
}

std::vector<int> load_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open label file: " + path);
  std::vector<int> y;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    int v;
    if (!(ls >> v)) continue;
    if (v != 0 && v != 1) throw ParseError("label not in {0,1}", lineno);
    y.push_back(v);
  }
  return y;
}

CsrMatrix gcn_normalize(const Graph& g) {
  std::size_t n = g.num_nodes;
  std::vector<double> inv_sqrt_deg(n);
  for (std::size_t i = 0; i < n; ++i)
    inv_sqrt_deg[i] = 1.0 / std::sqrt(1.0 + static_cast<double>(g.degree(i)));

  CsrMatrix m;
  m.n = n;
  m.row_offsets.assign(n + 1, 0);
  m.col_indices.reserve(g.col_indices.size() + n);
  m.values.reserve(g.col_indices.size() + n);
  for (std::size_t i = 0; i < n; ++i) {
    bool self_done = false;
    auto push = [&](std::size_t j) {
      m.col_indices.push_back(j);
      m.values.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[j]);
    };
    for (std::size_t k = g.row_offsets[i]; k < g.row_offsets[i + 1]; ++k) {
      std::size_t j = g.col_indices[k];
      if (!self_done && j > i) {
        push(i);
        self_done = true;
      }
      push(j);
    }
    if (!self_done) push(i);
    m.row_offsets[i + 1] = m.col_indices.size();
  }
  return m;
}

CsrMatrix row_normalized_adjacency(const Graph& g) {
  CsrMatrix m;
  m.n = g.num_nodes;
  m.row_offsets = g.row_offsets;
  m.col_indices = g.col_indices;
  m.values.resize(g.col_indices.size());
  for (std::size_t i = 0; i < g.num_nodes; ++i) {
    std::size_t deg = g.degree(i);
    double w = deg ? 1.0 / static_cast<double>(deg) : 0.0;
    for (std::size_t k = g.row_offsets[i]; k < g.row_offsets[i + 1]; ++k) m.values[k] = w;
  }
  return m;
}

Matrix spmm(const CsrMatrix& adj, const Matrix& dense) {
  if (adj.n != dense.rows())
    throw ShapeError("spmm: adjacency is " + std::to_string(adj.n) + "x" + std::to_string(adj.n) +
                     ", dense has " + std::to_string(dense.rows()) + " rows");
  Matrix out(adj.n, dense.cols());
  for (std::size_t i = 0; i < adj.n; ++i) {
    double* oi = out.row_ptr(i);
    for (std::size_t k = adj.row_offsets[i]; k < adj.row_offsets[i + 1]; ++k) {
      double w = adj.values[k];
      const double* dj = dense.row_ptr(adj.col_indices[k]);
      for (std::size_t c = 0; c < dense.cols(); ++c) oi[c] += w * dj[c];
    }
  }
  return out;
}

Matrix spmm_transposed(const CsrMatrix& adj, const Matrix& grad) {
  if (adj.n != grad.rows())
    throw ShapeError("spmm_transposed: dimension mismatch");
  Matrix out(adj.n, grad.cols());
  for (std::size_t i = 0; i < adj.n; ++i) {
    const double* gi = grad.row_ptr(i);
    for (std::size_t k = adj.row_offsets[i]; k < adj.row_offsets[i + 1]; ++k) {
      double w = adj.values[k];
      double* oj = out.row_ptr(adj.col_indices[k]);
      for (std::size_t c = 0; c < grad.cols(); ++c) oj[c] += w * gi[c];
    }
  }
  return out;
}

}  // namespace godet
