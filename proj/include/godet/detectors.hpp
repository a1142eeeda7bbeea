#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "godet/config.hpp"
#include "godet/graph.hpp"
#include "godet/layers.hpp"

namespace godet {

struct EpochTrace {
  std::size_t epoch;
  double loss;
  // Optional per-term breakdown (loss components, o-vector sums, ...).
  std::vector<std::pair<std::string, double>> terms;
};

void save_trace_csv(const std::vector<EpochTrace>& trace, const std::string& path);

/// What process_graph extracts for a given algorithm. Only the fields
/// the algorithm needs are populated.
struct ProcessedInputs {
  Matrix features;
  std::optional<CsrMatrix> norm_adj;          // gcnae, dominant, ocgnn
  std::optional<Matrix> dense_adj_target;     // dominant (self-loops on diagonal)
  std::optional<Matrix> dense_adj_rows;       // done (raw rows, no self-loops)
  std::optional<std::vector<std::vector<std::size_t>>> neighbors;  // done
};

ProcessedInputs process_graph(const Graph& g, Algorithm alg);

/// Trained weights plus the per-algorithm extras scoring needs.
struct FittedModel {
  Algorithm alg;
  std::vector<Network> nets;  // mlpae/gcnae: {enc, dec}; dominant: {enc, attr_dec};
                              // ocgnn: {enc}; done: {s_enc, s_dec, a_enc, a_dec}
  Matrix center;              // ocgnn: 1 x embed, frozen after init
  double radius_sq = 0.0;     // ocgnn
};

struct TrainResult {
  FittedModel model;
  std::vector<double> scores;      // final-weight scores on the full graph
  std::vector<EpochTrace> trace;
  double final_loss = 0.0;         // full-graph loss at final weights
};

/// Runs the algorithm's training loop and extracts per-node scores with
/// the final weights. Deterministic given (config, graph).
TrainResult train_detector(const Graph& g, const DetectorConfig& cfg);

/// Per-node scores for a fitted model on the full graph ("the higher,
/// the more outlying"). Same computation train_detector uses for its
/// final scores.
std::vector<double> score_nodes(const FittedModel& m, const Graph& g, const DetectorConfig& cfg);

/// DOMINANT score components (attribute error, structure error);
/// score = alpha * attr + (1 - alpha) * struct.
std::pair<std::vector<double>, std::vector<double>> dominant_score_components(
    const FittedModel& m, const Graph& g, const DetectorConfig& cfg);

/// Closed-form o update: each vector proportional to its per-node error,
/// normalized to sum to 1. Zero total error falls back to uniform.
std::vector<double> done_normalize_errors(const std::vector<double>& errors);

}  // namespace godet
