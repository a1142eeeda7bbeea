#pragma once

#include <string>
#include <vector>

#include "godet/config.hpp"
#include "godet/detectors.hpp"
#include "godet/graph.hpp"

namespace godet {

/// Trained detector plus the train-score statistics prediction needs.
/// Transductive: scoring applies only to the fitted graph.
struct FittedDetector {
  DetectorConfig config;
  FittedModel model;
  std::vector<double> train_scores;
  std::vector<double> sorted_train_scores;  // ascending
  double threshold = 0.0;   // ceil((1-contamination)*n)-th smallest train score
  double score_mean = 0.0;
  double score_std = 0.0;   // population std
  std::vector<EpochTrace> trace;
  double final_loss = 0.0;
  std::size_t fitted_nodes = 0;
  std::size_t fitted_feature_dim = 0;
};

struct ScoreReport {
  std::vector<double> scores;
  std::vector<int> labels;        // 1 iff score > threshold
  std::vector<double> proba;      // [0,1]
  std::vector<double> confidence; // [0,1]
  bool degenerate_proba = false;  // zero train-score spread; all proba 0
};

/// The ceil((1 - contamination) * n)-th smallest score; prediction flags
/// scores strictly above it.
double threshold_from_sorted(const std::vector<double>& sorted_scores, double contamination);

FittedDetector fit(const DetectorConfig& cfg, const Graph& g);

/// Raw outlier scores with the trained weights. Equals train_scores when
/// g is the fitted graph (the only graph accepted).
std::vector<double> decision_function(const FittedDetector& f, const Graph& g);

/// label[i] = 1 iff decision_function[i] > threshold.
std::vector<int> predict(const FittedDetector& f, const Graph& g);

/// linear: (s - min)/(max - min) over train scores, clipped to [0,1];
/// unify: max(0, erf((s - mean)/(std * sqrt(2)))).
std::vector<double> predict_proba(const FittedDetector& f, const Graph& g, ProbaMethod method,
                                  bool* degenerate = nullptr);

/// Example-wise confidence that the binary prediction would persist
/// under resampling of the train scores (exact binomial tail).
std::vector<double> predict_confidence(const FittedDetector& f, const Graph& g);

ScoreReport score_report(const FittedDetector& f, const Graph& g);

void save_score_report_csv(const ScoreReport& r, const std::string& path);
void save_score_report_json(const ScoreReport& r, const std::string& path);

/// Versioned binary weight dump.
void save_model(const FittedDetector& f, const std::string& path);
FittedDetector load_model(const std::string& path);

// Calibration internals, exposed for direct testing.
namespace calib {
/// P(Y >= t) for Y ~ Binomial(n, p), exact summation.
double binomial_tail(std::size_t n, std::size_t t, double p);
/// Smoothed empirical CDF position (1 + #{train <= s}) / (n + 2).
double smoothed_cdf(const std::vector<double>& sorted_train, double s);
}  // namespace calib

}  // namespace godet
