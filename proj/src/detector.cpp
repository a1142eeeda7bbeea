#include "godet/detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace godet {

namespace calib {

double smoothed_cdf(const std::vector<double>& sorted_train, double s) {
  auto le = std::upper_bound(sorted_train.begin(), sorted_train.end(), s) - sorted_train.begin();
  return (1.0 + static_cast<double>(le)) / (static_cast<double>(sorted_train.size()) + 2.0);
}

double binomial_tail(std::size_t n, std::size_t t, double p) {
  if (t == 0) return 1.0;
  if (t > n) return 0.0;
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  long double lp = std::log(static_cast<long double>(p));
  long double lq = std::log(1.0L - static_cast<long double>(p));
  long double log_pmf = std::lgammal(static_cast<long double>(n) + 1.0L) -
                        std::lgammal(static_cast<long double>(t) + 1.0L) -
                        std::lgammal(static_cast<long double>(n - t) + 1.0L) +
                        static_cast<long double>(t) * lp + static_cast<long double>(n - t) * lq;
  long double pmf = std::exp(log_pmf);
  long double sum = 0.0L;
  for (std::size_t y = t;; ++y) {
    sum += pmf;
    if (y == n) break;
    pmf *= static_cast<long double>(n - y) / static_cast<long double>(y + 1) *
           (static_cast<long double>(p) / (1.0L - static_cast<long double>(p)));
  }
  return static_cast<double>(std::min(sum, 1.0L));
}

}  // namespace calib

namespace {

/// k = ceil(fraction * n) with a guard against float noise at integers.
std::size_t ceil_count(double fraction, std::size_t n) {
  double raw = fraction * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::min(k, n);
}

void check_fitted_graph(const FittedDetector& f, const Graph& g) {
  if (g.num_nodes != f.fitted_nodes || g.features.cols() != f.fitted_feature_dim)
    throw ContractError("detector is transductive: expected the fitted graph (" +
                        std::to_string(f.fitted_nodes) + " nodes, " +
                        std::to_string(f.fitted_feature_dim) + " features), got " +
                        std::to_string(g.num_nodes) + " nodes, " +
                        std::to_string(g.features.cols()) + " features");
}

}  // namespace

double threshold_from_sorted(const std::vector<double>& sorted_scores, double contamination) {
  if (sorted_scores.empty()) throw ContractError("threshold needs at least one score");
  std::size_t k = std::max<std::size_t>(ceil_count(1.0 - contamination, sorted_scores.size()), 1);
  return sorted_scores[k - 1];
}

FittedDetector fit(const DetectorConfig& cfg, const Graph& g) {
  TrainResult tr = train_detector(g, cfg);

  FittedDetector f;
  f.config = cfg;
  f.model = std::move(tr.model);
  f.train_scores = std::move(tr.scores);
  f.trace = std::move(tr.trace);
  f.final_loss = tr.final_loss;
  f.fitted_nodes = g.num_nodes;
  f.fitted_feature_dim = g.features.cols();

  f.sorted_train_scores = f.train_scores;
  std::sort(f.sorted_train_scores.begin(), f.sorted_train_scores.end());
  std::size_t n = f.train_scores.size();
  f.threshold = threshold_from_sorted(f.sorted_train_scores, cfg.contamination);

  double mean = std::accumulate(f.train_scores.begin(), f.train_scores.end(), 0.0) /
                static_cast<double>(n);
  double var = 0.0;
  for (double s : f.train_scores) var += (s - mean) * (s - mean);
  f.score_mean = mean;
  f.score_std = std::sqrt(var / static_cast<double>(n));
  return f;
}

std::vector<double> decision_function(const FittedDetector& f, const Graph& g) {
  check_fitted_graph(f, g);
  return score_nodes(f.model, g, f.config);
}

std::vector<int> predict(const FittedDetector& f, const Graph& g) {
  auto scores = decision_function(f, g);
  std::vector<int> labels(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) labels[i] = scores[i] > f.threshold ? 1 : 0;
  return labels;
}

std::vector<double> predict_proba(const FittedDetector& f, const Graph& g, ProbaMethod method,
                                  bool* degenerate) {
  auto scores = decision_function(f, g);
  std::vector<double> proba(scores.size());
  bool degen = false;
  if (method == ProbaMethod::linear) {
    double lo = f.sorted_train_scores.front();
    double hi = f.sorted_train_scores.back();
    if (hi <= lo) {
      degen = true;  // zero spread: all proba 0
    } else {
      for (std::size_t i = 0; i < scores.size(); ++i)
        proba[i] = std::clamp((scores[i] - lo) / (hi - lo), 0.0, 1.0);
    }
  } else {
    if (f.score_std <= 0.0) {
      degen = true;
    } else {
      for (std::size_t i = 0; i < scores.size(); ++i)
        proba[i] = std::max(0.0, std::erf((scores[i] - f.score_mean) /
                                          (f.score_std * std::sqrt(2.0))));
    }
  }
  if (degenerate) *degenerate = degen;
  return proba;
}

std::vector<double> predict_confidence(const FittedDetector& f, const Graph& g) {
  auto scores = decision_function(f, g);
  auto labels = predict(f, g);
  std::size_t n = f.train_scores.size();
  std::size_t t = ceil_count(1.0 - f.config.contamination, n);
  std::vector<double> conf(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    double p = calib::smoothed_cdf(f.sorted_train_scores, scores[i]);
    double outlier_side = calib::binomial_tail(n, t, p);
    conf[i] = labels[i] ? outlier_side : 1.0 - outlier_side;
  }
  return conf;
}

ScoreReport score_report(const FittedDetector& f, const Graph& g) {
  ScoreReport r;
  r.scores = decision_function(f, g);
  r.labels = predict(f, g);
  r.proba = predict_proba(f, g, f.config.proba_method, &r.degenerate_proba);
  r.confidence = predict_confidence(f, g);
  return r;
}

void save_score_report_csv(const ScoreReport& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write score report: " + path);
  out.precision(17);
  out << "node_id,score,label,proba,confidence\n";
  for (std::size_t i = 0; i < r.scores.size(); ++i)
    out << i << "," << r.scores[i] << "," << r.labels[i] << "," << r.proba[i] << ","
        << r.confidence[i] << "\n";
}

void save_score_report_json(const ScoreReport& r, const std::string& path) {
  nlohmann::json j;
  j["scores"] = r.scores;
  j["labels"] = r.labels;
  j["proba"] = r.proba;
  j["confidence"] = r.confidence;
  j["degenerate_proba"] = r.degenerate_proba;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write score report: " + path);
  out << j.dump() << "\n";
}

// ---------------------------------------------------------------------
// Versioned binary weight dump.

namespace {

constexpr std::uint32_t kModelMagic = 0x474f444dU;  // "GODM"
constexpr std::uint32_t kModelVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}
double get_f64(std::istream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

void put_matrix(std::ostream& out, const Matrix& m) {
  put_u64(out, m.rows());
  put_u64(out, m.cols());
  for (double v : m.data()) put_f64(out, v);
}

Matrix get_matrix(std::istream& in) {
  std::size_t r = get_u64(in), c = get_u64(in);
  Matrix m(r, c);
  for (double& v : m.data()) v = get_f64(in);
  return m;
}

}  // namespace

void save_model(const FittedDetector& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model: " + path);
  put_u64(out, kModelMagic);
  put_u64(out, kModelVersion);
  put_u64(out, static_cast<std::uint64_t>(f.model.alg));
  put_f64(out, f.config.contamination);
  put_f64(out, f.config.alpha);
  put_f64(out, f.config.beta);
  put_u64(out, static_cast<std::uint64_t>(f.config.proba_method));
  put_u64(out, f.fitted_nodes);
  put_u64(out, f.fitted_feature_dim);
  put_f64(out, f.threshold);
  put_f64(out, f.score_mean);
  put_f64(out, f.score_std);
  put_f64(out, f.model.radius_sq);
  put_matrix(out, f.model.center);
  put_u64(out, f.train_scores.size());
  for (double s : f.train_scores) put_f64(out, s);
  put_u64(out, f.model.nets.size());
  for (const auto& net : f.model.nets) {
    put_u64(out, net.layers.size());
    for (const auto& l : net.layers) {
      put_u64(out, static_cast<std::uint64_t>(l.spec.kind));
      put_u64(out, static_cast<std::uint64_t>(l.spec.activation));
      put_matrix(out, l.weight.value());
      put_matrix(out, l.bias.value());
    }
  }
  if (!out) throw IoError("short write saving model: " + path);
}

FittedDetector load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model: " + path);
  if (get_u64(in) != kModelMagic) throw ParseError("not a model file", 0);
  if (get_u64(in) != kModelVersion) throw ParseError("unsupported model version", 0);
  FittedDetector f;
  f.model.alg = static_cast<Algorithm>(get_u64(in));
  f.config.algorithm = f.model.alg;
  f.config.contamination = get_f64(in);
  f.config.alpha = get_f64(in);
  f.config.beta = get_f64(in);
  f.config.proba_method = static_cast<ProbaMethod>(get_u64(in));
  f.fitted_nodes = get_u64(in);
  f.fitted_feature_dim = get_u64(in);
  f.threshold = get_f64(in);
  f.score_mean = get_f64(in);
  f.score_std = get_f64(in);
  f.model.radius_sq = get_f64(in);
  f.model.center = get_matrix(in);
  f.train_scores.resize(get_u64(in));
  for (double& s : f.train_scores) s = get_f64(in);
  f.sorted_train_scores = f.train_scores;
  std::sort(f.sorted_train_scores.begin(), f.sorted_train_scores.end());
  std::size_t nnets = get_u64(in);
  for (std::size_t i = 0; i < nnets; ++i) {
    Network net;
    std::size_t nlayers = get_u64(in);
    for (std::size_t k = 0; k < nlayers; ++k) {
      Layer l;
      l.spec.kind = static_cast<LayerKind>(get_u64(in));
      l.spec.activation = static_cast<Activation>(get_u64(in));
      l.weight = Tensor::parameter(get_matrix(in));
      l.bias = Tensor::parameter(get_matrix(in));
      l.spec.in_dim = l.weight.value().rows();
      l.spec.out_dim = l.weight.value().cols();
      net.layers.push_back(std::move(l));
    }
    f.model.nets.push_back(std::move(net));
  }
  if (!in) throw ParseError("truncated model file", 0);
  return f;
}

}  // namespace godet
