#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fixtures.hpp"
#include "godet/detector.hpp"

using namespace godet;

namespace {

Network zero_dense_net(std::size_t in_dim, std::size_t out_dim) {
  Network net;
  Layer l;
  l.spec = {LayerKind::dense, in_dim, out_dim, Activation::none};
  l.weight = Tensor::parameter(Matrix(in_dim, out_dim, 0.0));
  l.bias = Tensor::parameter(Matrix(1, out_dim, 0.0));
  net.layers.push_back(std::move(l));
  return net;
}

// Detector with fully controlled scores: an all-zero mlpae reconstructs
// 0, so on 1-D nonnegative features the score of node i is feature(i,0).
struct Controlled {
  FittedDetector f;
  Graph g;
};

Controlled controlled_detector(const std::vector<double>& scores, double contamination) {
  Controlled c;
  c.g = graph_from_edges(scores.size(), {});
  c.g.features = Matrix(scores.size(), 1);
  for (std::size_t i = 0; i < scores.size(); ++i) c.g.features(i, 0) = scores[i];

  c.f.config.algorithm = Algorithm::mlpae;
  c.f.config.contamination = contamination;
  c.f.model.alg = Algorithm::mlpae;
  c.f.model.nets = {zero_dense_net(1, 1), zero_dense_net(1, 1)};
  c.f.train_scores = scores;
  c.f.sorted_train_scores = scores;
  std::sort(c.f.sorted_train_scores.begin(), c.f.sorted_train_scores.end());
  c.f.threshold = threshold_from_sorted(c.f.sorted_train_scores, contamination);
  double n = static_cast<double>(scores.size());
  c.f.score_mean = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
  double var = 0.0;
  for (double s : scores) var += (s - c.f.score_mean) * (s - c.f.score_mean);
  c.f.score_std = std::sqrt(var / n);
  c.f.fitted_nodes = scores.size();
  c.f.fitted_feature_dim = 1;
  return c;
}

// Exact binomial tail by long-double Pascal-triangle enumeration.
long double binomial_tail_oracle(std::size_t n, std::size_t t, long double p) {
  std::vector<long double> coef(n + 1, 0.0L);
  coef[0] = 1.0L;
  for (std::size_t row = 1; row <= n; ++row)
    for (std::size_t k = row; k > 0; --k) coef[k] += coef[k - 1];
  long double sum = 0.0L;
  for (std::size_t y = t; y <= n; ++y)
    sum += coef[y] * std::pow(p, static_cast<long double>(y)) *
           std::pow(1.0L - p, static_cast<long double>(n - y));
  return sum;
}

DetectorConfig quick(Algorithm alg, std::uint64_t seed = 0) {
  DetectorConfig cfg;
  cfg.algorithm = alg;
  cfg.epochs = 15;
  cfg.hidden_dim = 8;
  cfg.embed_dim = 4;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("process_graph extracts only what the algorithm needs") {
  Graph path = graph_from_edges(3, {{0, 1}, {1, 2}});
  path.features = Matrix(3, 2, 1.0);

  auto m = process_graph(path, Algorithm::mlpae);
  CHECK_FALSE(m.norm_adj.has_value());
  CHECK_FALSE(m.dense_adj_target.has_value());

  auto d = process_graph(path, Algorithm::dominant);
  REQUIRE(d.norm_adj.has_value());
  REQUIRE(d.dense_adj_target.has_value());
  // 4 directed edge entries off the diagonal; diagonal pinned to 1.
  std::size_t off_diag = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK((*d.dense_adj_target)(i, i) == 1.0);
    for (std::size_t j = 0; j < 3; ++j)
      if (i != j) off_diag += (*d.dense_adj_target)(i, j) == 1.0 ? 1 : 0;
  }
  CHECK(off_diag == 4);

  Graph edgeless = graph_from_edges(4, {});
  edgeless.features = Matrix(4, 2, 0.0);
  auto dn = process_graph(edgeless, Algorithm::done);
  REQUIRE(dn.neighbors.has_value());
  for (const auto& nb : *dn.neighbors) CHECK(nb.empty());
}

TEST_CASE("threshold rule: contamination 0.2 on scores 1..10 flags 9 and 10") {
  std::vector<double> scores(10);
  std::iota(scores.begin(), scores.end(), 1.0);
  auto c = controlled_detector(scores, 0.2);
  CHECK(c.f.threshold == 8.0);
  auto labels = predict(c.f, c.g);
  for (std::size_t i = 0; i < 10; ++i) CHECK(labels[i] == (scores[i] > 8.0 ? 1 : 0));
  CHECK(std::accumulate(labels.begin(), labels.end(), 0) == 2);
}

TEST_CASE("threshold rule: all-equal scores produce no outliers") {
  auto c = controlled_detector(std::vector<double>(6, 3.5), 0.2);
  auto labels = predict(c.f, c.g);
  for (int l : labels) CHECK(l == 0);  // strict inequality at the threshold
}

TEST_CASE("threshold rule: contamination 0.5 on [1, 2] flags the larger") {
  auto c = controlled_detector({1.0, 2.0}, 0.5);
  CHECK(c.f.threshold == 1.0);
  auto labels = predict(c.f, c.g);
  CHECK(labels[0] == 0);
  CHECK(labels[1] == 1);
}

TEST_CASE("linear proba: midpoint of train range maps to 0.5") {
  auto c = controlled_detector({0.0, 5.0, 10.0}, 0.2);
  auto proba = predict_proba(c.f, c.g, ProbaMethod::linear);
  CHECK(proba[0] == 0.0);
  CHECK(proba[1] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(proba[2] == 1.0);
}

TEST_CASE("unify proba: mean maps to 0, mean + std maps to erf(1/sqrt(2))") {
  // Scores symmetric around 4 with population std 2: {2, 4, 6} has
  // std sqrt(8/3); pick {2, 2, 6, 6} -> mean 4, std 2. s = 6 = mean + std.
  auto c = controlled_detector({2.0, 2.0, 6.0, 6.0}, 0.25);
  CHECK(c.f.score_mean == 4.0);
  CHECK(c.f.score_std == 2.0);
  auto proba = predict_proba(c.f, c.g, ProbaMethod::unify);
  CHECK(proba[0] == 0.0);  // erf negative, clamped
  // High-precision reference for erf(1/sqrt(2)) (standard normal: P(|Z|<1)).
  CHECK(proba[2] == doctest::Approx(0.6826894921370859).epsilon(1e-10));
}

TEST_CASE("degenerate spread: all proba 0 with the flag set") {
  auto c = controlled_detector(std::vector<double>(5, 1.0), 0.2);
  bool degen = false;
  auto lin = predict_proba(c.f, c.g, ProbaMethod::linear, &degen);
  CHECK(degen);
  for (double p : lin) CHECK(p == 0.0);
  degen = false;
  auto uni = predict_proba(c.f, c.g, ProbaMethod::unify, &degen);
  CHECK(degen);
  for (double p : uni) CHECK(p == 0.0);
}

TEST_CASE("proba methods are monotone in the score") {
  auto c = controlled_detector({0.3, 1.7, 0.9, 2.4, 0.1, 1.1, 3.0, 0.6}, 0.25);
  auto scores = decision_function(c.f, c.g);
  for (ProbaMethod m : {ProbaMethod::linear, ProbaMethod::unify}) {
    auto proba = predict_proba(c.f, c.g, m);
    for (std::size_t i = 0; i < scores.size(); ++i)
      for (std::size_t j = 0; j < scores.size(); ++j)
        if (scores[i] <= scores[j]) CHECK(proba[i] <= proba[j]);
  }
}

TEST_CASE("confidence: 4 train scores, gamma 0.25, top query -> 1125/1296") {
  CHECK(calib::smoothed_cdf({1, 2, 3, 4}, 4.0) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(calib::binomial_tail(4, 3, 5.0 / 6.0) ==
        doctest::Approx(1125.0 / 1296.0).epsilon(1e-12));

  auto c = controlled_detector({1.0, 2.0, 3.0, 4.0}, 0.25);
  auto conf = predict_confidence(c.f, c.g);
  // Node 3 scores 4 > threshold 3 -> outlier side C.
  CHECK(conf[3] == doctest::Approx(1125.0 / 1296.0).epsilon(1e-12));
  // Node 0 is far below: inlier confidence 1 - C = 1 - P(Y>=3), Y ~ B(4, 1/3).
  CHECK(conf[0] == doctest::Approx(1.0 - calib::binomial_tail(4, 3, 2.0 / 6.0)).epsilon(1e-12));
  CHECK(conf[0] > 0.85);
}

TEST_CASE("confidence: degenerate threshold index t = 0 gives C = 1") {
  CHECK(calib::binomial_tail(10, 0, 0.3) == 1.0);
}

TEST_CASE("binomial tail matches exact enumeration within 1e-12") {
  Pcg32 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 1 + rng.next_below(50);
    std::size_t t = rng.next_below(static_cast<std::uint32_t>(n + 2));
    double p = rng.next_double();
    double got = calib::binomial_tail(n, t, p);
    long double want = t > n ? 0.0L : binomial_tail_oracle(n, t, static_cast<long double>(p));
    REQUIRE(std::abs(got - static_cast<double>(want)) <= 1e-12);
  }
}

TEST_CASE("binomial tail matches a 10^6-trial Monte Carlo within 3 SE") {
  Pcg32 rng(77);
  for (auto [n, t, p] : {std::tuple<std::size_t, std::size_t, double>{20, 15, 0.6},
                         {50, 45, 0.9},
                         {8, 3, 0.25}}) {
    const int trials = 1000000;
    int hits = 0;
    for (int i = 0; i < trials; ++i) {
      std::size_t y = 0;
      for (std::size_t k = 0; k < n; ++k) y += rng.next_double() < p ? 1 : 0;
      hits += y >= t ? 1 : 0;
    }
    double est = static_cast<double>(hits) / trials;
    double exact = calib::binomial_tail(n, t, p);
    double se = std::sqrt(exact * (1.0 - exact) / trials);
    CHECK(std::abs(est - exact) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("outlier-side confidence is monotone in the score") {
  auto c = controlled_detector({0.5, 1.5, 2.5, 3.5, 4.5, 5.5}, 0.3);
  std::size_t n = 6;
  std::size_t t = 5;  // ceil(0.7 * 6) = 5
  double prev = -1.0;
  for (double s : {0.1, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0}) {
    double C = calib::binomial_tail(n, t, calib::smoothed_cdf(c.f.sorted_train_scores, s));
    CHECK(C >= prev);
    CHECK(C >= 0.0);
    CHECK(C <= 1.0);
    prev = C;
  }
}

TEST_CASE("fit: epochs 0 still yields a complete detector") {
  Graph g = fixtures::random_graph(12, 0.3, 3, 1);
  DetectorConfig cfg = quick(Algorithm::gcnae);
  cfg.epochs = 0;
  auto f = fit(cfg, g);
  CHECK(f.train_scores.size() == 12);
  CHECK(std::is_sorted(f.sorted_train_scores.begin(), f.sorted_train_scores.end()));
  CHECK(f.score_std >= 0.0);
  auto report = score_report(f, g);
  CHECK(report.scores.size() == 12);
}

TEST_CASE("fit is deterministic and decision_function returns train_scores") {
  Graph g = fixtures::random_graph(16, 0.25, 4, 3);
  for (Algorithm alg : {Algorithm::mlpae, Algorithm::gcnae, Algorithm::dominant, Algorithm::ocgnn,
                        Algorithm::done}) {
    CAPTURE(static_cast<int>(alg));
    auto f1 = fit(quick(alg, 5), g);
    auto f2 = fit(quick(alg, 5), g);
    CHECK(f1.train_scores == f2.train_scores);  // bitwise
    CHECK(decision_function(f1, g) == f1.train_scores);  // bitwise idempotence
    CHECK(f1.threshold == threshold_from_sorted(f1.sorted_train_scores, f1.config.contamination));
  }
}

TEST_CASE("fitted graph with an isolated node scores finite everywhere") {
  Graph g = fixtures::random_graph(10, 0.4, 3, 9);
  // Rebuild with node 10 isolated.
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t u = 0; u < 10; ++u)
    for (std::size_t e = g.row_offsets[u]; e < g.row_offsets[u + 1]; ++e)
      if (u < g.col_indices[e]) edges.emplace_back(u, g.col_indices[e]);
  Graph iso = graph_from_edges(11, edges);
  iso.features = Matrix(11, 3);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 3; ++j) iso.features(i, j) = g.features(i, j);
  for (std::size_t j = 0; j < 3; ++j) iso.features(10, j) = 0.25;

  for (Algorithm alg : {Algorithm::gcnae, Algorithm::dominant, Algorithm::ocgnn, Algorithm::done}) {
    CAPTURE(static_cast<int>(alg));
    auto f = fit(quick(alg, 2), iso);
    for (double s : decision_function(f, iso)) CHECK(std::isfinite(s));
  }
}

TEST_CASE("flag budget: distinct scores flag at most ceil(contamination * n)") {
  Graph g = fixtures::random_graph(20, 0.2, 4, 12);
  auto f = fit(quick(Algorithm::mlpae, 3), g);
  auto labels = predict(f, g);
  int flagged = std::accumulate(labels.begin(), labels.end(), 0);
  CHECK(flagged <= static_cast<int>(std::ceil(0.1 * 20)));
}

TEST_CASE("transductive guard rejects other graphs") {
  Graph g = fixtures::random_graph(10, 0.3, 3, 4);
  auto f = fit(quick(Algorithm::mlpae, 1), g);

  Graph more_nodes = fixtures::random_graph(11, 0.3, 3, 4);
  CHECK_THROWS_AS(decision_function(f, more_nodes), ContractError);

  Graph wrong_dim = fixtures::random_graph(10, 0.3, 4, 4);
  CHECK_THROWS_AS(decision_function(f, wrong_dim), ContractError);
}

TEST_CASE("model save/load round trip preserves scoring bitwise") {
  Graph g = fixtures::random_graph(14, 0.3, 4, 6);
  for (Algorithm alg : {Algorithm::mlpae, Algorithm::gcnae, Algorithm::dominant, Algorithm::ocgnn,
                        Algorithm::done}) {
    CAPTURE(static_cast<int>(alg));
    auto f = fit(quick(alg, 7), g);
    std::string path = "/tmp/godet_test_model.bin";
    save_model(f, path);
    auto back = load_model(path);
    CHECK(back.threshold == f.threshold);
    CHECK(back.score_mean == f.score_mean);
    CHECK(back.score_std == f.score_std);
    CHECK(back.train_scores == f.train_scores);
    CHECK(decision_function(back, g) == decision_function(f, g));  // bitwise
    CHECK(predict(back, g) == predict(f, g));
  }
}

TEST_CASE("score report serializes with all columns") {
  Graph g = fixtures::random_graph(8, 0.3, 3, 2);
  auto f = fit(quick(Algorithm::mlpae, 0), g);
  auto r = score_report(f, g);
  REQUIRE(r.scores.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(r.labels[i] == (r.scores[i] > f.threshold ? 1 : 0));
    CHECK(r.proba[i] >= 0.0);
    CHECK(r.proba[i] <= 1.0);
    CHECK(r.confidence[i] >= 0.0);
    CHECK(r.confidence[i] <= 1.0);
  }
  save_score_report_csv(r, "/tmp/godet_test_report.csv");
  save_score_report_json(r, "/tmp/godet_test_report.json");
  std::ifstream csv("/tmp/godet_test_report.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "node_id,score,label,proba,confidence");
}

TEST_CASE("config validation rejects out-of-range fields") {
  DetectorConfig cfg;
  cfg.contamination = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = DetectorConfig{};
  cfg.contamination = 0.6;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = DetectorConfig{};
  cfg.learning_rate = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = DetectorConfig{};
  cfg.alpha = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = DetectorConfig{};
  cfg.beta = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK_THROWS_AS(algorithm_from_name("unknown_alg"), ConfigError);
  CHECK(algorithm_from_name("dominant") == Algorithm::dominant);
}

TEST_CASE("empty graph is a contract error") {
  Graph g;
  CHECK_THROWS_AS(fit(quick(Algorithm::mlpae), g), ContractError);
}
