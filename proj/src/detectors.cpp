#include "godet/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>

#include "godet/adam.hpp"
#include "godet/sampling.hpp"

namespace godet {

void save_trace_csv(const std::vector<EpochTrace>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write trace csv: " + path);
  out << "epoch,loss\n";
  out.precision(17);
  for (const auto& t : trace) out << t.epoch << "," << t.loss << "\n";
}

namespace {

constexpr double kOFloor = 1e-6;
constexpr std::size_t kScoreChunk = 512;

/// Dense adjacency rows for the given nodes, full graph width.
Matrix adjacency_rows(const Graph& g, std::size_t first, std::size_t count, bool self_loops) {
  Matrix a(count, g.num_nodes);
  for (std::size_t r = 0; r < count; ++r) {
    std::size_t u = first + r;
    for (std::size_t k = g.row_offsets[u]; k < g.row_offsets[u + 1]; ++k) a(r, g.col_indices[k]) = 1.0;
    if (self_loops) a(r, u) = 1.0;
  }
  return a;
}

Matrix adjacency_rows_of(const Graph& g, const std::vector<std::size_t>& nodes, bool self_loops) {
  Matrix a(nodes.size(), g.num_nodes);
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    std::size_t u = nodes[r];
    for (std::size_t k = g.row_offsets[u]; k < g.row_offsets[u + 1]; ++k) a(r, g.col_indices[k]) = 1.0;
    if (self_loops) a(r, u) = 1.0;
  }
  return a;
}

// Value-only forward pass (no provenance). Uses the same kernels as the
// autodiff ops, so values are bitwise identical to a tensor forward.
Matrix net_forward_values(const Network& net, Matrix h, const CsrMatrix* adj = nullptr) {
  for (const auto& l : net.layers) {
    Matrix z = matmul(h, l.weight.value());
    if (l.spec.kind == LayerKind::gcn) {
      if (!adj) throw ContractError("gcn layer requires an adjacency operator");
      z = spmm(*adj, z);
    }
    for (std::size_t i = 0; i < z.rows(); ++i)
      for (std::size_t j = 0; j < z.cols(); ++j) z(i, j) += l.bias.value()(0, j);
    switch (l.spec.activation) {
      case Activation::none: break;
      case Activation::relu:
        for (double& e : z.data()) e = e > 0.0 ? e : 0.0;
        break;
      case Activation::sigmoid:
        for (double& e : z.data()) e = 1.0 / (1.0 + std::exp(-e));
        break;
      case Activation::tanh:
        for (double& e : z.data()) e = std::tanh(e);
        break;
    }
    h = std::move(z);
  }
  return h;
}

std::vector<double> row_l2_sq(const Matrix& a, const Matrix& b) {
  std::vector<double> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      double d = a(i, j) - b(i, j);
      s += d * d;
    }
    out[i] = s;
  }
  return out;
}

/// k-th smallest (1-indexed) with a float-noise guard on the index math.
std::size_t ceil_index(double fraction, std::size_t n) {
  double raw = fraction * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::min(std::max<std::size_t>(k, 0), n);
}

struct BatchCtx {
  const Graph& full;
  const Graph& graph;  // induced subgraph, or the full graph itself
  const std::vector<std::size_t>& nodes;
  bool is_full;
};

class DetectorTrainer {
 public:
  virtual ~DetectorTrainer() = default;
  virtual std::vector<Tensor> params() const = 0;
  virtual void epoch_start(std::size_t /*epoch*/) {}
  virtual Tensor batch_loss(const BatchCtx& bc) = 0;
  virtual void epoch_end(std::size_t /*epoch*/, EpochTrace& /*tr*/) {}
  virtual FittedModel model() const = 0;
};

// ---------------------------------------------------------------------
// MLPAE / GCNAE: plain reconstruction autoencoders.

class AutoencoderTrainer : public DetectorTrainer {
 public:
  AutoencoderTrainer(const Graph& g, const DetectorConfig& cfg, LayerKind kind) : kind_(kind) {
    Pcg32 rng(cfg.seed);
    std::size_t d = g.features.cols();
    auto [enc, dec] = build_autoencoder(
        encoder_specs(kind, d, cfg.hidden_dim, cfg.embed_dim),
        decoder_specs(kind, cfg.embed_dim, cfg.hidden_dim, d, Activation::none), rng);
    enc_ = std::move(enc);
    dec_ = std::move(dec);
  }

  std::vector<Tensor> params() const override {
    auto p = enc_.params();
    auto q = dec_.params();
    p.insert(p.end(), q.begin(), q.end());
    return p;
  }

  Tensor batch_loss(const BatchCtx& bc) override {
    Tensor x = Tensor::constant(bc.graph.features);
    Tensor xhat;
    if (kind_ == LayerKind::gcn) {
      CsrMatrix adj = gcn_normalize(bc.graph);
      xhat = dec_.forward(enc_.forward(x, &adj), &adj);
    } else {
      xhat = dec_.forward(enc_.forward(x));
    }
    return mean_all(row_sum(elementwise_square(elementwise_sub(x, xhat))));
  }

  FittedModel model() const override {
    FittedModel m;
    m.alg = kind_ == LayerKind::gcn ? Algorithm::gcnae : Algorithm::mlpae;
    m.nets = {enc_, dec_};
    return m;
  }

 private:
  LayerKind kind_;
  Network enc_, dec_;
};

// ---------------------------------------------------------------------
// DOMINANT: shared GCN encoder, attribute decoder plus inner-product
// structure decoder; targets carry self-loops on the diagonal.

class DominantTrainer : public DetectorTrainer {
 public:
  DominantTrainer(const Graph& g, const DetectorConfig& cfg) : alpha_(cfg.alpha) {
    Pcg32 rng(cfg.seed);
    std::size_t d = g.features.cols();
    auto [enc, dec] = build_autoencoder(
        encoder_specs(LayerKind::gcn, d, cfg.hidden_dim, cfg.embed_dim),
        decoder_specs(LayerKind::gcn, cfg.embed_dim, cfg.hidden_dim, d, Activation::none), rng);
    enc_ = std::move(enc);
    attr_dec_ = std::move(dec);
  }

  std::vector<Tensor> params() const override {
    auto p = enc_.params();
    auto q = attr_dec_.params();
    p.insert(p.end(), q.begin(), q.end());
    return p;
  }

  Tensor batch_loss(const BatchCtx& bc) override {
    double n = static_cast<double>(bc.graph.num_nodes);
    CsrMatrix adj = gcn_normalize(bc.graph);
    Tensor x = Tensor::constant(bc.graph.features);
    Tensor z = enc_.forward(x, &adj);
    Tensor xhat = attr_dec_.forward(z, &adj);
    Tensor arec = sigmoid(matmul_nt(z, z));
    Tensor target = Tensor::constant(bc.graph.dense_adjacency(/*self_loops=*/true));
    Tensor attr_term = scalar_mul(frobenius_sq(elementwise_sub(x, xhat)), alpha_ / n);
    Tensor struct_term = scalar_mul(frobenius_sq(elementwise_sub(target, arec)), (1.0 - alpha_) / n);
    return elementwise_add(attr_term, struct_term);
  }

  FittedModel model() const override {
    FittedModel m;
    m.alg = Algorithm::dominant;
    m.nets = {enc_, attr_dec_};
    return m;
  }

 private:
  double alpha_;
  Network enc_, attr_dec_;
};

// ---------------------------------------------------------------------
// OCGNN: one-class hypersphere on GCN embeddings. Center is the mean
// embedding at initialization, frozen; the squared radius is refreshed
// every radius_refresh epochs from the full-graph distance quantile.

class OcgnnTrainer : public DetectorTrainer {
 public:
  OcgnnTrainer(const Graph& g, const DetectorConfig& cfg)
      : g_(g), beta_(cfg.beta), refresh_every_(cfg.radius_refresh) {
    Pcg32 rng(cfg.seed);
    std::size_t d = g.features.cols();
    enc_ = build_network(encoder_specs(LayerKind::gcn, d, cfg.hidden_dim, cfg.embed_dim), rng);
    full_adj_ = gcn_normalize(g);

    Matrix z0 = net_forward_values(enc_, g.features, &full_adj_);
    center_ = Matrix(1, z0.cols());
    for (std::size_t j = 0; j < z0.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < z0.rows(); ++i) s += z0(i, j);
      center_(0, j) = s / static_cast<double>(z0.rows());
    }
    refresh_radius();
  }

  std::vector<Tensor> params() const override { return enc_.params(); }

  void epoch_start(std::size_t epoch) override {
    if (epoch % refresh_every_ == 0) refresh_radius();
  }

  Tensor batch_loss(const BatchCtx& bc) override {
    CsrMatrix adj = bc.is_full ? full_adj_ : gcn_normalize(bc.graph);
    Tensor x = Tensor::constant(bc.graph.features);
    Tensor z = enc_.forward(x, &adj);
    Matrix neg_center(1, center_.cols());
    for (std::size_t j = 0; j < center_.cols(); ++j) neg_center(0, j) = -center_(0, j);
    Tensor dist_sq = row_sum(elementwise_square(add_bias(z, Tensor::constant(neg_center))));
    Tensor hinge = relu(elementwise_add(
        dist_sq, Tensor::constant(Matrix(bc.graph.num_nodes, 1, -radius_sq_))));
    // mean_all already divides by the batch size, so 1/beta completes
    // the 1/(beta*n) slack weight.
    Tensor slack = scalar_mul(mean_all(hinge), 1.0 / beta_);
    return elementwise_add(Tensor::scalar(radius_sq_), slack);
  }

  void epoch_end(std::size_t, EpochTrace& tr) override {
    tr.terms.emplace_back("radius_sq", radius_sq_);
  }

  FittedModel model() const override {
    FittedModel m;
    m.alg = Algorithm::ocgnn;
    m.nets = {enc_};
    m.center = center_;
    m.radius_sq = radius_sq_;
    return m;
  }

 private:
  void refresh_radius() {
    Matrix z = net_forward_values(enc_, g_.features, &full_adj_);
    std::vector<double> d(z.rows());
    for (std::size_t i = 0; i < z.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < z.cols(); ++j) {
        double v = z(i, j) - center_(0, j);
        s += v * v;
      }
      d[i] = s;
    }
    std::sort(d.begin(), d.end());
    std::size_t n = d.size();
    std::size_t k_out = ceil_index(beta_, n);  // nodes allowed outside
    // (n - k_out)-th smallest squared distance, so exactly ceil(beta*n)
    // nodes sit strictly outside the sphere when distances are distinct.
    radius_sq_ = (n > k_out && n - k_out >= 1) ? d[n - k_out - 1] : 0.0;
  }

  const Graph& g_;
  double beta_;
  std::size_t refresh_every_;
  Network enc_;
  CsrMatrix full_adj_;
  Matrix center_;
  double radius_sq_ = 0.0;
};

// ---------------------------------------------------------------------
// DONE: twin dense autoencoders (structure rows, attributes) with
// homophily and cross-modal alignment terms, weighted by log(1/o).
// Network weights and o-vectors are updated in alternation; the o update
// is closed-form (errors normalized to sum 1) and depends only on the
// current weights.

struct DoneErrors {
  std::vector<double> structure;  // recon + homophily
  std::vector<double> attribute;  // recon + homophily
  std::vector<double> combined;   // cross-modal
};

DoneErrors done_full_errors(const Network& s_enc, const Network& s_dec, const Network& a_enc,
                            const Network& a_dec, const Graph& g) {
  std::size_t n = g.num_nodes;
  DoneErrors e{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};

  // Structure embeddings and reconstruction errors, row-chunked so the
  // dense n x n target is never materialized at once.
  Matrix hs(n, s_enc.layers.back().spec.out_dim);
  for (std::size_t start = 0; start < n; start += kScoreChunk) {
    std::size_t count = std::min(kScoreChunk, n - start);
    Matrix rows = adjacency_rows(g, start, count, false);
    Matrix h = net_forward_values(s_enc, rows);
    Matrix rec = net_forward_values(s_dec, h);
    auto err = row_l2_sq(rows, rec);
    for (std::size_t i = 0; i < count; ++i) {
      e.structure[start + i] = err[i];
      for (std::size_t j = 0; j < h.cols(); ++j) hs(start + i, j) = h(i, j);
    }
  }

  Matrix ha = net_forward_values(a_enc, g.features);
  Matrix xrec = net_forward_values(a_dec, ha);
  auto attr_err = row_l2_sq(g.features, xrec);

  CsrMatrix p = row_normalized_adjacency(g);
  Matrix hs_nbr = spmm(p, hs);
  Matrix ha_nbr = spmm(p, ha);
  for (std::size_t i = 0; i < n; ++i) {
    bool isolated = g.degree(i) == 0;
    double hom_s = 0.0, hom_a = 0.0, cross = 0.0;
    for (std::size_t j = 0; j < hs.cols(); ++j) {
      double ds = hs(i, j) - hs_nbr(i, j);
      double da = ha(i, j) - ha_nbr(i, j);
      double dc = hs(i, j) - ha(i, j);
      hom_s += ds * ds;
      hom_a += da * da;
      cross += dc * dc;
    }
    if (isolated) hom_s = hom_a = 0.0;  // no neighborhood, no homophily term
    e.structure[i] += hom_s;
    e.attribute[i] = attr_err[i] + hom_a;
    e.combined[i] = cross;
  }
  return e;
}

class DoneTrainer : public DetectorTrainer {
 public:
  DoneTrainer(const Graph& g, const DetectorConfig& cfg) : g_(g) {
    Pcg32 rng(cfg.seed);
    std::size_t n = g.num_nodes;
    std::size_t d = g.features.cols();
    auto [senc, sdec] = build_autoencoder(
        encoder_specs(LayerKind::dense, n, cfg.hidden_dim, cfg.embed_dim),
        decoder_specs(LayerKind::dense, cfg.embed_dim, cfg.hidden_dim, n, Activation::sigmoid), rng);
    auto [aenc, adec] = build_autoencoder(
        encoder_specs(LayerKind::dense, d, cfg.hidden_dim, cfg.embed_dim),
        decoder_specs(LayerKind::dense, cfg.embed_dim, cfg.hidden_dim, d, Activation::none), rng);
    s_enc_ = std::move(senc);
    s_dec_ = std::move(sdec);
    a_enc_ = std::move(aenc);
    a_dec_ = std::move(adec);
    o_s_.assign(n, 1.0 / static_cast<double>(n));
    o_a_ = o_s_;
    o_com_ = o_s_;
  }

  std::vector<Tensor> params() const override {
    std::vector<Tensor> p;
    for (const Network* net : {&s_enc_, &s_dec_, &a_enc_, &a_dec_}) {
      auto q = net->params();
      p.insert(p.end(), q.begin(), q.end());
    }
    return p;
  }

  Tensor batch_loss(const BatchCtx& bc) override {
    std::size_t nb = bc.nodes.size();
    Matrix w_s(nb, 1), w_a(nb, 1), w_com(nb, 1), w_s_hom(nb, 1), w_a_hom(nb, 1);
    for (std::size_t i = 0; i < nb; ++i) {
      std::size_t u = bc.nodes[i];
      double mask = bc.graph.degree(i) > 0 ? 1.0 : 0.0;
      w_s(i, 0) = std::log(1.0 / std::max(o_s_[u], kOFloor));
      w_a(i, 0) = std::log(1.0 / std::max(o_a_[u], kOFloor));
      w_com(i, 0) = std::log(1.0 / std::max(o_com_[u], kOFloor));
      w_s_hom(i, 0) = w_s(i, 0) * mask;
      w_a_hom(i, 0) = w_a(i, 0) * mask;
    }

    // Structure AE always sees full-width adjacency rows; the homophily
    // neighborhood is the batch-induced one.
    Tensor a_rows = Tensor::constant(adjacency_rows_of(bc.full, bc.nodes, false));
    Tensor hs = s_enc_.forward(a_rows);
    Tensor a_rec = s_dec_.forward(hs);
    Tensor x = Tensor::constant(bc.graph.features);
    Tensor ha = a_enc_.forward(x);
    Tensor x_rec = a_dec_.forward(ha);

    CsrMatrix p = row_normalized_adjacency(bc.graph);
    Tensor hs_diff = elementwise_sub(hs, spmm_ad(p, hs));
    Tensor ha_diff = elementwise_sub(ha, spmm_ad(p, ha));

    auto weighted_mean = [](const Tensor& rows_sq, const Matrix& w) {
      return mean_all(mul_const(rows_sq, w));
    };
    Tensor l1 = weighted_mean(row_sum(elementwise_square(elementwise_sub(a_rows, a_rec))), w_s);
    Tensor l2 = weighted_mean(row_sum(elementwise_square(elementwise_sub(x, x_rec))), w_a);
    Tensor l3 = weighted_mean(row_sum(elementwise_square(hs_diff)), w_s_hom);
    Tensor l4 = weighted_mean(row_sum(elementwise_square(ha_diff)), w_a_hom);
    Tensor l5 = weighted_mean(row_sum(elementwise_square(elementwise_sub(hs, ha))), w_com);
    return elementwise_add(elementwise_add(elementwise_add(l1, l2), elementwise_add(l3, l4)), l5);
  }

  void epoch_end(std::size_t, EpochTrace& tr) override {
    DoneErrors e = done_full_errors(s_enc_, s_dec_, a_enc_, a_dec_, g_);
    o_s_ = done_normalize_errors(e.structure);
    o_a_ = done_normalize_errors(e.attribute);
    o_com_ = done_normalize_errors(e.combined);
    tr.terms.emplace_back("o_s_sum", std::accumulate(o_s_.begin(), o_s_.end(), 0.0));
    tr.terms.emplace_back("o_a_sum", std::accumulate(o_a_.begin(), o_a_.end(), 0.0));
    tr.terms.emplace_back("o_com_sum", std::accumulate(o_com_.begin(), o_com_.end(), 0.0));
  }

  FittedModel model() const override {
    FittedModel m;
    m.alg = Algorithm::done;
    m.nets = {s_enc_, s_dec_, a_enc_, a_dec_};
    return m;
  }

 private:
  const Graph& g_;
  Network s_enc_, s_dec_, a_enc_, a_dec_;
  std::vector<double> o_s_, o_a_, o_com_;
};

std::unique_ptr<DetectorTrainer> make_trainer(const Graph& g, const DetectorConfig& cfg) {
  switch (cfg.algorithm) {
    case Algorithm::mlpae: return std::make_unique<AutoencoderTrainer>(g, cfg, LayerKind::dense);
    case Algorithm::gcnae: return std::make_unique<AutoencoderTrainer>(g, cfg, LayerKind::gcn);
    case Algorithm::dominant: return std::make_unique<DominantTrainer>(g, cfg);
    case Algorithm::ocgnn: return std::make_unique<OcgnnTrainer>(g, cfg);
    case Algorithm::done: return std::make_unique<DoneTrainer>(g, cfg);
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace

std::vector<double> done_normalize_errors(const std::vector<double>& errors) {
  double total = std::accumulate(errors.begin(), errors.end(), 0.0);
  std::vector<double> o(errors.size());
  if (total <= 0.0) {
    std::fill(o.begin(), o.end(), 1.0 / static_cast<double>(errors.size()));
    return o;
  }
  for (std::size_t i = 0; i < errors.size(); ++i) o[i] = errors[i] / total;
  return o;
}

ProcessedInputs process_graph(const Graph& g, Algorithm alg) {
  ProcessedInputs pi;
  pi.features = g.features;
  switch (alg) {
    case Algorithm::mlpae:
      break;
    case Algorithm::gcnae:
    case Algorithm::ocgnn:
      pi.norm_adj = gcn_normalize(g);
      break;
    case Algorithm::dominant:
      pi.norm_adj = gcn_normalize(g);
      pi.dense_adj_target = g.dense_adjacency(/*self_loops=*/true);
      break;
    case Algorithm::done: {
      pi.dense_adj_rows = g.dense_adjacency(false);
      std::vector<std::vector<std::size_t>> nbrs(g.num_nodes);
      for (std::size_t u = 0; u < g.num_nodes; ++u)
        nbrs[u].assign(g.col_indices.begin() + static_cast<std::ptrdiff_t>(g.row_offsets[u]),
                       g.col_indices.begin() + static_cast<std::ptrdiff_t>(g.row_offsets[u + 1]));
      pi.neighbors = std::move(nbrs);
      break;
    }
  }
  return pi;
}

TrainResult train_detector(const Graph& g, const DetectorConfig& cfg) {
  cfg.validate();
  if (g.num_nodes == 0) throw ContractError("cannot fit an empty graph");
  bool dense_target = cfg.algorithm == Algorithm::dominant || cfg.algorithm == Algorithm::done;
  if (dense_target && cfg.batch_size == 0 && g.num_nodes > kDenseTargetCap)
    throw ConfigError("graph exceeds the dense-target cap (" + std::to_string(kDenseTargetCap) +
                      " nodes); set batch_size to train " + algorithm_name(cfg.algorithm));

  auto trainer = make_trainer(g, cfg);
  AdamState adam(trainer->params(),
                 AdamConfig{cfg.learning_rate, 0.9, 0.999, 1e-8});

  std::vector<std::size_t> all_nodes(g.num_nodes);
  std::iota(all_nodes.begin(), all_nodes.end(), 0);
  BatchCtx full_ctx{g, g, all_nodes, true};

  std::vector<EpochTrace> trace;
  trace.reserve(cfg.epochs);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    trainer->epoch_start(epoch);
    double loss_sum = 0.0;
    std::size_t batch_count = 0;
    auto step = [&](const BatchCtx& ctx) {
      Tensor loss = trainer->batch_loss(ctx);
      double lv = loss.item();
      if (!std::isfinite(lv)) throw DivergedError("training diverged (non-finite loss)", epoch);
      adam.zero_grad();
      backward(loss);
      adam.step();
      loss_sum += lv;
      ++batch_count;
    };
    if (cfg.batch_size == 0) {
      step(full_ctx);
    } else {
      for (const Batch& b : node_batches(g.num_nodes, cfg.batch_size, cfg.seed, epoch)) {
        Graph sub = induced_subgraph(g, b.nodes);
        BatchCtx ctx{g, sub, b.nodes, false};
        step(ctx);
      }
    }
    EpochTrace tr{epoch, loss_sum / static_cast<double>(batch_count), {}};
    trainer->epoch_end(epoch, tr);
    trace.push_back(std::move(tr));
  }

  TrainResult result;
  result.model = trainer->model();
  result.trace = std::move(trace);
  result.final_loss = trainer->batch_loss(full_ctx).item();
  result.scores = score_nodes(result.model, g, cfg);
  return result;
}

namespace {

std::vector<double> recon_scores(const FittedModel& m, const Graph& g, const CsrMatrix* adj) {
  Matrix z = net_forward_values(m.nets[0], g.features, adj);
  Matrix xhat = net_forward_values(m.nets[1], z, adj);
  auto sq = row_l2_sq(g.features, xhat);
  for (double& v : sq) v = std::sqrt(v);
  return sq;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> dominant_score_components(
    const FittedModel& m, const Graph& g, const DetectorConfig& cfg) {
  (void)cfg;
  CsrMatrix adj = gcn_normalize(g);
  Matrix z = net_forward_values(m.nets[0], g.features, &adj);
  Matrix xhat = net_forward_values(m.nets[1], z, &adj);
  std::vector<double> attr = row_l2_sq(g.features, xhat);
  for (double& v : attr) v = std::sqrt(v);

  std::size_t n = g.num_nodes;
  std::vector<double> structural(n);
  for (std::size_t start = 0; start < n; start += kScoreChunk) {
    std::size_t count = std::min(kScoreChunk, n - start);
    Matrix target = adjacency_rows(g, start, count, /*self_loops=*/true);
    for (std::size_t r = 0; r < count; ++r) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < z.cols(); ++k) dot += z(start + r, k) * z(j, k);
        double rec = 1.0 / (1.0 + std::exp(-dot));
        double d = target(r, j) - rec;
        s += d * d;
      }
      structural[start + r] = std::sqrt(s);
    }
  }
  return {std::move(attr), std::move(structural)};
}

std::vector<double> score_nodes(const FittedModel& m, const Graph& g, const DetectorConfig& cfg) {
  switch (m.alg) {
    case Algorithm::mlpae:
      return recon_scores(m, g, nullptr);
    case Algorithm::gcnae: {
      CsrMatrix adj = gcn_normalize(g);
      return recon_scores(m, g, &adj);
    }
    case Algorithm::dominant: {
      auto [attr, structural] = dominant_score_components(m, g, cfg);
      std::vector<double> s(attr.size());
      for (std::size_t i = 0; i < s.size(); ++i)
        s[i] = cfg.alpha * attr[i] + (1.0 - cfg.alpha) * structural[i];
      return s;
    }
    case Algorithm::ocgnn: {
      CsrMatrix adj = gcn_normalize(g);
      Matrix z = net_forward_values(m.nets[0], g.features, &adj);
      std::vector<double> s(z.rows());
      for (std::size_t i = 0; i < z.rows(); ++i) {
        double d = 0.0;
        for (std::size_t j = 0; j < z.cols(); ++j) {
          double v = z(i, j) - m.center(0, j);
          d += v * v;
        }
        s[i] = d - m.radius_sq;
      }
      return s;
    }
    case Algorithm::done: {
      DoneErrors e = done_full_errors(m.nets[0], m.nets[1], m.nets[2], m.nets[3], g);
      auto os = done_normalize_errors(e.structure);
      auto oa = done_normalize_errors(e.attribute);
      auto oc = done_normalize_errors(e.combined);
      std::vector<double> s(os.size());
      for (std::size_t i = 0; i < s.size(); ++i) s[i] = (os[i] + oa[i] + oc[i]) / 3.0;
      return s;
    }
  }
  throw ConfigError("unknown algorithm");
}

}  // namespace godet
