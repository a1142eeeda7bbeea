#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "godet/detector.hpp"
#include "godet/inject.hpp"
#include "godet/metrics.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

/// Writes through a temp file and renames, so failures leave no partial
/// output at the destination.
void atomic_write(const std::string& path, const std::function<void(const std::string&)>& writer) {
  std::string tmp = path + ".tmp";
  try {
    writer(tmp);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw godet::IoError("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw godet::ConfigError("invalid json in " + path + ": " + e.what());
  }
  return j;
}

godet::DetectorConfig detector_config_from_json(const json& j) {
  godet::DetectorConfig cfg;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "algorithm") cfg.algorithm = godet::algorithm_from_name(value.get<std::string>());
      else if (key == "contamination") cfg.contamination = value.get<double>();
      else if (key == "epochs") cfg.epochs = value.get<std::size_t>();
      else if (key == "learning_rate") cfg.learning_rate = value.get<double>();
      else if (key == "hidden_dim") cfg.hidden_dim = value.get<std::size_t>();
      else if (key == "embed_dim") cfg.embed_dim = value.get<std::size_t>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else if (key == "alpha") cfg.alpha = value.get<double>();
      else if (key == "beta") cfg.beta = value.get<double>();
      else if (key == "radius_refresh") cfg.radius_refresh = value.get<std::size_t>();
      else if (key == "batch_size") cfg.batch_size = value.get<std::size_t>();
      else if (key == "proba_method") {
        std::string m = value.get<std::string>();
        if (m == "linear") cfg.proba_method = godet::ProbaMethod::linear;
        else if (m == "unify") cfg.proba_method = godet::ProbaMethod::unify;
        else throw godet::ConfigError("proba_method must be 'linear' or 'unify'");
      } else {
        throw godet::ConfigError("unknown detector config key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw godet::ConfigError("bad value for '" + key + "': " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

std::uint64_t fnv1a_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<double> read_scores_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw godet::IoError("cannot open scores csv: " + path);
  std::vector<double> scores;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 && line.rfind("node_id,", 0) == 0) continue;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    if (!std::getline(ls, cell, ',')) throw godet::ParseError("bad csv row", lineno);
    if (!std::getline(ls, cell, ',')) throw godet::ParseError("bad csv row", lineno);
    scores.push_back(std::stod(cell));
  }
  return scores;
}

// -------------------------------------------------------------------
// inject

struct InjectArgs {
  std::string graph_in, graph_out, labels_out, kind;
  std::size_t m = 5, n = 0, k = godet::kDefaultCandidatePool;
  std::uint64_t seed = 0;
};

int run_inject(const InjectArgs& a) {
  godet::Graph g = godet::load_graph_json(a.graph_in);
  godet::InjectionResult res;
  if (a.kind == "structural") {
    res = godet::gen_structural_outliers(g, a.m, a.n, a.seed);
  } else if (a.kind == "attribute") {
    res = godet::gen_attribute_outliers(g, a.n, a.k, a.seed);
  } else {
    throw godet::ConfigError("kind must be 'structural' or 'attribute'");
  }
  atomic_write(a.graph_out, [&](const std::string& p) { godet::save_graph_json(res.graph, p); });
  atomic_write(a.labels_out, [&](const std::string& p) { godet::save_labels(res.y, p); });
  return kExitOk;
}

// -------------------------------------------------------------------
// fit

struct FitArgs {
  std::string graph_in, config_path, scores_out, model_out, trace_out;
  bool verbose = false;
};

int run_fit(const FitArgs& a) {
  godet::DetectorConfig cfg = detector_config_from_json(load_json_file(a.config_path));
  godet::Graph g = godet::load_graph_json(a.graph_in);
  godet::FittedDetector f = godet::fit(cfg, g);
  if (a.verbose)
    for (const auto& t : f.trace) std::cerr << "epoch " << t.epoch << " loss " << t.loss << "\n";
  godet::ScoreReport report = godet::score_report(f, g);
  atomic_write(a.scores_out,
               [&](const std::string& p) { godet::save_score_report_csv(report, p); });
  if (!a.model_out.empty())
    atomic_write(a.model_out, [&](const std::string& p) { godet::save_model(f, p); });
  if (!a.trace_out.empty())
    atomic_write(a.trace_out, [&](const std::string& p) { godet::save_trace_csv(f.trace, p); });
  return kExitOk;
}

// -------------------------------------------------------------------
// eval

int run_eval(const std::string& scores_path, const std::string& labels_path,
             std::optional<std::size_t> k) {
  auto scores = read_scores_csv(scores_path);
  auto y = godet::load_labels(labels_path);
  if (y.size() != scores.size())
    throw godet::ContractError("scores and labels differ in length");
  godet::MetricReport r = godet::evaluate(y, scores, k);
  std::cout << godet::metric_report_json(r) << "\n";
  return kExitOk;
}

// -------------------------------------------------------------------
// pipeline

struct PipelineSpec {
  std::string dataset;
  std::string out_dir;
  json injection;     // optional: {"structural": {...}, "attribute": {...}}
  json detector;      // DetectorConfig fields
  std::optional<std::size_t> k;
  std::vector<std::uint64_t> seeds;
  std::string config_dump;
};

PipelineSpec parse_pipeline(const json& j) {
  PipelineSpec s;
  if (!j.contains("dataset")) throw godet::ConfigError("pipeline config needs 'dataset'");
  if (!j.contains("out_dir")) throw godet::ConfigError("pipeline config needs 'out_dir'");
  s.dataset = j["dataset"].get<std::string>();
  s.out_dir = j["out_dir"].get<std::string>();
  // Wall-clock seeding is not allowed: every run must name its seed.
  if (j.contains("seed")) s.seeds = {j["seed"].get<std::uint64_t>()};
  else if (j.contains("seeds")) s.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  else throw godet::ConfigError("pipeline config needs 'seed' (or 'seeds')");
  if (s.seeds.empty()) throw godet::ConfigError("'seeds' must be non-empty");
  s.injection = j.value("injection", json::object());
  s.detector = j.value("detector", json::object());
  if (j.contains("k")) s.k = j["k"].get<std::size_t>();
  s.config_dump = j.dump();
  return s;
}

int run_pipeline_once(const PipelineSpec& s, std::uint64_t seed, const fs::path& dir) {
  fs::create_directories(dir);
  godet::Graph g = godet::load_graph_json(s.dataset);

  std::vector<int> y(g.num_nodes, 0);
  if (s.injection.contains("structural")) {
    const auto& sj = s.injection["structural"];
    auto res = godet::gen_structural_outliers(g, sj.value("m", std::size_t{5}),
                                              sj.value("n", std::size_t{0}), seed);
    g = std::move(res.graph);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] |= res.y[i];
  }
  if (s.injection.contains("attribute")) {
    const auto& aj = s.injection["attribute"];
    auto res = godet::gen_attribute_outliers(
        g, aj.value("n", std::size_t{0}),
        aj.value("k", godet::kDefaultCandidatePool), seed + 1);
    g = std::move(res.graph);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] |= res.y[i];
  }

  godet::DetectorConfig cfg = detector_config_from_json(s.detector);
  cfg.seed = seed;

  atomic_write((dir / "graph.json").string(),
               [&](const std::string& p) { godet::save_graph_json(g, p); });
  atomic_write((dir / "labels.txt").string(),
               [&](const std::string& p) { godet::save_labels(y, p); });

  godet::FittedDetector f = godet::fit(cfg, g);
  godet::ScoreReport report = godet::score_report(f, g);
  atomic_write((dir / "scores.csv").string(),
               [&](const std::string& p) { godet::save_score_report_csv(report, p); });
  atomic_write((dir / "model.bin").string(),
               [&](const std::string& p) { godet::save_model(f, p); });

  godet::MetricReport metrics = godet::evaluate(y, report.scores, s.k);
  atomic_write((dir / "metrics.json").string(), [&](const std::string& p) {
    std::ofstream out(p);
    out << godet::metric_report_json(metrics) << "\n";
  });

  json manifest;
  manifest["seed"] = seed;
  manifest["config_hash"] = fnv1a_hash(s.config_dump);
  manifest["algorithm"] = godet::algorithm_name(cfg.algorithm);
  manifest["dataset"] = s.dataset;
  manifest["artifacts"] = {"graph.json", "labels.txt", "scores.csv", "model.bin", "metrics.json"};
  manifest["timestamp"] = static_cast<std::int64_t>(std::time(nullptr));
  atomic_write((dir / "manifest.json").string(), [&](const std::string& p) {
    std::ofstream out(p);
    out << manifest.dump(2) << "\n";
  });
  return kExitOk;
}

int run_pipeline(const std::string& config_path, std::size_t jobs) {
  PipelineSpec s = parse_pipeline(load_json_file(config_path));
  if (s.seeds.size() == 1) return run_pipeline_once(s, s.seeds[0], s.out_dir);

  std::vector<std::future<int>> futures;
  std::size_t launched = 0;
  int rc = kExitOk;
  while (launched < s.seeds.size() || !futures.empty()) {
    while (launched < s.seeds.size() && futures.size() < std::max<std::size_t>(jobs, 1)) {
      std::uint64_t seed = s.seeds[launched++];
      fs::path dir = fs::path(s.out_dir) / ("seed_" + std::to_string(seed));
      futures.push_back(std::async(std::launch::async,
                                   [&s, seed, dir] { return run_pipeline_once(s, seed, dir); }));
    }
    int r = futures.back().get();
    futures.pop_back();
    if (r != kExitOk) rc = r;
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph outlier detection toolkit"};
  app.require_subcommand(1);

  InjectArgs inj;
  auto* inject_cmd = app.add_subcommand("inject", "inject ground-truth outliers");
  inject_cmd->add_option("--in", inj.graph_in, "input graph json")->required();
  inject_cmd->add_option("--kind", inj.kind, "structural | attribute")->required();
  inject_cmd->add_option("--m", inj.m, "clique size (structural)");
  inject_cmd->add_option("--n", inj.n, "clique count / target count")->required();
  inject_cmd->add_option("--k", inj.k, "candidate pool size (attribute)");
  inject_cmd->add_option("--seed", inj.seed, "rng seed")->required();
  inject_cmd->add_option("--graph-out", inj.graph_out, "output graph json")->required();
  inject_cmd->add_option("--labels-out", inj.labels_out, "output label file")->required();

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "train a detector and score the graph");
  fit_cmd->add_option("--in", fit_args.graph_in, "input graph json")->required();
  fit_cmd->add_option("--config", fit_args.config_path, "detector config json")->required();
  fit_cmd->add_option("--scores-out", fit_args.scores_out, "score report csv")->required();
  fit_cmd->add_option("--model-out", fit_args.model_out, "weight dump");
  fit_cmd->add_option("--trace-out", fit_args.trace_out, "epoch loss csv");
  fit_cmd->add_flag("--verbose", fit_args.verbose, "print epoch losses to stderr");

  std::string eval_scores, eval_labels;
  std::optional<std::size_t> eval_k;
  std::size_t eval_k_raw = 0;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate scores against labels");
  eval_cmd->add_option("--scores", eval_scores, "score report csv")->required();
  eval_cmd->add_option("--labels", eval_labels, "label file")->required();
  auto* kopt = eval_cmd->add_option("--k", eval_k_raw, "top-k cutoff (default: #positives)");

  std::string pipe_config;
  std::size_t jobs = 1;
  auto* pipe_cmd = app.add_subcommand("pipeline", "load -> inject -> fit -> score -> evaluate");
  pipe_cmd->add_option("--config", pipe_config, "pipeline config json")->required();
  pipe_cmd->add_option("--jobs", jobs, "parallel seed runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*inject_cmd) return run_inject(inj);
    if (*fit_cmd) return run_fit(fit_args);
    if (*eval_cmd) {
      if (kopt->count()) eval_k = eval_k_raw;
      return run_eval(eval_scores, eval_labels, eval_k);
    }
    if (*pipe_cmd) return run_pipeline(pipe_config, jobs);
  } catch (const godet::DivergedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const godet::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const godet::ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const godet::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const godet::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}
