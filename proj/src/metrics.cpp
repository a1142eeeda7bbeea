#include "godet/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "godet/error.hpp"

namespace godet {

namespace {

std::size_t count_positives(const std::vector<int>& y) {
  std::size_t p = 0;
  for (int v : y) p += v != 0;
  return p;
}

void check_lengths(const std::vector<int>& y, const std::vector<double>& scores) {
  if (y.size() != scores.size()) throw ContractError("labels and scores differ in length");
  if (y.empty()) throw ContractError("empty input");
}

/// Indices ranked by descending score, ascending node id on ties.
std::vector<std::size_t> ranking(const std::vector<double>& scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

std::size_t top_k_hits(const std::vector<int>& y, const std::vector<double>& scores,
                       std::size_t k) {
  auto idx = ranking(scores);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < k; ++r) hits += y[idx[r]] != 0;
  return hits;
}

std::size_t resolve_k(const std::vector<int>& y, std::optional<std::size_t> k) {
  if (k) {
    if (*k < 1 || *k > y.size()) throw ContractError("k out of range");
    return *k;
  }
  std::size_t p = count_positives(y);
  if (p == 0) throw ContractError("cannot default k: no positive labels");
  return p;
}

}  // namespace

double eval_precision_at_k(const std::vector<int>& y, const std::vector<double>& scores,
                           std::optional<std::size_t> k) {
  check_lengths(y, scores);
  std::size_t kk = resolve_k(y, k);
  return static_cast<double>(top_k_hits(y, scores, kk)) / static_cast<double>(kk);
}

double eval_recall_at_k(const std::vector<int>& y, const std::vector<double>& scores,
                        std::optional<std::size_t> k) {
  check_lengths(y, scores);
  std::size_t kk = resolve_k(y, k);
  std::size_t p = count_positives(y);
  if (p == 0) throw ContractError("recall undefined: no positive labels");
  return static_cast<double>(top_k_hits(y, scores, kk)) / static_cast<double>(p);
}

double eval_roc_auc(const std::vector<int>& y, const std::vector<double>& scores) {
  check_lengths(y, scores);
  std::size_t p = count_positives(y);
  std::size_t n = y.size() - p;
  if (p == 0 || n == 0) throw ContractError("roc auc requires both classes");

  // Mann-Whitney with average ranks for ties.
  std::vector<std::size_t> idx(y.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < idx.size()) {
    std::size_t j = i;
    while (j < idx.size() && scores[idx[j]] == scores[idx[i]]) ++j;
    double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t r = i; r < j; ++r)
      if (y[idx[r]] != 0) rank_sum_pos += avg_rank;
    i = j;
  }
  double u = rank_sum_pos - static_cast<double>(p) * (static_cast<double>(p) + 1.0) / 2.0;
  return u / (static_cast<double>(p) * static_cast<double>(n));
}

double eval_average_precision(const std::vector<int>& y, const std::vector<double>& scores) {
  check_lengths(y, scores);
  std::size_t p = count_positives(y);
  if (p == 0) throw ContractError("average precision requires positives");
  auto idx = ranking(scores);
  double ap = 0.0;
  std::size_t hits = 0;
  for (std::size_t r = 0; r < idx.size(); ++r) {
    if (y[idx[r]] != 0) {
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(r + 1);
    }
  }
  return ap / static_cast<double>(p);
}

MetricReport evaluate(const std::vector<int>& y, const std::vector<double>& scores,
                      std::optional<std::size_t> k) {
  MetricReport r;
  r.k = resolve_k(y, k);
  r.roc_auc = eval_roc_auc(y, scores);
  r.precision_at_k = eval_precision_at_k(y, scores, r.k);
  r.recall_at_k = eval_recall_at_k(y, scores, r.k);
  r.average_precision = eval_average_precision(y, scores);
  return r;
}

std::string metric_report_json(const MetricReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "{\"roc_auc\":" << r.roc_auc << ",\"precision_at_k\":" << r.precision_at_k
      << ",\"recall_at_k\":" << r.recall_at_k << ",\"k\":" << r.k
      << ",\"average_precision\":" << r.average_precision << "}";
  return out.str();
}

}  // namespace godet
