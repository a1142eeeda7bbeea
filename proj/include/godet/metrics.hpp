#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace godet {

/// hits(top-k) / k. Default k = number of positives. Top-k ranking is
/// by descending score, ties broken by ascending node id.
double eval_precision_at_k(const std::vector<int>& y, const std::vector<double>& scores,
                           std::optional<std::size_t> k = std::nullopt);

/// hits(top-k) / #positives, same ranking rules.
double eval_recall_at_k(const std::vector<int>& y, const std::vector<double>& scores,
                        std::optional<std::size_t> k = std::nullopt);

/// Mann-Whitney ROC-AUC with average ranks for ties. Requires both
/// classes present.
double eval_roc_auc(const std::vector<int>& y, const std::vector<double>& scores);

/// Mean over positives of precision at their rank (deterministic
/// ranking, same tie rule as the @k metrics).
double eval_average_precision(const std::vector<int>& y, const std::vector<double>& scores);

struct MetricReport {
  double roc_auc;
  double precision_at_k;
  double recall_at_k;
  std::size_t k;
  double average_precision;
};

MetricReport evaluate(const std::vector<int>& y, const std::vector<double>& scores,
                      std::optional<std::size_t> k = std::nullopt);

std::string metric_report_json(const MetricReport& r);

}  // namespace godet
