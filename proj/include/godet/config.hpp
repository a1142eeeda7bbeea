#pragma once

#include <cstdint>
#include <string>

namespace godet {

enum class Algorithm { mlpae, gcnae, dominant, ocgnn, done };
enum class ProbaMethod { linear, unify };

Algorithm algorithm_from_name(const std::string& name);
std::string algorithm_name(Algorithm a);

struct DetectorConfig {
  Algorithm algorithm = Algorithm::dominant;
  double contamination = 0.1;   // in (0, 0.5]
  std::size_t epochs = 100;
  double learning_rate = 0.005;
  std::size_t hidden_dim = 64;
  std::size_t embed_dim = 32;
  std::uint64_t seed = 0;
  double alpha = 0.5;           // dominant attribute/structure mix, [0,1]
  double beta = 0.1;            // ocgnn slack fraction, (0,1)
  std::size_t radius_refresh = 5;  // ocgnn, epochs between radius updates
  std::size_t batch_size = 0;   // 0 = full batch
  ProbaMethod proba_method = ProbaMethod::unify;

  /// Throws ConfigError on any out-of-range field.
  void validate() const;
};

/// Dense n x n targets (dominant structure decoder, done structure AE)
/// are only allowed full-batch up to this many nodes; larger graphs must
/// set batch_size.
constexpr std::size_t kDenseTargetCap = 5000;

}  // namespace godet
