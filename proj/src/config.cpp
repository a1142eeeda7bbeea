#include "godet/config.hpp"

#include <cmath>

#include "godet/error.hpp"

namespace godet {

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "mlpae") return Algorithm::mlpae;
  if (name == "gcnae") return Algorithm::gcnae;
  if (name == "dominant") return Algorithm::dominant;
  if (name == "ocgnn") return Algorithm::ocgnn;
  if (name == "done") return Algorithm::done;
  throw ConfigError("unknown algorithm '" + name +
                    "'; valid names: mlpae, gcnae, dominant, ocgnn, done");
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::mlpae: return "mlpae";
    case Algorithm::gcnae: return "gcnae";
    case Algorithm::dominant: return "dominant";
    case Algorithm::ocgnn: return "ocgnn";
    case Algorithm::done: return "done";
  }
  return "?";
}

void DetectorConfig::validate() const {
  if (!(contamination > 0.0 && contamination <= 0.5))
    throw ConfigError("contamination must be in (0, 0.5]");
  if (learning_rate < 0.0 || !std::isfinite(learning_rate))
    throw ConfigError("learning_rate must be a finite value >= 0");
  if (hidden_dim < 1 || embed_dim < 1) throw ConfigError("hidden_dim/embed_dim must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must be in [0, 1]");
  if (!(beta > 0.0 && beta < 1.0)) throw ConfigError("beta must be in (0, 1)");
  if (radius_refresh < 1) throw ConfigError("radius_refresh must be >= 1");
}

}  // namespace godet
