#pragma once

#include <vector>

#include "godet/tensor.hpp"

namespace godet {

struct AdamConfig {
  double learning_rate = 0.005;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction over a fixed parameter set.
class AdamState {
 public:
  AdamState(std::vector<Tensor> params, AdamConfig cfg);

  /// One update from the gradients currently stored in the parameters.
  void step();
  void zero_grad();

  std::size_t step_count() const { return t_; }
  const std::vector<Tensor>& params() const { return params_; }

 private:
  std::vector<Tensor> params_;
  std::vector<Matrix> m_, v_;
  std::size_t t_ = 0;
  AdamConfig cfg_;
};

}  // namespace godet
