#include "godet/adam.hpp"

#include <cmath>

namespace godet {

AdamState::AdamState(std::vector<Tensor> params, AdamConfig cfg)
    : params_(std::move(params)), cfg_(cfg) {
  m_.reserve(params_.size());
  v_.reserve(params_.size());
  for (const auto& p : params_) {
    m_.emplace_back(p.value().rows(), p.value().cols());
    v_.emplace_back(p.value().rows(), p.value().cols());
  }
}

void AdamState::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

void AdamState::step() {
  if (cfg_.learning_rate == 0.0) {
    ++t_;
    return;  // parameters stay bitwise unchanged
  }
  ++t_;
  double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t p = 0; p < params_.size(); ++p) {
    Matrix& value = params_[p].value_mut();
    const Matrix& grad = params_[p].grad();
    Matrix& m = m_[p];
    Matrix& v = v_[p];
    for (std::size_t i = 0; i < value.size(); ++i) {
      double g = grad.data()[i];
      m.data()[i] = cfg_.beta1 * m.data()[i] + (1.0 - cfg_.beta1) * g;
      v.data()[i] = cfg_.beta2 * v.data()[i] + (1.0 - cfg_.beta2) * g * g;
      double m_hat = m.data()[i] / bc1;
      double v_hat = v.data()[i] / bc2;
      value.data()[i] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
    }
  }
}

}  // namespace godet
