#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "godet/graph.hpp"
#include "godet/matrix.hpp"

namespace godet {

/// Reverse-mode autodiff over dense 2-D matrices. A Tensor is a shared
/// handle to a node in the computation graph; ops build new nodes that
/// remember their parents and a backward rule. Gradients accumulate
/// additively; call zero_grad between backward passes.
class Tensor {
 public:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    std::vector<std::shared_ptr<Node>> parents;
    // Pulls this node's grad into the parents' grads.
    std::function<void(Node&)> backprop;
  };

  Tensor() = default;

  /// Constant leaf (no gradient tracked).
  static Tensor constant(Matrix value);
  /// Trainable leaf.
  static Tensor parameter(Matrix value);
  static Tensor scalar(double v) { return constant(Matrix(1, 1, v)); }

  const Matrix& value() const { return node_->value; }
  Matrix& value_mut() { return node_->value; }
  const Matrix& grad() const { return node_->grad; }
  bool requires_grad() const { return node_->requires_grad; }
  bool is_leaf() const { return node_->parents.empty(); }

  double item() const;  // 1x1 only

  void zero_grad() { node_->grad = Matrix(node_->value.rows(), node_->value.cols()); }

  std::shared_ptr<Node> node() const { return node_; }

 private:
  explicit Tensor(std::shared_ptr<Node> n) : node_(std::move(n)) {}
  std::shared_ptr<Node> node_;

  friend Tensor make_op(Matrix value, std::vector<Tensor> parents,
                        std::function<void(Tensor::Node&)> backprop);
};

// Forward ops. Each returns a fresh Tensor recording provenance.
Tensor matmul(const Tensor& a, const Tensor& b);
/// A * B^T (serves the inner-product structure decoder Z Z^T).
Tensor matmul_nt(const Tensor& a, const Tensor& b);
/// Sparse-dense product; the sparse operand is constant, only the dense
/// side receives gradients.
Tensor spmm_ad(const CsrMatrix& adj, const Tensor& dense);
/// Adds a 1 x d bias row-broadcast over an n x d input.
Tensor add_bias(const Tensor& x, const Tensor& bias);
Tensor relu(const Tensor& x);       // subgradient at 0 is 0
Tensor sigmoid(const Tensor& x);
Tensor tanh_op(const Tensor& x);
Tensor elementwise_add(const Tensor& a, const Tensor& b);
Tensor elementwise_sub(const Tensor& a, const Tensor& b);
Tensor elementwise_square(const Tensor& x);
/// Elementwise product with a constant matrix (e.g. per-node loss weights).
Tensor mul_const(const Tensor& x, const Matrix& w);
/// n x d -> n x 1 row sums.
Tensor row_sum(const Tensor& x);
/// Mean over all entries -> 1 x 1.
Tensor mean_all(const Tensor& x);
Tensor scalar_mul(const Tensor& x, double c);
/// Sum of squared entries -> 1 x 1.
Tensor frobenius_sq(const Tensor& x);

/// Populates d loss / d leaf for every reachable leaf with
/// requires_grad. loss must be 1x1. Repeated calls accumulate.
void backward(const Tensor& loss);

}  // namespace godet
