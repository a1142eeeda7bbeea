#include "godet/tensor.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

namespace godet {

Tensor make_op(Matrix value, std::vector<Tensor> parents,
               std::function<void(Tensor::Node&)> backprop) {
  auto n = std::make_shared<Tensor::Node>();
  n->grad = Matrix(value.rows(), value.cols());
  n->value = std::move(value);
  for (auto& p : parents) {
    if (p.node()->requires_grad) n->requires_grad = true;
    n->parents.push_back(p.node());
  }
  if (n->requires_grad) n->backprop = std::move(backprop);
  return Tensor(std::move(n));
}

Tensor Tensor::constant(Matrix value) {
  auto n = std::make_shared<Node>();
  n->grad = Matrix(value.rows(), value.cols());
  n->value = std::move(value);
  return Tensor(std::move(n));
}

Tensor Tensor::parameter(Matrix value) {
  Tensor t = constant(std::move(value));
  t.node_->requires_grad = true;
  return t;
}

double Tensor::item() const {
  if (node_->value.rows() != 1 || node_->value.cols() != 1)
    throw ContractError("item() on non-scalar tensor");
  return node_->value(0, 0);
}

namespace {

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.value().same_shape(b.value()))
    throw ShapeError(std::string(op) + ": shapes " + std::to_string(a.value().rows()) + "x" +
                     std::to_string(a.value().cols()) + " vs " + std::to_string(b.value().rows()) +
                     "x" + std::to_string(b.value().cols()));
}

void accumulate(Matrix& grad, const Matrix& delta) {
  for (std::size_t i = 0; i < grad.size(); ++i) grad.data()[i] += delta.data()[i];
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  Matrix v = matmul(a.value(), b.value());
  return make_op(std::move(v), {a, b}, [](Tensor::Node& n) {
    auto& pa = *n.parents[0];
    auto& pb = *n.parents[1];
    accumulate(pa.grad, matmul_nt(n.grad, pb.value));   // G * B^T
    accumulate(pb.grad, matmul_tn(pa.value, n.grad));   // A^T * G
  });
}

Tensor matmul_nt(const Tensor& a, const Tensor& b) {
  Matrix v = matmul_nt(a.value(), b.value());
  return make_op(std::move(v), {a, b}, [](Tensor::Node& n) {
    auto& pa = *n.parents[0];
    auto& pb = *n.parents[1];
    accumulate(pa.grad, matmul(n.grad, pb.value));      // G * B
    accumulate(pb.grad, matmul_tn(n.grad, pa.value));   // G^T * A
  });
}

Tensor spmm_ad(const CsrMatrix& adj, const Tensor& dense) {
  Matrix v = spmm(adj, dense.value());
  // The CSR operand is captured by reference semantics via copy of the
  // index/value arrays; adjacency is data, never trainable.
  CsrMatrix a = adj;
  return make_op(std::move(v), {dense}, [a = std::move(a)](Tensor::Node& n) {
    accumulate(n.parents[0]->grad, spmm_transposed(a, n.grad));
  });
}

Tensor add_bias(const Tensor& x, const Tensor& bias) {
  if (bias.value().rows() != 1 || bias.value().cols() != x.value().cols())
    throw ShapeError("add_bias: bias must be 1x" + std::to_string(x.value().cols()));
  Matrix v = x.value();
  for (std::size_t i = 0; i < v.rows(); ++i)
    for (std::size_t j = 0; j < v.cols(); ++j) v(i, j) += bias.value()(0, j);
  return make_op(std::move(v), {x, bias}, [](Tensor::Node& n) {
    accumulate(n.parents[0]->grad, n.grad);
    Matrix& bg = n.parents[1]->grad;
    for (std::size_t i = 0; i < n.grad.rows(); ++i)
      for (std::size_t j = 0; j < n.grad.cols(); ++j) bg(0, j) += n.grad(i, j);
  });
}

Tensor relu(const Tensor& x) {
  Matrix v = x.value();
  for (double& e : v.data()) e = e > 0.0 ? e : 0.0;
  return make_op(std::move(v), {x}, [](Tensor::Node& n) {
    Matrix& g = n.parents[0]->grad;
    const Matrix& in = n.parents[0]->value;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (in.data()[i] > 0.0) g.data()[i] += n.grad.data()[i];
  });
}

Tensor sigmoid(const Tensor& x) {
  Matrix v = x.value();
  for (double& e : v.data()) e = 1.0 / (1.0 + std::exp(-e));
  return make_op(std::move(v), {x}, [](Tensor::Node& n) {
    Matrix& g = n.parents[0]->grad;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double s = n.value.data()[i];
      g.data()[i] += n.grad.data()[i] * s * (1.0 - s);
    }
  });
}

Tensor tanh_op(const Tensor& x) {
  Matrix v = x.value();
  for (double& e : v.data()) e = std::tanh(e);
  return make_op(std::move(v), {x}, [](Tensor::Node& n) {
    Matrix& g = n.parents[0]->grad;
    for (std::size_t i = 0; i < g.size(); ++i) {
      double t = n.value.data()[i];
      g.data()[i] += n.grad.data()[i] * (1.0 - t * t);
    }
  });
}

Tensor elementwise_add(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "elementwise_add");
  Matrix v = a.value();
  for (std::size_t i = 0; i < v.size(); ++i) v.data()[i] += b.value().data()[i];
  return make_op(std::move(v), {a, b}, [](Tensor::Node& n) {
    accumulate(n.parents[0]->grad, n.grad);
    accumulate(n.parents[1]->grad, n.grad);
  });
}

Tensor elementwise_sub(const Tensor& a, const Tensor& b) {
  check_same_shape(a, b, "elementwise_sub");
  Matrix v = a.value();
  for (std::size_t i = 0; i < v.size(); ++i) v.data()[i] -= b.value().data()[i];
  return make_op(std::move(v), {a, b}, [](Tensor::Node& n) {
    accumulate(n.parents[0]->grad, n.grad);
    Matrix& g = n.parents[1]->grad;
    for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] -= n.grad.data()[i];
  });
}

Tensor elementwise_square(const Tensor& x) {
  Matrix v = x.value();
  for (double& e : v.data()) e = e * e;
  return make_op(std::move(v), {x}, [](Tensor::Node& n) {
    Matrix& g = n.parents[0]->grad;
    const Matrix& in = n.parents[0]->value;
    for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] += 2.0 * in.data()[i] * n.grad.data()[i];
  });
}

Tensor mul_const(const Tensor& x, const Matrix& w) {
  if (!x.value().same_shape(w)) throw ShapeError("mul_const: weight shape mismatch");
  Matrix v = x.value();
  for (std::size_t i = 0; i < v.size(); ++i) v.data()[i] *= w.data()[i];
  Matrix wc = w;
  return make_op(std::move(v), {x}, [wc = std::move(wc)](Tensor::Node& n) {
    Matrix& g = n.parents[0]->grad;
    for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] += wc.data()[i] * n.grad.data()[i];
  });
}

Tensor row_sum(const Tensor& x) {
  Matrix v(x.value().rows(), 1);
  for (std::size_t i = 0; i < x.value().rows(); ++i) {
    double s = 0.0;
    const double* r = x.value().row_ptr(i);
    for (std::size_t j = 0; j < x.value().cols(); ++j) s += r[j];
    v(i, 0) = s;
  }
  return make_op(std::move(v), {x}, [](Tensor::Node& n) {
    Matrix& g = n.parents[0]->grad;
    for (std::size_t i = 0; i < g.rows(); ++i) {
      double gi = n.grad(i, 0);
      double* r = g.row_ptr(i);
      for (std::size_t j = 0; j < g.cols(); ++j) r[j] += gi;
    }
  });
}

Tensor mean_all(const Tensor& x) {
  if (x.value().size() == 0) throw ShapeError("mean_all: empty tensor");
  double s = 0.0;
  for (double e : x.value().data()) s += e;
  double inv = 1.0 / static_cast<double>(x.value().size());
  return make_op(Matrix(1, 1, s * inv), {x}, [inv](Tensor::Node& n) {
    Matrix& g = n.parents[0]->grad;
    double gi = n.grad(0, 0) * inv;
    for (double& e : g.data()) e += gi;
  });
}

Tensor scalar_mul(const Tensor& x, double c) {
  Matrix v = x.value();
  for (double& e : v.data()) e *= c;
  return make_op(std::move(v), {x}, [c](Tensor::Node& n) {
    Matrix& g = n.parents[0]->grad;
    for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] += c * n.grad.data()[i];
  });
}

Tensor frobenius_sq(const Tensor& x) {
  double s = 0.0;
  for (double e : x.value().data()) s += e * e;
  return make_op(Matrix(1, 1, s), {x}, [](Tensor::Node& n) {
    Matrix& g = n.parents[0]->grad;
    const Matrix& in = n.parents[0]->value;
    double gi = n.grad(0, 0);
    for (std::size_t i = 0; i < g.size(); ++i) g.data()[i] += 2.0 * in.data()[i] * gi;
  });
}

void backward(const Tensor& loss) {
  if (loss.value().rows() != 1 || loss.value().cols() != 1)
    throw ContractError("backward requires a 1x1 loss tensor");

  // Iterative post-order topological sort over the provenance DAG.
  std::vector<Tensor::Node*> order;
  std::unordered_set<Tensor::Node*> visited;
  std::vector<std::pair<Tensor::Node*, std::size_t>> stack;
  stack.emplace_back(loss.node().get(), 0);
  visited.insert(loss.node().get());
  while (!stack.empty()) {
    auto& [node, idx] = stack.back();
    if (idx < node->parents.size()) {
      Tensor::Node* p = node->parents[idx++].get();
      if (!visited.count(p)) {
        visited.insert(p);
        stack.emplace_back(p, 0);
      }
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  // Leaves accumulate across calls; interior nodes start fresh so a
  // second backward over the same graph doesn't double-count.
  for (Tensor::Node* node : order)
    if (!node->parents.empty())
      node->grad = Matrix(node->value.rows(), node->value.cols());

  loss.node()->grad(0, 0) += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if ((*it)->backprop && (*it)->requires_grad) (*it)->backprop(**it);
}

}  // namespace godet
