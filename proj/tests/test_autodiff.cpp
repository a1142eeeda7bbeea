#include <doctest.h>

#include <cmath>
#include <functional>

#include "fixtures.hpp"
#include "godet/tensor.hpp"

using namespace godet;

namespace {

Matrix random_matrix(std::size_t r, std::size_t c, Pcg32& rng, double scale = 1.0) {
  Matrix m(r, c);
  for (double& v : m.data()) v = scale * (2.0 * rng.next_double() - 1.0);
  return m;
}

// Central finite differences of a scalar function of one leaf matrix.
Matrix finite_diff(const std::function<double(const Matrix&)>& f, Matrix at, double step = 1e-5) {
  Matrix grad(at.rows(), at.cols());
  for (std::size_t i = 0; i < at.size(); ++i) {
    double orig = at.data()[i];
    at.data()[i] = orig + step;
    double hi = f(at);
    at.data()[i] = orig - step;
    double lo = f(at);
    at.data()[i] = orig;
    grad.data()[i] = (hi - lo) / (2.0 * step);
  }
  return grad;
}

void check_close(const Matrix& got, const Matrix& want, double rel_tol) {
  REQUIRE(got.same_shape(want));
  for (std::size_t i = 0; i < got.size(); ++i) {
    double denom = std::max({std::abs(got.data()[i]), std::abs(want.data()[i]), 1.0});
    REQUIRE(std::abs(got.data()[i] - want.data()[i]) / denom <= rel_tol);
  }
}

// Runs a gradient check for a scalar-valued builder over `leaves`,
// differentiating each leaf in turn.
void gradient_check(const std::function<Tensor(const std::vector<Tensor>&)>& build,
                    std::vector<Matrix> leaf_values, double rel_tol = 1e-4) {
  std::vector<Tensor> leaves;
  for (const auto& v : leaf_values) leaves.push_back(Tensor::parameter(v));
  Tensor loss = build(leaves);
  backward(loss);
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    Matrix fd = finite_diff(
        [&](const Matrix& x) {
          std::vector<Tensor> probe;
          for (std::size_t k = 0; k < leaf_values.size(); ++k)
            probe.push_back(Tensor::constant(k == l ? x : leaf_values[k]));
          return build(probe).item();
        },
        leaf_values[l]);
    check_close(leaves[l].grad(), fd, rel_tol);
  }
}

}  // namespace

TEST_CASE("forward op values") {
  Matrix m(1, 2);
  m(0, 0) = -1.0;
  m(0, 1) = 2.0;
  Tensor t = Tensor::constant(m);
  CHECK(relu(t).value()(0, 0) == 0.0);
  CHECK(relu(t).value()(0, 1) == 2.0);

  CHECK(sigmoid(Tensor::scalar(0.0)).item() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tanh_op(Tensor::scalar(0.0)).item() == 0.0);

  Matrix w(2, 2);
  w(0, 0) = 1.0;
  w(0, 1) = 2.0;
  w(1, 0) = 2.0;
  w(1, 1) = 0.0;
  CHECK(frobenius_sq(Tensor::constant(w)).item() == doctest::Approx(9.0));
}

TEST_CASE("backward: frobenius_sq gradient is 2W") {
  Pcg32 rng(1);
  Matrix w = random_matrix(3, 4, rng);
  Tensor t = Tensor::parameter(w);
  backward(frobenius_sq(t));
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(t.grad().data()[i] == doctest::Approx(2.0 * w.data()[i]).epsilon(1e-14));
}

TEST_CASE("backward: relu subgradient at 0 is 0") {
  Matrix w(1, 2);
  w(0, 0) = -1.0;
  w(0, 1) = 3.0;
  Tensor t = Tensor::parameter(w);
  backward(frobenius_sq(relu(t)));
  CHECK(t.grad()(0, 0) == 0.0);
  CHECK(t.grad()(0, 1) == 6.0);

  Matrix z(1, 1, 0.0);
  Tensor tz = Tensor::parameter(z);
  backward(frobenius_sq(relu(tz)));
  CHECK(tz.grad()(0, 0) == 0.0);
}

TEST_CASE("backward requires a scalar loss") {
  Tensor t = Tensor::parameter(Matrix(2, 2, 1.0));
  CHECK_THROWS_AS(backward(relu(t)), ContractError);
}

TEST_CASE("gradient check: every forward op on random instances") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Pcg32 rng(seed * 31 + 7);
    Matrix a = random_matrix(3, 4, rng);
    Matrix b = random_matrix(4, 2, rng);
    Matrix c = random_matrix(3, 4, rng);
    Matrix bias = random_matrix(1, 4, rng);

    gradient_check([](const std::vector<Tensor>& p) { return mean_all(matmul(p[0], p[1])); },
                   {a, b});
    gradient_check([](const std::vector<Tensor>& p) { return mean_all(matmul_nt(p[0], p[1])); },
                   {a, c});
    gradient_check([](const std::vector<Tensor>& p) { return mean_all(add_bias(p[0], p[1])); },
                   {a, bias});
    gradient_check([](const std::vector<Tensor>& p) { return frobenius_sq(relu(p[0])); }, {a});
    gradient_check([](const std::vector<Tensor>& p) { return mean_all(sigmoid(p[0])); }, {a});
    gradient_check([](const std::vector<Tensor>& p) { return mean_all(tanh_op(p[0])); }, {a});
    gradient_check(
        [](const std::vector<Tensor>& p) { return frobenius_sq(elementwise_add(p[0], p[1])); },
        {a, c});
    gradient_check(
        [](const std::vector<Tensor>& p) { return frobenius_sq(elementwise_sub(p[0], p[1])); },
        {a, c});
    gradient_check(
        [](const std::vector<Tensor>& p) { return mean_all(elementwise_square(p[0])); }, {a});
    gradient_check([](const std::vector<Tensor>& p) { return mean_all(row_sum(p[0])); }, {a});
    gradient_check([](const std::vector<Tensor>& p) { return scalar_mul(mean_all(p[0]), -2.5); },
                   {a});
    gradient_check([](const std::vector<Tensor>& p) { return frobenius_sq(p[0]); }, {a});

    Matrix w = random_matrix(3, 1, rng);
    gradient_check(
        [&w](const std::vector<Tensor>& p) { return mean_all(mul_const(row_sum(p[0]), w)); }, {a});
  }
}

TEST_CASE("spmm_ad gradients match densified matmul gradients") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Graph g = fixtures::random_graph(8, 0.4, 3, seed + 500);
    CsrMatrix adj = gcn_normalize(g);
    Pcg32 rng(seed);
    Matrix h = random_matrix(8, 3, rng);

    Tensor hs = Tensor::parameter(h);
    backward(frobenius_sq(spmm_ad(adj, hs)));

    Tensor hd = Tensor::parameter(h);
    Tensor dense_adj = Tensor::constant(adj.to_dense());
    backward(frobenius_sq(matmul(dense_adj, hd)));

    check_close(hs.grad(), hd.grad(), 1e-10);

    // FD oracle as well.
    gradient_check([&adj](const std::vector<Tensor>& p) { return frobenius_sq(spmm_ad(adj, p[0])); },
                   {h});
  }
}

TEST_CASE("gradients accumulate across multiple uses and repeated backward") {
  Matrix w(1, 1, 3.0);
  Tensor t = Tensor::parameter(w);
  Tensor loss = elementwise_add(frobenius_sq(t), frobenius_sq(t));
  backward(loss);
  CHECK(t.grad()(0, 0) == doctest::Approx(12.0));  // 2 * 2W
  backward(loss);
  CHECK(t.grad()(0, 0) == doctest::Approx(24.0));  // accumulates without zeroing
}

TEST_CASE("backward is linear in the loss") {
  Pcg32 rng(9);
  Matrix w = random_matrix(3, 3, rng);
  double a = 2.25, b = -0.5;

  auto l1 = [](const Tensor& t) { return frobenius_sq(relu(t)); };
  auto l2 = [](const Tensor& t) { return mean_all(elementwise_square(t)); };

  Tensor t1 = Tensor::parameter(w);
  backward(l1(t1));
  Tensor t2 = Tensor::parameter(w);
  backward(l2(t2));

  Tensor tc = Tensor::parameter(w);
  backward(elementwise_add(scalar_mul(l1(tc), a), scalar_mul(l2(tc), b)));
  for (std::size_t i = 0; i < w.size(); ++i)
    CHECK(std::abs(tc.grad().data()[i] - (a * t1.grad().data()[i] + b * t2.grad().data()[i])) <=
          1e-12);
}

TEST_CASE("shape errors") {
  Tensor a = Tensor::constant(Matrix(2, 3));
  Tensor b = Tensor::constant(Matrix(2, 3));
  CHECK_THROWS_AS(matmul(a, b), ShapeError);
  CHECK_THROWS_AS(elementwise_add(a, Tensor::constant(Matrix(3, 2))), ShapeError);
  CHECK_THROWS_AS(add_bias(a, Tensor::constant(Matrix(1, 2))), ShapeError);
}

TEST_CASE("seeded rng is reproducible and glorot bound holds") {
  Pcg32 r1(1234), r2(1234);
  for (int i = 0; i < 1000; ++i) REQUIRE(r1.next_u32() == r2.next_u32());

  Pcg32 rg(77);
  Matrix g = glorot_uniform(3, 3, rg);
  for (double v : g.data()) CHECK(std::abs(v) <= 1.0);

  Pcg32 rm(5);
  double sum = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    Matrix m = glorot_uniform(1, 1, rm);  // bound sqrt(3)
    sum += m(0, 0);
  }
  CHECK(std::abs(sum / draws) < 0.01);
}
