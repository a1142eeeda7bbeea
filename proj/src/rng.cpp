#include "godet/rng.hpp"

#include <cmath>

namespace godet {

Matrix glorot_uniform(std::size_t rows, std::size_t cols, Pcg32& rng) {
  double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Matrix m(rows, cols);
  for (double& v : m.data()) v = (2.0 * rng.next_double() - 1.0) * bound;
  return m;
}

}  // namespace godet
