#pragma once

#include <random>
#include <vector>

#include "projlab/matrix.hpp"
#include "projlab/minproj.hpp"

namespace projlab::testing {

inline Rational random_rational(std::mt19937& rng, int max_abs_num = 9, int max_den = 9) {
  std::uniform_int_distribution<int> num(-max_abs_num, max_abs_num);
  std::uniform_int_distribution<int> den(1, max_den);
  return Rational(num(rng), den(rng));
}

inline ExactMatrix random_matrix(std::mt19937& rng, int rows, int cols) {
  ExactMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = random_rational(rng);
  return m;
}

inline ExactMatrix random_nonsingular(std::mt19937& rng, int n) {
  for (;;) {
    ExactMatrix m = random_matrix(rng, n, n);
    if (mat_rank(m) == static_cast<std::size_t>(n)) return m;
  }
}

inline SubspaceL1 random_subspace(std::mt19937& rng, int ambient, int dim) {
  for (;;) {
    ExactMatrix b = random_matrix(rng, ambient, dim);
    if (mat_rank(b) == static_cast<std::size_t>(dim)) return SubspaceL1(ambient, std::move(b));
  }
}

}  // namespace projlab::testing
