#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "projlab/matrix.hpp"
#include "projlab/rational.hpp"
#include "test_util.hpp"

using namespace projlab;

TEST_CASE("rationals are kept in canonical form") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-1, -2) == Rational(1, 2));
  CHECK(Rational(3, -6).num() == Integer(-1));
  CHECK(Rational(3, -6).den() == Integer(2));
  CHECK(Rational(0, 7).str() == "0");
  CHECK(Rational(-10, 4).str() == "-5/2");
  CHECK(Rational(8, 2).str() == "4");
}

TEST_CASE("rational parsing round-trips and rejects junk") {
  CHECK(Rational::from_string("6/5") == Rational(6, 5));
  CHECK(Rational::from_string("-3/9") == Rational(-1, 3));
  CHECK(Rational::from_string("+7") == Rational(7));
  CHECK(Rational::from_string("0") == Rational(0));
  CHECK_THROWS_AS(Rational::from_string("1.5x"), SchemaError);
  CHECK_THROWS_AS(Rational::from_string("1.5"), SchemaError);
  CHECK_THROWS_AS(Rational::from_string(""), SchemaError);
  CHECK_THROWS_AS(Rational::from_string("1/0"), SchemaError);
  CHECK_THROWS_AS(Rational::from_string("2/-3"), SchemaError);
  CHECK_THROWS_AS(Rational::from_string("a/b"), SchemaError);

  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Rational x = testing::random_rational(rng, 1000, 1000);
    CHECK(Rational::from_string(x.str()) == x);
  }
}

TEST_CASE("rational arithmetic matches the cross-multiplication oracle") {
  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    const Rational x = testing::random_rational(rng, 50, 20);
    const Rational y = testing::random_rational(rng, 50, 20);
    // (p/q) + (r/s) = (ps + rq) / (qs), unreduced
    const Rational sum(x.num() * y.den() + y.num() * x.den(), x.den() * y.den());
    const Rational prod(x.num() * y.num(), x.den() * y.den());
    CHECK(x + y == sum);
    CHECK(x * y == prod);
  }
}

TEST_CASE("float mirror stays within 2^-50 relative tolerance") {
  std::mt19937 rng(13);
  for (int i = 0; i < 200; ++i) {
    const Rational x = testing::random_rational(rng, 10000, 10000);
    const double m = float_mirror(x);
    const double scale = std::max(1.0, std::abs(x.to_double()));
    CHECK(std::abs(m - x.to_double()) <= std::ldexp(scale, -50));
    // and against exact arithmetic: |mirror - exact| as a rational
    const Rational err = abs(Rational::from_double(m) - x);
    const Rational bound = Rational::pow2(-50) * std::max(Rational(1), abs(x));
    CHECK(err <= bound);
  }
}

TEST_CASE("binomials: small values and the product-formula oracle") {
  CHECK(binom(4, 2) == Integer(6));
  CHECK(binom(0, 0) == Integer(1));
  CHECK(binom(3, 5) == Integer(0));

  // C(40,20) = prod_{i=1..20} (20+i)/i, assembled exactly
  Integer num(1), den(1);
  for (int i = 1; i <= 20; ++i) {
    num *= 20 + i;
    den *= i;
  }
  CHECK(Rational(binom(40, 20)) == Rational(num, den));
}

TEST_CASE("matrix rank: identities, outer products, zero matrices") {
  CHECK(mat_rank(ExactMatrix::identity(3)) == 3);
  CHECK(mat_rank(ExactMatrix(2, 5)) == 0);

  ExactMatrix outer(2, 2);
  const Rational c[2] = {Rational(3, 2), Rational(-1)};
  const Rational w[2] = {Rational(2), Rational(5, 3)};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) outer(i, j) = c[i] * w[j];
  CHECK(mat_rank(outer) == 1);
}

TEST_CASE("rank is transpose-invariant") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    std::uniform_int_distribution<int> dim(1, 6);
    const ExactMatrix m = testing::random_matrix(rng, dim(rng), dim(rng));
    CHECK(mat_rank(m) == mat_rank(m.transpose()));
  }
}

TEST_CASE("mat_solve: examples and the multiply-back oracle") {
  const ExactMatrix i2 = ExactMatrix::identity(2);
  ExactMatrix b(2, 2);
  b(0, 0) = Rational(5);
  b(0, 1) = Rational(-2, 3);
  b(1, 0) = Rational(0);
  b(1, 1) = Rational(7, 4);
  CHECK(mat_solve(i2, b) == b);

  ExactMatrix d{{Rational(2), Rational(0)}, {Rational(0), Rational(4)}};
  const ExactMatrix dinv = mat_solve(d, i2);
  CHECK(dinv(0, 0) == Rational(1, 2));
  CHECK(dinv(1, 1) == Rational(1, 4));
  CHECK(dinv(0, 1) == Rational(0));

  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const ExactMatrix a = testing::random_nonsingular(rng, 4);
    const ExactMatrix rhs = testing::random_matrix(rng, 4, 2);
    const ExactMatrix x = mat_solve(a, rhs);
    CHECK(a * x == rhs);
  }

  ExactMatrix sing(2, 2);
  sing(0, 0) = Rational(1);
  sing(0, 1) = Rational(2);
  sing(1, 0) = Rational(2);
  sing(1, 1) = Rational(4);
  CHECK_THROWS_AS(mat_solve(sing, i2), SingularMatrixError);
}
