#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "projlab/minproj.hpp"
#include "test_util.hpp"

using namespace projlab;

namespace {

SubspaceL1 span_rows(std::vector<std::vector<Rational>> rows) {
  return SubspaceL1::from_span_rows(rows);
}

}  // namespace

TEST_CASE("build_problem encodes the normalized diagonal line in l1^2") {
  // span{(1/2, 1/2)}: one functional row, equality u1/2 + u2/2 = 1
  const SubspaceL1 v = span_rows({{Rational(1, 2), Rational(1, 2)}});
  const MinimaxProblem p = build_problem(v);
  CHECK(p.variables == 2);
  REQUIRE(p.equalities.size() == 1);
  CHECK(p.equalities[0].coeffs[0] == Rational(1, 2));
  CHECK(p.equalities[0].coeffs[1] == Rational(1, 2));
  CHECK(p.equalities[0].rhs == Rational(1));
  CHECK(p.abs_groups.size() == 2);
  // scaled by 2 the equality reads u1 + u2 = 2
  CHECK(p.equalities[0].coeffs[0] * Rational(2) + p.equalities[0].coeffs[1] * Rational(2) ==
        Rational(2));
}

TEST_CASE("build_problem: full space forces U = I, e1 line pins u1 = 1") {
  const SubspaceL1 full = span_rows({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
  const MinimaxProblem pf = build_problem(full);
  CHECK(pf.variables == 4);
  CHECK(pf.equalities.size() == 4);

  const SubspaceL1 e1 = span_rows({{Rational(1), Rational(0)}});
  const MinimaxProblem pe = build_problem(e1);
  CHECK(pe.variables == 2);
  REQUIRE(pe.equalities.size() == 1);
  CHECK(pe.equalities[0].coeffs[0] == Rational(1));
  CHECK(pe.equalities[0].coeffs[1] == Rational(0));
  CHECK(pe.equalities[0].rhs == Rational(1));
}

TEST_CASE("rank-deficient span is rejected") {
  CHECK_THROWS_AS(span_rows({{Rational(1), Rational(1)}, {Rational(2), Rational(2)}}),
                  DomainError);
}

TEST_CASE("the all-ones line in l1^4 has projection constant 1") {
  const MinProjResult r = solve_min_projection(
      span_rows({{Rational(1), Rational(1), Rational(1), Rational(1)}}));
  CHECK(r.value == Rational(1));
  CHECK(projection_norm(r.optimal) == Rational(1));
}

TEST_CASE("coordinate planes have projection constant 1") {
  const MinProjResult r = solve_min_projection(span_rows(
      {{Rational(1), Rational(0), Rational(0)}, {Rational(0), Rational(1), Rational(0)}}));
  CHECK(r.value == Rational(1));
}

TEST_CASE("span{e1} in l1^2: value 1 but not unique") {
  const SubspaceL1 v = span_rows({{Rational(1), Rational(0)}});
  const MinProjResult r = solve_min_projection(v, true);
  CHECK(r.value == Rational(1));
  REQUIRE(r.probed);
  CHECK_FALSE(r.unique);
  // the free functional coordinate u2 ranges over [-1, 1] on the optimal face
  REQUIRE(r.face.ranges.size() == 2);
  CHECK(r.face.ranges[1].lo.value() == Rational(-1));
  CHECK(r.face.ranges[1].hi.value() == Rational(1));
}

TEST_CASE("the diagonal line in l1^2 has a unique minimal projection") {
  const SubspaceL1 v = span_rows({{Rational(1), Rational(1)}});
  const MinProjResult r = solve_min_projection(v, true);
  CHECK(r.value == Rational(1));
  REQUIRE(r.probed);
  CHECK(r.unique);
}

TEST_CASE("n = N short-circuit: identity is the only projection") {
  const SubspaceL1 v = span_rows({{Rational(2), Rational(1)}, {Rational(1), Rational(1)}});
  const MinProjResult r = solve_min_projection(v, true);
  CHECK(r.value == Rational(1));
  CHECK(r.unique);
  CHECK(r.optimal.functionals * v.basis == ExactMatrix::identity(2));
}

TEST_CASE("projection_norm: identity, diagonal line, slack functional") {
  const SubspaceL1 full = span_rows({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}});
  CHECK(projection_norm(ProjectionL1(full, ExactMatrix::identity(2))) == Rational(1));

  const SubspaceL1 diag = span_rows({{Rational(1, 2), Rational(1, 2)}});
  ExactMatrix u(1, 2);
  u(0, 0) = Rational(1);
  u(0, 1) = Rational(1);
  CHECK(projection_norm(ProjectionL1(diag, u)) == Rational(1));

  const SubspaceL1 e1 = span_rows({{Rational(1), Rational(0)}});
  ExactMatrix u2(1, 2);
  u2(0, 0) = Rational(1);
  u2(0, 1) = Rational(1, 2);
  CHECK(projection_norm(ProjectionL1(e1, u2)) == Rational(1));
}

TEST_CASE("kadec-snobar check in rational-safe form") {
  CHECK(kadec_snobar_check(Rational(1), 1));
  CHECK(kadec_snobar_check(Rational(6, 5), 2));   // 36/25 <= 2
  CHECK_FALSE(kadec_snobar_check(Rational(3, 2), 2));  // 9/4 > 2
  CHECK_FALSE(kadec_snobar_check(Rational(1, 2), 3));  // below 1
}

TEST_CASE("solved values satisfy the projection-constant bounds exactly") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 8; ++trial) {
    const SubspaceL1 v = testing::random_subspace(rng, 4, 2);
    const MinProjResult r = solve_min_projection(v);
    CHECK(Rational(1) <= r.value);
    CHECK(r.value * r.value <= Rational(v.dim));
    CHECK(projection_norm(r.optimal) == r.value);
  }
}

TEST_CASE("value is invariant under signed permutations of coordinates") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 5; ++trial) {
    const SubspaceL1 v = testing::random_subspace(rng, 4, 2);
    const Rational base = solve_min_projection(v).value;

    std::vector<int> perm = {3, 1, 0, 2};
    std::vector<int> sign = {-1, 1, -1, 1};
    ExactMatrix b2(4, 2);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 2; ++j) b2(i, j) = Rational(sign[i]) * v.basis(perm[i], j);
    CHECK(solve_min_projection(SubspaceL1(4, b2)).value == base);
  }
}

TEST_CASE("value and uniqueness are invariant under change of basis") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    const SubspaceL1 v = testing::random_subspace(rng, 4, 2);
    const MinProjResult base = solve_min_projection(v, true);
    const ExactMatrix t = testing::random_nonsingular(rng, 2);
    const MinProjResult changed = solve_min_projection(SubspaceL1(4, v.basis * t), true);
    CHECK(changed.value == base.value);
    CHECK(changed.unique == base.unique);
  }
}

TEST_CASE("subsets of the standard basis always give value 1") {
  const MinProjResult r = solve_min_projection(span_rows({
      {Rational(0), Rational(1), Rational(0), Rational(0), Rational(0)},
      {Rational(0), Rational(0), Rational(0), Rational(1), Rational(0)},
  }));
  CHECK(r.value == Rational(1));
}
