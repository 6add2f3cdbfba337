#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "projlab/simplex.hpp"
#include "test_util.hpp"

using namespace projlab;

namespace {

AffineForm form(std::vector<Rational> coeffs, Rational offset = Rational(0)) {
  return AffineForm{std::move(coeffs), std::move(offset)};
}

MinimaxProblem abs_x_eq_1() {
  // minimize t s.t. |x| <= t, x = 1
  MinimaxProblem p;
  p.variables = 1;
  p.equalities.push_back({{Rational(1)}, Rational(1)});
  p.abs_groups.push_back({form({Rational(1)})});
  return p;
}

}  // namespace

TEST_CASE("minimax: |x| <= t with x = 1") {
  const LpSolution s = solve_minimax(abs_x_eq_1());
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == Rational(1));
  CHECK(s.assignment[0] == Rational(1));
}

TEST_CASE("minimax: |x| + |y| <= t on the line x + y = 2") {
  MinimaxProblem p;
  p.variables = 2;
  p.equalities.push_back({{Rational(1), Rational(1)}, Rational(2)});
  p.abs_groups.push_back({form({Rational(1), Rational(0)}), form({Rational(0), Rational(1)})});
  const LpSolution s = solve_minimax(p);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective == Rational(2));
}

TEST_CASE("minimax: max(|x|, |1-x|) has minimum 1/2") {
  // independent oracle: evaluate the objective on the grid k/1000 and take
  // the minimum; the objective is convex so the grid minimum brackets it
  MinimaxProblem p;
  p.variables = 1;
  p.abs_groups.push_back({form({Rational(1)})});
  p.abs_groups.push_back({form({Rational(-1)}, Rational(1))});
  const LpSolution s = solve_minimax(p);
  REQUIRE(s.status == LpStatus::optimal);

  Rational best(1000);
  for (int k = 0; k <= 1000; ++k) {
    const Rational x(k, 1000);
    const Rational val = std::max(abs(x), abs(Rational(1) - x));
    best = std::min(best, val);
  }
  CHECK(best == Rational(1, 2));  // frozen from the oracle
  CHECK(s.objective == Rational(1, 2));
  CHECK(s.assignment[0] == Rational(1, 2));
}

TEST_CASE("minimax: inconsistent equalities are infeasible") {
  MinimaxProblem p;
  p.variables = 1;
  p.equalities.push_back({{Rational(1)}, Rational(1)});
  p.equalities.push_back({{Rational(1)}, Rational(2)});
  p.abs_groups.push_back({form({Rational(1)})});
  CHECK(solve_minimax(p).status == LpStatus::infeasible);
}

TEST_CASE("minimax: float mode mirrors the exact objective") {
  MinimaxProblem p;
  p.variables = 1;
  p.abs_groups.push_back({form({Rational(1)})});
  p.abs_groups.push_back({form({Rational(-1)}, Rational(1))});
  const LpSolution s = solve_minimax(p, LpMode::floating);
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(std::abs(s.objective.to_double() - 0.5) < 1e-9);
  CHECK(s.float_residual <= 1e-9);
}

TEST_CASE("permuting variables leaves the objective unchanged") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int nv = 3;
    MinimaxProblem p;
    p.variables = nv;
    LinearEquality eq;
    eq.coeffs = {testing::random_rational(rng), testing::random_rational(rng),
                 testing::random_rational(rng)};
    eq.rhs = Rational(1);
    if (eq.coeffs[0].is_zero() && eq.coeffs[1].is_zero() && eq.coeffs[2].is_zero()) continue;
    p.equalities.push_back(eq);
    p.abs_groups.resize(2);
    for (int g = 0; g < 2; ++g)
      for (int i = 0; i < 2; ++i)
        p.abs_groups[g].push_back(form({testing::random_rational(rng),
                                        testing::random_rational(rng),
                                        testing::random_rational(rng)},
                                       testing::random_rational(rng)));
    const LpSolution s = solve_minimax(p);
    if (s.status != LpStatus::optimal) continue;

    std::vector<int> perm = {2, 0, 1};
    MinimaxProblem q = p;
    q.equalities[0].coeffs = {eq.coeffs[perm[0]], eq.coeffs[perm[1]], eq.coeffs[perm[2]]};
    for (auto& g : q.abs_groups)
      for (auto& f : g) {
        const auto old = f.coeffs;
        for (int v = 0; v < nv; ++v) f.coeffs[v] = old[perm[v]];
      }
    const LpSolution s2 = solve_minimax(q);
    REQUIRE(s2.status == LpStatus::optimal);
    CHECK(s2.objective == s.objective);
  }
}

TEST_CASE("face probe: pinned variable gives a point") {
  const MinimaxProblem p = abs_x_eq_1();
  const LpSolution s = solve_minimax(p);
  const FaceProbe probe = probe_optimal_face(p, s, {0});
  REQUIRE(probe.ranges.size() == 1);
  CHECK(probe.ranges[0].lo.value() == Rational(1));
  CHECK(probe.ranges[0].hi.value() == Rational(1));
  CHECK(probe.is_point);
}

TEST_CASE("face probe: slack variable ranges over the fat face") {
  // minimize t s.t. |x| <= t, |y| <= t (singleton groups), x = 1:
  // optimum t = 1 and y is free in [-1, 1] on the optimal face
  MinimaxProblem p;
  p.variables = 2;
  p.equalities.push_back({{Rational(1), Rational(0)}, Rational(1)});
  p.abs_groups.push_back({form({Rational(1), Rational(0)})});
  p.abs_groups.push_back({form({Rational(0), Rational(1)})});
  const LpSolution s = solve_minimax(p);
  REQUIRE(s.status == LpStatus::optimal);
  REQUIRE(s.objective == Rational(1));
  const FaceProbe probe = probe_optimal_face(p, s, {1});
  REQUIRE(probe.ranges.size() == 1);
  CHECK(probe.ranges[0].lo.value() == Rational(-1));
  CHECK(probe.ranges[0].hi.value() == Rational(1));
  CHECK_FALSE(probe.is_point);
}

TEST_CASE("face probe: empty watch list is vacuously a point") {
  const MinimaxProblem p = abs_x_eq_1();
  const LpSolution s = solve_minimax(p);
  const FaceProbe probe = probe_optimal_face(p, s, {});
  CHECK(probe.is_point);
  CHECK(probe.ranges.empty());
}

TEST_CASE("face probe ranges contain the returned assignment") {
  std::mt19937 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    MinimaxProblem p;
    p.variables = 2;
    p.equalities.push_back(
        {{Rational(1), testing::random_rational(rng)}, testing::random_rational(rng)});
    if (p.equalities[0].coeffs[1].is_zero()) continue;
    p.abs_groups.resize(2);
    for (int g = 0; g < 2; ++g)
      for (int i = 0; i < 2; ++i)
        p.abs_groups[g].push_back(form(
            {testing::random_rational(rng), testing::random_rational(rng)},
            testing::random_rational(rng)));
    const LpSolution s = solve_minimax(p);
    if (s.status != LpStatus::optimal) continue;
    const FaceProbe probe = probe_optimal_face(p, s, {0, 1});
    for (int v = 0; v < 2; ++v) {
      REQUIRE(probe.ranges[v].lo.has_value());
      REQUIRE(probe.ranges[v].hi.has_value());
      CHECK(*probe.ranges[v].lo <= s.assignment[v]);
      CHECK(s.assignment[v] <= *probe.ranges[v].hi);
    }
  }
}
