#pragma once

#include <utility>
#include <vector>

#include "projlab/errors.hpp"
#include "projlab/matrix.hpp"
#include "projlab/simplex.hpp"

namespace projlab {

/// An n-dimensional subspace of l1^N, given by a full-column-rank N x n
/// basis matrix whose columns are the basis vectors.
struct SubspaceL1 {
  int ambient_dim = 0;
  int dim = 0;
  ExactMatrix basis;  // N x n

  SubspaceL1() = default;
  SubspaceL1(int ambient, ExactMatrix b) : ambient_dim(ambient), dim(static_cast<int>(b.cols())), basis(std::move(b)) {
    if (static_cast<int>(basis.rows()) != ambient_dim)
      throw DomainError("subspace basis has wrong ambient dimension");
    if (dim < 1 || dim > ambient_dim)
      throw DomainError("subspace dimension out of range");
    if (mat_rank(basis) != static_cast<std::size_t>(dim))
      throw DomainError("subspace basis is rank-deficient");
  }

  /// Builds the subspace from spanning vectors given as rows.
  static SubspaceL1 from_span_rows(const std::vector<std::vector<Rational>>& rows) {
    if (rows.empty()) throw DomainError("subspace needs at least one spanning vector");
    const int ambient = static_cast<int>(rows[0].size());
    ExactMatrix b(ambient, rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (static_cast<int>(rows[k].size()) != ambient)
        throw DomainError("spanning vectors have inconsistent lengths");
      for (int i = 0; i < ambient; ++i) b(i, k) = rows[k][i];
    }
    return SubspaceL1(ambient, std::move(b));
  }
};

/// A projection of l1^N onto V, parameterized by the dual-functional matrix
/// U (n x N): x maps to B.U.x. Requires U.B = I_n.
struct ProjectionL1 {
  SubspaceL1 subspace;
  ExactMatrix functionals;  // n x N

  ProjectionL1() = default;
  ProjectionL1(SubspaceL1 v, ExactMatrix u) : subspace(std::move(v)), functionals(std::move(u)) {
    if (functionals.rows() != static_cast<std::size_t>(subspace.dim) ||
        functionals.cols() != static_cast<std::size_t>(subspace.ambient_dim))
      throw DomainError("functional matrix has wrong shape");
    if (!(functionals * subspace.basis == ExactMatrix::identity(subspace.dim)))
      throw DomainError("functionals are not biorthogonal to the basis (U.B != I)");
  }
};

/// Exact l1->l1 operator norm of the projection: max over ambient columns
/// j of the l1 norm of B.U.e_j.
inline Rational projection_norm(const ProjectionL1& p) {
  const ExactMatrix op = p.subspace.basis * p.functionals;  // N x N
  Rational best;
  for (std::size_t j = 0; j < op.cols(); ++j) {
    Rational sum;
    for (std::size_t i = 0; i < op.rows(); ++i) sum += abs(op(i, j));
    if (sum > best) best = sum;
  }
  return best;
}

/// Minimax encoding of the minimal-projection problem for V: variables are
/// the entries of U (row-major), equalities pin U.B = I_n, and ambient
/// coordinate j contributes the group of N affine forms (B.U)_{i,j}.
inline MinimaxProblem build_problem(const SubspaceL1& v) {
  const int n = v.dim, N = v.ambient_dim;
  MinimaxProblem p;
  p.variables = n * N;
  const auto uvar = [N](int k, int j) { return k * N + j; };
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      LinearEquality eq;
      eq.coeffs.assign(p.variables, Rational(0));
      for (int j = 0; j < N; ++j) eq.coeffs[uvar(k, j)] = v.basis(j, l);
      eq.rhs = Rational(k == l ? 1 : 0);
      p.equalities.push_back(std::move(eq));
    }
  }
  p.abs_groups.resize(N);
  for (int j = 0; j < N; ++j) {
    for (int i = 0; i < N; ++i) {
      AffineForm f;
      f.coeffs.assign(p.variables, Rational(0));
      for (int k = 0; k < n; ++k) f.coeffs[uvar(k, j)] = v.basis(i, k);
      p.abs_groups[j].push_back(std::move(f));
    }
  }
  return p;
}

/// Solved minimal-projection problem: the relative projection constant,
/// an optimal projection, and (when probed) the exact uniqueness verdict
/// from the face probe over the U entries.
struct MinProjResult {
  Rational value;
  ProjectionL1 optimal;
  bool probed = false;
  bool unique = false;
  FaceProbe face;
  std::vector<Rational> dual_certificate;
};

inline MinProjResult solve_min_projection(const SubspaceL1& v, bool probe_uniqueness = false,
                                          LpMode mode = LpMode::exact) {
  MinProjResult out;
  if (v.dim == v.ambient_dim) {
    // U = B^{-1}; the only projection onto the full space is the identity.
    out.value = Rational(1);
    out.optimal = ProjectionL1(v, mat_inverse(v.basis));
    out.probed = true;
    out.unique = true;
    out.face.is_point = true;
    return out;
  }
  const MinimaxProblem p = build_problem(v);
  const LpSolution s = solve_minimax(p, mode);
  if (s.status == LpStatus::infeasible)
    throw DomainError("minimal-projection program infeasible: degenerate basis input");
  if (s.status == LpStatus::unbounded)
    throw SolverError("minimal-projection program unbounded");
  out.value = s.objective;
  ExactMatrix u(v.dim, v.ambient_dim);
  for (int k = 0; k < v.dim; ++k)
    for (int j = 0; j < v.ambient_dim; ++j) u(k, j) = s.assignment[k * v.ambient_dim + j];
  out.optimal = ProjectionL1(v, std::move(u));
  out.dual_certificate = s.dual_multipliers;
  if (mode == LpMode::exact && !(projection_norm(out.optimal) == out.value))
    throw SolverError("optimal projection norm disagrees with the LP objective");
  if (probe_uniqueness && mode == LpMode::exact) {
    std::vector<int> watched(p.variables);
    for (int i = 0; i < p.variables; ++i) watched[i] = i;
    out.face = probe_optimal_face(p, s, watched);
    out.probed = true;
    out.unique = out.face.is_point;
  }
  return out;
}

/// Rational-safe Kadec-Snobar test: 1 <= value and value^2 <= dim.
inline bool kadec_snobar_check(const Rational& value, int dim) {
  return Rational(1) <= value && value * value <= Rational(dim);
}

inline bool kadec_snobar_check(const MinProjResult& r) {
  return kadec_snobar_check(r.value, r.optimal.subspace.dim);
}

}  // namespace projlab
