#pragma once

#include <utility>
#include <vector>

#include "projlab/errors.hpp"
#include "projlab/matrix.hpp"
#include "projlab/minproj.hpp"

namespace projlab {

/// Uniform duplication of l1^N into l1^{Nm}: coordinate (j, r) of the
/// duplicated space lives at index j*m + r.
struct DuplicationSpec {
  int base_dim = 0;
  int factor = 1;

  DuplicationSpec(int n, int m) : base_dim(n), factor(m) {
    if (n < 1) throw DomainError("duplication: base dimension must be positive");
    if (m < 1) throw DomainError("duplication: factor must be >= 1");
  }

  int duplicated_dim() const { return base_dim * factor; }
};

/// x_j -> m copies of x_j / m; an isometry of l1^N into l1^{Nm}.
inline ExactMatrix duplicate_matrix(const DuplicationSpec& spec) {
  const int N = spec.base_dim, m = spec.factor;
  ExactMatrix d(N * m, N);
  const Rational w(1, m);
  for (int j = 0; j < N; ++j)
    for (int r = 0; r < m; ++r) d(j * m + r, j) = w;
  return d;
}

/// Sums within each block; a norm-one left inverse of the duplication.
inline ExactMatrix block_sum_matrix(const DuplicationSpec& spec) {
  const int N = spec.base_dim, m = spec.factor;
  ExactMatrix s(N, N * m);
  for (int j = 0; j < N; ++j)
    for (int r = 0; r < m; ++r) s(j, j * m + r) = Rational(1);
  return s;
}

struct BlockMaps {
  DuplicationSpec spec;
  ExactMatrix duplicate;      // Nm x N, isometric
  ExactMatrix block_sum;      // N x Nm, contractive, block_sum * duplicate = I
  ExactMatrix block_average;  // Nm x Nm, norm-one projection onto block-constant vectors

  explicit BlockMaps(const DuplicationSpec& s)
      : spec(s),
        duplicate(duplicate_matrix(s)),
        block_sum(block_sum_matrix(s)),
        block_average(duplicate * block_sum) {}
};

inline SubspaceL1 duplicate_subspace(const SubspaceL1& v, int m) {
  const DuplicationSpec spec(v.ambient_dim, m);
  if (m == 1) return v;
  return SubspaceL1(spec.duplicated_dim(), duplicate_matrix(spec) * v.basis);
}

/// Transports a projection onto V to a projection onto D_m(V) with exactly
/// the same operator norm: the new functional matrix repeats each column of
/// U across its block.
inline ProjectionL1 pushforward_projection(const ProjectionL1& p, int m) {
  if (m == 1) return p;
  const DuplicationSpec spec(p.subspace.ambient_dim, m);
  return ProjectionL1(duplicate_subspace(p.subspace, m),
                      p.functionals * block_sum_matrix(spec));
}

struct InvarianceRow {
  int factor = 1;
  Rational value;
  bool matches_base = false;
  bool probed = false;
  bool unique = false;
};

struct InvarianceReport {
  Rational base_value;
  bool base_probed = false;
  bool base_unique = false;
  std::vector<InvarianceRow> rows;
  bool all_match = true;
};

/// Solves the duplicated problem at every requested factor and compares the
/// exact values against the base level. Value equality is a solver
/// cross-check, not an assumption; uniqueness is reported per level and
/// never extrapolated.
inline InvarianceReport invariance_scan(const SubspaceL1& v, const std::vector<int>& factors,
                                        bool probe_uniqueness = false) {
  InvarianceReport rep;
  const MinProjResult base = solve_min_projection(v, probe_uniqueness);
  rep.base_value = base.value;
  rep.base_probed = base.probed;
  rep.base_unique = base.unique;
  for (const int m : factors) {
    const MinProjResult r = solve_min_projection(duplicate_subspace(v, m), probe_uniqueness);
    InvarianceRow row;
    row.factor = m;
    row.value = r.value;
    row.matches_base = (r.value == base.value);
    row.probed = r.probed;
    row.unique = r.unique;
    rep.all_match = rep.all_match && row.matches_base;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace projlab
