#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "projlab/duplication.hpp"
#include "projlab/errors.hpp"
#include "projlab/matrix.hpp"
#include "projlab/minproj.hpp"

namespace projlab {

/// [0,1] split into `pieces` intervals, each subdivided into `refinement`
/// equal subintervals; all endpoints are exact rationals.
struct UniformPartition {
  int pieces = 1;
  int refinement = 1;

  UniformPartition(int n, int m) : pieces(n), refinement(m) {
    if (n < 1 || m < 1) throw DomainError("partition needs pieces >= 1 and refinement >= 1");
  }

  int cells() const { return pieces * refinement; }
  Rational cell_length() const { return Rational(1, cells()); }
  Rational left(int i) const { return Rational(i, cells()); }
  Rational right(int i) const { return Rational(i + 1, cells()); }
};

/// The piecewise-constant copy of V in coordinates: members are spanned by
/// the normalized indicators nu_i = (cells) * chi_{cell i}, so the M[0,1]
/// norm of a member equals the l1 norm of its coefficient vector.
struct PiecewiseConstantSubspace {
  UniformPartition partition;
  SubspaceL1 coefficients;

  PiecewiseConstantSubspace(UniformPartition p, SubspaceL1 c)
      : partition(p), coefficients(std::move(c)) {
    if (coefficients.ambient_dim != partition.cells())
      throw DomainError("piecewise subspace: coefficient dimension does not match the partition");
  }
};

inline PiecewiseConstantSubspace piecewise_copy(const SubspaceL1& v, int m) {
  return PiecewiseConstantSubspace(UniformPartition(v.ambient_dim, m), duplicate_subspace(v, m));
}

/// Total variation of the member with the given coefficient vector,
/// evaluated through the function representation (independent of the
/// coordinate-isometry shortcut).
inline Rational member_total_variation(const PiecewiseConstantSubspace& s,
                                       const std::vector<Rational>& coeffs) {
  const int cells = s.partition.cells();
  if (static_cast<int>(coeffs.size()) != static_cast<int>(s.coefficients.basis.cols()))
    throw DomainError("coefficient vector length mismatch");
  Rational tv;
  for (int i = 0; i < cells; ++i) {
    Rational density;
    for (std::size_t k = 0; k < s.coefficients.basis.cols(); ++k)
      density += coeffs[k] * s.coefficients.basis(i, k);
    tv += abs(density * Rational(cells)) * s.partition.cell_length();
  }
  return tv;
}

/// One affine piece of a coding function on [lo, hi].
struct CodingSegment {
  Rational lo, hi, v_lo, v_hi;

  Rational eval(const Rational& t) const {
    if (t == lo) return v_lo;
    if (t == hi) return v_hi;
    return v_lo + (v_hi - v_lo) * (t - lo) / (hi - lo);
  }
};

/// A family of piecewise-linear (possibly discontinuous step) coding
/// functions over a shared breakpoint grid.
struct CodingFamily {
  std::vector<Rational> breakpoints;
  std::vector<std::vector<CodingSegment>> functions;
  bool continuity_flag = false;

  void validate() const {
    if (breakpoints.size() < 2) throw DomainError("coding family needs at least two breakpoints");
    if (!(breakpoints.front() == Rational(0)) || !(breakpoints.back() == Rational(1)))
      throw DomainError("coding breakpoints must span [0,1]");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
      if (!(breakpoints[i] < breakpoints[i + 1]))
        throw DomainError("coding breakpoints must be strictly increasing");
    for (const auto& f : functions) {
      if (f.size() + 1 != breakpoints.size())
        throw DomainError("coding function does not cover the breakpoint grid");
      for (std::size_t i = 0; i < f.size(); ++i)
        if (!(f[i].lo == breakpoints[i]) || !(f[i].hi == breakpoints[i + 1]))
          throw DomainError("coding segment endpoints disagree with the breakpoint grid");
    }
  }

  bool compute_continuity() const {
    for (const auto& f : functions)
      for (std::size_t i = 0; i + 1 < f.size(); ++i)
        if (!(f[i].v_hi == f[i + 1].v_lo)) return false;
    return true;
  }

  void refresh_continuity() { continuity_flag = compute_continuity(); }
};

/// Step coding read off the optimal functional matrix: g_k is constant on
/// each partition cell with value U_{k,i}. Biorthogonality against the
/// piecewise basis holds exactly because U.B = I.
inline CodingFamily extract_coding(const MinProjResult& r, const UniformPartition& p) {
  const ExactMatrix& u = r.optimal.functionals;
  const int cells = p.cells();
  if (static_cast<int>(u.cols()) != cells)
    throw DomainError("extract_coding: result dimension does not match the partition");
  CodingFamily fam;
  for (int i = 0; i <= cells; ++i) fam.breakpoints.push_back(Rational(i, cells));
  fam.functions.resize(u.rows());
  for (std::size_t k = 0; k < u.rows(); ++k) {
    for (int i = 0; i < cells; ++i) {
      CodingSegment seg;
      seg.lo = fam.breakpoints[i];
      seg.hi = fam.breakpoints[i + 1];
      seg.v_lo = u(k, i);
      seg.v_hi = u(k, i);
      fam.functions[k].push_back(std::move(seg));
    }
  }
  fam.refresh_continuity();
  fam.validate();
  return fam;
}

/// Exact integral of a piecewise-affine coding function against the
/// normalized indicator of every partition cell: returns the vector of
/// integrals of g over each cell (without the cell normalization).
inline std::vector<Rational> cell_integrals(const std::vector<CodingSegment>& f, int cells) {
  std::vector<Rational> out(cells);
  for (const auto& seg : f) {
    // split [seg.lo, seg.hi] along the cell grid k/cells
    Rational u = seg.lo;
    while (u < seg.hi) {
      // the piece starting at u lies in cell floor(u * cells)
      const Rational scaled = u * Rational(cells);
      Integer idx;
      mpz_fdiv_q(idx.get_mpz_t(), scaled.num().get_mpz_t(), scaled.den().get_mpz_t());
      int i = static_cast<int>(idx.get_si());
      if (i >= cells) i = cells - 1;
      const Rational cell_right(i + 1, cells);
      const Rational v = std::min(seg.hi, cell_right);
      out[i] += (v - u) * (seg.eval(u) + seg.eval(v)) / Rational(2);
      u = v;
    }
  }
  return out;
}

/// Gram matrix G_{k,l} = integral of g_k against the basis member y_l.
inline ExactMatrix coding_gram(const CodingFamily& c, const PiecewiseConstantSubspace& basis) {
  const int cells = basis.partition.cells();
  const std::size_t n = basis.coefficients.basis.cols();
  if (c.functions.size() != n)
    throw DomainError("coding family size does not match the basis dimension");
  ExactMatrix g(c.functions.size(), n);
  for (std::size_t k = 0; k < c.functions.size(); ++k) {
    const std::vector<Rational> ints = cell_integrals(c.functions[k], cells);
    for (std::size_t l = 0; l < n; ++l) {
      Rational acc;
      for (int i = 0; i < cells; ++i)
        acc += ints[i] * basis.coefficients.basis(i, l) * Rational(cells);
      g(k, l) = acc;
    }
  }
  return g;
}

/// Operator norm of Q mu = sum_k (int g_k dmu) y_k over the unit ball of
/// M[0,1]: the extreme points +-delta_t reduce it to the maximum over t of
/// || sum_k g_k(t) y_k ||_{L1}, which is convex in t on every coding cell,
/// so it is attained at cell endpoints (both one-sided limits at jumps).
inline Rational q_norm(const CodingFamily& c, const PiecewiseConstantSubspace& basis) {
  c.validate();
  const int cells = basis.partition.cells();
  const std::size_t n = basis.coefficients.basis.cols();
  if (c.functions.size() != n)
    throw DomainError("coding family size does not match the basis dimension");
  Rational best;
  const std::size_t nsegs = c.breakpoints.size() - 1;
  for (std::size_t s = 0; s < nsegs; ++s) {
    for (const bool upper : {false, true}) {
      Rational norm;
      for (int i = 0; i < cells; ++i) {
        Rational val;
        for (std::size_t k = 0; k < n; ++k) {
          const CodingSegment& seg = c.functions[k][s];
          val += (upper ? seg.v_hi : seg.v_lo) * basis.coefficients.basis(i, k);
        }
        norm += abs(val);
      }
      if (norm > best) best = norm;
    }
  }
  return best;
}

/// Replaces every jump by a linear ramp of width delta centered at the
/// interior breakpoints, then restores exact biorthogonality by
/// left-multiplying the family with the inverse Gram matrix.
inline CodingFamily smooth_coding(const CodingFamily& c, const Rational& delta,
                                  const PiecewiseConstantSubspace& basis) {
  c.validate();
  Rational min_len = c.breakpoints[1] - c.breakpoints[0];
  for (std::size_t i = 1; i + 1 < c.breakpoints.size(); ++i)
    min_len = std::min(min_len, c.breakpoints[i + 1] - c.breakpoints[i]);
  if (!(delta.sign() > 0) || !(delta < min_len / Rational(2)))
    throw DomainError("smooth_coding: delta must satisfy 0 < delta < half the minimum interval length");
  const ExactMatrix g0 = coding_gram(c, basis);
  if (!(g0 == ExactMatrix::identity(g0.rows())))
    throw DomainError("smooth_coding: input coding is not biorthogonal to the basis");

  const Rational half = delta / Rational(2);
  const std::size_t nsegs = c.breakpoints.size() - 1;

  // New intervals: the clipped interiors of the original segments,
  // interleaved with ramps straddling each interior breakpoint.
  struct Piece {
    Rational lo, hi;
    bool ramp;
    std::size_t seg;  // original segment (left segment for ramps)
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < nsegs; ++i) {
    const Rational lo = (i == 0) ? c.breakpoints.front() : c.breakpoints[i] + half;
    const Rational hi = (i + 1 == nsegs) ? c.breakpoints.back() : c.breakpoints[i + 1] - half;
    pieces.push_back({lo, hi, false, i});
    if (i + 1 < nsegs) pieces.push_back({hi, c.breakpoints[i + 1] + half, true, i});
  }

  CodingFamily ramped;
  ramped.breakpoints.push_back(pieces.front().lo);
  for (const auto& p : pieces) ramped.breakpoints.push_back(p.hi);
  ramped.functions.resize(c.functions.size());
  for (std::size_t k = 0; k < c.functions.size(); ++k) {
    for (const auto& p : pieces) {
      CodingSegment seg;
      seg.lo = p.lo;
      seg.hi = p.hi;
      if (p.ramp) {
        seg.v_lo = c.functions[k][p.seg].eval(p.lo);
        seg.v_hi = c.functions[k][p.seg + 1].eval(p.hi);
      } else {
        seg.v_lo = c.functions[k][p.seg].eval(p.lo);
        seg.v_hi = c.functions[k][p.seg].eval(p.hi);
      }
      ramped.functions[k].push_back(std::move(seg));
    }
  }
  ramped.validate();

  ExactMatrix gram = coding_gram(ramped, basis);
  ExactMatrix correction;
  try {
    correction = mat_inverse(gram);
  } catch (const SingularMatrixError&) {
    throw DomainError("smooth_coding: Gram matrix singular; delta is not small enough");
  }

  CodingFamily out;
  out.breakpoints = ramped.breakpoints;
  out.functions.assign(c.functions.size(), {});
  for (std::size_t k = 0; k < c.functions.size(); ++k) {
    for (std::size_t s = 0; s < ramped.functions.front().size(); ++s) {
      CodingSegment seg;
      seg.lo = ramped.functions.front()[s].lo;
      seg.hi = ramped.functions.front()[s].hi;
      for (std::size_t j = 0; j < c.functions.size(); ++j) {
        seg.v_lo += correction(k, j) * ramped.functions[j][s].v_lo;
        seg.v_hi += correction(k, j) * ramped.functions[j][s].v_hi;
      }
      out.functions[k].push_back(std::move(seg));
    }
  }
  out.refresh_continuity();
  out.validate();
  if (!out.continuity_flag)
    throw SolverError("smooth_coding: output unexpectedly discontinuous");
  return out;
}

/// The rank-one obstruction: any constant coding c represents the operator
/// with matrix (c_k w_l) on the piecewise copy, where w_l is the integral
/// of the l-th basis member. That matrix has rank <= 1, so it cannot be the
/// identity when dim >= 2; for dim = 1 a constant coding exists exactly
/// when w != 0.
struct WstarObstructionCertificate {
  int dim = 0;
  std::vector<Rational> basis_integrals;
  bool holds = false;
  std::vector<Rational> witness;          // constant coding, no-obstruction case
  std::vector<std::size_t> sampled_ranks;  // ranks of c w^T for sampled c
};

inline WstarObstructionCertificate wstar_obstruction_certificate(const SubspaceL1& v) {
  WstarObstructionCertificate cert;
  cert.dim = v.dim;
  cert.basis_integrals.resize(v.dim);
  for (int l = 0; l < v.dim; ++l) {
    Rational acc;
    for (int i = 0; i < v.ambient_dim; ++i) acc += v.basis(i, l);
    cert.basis_integrals[l] = acc;
  }
  bool w_zero = true;
  for (const auto& w : cert.basis_integrals) w_zero = w_zero && w.is_zero();

  std::vector<std::vector<Rational>> samples;
  for (int k = 0; k < v.dim; ++k) {
    std::vector<Rational> c(v.dim);
    c[k] = Rational(1);
    samples.push_back(std::move(c));
  }
  samples.emplace_back(v.dim, Rational(1));
  samples.push_back(cert.basis_integrals);
  for (const auto& c : samples) {
    ExactMatrix outer(v.dim, v.dim);
    for (int k = 0; k < v.dim; ++k)
      for (int l = 0; l < v.dim; ++l) outer(k, l) = c[k] * cert.basis_integrals[l];
    const std::size_t rank = mat_rank(outer);
    if (rank > 1) throw SolverError("rank-one obstruction violated by a sampled coding");
    cert.sampled_ranks.push_back(rank);
  }

  if (v.dim >= 2 || w_zero) {
    cert.holds = true;
  } else {
    cert.holds = false;
    cert.witness = {Rational(1) / cert.basis_integrals[0]};
  }
  return cert;
}

/// Refinement-level consistency record for ladder evidence.
struct ConsistencyRow {
  int level = 1;
  Rational value;
  bool value_matches = false;
  bool probed = false;
  bool unique = false;
  bool optimum_checked = false;
  bool optimum_matches = false;
  bool consistent = false;
};

struct RefinedSolve {
  int refinement = 1;
  MinProjResult result;
  bool value_consistent = false;
  bool optimum_checked = false;
  bool optimum_matches = false;
  bool consistent = false;
};

/// Solves the refinement-m coefficient problem and compares it with the
/// base solve: exact value equality always, and optimum equality with the
/// pushforward of the base optimum when both levels are unique.
inline RefinedSolve refined_min_projection(const SubspaceL1& v, int m, const MinProjResult& base,
                                           bool probe_uniqueness = true) {
  RefinedSolve out;
  out.refinement = m;
  if (m == 1) {
    out.result = base;
    out.value_consistent = true;
    out.optimum_checked = false;
    out.optimum_matches = true;
    out.consistent = true;
    return out;
  }
  out.result = solve_min_projection(duplicate_subspace(v, m), probe_uniqueness);
  out.value_consistent = (out.result.value == base.value);
  if (base.probed && base.unique && out.result.probed && out.result.unique) {
    const ProjectionL1 push = pushforward_projection(base.optimal, m);
    out.optimum_checked = true;
    out.optimum_matches = (push.functionals == out.result.optimal.functionals);
  }
  out.consistent = out.value_consistent && (!out.optimum_checked || out.optimum_matches);
  return out;
}

inline RefinedSolve refined_min_projection(const SubspaceL1& v, int m, bool probe_uniqueness = true) {
  const MinProjResult base = solve_min_projection(v, probe_uniqueness);
  return refined_min_projection(v, m, base, probe_uniqueness);
}

/// Runs refined_min_projection across the requested levels and converts the
/// outcomes to evidence rows.
inline std::vector<ConsistencyRow> consistency_sweep(const SubspaceL1& v,
                                                     const std::vector<int>& levels,
                                                     bool probe_uniqueness = true) {
  const MinProjResult base = solve_min_projection(v, probe_uniqueness);
  std::vector<ConsistencyRow> rows;
  for (const int m : levels) {
    const RefinedSolve r = refined_min_projection(v, m, base, probe_uniqueness);
    ConsistencyRow row;
    row.level = m;
    row.value = r.result.value;
    row.value_matches = r.value_consistent;
    row.probed = r.result.probed;
    row.unique = r.result.unique;
    row.optimum_checked = r.optimum_checked;
    row.optimum_matches = r.optimum_matches;
    row.consistent = r.consistent;
    rows.push_back(std::move(row));
  }
  return rows;
}

enum class AttainmentVerdict { attained, not_attained, inconclusive };

inline std::string to_string(AttainmentVerdict v) {
  switch (v) {
    case AttainmentVerdict::attained: return "attained";
    case AttainmentVerdict::not_attained: return "not-attained";
    case AttainmentVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

/// Finitely many weighted atoms plus an optional structured tail: a single
/// accumulation point approached by atoms of eventually-constant sign.
struct AtomicTail {
  Rational accumulation;
  Rational mass;
  int limiting_sign = 0;  // +1, -1, or 0 for unknown
};

struct AtomicMeasure {
  std::vector<std::pair<Rational, Rational>> atoms;  // (location, weight)
  std::optional<AtomicTail> tail;

  void validate() const {
    for (const auto& [loc, w] : atoms) {
      (void)w;
      if (loc.sign() < 0 || loc > Rational(1))
        throw DomainError("atomic measure: atom location outside [0,1]");
    }
    if (tail) {
      if (tail->accumulation.sign() < 0 || tail->accumulation > Rational(1))
        throw DomainError("atomic measure: accumulation point outside [0,1]");
      if (tail->mass.sign() < 0) throw DomainError("atomic measure: negative tail mass");
      if (tail->limiting_sign < -1 || tail->limiting_sign > 1)
        throw DomainError("atomic measure: malformed limiting sign");
    }
  }

  Rational total_variation() const {
    Rational tv;
    for (const auto& [loc, w] : atoms) {
      (void)loc;
      tv += abs(w);
    }
    if (tail) tv += tail->mass;
    return tv;
  }
};

/// Certificate-based norm-attainment check for mu as a functional on
/// C[0,1]. A conflict between the tail's limiting sign and the sign of an
/// atom sitting at the accumulation point rules attainment out; finitely
/// many constraints (or a sign-consistent tail) are always interpolable by
/// a continuous selector.
inline AttainmentVerdict atomic_attainment_check(const AtomicMeasure& mu) {
  mu.validate();
  if (!mu.tail) return AttainmentVerdict::attained;
  if (mu.tail->limiting_sign == 0) return AttainmentVerdict::inconclusive;
  Rational at_accum;
  for (const auto& [loc, w] : mu.atoms)
    if (loc == mu.tail->accumulation) at_accum += w;
  if (at_accum.is_zero()) return AttainmentVerdict::attained;
  return at_accum.sign() == mu.tail->limiting_sign ? AttainmentVerdict::attained
                                                   : AttainmentVerdict::not_attained;
}

/// A single piecewise-linear function on [0,1] with rational breakpoints.
struct PiecewiseLinearFn {
  std::vector<CodingSegment> segments;

  void validate() const {
    if (segments.empty()) throw DomainError("piecewise-linear function without segments");
    if (!(segments.front().lo == Rational(0)) || !(segments.back().hi == Rational(1)))
      throw DomainError("piecewise-linear function must cover [0,1]");
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (!(segments[i].lo < segments[i].hi))
        throw DomainError("piecewise-linear segment must have positive length");
      if (i + 1 < segments.size() && !(segments[i].hi == segments[i + 1].lo))
        throw DomainError("piecewise-linear segments must be contiguous");
    }
  }
};

/// ess-sup attainment for f acting on L1[0,1]: the norm is attained exactly
/// when |f| meets its maximum on a set of positive measure, i.e. on a flat
/// segment at the maximum.
inline AttainmentVerdict esssup_attainment_check(const PiecewiseLinearFn& f) {
  f.validate();
  Rational m;
  for (const auto& s : f.segments) {
    m = std::max(m, abs(s.v_lo));
    m = std::max(m, abs(s.v_hi));
  }
  for (const auto& s : f.segments)
    if (s.v_lo == s.v_hi && abs(s.v_lo) == m) return AttainmentVerdict::attained;
  return AttainmentVerdict::not_attained;
}

enum class Attainment {
  attained,
  not_attained_wstar,
  attained_hyperplane,
  not_attained_hyperplane,
  unknown
};

inline std::string to_string(Attainment a) {
  switch (a) {
    case Attainment::attained: return "attained";
    case Attainment::not_attained_wstar: return "not-attained-by-wstar-obstruction";
    case Attainment::attained_hyperplane: return "attained-hyperplane";
    case Attainment::not_attained_hyperplane: return "not-attained-hyperplane";
    case Attainment::unknown: return "unknown";
  }
  return "unknown";
}

struct LadderEvidence {
  std::optional<WstarObstructionCertificate> obstruction;
  std::vector<ConsistencyRow> refinement_rows;
  /// Policy knob: levels whose uniqueness + consistency must be certified
  /// before a not-attained verdict is issued.
  std::vector<int> required_levels = {1, 2, 3, 4};
  std::optional<AttainmentVerdict> hyperplane_verdict;
};

struct LadderReport {
  Rational w_value;
  Rational y_value;
  int codim = 0;
  bool bounds_ok = false;
  Attainment attainment = Attainment::unknown;
  std::optional<WstarObstructionCertificate> obstruction;
  std::vector<ConsistencyRow> refinement_rows;
  std::vector<int> required_levels;
  std::optional<AttainmentVerdict> hyperplane_verdict;
};

/// The duality ladder: lambda(Y, C[0,1]) = 1 + lambda(W, M[0,1]), with
/// Kadec-Snobar style bound checks and a certificate-gated attainment
/// verdict. Non-attainment is only reported when the discrete obstruction
/// is established exactly: the rank-one certificate plus per-level
/// uniqueness and consistency at every required refinement, or a
/// hyperplane attainment verdict for codimension 1.
inline LadderReport duality_ladder(const Rational& w_value, int codim,
                                   const LadderEvidence& ev = {}) {
  if (codim < 1) throw DomainError("duality ladder needs codimension >= 1");
  LadderReport rep;
  rep.w_value = w_value;
  rep.y_value = Rational(1) + w_value;
  rep.codim = codim;
  const Rational back = rep.y_value - Rational(1);
  rep.bounds_ok = (Rational(2) <= rep.y_value) && (back * back <= Rational(codim));
  rep.obstruction = ev.obstruction;
  rep.refinement_rows = ev.refinement_rows;
  rep.required_levels = ev.required_levels;
  rep.hyperplane_verdict = ev.hyperplane_verdict;
  if (!rep.bounds_ok) return rep;  // attainment stays unknown; input is impossible

  if (codim == 1) {
    if (ev.hyperplane_verdict) {
      if (*ev.hyperplane_verdict == AttainmentVerdict::attained)
        rep.attainment = Attainment::attained_hyperplane;
      else if (*ev.hyperplane_verdict == AttainmentVerdict::not_attained)
        rep.attainment = Attainment::not_attained_hyperplane;
    }
    return rep;
  }

  if (ev.obstruction && ev.obstruction->holds) {
    bool covered = !ev.required_levels.empty();
    for (const int level : ev.required_levels) {
      bool found = false;
      for (const auto& row : ev.refinement_rows)
        if (row.level == level && row.consistent && row.probed && row.unique) found = true;
      covered = covered && found;
    }
    if (covered) rep.attainment = Attainment::not_attained_wstar;
  }
  return rep;
}

inline LadderReport duality_ladder(const MinProjResult& w, const LadderEvidence& ev = {}) {
  return duality_ladder(w.value, w.optimal.subspace.dim, ev);
}

}  // namespace projlab
