#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "projlab/duplication.hpp"
#include "projlab/errors.hpp"
#include "projlab/minproj.hpp"
#include "projlab/rational.hpp"

namespace projlab {

inline void require_even_ge(int n, int lo, const char* what) {
  if (n < lo || n % 2 != 0)
    throw DomainError(std::string(what) + ": n must be even and >= " + std::to_string(lo) +
                      ", got " + std::to_string(n));
}

/// C_n = sum_{l=0}^{n/2-1} C(n,l)(n-2l), computed by direct summation.
inline Integer c_n(int n) {
  require_even_ge(n, 2, "c_n");
  Integer acc(0);
  for (int l = 0; l <= n / 2 - 1; ++l)
    acc += binom(static_cast<unsigned long>(n), static_cast<unsigned long>(l)) * (n - 2 * l);
  return acc;
}

/// Telescoped form n * C(n-1, n/2-1); must agree with c_n.
inline Integer c_n_telescoped(int n) {
  require_even_ge(n, 2, "c_n_telescoped");
  return Integer(n) * binom(static_cast<unsigned long>(n - 1), static_cast<unsigned long>(n / 2 - 1));
}

/// beta_n = C_n / 2^{n-1}: mean absolute value of a sum of n independent
/// signs, in closed form.
inline Rational beta_closed(int n) {
  require_even_ge(n, 2, "beta_closed");
  return Rational(c_n(n)) / Rational::pow2(n - 1);
}

/// Independent oracle: full enumeration of all 2^n sign vectors.
inline Rational beta_bruteforce(int n) {
  if (n < 1) throw DomainError("beta_bruteforce: n must be >= 1");
  if (n > 24) throw DomainError("beta_bruteforce: enumeration budget capped at n = 24");
  const std::uint64_t total = std::uint64_t(1) << n;
  std::uint64_t acc = 0;
  for (std::uint64_t w = 0; w < total; ++w) {
    const int pop = __builtin_popcountll(w);
    const int sum = n - 2 * pop;
    acc += static_cast<std::uint64_t>(sum < 0 ? -sum : sum);
  }
  return Rational(Integer(static_cast<unsigned long>(acc))) / Rational::pow2(n);
}

struct CombinatoricsRow {
  int n = 0;
  Integer c;
  Rational beta;
  std::optional<Rational> beta_brute;  // filled for n <= 14
  double beta_float = 0.0;
  double stirling_ratio = 0.0;  // beta_n / sqrt(2n/pi)
};

inline CombinatoricsRow combinatorics_row(int n, bool with_bruteforce = true) {
  CombinatoricsRow row;
  row.n = n;
  row.c = c_n(n);
  row.beta = beta_closed(n);
  if (with_bruteforce && n <= 14) row.beta_brute = beta_bruteforce(n);
  row.beta_float = row.beta.to_double();
  row.stirling_ratio = row.beta_float / std::sqrt(2.0 * n / 3.14159265358979323846);
  return row;
}

/// lambda(V_{a,b}, l1^8) = (a^2 + ab) / (a^2 + b^2) for a > b > 0.
inline Rational rho2(const Rational& a, const Rational& b) {
  if (!(b.sign() > 0) || !(a > b)) throw DomainError("rho2 requires a > b > 0");
  return (a * a + a * b) / (a * a + b * b);
}

/// Same value through the ratio t = b/a: (1 + t) / (1 + t^2) on 0 < t < 1.
inline Rational rho2_ratio(const Rational& t) {
  if (!(t.sign() > 0) || !(t < Rational(1))) throw DomainError("rho2_ratio requires 0 < t < 1");
  return (Rational(1) + t) / (Rational(1) + t * t);
}

/// rho_n(a) = ( 2^{n-1}/(C_n + n a) + a/(2^{n-1} + a) )^{-1} for even
/// n >= 4 and a >= 0.
inline Rational rho_even(int n, const Rational& a) {
  require_even_ge(n, 4, "rho_even");
  if (a.sign() < 0) throw DomainError("rho_even requires a >= 0");
  const Rational k = Rational::pow2(n - 1);
  const Rational inv = k / (Rational(c_n(n)) + Rational(n) * a) + a / (k + a);
  return Rational(1) / inv;
}

/// Inversion of (1+t)/(1+t^2) = r: the two roots of r t^2 - t + (r-1) = 0.
/// Admissible exactly when 1 < r and (2r-1)^2 <= 2 (the rational-safe form
/// of r <= (1+sqrt2)/2). For rational r strictly inside the range the
/// discriminant is positive; rational roots exist iff it is a square.
struct Codim2Inversion {
  Rational r;
  Rational discriminant;  // 1 - 4 r (r - 1)
  bool exact_roots = false;
  Rational t_small, t_large;        // filled when exact_roots
  double t_small_f = 0.0, t_large_f = 0.0;
};

inline bool rational_sqrt(const Rational& x, Rational& root) {
  if (x.sign() < 0) return false;
  Integer num = x.num(), den = x.den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return false;
  if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return false;
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  root = Rational(rn, rd);
  return true;
}

inline Codim2Inversion invert_rho2(const Rational& r) {
  const Rational bound = (Rational(2) * r - Rational(1)) * (Rational(2) * r - Rational(1));
  if (!(Rational(1) < r) || !(bound <= Rational(2)))
    throw DomainError("invert_rho2: admissible range is 1 < r with (2r-1)^2 <= 2, got r = " + r.str());
  Codim2Inversion out;
  out.r = r;
  out.discriminant = Rational(1) - Rational(4) * r * (r - Rational(1));
  Rational sq;
  if (rational_sqrt(out.discriminant, sq)) {
    out.exact_roots = true;
    out.t_small = (Rational(1) - sq) / (Rational(2) * r);
    out.t_large = (Rational(1) + sq) / (Rational(2) * r);
    out.t_small_f = out.t_small.to_double();
    out.t_large_f = out.t_large.to_double();
  } else {
    const double rd = r.to_double();
    const double sd = std::sqrt(out.discriminant.to_double());
    out.t_small_f = (1.0 - sd) / (2.0 * rd);
    out.t_large_f = (1.0 + sd) / (2.0 * rd);
  }
  return out;
}

/// Inversion of rho_n(a) = r on a >= 0 for 1 < r <= beta_n. The function is
/// continuous with rho_n(0) = beta_n and limit 1 at infinity, but no
/// monotonicity is assumed: a geometric bracket scan over
/// a in {0, 2^-10, ..., 2^20} precedes bisection, every sign is evaluated
/// exactly, and all sign-change brackets are reported. The returned root is
/// the smallest; it is exact when the defining quadratic has a rational
/// root in the bracket, otherwise bisected until the float mirror residual
/// is <= 1e-12.
struct RhoEvenInversion {
  int n = 0;
  Rational r;
  Rational a;
  bool exact = false;
  double residual = 0.0;  // |rho_n(a) - r| in the float mirror
  std::vector<std::pair<Rational, Rational>> brackets;
};

inline RhoEvenInversion invert_rho_even(int n, const Rational& r) {
  require_even_ge(n, 4, "invert_rho_even");
  const Rational beta = beta_closed(n);
  if (!(Rational(1) < r) || !(r <= beta))
    throw DomainError("invert_rho_even: admissible range is 1 < r <= beta_n = " + beta.str() +
                      ", got r = " + r.str());
  RhoEvenInversion out;
  out.n = n;
  out.r = r;

  const auto sign_at = [&](const Rational& a) { return (rho_even(n, a) - r).sign(); };

  std::vector<Rational> grid;
  grid.push_back(Rational(0));
  for (int k = -10; k <= 20; ++k) grid.push_back(Rational::pow2(k));

  int prev_sign = 0;
  Rational prev_a;
  bool have_prev = false;
  for (const auto& a : grid) {
    const int s = sign_at(a);
    if (s == 0) {
      out.brackets.emplace_back(a, a);
    } else if (have_prev && prev_sign != 0 && s != prev_sign) {
      out.brackets.emplace_back(prev_a, a);
    }
    prev_sign = s;
    prev_a = a;
    have_prev = true;
  }
  if (out.brackets.empty())
    throw SolverError("invert_rho_even: no sign change found in the bracket scan");

  // Rational roots, when they exist, come from the quadratic obtained by
  // clearing denominators (both denominators are positive on a >= 0, so
  // the clearing is an equivalence). The smallest nonnegative root wins.
  const Rational k = Rational::pow2(n - 1);
  const Rational cn(c_n(n));
  const Rational qa = Rational(n) * (r - Rational(1));
  const Rational qb = r * (k + cn) - cn - Rational(n) * k;
  const Rational qc = k * (r * k - cn);
  const Rational disc = qb * qb - Rational(4) * qa * qc;
  Rational sq;
  if (rational_sqrt(disc, sq)) {
    for (const Rational& root : {(-qb - sq) / (Rational(2) * qa), (-qb + sq) / (Rational(2) * qa)}) {
      if (root.sign() >= 0 && rho_even(n, root) == r) {
        if (!out.exact || root < out.a) {
          out.a = root;
          out.exact = true;
          out.residual = 0.0;
        }
      }
    }
    if (out.exact) return out;
  }

  auto [lo, hi] = out.brackets.front();
  int lo_sign = sign_at(lo);
  for (int iter = 0; iter < 200; ++iter) {
    const Rational mid = (lo + hi) / Rational(2);
    const Rational diff = rho_even(n, mid) - r;
    const int s = diff.sign();
    if (s == 0) {
      out.a = mid;
      out.exact = true;
      out.residual = 0.0;
      return out;
    }
    const double res = std::abs(diff.to_double());
    if (res <= 1e-12) {
      out.a = mid;
      out.residual = res;
      return out;
    }
    if (s == lo_sign) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw SolverError("invert_rho_even: bisection failed to reach tolerance");
}

/// Orbit construction for the two-dimensional regular symmetric family:
/// the rows of the basis are the eight signed points (+-a, +-b), (+-b, +-a).
/// The construction is a reconstruction validated against the closed-form
/// target by exact LP, never assumed.
inline SubspaceL1 vab_orbit_subspace(const Rational& a, const Rational& b) {
  if (!(b.sign() > 0) || !(a > b)) throw DomainError("vab_orbit_subspace requires a > b > 0");
  std::vector<std::vector<Rational>> cols(2);
  for (const auto& [x, y] : std::vector<std::pair<Rational, Rational>>{{a, b}, {b, a}}) {
    for (const int s1 : {+1, -1}) {
      for (const int s2 : {+1, -1}) {
        cols[0].push_back(Rational(s1) * x);
        cols[1].push_back(Rational(s2) * y);
      }
    }
  }
  return SubspaceL1::from_span_rows(cols);
}

/// Span of the first k standard basis vectors of l1^N; projection constant 1.
inline SubspaceL1 coordinate_subspace(int k, int N) {
  if (k < 1 || k > N) throw DomainError("coordinate_subspace: need 1 <= k <= N");
  ExactMatrix b(N, k);
  for (int i = 0; i < k; ++i) b(i, i) = Rational(1);
  return SubspaceL1(N, std::move(b));
}

inline SubspaceL1 allones_subspace(int N) {
  if (N < 1) throw DomainError("allones_subspace: need N >= 1");
  ExactMatrix b(N, 1);
  for (int i = 0; i < N; ++i) b(i, 0) = Rational(1);
  return SubspaceL1(N, std::move(b));
}

enum class Provenance { paper_asserted_formula, conjectural_reconstruction, synthetic };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::paper_asserted_formula: return "paper-asserted-formula";
    case Provenance::conjectural_reconstruction: return "conjectural-reconstruction";
    case Provenance::synthetic: return "synthetic";
  }
  return "unknown";
}

/// A candidate construction: parameters -> basis, parameters -> claimed
/// projection constant. Entries are only trusted after LP validation.
struct FamilyEntry {
  std::string name;
  Provenance provenance = Provenance::synthetic;
  std::string parameter_domain;
  std::function<SubspaceL1(const std::vector<Rational>&)> basis_constructor;
  std::function<Rational(const std::vector<Rational>&)> target_formula;
  std::vector<std::vector<Rational>> default_grid;
};

struct ValidationPoint {
  std::vector<Rational> params;
  bool constructed = false;
  std::string error;
  Rational lp_value;
  Rational target;
  bool match = false;
  bool probed = false;
  bool unique = false;
  std::vector<InvarianceRow> duplication;
  bool duplication_ok = true;
};

struct ValidationReport {
  std::string entry;
  Provenance provenance = Provenance::synthetic;
  std::vector<ValidationPoint> points;
  bool accepted = false;
};

/// Solves every grid point by exact LP and compares against the entry's
/// target formula; constructor failures are recorded per point without
/// aborting the sweep.
inline ValidationReport validate_family_entry(const FamilyEntry& e,
                                              const std::vector<std::vector<Rational>>& params,
                                              const std::vector<int>& dup_levels = {2, 3},
                                              bool probe_base = true, bool probe_dup = false) {
  ValidationReport rep;
  rep.entry = e.name;
  rep.provenance = e.provenance;
  bool all_ok = !params.empty();
  for (const auto& pt : params) {
    ValidationPoint row;
    row.params = pt;
    try {
      const SubspaceL1 v = e.basis_constructor(pt);
      row.target = e.target_formula(pt);
      row.constructed = true;
      const MinProjResult r = solve_min_projection(v, probe_base);
      row.lp_value = r.value;
      row.match = (r.value == row.target);
      row.probed = r.probed;
      row.unique = r.unique;
      if (row.match && !dup_levels.empty()) {
        const InvarianceReport inv = invariance_scan(v, dup_levels, probe_dup);
        row.duplication = inv.rows;
        row.duplication_ok = inv.all_match;
      }
    } catch (const Error& err) {
      row.constructed = false;
      row.error = err.what();
    }
    all_ok = all_ok && row.constructed && row.match && row.duplication_ok;
    rep.points.push_back(std::move(row));
  }
  rep.accepted = all_ok;
  return rep;
}

/// Built-in registry: the synthetic coordinate family, the all-ones line,
/// and the orbit reconstruction of the two-dimensional regular symmetric
/// family.
inline std::vector<FamilyEntry> builtin_registry() {
  std::vector<FamilyEntry> reg;
  {
    FamilyEntry e;
    e.name = "coordinate";
    e.provenance = Provenance::synthetic;
    e.parameter_domain = "(k, N) integers with 1 <= k <= N";
    e.basis_constructor = [](const std::vector<Rational>& p) {
      if (p.size() != 2 || !p[0].is_integer() || !p[1].is_integer())
        throw DomainError("coordinate family expects integer parameters (k, N)");
      return coordinate_subspace(static_cast<int>(p[0].num().get_si()),
                                 static_cast<int>(p[1].num().get_si()));
    };
    e.target_formula = [](const std::vector<Rational>&) { return Rational(1); };
    e.default_grid = {{Rational(1), Rational(2)}, {Rational(2), Rational(3)},
                      {Rational(2), Rational(4)}, {Rational(3), Rational(6)}};
    reg.push_back(std::move(e));
  }
  {
    FamilyEntry e;
    e.name = "allones";
    e.provenance = Provenance::synthetic;
    e.parameter_domain = "(N) integer with N >= 1";
    e.basis_constructor = [](const std::vector<Rational>& p) {
      if (p.size() != 1 || !p[0].is_integer())
        throw DomainError("allones family expects an integer parameter (N)");
      return allones_subspace(static_cast<int>(p[0].num().get_si()));
    };
    e.target_formula = [](const std::vector<Rational>&) { return Rational(1); };
    e.default_grid = {{Rational(2)}, {Rational(4)}, {Rational(8)}};
    reg.push_back(std::move(e));
  }
  {
    FamilyEntry e;
    e.name = "vab-orbit";
    e.provenance = Provenance::conjectural_reconstruction;
    e.parameter_domain = "(a, b) rationals with a > b > 0";
    e.basis_constructor = [](const std::vector<Rational>& p) {
      if (p.size() != 2) throw DomainError("vab-orbit family expects parameters (a, b)");
      return vab_orbit_subspace(p[0], p[1]);
    };
    e.target_formula = [](const std::vector<Rational>& p) { return rho2(p[0], p[1]); };
    e.default_grid = {{Rational(2), Rational(1)}, {Rational(3), Rational(2)}};
    reg.push_back(std::move(e));
  }
  return reg;
}

inline const FamilyEntry& find_registry_entry(const std::vector<FamilyEntry>& reg,
                                              const std::string& name) {
  for (const auto& e : reg)
    if (e.name == name) return e;
  throw DomainError("unknown family entry: " + name);
}

}  // namespace projlab
