#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "projlab/errors.hpp"
#include "projlab/rational.hpp"

namespace projlab {

enum class LpStatus { optimal, infeasible, unbounded };
enum class LpMode { exact, floating };
enum class PivotRule { bland, dantzig };

/// coeffs . x + offset
struct AffineForm {
  std::vector<Rational> coeffs;
  Rational offset;
};

struct LinearEquality {
  std::vector<Rational> coeffs;
  Rational rhs;
};

/// Minimize t subject to the equalities and, for every group g,
/// sum_i |form_{g,i}(x)| <= t.
struct MinimaxProblem {
  int variables = 0;
  std::vector<LinearEquality> equalities;
  std::vector<std::vector<AffineForm>> abs_groups;

  void validate() const {
    if (variables < 0) throw DomainError("minimax problem: negative variable count");
    for (const auto& eq : equalities)
      if (static_cast<int>(eq.coeffs.size()) != variables)
        throw DomainError("minimax problem: equality row length mismatch");
    bool nonempty = false;
    for (const auto& g : abs_groups) {
      for (const auto& f : g) {
        if (static_cast<int>(f.coeffs.size()) != variables)
          throw DomainError("minimax problem: affine form length mismatch");
        nonempty = true;
      }
    }
    if (!nonempty) throw DomainError("minimax problem: no nonempty abs group");
  }

  int form_count() const {
    int n = 0;
    for (const auto& g : abs_groups) n += static_cast<int>(g.size());
    return n;
  }
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  LpMode mode = LpMode::exact;
  Rational objective;
  std::vector<Rational> assignment;
  /// One multiplier per row of the linearized program, in order: for each
  /// group g and form i the pair (s >= f row, s >= -f row), then the group
  /// rows, then the equality rows.
  std::vector<Rational> dual_multipliers;
  /// Float mode only: max constraint violation of the returned point.
  double float_residual = 0.0;
};

/// Exact range of one variable over the optimal face; a missing endpoint
/// means the face is unbounded in that direction.
struct FaceInterval {
  std::optional<Rational> lo, hi;
  bool degenerate() const { return lo && hi && *lo == *hi; }
};

struct FaceProbe {
  std::vector<int> watched;
  std::vector<FaceInterval> ranges;
  bool is_point = true;
};

namespace detail {

template <class T>
struct Num;

template <>
struct Num<Rational> {
  static constexpr bool exact = true;
  static Rational from(const Rational& r) { return r; }
  static bool is_zero(const Rational& x) { return x.sign() == 0; }
  static bool neg(const Rational& x) { return x.sign() < 0; }
  static bool pos(const Rational& x) { return x.sign() > 0; }
  static double mirror(const Rational& x) { return x.to_double(); }
};

template <>
struct Num<double> {
  static constexpr bool exact = false;
  static constexpr double eps = 1e-9;
  static double from(const Rational& r) { return r.to_double(); }
  static bool is_zero(double x) { return x <= eps && x >= -eps; }
  static bool neg(double x) { return x < -eps; }
  static bool pos(double x) { return x > eps; }
  static double mirror(double x) { return x; }
};

/// Dense simplex tableau with explicit basis bookkeeping. Rows are stored
/// canonicalized (each basic column is a unit column); the cost row holds
/// reduced costs with the negated objective in the rhs cell.
template <class T>
class Tableau {
 public:
  explicit Tableau(int cols) : ncols_(cols), cost_(cols + 1), blocked_(cols, 0), col_row_(cols, -1) {}

  int ncols() const { return ncols_; }
  int nrows() const { return static_cast<int>(rows_.size()); }

  int add_column(bool block = false) {
    for (auto& r : rows_) r.insert(r.begin() + ncols_, T(0));
    cost_.insert(cost_.begin() + ncols_, T(0));
    blocked_.push_back(block ? 1 : 0);
    col_row_.push_back(-1);
    return ncols_++;
  }

  /// Adds a build-time row whose basic column is a fresh unit column.
  void add_row(const std::vector<std::pair<int, T>>& coeffs, const T& rhs, int basic_col) {
    std::vector<T> row(ncols_ + 1);
    for (const auto& [c, v] : coeffs) row[c] += v;
    row[ncols_] = rhs;
    col_row_[basic_col] = nrows();
    basis_.push_back(basic_col);
    rows_.push_back(std::move(row));
  }

  /// Appends a constraint row post-build: eliminates the current basic
  /// variables, then installs a fresh slack as the row's basic variable.
  /// The eliminated rhs must come out nonnegative.
  void append_canonical_row(const std::vector<std::pair<int, T>>& coeffs, const T& rhs) {
    std::vector<T> row(ncols_ + 1);
    for (const auto& [c, v] : coeffs) row[c] += v;
    row[ncols_] = rhs;
    for (int r = 0; r < nrows(); ++r) {
      const T f = row[basis_[r]];
      if (Num<T>::is_zero(f)) continue;
      const auto& br = rows_[r];
      for (int j = 0; j <= ncols_; ++j)
        if (!Num<T>::is_zero(br[j])) Rowop(row[j], f, br[j]);
      row[basis_[r]] = T(0);
    }
    if (Num<T>::neg(row[ncols_]))
      throw SolverError("append_canonical_row: negative residual rhs");
    const int slack = add_column();
    row.insert(row.begin() + slack, T(1));
    col_row_[slack] = nrows();
    basis_.push_back(slack);
    rows_.push_back(std::move(row));
  }

  /// Installs a (sparse) cost vector and recomputes reduced costs and the
  /// objective for the current basis.
  void set_cost(const std::vector<std::pair<int, T>>& sparse) {
    std::fill(cost_.begin(), cost_.end(), T(0));
    for (const auto& [c, v] : sparse) cost_[c] += v;
    for (int r = 0; r < nrows(); ++r) {
      const T f = cost_[basis_[r]];
      if (Num<T>::is_zero(f)) continue;
      const auto& br = rows_[r];
      for (int j = 0; j <= ncols_; ++j)
        if (!Num<T>::is_zero(br[j])) Rowop(cost_[j], f, br[j]);
      cost_[basis_[r]] = T(0);
    }
  }

  T objective() const { return -cost_[ncols_]; }

  T col_value(int col) const {
    const int r = col_row_[col];
    return r < 0 ? T(0) : rows_[r][ncols_];
  }

  const T& reduced_cost(int col) const { return cost_[col]; }

  void block(int col) { blocked_[col] = 1; }

  LpStatus optimize(PivotRule rule) {
    bool forced_bland = Num<T>::exact && rule == PivotRule::bland;
    long stall = 0;
    const long stall_limit = 2L * nrows() + 16;
    const long float_cap = 50000L + 200L * nrows();
    long iterations = 0;
    for (;;) {
      const int enter = pick_entering(forced_bland);
      if (enter < 0) return LpStatus::optimal;
      const int leave = pick_leaving(enter);
      if (leave < 0) return LpStatus::unbounded;
      const bool degenerate = Num<T>::is_zero(rows_[leave][ncols_]);
      pivot(leave, enter);
      if (Num<T>::exact) {
        // Dantzig until a degenerate stall, then Bland for guaranteed
        // termination.
        if (degenerate) {
          if (++stall > stall_limit) forced_bland = true;
        } else {
          stall = 0;
        }
      } else if (++iterations > float_cap) {
        throw SolverError("float-mode simplex iteration limit exceeded");
      }
    }
  }

 private:
  static void Rowop(T& acc, const T& f, const T& x);

  int pick_entering(bool bland) const {
    if (bland) {
      for (int j = 0; j < ncols_; ++j)
        if (!blocked_[j] && Num<T>::neg(cost_[j])) return j;
      return -1;
    }
    int best = -1;
    for (int j = 0; j < ncols_; ++j) {
      if (blocked_[j] || !Num<T>::neg(cost_[j])) continue;
      if (best < 0 || cost_[j] < cost_[best]) best = j;
    }
    return best;
  }

  int pick_leaving(int enter) const {
    int best = -1;
    for (int r = 0; r < nrows(); ++r) {
      const T& a = rows_[r][enter];
      if (!Num<T>::pos(a)) continue;
      if (best < 0) {
        best = r;
        continue;
      }
      // rhs[r]/a  vs  rhs[best]/a_best, cross-multiplied (both pivots > 0)
      const T lhs = rows_[r][ncols_] * rows_[best][enter];
      const T rhs = rows_[best][ncols_] * a;
      if (lhs < rhs || (lhs == rhs && basis_[r] < basis_[best])) best = r;
    }
    return best;
  }

  void pivot(int r, int c) {
    auto& prow = rows_[r];
    const T p = prow[c];
    if (!(p == T(1))) {
      for (int j = 0; j <= ncols_; ++j)
        if (!Num<T>::is_zero(prow[j])) prow[j] /= p;
      prow[c] = T(1);
    }
    nz_.clear();
    for (int j = 0; j <= ncols_; ++j)
      if (!Num<T>::is_zero(prow[j])) nz_.push_back(j);
    for (int i = 0; i < nrows(); ++i) {
      if (i == r) continue;
      eliminate(rows_[i], c, prow);
    }
    eliminate(cost_, c, prow);
    col_row_[basis_[r]] = -1;
    col_row_[c] = r;
    basis_[r] = c;
  }

  void eliminate(std::vector<T>& row, int c, const std::vector<T>& prow) {
    const T f = row[c];
    if (Num<T>::is_zero(f)) {
      row[c] = T(0);
      return;
    }
    for (const int j : nz_) Rowop(row[j], f, prow[j]);
    row[c] = T(0);
  }

  int ncols_;
  std::vector<std::vector<T>> rows_;
  std::vector<T> cost_;
  std::vector<int> basis_;
  std::vector<char> blocked_;
  std::vector<int> col_row_;
  std::vector<int> nz_;

  template <class U>
  friend class MinimaxSolver;
};

template <>
inline void Tableau<Rational>::Rowop(Rational& acc, const Rational& f, const Rational& x) {
  Rational::submul(acc, f, x);
}

template <>
inline void Tableau<double>::Rowop(double& acc, const double& f, const double& x) {
  acc -= f * x;
}

/// Linearization of a MinimaxProblem following the aux-variable scheme:
/// one bound variable s per |affine form|, group rows sum the s against t.
template <class T>
class MinimaxSolver {
 public:
  MinimaxSolver(const MinimaxProblem& p, PivotRule rule) : p_(p), rule_(rule), tab_(0) {
    p.validate();
    const int nv = p.variables;
    const int forms = p.form_count();
    const int groups = static_cast<int>(p.abs_groups.size());
    const int eqs = static_cast<int>(p.equalities.size());
    const int structural = 2 * nv + forms + 1;
    tab_ = Tableau<T>(structural);
    xplus0_ = 0;
    s0_ = 2 * nv;
    t_col_ = 2 * nv + forms;
    n_rows_ = 2 * forms + groups + eqs;
    row_sign_.reserve(n_rows_);
    init_col_.reserve(n_rows_);
    orig_rhs_.reserve(n_rows_);

    int s_idx = 0;
    for (const auto& g : p.abs_groups) {
      for (const auto& f : g) {
        //  f(x) - s <= 0   and   -f(x) - s <= 0
        add_ineq_row(form_coeffs(f, s_idx, +1), T(0) - Num<T>::from(f.offset));
        add_ineq_row(form_coeffs(f, s_idx, -1), Num<T>::from(f.offset));
        ++s_idx;
      }
    }
    int s_base = 0;
    for (const auto& g : p.abs_groups) {
      std::vector<std::pair<int, T>> coeffs;
      for (std::size_t i = 0; i < g.size(); ++i)
        coeffs.emplace_back(s0_ + s_base + static_cast<int>(i), T(1));
      coeffs.emplace_back(t_col_, T(-1));
      add_ineq_row(coeffs, T(0));
      s_base += static_cast<int>(g.size());
    }
    for (const auto& eq : p.equalities) {
      std::vector<std::pair<int, T>> coeffs;
      for (int v = 0; v < nv; ++v) {
        if (eq.coeffs[v].is_zero()) continue;
        const T c = Num<T>::from(eq.coeffs[v]);
        coeffs.emplace_back(xplus0_ + 2 * v, c);
        coeffs.emplace_back(xplus0_ + 2 * v + 1, T(0) - c);
      }
      add_eq_row(coeffs, Num<T>::from(eq.rhs));
    }
  }

  LpStatus solve() {
    if (!artificials_.empty()) {
      std::vector<std::pair<int, T>> phase1;
      for (const int c : artificials_) phase1.emplace_back(c, T(1));
      tab_.set_cost(phase1);
      const LpStatus st = tab_.optimize(rule_);
      if (st != LpStatus::optimal) throw SolverError("phase 1 did not terminate at an optimum");
      if (Num<T>::pos(tab_.objective())) return LpStatus::infeasible;
      purge_artificials();
    }
    tab_.set_cost({{t_col_, T(1)}});
    return tab_.optimize(rule_);
  }

  T objective() const { return tab_.objective(); }

  T var_value(int v) const {
    return tab_.col_value(xplus0_ + 2 * v) - tab_.col_value(xplus0_ + 2 * v + 1);
  }

  std::vector<T> assignment() const {
    std::vector<T> x(p_.variables);
    for (int v = 0; v < p_.variables; ++v) x[v] = var_value(v);
    return x;
  }

  /// Row multipliers for the stored program, mapped back to the original
  /// (un-negated) row orientation.
  std::vector<T> duals() const {
    std::vector<T> y(n_rows_);
    for (int i = 0; i < n_rows_; ++i) {
      T v = T(0) - tab_.reduced_cost(init_col_[i]);
      if (row_sign_[i] < 0) v = T(0) - v;
      y[i] = v;
    }
    return y;
  }

  /// Dual objective (equals the primal objective at an optimum, exactly in
  /// exact mode). Multipliers are paired with the rows in their original
  /// orientation, so sign-normalized rows cancel out.
  T dual_objective() const {
    T acc(0);
    const std::vector<T> y = duals();
    for (int i = 0; i < n_rows_; ++i)
      if (!Num<T>::is_zero(y[i])) acc += y[i] * orig_rhs_[i];
    return acc;
  }

  /// Pins the objective at its optimal value (appends t <= t*).
  void fix_objective() {
    tab_.append_canonical_row({{t_col_, T(1)}}, tab_.col_value(t_col_));
  }

  /// Minimizes sign * x_v over the current feasible set.
  std::pair<LpStatus, T> probe_var(int v, int sign) {
    const T one(1);
    std::vector<std::pair<int, T>> cost;
    if (sign >= 0) {
      cost = {{xplus0_ + 2 * v, one}, {xplus0_ + 2 * v + 1, T(0) - one}};
    } else {
      cost = {{xplus0_ + 2 * v, T(0) - one}, {xplus0_ + 2 * v + 1, one}};
    }
    tab_.set_cost(cost);
    const LpStatus st = tab_.optimize(rule_);
    return {st, var_value(v)};
  }

 private:
  std::vector<std::pair<int, T>> form_coeffs(const AffineForm& f, int s_idx, int sign) {
    std::vector<std::pair<int, T>> coeffs;
    for (int v = 0; v < p_.variables; ++v) {
      if (f.coeffs[v].is_zero()) continue;
      T c = Num<T>::from(f.coeffs[v]);
      if (sign < 0) c = T(0) - c;
      coeffs.emplace_back(xplus0_ + 2 * v, c);
      coeffs.emplace_back(xplus0_ + 2 * v + 1, T(0) - c);
    }
    coeffs.emplace_back(s0_ + s_idx, T(-1));
    return coeffs;
  }

  void add_ineq_row(std::vector<std::pair<int, T>> coeffs, T rhs) {
    orig_rhs_.push_back(rhs);
    int sign = 1;
    if (Num<T>::neg(rhs)) {
      sign = -1;
      rhs = T(0) - rhs;
      for (auto& [c, v] : coeffs) v = T(0) - v;
    }
    const int slack = tab_.add_column();
    coeffs.emplace_back(slack, T(sign));
    if (sign > 0) {
      init_col_.push_back(slack);
      row_sign_.push_back(1);
      tab_.add_row(coeffs, rhs, slack);
    } else {
      const int art = tab_.add_column(true);
      coeffs.emplace_back(art, T(1));
      artificials_.push_back(art);
      init_col_.push_back(art);
      row_sign_.push_back(-1);
      tab_.add_row(coeffs, rhs, art);
    }
  }

  void add_eq_row(std::vector<std::pair<int, T>> coeffs, T rhs) {
    orig_rhs_.push_back(rhs);
    int sign = 1;
    if (Num<T>::neg(rhs)) {
      sign = -1;
      rhs = T(0) - rhs;
      for (auto& [c, v] : coeffs) v = T(0) - v;
    }
    const int art = tab_.add_column(true);
    coeffs.emplace_back(art, T(1));
    artificials_.push_back(art);
    init_col_.push_back(art);
    row_sign_.push_back(sign);
    tab_.add_row(coeffs, rhs, art);
  }

  /// After a successful phase 1: pivot basic artificials out where a real
  /// column is available; redundant rows keep their artificial basic at 0.
  void purge_artificials() {
    for (const int art : artificials_) {
      const int r = tab_.col_row_[art];
      if (r < 0) continue;
      int target = -1;
      for (int j = 0; j < tab_.ncols(); ++j) {
        if (tab_.blocked_[j]) continue;
        if (!Num<T>::is_zero(tab_.rows_[r][j])) {
          target = j;
          break;
        }
      }
      if (target >= 0) tab_.pivot(r, target);
    }
  }

  const MinimaxProblem& p_;
  PivotRule rule_;
  Tableau<T> tab_;
  int xplus0_ = 0, s0_ = 0, t_col_ = 0, n_rows_ = 0;
  std::vector<int> init_col_;
  std::vector<int> row_sign_;
  std::vector<T> orig_rhs_;
  std::vector<int> artificials_;
};

inline Rational eval_affine(const AffineForm& f, const std::vector<Rational>& x) {
  Rational acc = f.offset;
  for (std::size_t v = 0; v < f.coeffs.size(); ++v) {
    if (!f.coeffs[v].is_zero()) acc += f.coeffs[v] * x[v];
  }
  return acc;
}

/// Exact-mode certificate checks; throws SolverError on any violation.
inline void verify_exact_solution(const MinimaxProblem& p, const LpSolution& s,
                                  const Rational& dual_objective) {
  for (const auto& eq : p.equalities) {
    Rational acc;
    for (std::size_t v = 0; v < eq.coeffs.size(); ++v)
      if (!eq.coeffs[v].is_zero()) acc += eq.coeffs[v] * s.assignment[v];
    if (!(acc == eq.rhs)) throw SolverError("optimal point violates an equality");
  }
  bool tight = false;
  for (const auto& g : p.abs_groups) {
    Rational sum;
    for (const auto& f : g) sum += abs(eval_affine(f, s.assignment));
    if (sum > s.objective) throw SolverError("optimal point violates a group bound");
    if (sum == s.objective) tight = true;
  }
  if (!tight) throw SolverError("no abs group is tight at the optimum");
  if (!(dual_objective == s.objective))
    throw SolverError("strong duality violated: dual objective != primal objective");
}

}  // namespace detail

template <class T>
detail::MinimaxSolver<T> make_minimax_solver(const MinimaxProblem& p, PivotRule rule) {
  return detail::MinimaxSolver<T>(p, rule);
}

/// Solves the minimax program. Exact mode carries a verified strong-duality
/// certificate; float mode mirrors the exact path and reports the largest
/// constraint violation of the returned point.
inline LpSolution solve_minimax(const MinimaxProblem& p, LpMode mode = LpMode::exact,
                                PivotRule rule = PivotRule::bland) {
  LpSolution out;
  out.mode = mode;
  if (mode == LpMode::exact) {
    detail::MinimaxSolver<Rational> solver(p, rule);
    out.status = solver.solve();
    if (out.status != LpStatus::optimal) return out;
    out.objective = solver.objective();
    out.assignment = solver.assignment();
    out.dual_multipliers = solver.duals();
    detail::verify_exact_solution(p, out, solver.dual_objective());
    return out;
  }
  detail::MinimaxSolver<double> solver(p, PivotRule::dantzig);
  out.status = solver.solve();
  if (out.status != LpStatus::optimal) return out;
  out.objective = Rational::from_double(solver.objective());
  const auto x = solver.assignment();
  out.assignment.reserve(x.size());
  for (const double v : x) out.assignment.push_back(Rational::from_double(v));
  for (const double y : solver.duals()) out.dual_multipliers.push_back(Rational::from_double(y));
  double resid = 0.0;
  for (const auto& eq : p.equalities) {
    double acc = -eq.rhs.to_double();
    for (std::size_t v = 0; v < eq.coeffs.size(); ++v)
      acc += eq.coeffs[v].to_double() * x[v];
    resid = std::max(resid, std::abs(acc));
  }
  for (const auto& g : p.abs_groups) {
    double sum = 0.0;
    for (const auto& f : g) {
      double acc = f.offset.to_double();
      for (std::size_t v = 0; v < f.coeffs.size(); ++v)
        acc += f.coeffs[v].to_double() * x[v];
      sum += std::abs(acc);
    }
    resid = std::max(resid, sum - solver.objective());
  }
  out.float_residual = resid;
  return out;
}

/// Exact per-variable ranges over the optimal face {feasible, objective t*}.
/// Every watched variable is probed independently (2 re-optimizations each,
/// warm-started on the solved tableau); with point_only the scan stops at
/// the first non-degenerate range.
inline FaceProbe probe_optimal_face(const MinimaxProblem& p, const LpSolution& s,
                                    const std::vector<int>& watched, bool point_only = false,
                                    PivotRule rule = PivotRule::bland) {
  if (s.status != LpStatus::optimal) throw DomainError("probe requires an optimal solution");
  for (const int v : watched)
    if (v < 0 || v >= p.variables) throw DomainError("watched variable out of range");
  FaceProbe out;
  out.watched = watched;
  if (watched.empty()) return out;

  detail::MinimaxSolver<Rational> solver(p, rule);
  if (solver.solve() != LpStatus::optimal)
    throw SolverError("probe re-solve did not reach an optimum");
  if (!(solver.objective() == s.objective))
    throw SolverError("probe re-solve reached a different objective");
  solver.fix_objective();

  for (const int v : watched) {
    FaceInterval iv;
    auto [st_lo, lo] = solver.probe_var(v, +1);
    if (st_lo == LpStatus::optimal) iv.lo = lo;
    auto [st_hi, hi] = solver.probe_var(v, -1);
    if (st_hi == LpStatus::optimal) iv.hi = hi;
    out.ranges.push_back(iv);
    if (!iv.degenerate()) {
      out.is_point = false;
      if (point_only) return out;
    }
  }
  return out;
}

}  // namespace projlab
