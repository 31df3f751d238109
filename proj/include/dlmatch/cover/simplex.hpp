#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlmatch/rational.hpp"

namespace dlmatch {

/// min sum_j x_j  s.t.  sum_{j : i in col_j} x_j >= 1 for every row i, x >= 0.
/// Each column lists the rows it covers.
struct CoveringLp {
  int rows = 0;
  std::vector<std::vector<int>> columns;
};

struct LpSolution {
  Rational objective;
  std::vector<Rational> x;  // per column
  std::vector<Rational> y;  // per row: the packing dual, a lower-bound witness
  std::size_t pivots = 0;
};

namespace detail {

/// Vector of rationals written as integers over one positive denominator.
struct ScaledVector {
  std::vector<Integer> num;
  Integer den;
};

inline ScaledVector scale_vector(const std::vector<Rational>& v) {
  ScaledVector out;
  out.den = 1;
  for (const auto& x : v) mpz_lcm(out.den.get_mpz_t(), out.den.get_mpz_t(), x.get_den_mpz_t());
  out.num.reserve(v.size());
  for (const auto& x : v) out.num.push_back(x.get_num() * (out.den / x.get_den()));
  return out;
}

}  // namespace detail

enum class PivotRule {
  Bland,           // smallest-index leaving row and entering tie-break
  DantzigBland     // most infeasible row; Bland after a run of stalled pivots
};

/// Exact dual simplex on the covering LP, started from the all-slack basis
/// (dual feasible since every cost is 1). Ratio ties always go to the
/// smallest variable index. Variables 0..N-1 are columns, N..N+m-1 are
/// surplus variables.
inline LpSolution solve_covering_lp(const CoveringLp& lp, PivotRule rule = PivotRule::DantzigBland) {
  const int m = lp.rows;
  const int ncols = static_cast<int>(lp.columns.size());
  const auto um = static_cast<std::size_t>(m);
  for (const auto& col : lp.columns)
    for (int r : col)
      if (r < 0 || r >= m) throw InvalidInput("column row index out of range");
  for (int r = 0; r < m; ++r) {
    bool covered = false;
    for (const auto& col : lp.columns)
      for (int x : col) covered = covered || x == r;
    if (!covered) throw InvalidInput("covering LP infeasible: row " + std::to_string(r) + " has no column");
  }

  // Basis inverse (dense), basic variable per row, basic values.
  std::vector<std::vector<Rational>> binv(um, std::vector<Rational>(um, Rational(0)));
  std::vector<int> basic(um);
  std::vector<Rational> xb(um, Rational(-1));
  std::vector<char> is_basic(static_cast<std::size_t>(ncols + m), 0);
  for (int i = 0; i < m; ++i) {
    binv[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = -1;
    basic[static_cast<std::size_t>(i)] = ncols + i;
    is_basic[static_cast<std::size_t>(ncols + i)] = 1;
  }

  LpSolution sol;
  std::vector<Rational> y(um);
  // Once the objective stalls for this many pivots, Bland's rule takes over
  // until it moves again, which rules out cycling.
  constexpr int kStallLimit = 50;
  int stalled = 0;
  Rational last_objective(0);
  while (true) {
    const bool bland = rule == PivotRule::Bland || stalled >= kStallLimit;
    std::optional<std::size_t> leave;
    for (std::size_t i = 0; i < um; ++i) {
      if (xb[i] >= 0) continue;
      if (!leave || (bland ? basic[i] < basic[*leave] : xb[i] < xb[*leave])) leave = i;
    }
    if (!leave) break;
    const std::size_t r = *leave;

    for (std::size_t i = 0; i < um; ++i) y[i] = 0;
    for (std::size_t i = 0; i < um; ++i)
      if (basic[i] < ncols)
        for (std::size_t k = 0; k < um; ++k) y[k] += binv[i][k];
    const auto rho = detail::scale_vector(binv[r]);
    const auto ys = detail::scale_vector(y);

    // Entering: minimize reduced_cost / -alpha over alpha < 0. With
    // alpha = A/rho.den and cost = C/ys.den the common factors cancel.
    int enter = -1;
    Integer best_c, best_a;
    Integer a, c;
    auto consider = [&](int var, const Integer& alpha_num, const Integer& cost_num) {
      if (alpha_num >= 0) return;
      const Integer neg = -alpha_num;
      if (enter < 0 || cost_num * best_a < best_c * neg) {
        enter = var;
        best_c = cost_num;
        best_a = neg;
      }
    };
    for (int j = 0; j < ncols; ++j) {
      if (is_basic[static_cast<std::size_t>(j)]) continue;
      a = 0;
      c = ys.den;
      for (int row : lp.columns[static_cast<std::size_t>(j)]) {
        a += rho.num[static_cast<std::size_t>(row)];
        c -= ys.num[static_cast<std::size_t>(row)];
      }
      consider(j, a, c);
    }
    for (int i = 0; i < m; ++i) {
      if (is_basic[static_cast<std::size_t>(ncols + i)]) continue;
      consider(ncols + i, Integer(-rho.num[static_cast<std::size_t>(i)]), ys.num[static_cast<std::size_t>(i)]);
    }
    if (enter < 0) throw Error("covering LP infeasible");

    // Pivot column u = B^{-1} a_enter.
    std::vector<Rational> u(um, Rational(0));
    if (enter < ncols) {
      for (int row : lp.columns[static_cast<std::size_t>(enter)])
        for (std::size_t i = 0; i < um; ++i) u[i] += binv[i][static_cast<std::size_t>(row)];
    } else {
      for (std::size_t i = 0; i < um; ++i) u[i] = -binv[i][static_cast<std::size_t>(enter - ncols)];
    }
    const Rational piv = u[r];
    for (auto& v : binv[r]) v /= piv;
    xb[r] /= piv;
    for (std::size_t i = 0; i < um; ++i) {
      if (i == r || u[i] == 0) continue;
      const Rational f = u[i];
      for (std::size_t k = 0; k < um; ++k)
        if (binv[r][k] != 0) binv[i][k] -= f * binv[r][k];
      xb[i] -= f * xb[r];
    }
    is_basic[static_cast<std::size_t>(basic[r])] = 0;
    is_basic[static_cast<std::size_t>(enter)] = 1;
    basic[r] = enter;
    ++sol.pivots;
    Rational objective(0);
    for (std::size_t i = 0; i < um; ++i)
      if (basic[i] < ncols) objective += xb[i];
    if (objective != last_objective) {
      stalled = 0;
      last_objective = objective;
    } else {
      ++stalled;
    }
  }

  sol.x.assign(static_cast<std::size_t>(ncols), Rational(0));
  sol.objective = 0;
  for (std::size_t i = 0; i < um; ++i)
    if (basic[i] < ncols) {
      sol.x[static_cast<std::size_t>(basic[i])] = xb[i];
      sol.objective += xb[i];
    }
  sol.y.assign(um, Rational(0));
  for (std::size_t i = 0; i < um; ++i)
    if (basic[i] < ncols)
      for (std::size_t k = 0; k < um; ++k) sol.y[k] += binv[i][k];
  return sol;
}

/// Exact optimality check: primal and dual feasibility plus equal objectives.
inline std::optional<std::string> check_covering_solution(const CoveringLp& lp, const LpSolution& sol) {
  const auto um = static_cast<std::size_t>(lp.rows);
  if (sol.x.size() != lp.columns.size() || sol.y.size() != um) return "solution has wrong shape";
  std::vector<Rational> cover(um, Rational(0));
  Rational px(0), dy(0);
  for (std::size_t j = 0; j < lp.columns.size(); ++j) {
    if (sol.x[j] < 0) return "negative primal entry";
    px += sol.x[j];
    Rational load(0);
    for (int r : lp.columns[j]) {
      cover[static_cast<std::size_t>(r)] += sol.x[j];
      load += sol.y[static_cast<std::size_t>(r)];
    }
    if (load > 1) return "dual infeasible on column " + std::to_string(j);
  }
  for (std::size_t i = 0; i < um; ++i) {
    if (cover[i] < 1) return "row " + std::to_string(i) + " under-covered";
    if (sol.y[i] < 0) return "negative dual entry";
    dy += sol.y[i];
  }
  if (px != dy) return "primal and dual objectives differ";
  if (px != sol.objective) return "objective mismatch";
  return std::nullopt;
}

}  // namespace dlmatch
