#pragma once

#include <map>
#include <string>
#include <vector>

#include "dlmatch/cover/batching.hpp"
#include "dlmatch/cover/certificate.hpp"
#include "dlmatch/cover/mask.hpp"
#include "dlmatch/cover/simplex.hpp"

namespace dlmatch {

enum class CoverLpVariant {
  Lp,      // C_{4(d+1)}^d with d-batchings, period 2(d+1)
  LpPrime  // C_{4k}^k with (k-1)-batchings, period 2k
};

struct CoverLpResult {
  Rational alpha;
  CoverCertificate certificate;
  GraphMask target;
  std::vector<Edge> edges;     // target edges, one LP row each
  std::vector<Rational> dual;  // per target edge; sum(dual) = alpha
  std::size_t columns = 0;
  std::size_t unique_rows = 0;
  std::size_t pivots = 0;
};

/// Covering LP over an explicit set of batchings.
inline CoverLpResult solve_cover_lp_over(const GraphMask& target, int batch_deadline, int period,
                                         const std::vector<PeriodicBatching>& family) {
  CoverLpResult res;
  res.target = target;
  res.edges = target.edges();
  res.columns = family.size();
  const auto ne = res.edges.size();
  // Rows with identical column incidence collapse into one constraint.
  std::vector<std::vector<int>> incidence(ne);
  for (std::size_t c = 0; c < family.size(); ++c)
    for (std::size_t e = 0; e < ne; ++e)
      if (family[c].same_batch(res.edges[e].i, res.edges[e].j)) incidence[e].push_back(static_cast<int>(c));
  std::map<std::vector<int>, int> row_of;
  std::vector<int> row_for_edge(ne);
  std::vector<int> representative;
  for (std::size_t e = 0; e < ne; ++e) {
    auto [it, fresh] = row_of.emplace(incidence[e], static_cast<int>(row_of.size()));
    if (fresh) representative.push_back(static_cast<int>(e));
    row_for_edge[e] = it->second;
  }
  CoveringLp lp;
  lp.rows = static_cast<int>(row_of.size());
  lp.columns.assign(family.size(), {});
  for (std::size_t e = 0; e < ne; ++e)
    if (representative[static_cast<std::size_t>(row_for_edge[e])] == static_cast<int>(e))
      for (int c : incidence[e]) lp.columns[static_cast<std::size_t>(c)].push_back(row_for_edge[e]);
  const LpSolution sol = solve_covering_lp(lp);
  if (auto why = check_covering_solution(lp, sol)) throw Error("simplex output failed its optimality check: " + *why);
  res.unique_rows = static_cast<std::size_t>(lp.rows);
  res.pivots = sol.pivots;
  res.alpha = sol.objective;
  res.dual.assign(ne, Rational(0));
  for (std::size_t r = 0; r < representative.size(); ++r)
    res.dual[static_cast<std::size_t>(representative[r])] = sol.y[r];
  res.certificate.n = target.size();
  res.certificate.d = batch_deadline;
  res.certificate.period = period;
  res.certificate.alpha = sol.objective;
  for (std::size_t c = 0; c < family.size(); ++c)
    if (sol.x[c] > 0) res.certificate.columns.push_back({sol.x[c], family[c]});
  return res;
}

/// LP_d (parameter d) or LP'_k (parameter k), solved exactly.
inline CoverLpResult solve_cover_lp(CoverLpVariant variant, int param) {
  if (variant == CoverLpVariant::Lp) {
    if (param < 1) throw InvalidInput("LP_d needs d >= 1");
    const int d = param;
    const int n = 4 * (d + 1);
    const int p = 2 * (d + 1);
    return solve_cover_lp_over(cycle_power(n, d), d, p, enumerate_periodic_batchings(n, p, d));
  }
  if (param < 2) throw InvalidInput("LP'_k needs k >= 2");
  const int k = param;
  const int n = 4 * k;
  const int p = 2 * k;
  return solve_cover_lp_over(cycle_power(n, k), k - 1, p, enumerate_periodic_batchings(n, p, k - 1));
}

/// Checks that the dual witness proves alpha is a lower bound over a family:
/// every batching collects at most 1 of dual weight.
inline bool dual_witness_holds(const CoverLpResult& res, const std::vector<PeriodicBatching>& family) {
  Rational total(0);
  for (const auto& y : res.dual) {
    if (y < 0) return false;
    total += y;
  }
  if (total != res.alpha) return false;
  for (const auto& b : family) {
    Rational load(0);
    for (std::size_t e = 0; e < res.edges.size(); ++e)
      if (res.dual[e] != 0 && b.same_batch(res.edges[e].i, res.edges[e].j)) load += res.dual[e];
    if (load > 1) return false;
  }
  return true;
}

}  // namespace dlmatch
