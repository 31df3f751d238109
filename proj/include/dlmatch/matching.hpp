#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dlmatch/graph.hpp"

namespace dlmatch {

inline constexpr int kMaxExactMatchingVertices = 24;

/// Maximum-weight matching by dynamic programming over vertex subsets.
/// `weight(i, j)` takes 0-based indices. Among optimal matchings the one
/// with the lexicographically smallest sorted pair list is returned; only
/// positive edges are ever used. Returned pairs are 1-based.
template <class W, class WeightFn>
std::vector<Pair> max_weight_matching_dp(int n, WeightFn&& weight, W* value = nullptr) {
  if (n > kMaxExactMatchingVertices)
    throw CapExceeded("exact matching limited to " + std::to_string(kMaxExactMatchingVertices) +
                      " vertices, got " + std::to_string(n));
  std::vector<Pair> pairs;
  if (n <= 0) {
    if (value) *value = W(0);
    return pairs;
  }
  const auto un = static_cast<std::size_t>(n);
  std::vector<W> wt(un * un, W(0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      W w = weight(i, j);
      if (w > 0) wt[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)] = w;
    }
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1u);
  std::vector<W> best(static_cast<std::size_t>(full) + 1, W(0));
  for (std::uint32_t mask = 1; mask <= full && mask != 0; ++mask) {
    const int i = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    W top = best[rest];
    for (std::uint32_t r = rest; r; r &= r - 1) {
      const int j = std::countr_zero(r);
      const W& w = wt[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)];
      if (w > 0) {
        W cand = w + best[rest & ~(1u << j)];
        if (cand > top) top = cand;
      }
    }
    best[mask] = top;
  }
  std::uint32_t mask = full;
  while (mask) {
    const int i = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    bool matched = false;
    for (std::uint32_t r = rest; r; r &= r - 1) {
      const int j = std::countr_zero(r);
      const W& w = wt[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)];
      if (w > 0 && w + best[rest & ~(1u << j)] == best[mask]) {
        pairs.emplace_back(i + 1, j + 1);
        mask = rest & ~(1u << j);
        matched = true;
        break;
      }
    }
    if (!matched) mask = rest;
  }
  if (value) *value = best[full];
  return pairs;
}

namespace detail {

/// Common denominator of all graph weights and the scaled integer weights.
struct ScaledWeights {
  Integer scale;
  std::vector<Integer> w;  // n*n, 0-based
  bool fits_int64 = false;
};

inline ScaledWeights scale_weights(const WeightedGraph& g) {
  const int n = g.size();
  const auto un = static_cast<std::size_t>(n);
  ScaledWeights out;
  out.scale = 1;
  for (Vertex i = 1; i <= n; ++i)
    for (Vertex j = i + 1; j <= n; ++j) {
      const auto& w = g.weight(i, j);
      if (w > 0) mpz_lcm(out.scale.get_mpz_t(), out.scale.get_mpz_t(), w.get_den_mpz_t());
    }
  out.w.assign(un * un, Integer(0));
  Integer total = 0;
  for (Vertex i = 1; i <= n; ++i)
    for (Vertex j = i + 1; j <= n; ++j) {
      const auto& w = g.weight(i, j);
      if (w <= 0) continue;
      Integer s = w.get_num() * (out.scale / w.get_den());
      total += s;
      out.w[static_cast<std::size_t>(i - 1) * un + static_cast<std::size_t>(j - 1)] = s;
    }
  out.fits_int64 = total < (Integer(1) << 62);
  return out;
}

}  // namespace detail

/// Exact maximum-weight matching for n <= 24; larger graphs are refused.
inline Matching max_weight_matching_exact(const WeightedGraph& g) {
  const int n = g.size();
  if (n > kMaxExactMatchingVertices)
    throw CapExceeded("exact matching limited to " + std::to_string(kMaxExactMatchingVertices) +
                      " vertices, got " + std::to_string(n));
  const auto sw = detail::scale_weights(g);
  const auto un = static_cast<std::size_t>(n);
  Matching m;
  if (sw.fits_int64) {
    std::vector<std::int64_t> w(sw.w.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = sw.w[k].get_si();
    m.pairs = max_weight_matching_dp<std::int64_t>(
        n, [&](int i, int j) { return w[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)]; });
  } else {
    m.pairs = max_weight_matching_dp<Integer>(
        n, [&](int i, int j) { return sw.w[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)]; });
  }
  m.weight = matching_weight(g, m.pairs);
  return m;
}

/// m(G_{d,sigma}): the offline benchmark for one arrival order.
inline Matching offline_optimum(const OnlineInstance& instance) {
  return max_weight_matching_exact(build_online_graph(instance));
}

struct DualSolution {
  std::vector<Rational> lambda;  // lambda[k-1] for vertex k
};

struct DualViolation {
  Vertex i = 0;
  Vertex j = 0;
  /// lambda_i + lambda_j - v_ij (negative when violated).
  Rational slack;
};

struct DualReport {
  bool feasible = true;
  std::vector<DualViolation> violations;
  std::vector<Vertex> negative_entries;
  Rational objective;
  bool weak_duality_ok = true;
};

/// Checks v_kl <= lambda_k + lambda_l on every edge of G_{d,sigma} and
/// lambda >= 0, then compares the dual objective with a claimed primal value.
inline DualReport verify_offline_dual(const OnlineInstance& instance, const DualSolution& dual,
                                      const Rational& claimed_primal) {
  const int n = instance.size();
  if (static_cast<int>(dual.lambda.size()) != n) throw InvalidInput("dual has wrong length");
  DualReport report;
  report.objective = 0;
  for (Vertex k = 1; k <= n; ++k) {
    const auto& l = dual.lambda[static_cast<std::size_t>(k - 1)];
    if (l < 0) report.negative_entries.push_back(k);
    report.objective += l;
  }
  const auto online = build_online_graph(instance);
  for (const auto& e : online.edges()) {
    Rational slack = dual.lambda[static_cast<std::size_t>(e.i - 1)] +
                     dual.lambda[static_cast<std::size_t>(e.j - 1)] - e.weight;
    if (slack < 0) report.violations.push_back({e.i, e.j, slack});
  }
  report.feasible = report.violations.empty() && report.negative_entries.empty();
  report.weak_duality_ok = report.objective >= claimed_primal;
  return report;
}

}  // namespace dlmatch
