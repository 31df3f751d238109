#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "dlmatch/graph.hpp"

namespace dlmatch {

/// {0,1}- or rational-weighted graph used as an edge mask.
using GraphMask = WeightedGraph;

inline int cyclic_distance(int i, int j, int n) {
  const int k = std::abs(i - j) % n;
  return std::min(k, n - k);
}

/// C_n^d: i ~ j iff their cyclic distance is at most d.
inline GraphMask cycle_power(int n, int d) {
  if (d < 0) throw InvalidInput("negative d");
  if (n <= 2 * d) throw InvalidInput("cycle power needs n > 2d (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");
  GraphMask g(n);
  for (Vertex i = 1; i <= n; ++i)
    for (Vertex j = i + 1; j <= n; ++j)
      if (cyclic_distance(i, j, n) <= d) g.set_weight(i, j, Rational(1));
  return g;
}

/// P_n^d(sigma): i ~ j iff |sigma(i) - sigma(j)| <= d.
inline GraphMask path_power(const ArrivalOrder& sigma, int d) {
  const int n = sigma.size();
  GraphMask g(n);
  for (Vertex i = 1; i <= n; ++i)
    for (Vertex j = i + 1; j <= n; ++j)
      if (std::abs(sigma.slot_of(i) - sigma.slot_of(j)) <= d) g.set_weight(i, j, Rational(1));
  return g;
}

/// b_i(sigma, d) = ceil(sigma(i) / (d+1)).
inline int batch_index(int slot, int d) { return (slot + d) / (d + 1); }

/// B_n^d(sigma): i ~ j iff they fall in the same batch of d+1 slots.
inline GraphMask batched_graph(const ArrivalOrder& sigma, int d) {
  const int n = sigma.size();
  GraphMask g(n);
  for (Vertex i = 1; i <= n; ++i)
    for (Vertex j = i + 1; j <= n; ++j)
      if (batch_index(sigma.slot_of(i), d) == batch_index(sigma.slot_of(j), d)) g.set_weight(i, j, Rational(1));
  return g;
}

namespace detail {
inline void same_size(const GraphMask& a, const GraphMask& b) {
  if (a.size() != b.size())
    throw InvalidInput("mask size mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}
}  // namespace detail

/// a*H + b*H', pointwise.
inline GraphMask add(const Rational& a, const GraphMask& h, const Rational& b, const GraphMask& h2) {
  detail::same_size(h, h2);
  if (a < 0 || b < 0) throw InvalidInput("mask coefficients must be non-negative");
  GraphMask out(h.size());
  for (Vertex i = 1; i <= h.size(); ++i)
    for (Vertex j = i + 1; j <= h.size(); ++j) {
      Rational w = a * h.weight(i, j) + b * h2.weight(i, j);
      if (w != 0) out.set_weight(i, j, w);
    }
  return out;
}

/// H * H', pointwise product.
inline GraphMask mul(const GraphMask& h, const GraphMask& h2) {
  detail::same_size(h, h2);
  GraphMask out(h.size());
  for (Vertex i = 1; i <= h.size(); ++i)
    for (Vertex j = i + 1; j <= h.size(); ++j) {
      Rational w = h.weight(i, j) * h2.weight(i, j);
      if (w != 0) out.set_weight(i, j, w);
    }
  return out;
}

/// True when H dominates H' on every pair.
inline bool is_cover(const GraphMask& h, const GraphMask& h2) {
  detail::same_size(h, h2);
  for (Vertex i = 1; i <= h.size(); ++i)
    for (Vertex j = i + 1; j <= h.size(); ++j)
      if (h.weight(i, j) < h2.weight(i, j)) return false;
  return true;
}

/// f_u: groups {u*k+1, ..., u*(k+1)} become single vertices, adjacent
/// when some pair across the two groups is an edge.
inline GraphMask contract_mask(const GraphMask& h, int u) {
  const int n = h.size();
  if (u <= 0 || n % u != 0) throw InvalidInput("contraction size must divide n");
  const int m = n / u;
  GraphMask out(m);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) {
      bool any = false;
      for (int x = 1; x <= u && !any; ++x)
        for (int y = 1; y <= u && !any; ++y) any = h.weight(a * u + x, b * u + y) > 0;
      if (any) out.set_weight(a + 1, b + 1, Rational(1));
    }
  return out;
}

}  // namespace dlmatch
