#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "dlmatch/graph.hpp"

namespace dlmatch::oracle {

/// Maximum matching weight by recursion over all matchings: vertex v is
/// either left out or paired with some later vertex.
inline Rational brute_force_matching(const WeightedGraph& g) {
  const int n = g.size();
  std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
  std::function<Rational(Vertex)> go = [&](Vertex v) -> Rational {
    while (v <= n && used[static_cast<std::size_t>(v)]) ++v;
    if (v > n) return Rational(0);
    used[static_cast<std::size_t>(v)] = 1;
    Rational best = go(v + 1);
    for (Vertex u = v + 1; u <= n; ++u) {
      if (used[static_cast<std::size_t>(u)]) continue;
      used[static_cast<std::size_t>(u)] = 1;
      const Rational r = g.weight(v, u) + go(v + 1);
      if (r > best) best = r;
      used[static_cast<std::size_t>(u)] = 0;
    }
    used[static_cast<std::size_t>(v)] = 0;
    return best;
  };
  return go(1);
}

inline Rational random_rational(std::mt19937_64& rng, int max_num = 9, int max_den = 5) {
  Rational r(std::uniform_int_distribution<int>(0, max_num)(rng), std::uniform_int_distribution<int>(1, max_den)(rng));
  r.canonicalize();
  return r;
}

inline WeightedGraph random_complete_graph(int n, std::mt19937_64& rng, int max_num = 9, int max_den = 5) {
  WeightedGraph g(n);
  for (Vertex i = 1; i <= n; ++i)
    for (Vertex j = i + 1; j <= n; ++j) g.set_weight(i, j, random_rational(rng, max_num, max_den));
  return g;
}

inline ArrivalOrder random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = k + 1;
  std::shuffle(s.begin(), s.end(), rng);
  return ArrivalOrder(s);
}

}  // namespace dlmatch::oracle
