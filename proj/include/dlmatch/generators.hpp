#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dlmatch/engine.hpp"
#include "dlmatch/graph.hpp"
#include "dlmatch/report.hpp"

namespace dlmatch {

struct GeneratorOptions {
  int max_numerator = 12;
  int max_denominator = 6;
  /// Probability (in percent) that a pair gets a positive weight.
  int density_percent = 70;
  bool random_sigma = true;
};

namespace detail {

inline Rational random_weight(std::mt19937_64& rng, const GeneratorOptions& opt) {
  std::uniform_int_distribution<int> num(1, opt.max_numerator);
  std::uniform_int_distribution<int> den(1, opt.max_denominator);
  Rational w(num(rng), den(rng));
  w.canonicalize();
  return w;
}

inline bool coin_percent(std::mt19937_64& rng, int percent) {
  return std::uniform_int_distribution<int>(0, 99)(rng) < percent;
}

}  // namespace detail

/// Random instance on n vertices with deadline d and rational weights.
inline OnlineInstance random_instance(int n, int d, std::uint64_t seed, const GeneratorOptions& opt = {}) {
  std::mt19937_64 rng(derive_seed(seed, "instance"));
  OnlineInstance inst;
  inst.graph = WeightedGraph(n);
  for (Vertex i = 1; i <= n; ++i)
    for (Vertex j = i + 1; j <= n; ++j)
      if (detail::coin_percent(rng, opt.density_percent)) inst.graph.set_weight(i, j, detail::random_weight(rng, opt));
  inst.sigma = opt.random_sigma ? random_order(n, derive_seed(seed, "sigma")) : ArrivalOrder::identity(n);
  inst.deadline = d;
  inst.validate();
  return inst;
}

/// Random constrained bipartite instance: roles are drawn per vertex and
/// only seller-to-later-buyer pairs carry weight.
inline OnlineInstance random_bipartite_instance(int n, int d, std::uint64_t seed, const GeneratorOptions& opt = {}) {
  std::mt19937_64 rng(derive_seed(seed, "bipartite"));
  OnlineInstance inst;
  inst.graph = WeightedGraph(n);
  inst.sigma = opt.random_sigma ? random_order(n, derive_seed(seed, "sigma")) : ArrivalOrder::identity(n);
  inst.deadline = d;
  std::vector<Role> roles;
  for (int v = 0; v < n; ++v) roles.push_back(detail::coin_percent(rng, 50) ? Role::Seller : Role::Buyer);
  for (Vertex i = 1; i <= n; ++i)
    for (Vertex j = 1; j <= n; ++j) {
      if (roles[static_cast<std::size_t>(i - 1)] != Role::Seller || roles[static_cast<std::size_t>(j - 1)] != Role::Buyer)
        continue;
      if (inst.sigma.slot_of(i) > inst.sigma.slot_of(j)) continue;
      if (detail::coin_percent(rng, opt.density_percent)) inst.graph.set_weight(i, j, detail::random_weight(rng, opt));
    }
  inst.roles = std::move(roles);
  inst.validate();
  return inst;
}

}  // namespace dlmatch
