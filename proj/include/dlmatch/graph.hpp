#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlmatch/rational.hpp"

namespace dlmatch {

/// Vertices are labeled 1..n; arrival slots are 1..n.
using Vertex = int;

struct Edge {
  Vertex i;
  Vertex j;
  Rational weight;
};

/// Symmetric non-negative weights on vertices 1..n. Absent edges weigh 0.
class WeightedGraph {
 public:
  WeightedGraph() = default;
  explicit WeightedGraph(int n) : n_(n), weights_(triangle_size(n)) {
    if (n < 0) throw InvalidInput("negative vertex count");
  }

  int size() const { return n_; }

  const Rational& weight(Vertex i, Vertex j) const {
    static const Rational kZero(0);
    check_vertex(i);
    check_vertex(j);
    if (i == j) return kZero;
    return weights_[index(i, j)];
  }

  void set_weight(Vertex i, Vertex j, Rational w) {
    check_vertex(i);
    check_vertex(j);
    if (i == j) throw InvalidInput("self-loop at vertex " + std::to_string(i));
    if (w < 0) throw InvalidInput("negative weight on edge (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
    weights_[index(i, j)] = std::move(w);
  }

  /// Edges with positive weight, ordered by (i, j) with i < j.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (Vertex i = 1; i <= n_; ++i)
      for (Vertex j = i + 1; j <= n_; ++j)
        if (const auto& w = weights_[index(i, j)]; w > 0) out.push_back({i, j, w});
    return out;
  }

  bool operator==(const WeightedGraph& other) const {
    return n_ == other.n_ && weights_ == other.weights_;
  }

 private:
  static std::size_t triangle_size(int n) {
    return n > 1 ? static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2 : 0;
  }
  std::size_t index(Vertex i, Vertex j) const {
    if (i > j) std::swap(i, j);
    // row-major upper triangle, 1-based
    const auto a = static_cast<std::size_t>(i - 1);
    const auto b = static_cast<std::size_t>(j - 1);
    return a * static_cast<std::size_t>(n_) - a * (a + 1) / 2 + (b - a - 1);
  }
  void check_vertex(Vertex v) const {
    if (v < 1 || v > n_)
      throw InvalidInput("vertex " + std::to_string(v) + " out of range 1.." + std::to_string(n_));
  }

  int n_ = 0;
  std::vector<Rational> weights_;
};

/// Arrival order: slot_of(v) is the period at which vertex v arrives.
class ArrivalOrder {
 public:
  ArrivalOrder() = default;
  explicit ArrivalOrder(std::vector<int> slot_of) : slot_of_(std::move(slot_of)) {
    const int n = size();
    vertex_at_.assign(static_cast<std::size_t>(n), 0);
    for (Vertex v = 1; v <= n; ++v) {
      const int s = slot_of_[static_cast<std::size_t>(v - 1)];
      if (s < 1 || s > n || vertex_at_[static_cast<std::size_t>(s - 1)] != 0)
        throw InvalidInput("arrival order is not a permutation of 1.." + std::to_string(n));
      vertex_at_[static_cast<std::size_t>(s - 1)] = v;
    }
  }

  static ArrivalOrder identity(int n) {
    std::vector<int> s(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = k + 1;
    return ArrivalOrder(std::move(s));
  }

  int size() const { return static_cast<int>(slot_of_.size()); }
  int slot_of(Vertex v) const { return slot_of_.at(static_cast<std::size_t>(v - 1)); }
  Vertex vertex_at(int slot) const { return vertex_at_.at(static_cast<std::size_t>(slot - 1)); }
  const std::vector<int>& slots() const { return slot_of_; }

  bool operator==(const ArrivalOrder&) const = default;

 private:
  std::vector<int> slot_of_;
  std::vector<Vertex> vertex_at_;
};

enum class Role { Seller, Buyer };

/// A weighted graph, an arrival order and a departure rule. Vertex i is
/// present from period slot_of(i) through slot_of(i) + departure_offset(i).
struct OnlineInstance {
  WeightedGraph graph;
  ArrivalOrder sigma;
  int deadline = 0;
  std::optional<std::vector<int>> departures;
  /// Declared seller/buyer roles, used only by constrained-bipartite policies.
  std::optional<std::vector<Role>> roles;

  int size() const { return graph.size(); }

  int departure_offset(Vertex v) const {
    return departures ? (*departures).at(static_cast<std::size_t>(v - 1)) : deadline;
  }
  int arrival(Vertex v) const { return sigma.slot_of(v); }
  int critical_time(Vertex v) const { return arrival(v) + departure_offset(v); }

  /// True when i and j share at least one period of presence.
  bool coexist(Vertex i, Vertex j) const {
    if (i == j) return false;
    if (arrival(i) > arrival(j)) std::swap(i, j);
    return arrival(j) <= critical_time(i);
  }

  void validate() const {
    const int n = graph.size();
    if (sigma.size() != n) throw InvalidInput("sigma has wrong length");
    if (deadline < 0) throw InvalidInput("negative deadline");
    if (departures) {
      if (static_cast<int>(departures->size()) != n)
        throw InvalidInput("departures has wrong length");
      for (int d : *departures)
        if (d < 0) throw InvalidInput("negative departure offset");
    }
    if (roles && static_cast<int>(roles->size()) != n) throw InvalidInput("roles has wrong length");
  }
};

struct Pair {
  Vertex a;
  Vertex b;
  Pair() = default;
  Pair(Vertex x, Vertex y) : a(std::min(x, y)), b(std::max(x, y)) {}
  auto operator<=>(const Pair&) const = default;
};

struct Matching {
  std::vector<Pair> pairs;
  Rational weight;
};

/// G_{d,sigma}: keeps v_ij iff i and j coexist. With the deterministic
/// deadline this is |sigma(i) - sigma(j)| <= d.
inline WeightedGraph build_online_graph(const OnlineInstance& instance) {
  instance.validate();
  const int n = instance.size();
  WeightedGraph out(n);
  for (Vertex i = 1; i <= n; ++i)
    for (Vertex j = i + 1; j <= n; ++j)
      if (instance.coexist(i, j)) {
        const auto& w = instance.graph.weight(i, j);
        if (w > 0) out.set_weight(i, j, w);
      }
  return out;
}

/// Exact total weight; throws when two pairs share a vertex.
inline Rational matching_weight(const WeightedGraph& g, const std::vector<Pair>& pairs) {
  std::vector<char> used(static_cast<std::size_t>(g.size()) + 1, 0);
  Rational total(0);
  for (const auto& p : pairs) {
    if (p.a == p.b) throw InvalidInput("pair matches vertex " + std::to_string(p.a) + " to itself");
    for (Vertex v : {p.a, p.b}) {
      if (v < 1 || v > g.size()) throw InvalidInput("pair vertex out of range");
      if (used[static_cast<std::size_t>(v)])
        throw InvalidInput("disjointness violation at vertex " + std::to_string(v));
      used[static_cast<std::size_t>(v)] = 1;
    }
    total += g.weight(p.a, p.b);
  }
  return total;
}

struct TimedPair {
  Pair pair;
  int time = 0;
};

struct MatchingViolation {
  enum class Reason { VertexReused, MatchedBeforeArrival, MatchedAfterDeparture, EdgeAbsent };
  Pair pair;
  int time = 0;
  Reason reason = Reason::EdgeAbsent;
  /// True when the pair never coexists, whatever the match time.
  bool edge_absent = false;
  std::string detail;
};

/// Checks disjointness, then each pair's match time against the presence
/// windows. Returns the first violation in schedule order.
inline std::optional<MatchingViolation> validate_matching(const OnlineInstance& instance,
                                                          const std::vector<TimedPair>& schedule) {
  using Reason = MatchingViolation::Reason;
  const int n = instance.size();
  std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& [pair, t] : schedule) {
    MatchingViolation v{pair, t, Reason::EdgeAbsent, false, {}};
    if (pair.a < 1 || pair.b > n || pair.a == pair.b) {
      v.detail = "invalid pair";
      return v;
    }
    v.edge_absent = !instance.coexist(pair.a, pair.b);
    if (used[static_cast<std::size_t>(pair.a)] || used[static_cast<std::size_t>(pair.b)]) {
      v.reason = Reason::VertexReused;
      v.detail = "vertex matched twice";
      return v;
    }
    used[static_cast<std::size_t>(pair.a)] = used[static_cast<std::size_t>(pair.b)] = 1;
    const int opens = std::max(instance.arrival(pair.a), instance.arrival(pair.b));
    if (t < opens) {
      const Vertex late = instance.arrival(pair.a) >= instance.arrival(pair.b) ? pair.a : pair.b;
      v.reason = Reason::MatchedBeforeArrival;
      v.detail = "vertex " + std::to_string(late) + " arrives at time " + std::to_string(opens);
      return v;
    }
    const Vertex first_out =
        instance.critical_time(pair.a) <= instance.critical_time(pair.b) ? pair.a : pair.b;
    if (t > instance.critical_time(first_out)) {
      v.reason = Reason::MatchedAfterDeparture;
      v.detail = "vertex " + std::to_string(first_out) + " departed at time " +
                 std::to_string(instance.critical_time(first_out));
      return v;
    }
    if (v.edge_absent) {
      v.detail = "edge absent from the online graph";
      return v;
    }
  }
  return std::nullopt;
}

}  // namespace dlmatch
