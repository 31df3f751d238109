#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlmatch/graph.hpp"
#include "dlmatch/rational.hpp"

namespace dlmatch {

using Params = std::map<std::string, Rational>;

struct NamedInstance {
  std::string name;
  Params params;
  OnlineInstance instance;
};

inline const std::vector<std::string>& gallery_names() {
  static const std::vector<std::string> names{"basic-tradeoff", "constrained-deterministic-lb", "constrained-randomized-lb",
                                              "pg-tightness", "random-order-3cycle"};
  return names;
}

/// Default parameters per instance; any key not listed is rejected.
inline Params gallery_defaults(const std::string& name) {
  if (name == "basic-tradeoff") return {{"y", Rational(2)}};
  if (name == "constrained-deterministic-lb") return {{"w", Rational(3, 5)}, {"x", Rational(1)}};
  if (name == "constrained-randomized-lb") return {{"x", Rational(1)}};
  if (name == "pg-tightness") return {{"eps", Rational(1, 10)}};
  if (name == "random-order-3cycle") return {{"v12", Rational(0)}, {"v23", Rational(0)}, {"v31", Rational(1)}};
  throw InvalidInput("unknown gallery instance '" + name + "'");
}

namespace detail {

inline OnlineInstance four_vertex_market(const Rational& v13, const Rational& v23, const Rational& v24) {
  OnlineInstance inst;
  inst.graph = WeightedGraph(4);
  inst.graph.set_weight(1, 3, v13);
  inst.graph.set_weight(2, 3, v23);
  inst.graph.set_weight(2, 4, v24);
  inst.sigma = ArrivalOrder::identity(4);
  inst.deadline = 2;
  inst.roles = std::vector<Role>{Role::Seller, Role::Seller, Role::Buyer, Role::Buyer};
  return inst;
}

inline void require_binary(const Rational& x, const std::string& key) {
  if (x != 0 && x != 1) throw InvalidInput(key + " must be 0 or 1");
}

}  // namespace detail

/// Builds a named hard instance. Missing parameters take their defaults.
inline NamedInstance make_instance(const std::string& name, const Params& overrides = {}) {
  Params p = gallery_defaults(name);
  for (const auto& [k, v] : overrides) {
    if (!p.count(k)) throw InvalidInput("instance '" + name + "' has no parameter '" + k + "'");
    p[k] = v;
  }
  NamedInstance out{name, p, {}};
  if (name == "basic-tradeoff") {
    const Rational& y = p["y"];
    if (y < 0) throw InvalidInput("y must be non-negative");
    out.instance.graph = WeightedGraph(3);
    out.instance.graph.set_weight(1, 2, Rational(1));
    out.instance.graph.set_weight(2, 3, y);
    out.instance.sigma = ArrivalOrder::identity(3);
    out.instance.deadline = 1;
  } else if (name == "constrained-deterministic-lb") {
    const Rational& w = p["w"];
    if (w <= 0 || w >= 1) throw InvalidInput("w must lie in (0,1)");
    detail::require_binary(p["x"], "x");
    out.instance = detail::four_vertex_market(w, Rational(1), p["x"]);
  } else if (name == "constrained-randomized-lb") {
    detail::require_binary(p["x"], "x");
    out.instance = detail::four_vertex_market(Rational(1, 2), Rational(1), p["x"]);
  } else if (name == "pg-tightness") {
    const Rational& eps = p["eps"];
    if (eps <= 0 || eps >= 1) throw InvalidInput("eps must lie in (0,1)");
    out.instance = detail::four_vertex_market(Rational(1) - eps, Rational(1), Rational(1));
  } else {
    for (const char* key : {"v12", "v23", "v31"})
      if (p[key] < 0) throw InvalidInput(std::string(key) + " must be non-negative");
    out.instance.graph = WeightedGraph(3);
    out.instance.graph.set_weight(1, 2, p["v12"]);
    out.instance.graph.set_weight(2, 3, p["v23"]);
    out.instance.graph.set_weight(1, 3, p["v31"]);
    out.instance.sigma = ArrivalOrder::identity(3);
    out.instance.deadline = 1;
  }
  out.instance.validate();
  return out;
}

/// Numbers a + b*sqrt(5) with rational a, b.
struct QSqrt5 {
  Rational a;
  Rational b;

  QSqrt5(const Rational& x = Rational(0), const Rational& y = Rational(0)) : a(x), b(y) {}
  QSqrt5(int x) : a(x), b(0) {}

  friend QSqrt5 operator+(const QSqrt5& x, const QSqrt5& y) { return {x.a + y.a, x.b + y.b}; }
  friend QSqrt5 operator-(const QSqrt5& x, const QSqrt5& y) { return {x.a - y.a, x.b - y.b}; }
  friend QSqrt5 operator*(const QSqrt5& x, const QSqrt5& y) {
    return {x.a * y.a + 5 * x.b * y.b, x.a * y.b + x.b * y.a};
  }
  friend QSqrt5 operator/(const QSqrt5& x, const QSqrt5& y) {
    const Rational norm = y.a * y.a - 5 * y.b * y.b;
    if (norm == 0) throw Error("division by zero in Q(sqrt 5)");
    const QSqrt5 num = x * QSqrt5(y.a, -y.b);
    return {num.a / norm, num.b / norm};
  }

  int sign() const {
    const int sa = sgn(a);
    const int sb = sgn(b);
    if (sa == 0 || sa == sb) return sb == 0 ? sa : sb;
    if (sb == 0) return sa;
    // Opposite signs: compare a^2 with 5 b^2.
    const int c = cmp(Rational(a * a), Rational(5 * b * b));
    return c == 0 ? 0 : (c > 0 ? sa : sb);
  }

  friend bool operator==(const QSqrt5& x, const QSqrt5& y) { return x.a == y.a && x.b == y.b; }
  friend bool operator<(const QSqrt5& x, const QSqrt5& y) { return (x - y).sign() < 0; }
  friend bool operator>(const QSqrt5& x, const QSqrt5& y) { return y < x; }
  friend bool operator<=(const QSqrt5& x, const QSqrt5& y) { return !(y < x); }
  friend bool operator>=(const QSqrt5& x, const QSqrt5& y) { return !(x < y); }

  double to_double() const { return a.get_d() + b.get_d() * 2.2360679774997896964; }
};

inline std::string to_string(const QSqrt5& x) {
  if (x.b == 0) return to_string(x.a);
  return to_string(x.a) + " + " + to_string(x.b) + "*sqrt(5)";
}

/// (sqrt(5) - 1) / 2.
inline QSqrt5 golden_weight() { return QSqrt5(Rational(-1, 2), Rational(1, 2)); }

namespace detail {

template <class T>
T max_of(const T& x, const T& y) {
  return x < y ? y : x;
}
template <class T>
T min_of(const T& x, const T& y) {
  return y < x ? y : x;
}

/// Ratio when seller 1 is matched to buyer 3 with probability p and the
/// adversary sets v24 = x: (p(w + x) + (1 - p)) / max(w + x, 1).
template <class T>
T market_ratio(const T& w, const T& p, int x) {
  const T take = w + T(x);
  return (p * take + (T(1) - p)) / max_of(take, T(1));
}

}  // namespace detail

template <class T>
struct GameValue {
  T value;
  T p;  // probability of matching seller 1 at its critical time
};

/// max over p in {0, 1} of min over x in {0, 1}.
template <class T>
GameValue<T> deterministic_bound(const T& w) {
  GameValue<T> best{T(-1), T(0)};
  for (int p = 0; p <= 1; ++p) {
    const T v = detail::min_of(detail::market_ratio(w, T(p), 0), detail::market_ratio(w, T(p), 1));
    if (best.value < v) best = {v, T(p)};
  }
  return best;
}

/// max over p in [0, 1] of min over x in {0, 1}: both payoffs are affine in
/// p, so the optimum sits at an endpoint or where the two lines cross.
template <class T>
GameValue<T> randomized_bound(const T& w) {
  auto worst = [&](const T& p) { return detail::min_of(detail::market_ratio(w, p, 0), detail::market_ratio(w, p, 1)); };
  std::vector<T> candidates{T(0), T(1)};
  const T a0 = detail::market_ratio(w, T(0), 0);
  const T a1 = detail::market_ratio(w, T(0), 1);
  const T s0 = detail::market_ratio(w, T(1), 0) - a0;
  const T s1 = detail::market_ratio(w, T(1), 1) - a1;
  if (!(s0 == s1)) {
    const T p = (a1 - a0) / (s0 - s1);
    if (T(0) <= p && p <= T(1)) candidates.push_back(p);
  }
  GameValue<T> best{T(-1), T(0)};
  for (const auto& p : candidates) {
    const T v = worst(p);
    if (best.value < v) best = {v, p};
  }
  return best;
}

enum class BoundMode { Deterministic, Randomized };

struct OnlineBound {
  std::string family;
  BoundMode mode = BoundMode::Randomized;
  QSqrt5 value;
  QSqrt5 p;
};

/// Best competitive ratio any online algorithm can guarantee on a two-knob
/// family. "constrained-deterministic-lb" uses w = (sqrt 5 - 1)/2 exactly;
/// "fixed-x" removes the adversary's choice.
inline OnlineBound optimal_online_bounds(const std::string& family, BoundMode mode) {
  OnlineBound out;
  out.family = family;
  out.mode = mode;
  if (family == "constrained-deterministic-lb" || family == "constrained-randomized-lb") {
    const QSqrt5 w = family == "constrained-deterministic-lb" ? golden_weight() : QSqrt5(Rational(1, 2));
    const auto g = mode == BoundMode::Deterministic ? deterministic_bound(w) : randomized_bound(w);
    out.value = g.value;
    out.p = g.p;
    return out;
  }
  if (family == "fixed-x") {
    // With x known in advance the better of the two actions is always optimal.
    const QSqrt5 w(Rational(1, 2));
    QSqrt5 worst(1);
    for (int x = 0; x <= 1; ++x) {
      const QSqrt5 best = detail::max_of(detail::market_ratio(w, QSqrt5(0), x), detail::market_ratio(w, QSqrt5(1), x));
      worst = detail::min_of(worst, best);
    }
    out.value = worst;
    out.p = QSqrt5(0);
    return out;
  }
  throw InvalidInput("unsupported family '" + family + "'");
}

}  // namespace dlmatch
