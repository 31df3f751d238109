#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlmatch/engine.hpp"
#include "dlmatch/graph.hpp"
#include "dlmatch/matching.hpp"

namespace dlmatch {

/// Distribution of the departure offset d_i. Geometric counts failures
/// before the first success (support 0, 1, 2, ...), success probability delta.
struct DepartureModel {
  enum class Kind { Deterministic, Geometric, Explicit, Categorical };
  Kind kind = Kind::Deterministic;
  int d = 0;
  Rational delta;
  std::vector<int> offsets;                          // Explicit
  std::vector<std::pair<int, Rational>> categories;  // Categorical: (offset, probability)

  static DepartureModel deterministic(int d) {
    if (d < 0) throw InvalidInput("negative deadline");
    DepartureModel m;
    m.kind = Kind::Deterministic;
    m.d = d;
    return m;
  }
  static DepartureModel geometric(Rational delta) {
    if (delta <= 0 || delta >= 1) throw InvalidInput("geometric rate must lie in (0,1)");
    DepartureModel m;
    m.kind = Kind::Geometric;
    m.delta = std::move(delta);
    return m;
  }
  static DepartureModel explicit_list(std::vector<int> offsets) {
    for (int d : offsets)
      if (d < 0) throw InvalidInput("negative departure offset");
    DepartureModel m;
    m.kind = Kind::Explicit;
    m.offsets = std::move(offsets);
    return m;
  }
  static DepartureModel categorical(std::vector<std::pair<int, Rational>> categories) {
    Rational total(0);
    for (const auto& [v, p] : categories) {
      if (v < 0) throw InvalidInput("negative departure offset");
      if (p < 0) throw InvalidInput("negative probability");
      total += p;
    }
    if (total != 1) throw InvalidInput("categorical probabilities must sum to 1");
    DepartureModel m;
    m.kind = Kind::Categorical;
    m.categories = std::move(categories);
    return m;
  }

  /// Finite probability mass function; empty for Geometric.
  std::vector<std::pair<int, Rational>> pmf() const {
    switch (kind) {
      case Kind::Deterministic:
        return {{d, Rational(1)}};
      case Kind::Categorical:
        return categories;
      case Kind::Explicit: {
        std::vector<std::pair<int, Rational>> out;
        if (offsets.empty()) return out;
        const Rational w(1, static_cast<unsigned long>(offsets.size()));
        for (int v : offsets) out.emplace_back(v, w);
        return out;
      }
      case Kind::Geometric:
        break;
    }
    return {};
  }
};

/// Exact Bernoulli(p) draw: compares a uniform binary fraction with p bit by bit.
inline bool bernoulli(BitSource& bits, const Rational& p) {
  if (p <= 0) return false;
  if (p >= 1) return true;
  Integer r = p.get_num();
  const Integer& den = p.get_den();
  while (r != 0) {
    r *= 2;
    const bool pbit = r >= den;
    if (pbit) r -= den;
    const bool u = bits.next();
    if (u != pbit) return u < pbit;
  }
  return false;
}

inline int sample_offset(const DepartureModel& model, BitSource& bits, Vertex v) {
  switch (model.kind) {
    case DepartureModel::Kind::Deterministic:
      return model.d;
    case DepartureModel::Kind::Explicit:
      return model.offsets.at(static_cast<std::size_t>(v - 1));
    case DepartureModel::Kind::Geometric: {
      int failures = 0;
      while (!bernoulli(bits, model.delta)) ++failures;
      return failures;
    }
    case DepartureModel::Kind::Categorical: {
      Rational left(1);
      for (std::size_t k = 0; k + 1 < model.categories.size(); ++k) {
        const auto& [value, p] = model.categories[k];
        if (left > 0 && bernoulli(bits, p / left)) return value;
        left -= p;
      }
      return model.categories.back().first;
    }
  }
  return 0;
}

/// i.i.d. offsets for vertices 1..n, reproducible from the seed.
inline std::vector<int> sample_departures(const DepartureModel& model, int n, std::uint64_t seed) {
  if (model.kind == DepartureModel::Kind::Explicit && static_cast<int>(model.offsets.size()) != n)
    throw InvalidInput("explicit departures have wrong length");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Vertex v = 1; v <= n; ++v) {
    SeededBits bits(derive_seed(seed, "departure", static_cast<std::uint64_t>(v)));
    out.push_back(sample_offset(model, bits, v));
  }
  return out;
}

/// min over i < j <= horizon of P[i + d_i <= j + d_j | i + d_i >= j], by
/// direct summation. Gaps with a zero-probability condition are skipped;
/// returns 1 when every gap is skipped.
inline Rational hazard_alpha(const DepartureModel& model, int horizon) {
  if (model.kind == DepartureModel::Kind::Geometric) return Rational(1) / (Rational(2) - model.delta);
  const auto pmf = model.pmf();
  std::optional<Rational> best;
  for (int gap = 1; gap < horizon; ++gap) {
    Rational cond(0), joint(0);
    for (const auto& [x, px] : pmf) {
      if (x < gap) continue;
      cond += px;
      for (const auto& [y, py] : pmf)
        if (x - gap <= y) joint += px * py;
    }
    if (cond == 0) continue;
    Rational value = joint / cond;
    if (!best || value < *best) best = value;
  }
  return best.value_or(Rational(1));
}

/// The instance with freshly sampled departures replacing its deadline model.
inline OnlineInstance with_departures(const OnlineInstance& instance, std::vector<int> offsets) {
  OnlineInstance out = instance;
  out.departures = std::move(offsets);
  out.validate();
  return out;
}

struct StochasticEstimate {
  std::uint64_t runs = 0;
  Rational mean_alg{0};
  Rational mean_off{0};
  double stderr_alg = 0;
  /// Mean and standard error of ALG - factor * OFF per run.
  double mean_gap = 0;
  double stderr_gap = 0;
};

/// Monte Carlo over departure draws and policy coins. OFF is recomputed
/// for every realized departure vector.
inline StochasticEstimate monte_carlo_departures(const OnlineInstance& instance, const DepartureModel& model,
                                                 const PolicyFactory& factory, std::uint64_t runs,
                                                 std::uint64_t seed, const Rational& factor) {
  StochasticEstimate est;
  est.runs = runs;
  const int n = instance.size();
  const auto un = static_cast<std::size_t>(n);
  // Integer-scaled weights so the per-run optimum is cheap.
  const auto sw = detail::scale_weights(instance.graph);
  if (!sw.fits_int64) throw CapExceeded("weights too large for the fast optimum");
  std::vector<std::int64_t> w(sw.w.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = sw.w[k].get_si();
  const Rational scale(sw.scale);
  Integer off_sum = 0;
  Rational alg_sum(0);
  double s1 = 0, s2 = 0, g1 = 0, g2 = 0;
  const double fd = factor.get_d();
  const double sd = scale.get_d();
  for (std::uint64_t r = 0; r < runs; ++r) {
    const auto realized = with_departures(instance, sample_departures(model, n, derive_seed(seed, "runs", r)));
    std::int64_t off = 0;
    max_weight_matching_dp<std::int64_t>(
        n,
        [&](int i, int j) {
          return realized.coexist(i + 1, j + 1) ? w[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)]
                                                : std::int64_t{0};
        },
        &off);
    auto policy = factory();
    SeededBits bits(derive_seed(seed, "coins", r));
    const RunResult run = simulate(realized, *policy, bits, false);
    alg_sum += run.collected;
    off_sum += Integer(static_cast<long>(off));
    const double a = run.collected.get_d();
    const double o = static_cast<double>(off) / sd;
    s1 += a;
    s2 += a * a;
    const double gap = a - fd * o;
    g1 += gap;
    g2 += gap * gap;
  }
  if (runs == 0) return est;
  const double nr = static_cast<double>(runs);
  est.mean_alg = alg_sum / Rational(Integer(static_cast<unsigned long>(runs)));
  est.mean_off = Rational(off_sum) / (scale * Rational(Integer(static_cast<unsigned long>(runs))));
  est.mean_alg.canonicalize();
  est.mean_off.canonicalize();
  auto se = [nr](double sum, double sq) {
    if (nr < 2) return 0.0;
    const double mean = sum / nr;
    const double var = std::max(0.0, (sq - nr * mean * mean) / (nr - 1));
    return std::sqrt(var / nr);
  };
  est.stderr_alg = se(s1, s2);
  est.mean_gap = g1 / nr;
  est.stderr_gap = se(g1, g2);
  return est;
}

}  // namespace dlmatch
