#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dlmatch/departures.hpp"
#include "dlmatch/engine.hpp"
#include "dlmatch/matching.hpp"
#include "dlmatch/policies.hpp"

namespace dlmatch {

enum class ArrivalModel { Fixed, Uniform };

inline std::string to_string(ArrivalModel m) { return m == ArrivalModel::Fixed ? "fixed" : "uniform"; }

inline constexpr int kMaxExhaustiveOrders = 8;

struct ReportOptions {
  ArrivalModel arrival = ArrivalModel::Fixed;
  bool exact = true;
  std::uint64_t samples = 1000;
  std::uint64_t seed = 0;
  /// When set, departures are redrawn every run (Monte Carlo only).
  std::optional<DepartureModel> departures;
};

struct ReportRow {
  std::string instance_id;
  std::string policy;
  std::string arrival_model;
  int n = 0;
  int d = 0;
  std::string samples_or_exact;
  Rational alg;
  Rational off;
  Rational ratio;
};

inline Rational safe_ratio(const Rational& alg, const Rational& off) {
  return off == 0 ? Rational(1) : Rational(alg / off);
}

/// Uniform permutation of 1..n drawn from a seeded stream.
inline ArrivalOrder random_order(int n, std::uint64_t seed) {
  std::vector<int> slots(static_cast<std::size_t>(n));
  std::iota(slots.begin(), slots.end(), 1);
  for (int k = n - 1; k > 0; --k) {
    const std::uint64_t r = splitmix64(seed + static_cast<std::uint64_t>(k));
    const auto j = static_cast<std::size_t>(r % static_cast<std::uint64_t>(k + 1));
    std::swap(slots[static_cast<std::size_t>(k)], slots[j]);
  }
  return ArrivalOrder(std::move(slots));
}

/// E[ALG], E[OFF] and their ratio for one instance and one policy.
/// Exhaustive over sigma and coins when allowed, otherwise Monte Carlo.
inline ReportRow competitive_report(const std::string& id, const OnlineInstance& instance,
                                    const std::string& policy_name, const ReportOptions& opt) {
  const auto factory = policy_factory(policy_name);
  const int n = instance.size();
  ReportRow row{id, policy_name, to_string(opt.arrival), n, instance.deadline, "", Rational(0), Rational(0), Rational(0)};
  const bool exhaustive =
      opt.exact && !opt.departures && (opt.arrival == ArrivalModel::Fixed || n <= kMaxExhaustiveOrders);
  if (exhaustive) {
    if (opt.arrival == ArrivalModel::Fixed) {
      row.alg = exact_expectation(instance, factory);
      row.off = offline_optimum(instance).weight;
    } else {
      std::vector<int> slots(static_cast<std::size_t>(n));
      std::iota(slots.begin(), slots.end(), 1);
      Integer count = 0;
      OnlineInstance copy = instance;
      do {
        copy.sigma = ArrivalOrder(slots);
        row.alg += exact_expectation(copy, factory);
        row.off += offline_optimum(copy).weight;
        ++count;
      } while (std::next_permutation(slots.begin(), slots.end()));
      row.alg /= Rational(count);
      row.off /= Rational(count);
    }
    row.samples_or_exact = "exact";
  } else {
    const std::uint64_t runs = std::max<std::uint64_t>(opt.samples, 1);
    const std::string label = id + "/" + policy_name;
    for (std::uint64_t r = 0; r < runs; ++r) {
      OnlineInstance copy = instance;
      if (opt.arrival == ArrivalModel::Uniform) copy.sigma = random_order(n, derive_seed(opt.seed, label + "/sigma", r));
      if (opt.departures)
        copy.departures = sample_departures(*opt.departures, n, derive_seed(opt.seed, label + "/departures", r));
      auto policy = factory();
      SeededBits bits(derive_seed(opt.seed, label + "/coins", r));
      row.alg += simulate(copy, *policy, bits, false).collected;
      row.off += offline_optimum(copy).weight;
    }
    const Rational denom{Integer(static_cast<unsigned long>(runs))};
    row.alg /= denom;
    row.off /= denom;
    row.samples_or_exact = std::to_string(runs);
  }
  row.ratio = safe_ratio(row.alg, row.off);
  return row;
}

inline void write_csv_header(std::ostream& os) {
  os << "instance_id,policy,arrival_model,n,d,samples_or_exact,alg_value,off_value,ratio\n";
}

inline void write_csv_row(std::ostream& os, const ReportRow& r) {
  os << r.instance_id << ',' << r.policy << ',' << r.arrival_model << ',' << r.n << ',' << r.d << ','
     << r.samples_or_exact << ',' << to_string(r.alg) << ',' << to_string(r.off) << ',' << to_string(r.ratio) << '\n';
}

}  // namespace dlmatch
