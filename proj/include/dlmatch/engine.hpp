#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dlmatch/graph.hpp"

namespace dlmatch {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stable sub-stream seed: FNV-1a of the label mixed into the parent seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label, std::uint64_t index = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(splitmix64(seed ^ h) + index);
}

/// Source of fair coin flips for a policy.
class BitSource {
 public:
  virtual ~BitSource() = default;
  virtual bool next() = 0;
  virtual std::uint64_t consumed() const = 0;
};

/// Counter-based stream: bit k is a pure function of (seed, k).
class SeededBits final : public BitSource {
 public:
  explicit SeededBits(std::uint64_t seed) : seed_(seed) {}
  bool next() override {
    const std::uint64_t word = splitmix64(seed_ + (count_ >> 6) * 0x9E3779B97F4A7C15ULL);
    const bool bit = (word >> (count_ & 63)) & 1u;
    ++count_;
    return bit;
  }
  std::uint64_t consumed() const override { return count_; }

 private:
  std::uint64_t seed_;
  std::uint64_t count_ = 0;
};

/// Replays a fixed bit prefix and answers false past its end.
class ScriptedBits final : public BitSource {
 public:
  explicit ScriptedBits(std::vector<bool> script) : script_(std::move(script)) {}
  bool next() override {
    const bool bit = count_ < script_.size() ? script_[count_] : false;
    ++count_;
    return bit;
  }
  std::uint64_t consumed() const override { return count_; }

 private:
  std::vector<bool> script_;
  std::uint64_t count_ = 0;
};

struct TraceEvent {
  enum class Kind { Arrival, Critical, Match, Coin };
  int time = 0;
  Kind kind = Kind::Arrival;
  Vertex v = 0;
  Vertex u = 0;  // partner for Match, bit value for Coin
  bool operator==(const TraceEvent&) const = default;
};

struct RunResult {
  std::vector<TimedPair> schedule;
  Rational collected{0};
  std::vector<TraceEvent> trace;
  std::uint64_t bits_used = 0;
};

/// Weight of the edge between an arriving vertex and a present vertex.
struct RevealedEdge {
  Vertex other;
  Rational weight;
};

/// What a policy may know before the first arrival.
struct PublicInfo {
  int n = 0;
  int deadline = 0;
  bool deterministic_deadlines = true;
  std::optional<std::vector<Role>> roles;
};

class Context;

/// Online matching policy driven by arrival and critical events.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  /// Number of future arrivals revealed at each decision; the engine
  /// realizes it by extending every presence window by this amount.
  virtual int lookahead() const { return 0; }
  virtual void prepare(const PublicInfo&) {}
  virtual void on_arrival(Context& ctx, Vertex v, const std::vector<RevealedEdge>& edges) = 0;
  virtual void on_critical(Context& ctx, Vertex v) = 0;
};

using PolicyFactory = std::function<std::unique_ptr<Policy>()>;

class Context {
 public:
  Context(const OnlineInstance& instance, BitSource& bits, RunResult& result, bool record_trace)
      : instance_(instance),
        bits_(bits),
        result_(result),
        record_(record_trace),
        arrived_(static_cast<std::size_t>(instance.size()) + 1, 0),
        departed_(static_cast<std::size_t>(instance.size()) + 1, 0),
        finalized_(static_cast<std::size_t>(instance.size()) + 1, 0) {}

  int now() const { return now_; }
  int horizon() const { return instance_.size(); }
  bool present(Vertex v) const { return in_range(v) && arrived_[idx(v)] && !departed_[idx(v)]; }
  bool finalized(Vertex v) const { return in_range(v) && finalized_[idx(v)]; }

  /// Weight between two present vertices. Anything else is hidden.
  const Rational& weight(Vertex i, Vertex j) const {
    if (!present(i) || !present(j))
      throw InvalidInput("policy queried a weight involving an absent vertex");
    return instance_.graph.weight(i, j);
  }

  bool coin() {
    const bool bit = bits_.next();
    if (record_) result_.trace.push_back({now_, TraceEvent::Kind::Coin, 0, bit ? 1 : 0});
    return bit;
  }

  /// Commits pair (i, j) now and collects its weight. Aborts on any
  /// presence, edge or disjointness violation.
  void finalize(Vertex i, Vertex j) {
    TimedPair tp{Pair(i, j), now_};
    if (in_range(i) && in_range(j) && (finalized_[idx(i)] || finalized_[idx(j)]))
      throw InvalidInput("policy finalized a vertex twice");
    std::vector<TimedPair> one{tp};
    if (auto bad = validate_matching(instance_, one)) throw InvalidInput("policy emitted invalid pair (" +
        std::to_string(tp.pair.a) + "," + std::to_string(tp.pair.b) + ") at time " +
        std::to_string(now_) + ": " + bad->detail);
    finalized_[idx(i)] = finalized_[idx(j)] = 1;
    result_.schedule.push_back(tp);
    result_.collected += instance_.graph.weight(i, j);
    if (record_) result_.trace.push_back({now_, TraceEvent::Kind::Match, tp.pair.a, tp.pair.b});
  }

 private:
  friend RunResult simulate(const OnlineInstance&, Policy&, BitSource&, bool);
  static std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }
  bool in_range(Vertex v) const { return v >= 1 && v <= instance_.size(); }

  const OnlineInstance& instance_;
  BitSource& bits_;
  RunResult& result_;
  bool record_;
  int now_ = 0;
  std::vector<char> arrived_;
  std::vector<char> departed_;
  std::vector<char> finalized_;
};

/// Instance as seen by a policy with lookahead l: every presence window is
/// extended by l periods.
inline OnlineInstance effective_instance(const OnlineInstance& instance, int lookahead) {
  if (lookahead < 0) throw InvalidInput("negative lookahead");
  if (lookahead == 0) return instance;
  if (instance.departures) throw InvalidInput("lookahead requires deterministic deadlines");
  OnlineInstance out = instance;
  out.deadline += lookahead;
  return out;
}

/// Replays arrivals and critical events. At each tick arrivals come first,
/// then critical vertices in increasing index; critical vertices depart at
/// the end of the tick.
inline RunResult simulate(const OnlineInstance& base, Policy& policy, BitSource& bits,
                          bool record_trace = true) {
  base.validate();
  const OnlineInstance instance = effective_instance(base, policy.lookahead());
  const int n = instance.size();
  RunResult result;
  Context ctx(instance, bits, result, record_trace);
  policy.prepare(PublicInfo{n, base.deadline, !base.departures.has_value(), base.roles});

  int last = n;
  std::vector<std::vector<Vertex>> critical_at;
  for (Vertex v = 1; v <= n; ++v) last = std::max(last, instance.critical_time(v));
  critical_at.assign(static_cast<std::size_t>(last) + 1, {});
  for (Vertex v = 1; v <= n; ++v) critical_at[static_cast<std::size_t>(instance.critical_time(v))].push_back(v);

  std::vector<RevealedEdge> revealed;
  for (int t = 1; t <= last; ++t) {
    ctx.now_ = t;
    if (t <= n) {
      const Vertex v = instance.sigma.vertex_at(t);
      ctx.arrived_[static_cast<std::size_t>(v)] = 1;
      revealed.clear();
      for (Vertex u = 1; u <= n; ++u)
        if (u != v && ctx.present(u)) revealed.push_back({u, instance.graph.weight(u, v)});
      if (record_trace) result.trace.push_back({t, TraceEvent::Kind::Arrival, v, 0});
      policy.on_arrival(ctx, v, revealed);
    }
    const auto& crit = critical_at[static_cast<std::size_t>(t)];
    for (Vertex v : crit) {
      if (record_trace) result.trace.push_back({t, TraceEvent::Kind::Critical, v, 0});
      policy.on_critical(ctx, v);
    }
    for (Vertex v : crit) ctx.departed_[static_cast<std::size_t>(v)] = 1;
  }
  result.bits_used = bits.consumed();
  return result;
}

inline constexpr std::uint64_t kMaxExactLeaves = std::uint64_t{1} << 20;

using LeafCallback = std::function<void(const Policy&, const RunResult&, const Rational& probability)>;

/// Exact expected reward over all coin-flip branches, enumerated by replay.
/// Refuses when more than 2^20 branches would be needed.
inline Rational exact_expectation(const OnlineInstance& instance, const PolicyFactory& factory,
                                  const LeafCallback& on_leaf = {}) {
  Rational total(0);
  std::uint64_t leaves = 0;
  std::vector<std::vector<bool>> stack{{}};
  while (!stack.empty()) {
    std::vector<bool> prefix = std::move(stack.back());
    stack.pop_back();
    if (++leaves > kMaxExactLeaves)
      throw CapExceeded("more than 2^20 random branches; use Monte Carlo");
    auto policy = factory();
    ScriptedBits bits(prefix);
    RunResult run = simulate(instance, *policy, bits, false);
    const std::uint64_t used = run.bits_used;
    if (used > 62) throw CapExceeded("branch depth exceeds exact enumeration window");
    // Bits past the prefix were answered with 0; their 1-siblings are new branches.
    for (std::uint64_t k = used; k > prefix.size(); --k) {
      std::vector<bool> sibling(prefix);
      sibling.resize(static_cast<std::size_t>(k - 1), false);
      sibling.push_back(true);
      stack.push_back(std::move(sibling));
    }
    Rational prob(1, 1);
    prob /= Rational(Integer(1) << static_cast<unsigned>(used));
    prob.canonicalize();
    total += prob * run.collected;
    if (on_leaf) on_leaf(*policy, run, prob);
  }
  return total;
}

}  // namespace dlmatch
