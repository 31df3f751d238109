#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "dlmatch/engine.hpp"
#include "dlmatch/generators.hpp"
#include "dlmatch/policies.hpp"
#include "dlmatch/report.hpp"
#include "test_support.hpp"

using namespace dlmatch;

namespace {

OnlineInstance tradeoff_path(const Rational& y) {
  OnlineInstance inst;
  inst.graph = WeightedGraph(3);
  inst.graph.set_weight(1, 2, Rational(1));
  inst.graph.set_weight(2, 3, y);
  inst.sigma = ArrivalOrder::identity(3);
  inst.deadline = 1;
  return inst;
}

OnlineInstance tightness(const Rational& eps) {
  OnlineInstance inst;
  inst.graph = WeightedGraph(4);
  inst.graph.set_weight(2, 3, Rational(1));
  inst.graph.set_weight(1, 3, Rational(1) - eps);
  inst.graph.set_weight(2, 4, Rational(1));
  inst.sigma = ArrivalOrder::identity(4);
  inst.deadline = 2;
  return inst;
}

OnlineInstance three_cycle(const Rational& v12, const Rational& v23, const Rational& v31) {
  OnlineInstance inst;
  inst.graph = WeightedGraph(3);
  inst.graph.set_weight(1, 2, v12);
  inst.graph.set_weight(2, 3, v23);
  inst.graph.set_weight(1, 3, v31);
  inst.sigma = ArrivalOrder::identity(3);
  inst.deadline = 1;
  return inst;
}

/// Records everything it is shown and checks that only present vertices appear.
class ProbePolicy final : public Policy {
 public:
  std::string name() const override { return "probe"; }
  void on_arrival(Context& ctx, Vertex v, const std::vector<RevealedEdge>& edges) override {
    arrivals.push_back(v);
    for (const auto& e : edges) {
      if (!ctx.present(e.other) || e.other == v) ++leaks;
      seen.push_back({e.other, v});
      EXPECT_EQ(ctx.weight(e.other, v), e.weight);
    }
    for (Vertex u = 1; u <= ctx.horizon(); ++u)
      if (!ctx.present(u)) {
        EXPECT_THROW(ctx.weight(u, v), InvalidInput);
      }
  }
  void on_critical(Context& ctx, Vertex v) override {
    criticals.push_back({ctx.now(), v});
  }
  std::vector<Vertex> arrivals;
  std::vector<std::pair<int, Vertex>> criticals;
  std::vector<std::pair<Vertex, Vertex>> seen;
  int leaks = 0;
};

/// Finalizes a fixed pair at its first chance, valid or not.
class RoguePolicy final : public Policy {
 public:
  RoguePolicy(Vertex a, Vertex b) : a_(a), b_(b) {}
  std::string name() const override { return "rogue"; }
  void on_arrival(Context& ctx, Vertex v, const std::vector<RevealedEdge>&) override {
    if (v == std::max(a_, b_)) ctx.finalize(a_, b_);
  }
  void on_critical(Context&, Vertex) override {}

 private:
  Vertex a_, b_;
};

class CoinPolicy final : public Policy {
 public:
  explicit CoinPolicy(int flips) : flips_(flips) {}
  std::string name() const override { return "coins"; }
  void on_arrival(Context& ctx, Vertex, const std::vector<RevealedEdge>&) override {
    for (int k = 0; k < flips_; ++k) ctx.coin();
  }
  void on_critical(Context&, Vertex) override {}

 private:
  int flips_;
};

}  // namespace

TEST(Simulate, AllZeroWeightsCollectNothing) {
  OnlineInstance inst;
  inst.graph = WeightedGraph(5);
  inst.sigma = ArrivalOrder::identity(5);
  inst.deadline = 2;
  for (const char* name : {"pg", "naive-greedy", "batching", "patient"}) {
    auto p = policy_factory(name)();
    SeededBits bits(1);
    EXPECT_EQ(simulate(inst, *p, bits).collected, 0) << name;
  }
}

TEST(Simulate, BatchingOnTradeoffPathCollectsOne) {
  for (int y : {0, 1, 2, 7}) {
    BatchingPolicy p;
    SeededBits bits(0);
    const auto r = simulate(tradeoff_path(Rational(y)), p, bits);
    EXPECT_EQ(r.collected, 1);
    EXPECT_EQ(r.schedule.size(), 1u);
  }
}

TEST(Simulate, PgTightnessBranches) {
  PostponedGreedyPolicy seller_branch;
  ScriptedBits heads({true});
  const auto r1 = simulate(tightness(Rational(1, 10)), seller_branch, heads);
  EXPECT_EQ(r1.collected, 1);
  ASSERT_EQ(r1.schedule.size(), 1u);
  EXPECT_EQ(r1.schedule[0].pair, Pair(2, 3));

  PostponedGreedyPolicy buyer_branch;
  ScriptedBits tails({false});
  EXPECT_EQ(simulate(tightness(Rational(1, 10)), buyer_branch, tails).collected, 0);
}

TEST(Simulate, EventOrderArrivalsThenCriticalsByIndex) {
  OnlineInstance inst;
  inst.graph = WeightedGraph(4);
  inst.sigma = ArrivalOrder({2, 1, 3, 4});
  inst.deadline = 1;
  inst.departures = std::vector<int>{1, 2, 0, 0};
  ProbePolicy p;
  SeededBits bits(0);
  const auto r = simulate(inst, p, bits);
  // Vertex 1 arrives at 2 and is critical at 3, vertex 2 (slot 1) at 3,
  // vertex 3 at 3: criticals at time 3 in index order.
  std::vector<std::pair<int, Vertex>> expected{{3, 1}, {3, 2}, {3, 3}, {4, 4}};
  EXPECT_EQ(p.criticals, expected);
  ASSERT_GE(r.trace.size(), 4u);
  // At time 3 the arrival of vertex 3 precedes every critical event.
  std::size_t arrival3 = 0, first_critical3 = 0;
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    if (r.trace[k].kind == TraceEvent::Kind::Arrival && r.trace[k].v == 3) arrival3 = k;
    if (r.trace[k].kind == TraceEvent::Kind::Critical && r.trace[k].time == 3 && !first_critical3) first_critical3 = k;
  }
  EXPECT_LT(arrival3, first_critical3);
}

TEST(Simulate, PoliciesNeverSeeFutureVertices) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = random_instance(7, 2, seed);
    ProbePolicy p;
    SeededBits bits(seed);
    simulate(inst, p, bits);
    EXPECT_EQ(p.leaks, 0);
    for (const auto& [other, v] : p.seen) EXPECT_LT(inst.arrival(other), inst.arrival(v));
  }
}

TEST(Simulate, InvalidPairAborts) {
  RoguePolicy p(1, 3);
  SeededBits bits(0);
  EXPECT_THROW(simulate(tradeoff_path(Rational(1)), p, bits), InvalidInput);
}

TEST(Simulate, DeterministicGivenSeed) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = random_instance(8, 2, seed);
    for (const char* name : {"pg", "naive-greedy"}) {
      auto p1 = policy_factory(name)();
      auto p2 = policy_factory(name)();
      SeededBits b1(seed), b2(seed);
      const auto r1 = simulate(inst, *p1, b1);
      const auto r2 = simulate(inst, *p2, b2);
      EXPECT_EQ(r1.trace, r2.trace);
      EXPECT_EQ(r1.collected, r2.collected);
    }
  }
}

TEST(Simulate, SchedulesRespectCriticalTimes) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = random_instance(8, 1 + static_cast<int>(seed % 3), seed);
    for (const char* name : {"pg", "naive-greedy", "batching", "patient"}) {
      auto p = policy_factory(name)();
      SeededBits bits(seed);
      const auto r = simulate(inst, *p, bits);
      EXPECT_FALSE(validate_matching(inst, r.schedule)) << name;
      std::vector<Pair> pairs;
      for (const auto& tp : r.schedule) {
        pairs.push_back(tp.pair);
        EXPECT_LE(tp.time, std::min(inst.critical_time(tp.pair.a), inst.critical_time(tp.pair.b)));
      }
      EXPECT_EQ(matching_weight(inst.graph, pairs), r.collected);
    }
  }
}

TEST(ExactExpectation, PgTightnessIsOneHalf) {
  EXPECT_EQ(exact_expectation(tightness(Rational(1, 10)), policy_factory("pg")), Rational(1, 2));
}

TEST(ExactExpectation, DeterministicPolicyEqualsSimulate) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = random_instance(7, 2, seed);
    BatchingPolicy p;
    SeededBits bits(seed);
    EXPECT_EQ(exact_expectation(inst, policy_factory("batching")), simulate(inst, p, bits).collected);
  }
}

TEST(ExactExpectation, NaiveGreedySingleEdge) {
  OnlineInstance inst;
  inst.graph = WeightedGraph(2);
  inst.graph.set_weight(1, 2, Rational(7, 3));
  inst.sigma = ArrivalOrder::identity(2);
  inst.deadline = 1;
  EXPECT_EQ(exact_expectation(inst, policy_factory("naive-greedy")), Rational(7, 12));
}

TEST(ExactExpectation, LeafProbabilitiesSumToOne) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rational total(0);
    exact_expectation(random_instance(7, 2, seed), policy_factory("pg"),
                      [&](const Policy&, const RunResult&, const Rational& prob) { total += prob; });
    EXPECT_EQ(total, 1);
  }
}

TEST(ExactExpectation, RefusesDeepOrWideTrees) {
  OnlineInstance inst;
  inst.graph = WeightedGraph(1);
  inst.sigma = ArrivalOrder::identity(1);
  inst.deadline = 0;
  EXPECT_THROW(exact_expectation(inst, [] { return std::make_unique<CoinPolicy>(63); }), CapExceeded);
  EXPECT_THROW(exact_expectation(inst, [] { return std::make_unique<CoinPolicy>(21); }), CapExceeded);
  EXPECT_EQ(exact_expectation(inst, [] { return std::make_unique<CoinPolicy>(4); }), 0);
}

TEST(CompetitiveReport, ThreeCycleUniformOrderBatching) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const Rational a = oracle::random_rational(rng), b = oracle::random_rational(rng), c = oracle::random_rational(rng);
    ReportOptions opt;
    opt.arrival = ArrivalModel::Uniform;
    const auto row = competitive_report("tri", three_cycle(a, b, c), "batching", opt);
    EXPECT_EQ(row.alg, (a + b + c) / 3);
    EXPECT_EQ(row.off, (std::max(a, b) + std::max(b, c) + std::max(c, a)) / 3);
    EXPECT_EQ(row.samples_or_exact, "exact");
  }
}

TEST(CompetitiveReport, ThreeCycleLimitRatio) {
  ReportOptions opt;
  opt.arrival = ArrivalModel::Uniform;
  const Rational v(1, 1000);
  const auto row = competitive_report("tri", three_cycle(v, v, Rational(1)), "batching", opt);
  EXPECT_EQ(row.alg, (2 * v + 1) / 3);
  EXPECT_EQ(row.off, (v + 2) / 3);
  EXPECT_NEAR(to_double(row.ratio), 0.5, 0.001);
}

TEST(CompetitiveReport, MonteCarloIsReproducibleAndCsvHasSchema) {
  ReportOptions opt;
  opt.arrival = ArrivalModel::Uniform;
  opt.exact = false;
  opt.samples = 200;
  opt.seed = 9;
  const auto inst = random_instance(9, 2, 3);
  std::ostringstream a, b;
  write_csv_header(a);
  write_csv_header(b);
  write_csv_row(a, competitive_report("x", inst, "pg", opt));
  write_csv_row(b, competitive_report("x", inst, "pg", opt));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().substr(0, a.str().find('\n')),
            "instance_id,policy,arrival_model,n,d,samples_or_exact,alg_value,off_value,ratio");
  EXPECT_NE(a.str().find(",200,"), std::string::npos);
}
