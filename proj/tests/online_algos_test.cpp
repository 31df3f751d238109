#include <gtest/gtest.h>

#include "dlmatch/engine.hpp"
#include "dlmatch/gallery.hpp"
#include "dlmatch/generators.hpp"
#include "dlmatch/matching.hpp"
#include "dlmatch/policies.hpp"

using namespace dlmatch;

namespace {

OnlineInstance single_edge(const Rational& w, bool with_roles) {
  OnlineInstance inst;
  inst.graph = WeightedGraph(2);
  inst.graph.set_weight(1, 2, w);
  inst.sigma = ArrivalOrder::identity(2);
  inst.deadline = 1;
  if (with_roles) inst.roles = std::vector<Role>{Role::Seller, Role::Buyer};
  return inst;
}

OnlineInstance tradeoff_path(const Rational& y) { return make_instance("basic-tradeoff", {{"y", y}}).instance; }

RunResult run(const OnlineInstance& inst, const std::string& policy, std::uint64_t seed = 0) {
  auto p = policy_factory(policy)();
  SeededBits bits(seed);
  return simulate(inst, *p, bits);
}

}  // namespace

TEST(Greedy, FourVertexMarketCollectsOne) {
  const auto inst = make_instance("constrained-deterministic-lb", {{"w", Rational(3, 5)}}).instance;
  const auto r = run(inst, "greedy");
  EXPECT_EQ(r.collected, 1);
  ASSERT_EQ(r.schedule.size(), 1u);
  EXPECT_EQ(r.schedule[0].pair, Pair(2, 3));
}

TEST(Greedy, SingleEdge) { EXPECT_EQ(run(single_edge(Rational(5, 2), true), "greedy").collected, Rational(5, 2)); }

TEST(Greedy, RejectsInputWithoutRolesOrWithBadEdges) {
  EXPECT_THROW(run(single_edge(Rational(1), false), "greedy"), InvalidInput);
  auto inst = single_edge(Rational(1), true);
  inst.roles = std::vector<Role>{Role::Buyer, Role::Seller};
  EXPECT_THROW(run(inst, "greedy"), InvalidInput);
  inst.roles = std::vector<Role>{Role::Seller, Role::Seller};
  EXPECT_THROW(run(inst, "dda"), InvalidInput);
}

TEST(Greedy, HalfCompetitiveOnRandomBipartite) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const auto inst = random_bipartite_instance(n, 1 + static_cast<int>(seed % 3), seed);
    ASSERT_TRUE(is_constrained_bipartite(inst));
    const Rational opt = offline_optimum(inst).weight;
    EXPECT_GE(Rational(2 * run(inst, "greedy").collected), opt) << seed;
  }
}

TEST(NaiveGreedy, SingleEdgeIsQuarter) {
  EXPECT_EQ(exact_expectation(single_edge(Rational(3), false), policy_factory("naive-greedy")), Rational(3, 4));
}

TEST(NaiveGreedy, SingleVertexCollectsNothing) {
  OnlineInstance inst;
  inst.graph = WeightedGraph(1);
  inst.sigma = ArrivalOrder::identity(1);
  inst.deadline = 0;
  EXPECT_EQ(exact_expectation(inst, policy_factory("naive-greedy")), 0);
}

TEST(NaiveGreedy, EighthCompetitiveOnRandomInstances) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const auto inst = random_instance(n, 1 + static_cast<int>(seed % 3), seed);
    EXPECT_GE(Rational(8 * exact_expectation(inst, policy_factory("naive-greedy"))), offline_optimum(inst).weight) << seed;
  }
}

TEST(PostponedGreedy, SingleEdgeIsHalf) {
  EXPECT_EQ(exact_expectation(single_edge(Rational(7, 5), false), policy_factory("pg")), Rational(7, 10));
}

TEST(PostponedGreedy, QuarterCompetitiveWithFeasibleDualOnEveryLeaf) {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);
    const auto inst = random_instance(n, 1 + static_cast<int>(seed % 3), seed);
    const Rational opt = offline_optimum(inst).weight;
    const Rational e = exact_expectation(inst, policy_factory("pg"), [&](const Policy& p, const RunResult&, const Rational&) {
      const auto& pg = dynamic_cast<const PostponedGreedyPolicy&>(p);
      const auto report = verify_offline_dual(inst, pg.dual(), opt);
      EXPECT_TRUE(report.feasible) << seed;
      EXPECT_TRUE(report.weak_duality_ok) << seed;
      Rational prices(0);
      for (const auto& x : pg.final_prices()) prices += x;
      EXPECT_EQ(report.objective, Rational(2 * prices));
    });
    EXPECT_GE(Rational(4 * e), opt) << seed;
  }
}

TEST(PostponedGreedy, TightnessFamilyStaysAtHalf) {
  for (const Rational& eps : {Rational(1, 2), Rational(1, 10), Rational(1, 1000)}) {
    const auto inst = make_instance("pg-tightness", {{"eps", eps}}).instance;
    EXPECT_EQ(exact_expectation(inst, policy_factory("pg")), Rational(1, 2));
    EXPECT_EQ(offline_optimum(inst).weight, Rational(2 - eps));
  }
}

TEST(Dda, SellerWithTwoBuyersKeepsTheLaterBetterOne) {
  OnlineInstance inst;
  inst.graph = WeightedGraph(3);
  inst.graph.set_weight(1, 2, Rational(1));
  inst.graph.set_weight(1, 3, Rational(2));
  inst.sigma = ArrivalOrder::identity(3);
  inst.deadline = 2;
  inst.roles = std::vector<Role>{Role::Seller, Role::Buyer, Role::Buyer};
  const auto r = run(inst, "dda");
  EXPECT_EQ(r.collected, 2);
  ASSERT_EQ(r.schedule.size(), 1u);
  EXPECT_EQ(r.schedule[0].pair, Pair(1, 3));
}

TEST(Dda, FourVertexMarket) {
  const auto inst = make_instance("constrained-deterministic-lb", {{"w", Rational(3, 5)}}).instance;
  DdaPolicy p;
  SeededBits bits(0);
  const auto r = simulate(inst, p, bits);
  EXPECT_GE(Rational(2 * r.collected), offline_optimum(inst).weight);
  for (const auto& e : p.conservation_log()) EXPECT_EQ(e.before, e.after);
}

TEST(Dda, ConservationMonotonicityAndHalfCompetitive) {
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const auto inst = random_bipartite_instance(n, 1 + static_cast<int>(seed % 3), seed);
    DdaPolicy p;
    SeededBits bits(seed);
    const auto r = simulate(inst, p, bits);
    EXPECT_GE(Rational(2 * r.collected), offline_optimum(inst).weight) << seed;
    EXPECT_EQ(r.collected, Rational(p.sum_final_prices() + p.sum_final_margins())) << seed;
    EXPECT_EQ(Rational(p.sum_final_prices() + p.sum_final_margins()), p.sum_initial_margins()) << seed;
    for (const auto& e : p.conservation_log()) {
      EXPECT_EQ(e.before, e.after) << seed;
      EXPECT_GE(e.initial_margin, 0);
    }
    for (const auto& h : p.price_history())
      for (std::size_t k = 1; k < h.size(); ++k) EXPECT_LE(h[k - 1], h[k]) << seed;
    for (const auto& h : p.margin_history())
      for (std::size_t k = 1; k < h.size(); ++k) EXPECT_GE(h[k - 1], h[k]) << seed;
  }
}

TEST(Batching, TradeoffPathCollectsOne) { EXPECT_EQ(run(tradeoff_path(Rational(2)), "batching").collected, 1); }

TEST(Batching, LookaheadEqualsLongerDeadline) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto inst = random_instance(9, 1, seed);
    auto longer = inst;
    longer.deadline = 2;
    const auto a = run(inst, "batching:1");
    const auto b = run(longer, "batching");
    EXPECT_EQ(a.collected, b.collected);
    ASSERT_EQ(a.schedule.size(), b.schedule.size());
    for (std::size_t k = 0; k < a.schedule.size(); ++k) EXPECT_EQ(a.schedule[k].pair, b.schedule[k].pair);
  }
}

TEST(Batching, NeverPairsAcrossWindows) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int d = 1 + static_cast<int>(seed % 3);
    const auto inst = random_instance(10, d, seed);
    for (const auto& tp : run(inst, "batching").schedule) {
      const int wa = (inst.arrival(tp.pair.a) - 1) / (d + 1);
      const int wb = (inst.arrival(tp.pair.b) - 1) / (d + 1);
      EXPECT_EQ(wa, wb);
    }
  }
}

TEST(Patient, TradeoffPathTakesTheFirstEdge) { EXPECT_EQ(run(tradeoff_path(Rational(2)), "patient").collected, 1); }

TEST(Patient, ZeroWeightsAndSingleEdge) {
  EXPECT_EQ(run(single_edge(Rational(0), false), "patient").collected, 0);
  EXPECT_EQ(run(single_edge(Rational(4), false), "patient").collected, 4);
}
