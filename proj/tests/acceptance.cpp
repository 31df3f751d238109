// Acceptance checks: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dlmatch/dlmatch.hpp"

using namespace dlmatch;

namespace {

// Pinned tolerances and sizes.
constexpr double kAlpha2Lo = 2.325, kAlpha2Hi = 2.335;
constexpr double kAlpha4Lo = 2.635, kAlpha4Hi = 2.645;
constexpr double kAlphaPrime4Lo = 3.165, kAlphaPrime4Hi = 3.175;
constexpr int kPipelineGraphs = 20;
constexpr int kPgInstances = 500;
constexpr int kBipartiteInstances = 500;
constexpr double kRatioLo = 0.499, kRatioHi = 0.501;
constexpr int kLookaheadInstances = 100;
constexpr std::uint64_t kStochasticRuns = 100000;
constexpr int kStochasticInstances = 20;
constexpr double kStderrMultiple = 3.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    pass = false;
    detail << " [" << why << "]";
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.pass) ++failures;
  std::cout << "criterion " << id << " " << (out.pass ? "PASS" : "FAIL") << ": " << title << out.detail.str() << " ("
            << secs << " s)" << std::endl;
}

bool in_range(const Rational& x, double lo, double hi) {
  const double v = x.get_d();
  return v >= lo && v <= hi;
}

// Criterion 1.
void covering_lp_values(Outcome& out) {
  struct Case {
    std::string label;
    CoverLpVariant variant;
    int param;
    std::function<bool(const Rational&)> accept;
    std::string expectation;
  };
  const std::vector<Case> cases{
      {"alpha_1", CoverLpVariant::Lp, 1, [](const Rational& a) { return a == 2; }, "= 2"},
      {"alpha_2", CoverLpVariant::Lp, 2, [](const Rational& a) { return in_range(a, kAlpha2Lo, kAlpha2Hi); }, "in [2.325, 2.335]"},
      {"alpha_3", CoverLpVariant::Lp, 3, [](const Rational& a) { return a == Rational(5, 2); }, "= 5/2"},
      {"alpha_4", CoverLpVariant::Lp, 4, [](const Rational& a) { return in_range(a, kAlpha4Lo, kAlpha4Hi); }, "in [2.635, 2.645]"},
      {"alpha'_4", CoverLpVariant::LpPrime, 4, [](const Rational& a) { return in_range(a, kAlphaPrime4Lo, kAlphaPrime4Hi); },
       "in [3.165, 3.175]"},
  };
  for (const auto& c : cases) {
    const auto res = solve_cover_lp(c.variant, c.param);
    const bool certified = verify_certificate(res.certificate, res.target).ok;
    out.detail << " " << c.label << "=" << to_string(res.alpha);
    if (!certified) out.fail(c.label + " certificate does not verify");
    if (!c.accept(res.alpha)) out.fail(c.label + " = " + to_string(res.alpha) + " (" + std::to_string(res.alpha.get_d()) +
                                       "), expected " + c.expectation);
  }
}

// Criterion 2.
void cover_pipeline(Outcome& out) {
  const int n = 8, d = 1;
  const auto base = solve_cover_lp(CoverLpVariant::Lp, 1).certificate;
  const auto cert = extend_cover(base, n);
  if (cert.alpha != 2) out.fail("extended alpha is " + to_string(cert.alpha));
  if (!verify_certificate(cert, cycle_power(n, d)).ok) out.fail("extended certificate does not verify");
  std::mt19937_64 rng(20240801);
  std::uniform_int_distribution<int> num(1, 97), den(1, 13);
  int violations = 0;
  for (int g = 0; g < kPipelineGraphs; ++g) {
    WeightedGraph graph(n);
    for (Vertex i = 1; i <= n; ++i)
      for (Vertex j = i + 1; j <= n; ++j) graph.set_weight(i, j, make_rational(num(rng), den(rng)));
    const auto sw = detail::scale_weights(graph);
    if (!sw.fits_int64) throw Error("weights do not fit the fast matching");
    std::vector<std::int64_t> w(sw.w.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = sw.w[k].get_si();
    std::vector<int> slot(n);
    std::iota(slot.begin(), slot.end(), 1);
    Integer path_total = 0, batch_total = 0;
    do {
      std::int64_t mp = 0, mb = 0;
      auto at = [&](int i, int j) { return w[static_cast<std::size_t>(i * n + j)]; };
      max_weight_matching_dp<std::int64_t>(
          n, [&](int i, int j) { return std::abs(slot[i] - slot[j]) <= d ? at(i, j) : std::int64_t{0}; }, &mp);
      max_weight_matching_dp<std::int64_t>(
          n,
          [&](int i, int j) { return batch_index(slot[i], d) == batch_index(slot[j], d) ? at(i, j) : std::int64_t{0}; },
          &mb);
      path_total += Integer(static_cast<long>(mp));
      batch_total += Integer(static_cast<long>(mb));
    } while (std::next_permutation(slot.begin(), slot.end()));
    if (path_total > 2 * batch_total) ++violations;
  }
  out.detail << " graphs=" << kPipelineGraphs << " orders=40320 violations=" << violations;
  if (violations) out.fail("inequality violated on " + std::to_string(violations) + " graphs");
}

// Criterion 3.
void pg_guarantee(Outcome& out) {
  int below = 0, dual_bad = 0;
  std::uint64_t leaves = 0;
  for (int t = 0; t < kPgInstances; ++t) {
    const int n = 2 + t % 7;
    const int d = 1 + t % 3;
    const auto inst = random_instance(n, d, 3000 + static_cast<std::uint64_t>(t));
    const Rational opt = offline_optimum(inst).weight;
    const Rational e = exact_expectation(inst, policy_factory("pg"), [&](const Policy& p, const RunResult&, const Rational&) {
      ++leaves;
      const auto& pg = dynamic_cast<const PostponedGreedyPolicy&>(p);
      const auto rep = verify_offline_dual(inst, pg.dual(), opt);
      if (!rep.feasible || !rep.weak_duality_ok) ++dual_bad;
    });
    if (4 * e < opt) ++below;
  }
  out.detail << " instances=" << kPgInstances << " branches=" << leaves;
  if (below) out.fail(std::to_string(below) + " instances below OPT/4");
  if (dual_bad) out.fail(std::to_string(dual_bad) + " branches with an infeasible dual");
}

// Criterion 4.
void pg_tightness(Outcome& out) {
  for (const Rational& eps : {Rational(1, 10), Rational(1, 100)}) {
    const auto inst = make_instance("pg-tightness", {{"eps", eps}}).instance;
    const Rational e = exact_expectation(inst, policy_factory("pg"));
    const Rational ratio = e / offline_optimum(inst).weight;
    const Rational want = 1 / (4 - 2 * eps);
    out.detail << " eps=" << to_string(eps) << ": E=" << to_string(e) << " ratio=" << to_string(ratio);
    if (e != Rational(1, 2)) out.fail("E != 1/2");
    if (ratio != want) out.fail("ratio != " + to_string(want));
  }
}

// Criterion 5.
void bipartite_guarantee(Outcome& out) {
  int greedy_below = 0, dda_below = 0, conservation_bad = 0, monotone_bad = 0;
  for (int t = 0; t < kBipartiteInstances; ++t) {
    const int n = 2 + t % 9;
    const auto inst = random_bipartite_instance(n, 1 + t % 3, 5000 + static_cast<std::uint64_t>(t));
    const Rational opt = offline_optimum(inst).weight;
    GreedyPolicy greedy;
    SeededBits gb(t);
    if (2 * simulate(inst, greedy, gb, false).collected < opt) ++greedy_below;
    DdaPolicy dda;
    SeededBits db(t);
    if (2 * simulate(inst, dda, db, false).collected < opt) ++dda_below;
    if (dda.sum_final_prices() + dda.sum_final_margins() != dda.sum_initial_margins()) ++conservation_bad;
    bool monotone = true;
    for (const auto& h : dda.price_history())
      for (std::size_t k = 1; k < h.size(); ++k) monotone = monotone && h[k - 1] <= h[k];
    for (const auto& h : dda.margin_history())
      for (std::size_t k = 1; k < h.size(); ++k) monotone = monotone && h[k - 1] >= h[k];
    if (!monotone) ++monotone_bad;
  }
  out.detail << " instances=" << kBipartiteInstances;
  if (greedy_below) out.fail("greedy below OPT/2 on " + std::to_string(greedy_below));
  if (dda_below) out.fail("dda below OPT/2 on " + std::to_string(dda_below));
  if (conservation_bad) out.fail("price/margin conservation broken on " + std::to_string(conservation_bad));
  if (monotone_bad) out.fail("non-monotone trajectories on " + std::to_string(monotone_bad));
}

// Criterion 6.
void lower_bounds(Outcome& out) {
  const auto rnd = optimal_online_bounds("constrained-randomized-lb", BoundMode::Randomized);
  const auto det = optimal_online_bounds("constrained-deterministic-lb", BoundMode::Deterministic);
  out.detail << " randomized=" << to_string(rnd.value) << " deterministic=" << to_string(det.value);
  if (!(rnd.value == QSqrt5(Rational(4, 5)))) out.fail("randomized bound is not 4/5");
  // Golden ratio fixed point: w = 1/(1+w) with w = (sqrt 5 - 1)/2.
  const QSqrt5 w = det.value;
  if (!(w == golden_weight()) || !(w * (QSqrt5(1) + w) == QSqrt5(1))) out.fail("deterministic bound is not the golden fixed point");

  const Rational v(1, 1000);
  ReportOptions opt;
  opt.arrival = ArrivalModel::Uniform;
  const auto inst = make_instance("random-order-3cycle", {{"v12", v}, {"v23", v}, {"v31", Rational(1)}}).instance;
  const auto row = competitive_report("random-order-3cycle", inst, "batching", opt);
  out.detail << " 3-cycle: E[ALG]=" << to_string(row.alg) << " E[OFF]=" << to_string(row.off)
             << " ratio=" << row.ratio.get_d();
  if (abs(row.alg - Rational(1, 3)) > v) out.fail("E[ALG] not near 1/3");
  if (abs(row.off - Rational(2, 3)) > v) out.fail("E[OFF] not near 2/3");
  if (!in_range(row.ratio, kRatioLo, kRatioHi)) out.fail("ratio outside [0.499, 0.501]");
}

// Criterion 7.
void lookahead(Outcome& out) {
  const auto cert = lookahead_cover(8, 2, 1);
  if (cert.alpha != 2) out.fail("alpha is " + to_string(cert.alpha));
  if (!verify_certificate(cert, cycle_power(8, 2)).ok) out.fail("lookahead cover does not verify");
  int cross = 0, trace_mismatch = 0;
  for (int t = 0; t < kLookaheadInstances; ++t) {
    const int d = 1 + t % 3;
    const int l = t % 4;
    const auto inst = random_instance(6 + t % 7, d, 7000 + static_cast<std::uint64_t>(t));
    BatchingPolicy with_l(l);
    SeededBits b1(t);
    const auto run = simulate(inst, with_l, b1);
    for (const auto& tp : run.schedule)
      if ((inst.arrival(tp.pair.a) - 1) / (d + l + 1) != (inst.arrival(tp.pair.b) - 1) / (d + l + 1)) ++cross;

    BatchingPolicy look(d);
    SeededBits b2(t);
    auto longer = inst;
    longer.deadline = 2 * d;
    BatchingPolicy plain;
    SeededBits b3(t);
    if (simulate(inst, look, b2).trace != simulate(longer, plain, b3).trace) ++trace_mismatch;
  }
  out.detail << " instances=" << kLookaheadInstances;
  if (cross) out.fail(std::to_string(cross) + " cross-batch pairs");
  if (trace_mismatch) out.fail(std::to_string(trace_mismatch) + " traces differ from deadline 2d");
}

// Criterion 8.
void stochastic_departures(Outcome& out) {
  const auto model = DepartureModel::geometric(Rational(1, 2));
  int below = 0;
  double worst_z = 1e300;
  for (int t = 0; t < kStochasticInstances; ++t) {
    const int n = 4 + t % 7;
    const auto inst = random_instance(n, 1, 9000 + static_cast<std::uint64_t>(t));
    const auto est = monte_carlo_departures(inst, model, policy_factory("pg-stochastic"), kStochasticRuns,
                                            static_cast<std::uint64_t>(t), Rational(1, 8));
    if (est.mean_gap < -kStderrMultiple * est.stderr_gap) ++below;
    if (est.stderr_gap > 0) worst_z = std::min(worst_z, est.mean_gap / est.stderr_gap);
  }
  out.detail << " instances=" << kStochasticInstances << " runs=" << kStochasticRuns << " min(gap/stderr)=" << worst_z;
  if (below) out.fail(std::to_string(below) + " instances below OPT/8 - 3 stderr");

  int mismatch = 0;
  for (int t = 0; t < 100; ++t) {
    const auto inst = random_instance(3 + t % 8, 1 + t % 3, 11000 + static_cast<std::uint64_t>(t));
    const auto realized =
        with_departures(inst, sample_departures(DepartureModel::deterministic(inst.deadline), inst.size(), t));
    PostponedGreedyPolicy pg(false), guarded(true);
    SeededBits a(t), b(t);
    if (simulate(inst, pg, a).trace != simulate(realized, guarded, b).trace) ++mismatch;
  }
  if (mismatch) out.fail(std::to_string(mismatch) + " traces differ under deterministic departures");
}

}  // namespace

int main() {
  report(1, "covering LP values", covering_lp_values);
  report(2, "cover pipeline over all orders (n=8, d=1)", cover_pipeline);
  report(3, "postponed greedy is 1/4-competitive with feasible duals", pg_guarantee);
  report(4, "postponed greedy tightness", pg_tightness);
  report(5, "greedy and dda are 1/2-competitive on constrained bipartite instances", bipartite_guarantee);
  report(6, "online lower bounds", lower_bounds);
  report(7, "batching with lookahead", lookahead);
  report(8, "stochastic departures", stochastic_departures);
  return failures;
}
