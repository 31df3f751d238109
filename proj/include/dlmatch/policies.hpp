#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dlmatch/engine.hpp"
#include "dlmatch/hungarian.hpp"
#include "dlmatch/matching.hpp"

namespace dlmatch {

/// True when every edge of G_{d,sigma} joins a seller to a buyer that
/// arrives after it.
inline bool is_constrained_bipartite(const OnlineInstance& instance) {
  if (!instance.roles) return false;
  const auto& roles = *instance.roles;
  for (const auto& e : build_online_graph(instance).edges()) {
    const Role ri = roles[static_cast<std::size_t>(e.i - 1)];
    const Role rj = roles[static_cast<std::size_t>(e.j - 1)];
    if (ri == rj) return false;
    const Vertex seller = ri == Role::Seller ? e.i : e.j;
    const Vertex buyer = ri == Role::Seller ? e.j : e.i;
    if (instance.arrival(buyer) < instance.arrival(seller)) return false;
  }
  return true;
}

namespace detail {

inline void require_bipartite_edge(Role arriving, Vertex v, const RevealedEdge& e,
                                   const std::vector<Role>& roles) {
  if (e.weight <= 0) return;
  const Role other = roles[static_cast<std::size_t>(e.other - 1)];
  if (arriving == other || arriving == Role::Seller)
    throw InvalidInput("instance is not constrained bipartite: edge (" + std::to_string(e.other) + "," +
                       std::to_string(v) + ")");
}

}  // namespace detail

/// Greedy with free disposal on a constrained bipartite graph. With
/// random roles, each vertex flips a fair coin for its role on arrival
/// and edges to earlier buyers are dropped (naive greedy).
class GreedyPolicy final : public Policy {
 public:
  explicit GreedyPolicy(bool random_roles = false) : random_roles_(random_roles) {}

  std::string name() const override { return random_roles_ ? "naive-greedy" : "greedy"; }

  void prepare(const PublicInfo& info) override {
    if (!random_roles_) {
      if (!info.roles) throw InvalidInput("greedy requires seller/buyer roles");
      roles_ = *info.roles;
    } else {
      roles_.assign(static_cast<std::size_t>(info.n), Role::Buyer);
    }
  }

  void on_arrival(Context& ctx, Vertex v, const std::vector<RevealedEdge>& edges) override {
    Role& role = roles_[static_cast<std::size_t>(v - 1)];
    if (random_roles_) role = ctx.coin() ? Role::Seller : Role::Buyer;
    else
      for (const auto& e : edges) detail::require_bipartite_edge(role, v, e, roles_);
    if (role == Role::Seller) {
      sellers_[v] = SellerState{};
      return;
    }
    std::optional<Vertex> best;
    Rational best_margin(0);
    for (const auto& e : edges) {
      auto it = sellers_.find(e.other);
      if (it == sellers_.end()) continue;
      Rational margin = e.weight - it->second.price;
      if (!best || margin > best_margin) {
        best = e.other;
        best_margin = margin;
      }
    }
    if (best && best_margin > 0) {
      auto& st = sellers_.at(*best);
      st.match = v;
      st.price = ctx.weight(*best, v);
    }
  }

  void on_critical(Context& ctx, Vertex v) override {
    auto it = sellers_.find(v);
    if (it == sellers_.end()) return;
    if (const auto b = it->second.match; b && ctx.present(*b) && !ctx.finalized(*b)) ctx.finalize(v, *b);
    sellers_.erase(it);
  }

 private:
  struct SellerState {
    Rational price{0};
    std::optional<Vertex> match;
  };
  bool random_roles_;
  std::vector<Role> roles_;
  std::map<Vertex, SellerState> sellers_;
};

/// Postponed greedy over virtual seller/buyer copies. The stochastic
/// variant collects nothing when the tentative partner is gone.
class PostponedGreedyPolicy final : public Policy {
 public:
  enum class Status { Undetermined, Seller, Buyer };

  explicit PostponedGreedyPolicy(bool guard_departed = false) : guard_(guard_departed) {}

  std::string name() const override { return guard_ ? "pg-stochastic" : "pg"; }

  void prepare(const PublicInfo& info) override {
    const auto n = static_cast<std::size_t>(info.n);
    status_.assign(n, Status::Undetermined);
    price_.assign(n, Rational(0));
    margin_.assign(n, Rational(0));
    match_.assign(n, std::nullopt);
    active_.assign(n, 0);
  }

  void on_arrival(Context&, Vertex k, const std::vector<RevealedEdge>& edges) override {
    const auto kk = at(k);
    status_[kk] = Status::Undetermined;
    active_[kk] = 1;
    std::optional<Vertex> best;
    Rational best_margin(0);
    for (const auto& e : edges) {
      if (!active_[at(e.other)]) continue;
      Rational margin = e.weight - price_[at(e.other)];
      if (!best || margin > best_margin || (margin == best_margin && e.other < *best)) {
        best = e.other;
        best_margin = margin;
      }
    }
    if (best && best_margin > 0) {
      margin_[kk] = best_margin;
      match_[at(*best)] = k;
      price_[at(*best)] += best_margin;
    }
  }

  void on_critical(Context& ctx, Vertex k) override {
    const auto kk = at(k);
    active_[kk] = 0;
    const auto l = match_[kk];
    if (!l) return;
    if (status_[kk] == Status::Undetermined) status_[kk] = ctx.coin() ? Status::Seller : Status::Buyer;
    auto& partner = status_[at(*l)];
    if (status_[kk] == Status::Seller) {
      const bool gone = !ctx.present(*l) || ctx.finalized(*l) || ctx.finalized(k);
      if (!(guard_ && gone)) ctx.finalize(k, *l);
      if (partner == Status::Undetermined) partner = Status::Buyer;
    } else if (partner == Status::Undetermined) {
      partner = Status::Seller;
    }
  }

  /// {p^f(s_k) + q(b_k)}, a feasible offline dual once the run is over.
  DualSolution dual() const {
    DualSolution out;
    for (std::size_t k = 0; k < price_.size(); ++k) out.lambda.push_back(price_[k] + margin_[k]);
    return out;
  }
  const std::vector<Rational>& final_prices() const { return price_; }
  const std::vector<Rational>& margins() const { return margin_; }
  const std::vector<Status>& statuses() const { return status_; }

 private:
  static std::size_t at(Vertex v) { return static_cast<std::size_t>(v - 1); }

  bool guard_;
  std::vector<Status> status_;
  std::vector<Rational> price_;
  std::vector<Rational> margin_;
  std::vector<std::optional<Vertex>> match_;
  std::vector<char> active_;
};

/// Dynamic deferred acceptance: a tentative maximum-weight matching kept
/// optimal by an incremental auction, finalized when sellers go critical.
class DdaPolicy final : public Policy {
 public:
  std::string name() const override { return "dda"; }

  void prepare(const PublicInfo& info) override {
    if (!info.roles) throw InvalidInput("dda requires seller/buyer roles");
    roles_ = *info.roles;
    const auto n = static_cast<std::size_t>(info.n);
    initial_margin_.assign(n, std::nullopt);
    final_price_.assign(n, std::nullopt);
    final_margin_.assign(n, std::nullopt);
    price_history_.assign(n, {});
    margin_history_.assign(n, {});
  }

  void on_arrival(Context&, Vertex v, const std::vector<RevealedEdge>& edges) override {
    const Role role = roles_[at(v)];
    for (const auto& e : edges) detail::require_bipartite_edge(role, v, e, roles_);
    if (role == Role::Seller) {
      auction_.add_seller(v);
    } else {
      std::vector<std::pair<int, Rational>> w;
      for (const auto& e : edges)
        if (auction_.has_seller(e.other)) w.emplace_back(e.other, e.weight);
      auction_.insert_buyer(v, w);
      initial_margin_[at(v)] = auction_.margin(v);
    }
    snapshot();
  }

  void on_critical(Context& ctx, Vertex v) override {
    if (auction_.has_seller(v)) {
      final_price_[at(v)] = auction_.price(v);
      if (const auto b = auction_.seller_match(v)) {
        final_margin_[at(*b)] = auction_.margin(*b);
        ctx.finalize(v, *b);
        auction_.remove_buyer(*b);
      }
      auction_.remove_seller(v);
    } else if (auction_.has_buyer(v)) {
      final_margin_[at(v)] = auction_.margin(v);
      auction_.remove_buyer(v);
    }
  }

  const std::vector<ConservationEntry>& conservation_log() const { return auction_.conservation_log(); }
  const std::vector<std::vector<Rational>>& price_history() const { return price_history_; }
  const std::vector<std::vector<Rational>>& margin_history() const { return margin_history_; }

  Rational sum_final_prices() const { return sum(final_price_); }
  Rational sum_final_margins() const { return sum(final_margin_); }
  /// Each buyer's margin at the end of the auction run on its arrival.
  Rational sum_initial_margins() const { return sum(initial_margin_); }

 private:
  static std::size_t at(Vertex v) { return static_cast<std::size_t>(v - 1); }
  static Rational sum(const std::vector<std::optional<Rational>>& xs) {
    Rational total(0);
    for (const auto& x : xs)
      if (x) total += *x;
    return total;
  }
  void snapshot() {
    for (int s : auction_.sellers()) price_history_[at(s)].push_back(auction_.price(s));
    for (int b : auction_.buyers()) margin_history_[at(b)].push_back(auction_.margin(b));
  }

  std::vector<Role> roles_;
  BipartiteAuction auction_;
  std::vector<std::optional<Rational>> initial_margin_;
  std::vector<std::optional<Rational>> final_price_;
  std::vector<std::optional<Rational>> final_margin_;
  std::vector<std::vector<Rational>> price_history_;
  std::vector<std::vector<Rational>> margin_history_;
};

/// Solves a maximum-weight matching over each window of d+l+1 arrivals
/// (the last window may be shorter) and finalizes it.
class BatchingPolicy final : public Policy {
 public:
  explicit BatchingPolicy(int lookahead = 0) : lookahead_(lookahead) {
    if (lookahead < 0) throw InvalidInput("negative lookahead");
  }

  std::string name() const override {
    return lookahead_ == 0 ? "batching" : "batching:" + std::to_string(lookahead_);
  }
  int lookahead() const override { return lookahead_; }

  void prepare(const PublicInfo& info) override {
    if (!info.deterministic_deadlines) throw InvalidInput("batching requires deterministic deadlines");
    n_ = info.n;
    window_ = info.deadline + lookahead_ + 1;
    batch_.clear();
  }

  void on_arrival(Context& ctx, Vertex v, const std::vector<RevealedEdge>&) override {
    batch_.push_back(v);
    if (ctx.now() % window_ != 0 && ctx.now() != n_) return;
    const int m = static_cast<int>(batch_.size());
    WeightedGraph g(m);
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) {
        const auto& w = ctx.weight(batch_[static_cast<std::size_t>(a)], batch_[static_cast<std::size_t>(b)]);
        if (w > 0) g.set_weight(a + 1, b + 1, w);
      }
    for (const auto& p : max_weight_matching_exact(g).pairs)
      ctx.finalize(batch_[static_cast<std::size_t>(p.a - 1)], batch_[static_cast<std::size_t>(p.b - 1)]);
    batch_.clear();
  }

  void on_critical(Context&, Vertex) override {}

 private:
  int lookahead_;
  int n_ = 0;
  int window_ = 1;
  std::vector<Vertex> batch_;
};

/// Waits until a vertex is critical, then matches it to its best present
/// unmatched neighbor.
class PatientPolicy final : public Policy {
 public:
  std::string name() const override { return "patient"; }
  void prepare(const PublicInfo& info) override { n_ = info.n; }
  void on_arrival(Context&, Vertex, const std::vector<RevealedEdge>&) override {}
  void on_critical(Context& ctx, Vertex v) override {
    if (ctx.finalized(v)) return;
    std::optional<Vertex> best;
    Rational best_w(0);
    for (Vertex u = 1; u <= n_; ++u) {
      if (u == v || !ctx.present(u) || ctx.finalized(u)) continue;
      const auto& w = ctx.weight(v, u);
      if (w > best_w) {
        best = u;
        best_w = w;
      }
    }
    if (best) ctx.finalize(v, *best);
  }

 private:
  int n_ = 0;
};

/// Policy names: greedy, naive-greedy, pg, pg-stochastic, dda, batching[:l], patient.
inline PolicyFactory policy_factory(const std::string& name) {
  if (name == "greedy") return [] { return std::make_unique<GreedyPolicy>(false); };
  if (name == "naive-greedy") return [] { return std::make_unique<GreedyPolicy>(true); };
  if (name == "pg") return [] { return std::make_unique<PostponedGreedyPolicy>(false); };
  if (name == "pg-stochastic") return [] { return std::make_unique<PostponedGreedyPolicy>(true); };
  if (name == "dda") return [] { return std::make_unique<DdaPolicy>(); };
  if (name == "patient") return [] { return std::make_unique<PatientPolicy>(); };
  if (name == "batching") return [] { return std::make_unique<BatchingPolicy>(0); };
  if (name.rfind("batching:", 0) == 0) {
    const std::string arg = name.substr(9);
    if (arg.empty() || arg.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidInput("bad lookahead in policy '" + name + "'");
    const int l = std::stoi(arg);
    return [l] { return std::make_unique<BatchingPolicy>(l); };
  }
  throw InvalidInput("unknown policy '" + name + "'");
}

}  // namespace dlmatch
