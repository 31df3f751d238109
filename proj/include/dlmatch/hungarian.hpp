#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dlmatch/rational.hpp"

namespace dlmatch {

/// Sum of prices and margins over the vertices present before one buyer
/// insertion, measured before and after the auction.
struct ConservationEntry {
  int buyer = 0;
  Rational initial_margin;
  Rational before;
  Rational after;
};

/// Incremental maximum-weight bipartite matching with dual prices p(s) and
/// margins q(b). Each insertion runs the tight-edge augmenting search with
/// simultaneous dual updates, so (matching, p, q) stays optimal.
class BipartiteAuction {
 public:
  void add_seller(int s) {
    if (sellers_.count(s)) throw InvalidInput("seller " + std::to_string(s) + " already present");
    sellers_[s] = SellerState{};
  }

  /// Inserts buyer b with edge weights to present sellers (missing = 0).
  /// Returns the buyer's initial margin max(0, max_s v - p).
  Rational insert_buyer(int b, const std::vector<std::pair<int, Rational>>& weights) {
    if (buyers_.count(b)) throw InvalidInput("buyer " + std::to_string(b) + " already present");
    for (const auto& [s, w] : weights) {
      if (!sellers_.count(s)) throw InvalidInput("edge to absent seller " + std::to_string(s));
      if (w < 0) throw InvalidInput("negative weight");
      if (w > 0) edges_[{s, b}] = w;
    }
    ConservationEntry entry;
    entry.buyer = b;
    entry.before = dual_sum();
    Rational q0(0);
    for (const auto& [s, st] : sellers_) {
      Rational m = value(s, b) - st.price;
      if (m > q0) q0 = m;
    }
    buyers_[b] = BuyerState{q0, std::nullopt};
    entry.initial_margin = q0;
    if (q0 > 0) run_auction(b);
    entry.after = dual_sum() - buyers_[b].margin;
    log_.push_back(entry);
    return q0;
  }

  /// Removes a seller; its buyer (if any) becomes unmatched and keeps its margin.
  void remove_seller(int s) {
    auto it = find_seller(s);
    if (it->second.match) buyers_.at(*it->second.match).match.reset();
    sellers_.erase(it);
    for (auto e = edges_.begin(); e != edges_.end();)
      e = e->first.first == s ? edges_.erase(e) : std::next(e);
  }

  void remove_buyer(int b) {
    auto it = find_buyer(b);
    if (it->second.match) sellers_.at(*it->second.match).match.reset();
    buyers_.erase(it);
    for (auto e = edges_.begin(); e != edges_.end();)
      e = e->first.second == b ? edges_.erase(e) : std::next(e);
  }

  const Rational& price(int s) const { return find_seller(s)->second.price; }
  const Rational& margin(int b) const { return find_buyer(b)->second.margin; }
  std::optional<int> seller_match(int s) const { return find_seller(s)->second.match; }
  std::optional<int> buyer_match(int b) const { return find_buyer(b)->second.match; }
  bool has_seller(int s) const { return sellers_.count(s) > 0; }
  bool has_buyer(int b) const { return buyers_.count(b) > 0; }

  Rational value(int s, int b) const {
    auto it = edges_.find({s, b});
    return it == edges_.end() ? Rational(0) : it->second;
  }

  std::vector<int> sellers() const {
    std::vector<int> out;
    for (const auto& kv : sellers_) out.push_back(kv.first);
    return out;
  }
  std::vector<int> buyers() const {
    std::vector<int> out;
    for (const auto& kv : buyers_) out.push_back(kv.first);
    return out;
  }

  /// Matched (seller, buyer) pairs ordered by seller.
  std::vector<std::pair<int, int>> matching() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& [s, st] : sellers_)
      if (st.match) out.emplace_back(s, *st.match);
    return out;
  }

  Rational matching_value() const {
    Rational total(0);
    for (const auto& [s, b] : matching()) total += value(s, b);
    return total;
  }

  Rational dual_sum() const {
    Rational total(0);
    for (const auto& kv : sellers_) total += kv.second.price;
    for (const auto& kv : buyers_) total += kv.second.margin;
    return total;
  }

  const std::vector<ConservationEntry>& conservation_log() const { return log_; }

  /// Dual feasibility plus CS1-CS3. Returns a description of the first
  /// failure, or nullopt when (matching, p, q) is optimal.
  std::optional<std::string> check_optimality() const {
    for (const auto& [s, st] : sellers_) {
      if (st.price < 0) return "negative price for seller " + std::to_string(s);
      for (const auto& [b, bt] : buyers_)
        if (value(s, b) > st.price + bt.margin)
          return "dual infeasible on (" + std::to_string(s) + "," + std::to_string(b) + ")";
      if (st.match) {
        if (value(s, *st.match) != st.price + buyers_.at(*st.match).margin)
          return "matched edge not tight at seller " + std::to_string(s);
      } else if (st.price != 0) {
        return "unmatched seller " + std::to_string(s) + " has positive price";
      }
    }
    for (const auto& [b, bt] : buyers_) {
      if (bt.margin < 0) return "negative margin for buyer " + std::to_string(b);
      if (!bt.match && bt.margin != 0)
        return "unmatched buyer " + std::to_string(b) + " has positive margin";
    }
    return std::nullopt;
  }

  /// Installs warm-start duals and matching; rejected unless optimal.
  void warm_start(const std::map<int, Rational>& prices, const std::map<int, Rational>& margins,
                  const std::vector<std::pair<int, int>>& match) {
    for (const auto& [s, p] : prices) find_seller(s)->second.price = p;
    for (const auto& [b, q] : margins) find_buyer(b)->second.margin = q;
    for (auto& kv : sellers_) kv.second.match.reset();
    for (auto& kv : buyers_) kv.second.match.reset();
    for (const auto& [s, b] : match) {
      auto si = find_seller(s);
      auto bi = find_buyer(b);
      if (si->second.match || bi->second.match) throw InvalidInput("warm-start matching not disjoint");
      si->second.match = b;
      bi->second.match = s;
    }
    if (auto why = check_optimality()) throw InvalidInput("infeasible warm start: " + *why);
  }

  /// Adds a buyer with explicit state, bypassing the auction (warm starts only).
  void place_buyer(int b, const std::vector<std::pair<int, Rational>>& weights) {
    if (buyers_.count(b)) throw InvalidInput("buyer " + std::to_string(b) + " already present");
    for (const auto& [s, w] : weights) {
      if (!sellers_.count(s)) throw InvalidInput("edge to absent seller " + std::to_string(s));
      if (w < 0) throw InvalidInput("negative weight");
      if (w > 0) edges_[{s, b}] = w;
    }
    buyers_[b] = BuyerState{Rational(0), std::nullopt};
  }

 private:
  struct SellerState {
    Rational price{0};
    std::optional<int> match;
  };
  struct BuyerState {
    Rational margin{0};
    std::optional<int> match;
  };

  std::map<int, SellerState>::iterator find_seller(int s) {
    auto it = sellers_.find(s);
    if (it == sellers_.end()) throw InvalidInput("unknown seller " + std::to_string(s));
    return it;
  }
  std::map<int, SellerState>::const_iterator find_seller(int s) const {
    auto it = sellers_.find(s);
    if (it == sellers_.end()) throw InvalidInput("unknown seller " + std::to_string(s));
    return it;
  }
  std::map<int, BuyerState>::iterator find_buyer(int b) {
    auto it = buyers_.find(b);
    if (it == buyers_.end()) throw InvalidInput("unknown buyer " + std::to_string(b));
    return it;
  }
  std::map<int, BuyerState>::const_iterator find_buyer(int b) const {
    auto it = buyers_.find(b);
    if (it == buyers_.end()) throw InvalidInput("unknown buyer " + std::to_string(b));
    return it;
  }

  bool tight(int s, int b) const {
    auto it = edges_.find({s, b});
    return it != edges_.end() && it->second == sellers_.at(s).price + buyers_.at(b).margin;
  }

  // Walks back from the seller that ends the path, shifting each matched
  // seller to the buyer that reached it.
  void augment(int last_seller, const std::map<int, int>& reached_by) {
    int s = last_seller;
    while (true) {
      const int b = reached_by.at(s);
      auto& bs = buyers_.at(b);
      const std::optional<int> prev = bs.match;
      sellers_.at(s).match = b;
      bs.match = s;
      if (!prev) return;
      s = *prev;
    }
  }

  void run_auction(int root) {
    while (true) {
      std::map<int, int> reached_by;  // red seller -> blue buyer that colored it
      std::vector<int> blue{root};
      std::map<int, bool> is_blue{{root, true}};
      for (std::size_t head = 0; head < blue.size(); ++head) {
        const int b = blue[head];
        const auto own = buyers_.at(b).match;
        for (const auto& [s, st] : sellers_) {
          if (reached_by.count(s) || (own && *own == s) || !tight(s, b)) continue;
          reached_by[s] = b;
          if (!st.match) {
            augment(s, reached_by);
            return;
          }
          if (!is_blue.count(*st.match)) {
            is_blue[*st.match] = true;
            blue.push_back(*st.match);
          }
        }
      }
      std::optional<Rational> delta1;
      int zero_buyer = 0;
      for (const auto& [b, flag] : is_blue) {
        const auto& q = buyers_.at(b).margin;
        if (!delta1 || q < *delta1) {
          delta1 = q;
          zero_buyer = b;
        }
      }
      if (*delta1 == 0) {
        // The zero-margin buyer gives up its seller along the alternating path.
        if (zero_buyer != root) {
          const int s = *buyers_.at(zero_buyer).match;
          buyers_.at(zero_buyer).match.reset();
          sellers_.at(s).match.reset();
          augment(s, reached_by);
        }
        return;
      }
      std::optional<Rational> delta2;
      for (const auto& [b, flag] : is_blue)
        for (const auto& [s, st] : sellers_) {
          if (reached_by.count(s)) continue;
          auto it = edges_.find({s, b});
          if (it == edges_.end()) continue;
          Rational gap = st.price + buyers_.at(b).margin - it->second;
          if (!delta2 || gap < *delta2) delta2 = gap;
        }
      const Rational delta = delta2 && *delta2 < *delta1 ? *delta2 : *delta1;
      for (const auto& [s, b] : reached_by) sellers_.at(s).price += delta;
      for (const auto& [b, flag] : is_blue) buyers_.at(b).margin -= delta;
    }
  }

  std::map<int, SellerState> sellers_;
  std::map<int, BuyerState> buyers_;
  std::map<std::pair<int, int>, Rational> edges_;
  std::vector<ConservationEntry> log_;
};

struct BipartiteWarmStart {
  std::vector<Rational> prices;   // one per seller
  std::vector<Rational> margins;  // one per already-placed buyer (a prefix of the buyers)
  std::vector<std::pair<int, int>> matching;  // 1-based (seller, buyer)
};

struct BipartiteResult {
  std::vector<std::pair<int, int>> matching;  // 1-based (seller, buyer)
  Rational weight;
  std::vector<Rational> prices;
  std::vector<Rational> margins;
  std::vector<ConservationEntry> conservation;
};

/// Maximum-weight bipartite matching with optimal duals. `weights[s][b]` is
/// 0-based. Buyers beyond the warm-start prefix are inserted one at a time.
inline BipartiteResult hungarian_bipartite(int sellers, int buyers,
                                           const std::vector<std::vector<Rational>>& weights,
                                           const std::optional<BipartiteWarmStart>& warm = std::nullopt) {
  if (static_cast<int>(weights.size()) != sellers) throw InvalidInput("weight matrix row count");
  for (const auto& row : weights)
    if (static_cast<int>(row.size()) != buyers) throw InvalidInput("weight matrix column count");
  BipartiteAuction auction;
  for (int s = 1; s <= sellers; ++s) auction.add_seller(s);
  auto column = [&](int b) {
    std::vector<std::pair<int, Rational>> w;
    for (int s = 1; s <= sellers; ++s)
      w.emplace_back(s, weights[static_cast<std::size_t>(s - 1)][static_cast<std::size_t>(b - 1)]);
    return w;
  };
  int first = 1;
  if (warm) {
    if (static_cast<int>(warm->prices.size()) != sellers) throw InvalidInput("warm-start price count");
    const int placed = static_cast<int>(warm->margins.size());
    if (placed > buyers) throw InvalidInput("warm-start margin count");
    std::map<int, Rational> p, q;
    for (int s = 1; s <= sellers; ++s) p[s] = warm->prices[static_cast<std::size_t>(s - 1)];
    for (int b = 1; b <= placed; ++b) {
      auction.place_buyer(b, column(b));
      q[b] = warm->margins[static_cast<std::size_t>(b - 1)];
    }
    auction.warm_start(p, q, warm->matching);
    first = placed + 1;
  }
  for (int b = first; b <= buyers; ++b) auction.insert_buyer(b, column(b));
  BipartiteResult out;
  out.matching = auction.matching();
  out.weight = auction.matching_value();
  for (int s = 1; s <= sellers; ++s) out.prices.push_back(auction.price(s));
  for (int b = 1; b <= buyers; ++b) out.margins.push_back(auction.margin(b));
  out.conservation = auction.conservation_log();
  return out;
}

}  // namespace dlmatch
