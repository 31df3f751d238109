#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dlmatch/cover/mask.hpp"
#include "dlmatch/graph.hpp"

namespace dlmatch {

/// Partition of 1..n into batches of equal size that is invariant under
/// the shift i -> i + period (mod n). Labels are canonical: batches are
/// numbered 0, 1, ... in order of their smallest vertex.
class PeriodicBatching {
 public:
  PeriodicBatching() = default;
  PeriodicBatching(int batch_size, int period, const std::vector<int>& labels)
      : batch_size_(batch_size), period_(period), batch_of_(canonical(labels)) {
    validate();
  }

  static PeriodicBatching from_batches(int n, int batch_size, int period, const std::vector<std::vector<Vertex>>& batches) {
    std::vector<int> labels(static_cast<std::size_t>(n), -1);
    int k = 0;
    for (const auto& b : batches) {
      for (Vertex v : b) {
        if (v < 1 || v > n) throw InvalidInput("batch vertex out of range");
        if (labels[static_cast<std::size_t>(v - 1)] != -1) throw InvalidInput("vertex " + std::to_string(v) + " in two batches");
        labels[static_cast<std::size_t>(v - 1)] = k;
      }
      ++k;
    }
    for (int x : labels)
      if (x < 0) throw InvalidInput("batches do not cover every vertex");
    return PeriodicBatching(batch_size, period, labels);
  }

  /// The batching induced by an arrival order: b_i = ceil(sigma(i)/(d+1)).
  static PeriodicBatching from_order(const ArrivalOrder& sigma, int d, int period) {
    std::vector<int> labels;
    for (Vertex v = 1; v <= sigma.size(); ++v) labels.push_back(batch_index(sigma.slot_of(v), d));
    return PeriodicBatching(d + 1, period, labels);
  }

  int size() const { return static_cast<int>(batch_of_.size()); }
  int batch_size() const { return batch_size_; }
  int period() const { return period_; }
  int batch_of(Vertex v) const { return batch_of_.at(static_cast<std::size_t>(v - 1)); }
  const std::vector<int>& labels() const { return batch_of_; }
  int batch_count() const { return size() / batch_size_; }

  bool same_batch(Vertex i, Vertex j) const { return batch_of(i) == batch_of(j); }

  std::vector<std::vector<Vertex>> batches() const {
    std::vector<std::vector<Vertex>> out(static_cast<std::size_t>(batch_count()));
    for (Vertex v = 1; v <= size(); ++v) out[static_cast<std::size_t>(batch_of(v))].push_back(v);
    return out;
  }

  /// An arrival order realizing this batching: batch k fills slots k(d+1)+1..(k+1)(d+1).
  ArrivalOrder to_order() const {
    std::vector<int> slots(static_cast<std::size_t>(size()));
    int next = 1;
    for (const auto& b : batches())
      for (Vertex v : b) slots[static_cast<std::size_t>(v - 1)] = next++;
    return ArrivalOrder(slots);
  }

  GraphMask mask() const {
    GraphMask g(size());
    for (Vertex i = 1; i <= size(); ++i)
      for (Vertex j = i + 1; j <= size(); ++j)
        if (same_batch(i, j)) g.set_weight(i, j, Rational(1));
    return g;
  }

  bool operator==(const PeriodicBatching&) const = default;
  bool operator<(const PeriodicBatching& o) const { return batch_of_ < o.batch_of_; }

 private:
  static std::vector<int> canonical(const std::vector<int>& labels) {
    std::map<int, int> rename;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int b : labels) out.push_back(rename.emplace(b, static_cast<int>(rename.size())).first->second);
    return out;
  }

  void validate() const {
    const int n = size();
    if (batch_size_ <= 0 || n % batch_size_ != 0)
      throw InvalidInput("batch size " + std::to_string(batch_size_) + " does not divide n=" + std::to_string(n));
    if (period_ <= 0 || n % period_ != 0) throw InvalidInput("period must divide n");
    std::vector<int> count(static_cast<std::size_t>(n), 0);
    for (int b : batch_of_) {
      if (b >= n / batch_size_) throw InvalidInput("batches of unequal size");
      ++count[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b < n / batch_size_; ++b)
      if (count[static_cast<std::size_t>(b)] != batch_size_) throw InvalidInput("batches of unequal size");
    for (Vertex i = 1; i <= n; ++i)
      for (Vertex j = i + 1; j <= n; ++j) {
        const Vertex i2 = (i - 1 + period_) % n + 1;
        const Vertex j2 = (j - 1 + period_) % n + 1;
        if (same_batch(i, j) != same_batch(i2, j2)) throw InvalidInput("batching is not periodic");
      }
  }

  int batch_size_ = 1;
  int period_ = 1;
  std::vector<int> batch_of_;
};

/// All distinct p-periodic partitions of 1..n into (d+1)-batches that are
/// induced by p-periodic permutations. Each residue r in [0, p) picks a
/// batch slot beta_r; residue classes mod p/(d+1) must each hold d+1
/// residues, and vertex r + j*p lands in batch (beta_r + j*p/(d+1)) mod n/(d+1).
inline std::vector<PeriodicBatching> enumerate_periodic_batchings(int n, int p, int d) {
  const int s = d + 1;
  if (d < 0 || p <= 0 || n <= 0 || p % s != 0 || n % p != 0)
    throw InvalidInput("need (d+1) | p and p | n (n=" + std::to_string(n) + ", p=" + std::to_string(p) +
                       ", d=" + std::to_string(d) + ")");
  const int m = p / s;
  const int q = n / p;
  const int nb = n / s;
  std::set<std::vector<int>> seen;
  std::vector<PeriodicBatching> out;
  std::vector<int> cls(static_cast<std::size_t>(p), 0);
  std::vector<int> fill(static_cast<std::size_t>(m), 0);
  std::vector<int> hi(static_cast<std::size_t>(p), 0);
  std::vector<int> labels(static_cast<std::size_t>(n));

  auto emit_all_hi = [&] {
    std::fill(hi.begin(), hi.end(), 0);
    while (true) {
      for (int r = 0; r < p; ++r) {
        const int beta = cls[static_cast<std::size_t>(r)] + m * hi[static_cast<std::size_t>(r)];
        for (int j = 0; j < q; ++j) labels[static_cast<std::size_t>(r + j * p)] = (beta + j * m) % nb;
      }
      std::map<int, int> rename;
      std::vector<int> canon;
      canon.reserve(labels.size());
      for (int b : labels) canon.push_back(rename.emplace(b, static_cast<int>(rename.size())).first->second);
      if (seen.insert(canon).second) out.emplace_back(s, p, canon);
      int r = p - 1;
      while (r >= 0 && ++hi[static_cast<std::size_t>(r)] == q) hi[static_cast<std::size_t>(r--)] = 0;
      if (r < 0) break;
    }
  };

  // Depth-first over class assignments with exactly s residues per class.
  auto assign = [&](auto&& self, int r) -> void {
    if (r == p) {
      emit_all_hi();
      return;
    }
    for (int c = 0; c < m; ++c) {
      if (fill[static_cast<std::size_t>(c)] == s) continue;
      cls[static_cast<std::size_t>(r)] = c;
      ++fill[static_cast<std::size_t>(c)];
      self(self, r + 1);
      --fill[static_cast<std::size_t>(c)];
    }
  };
  assign(assign, 0);
  return out;
}

}  // namespace dlmatch
