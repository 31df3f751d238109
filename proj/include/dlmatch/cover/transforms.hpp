#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dlmatch/cover/batching.hpp"
#include "dlmatch/cover/certificate.hpp"
#include "dlmatch/cover/mask.hpp"

namespace dlmatch {

namespace detail {

inline void require_verified(const CoverCertificate& cert, const GraphMask& target, const std::string& what) {
  const auto rep = verify_certificate(cert, target);
  if (!rep.ok) {
    std::string why = rep.errors.empty() ? std::to_string(rep.deficits.size()) + " uncovered edges" : rep.errors.front();
    throw Error(what + " produced an invalid certificate: " + why);
  }
}

/// Lifts one p-periodic batching of Z_{n1} to a p-periodic batching of Z_n
/// (p | n) so that every pair at cyclic distance <= reach that shares a
/// batch on n1 also shares one on n. Each batch orbit under the shift is
/// a class; residue r sits at an integer phase phi_r within its class, and
/// close same-batch pairs pin the phase differences exactly.
inline PeriodicBatching lift_batching(const PeriodicBatching& b, int p, int n, int reach) {
  const int n1 = b.size();
  const int s = b.batch_size();
  const int q = n1 / p;
  const int q2 = n / p;
  const auto up = static_cast<std::size_t>(p);
  const int nb = b.batch_count();

  // Shift permutation on batches.
  std::vector<int> pi(static_cast<std::size_t>(nb), -1);
  for (Vertex v = 1; v <= n1; ++v) pi[static_cast<std::size_t>(b.batch_of(v))] = b.batch_of((v - 1 + p) % n1 + 1);

  std::vector<int> cls(up), phase(up);
  std::vector<int> orbit_rep;
  for (int r = 0; r < p; ++r) {
    const int start = b.batch_of(r + 1);
    std::vector<int> orbit{start};
    for (int x = pi[static_cast<std::size_t>(start)]; x != start; x = pi[static_cast<std::size_t>(x)]) orbit.push_back(x);
    if (static_cast<int>(orbit.size()) != q) throw Error("batch orbit shorter than n/period; cannot lift");
    const auto lowest = std::min_element(orbit.begin(), orbit.end());
    const int rep = *lowest;
    auto it = std::find(orbit_rep.begin(), orbit_rep.end(), rep);
    if (it == orbit_rep.end()) {
      orbit_rep.push_back(rep);
      it = orbit_rep.end() - 1;
    }
    cls[static_cast<std::size_t>(r)] = static_cast<int>(it - orbit_rep.begin());
    phase[static_cast<std::size_t>(r)] = static_cast<int>(lowest - orbit.begin());
  }

  // Union-find with integer offsets: phi[r] = phi[root] + off[r].
  std::vector<int> parent(up), off(up, 0);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](auto&& self, int r) -> int {
    const auto ur = static_cast<std::size_t>(r);
    if (parent[ur] == r) return r;
    const int root = self(self, parent[ur]);
    off[ur] += off[static_cast<std::size_t>(parent[ur])];
    parent[ur] = root;
    return root;
  };
  for (int r = 0; r < p; ++r)
    for (int delta = -reach; delta <= reach; ++delta) {
      if (delta == 0) continue;
      const int i = r;
      const int j = ((i + delta) % n1 + n1) % n1;
      if (!b.same_batch(i + 1, j + 1)) continue;
      const int r2 = j % p;
      const int shift = (r + delta - r2) / p;  // block offset of j relative to i
      // Require phi[r2] - phi[r] == shift.
      const int a = find(find, r);
      const int c = find(find, r2);
      const int want = shift + off[static_cast<std::size_t>(r)] - off[static_cast<std::size_t>(r2)];
      if (a == c) {
        if (want != 0) throw Error("batching wraps around the cycle; cannot lift");
        continue;
      }
      parent[static_cast<std::size_t>(c)] = a;
      off[static_cast<std::size_t>(c)] = want;
    }
  // Root phases come from the source batching; the rest follow by offset.
  std::vector<int> phi(up);
  for (int r = 0; r < p; ++r) {
    const int root = find(find, r);
    phi[static_cast<std::size_t>(r)] = phase[static_cast<std::size_t>(root)] + off[static_cast<std::size_t>(r)];
  }

  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int r = 0; r < p; ++r)
    for (int jb = 0; jb < q2; ++jb) {
      const int t = ((jb - phi[static_cast<std::size_t>(r)]) % q2 + q2) % q2;
      labels[static_cast<std::size_t>(r + jb * p)] = cls[static_cast<std::size_t>(r)] * q2 + t;
    }
  return PeriodicBatching(s, p, labels);
}

}  // namespace detail

/// Extends a p-periodic (alpha, d)-cover of C_{n1}^d to C_n^d. When p | n
/// each batching is lifted and alpha is unchanged. Otherwise n = p*u + v and
/// a block of v fresh vertices is inserted at u positions, giving alpha*u/(u-2).
inline CoverCertificate extend_cover(const CoverCertificate& cert, int n, int reach) {
  const int s = cert.d + 1;
  const int p = cert.period;
  if (p % s != 0 || cert.n % p != 0) throw InvalidInput("extension needs (d+1) | period and period | n1");
  if (n < cert.n) throw InvalidInput("extension target must have n >= n1");
  if (n <= 2 * reach) throw InvalidInput("target cycle needs n > 2d");
  const auto target = cycle_power(n, reach);
  if (n == cert.n) {
    detail::require_verified(cert, target, "extend_cover");
    return cert;
  }
  if (n % p == 0) {
    CoverCertificate out{n, cert.d, p, cert.alpha, {}};
    for (const auto& c : cert.columns) out.columns.push_back({c.lambda, detail::lift_batching(c.batching, p, n, reach)});
    detail::require_verified(out, target, "extend_cover");
    return out;
  }
  const int u = n / p;
  const int v = n - p * u;
  if (u < 3) throw InvalidInput("n too small: need floor(n/period) >= 3 (got " + std::to_string(u) + ")");
  if (n % s != 0) throw InvalidInput("n must be a multiple of d+1 for full batches");
  CoverCertificate base = cert;
  if (p * u != cert.n) base = extend_cover(cert, p * u, reach);
  const int lifted_batches = (p * u) / s;
  CoverCertificate out{n, cert.d, n, cert.alpha * make_rational(u, u - 2), {}};
  out.alpha.canonicalize();
  for (const auto& c : base.columns) {
    Rational lambda = c.lambda / Rational(u - 2);
    for (int x = 1; x <= u; ++x) {
      std::vector<int> labels(static_cast<std::size_t>(n));
      for (Vertex i = 1; i <= n; ++i) {
        int label;
        if (i <= p * x)
          label = c.batching.batch_of(i);
        else if (i <= p * x + v)
          label = lifted_batches + (i - p * x - 1) / s;
        else
          label = c.batching.batch_of(i - v);
        labels[static_cast<std::size_t>(i - 1)] = label;
      }
      out.columns.push_back({lambda, PeriodicBatching(s, n, labels)});
    }
  }
  detail::require_verified(out, target, "extend_cover");
  return out;
}

inline CoverCertificate extend_cover(const CoverCertificate& cert, int n) { return extend_cover(cert, n, cert.d); }

struct ContractResult {
  CoverCertificate certificate;
  int u = 0;
  int v = 0;
  Rational factor;          // alpha_out / alpha_in
  Rational formula_factor;  // ((d+1)/(d+1-v))^2
};

/// Turns a cover of C_{rk}^k by (k-1)-batchings into a cover of
/// C_{r(d+1)}^d by d-batchings. If k | d+1 every contracted vertex expands
/// into u = (d+1)/k consecutive vertices and alpha is unchanged. Otherwise
/// d+1 = k*u + v: each choice of v residues mod d+1 is left out of the
/// contraction and packed into batches afterwards, and the columns of all
/// C(d+1, v) choices are scaled by the inverse of the worst edge coverage.
inline ContractResult contract_expand(const CoverCertificate& cert, int d) {
  const int k = cert.d + 1;
  if (k < 2) throw InvalidInput("input certificate needs batch size k >= 2");
  if (cert.n % k != 0) throw InvalidInput("input certificate needs k | n");
  if (d + 1 < k) throw InvalidInput("need d+1 >= k");
  const int r = cert.n / k;
  const int n = r * (d + 1);
  detail::require_verified(cert, cycle_power(cert.n, k), "contract_expand input");
  const int u = (d + 1) / k;
  const int v = (d + 1) % k;
  ContractResult res;
  res.u = u;
  res.v = v;
  res.formula_factor = make_rational(d + 1, d + 1 - v) * make_rational(d + 1, d + 1 - v);
  res.formula_factor.canonicalize();
  if (v == 0) {
    CoverCertificate out{n, d, cert.period * u, cert.alpha, {}};
    for (const auto& c : cert.columns) {
      std::vector<int> labels(static_cast<std::size_t>(n));
      for (Vertex i = 1; i <= n; ++i) labels[static_cast<std::size_t>(i - 1)] = c.batching.batch_of((i - 1) / u + 1);
      out.columns.push_back({c.lambda, PeriodicBatching(d + 1, out.period, labels)});
    }
    detail::require_verified(out, cycle_power(n, d), "contract_expand");
    res.certificate = out;
    res.factor = 1;
    return res;
  }

  // Edges of C_n^d join distinct residues mod d+1; both survive in
  // C(d-1, v) of the C(d+1, v) choices.
  Integer all, kept;
  mpz_bin_uiui(all.get_mpz_t(), static_cast<unsigned long>(d + 1), static_cast<unsigned long>(v));
  mpz_bin_uiui(kept.get_mpz_t(), static_cast<unsigned long>(d - 1), static_cast<unsigned long>(v));
  if (kept == 0) throw InvalidInput("d too small for this k");
  res.factor = Rational(all, kept);
  res.factor.canonicalize();
  CoverCertificate out{n, d, n, cert.alpha * res.factor, {}};
  out.alpha.canonicalize();

  std::vector<int> left_out(static_cast<std::size_t>(v));
  std::iota(left_out.begin(), left_out.end(), 0);
  while (true) {
    std::vector<char> excluded(static_cast<std::size_t>(d + 1), 0);
    for (int x : left_out) excluded[static_cast<std::size_t>(x)] = 1;
    // Rank of each kept vertex among kept vertices, in cycle order.
    std::vector<int> group(static_cast<std::size_t>(n), -1);
    std::vector<Vertex> spare;
    int rank = 0;
    for (Vertex i = 1; i <= n; ++i) {
      if (excluded[static_cast<std::size_t>((i - 1) % (d + 1))])
        spare.push_back(i);
      else
        group[static_cast<std::size_t>(i - 1)] = rank++ / u;
    }
    for (const auto& c : cert.columns) {
      std::vector<int> labels(static_cast<std::size_t>(n), -1);
      for (Vertex i = 1; i <= n; ++i)
        if (group[static_cast<std::size_t>(i - 1)] >= 0)
          labels[static_cast<std::size_t>(i - 1)] = c.batching.batch_of(group[static_cast<std::size_t>(i - 1)] + 1);
      // Fill each batch up to d+1 with left-out vertices in order.
      std::size_t next = 0;
      for (int bidx = 0; bidx < c.batching.batch_count(); ++bidx)
        for (int t = 0; t < v; ++t) labels[static_cast<std::size_t>(spare[next++] - 1)] = bidx;
      out.columns.push_back({c.lambda / kept, PeriodicBatching(d + 1, n, labels)});
    }
    int idx = v - 1;
    while (idx >= 0 && left_out[static_cast<std::size_t>(idx)] == d + 1 - v + idx) --idx;
    if (idx < 0) break;
    ++left_out[static_cast<std::size_t>(idx)];
    for (int t = idx + 1; t < v; ++t) left_out[static_cast<std::size_t>(t)] = left_out[static_cast<std::size_t>(t - 1)] + 1;
  }
  detail::require_verified(out, cycle_power(n, d), "contract_expand");
  res.certificate = out;
  return res;
}

/// Shift family sigma_k(i) = i + k mod n, k in [0, d+l], each with weight
/// 1/(l+1): a ((d+l+1)/(l+1), d+l)-cover of C_n^d.
inline CoverCertificate lookahead_cover(int n, int d, int l) {
  if (d < 0 || l < 0) throw InvalidInput("need d, l >= 0");
  const int s = d + l + 1;
  if (n % s != 0) throw InvalidInput("need (d+l+1) | n");
  if (n <= 2 * d) throw InvalidInput("target cycle needs n > 2d");
  CoverCertificate out{n, d + l, s, make_rational(s, l + 1), {}};
  out.alpha.canonicalize();
  for (int k = 0; k < s; ++k) {
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (Vertex i = 1; i <= n; ++i) labels[static_cast<std::size_t>(i - 1)] = batch_index((i - 1 + k) % n + 1, d + l);
    Rational lambda(1, l + 1);
    lambda.canonicalize();
    out.columns.push_back({lambda, PeriodicBatching(s, s, labels)});
  }
  detail::require_verified(out, cycle_power(n, d), "lookahead_cover");
  return out;
}

/// Upper bound on alpha_d from alpha'_k through the non-multiple
/// construction, next to the reference table value.
struct NonMultipleBound {
  int d = 0;
  int k = 0;
  int v = 0;
  double alpha_k = 0;
  double formula_bound = 0;  // alpha_k * ((d+1)/(d+1-v))^2
  double caption_bound = 0;  // alpha_k * ((d+1-v)/(d+1))^2
  double exact_bound = 0;    // alpha_k * C(d+1,v)/C(d-1,v)
  double table_value = 0;
};

/// Rows of the prime-d table with the alpha'_k values listed alongside.
inline std::vector<NonMultipleBound> nonmultiple_bounds() {
  struct Row {
    int d, k;
    double table;
  };
  const Row rows[] = {{17, 4, 3.58}, {19, 6, 3.48}, {23, 11, 3.44}, {29, 7, 3.31}, {31, 5, 3.36},
                      {37, 6, 3.30}, {41, 5, 3.31}, {43, 7, 3.24}, {47, 9, 3.35}};
  auto alpha_prime = [](int k) {
    switch (k) {
      case 2: return 4.0;
      case 3: return 3.45;
      case 4: return 3.17;
      case 5: return 3.15;
      case 6: return 3.12;
      case 7: return 3.09;
      case 8: return 3.08;
      case 9: return 3.07;
      case 10: return 3.20;
      case 11: return 3.153;
      default: return 0.0;
    }
  };
  std::vector<NonMultipleBound> out;
  for (const auto& row : rows) {
    NonMultipleBound b;
    b.d = row.d;
    b.k = row.k;
    b.v = (row.d + 1) % row.k;
    b.alpha_k = alpha_prime(row.k);
    const double ratio = static_cast<double>(row.d + 1) / (row.d + 1 - b.v);
    b.formula_bound = b.alpha_k * ratio * ratio;
    b.caption_bound = b.alpha_k / (ratio * ratio);
    double exact = 1;
    for (int t = 0; t < b.v; ++t) exact *= static_cast<double>(row.d + 1 - t) / (row.d - 1 - t);
    b.exact_bound = b.alpha_k * exact;
    b.table_value = row.table;
    out.push_back(b);
  }
  return out;
}

}  // namespace dlmatch
