#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dlmatch/cover/batching.hpp"
#include "dlmatch/cover/mask.hpp"
#include "dlmatch/instance_io.hpp"

namespace dlmatch {

struct CoverColumn {
  Rational lambda;
  PeriodicBatching batching;
};

/// A lambda-weighted family of periodic batchings with total weight alpha.
struct CoverCertificate {
  int n = 0;
  int d = 0;
  int period = 0;
  Rational alpha;
  std::vector<CoverColumn> columns;

  Rational lambda_sum() const {
    Rational total(0);
    for (const auto& c : columns) total += c.lambda;
    return total;
  }

  /// sum_k lambda_k B(sigma_k), materialized.
  GraphMask coverage() const {
    GraphMask g(n);
    for (Vertex i = 1; i <= n; ++i)
      for (Vertex j = i + 1; j <= n; ++j) {
        Rational w(0);
        for (const auto& c : columns)
          if (c.batching.same_batch(i, j)) w += c.lambda;
        if (w != 0) g.set_weight(i, j, w);
      }
    return g;
  }
};

struct Deficit {
  Vertex i = 0;
  Vertex j = 0;
  Rational covered;
  Rational required;
};

struct CertificateReport {
  bool ok = true;
  bool alpha_matches = true;
  std::vector<Deficit> deficits;
  std::vector<std::string> errors;
};

/// Checks sum(lambda) == alpha, lambda >= 0, batch shape, and that the
/// weighted batched graphs dominate the target on every pair.
inline CertificateReport verify_certificate(const CoverCertificate& cert, const GraphMask& target) {
  CertificateReport rep;
  if (target.size() != cert.n) rep.errors.push_back("target has " + std::to_string(target.size()) + " vertices, certificate " + std::to_string(cert.n));
  for (std::size_t k = 0; k < cert.columns.size(); ++k) {
    const auto& c = cert.columns[k];
    if (c.lambda < 0) rep.errors.push_back("column " + std::to_string(k) + " has negative lambda");
    if (c.batching.size() != cert.n) rep.errors.push_back("column " + std::to_string(k) + " has wrong size");
    if (c.batching.batch_size() != cert.d + 1)
      rep.errors.push_back("column " + std::to_string(k) + " batch size is not d+1");
  }
  rep.alpha_matches = cert.lambda_sum() == cert.alpha;
  if (!rep.alpha_matches) rep.errors.push_back("sum of lambda " + to_string(cert.lambda_sum()) + " differs from alpha " + to_string(cert.alpha));
  if (rep.errors.empty()) {
    const auto cov = cert.coverage();
    for (const auto& e : target.edges())
      if (cov.weight(e.i, e.j) < e.weight) rep.deficits.push_back({e.i, e.j, cov.weight(e.i, e.j), e.weight});
  }
  rep.ok = rep.errors.empty() && rep.deficits.empty();
  return rep;
}

/// "cycle:n:d" names C_n^d.
inline GraphMask parse_target(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string::npos ? std::string::npos : colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  if (parts.size() == 3 && parts[0] == "cycle") {
    try {
      return cycle_power(std::stoi(parts[1]), std::stoi(parts[2]));
    } catch (const std::logic_error&) {
    }
  }
  throw InvalidInput("target must look like cycle:N:D, got '" + text + "'");
}

namespace detail {

inline std::vector<Vertex> shift_batch(const std::vector<Vertex>& b, int shift, int n) {
  std::vector<Vertex> out;
  for (Vertex v : b) out.push_back((v - 1 + shift) % n + 1);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Stores one batch per orbit under the period shift (the orbit member
/// with the smallest sorted vertex list).
inline Json certificate_to_json(const CoverCertificate& cert) {
  Json j;
  j["n"] = cert.n;
  j["d"] = cert.d;
  j["period"] = cert.period;
  j["alpha"] = to_string(cert.alpha);
  j["columns"] = Json::array();
  for (const auto& c : cert.columns) {
    std::set<std::vector<Vertex>> reps;
    for (const auto& b : c.batching.batches()) {
      std::vector<Vertex> best = b;
      for (int t = cert.period; t < cert.n; t += cert.period) best = std::min(best, detail::shift_batch(b, t, cert.n));
      reps.insert(best);
    }
    Json col;
    col["lambda"] = to_string(c.lambda);
    col["batches"] = Json::array();
    for (const auto& b : reps) col["batches"].push_back(b);
    j["columns"].push_back(col);
  }
  return j;
}

/// Expands every stored batch by all shifts of the period.
inline CoverCertificate certificate_from_json(const Json& j) {
  detail::reject_unknown(j, {"n", "d", "period", "alpha", "columns"}, "certificate");
  CoverCertificate cert;
  cert.n = detail::int_field(j, "n");
  cert.d = detail::int_field(j, "d");
  cert.period = detail::int_field(j, "period");
  if (!j.contains("alpha")) throw InvalidInput("certificate missing 'alpha'");
  cert.alpha = rational_from_json(j.at("alpha"));
  if (cert.n <= 0 || cert.d < 0 || cert.period <= 0 || cert.n % cert.period != 0)
    throw InvalidInput("certificate needs n > 0, d >= 0 and period | n");
  if (!j.contains("columns") || !j.at("columns").is_array()) throw InvalidInput("certificate missing 'columns'");
  for (const auto& col : j.at("columns")) {
    detail::reject_unknown(col, {"lambda", "batches"}, "certificate column");
    std::set<std::vector<Vertex>> all;
    for (const auto& b : col.at("batches")) {
      auto base = b.get<std::vector<Vertex>>();
      for (int t = 0; t < cert.n; t += cert.period) all.insert(detail::shift_batch(base, t, cert.n));
    }
    std::vector<std::vector<Vertex>> batches(all.begin(), all.end());
    cert.columns.push_back({rational_from_json(col.at("lambda")),
                            PeriodicBatching::from_batches(cert.n, cert.d + 1, cert.period, batches)});
  }
  return cert;
}

inline CoverCertificate load_certificate(const std::string& path) {
  try {
    return certificate_from_json(read_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("bad certificate file '" + path + "': " + e.what());
  }
}

}  // namespace dlmatch
