// dlmatch: simulate online matching policies, solve and transform batching
// covers, and emit named instances.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dlmatch/dlmatch.hpp"

namespace {

using namespace dlmatch;

/// Raised when a certificate or report fails its check (exit 1).
struct VerificationFailure : Error {
  using Error::Error;
};

struct InstanceSource {
  std::string path;
  std::string gallery;
  std::vector<std::string> params;
};

void add_instance_flags(CLI::App* cmd, InstanceSource& src) {
  auto* inst = cmd->add_option("--instance", src.path, "Instance JSON file");
  auto* gal = cmd->add_option("--gallery", src.gallery, "Named instance");
  inst->excludes(gal);
  cmd->add_option("--param", src.params, "Gallery parameter k=v (repeatable)");
}

Params parse_params(const std::vector<std::string>& raw) {
  Params out;
  for (const auto& kv : raw) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidInput("--param expects k=v, got '" + kv + "'");
    out[kv.substr(0, eq)] = parse_rational(kv.substr(eq + 1));
  }
  return out;
}

struct LoadedInstance {
  std::string id;
  InstanceFile file;
};

LoadedInstance load_source(const InstanceSource& src) {
  if (!src.path.empty()) {
    if (!src.params.empty()) throw InvalidInput("--param applies to --gallery only");
    return {src.path, load_instance(src.path)};
  }
  if (src.gallery.empty()) throw InvalidInput("one of --instance or --gallery is required");
  auto named = make_instance(src.gallery, parse_params(src.params));
  return {src.gallery, InstanceFile{named.instance, std::nullopt}};
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

ArrivalModel parse_arrival(const std::string& s) {
  if (s == "fixed") return ArrivalModel::Fixed;
  if (s == "uniform") return ArrivalModel::Uniform;
  throw InvalidInput("--arrival is fixed or uniform");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

/// Writes a certificate, reads it back and verifies it against target.
void write_certificate(const CoverCertificate& cert, const GraphMask& target, const std::string& path) {
  if (!path.empty()) {
    write_text(path, certificate_to_json(cert).dump(2) + "\n");
    const auto reread = load_certificate(path);
    const auto rep = verify_certificate(reread, target);
    if (!rep.ok) throw VerificationFailure("written certificate '" + path + "' does not re-verify");
    std::cout << "certificate written to " << path << " (re-verified)\n";
  } else {
    const auto rep = verify_certificate(certificate_from_json(certificate_to_json(cert)), target);
    if (!rep.ok) throw VerificationFailure("certificate does not survive serialization");
  }
}

void print_certificate_summary(const CoverCertificate& cert, const std::string& target) {
  std::cout << "alpha = " << to_string(cert.alpha) << " (" << std::setprecision(6) << to_double(cert.alpha) << ")\n"
            << "target = " << target << ", batch size = " << cert.d + 1 << ", period = " << cert.period
            << ", columns = " << cert.columns.size() << "\n";
}

// simulate ------------------------------------------------------------------

struct SimulateOptions {
  InstanceSource src;
  std::string policies = "pg";
  std::string arrival = "fixed";
  std::uint64_t seeds = 0;
  bool exact = false;
  std::uint64_t seed = 0;
  std::string out;
};

int run_simulate(const SimulateOptions& o) {
  const auto loaded = load_source(o.src);
  ReportOptions opt;
  opt.arrival = parse_arrival(o.arrival);
  opt.exact = o.exact || o.seeds == 0;
  opt.samples = o.seeds == 0 ? 1000 : o.seeds;
  opt.seed = o.seed;
  opt.departures = loaded.file.departure_model;
  if (o.exact && opt.departures) throw InvalidInput("--exact is unavailable with a departure model");
  if (o.exact && opt.arrival == ArrivalModel::Uniform && loaded.file.instance.size() > kMaxExhaustiveOrders)
    throw InvalidInput("--exact with uniform arrivals needs n <= " + std::to_string(kMaxExhaustiveOrders));
  std::ostringstream csv;
  write_csv_header(csv);
  for (const auto& name : split_list(o.policies)) {
    const auto row = competitive_report(loaded.id, loaded.file.instance, name, opt);
    write_csv_row(csv, row);
    std::cout << name << ": E=" << to_string(row.alg) << " OPT=" << to_string(row.off) << " ratio=" << to_string(row.ratio)
              << " [" << row.samples_or_exact << "]\n";
  }
  if (!o.out.empty()) write_text(o.out, csv.str());
  return 0;
}

// sweep ---------------------------------------------------------------------

struct SweepOptions {
  std::string policies = "pg";
  std::string arrival = "fixed";
  int count = 20;
  int max_n = 6;
  int d = 1;
  bool bipartite = false;
  std::uint64_t seeds = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int run_sweep(const SweepOptions& o) {
  if (o.count < 0 || o.max_n < 2 || o.d < 0) throw InvalidInput("need --count >= 0, --n >= 2, --d >= 0");
  ReportOptions opt;
  opt.arrival = parse_arrival(o.arrival);
  opt.exact = o.seeds == 0;
  opt.samples = o.seeds;
  opt.seed = o.seed;
  const auto names = split_list(o.policies);
  std::ostringstream csv;
  write_csv_header(csv);
  for (int k = 0; k < o.count; ++k) {
    const std::uint64_t s = derive_seed(o.seed, "sweep", static_cast<std::uint64_t>(k));
    const int n = 2 + static_cast<int>(s % static_cast<std::uint64_t>(o.max_n - 1));
    const auto inst = o.bipartite ? random_bipartite_instance(n, o.d, s) : random_instance(n, o.d, s);
    for (const auto& name : names) write_csv_row(csv, competitive_report("sweep-" + std::to_string(k), inst, name, opt));
  }
  if (o.out.empty())
    std::cout << csv.str();
  else
    write_text(o.out, csv.str());
  return 0;
}

// offline -------------------------------------------------------------------

int run_offline(const InstanceSource& src) {
  const auto loaded = load_source(src);
  const auto m = offline_optimum(loaded.file.instance);
  std::cout << "OPT=" << to_string(m.weight) << "\n";
  for (const auto& p : m.pairs) std::cout << "  (" << p.a << "," << p.b << ")\n";
  return 0;
}

// cover certificates --------------------------------------------------------

struct CoverOptions {
  std::string variant = "lp";
  int d = -1;
  int k = -1;
  int n = 0;
  int l = 0;
  bool table = false;
  std::string cert;
  std::string target;
  std::string out;
};

int run_cover_lp(const CoverOptions& o) {
  CoverLpResult res;
  if (o.variant == "lp") {
    if (o.d < 1) throw InvalidInput("--variant lp needs --d >= 1");
    res = solve_cover_lp(CoverLpVariant::Lp, o.d);
  } else if (o.variant == "lp-prime") {
    if (o.k < 2) throw InvalidInput("--variant lp-prime needs --k >= 2");
    res = solve_cover_lp(CoverLpVariant::LpPrime, o.k);
  } else {
    throw InvalidInput("--variant is lp or lp-prime");
  }
  const std::string target = "cycle:" + std::to_string(res.target.size()) + ":" +
                             std::to_string(o.variant == "lp" ? o.d : o.k);
  print_certificate_summary(res.certificate, target);
  std::cout << "lp columns = " << res.columns << ", distinct rows = " << res.unique_rows << ", pivots = " << res.pivots
            << "\n";
  write_certificate(res.certificate, res.target, o.out);
  return 0;
}

int run_verify_cert(const CoverOptions& o) {
  const auto cert = load_certificate(o.cert);
  const auto rep = verify_certificate(cert, parse_target(o.target));
  for (const auto& e : rep.errors) std::cout << "error: " << e << "\n";
  for (const auto& d : rep.deficits)
    std::cout << "uncovered (" << d.i << "," << d.j << "): covered " << to_string(d.covered) << " < "
              << to_string(d.required) << "\n";
  if (!rep.ok) {
    std::cout << "FAILED: " << rep.errors.size() << " errors, " << rep.deficits.size() << " uncovered edges\n";
    return 1;
  }
  std::cout << "OK: alpha = " << to_string(cert.alpha) << " covers " << o.target << "\n";
  return 0;
}

int run_extend_cert(const CoverOptions& o) {
  const auto cert = load_certificate(o.cert);
  const int reach = o.d >= 0 ? o.d : cert.d;
  const auto out = extend_cover(cert, o.n, reach);
  const std::string target = "cycle:" + std::to_string(o.n) + ":" + std::to_string(reach);
  print_certificate_summary(out, target);
  write_certificate(out, cycle_power(o.n, reach), o.out);
  return 0;
}

int run_contract_cert(const CoverOptions& o) {
  if (o.table) {
    std::cout << "d,k,v,alpha_k,formula_bound,caption_bound,exact_bound,table_value\n" << std::fixed << std::setprecision(4);
    for (const auto& b : nonmultiple_bounds())
      std::cout << b.d << ',' << b.k << ',' << b.v << ',' << b.alpha_k << ',' << b.formula_bound << ','
                << b.caption_bound << ',' << b.exact_bound << ',' << b.table_value << "\n";
    return 0;
  }
  if (o.cert.empty() || o.d < 0) throw InvalidInput("contract-cert needs --cert and --d (or --table)");
  const auto cert = load_certificate(o.cert);
  const auto res = contract_expand(cert, o.d);
  const std::string target = "cycle:" + std::to_string(res.certificate.n) + ":" + std::to_string(o.d);
  print_certificate_summary(res.certificate, target);
  std::cout << "u = " << res.u << ", v = " << res.v << ", factor = " << to_string(res.factor)
            << ", formula factor = " << to_string(res.formula_factor) << "\n";
  write_certificate(res.certificate, cycle_power(res.certificate.n, o.d), o.out);
  return 0;
}

int run_lookahead_cert(const CoverOptions& o) {
  if (o.d < 0 || o.n <= 0) throw InvalidInput("lookahead-cert needs --n, --d and --l");
  const auto cert = lookahead_cover(o.n, o.d, o.l);
  print_certificate_summary(cert, "cycle:" + std::to_string(o.n) + ":" + std::to_string(o.d));
  write_certificate(cert, cycle_power(o.n, o.d), o.out);
  return 0;
}

// gallery -------------------------------------------------------------------

struct GalleryOptions {
  std::string name;
  std::vector<std::string> params;
  bool bounds = false;
  bool list = false;
  std::string out;
};

int run_gallery(const GalleryOptions& o) {
  if (o.list) {
    for (const auto& n : gallery_names()) {
      std::cout << n;
      for (const auto& [k, v] : gallery_defaults(n)) std::cout << ' ' << k << '=' << to_string(v);
      std::cout << "\n";
    }
    return 0;
  }
  if (o.bounds) {
    for (const char* family : {"constrained-deterministic-lb", "constrained-randomized-lb", "fixed-x"})
      for (auto mode : {BoundMode::Deterministic, BoundMode::Randomized}) {
        const auto b = optimal_online_bounds(family, mode);
        std::cout << family << ' ' << (mode == BoundMode::Deterministic ? "deterministic" : "randomized")
                  << ": value = " << to_string(b.value) << " (" << std::setprecision(6) << b.value.to_double()
                  << "), p = " << to_string(b.p) << "\n";
      }
    return 0;
  }
  if (o.name.empty()) throw InvalidInput("gallery needs --name, --list or --bounds");
  const auto named = make_instance(o.name, parse_params(o.params));
  const std::string text = instance_to_json(named.instance).dump(2) + "\n";
  if (o.out.empty())
    std::cout << text;
  else
    write_text(o.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online matching with deadlines: policies, covers and hard instances"};
  app.require_subcommand(1);

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Expected value of policies on one instance");
  add_instance_flags(simulate, sim.src);
  simulate->add_option("--policy", sim.policies, "Comma-separated policy names");
  simulate->add_option("--arrival", sim.arrival, "fixed or uniform");
  auto* seeds = simulate->add_option("--seeds", sim.seeds, "Monte Carlo sample count");
  simulate->add_flag("--exact", sim.exact, "Enumerate coins (and orders) exactly")->excludes(seeds);
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--out", sim.out, "CSV report path");

  SweepOptions sw;
  auto* sweep = app.add_subcommand("sweep", "Report over seeded random instances");
  sweep->add_option("--policy", sw.policies, "Comma-separated policy names");
  sweep->add_option("--arrival", sw.arrival, "fixed or uniform");
  sweep->add_option("--count", sw.count, "Number of instances");
  sweep->add_option("--n", sw.max_n, "Largest instance size");
  sweep->add_option("--d", sw.d, "Deadline");
  sweep->add_flag("--bipartite", sw.bipartite, "Constrained bipartite instances");
  sweep->add_option("--seeds", sw.seeds, "Monte Carlo samples per instance (0 = exact)");
  sweep->add_option("--seed", sw.seed, "Master seed");
  sweep->add_option("--out", sw.out, "CSV report path");

  InstanceSource off_src;
  auto* offline = app.add_subcommand("offline", "Offline optimum of one instance");
  add_instance_flags(offline, off_src);

  CoverOptions cov;
  auto* cover = app.add_subcommand("cover-lp", "Solve LP_d or LP'_k exactly");
  cover->add_option("--variant", cov.variant, "lp or lp-prime");
  cover->add_option("--d", cov.d, "Deadline for lp");
  cover->add_option("--k", cov.k, "Parameter for lp-prime");
  cover->add_option("--out", cov.out, "Certificate path");

  auto* verify = app.add_subcommand("verify-cert", "Check a certificate against a target");
  verify->add_option("--cert", cov.cert, "Certificate path")->required();
  verify->add_option("--target", cov.target, "cycle:N:D")->required();

  auto* extend = app.add_subcommand("extend-cert", "Extend a periodic cover to a larger cycle");
  extend->add_option("--cert", cov.cert, "Certificate path")->required();
  extend->add_option("--n", cov.n, "Target cycle length")->required();
  extend->add_option("--d", cov.d, "Target cycle power (default: certificate d)");
  extend->add_option("--out", cov.out, "Certificate path");

  auto* contract = app.add_subcommand("contract-cert", "Expand a contracted cover to a larger deadline");
  contract->add_option("--cert", cov.cert, "Certificate for C_{rk}^k");
  contract->add_option("--d", cov.d, "Target deadline");
  contract->add_flag("--table", cov.table, "Recompute the prime-d bounds table");
  contract->add_option("--out", cov.out, "Certificate path");

  auto* look = app.add_subcommand("lookahead-cert", "Shift cover for batching with lookahead");
  look->add_option("--n", cov.n, "Cycle length")->required();
  look->add_option("--d", cov.d, "Deadline")->required();
  look->add_option("--l", cov.l, "Lookahead")->required();
  look->add_option("--out", cov.out, "Certificate path");

  GalleryOptions gal;
  auto* gallery = app.add_subcommand("gallery", "Emit a named instance as JSON");
  gallery->add_option("--name,--gallery", gal.name, "Instance name");
  gallery->add_option("--param", gal.params, "Parameter k=v (repeatable)");
  gallery->add_flag("--list", gal.list, "List names and defaults");
  gallery->add_flag("--bounds", gal.bounds, "Best achievable online ratios of the two-knob families");
  gallery->add_option("--out", gal.out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*sweep) return run_sweep(sw);
    if (*offline) return run_offline(off_src);
    if (*cover) return run_cover_lp(cov);
    if (*verify) return run_verify_cert(cov);
    if (*extend) return run_extend_cert(cov);
    if (*contract) return run_contract_cert(cov);
    if (*look) return run_lookahead_cert(cov);
    if (*gallery) return run_gallery(gal);
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
