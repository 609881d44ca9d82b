/// Command-line driver: batch subcommands over the library with CSV
/// reports. Configuration comes from flags or from plain-text key-value
/// files ("key = value" lines, '#' comments); flags win over file entries,
/// malformed or unknown entries are rejected with file:line:column
/// positions. Exit codes: 0 success, 1 failed verification or computation,
/// 2 usage or configuration error. Independent sweep points may run on a
/// worker pool (capped by PSHLAB_THREADS); rows are emitted in sweep order,
/// so identical invocations produce byte-identical CSV.
#pragma once

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "pshlab/csv.hpp"
#include "pshlab/parse.hpp"
#include "pshlab/verify.hpp"

namespace pshlab {

namespace cdetail {

inline std::size_t worker_count(std::size_t jobs) {
  std::size_t cap = std::thread::hardware_concurrency();
  if (cap == 0) cap = 1;
  if (const char* env = std::getenv("PSHLAB_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end == env || *end != '\0' || v == 0)
      throw std::invalid_argument(
          "PSHLAB_THREADS must be a positive integer");
    cap = std::size_t(v);
  }
  return std::max<std::size_t>(1, std::min(cap, jobs));
}

/// fn(i) for i in [0, n), possibly concurrently; results must be stored by
/// index so emission order stays deterministic. The first exception wins.
template <class Fn>
void run_indexed(std::size_t n, Fn&& fn) {
  const std::size_t workers = worker_count(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mx;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mx);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct ConfigEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t key_column = 0;
  std::size_t value_column = 0;
};

[[noreturn]] inline void config_fail(const std::string& name,
                                     std::size_t line, std::size_t column,
                                     const std::string& msg) {
  throw std::invalid_argument(name + ":" + std::to_string(line) + ":" +
                              std::to_string(column) + ": " + msg);
}

/// "key = value" per line; '#' starts a comment, blank lines are skipped,
/// keys are [a-z0-9-], duplicates are rejected.
inline std::vector<ConfigEntry> parse_config_text(const std::string& text,
                                                  const std::string& name) {
  std::vector<ConfigEntry> out;
  std::map<std::string, std::size_t> seen;
  std::size_t pos = 0, line_no = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string line = text.substr(
        pos, nl == std::string::npos ? std::string::npos : nl - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);

    std::size_t first = 0;
    while (first < line.size() &&
           std::isspace(static_cast<unsigned char>(line[first])))
      ++first;
    if (first < line.size()) {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        config_fail(name, line_no, first + 1, "expected 'key = value'");
      std::size_t key_end = eq;
      while (key_end > first &&
             std::isspace(static_cast<unsigned char>(line[key_end - 1])))
        --key_end;
      if (key_end == first)
        config_fail(name, line_no, first + 1, "empty key");
      const std::string key = line.substr(first, key_end - first);
      for (std::size_t i = 0; i < key.size(); ++i) {
        const char c = key[i];
        if (!(std::islower(static_cast<unsigned char>(c)) ||
              std::isdigit(static_cast<unsigned char>(c)) || c == '-'))
          config_fail(name, line_no, first + i + 1,
                      std::string("invalid key character '") + c + "'");
      }
      std::size_t v_lo = eq + 1;
      while (v_lo < line.size() &&
             std::isspace(static_cast<unsigned char>(line[v_lo])))
        ++v_lo;
      std::size_t v_hi = line.size();
      while (v_hi > v_lo &&
             std::isspace(static_cast<unsigned char>(line[v_hi - 1])))
        --v_hi;
      if (v_lo == v_hi)
        config_fail(name, line_no, eq + 2, "empty value");
      if (!seen.emplace(key, line_no).second)
        config_fail(name, line_no, first + 1,
                    "duplicate key '" + key + "' (first on line " +
                        std::to_string(seen[key]) + ")");
      out.push_back({key, line.substr(v_lo, v_hi - v_lo), line_no, first + 1,
                     v_lo + 1});
    }
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  return out;
}

/// All option values travel as strings (flags and config files alike);
/// conversion to numbers/objects happens per key with shared validation.
struct CliConfig {
  std::string weight;
  std::string f;
  std::string p = "2";
  std::string r_grid;
  std::string t_grid = "0.9,0.99,0.999,0.9999";
  std::string tol;
  std::string out;
  std::string suite = "all";
  std::string angles = "4096";
  std::string witness_angle = "0";
  std::string config;
};

inline double to_real(const std::string& s, const std::string& what) {
  return pdetail::parse_real({s, 1}, what);
}

inline long to_count(const std::string& s, const std::string& what,
                     long lo, long hi) {
  const double v = to_real(s, what);
  const long n = long(v);
  if (double(n) != v || n < lo || n > hi)
    throw std::invalid_argument(what + ": expected an integer in [" +
                                std::to_string(lo) + ", " +
                                std::to_string(hi) + "], got '" + s + "'");
  return n;
}

inline std::vector<double> positive_list(const std::string& s,
                                         const std::string& what) {
  auto v = parse_grid(s, what);
  for (double x : v)
    if (!(x > 0.0))
      throw std::invalid_argument(what + ": entries must be positive");
  return v;
}

/// Eager validation used for config-file entries so errors surface with the
/// file position rather than at first use.
inline void validate_key(const std::string& key, const std::string& value) {
  if (key == "weight") {
    parse_weight(value);
  } else if (key == "f") {
    parse_function(value);
  } else if (key == "p") {
    positive_list(value, "p list");
  } else if (key == "r-grid") {
    for (double r : parse_grid(value, "r-grid"))
      if (!(r < 0.0))
        throw std::invalid_argument("r-grid: entries must be negative");
  } else if (key == "t-grid") {
    for (double t : parse_grid(value, "t-grid"))
      if (!(t > 0.0 && t < 1.0))
        throw std::invalid_argument("t-grid: entries must lie in (0, 1)");
  } else if (key == "tol") {
    if (!(to_real(value, "tol") > 0.0))
      throw std::invalid_argument("tol: must be positive");
  } else if (key == "suite") {
    suite_checks(value);
  } else if (key == "angles") {
    to_count(value, "angles", 16, 1 << 22);
  } else if (key == "witness-angle") {
    to_real(value, "witness-angle");
  }
  // "out" carries no constraints
}

struct KeySlot {
  CLI::Option* option = nullptr;
  std::string* field = nullptr;
};

inline const std::string& need(const std::string& value,
                               const std::string& cmd,
                               const std::string& key) {
  if (value.empty())
    throw std::invalid_argument(cmd + ": missing --" + key +
                                " (or config key '" + key + "')");
  return value;
}

inline QuadratureOptions base_options(const CliConfig& cfg,
                                      const RieszMeasure& nu) {
  QuadratureOptions opt;
  opt.tol = cfg.tol.empty() ? (nu.has_radial() ? 1e-7 : 1e-8)
                            : to_real(cfg.tol, "tol");
  return opt;
}

inline void emit_csv(const CliConfig& cfg, const CsvTable& table,
                     std::ostream& out) {
  if (cfg.out.empty()) {
    out << table.text();
    return;
  }
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file)
    throw std::invalid_argument("cannot open output file '" + cfg.out + "'");
  file << table.text();
  file.flush();
  if (!file) throw std::runtime_error("write failed for '" + cfg.out + "'");
}

inline int run_density(const CliConfig& cfg, std::ostream& out) {
  const RieszMeasure nu = parse_weight(need(cfg.weight, "density", "weight"));
  const long n = to_count(cfg.angles, "angles", 16, 1 << 22);
  std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(n));
  run_indexed(rows.size(), [&](std::size_t k) {
    const double theta = kTwoPi * double(k) / double(n);
    const double alpha = boundary_density(nu, theta);
    rows[k] = {csv_num(theta), csv_num(alpha),
               std::isfinite(alpha) ? "finite" : "divergent", "Prop 4.2"};
  });
  CsvTable table({"theta", "alpha", "verdict", "tag"});
  for (const auto& r : rows) table.row(r);
  emit_csv(cfg, table, out);
  return 0;
}

inline int run_norm(const CliConfig& cfg, std::ostream& out) {
  const RieszMeasure nu = parse_weight(need(cfg.weight, "norm", "weight"));
  const AnalyticFunction fn = parse_function(need(cfg.f, "norm", "f"));
  const auto ps = positive_list(cfg.p, "p list");
  const QuadratureOptions opt = base_options(cfg, nu);
  std::vector<std::vector<std::string>> rows(ps.size());
  run_indexed(ps.size(), [&](std::size_t i) {
    const NormReport rep = norm_report(fn, ps[i], nu, true, opt);
    const bool fin = std::isfinite(rep.boundary_value.value);
    rows[i] = {cfg.f,
               csv_num(ps[i]),
               csv_num(rep.boundary_value.value),
               rep.interior_value ? csv_num(rep.interior_value->value) : "",
               rep.classical_value ? csv_num(rep.classical_value->value) : "",
               csv_num(rep.agreement_gap),
               fin ? "finite" : "divergent",
               "Thm 6.4"};
  });
  CsvTable table(
      {"f", "p", "boundary", "interior", "classical", "gap", "verdict", "tag"});
  for (const auto& r : rows) table.row(r);
  emit_csv(cfg, table, out);
  return 0;
}

inline int run_measure(const CliConfig& cfg, std::ostream& out) {
  const RieszMeasure nu = parse_weight(need(cfg.weight, "measure", "weight"));
  const AnalyticFunction fn = parse_function(need(cfg.f, "measure", "f"));
  const auto ps = positive_list(cfg.p, "p list");
  const std::vector<double> rs =
      cfg.r_grid.empty() ? default_r_grid() : parse_grid(cfg.r_grid, "r-grid");
  for (double r : rs)
    if (!(r < 0.0))
      throw std::invalid_argument("r-grid: entries must be negative");
  const QuadratureOptions opt = base_options(cfg, nu);
  std::vector<std::vector<std::string>> rows(ps.size() * rs.size());
  run_indexed(rows.size(), [&](std::size_t i) {
    const double p = ps[i / rs.size()];
    const double r = rs[i % rs.size()];
    const QuadratureResult q =
        demailly_functional(nu, r, density_abs_p(fn, p), opt);
    rows[i] = {cfg.f,
               csv_num(p),
               csv_num(r),
               csv_num(q.value),
               csv_num(q.error_estimate),
               q.converged ? "1" : "0",
               "Thm 2.1"};
  });
  CsvTable table({"f", "p", "r", "value", "error", "converged", "tag"});
  for (const auto& r : rows) table.row(r);
  emit_csv(cfg, table, out);
  return 0;
}

inline int run_membership(const CliConfig& cfg, std::ostream& out) {
  const RieszMeasure nu =
      parse_weight(need(cfg.weight, "membership", "weight"));
  const AnalyticFunction fn = parse_function(need(cfg.f, "membership", "f"));
  const auto ps = positive_list(cfg.p, "p list");
  const QuadratureOptions opt = base_options(cfg, nu);
  std::vector<std::vector<std::string>> rows(ps.size());
  run_indexed(ps.size(), [&](std::size_t i) {
    const MembershipReport rep = membership(fn, ps[i], nu, opt);
    rows[i] = {cfg.f,
               csv_num(ps[i]),
               rep.verdict == Membership::member ? "member" : "non_member",
               csv_num(rep.classical_exponent),
               csv_num(rep.weighted_exponent),
               csv_num(rep.predicted_slope),
               csv_num(rep.fitted_slope),
               rep.note,
               "Thm 6.4"};
  });
  CsvTable table({"f", "p", "verdict", "classical_exponent",
                  "weighted_exponent", "predicted_slope", "fitted_slope",
                  "note", "tag"});
  for (const auto& r : rows) table.row(r);
  emit_csv(cfg, table, out);
  return 0;
}

inline int run_deflate(const CliConfig& cfg, std::ostream& out) {
  const RieszMeasure nu = parse_weight(need(cfg.weight, "deflate", "weight"));
  const AnalyticFunction fn = parse_function(need(cfg.f, "deflate", "f"));
  const auto ps = positive_list(cfg.p, "p list");
  const QuadratureOptions opt = base_options(cfg, nu);
  std::vector<std::vector<std::string>> rows(ps.size());
  run_indexed(ps.size(), [&](std::size_t i) {
    const Deflation d = deflate(fn, ps[i], nu, opt);
    const bool fin = std::isfinite(d.report.f_norm.quad.value);
    rows[i] = {cfg.f,
               csv_num(ps[i]),
               csv_num(d.report.f_norm.quad.value),
               csv_num(d.report.g_norm.quad.value),
               csv_num(d.report.gap),
               fin ? "finite" : "divergent",
               "Thm 6.1"};
  });
  CsvTable table({"f", "p", "f_norm", "g_norm", "gap", "verdict", "tag"});
  for (const auto& r : rows) table.row(r);
  emit_csv(cfg, table, out);
  return 0;
}

inline int run_isometry(const CliConfig& cfg, std::ostream& out) {
  const RieszMeasure nu = parse_weight(need(cfg.weight, "isometry", "weight"));
  const AnalyticFunction fn = parse_function(need(cfg.f, "isometry", "f"));
  const auto ps = positive_list(cfg.p, "p list");
  const QuadratureOptions opt = base_options(cfg, nu);
  std::vector<std::vector<std::string>> rows(ps.size());
  run_indexed(ps.size(), [&](std::size_t i) {
    const IsometryReport rep = isometry_check(fn, ps[i], nu, opt);
    const bool fin = std::isfinite(rep.weighted.quad.value);
    rows[i] = {cfg.f,
               csv_num(ps[i]),
               csv_num(rep.weighted.quad.value),
               csv_num(rep.classical.quad.value),
               csv_num(rep.gap),
               csv_num(rep.roundtrip),
               fin ? "finite" : "divergent",
               "Thm 7.3"};
  });
  CsvTable table(
      {"f", "p", "weighted", "classical", "gap", "roundtrip", "verdict", "tag"});
  for (const auto& r : rows) table.row(r);
  emit_csv(cfg, table, out);
  return 0;
}

inline int run_probe(const CliConfig& cfg, std::ostream& out) {
  const AnalyticFunction fn = parse_function(need(cfg.f, "probe", "f"));
  const auto ps = positive_list(cfg.p, "p list");
  const auto ts = parse_grid(cfg.t_grid, "t-grid");
  for (double t : ts)
    if (!(t > 0.0 && t < 1.0))
      throw std::invalid_argument("t-grid: entries must lie in (0, 1)");
  const double angle = to_real(cfg.witness_angle, "witness-angle");
  QuadratureOptions opt;
  if (!cfg.tol.empty()) opt.tol = to_real(cfg.tol, "tol");
  std::vector<std::vector<std::vector<std::string>>> blocks(ps.size());
  run_indexed(ps.size(), [&](std::size_t i) {
    const ProbeReport rep = ball_probe(fn, ps[i], ts, angle, opt);
    for (const auto& row : rep.rows) {
      const bool is_witness = rep.witness && row.t == *rep.witness;
      blocks[i].push_back({cfg.f, csv_num(ps[i]), csv_num(row.t),
                           csv_num(row.value), is_witness ? "1" : "0",
                           row.verdict == Verdict::finite ? "finite"
                                                          : "divergent",
                           "Thm 7.2"});
    }
  });
  CsvTable table({"f", "p", "t", "value", "witness", "verdict", "tag"});
  for (const auto& block : blocks)
    for (const auto& r : block) table.row(r);
  emit_csv(cfg, table, out);
  return 0;
}

inline int run_verify(const CliConfig& cfg, std::ostream& out,
                      std::ostream& err) {
  const std::vector<int> ids = suite_checks(cfg.suite);
  std::vector<CheckResult> results(ids.size());
  run_indexed(ids.size(),
              [&](std::size_t i) { results[i] = run_check(ids[i]); });
  CsvTable table({"check", "tag", "name", "status", "detail"});
  std::vector<std::string> failed;
  for (const auto& r : results) {
    out << check_line(r) << "\n";
    char id[8];
    std::snprintf(id, sizeof id, "C%02d", r.id);
    table.row({id, r.tag, r.name, r.pass ? "PASS" : "FAIL", r.detail});
    if (!r.pass) failed.push_back(r.tag);
  }
  if (!cfg.out.empty()) emit_csv(cfg, table, out);
  if (!failed.empty()) {
    err << "verification failed:";
    for (const auto& tag : failed) err << " [" << tag << "]";
    err << "\n";
    return 1;
  }
  return 0;
}

}  // namespace cdetail

/// Entry point shared by the binary and the tests. argv follows main()'s
/// convention; report output goes to `out`, diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv,
                   std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  cdetail::CliConfig cfg;
  CLI::App app{"numerical laboratory for weighted Hardy spaces on the disk"};
  app.require_subcommand(1);

  struct SubSpec {
    const char* name;
    const char* desc;
    std::vector<std::string> keys;
  };
  const std::vector<SubSpec> specs = {
      {"density", "boundary density profile over a uniform angle grid",
       {"weight", "angles", "out", "config"}},
      {"norm", "weighted norms by independent routes",
       {"weight", "f", "p", "tol", "out", "config"}},
      {"measure", "level-set functional sweep over the r-grid",
       {"weight", "f", "p", "r-grid", "tol", "out", "config"}},
      {"membership", "membership verdict with growth diagnostics",
       {"weight", "f", "p", "tol", "out", "config"}},
      {"deflate", "divide out zeros and report norm invariance",
       {"weight", "f", "p", "tol", "out", "config"}},
      {"isometry", "outer-factor transport onto the classical space",
       {"weight", "f", "p", "tol", "out", "config"}},
      {"probe", "atom-measure probe of the unit ball",
       {"f", "p", "t-grid", "witness-angle", "tol", "out", "config"}},
      {"verify", "run the verification suite",
       {"suite", "tol", "out", "config"}},
  };

  std::map<std::string, std::map<std::string, cdetail::KeySlot>> slots;
  auto add_key = [&cfg](CLI::App* sub, const std::string& key)
      -> cdetail::KeySlot {
    if (key == "weight")
      return {sub->add_option("--weight", cfg.weight,
                              "measure spec: \"atom re im mass\" or \"radial "
                              "beta [kappa [s_max]]\", joined by ' + '"),
              &cfg.weight};
    if (key == "f")
      return {sub->add_option("--f", cfg.f,
                              "fixture spec: products/sums of z, one, const "
                              "c, affine c0 c1, poly c0 c1 ..., pow a, "
                              "blaschke z1 ..."),
              &cfg.f};
    if (key == "p")
      return {sub->add_option("--p", cfg.p,
                              "comma-separated exponent list (default 2)"),
              &cfg.p};
    if (key == "r-grid")
      return {sub->add_option("--r-grid", cfg.r_grid,
                              "comma-separated negative levels (default "
                              "-1,-0.3,-0.1,-0.03,-0.01,-0.003,-0.001)"),
              &cfg.r_grid};
    if (key == "t-grid")
      return {sub->add_option("--t-grid", cfg.t_grid,
                              "comma-separated radii in (0,1) (default "
                              "0.9,0.99,0.999,0.9999)"),
              &cfg.t_grid};
    if (key == "tol")
      return {sub->add_option("--tol", cfg.tol,
                              "quadrature tolerance (per-command default; "
                              "verification thresholds stay pinned)"),
              &cfg.tol};
    if (key == "out")
      return {sub->add_option("--out", cfg.out,
                              "write the CSV report to this file instead of "
                              "stdout"),
              &cfg.out};
    if (key == "suite")
      return {sub->add_option("--suite", cfg.suite,
                              "'all', 'core', or comma-separated check ids "
                              "(default all)"),
              &cfg.suite};
    if (key == "angles")
      return {sub->add_option("--angles", cfg.angles,
                              "uniform angle count (default 4096)"),
              &cfg.angles};
    if (key == "witness-angle")
      return {sub->add_option("--witness-angle", cfg.witness_angle,
                              "angle of the probe atom ray (default 0)"),
              &cfg.witness_angle};
    if (key == "config")
      return {sub->add_option("--config", cfg.config,
                              "key = value file; flags override its entries"),
              &cfg.config};
    throw std::logic_error("unknown option key " + key);
  };
  for (const auto& spec : specs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.desc);
    for (const auto& key : spec.keys) slots[spec.name][key] = add_key(sub, key);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "pshlab: " << e.what() << "\n";
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (!cfg.config.empty()) {
      std::ifstream in(cfg.config, std::ios::binary);
      if (!in)
        throw std::invalid_argument("cannot open config file '" + cfg.config +
                                    "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      auto& keymap = slots[cmd];
      for (const auto& entry :
           cdetail::parse_config_text(ss.str(), cfg.config)) {
        auto it = keymap.find(entry.key);
        if (it == keymap.end() || entry.key == "config")
          cdetail::config_fail(cfg.config, entry.line, entry.key_column,
                               "unknown key '" + entry.key + "' for command '" +
                                   cmd + "'");
        if (it->second.option->count() > 0) continue;
        try {
          cdetail::validate_key(entry.key, entry.value);
        } catch (const std::exception& ex) {
          cdetail::config_fail(cfg.config, entry.line, entry.value_column,
                               ex.what());
        }
        *it->second.field = entry.value;
      }
    }

    if (cmd == "density") return cdetail::run_density(cfg, out);
    if (cmd == "norm") return cdetail::run_norm(cfg, out);
    if (cmd == "measure") return cdetail::run_measure(cfg, out);
    if (cmd == "membership") return cdetail::run_membership(cfg, out);
    if (cmd == "deflate") return cdetail::run_deflate(cfg, out);
    if (cmd == "isometry") return cdetail::run_isometry(cfg, out);
    if (cmd == "probe") return cdetail::run_probe(cfg, out);
    if (cmd == "verify") return cdetail::run_verify(cfg, out, err);
    throw std::logic_error("unhandled command " + cmd);
  } catch (const std::invalid_argument& e) {
    err << "pshlab: error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "pshlab: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "pshlab: computation failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pshlab
