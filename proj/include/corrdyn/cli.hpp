#pragma once

// Experiment commands behind the corrdyn executable. run() executes one
// command, writes a JSON or CSV report and returns the process exit code:
//   0  completed, every checked property held
//   1  completed with a property violation or a witness
//   2  input or parse error
//   3  resource abort (degree limit, root finder out of precision)

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "corrdyn/bigfloat.hpp"
#include "corrdyn/dynamics.hpp"
#include "corrdyn/heights.hpp"
#include "corrdyn/maps.hpp"
#include "corrdyn/parse.hpp"
#include "corrdyn/report.hpp"

namespace corrdyn {

enum class Command { orbit, growth, heights, inclusion, identity, numeric, example, enumerate, mahler };

inline const std::vector<std::pair<std::string, Command>>& command_names() {
  static const std::vector<std::pair<std::string, Command>> names{
      {"orbit", Command::orbit},         {"growth", Command::growth},     {"heights", Command::heights},
      {"inclusion", Command::inclusion}, {"identity", Command::identity}, {"numeric", Command::numeric},
      {"example", Command::example},     {"enumerate", Command::enumerate}, {"mahler", Command::mahler}};
  return names;
}

inline Command parse_command(const std::string& s) {
  for (const auto& [name, c] : command_names())
    if (name == s) return c;
  throw std::invalid_argument("unknown command '" + s + "'");
}

inline std::string to_string(Command c) {
  for (const auto& [name, v] : command_names())
    if (v == c) return name;
  return "?";
}

enum class Format { json, csv };

struct ExperimentConfig {
  Command command = Command::orbit;
  /// Builtin name for the example command.
  std::string example_name = "squares";
  std::optional<std::string> A, B, F, K, K2, poly;
  bool equality = false;
  int steps = 3;
  int N = 5;
  double bound = std::log(2.0);
  long degree_limit = 5000;
  double slack = 1.5;
  double tolerance = 1e-12;
  long precision_bits = default_precision_bits();
  bool check_exact = false;
  int threads = 1;
  Format format = Format::json;
  /// Empty writes to the output stream passed to run().
  std::string output;
  bool timing = false;
};

namespace cli_detail {

struct Outcome {
  Json report;
  Table table;
  int exit_code = 0;
};

class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline const std::string& require(const std::optional<std::string>& v, const char* flag) {
  if (!v) throw InputError(std::string("missing --") + flag);
  return *v;
}

inline RationalMap map_arg(const std::optional<std::string>& v, const char* flag) {
  try {
    return parse_map(require(v, flag));
  } catch (const ParseError& e) {
    throw ParseError(e.position(), std::string("--") + flag + ": " + e.message());
  }
}

inline AlgSet set_arg(const std::optional<std::string>& v, const char* flag) {
  AlgSet S;
  try {
    S = parse_set(require(v, flag));
  } catch (const ParseError& e) {
    throw ParseError(e.position(), std::string("--") + flag + ": " + e.message());
  }
  if (S.empty()) throw InputError(std::string("--") + flag + " is empty");
  return S;
}

inline Json header(const ExperimentConfig& cfg) {
  Json j;
  j["command"] = to_string(cfg.command);
  return j;
}

inline Json constant_json(const CorrespondenceConstant& c) {
  Json j;
  j["c_a"] = real(c.for_a.c_hat);
  j["c_b"] = real(c.for_b.c_hat);
  j["combined"] = real(c.combined);
  j["slack"] = real(c.slack);
  j["c_hat"] = real(c.c_hat);
  j["samples"] = c.for_a.sample_count;
  return j;
}

inline OrbitOptions orbit_options(const ExperimentConfig& cfg) {
  OrbitOptions o;
  o.degree_limit = cfg.degree_limit;
  o.c_hat_slack = cfg.slack;
  o.exec.threads = cfg.threads;
  o.mahler.start_precision_bits = cfg.precision_bits;
  return o;
}

inline Outcome run_orbit(const ExperimentConfig& cfg) {
  const Correspondence C{map_arg(cfg.A, "A"), map_arg(cfg.B, "B")};
  const AlgSet K = set_arg(cfg.K, "K");
  const OrbitResult r = orbit(C, K, cfg.steps, orbit_options(cfg));
  Outcome o;
  o.report = header(cfg);
  o.report["input"] = {{"A", to_string(C.A)}, {"B", to_string(C.B)}, {"K", to_string(K)}, {"steps", cfg.steps},
                       {"degree_limit", cfg.degree_limit}, {"slack", real(cfg.slack)}};
  o.report["n"] = C.n();
  o.report["m"] = C.m();
  o.report["status"] = to_string(r.status);
  o.table.columns = {"step", "cardinality", "raw_degree", "total_height", "avg_height", "if_lower_bound", "fu_upper_bound", "status"};
  bool if_all = true, fu_all = true;
  Json recs = Json::array();
  for (const auto& rec : r.records) {
    const bool fu_ok = !rec.fu_upper_bound || *rec.avg_height <= *rec.fu_upper_bound + 1e-9;
    if_all = if_all && rec.if_holds;
    fu_all = fu_all && fu_ok;
    Json row;
    row["step"] = rec.step;
    row["cardinality"] = rec.cardinality;
    row["raw_degree"] = rec.raw_degree;
    row["total_height"] = rec.total_height ? real(rec.total_height->value) : Json(nullptr);
    row["avg_height"] = real(rec.avg_height);
    row["if_lower_bound"] = rec.growth_lower_bound ? Json(*rec.growth_lower_bound) : Json(nullptr);
    row["fu_upper_bound"] = real(rec.fu_upper_bound);
    row["status"] = !rec.if_holds ? "if_violated" : (fu_ok ? "ok" : "fu_exceeded");
    o.table.rows.push_back(row);
    row["set"] = to_string(rec.set);
    recs.push_back(row);
  }
  o.report["records"] = recs;
  o.report["constant"] = r.constant ? constant_json(*r.constant) : Json(nullptr);
  o.report["checks"] = {{"if_all_hold", if_all}, {"fu_all_hold", r.constant ? Json(fu_all) : Json(nullptr)}};
  o.report["notes"] = Json::array();
  if (r.constant)
    o.report["notes"].push_back("fu_upper_bound uses an empirically estimated constant; it is reported, not enforced");
  if (r.status == OrbitStatus::degree_limit) {
    o.report["notes"].push_back("stopped before step " + std::to_string(r.records.size()) + ": raw degree above limit");
    o.exit_code = 3;
  } else {
    o.exit_code = if_all ? 0 : 1;
  }
  return o;
}

inline Outcome run_growth(const ExperimentConfig& cfg) {
  const Correspondence C{map_arg(cfg.A, "A"), map_arg(cfg.B, "B")};
  const AlgSet K = set_arg(cfg.K, "K");
  if (C.n() <= C.m()) throw InputError("growth lemma requires deg A > deg B");
  OrbitOptions opt = orbit_options(cfg);
  const GrowthReport g = growth_check(C, K, cfg.steps, opt);
  Outcome o;
  o.report = header(cfg);
  o.report["input"] = {{"A", to_string(C.A)}, {"B", to_string(C.B)}, {"K", to_string(K)}, {"steps", cfg.steps}};
  o.report["n"] = g.n;
  o.report["m"] = g.m;
  o.report["threshold"] = g.threshold.get_str();
  o.report["cardinality"] = K.cardinality();
  o.report["exceeds_threshold"] = g.exceeds_threshold;
  o.report["status"] = to_string(g.status);
  o.table.columns = {"step", "previous", "cardinality", "if_lower_bound", "if_holds", "strictly_grows"};
  Json steps = Json::array();
  bool if_all = true;
  for (const auto& s : g.steps) {
    Json row;
    row["step"] = s.step;
    row["previous"] = s.previous;
    row["cardinality"] = s.cardinality;
    row["if_lower_bound"] = ceil_div(s.if_numerator, g.m);
    row["if_holds"] = s.if_holds;
    row["strictly_grows"] = s.strictly_grows;
    if_all = if_all && s.if_holds;
    steps.push_back(row);
    o.table.rows.push_back(row);
  }
  o.report["steps"] = steps;
  o.report["verdict"] = g.verdict;
  o.report["notes"] = Json::array();
  if (!g.exceeds_threshold)
    o.report["notes"].push_back("|K| does not exceed the threshold; growth is not guaranteed");
  if (g.status == OrbitStatus::degree_limit) o.exit_code = 3;
  else if (!if_all || (g.exceeds_threshold && !g.verdict)) o.exit_code = 1;
  return o;
}

inline Outcome run_heights(const ExperimentConfig& cfg) {
  const Correspondence C{map_arg(cfg.A, "A"), map_arg(cfg.B, "B")};
  const AlgSet K = set_arg(cfg.K, "K");
  if (C.n() <= C.m()) throw InputError("height trajectory requires deg A > deg B");
  const HeightReport h = height_trajectory(C, K, cfg.steps, cfg.slack, orbit_options(cfg));
  Outcome o;
  o.report = header(cfg);
  o.report["input"] = {{"A", to_string(C.A)}, {"B", to_string(C.B)}, {"K", to_string(K)}, {"steps", cfg.steps},
                       {"slack", real(cfg.slack)}};
  o.report["n"] = h.n;
  o.report["m"] = h.m;
  o.report["status"] = to_string(h.status);
  o.report["constant"] = constant_json(h.constant);
  o.report["m0"] = real(h.m0);
  o.report["fu_upper_bound"] = real(h.fu_bound);
  o.table.columns = {"step", "cardinality", "total_height", "avg_height", "fu_upper_bound", "fu_holds", "bew_lower", "bew_upper", "bew_holds"};
  Json steps = Json::array();
  for (const auto& s : h.steps) {
    Json row;
    row["step"] = s.step;
    row["cardinality"] = s.cardinality;
    row["total_height"] = real(s.total);
    row["avg_height"] = real(s.average);
    row["fu_upper_bound"] = real(h.fu_bound);
    row["fu_holds"] = s.fu_holds;
    row["bew_lower"] = real(s.bew_lower);
    row["bew_upper"] = real(s.bew_upper);
    row["bew_holds"] = s.bew_holds;
    steps.push_back(row);
    o.table.rows.push_back(row);
  }
  o.report["steps"] = steps;
  o.report["checks"] = {{"fu_all_hold", h.all_fu_hold}, {"bew_all_hold", h.all_bew_hold}};
  o.report["notes"] = Json::array({"bounds use an empirically estimated constant inflated by the slack factor"});
  if (h.status == OrbitStatus::degree_limit) o.exit_code = 3;
  else o.exit_code = h.all_fu_hold && h.all_bew_hold ? 0 : 1;
  return o;
}

inline Json inclusion_json(const InclusionResult& r) {
  Json j;
  j["holds"] = r.holds;
  j["lhs"] = set_json(r.lhs);
  j["rhs"] = set_json(r.rhs);
  j["witness"] = r.witness ? set_json(*r.witness) : Json(nullptr);
  return j;
}

inline Table witness_table(const std::vector<std::pair<std::string, const InclusionResult*>>& parts) {
  Table t;
  t.columns = {"direction", "holds", "lhs_cardinality", "rhs_cardinality", "witness"};
  for (const auto& [dir, r] : parts) {
    Json row;
    row["direction"] = dir;
    row["holds"] = r->holds;
    row["lhs_cardinality"] = r->lhs.cardinality();
    row["rhs_cardinality"] = r->rhs.cardinality();
    row["witness"] = r->witness ? Json(to_string(*r->witness)) : Json(nullptr);
    t.rows.push_back(row);
  }
  return t;
}

inline Outcome run_inclusion(const ExperimentConfig& cfg) {
  const RationalMap A = map_arg(cfg.A, "A"), B = map_arg(cfg.B, "B");
  const AlgSet K1 = set_arg(cfg.K, "K");
  const AlgSet K2 = cfg.K2 ? set_arg(cfg.K2, "K2") : K1;
  Outcome o;
  o.report = header(cfg);
  o.report["input"] = {{"A", to_string(A)}, {"B", to_string(B)}, {"K", to_string(K1)}, {"K2", to_string(K2)},
                       {"equality", cfg.equality}};
  if (cfg.equality) {
    const EqualityResult r = equality_check(A, B, K1, K2);
    o.report["holds"] = r.holds;
    o.report["forward"] = inclusion_json(r.forward);
    o.report["backward"] = inclusion_json(r.backward);
    o.table = witness_table({{"forward", &r.forward}, {"backward", &r.backward}});
    o.exit_code = r.holds ? 0 : 1;
  } else {
    const InclusionResult r = inclusion_check(A, B, K1, K2);
    o.report["holds"] = r.holds;
    o.report["forward"] = inclusion_json(r);
    o.table = witness_table({{"forward", &r}});
    o.exit_code = r.holds ? 0 : 1;
  }
  return o;
}

inline Outcome run_identity(const ExperimentConfig& cfg) {
  const RationalMap F = map_arg(cfg.F, "F"), A = map_arg(cfg.A, "A"), B = map_arg(cfg.B, "B");
  const AlgSet K_hat = set_arg(cfg.K, "K");
  IdentityInvariant inv;
  try {
    inv = invariant_from_identity(F, A, B, K_hat);
  } catch (const IdentityError& e) {
    throw InputError(e.what());
  }
  Outcome o;
  o.report = header(cfg);
  o.report["input"] = {{"F", to_string(F)}, {"A", to_string(A)}, {"B", to_string(B)}, {"K_hat", to_string(K_hat)}};
  o.report["K"] = set_json(inv.K);
  o.report["verified"] = inv.verified;
  o.report["forward"] = inclusion_json(inv.check.forward);
  o.report["backward"] = inclusion_json(inv.check.backward);
  o.table = witness_table({{"forward", &inv.check.forward}, {"backward", &inv.check.backward}});
  o.exit_code = inv.verified ? 0 : 1;
  return o;
}

inline Outcome run_numeric(const ExperimentConfig& cfg) {
  const Correspondence C{map_arg(cfg.A, "A"), map_arg(cfg.B, "B")};
  const AlgSet K = set_arg(cfg.K, "K");
  NumericOptions opt;
  opt.precision_bits = cfg.precision_bits;
  opt.dedup_tolerance = cfg.tolerance;
  opt.exec.threads = cfg.threads;
  const NumericOrbit num = numeric_orbit(C, numeric_from_exact(K, cfg.precision_bits, cfg.tolerance), cfg.steps, opt);
  std::optional<OrbitResult> exact;
  if (cfg.check_exact) {
    OrbitOptions oo = orbit_options(cfg);
    oo.compute_heights = false;
    exact = orbit(C, K, cfg.steps, oo);
  }
  Outcome o;
  o.report = header(cfg);
  o.report["input"] = {{"A", to_string(C.A)}, {"B", to_string(C.B)}, {"K", to_string(K)}, {"steps", cfg.steps},
                       {"precision_bits", cfg.precision_bits}, {"dedup_tolerance", real(cfg.tolerance)}};
  o.report["general_rational"] = num.general_rational;
  o.table.columns = {"step", "cardinality", "has_infinity", "logmax_total", "min_pairwise_distance", "matches_exact"};
  bool all_match = true;
  Json steps = Json::array();
  for (const auto& s : num.steps) {
    Json row;
    row["step"] = s.step;
    row["cardinality"] = s.set.cardinality();
    row["has_infinity"] = s.set.has_infinity;
    row["logmax_total"] = real(s.logmax_total);
    row["min_pairwise_distance"] = real(s.min_pairwise_distance);
    if (exact && static_cast<std::size_t>(s.step) < exact->records.size()) {
      const bool ok = numeric_matches_exact(s.set, exact->records[static_cast<std::size_t>(s.step)].set, 1e-10);
      all_match = all_match && ok;
      row["matches_exact"] = ok;
    } else {
      row["matches_exact"] = nullptr;
    }
    o.table.rows.push_back(row);
    Json points = Json::array();
    for (const auto& p : s.set.points) points.push_back(Json::array({real(p.re.to_double()), real(p.im.to_double())}));
    row["points"] = points;
    steps.push_back(row);
  }
  o.report["steps"] = steps;
  o.report["notes"] = Json::array();
  if (num.general_rational)
    o.report["notes"].push_back("A or B is not a polynomial; the discrete-set regime does not apply");
  if (exact && exact->status == OrbitStatus::degree_limit)
    o.report["notes"].push_back("exact cross-check stopped at the degree limit");
  o.exit_code = all_match ? 0 : 1;
  return o;
}

inline Outcome run_example(const ExperimentConfig& cfg) {
  if (cfg.example_name != "squares" && cfg.example_name != "paper-example")
    throw InputError("unknown example '" + cfg.example_name + "' (available: squares)");
  if (cfg.N < 1) throw InputError("--N must be positive");
  const SquaresExample ex = squares_example(cfg.N);
  Outcome o;
  o.report = header(cfg);
  o.report["example"] = "squares";
  o.report["input"] = {{"A", "z^2"}, {"B", "z^2 + 2*z + 1"}, {"N", cfg.N}, {"K", to_string(ex.K)}};
  o.report["holds"] = ex.inclusion.holds;
  o.report["forward"] = inclusion_json(ex.inclusion);
  o.report["trimmed_holds"] = ex.trimmed_holds;
  o.report["notes"] = Json::array(
      {"K = {0, 1, 4, ..., N^2} truncates a set with A^-1(K) = B^-1(K) = Z",
       "the truncation breaks the inclusion exactly at z = N; removing N from A^-1(K) restores it"});
  o.table = witness_table({{"forward", &ex.inclusion}});
  o.exit_code = ex.inclusion.holds ? 0 : 1;
  return o;
}

inline Outcome run_enumerate(const ExperimentConfig& cfg) {
  const auto pts = enumerate_rational_points(cfg.bound);
  Outcome o;
  o.report = header(cfg);
  o.report["input"] = {{"bound", real(cfg.bound)}};
  o.report["count"] = pts.size();
  o.table.columns = {"point", "height"};
  Json arr = Json::array();
  for (const auto& p : pts) {
    arr.push_back(to_string(p));
    o.table.rows.push_back({{"point", to_string(p)}, {"height", real(weil_height(p).value)}});
  }
  o.report["points"] = arr;
  return o;
}

inline Outcome run_mahler(const ExperimentConfig& cfg) {
  IntPoly p;
  try {
    p = parse_int_poly(require(cfg.poly, "poly"));
  } catch (const ParseError& e) {
    throw ParseError(e.position(), std::string("--poly: ") + e.message());
  }
  if (p.is_zero()) throw InputError("Mahler measure of the zero polynomial");
  MahlerOptions mo;
  mo.start_precision_bits = cfg.precision_bits;
  const MahlerMeasure m = mahler_measure(p, mo);
  Outcome o;
  o.report = header(cfg);
  o.report["input"] = {{"poly", to_string(p)}};
  o.report["log_mahler"] = real(m.value);
  o.report["error_bound"] = real(m.error_bound);
  o.report["precision_bits"] = m.precision_bits;
  o.report["graeffe_value"] = real(m.graeffe_value);
  o.report["graeffe_agrees"] = m.graeffe_agrees;
  o.report["notes"] = Json::array();
  if (m.constant_input) o.report["notes"].push_back("warning: constant polynomial, value is log|c|");
  o.table.columns = {"poly", "log_mahler", "error_bound", "precision_bits", "graeffe_value", "graeffe_agrees"};
  Json row = o.report;
  row["poly"] = to_string(p);
  o.table.rows.push_back(row);
  o.exit_code = m.graeffe_agrees ? 0 : 1;
  return o;
}

inline Outcome dispatch(const ExperimentConfig& cfg) {
  if (cfg.steps < 1 && cfg.command != Command::numeric) throw InputError("--steps must be at least 1");
  if (cfg.steps < 0) throw InputError("--steps must be non-negative");
  if (!(cfg.tolerance > 0)) throw InputError("--tol must be positive");
  if (!(cfg.slack > 0)) throw InputError("--slack must be positive");
  if (cfg.threads < 1) throw InputError("--threads must be at least 1");
  if (cfg.degree_limit < 1) throw InputError("--degree-limit must be positive");
  if (cfg.precision_bits < 53) throw InputError("--precision must be at least 53 bits");
  switch (cfg.command) {
    case Command::orbit: return run_orbit(cfg);
    case Command::growth: return run_growth(cfg);
    case Command::heights: return run_heights(cfg);
    case Command::inclusion: return run_inclusion(cfg);
    case Command::identity: return run_identity(cfg);
    case Command::numeric: return run_numeric(cfg);
    case Command::example: return run_example(cfg);
    case Command::enumerate: return run_enumerate(cfg);
    case Command::mahler: return run_mahler(cfg);
  }
  throw InputError("unknown command");
}

inline Outcome error_outcome(const ExperimentConfig& cfg, const std::string& kind, const std::string& message,
                             std::optional<std::size_t> position, int code) {
  Outcome o;
  o.report = header(cfg);
  o.report["status"] = "error";
  Json e;
  e["kind"] = kind;
  e["message"] = message;
  e["position"] = position ? Json(*position) : Json(nullptr);
  o.report["errors"] = Json::array({e});
  o.table.columns = {"kind", "position", "message"};
  o.table.rows.push_back(e);
  o.exit_code = code;
  return o;
}

}  // namespace cli_detail

/// Runs one command. Reports go to cfg.output when set, else to `out`;
/// diagnostics go to `err`.
inline int run(const ExperimentConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  using namespace cli_detail;
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = dispatch(cfg);
  } catch (const ParseError& e) {
    o = error_outcome(cfg, "parse", e.message(), e.position(), 2);
  } catch (const RootFinderError& e) {
    o = error_outcome(cfg, "numeric", e.what(), std::nullopt, 3);
  } catch (const std::invalid_argument& e) {
    o = error_outcome(cfg, "input", e.what(), std::nullopt, 2);
  } catch (const std::domain_error& e) {
    o = error_outcome(cfg, "input", e.what(), std::nullopt, 2);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.report.contains("errors")) err << "corrdyn: " << o.report["errors"][0]["message"].get<std::string>() << "\n";

  auto emit = [&](std::ostream& os) {
    if (cfg.format == Format::json) write_json(os, o.report);
    else write_csv(os, o.table);
  };
  if (cfg.output.empty()) {
    emit(out);
  } else {
    std::ofstream f(cfg.output);
    if (!f) {
      err << "corrdyn: cannot write " << cfg.output << "\n";
      return 2;
    }
    emit(f);
  }
  if (cfg.timing) {
    Json t{{"command", to_string(cfg.command)}, {"seconds", seconds}, {"exit_code", o.exit_code}};
    if (cfg.output.empty()) {
      err << "timing: " << t.dump() << "\n";
    } else {
      std::ofstream f(cfg.output + ".timing.json");
      f << t.dump(2) << "\n";
    }
  }
  return o.exit_code;
}

}  // namespace corrdyn
