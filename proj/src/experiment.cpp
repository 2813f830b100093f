#include "eudiv/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "eudiv/errors.hpp"

namespace eudiv {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw ConfigError("config field \"" + field + "\": " + why);
}

Nat json_nat(const json& v, const std::string& field) {
  if (v.is_number_unsigned()) return nat(v.get<std::uint64_t>());
  if (v.is_number_integer()) {
    std::int64_t s = v.get<std::int64_t>();
    if (s < 0) bad_field(field, "must be a natural number");
    return nat(static_cast<std::uint64_t>(s));
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      bad_field(field, "must be a decimal natural, got \"" + s + "\"");
    }
    return Nat(s);
  }
  bad_field(field, "must be a natural number or decimal string");
}

std::uint64_t json_u64(const json& v, const std::string& field) {
  Nat n = json_nat(v, field);
  if (!fits_u64(n)) bad_field(field, "does not fit in 64 bits");
  return to_u64(n);
}

Rat json_rat(const json& v, const std::string& field) {
  if (v.is_number_integer() || v.is_number_unsigned()) {
    return Rat(Nat(v.dump()));
  }
  if (v.is_string()) {
    try {
      return rat_from_string(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      bad_field(field, e.what());
    }
  }
  bad_field(field,
            "must be an integer or \"num/den\" string (floats are not exact)");
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      bad_field(where.empty() ? item.key() : where + "." + item.key(),
                "unknown field");
    }
  }
}

fs::path ensure_out(const ExperimentConfig& config) {
  fs::path dir(config.out_dir);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_artifact(const fs::path& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot open artifact file " + path.string());
  return os;
}

void log_line(const fs::path& dir, const std::string& line) {
  std::ofstream os(dir / "run_log.txt", std::ios::app);
  os << line << '\n';
}

json rat_json(const Rat& q) {
  return json{{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

void dump_json(const fs::path& path, const json& j) {
  auto os = open_artifact(path);
  os << j.dump(2) << '\n';
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

const char* skip_label(SkipReason skip) {
  switch (skip) {
    case SkipReason::none: return "";
    case SkipReason::not_halted: return "not_halted";
    case SkipReason::evidence_contradicted: return "evidence_contradicted";
    case SkipReason::evidence_undecided: return "evidence_undecided";
  }
  return "";
}

std::string approx_string(const Rat& q) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", rat_approx(q));
  return buf;
}

}  // namespace

UtilitySpec ExperimentConfig::utility() const {
  return make_utility(utility_label, utility_scale, utility_offset);
}

void ExperimentConfig::validate() const {
  if (step_budget == 0) bad_field("budgets.step", "must be at least 1");
  if (eval_budget == 0) bad_field("budgets.eval", "must be at least 1");
  if (search_budget == 0) bad_field("budgets.search", "must be at least 1");
  if (evidence.count(k)) {
    throw ConfigError(
        "config: evidence must not constrain the distinguished input k = " +
        k.get_str());
  }
  utility();  // validates the label and affine parameters
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be a JSON object");
  check_keys(root, "",
             {"k", "evidence", "utility", "n_max", "j_max", "bb_x_max",
              "budgets", "min_passing", "checkpoints", "fixed_point",
              "out_dir"});

  ExperimentConfig c;
  if (root.contains("k")) c.k = json_nat(root["k"], "k");
  if (root.contains("evidence")) {
    const json& ev = root["evidence"];
    if (!ev.is_array()) {
      bad_field("evidence", "must be an array of [input, value] pairs");
    }
    c.evidence.clear();
    for (std::size_t i = 0; i < ev.size(); ++i) {
      const std::string field = "evidence[" + std::to_string(i) + "]";
      if (!ev[i].is_array() || ev[i].size() != 2) {
        bad_field(field, "must be an [input, value] pair");
      }
      Nat input = json_nat(ev[i][0], field + "[0]");
      Nat value = json_nat(ev[i][1], field + "[1]");
      if (!c.evidence.emplace(std::move(input), std::move(value)).second) {
        bad_field(field, "duplicate evidence input");
      }
    }
  }
  if (root.contains("utility")) {
    const json& u = root["utility"];
    if (!u.is_object()) bad_field("utility", "must be an object");
    check_keys(u, "utility", {"label", "scale", "offset"});
    if (u.contains("label")) {
      if (!u["label"].is_string()) bad_field("utility.label", "must be a string");
      c.utility_label = u["label"].get<std::string>();
    }
    if (u.contains("scale")) c.utility_scale = json_rat(u["scale"], "utility.scale");
    if (u.contains("offset")) {
      c.utility_offset = json_rat(u["offset"], "utility.offset");
    }
  }
  if (root.contains("n_max")) c.n_max = json_u64(root["n_max"], "n_max");
  if (root.contains("j_max")) c.j_max = json_u64(root["j_max"], "j_max");
  if (root.contains("bb_x_max")) c.bb_x_max = json_u64(root["bb_x_max"], "bb_x_max");
  if (root.contains("budgets")) {
    const json& b = root["budgets"];
    if (!b.is_object()) bad_field("budgets", "must be an object");
    check_keys(b, "budgets", {"step", "eval", "search"});
    if (b.contains("step")) c.step_budget = json_u64(b["step"], "budgets.step");
    if (b.contains("eval")) c.eval_budget = json_u64(b["eval"], "budgets.eval");
    if (b.contains("search")) {
      c.search_budget = json_u64(b["search"], "budgets.search");
    }
  }
  if (root.contains("min_passing")) {
    c.min_passing = json_u64(root["min_passing"], "min_passing");
  }
  if (root.contains("checkpoints")) {
    const json& pts = root["checkpoints"];
    if (!pts.is_array()) bad_field("checkpoints", "must be an array");
    c.checkpoints.clear();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      c.checkpoints.push_back(
          json_u64(pts[i], "checkpoints[" + std::to_string(i) + "]"));
    }
  }
  if (root.contains("fixed_point")) {
    const json& f = root["fixed_point"];
    if (!f.is_object()) bad_field("fixed_point", "must be an object");
    check_keys(f, "fixed_point", {"a", "b", "search_cap"});
    if (f.contains("a")) c.fixed_a = json_u64(f["a"], "fixed_point.a");
    if (f.contains("b")) c.fixed_b = json_u64(f["b"], "fixed_point.b");
    if (f.contains("search_cap")) {
      c.fixedpoint_search_cap = json_u64(f["search_cap"], "fixed_point.search_cap");
    }
  }
  if (root.contains("out_dir")) {
    if (!root["out_dir"].is_string()) bad_field("out_dir", "must be a string");
    c.out_dir = root["out_dir"].get<std::string>();
  }

  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << is.rdbuf();
  return from_json_text(text.str());
}

EvalTable cmd_enumerate(const ExperimentConfig& config) {
  config.validate();
  EvalTable table = evaluate_range(config.k, config.n_max, config.step_budget);
  fs::path dir = ensure_out(config);
  {
    auto os = open_artifact(dir / "eval_table.csv");
    write_eval_table_csv(os, table);
  }
  std::uint64_t halted = 0;
  for (const EvalOutcome& row : table.rows) halted += row.halted() ? 1 : 0;
  json meta{{"k", config.k.get_str()},
            {"n_max", config.n_max},
            {"budget", config.step_budget},
            {"rows", table.rows.size()},
            {"halted", halted},
            {"budget_exceeded", table.rows.size() - halted}};
  dump_json(dir / "table_meta.json", meta);
  log_line(dir, "enumerate rows=" + std::to_string(table.rows.size()) +
                    " halted=" + std::to_string(halted));
  return table;
}

BusyBeaverResult cmd_busybeaver(const ExperimentConfig& config) {
  config.validate();
  EvalTable table =
      evaluate_range(config.k, config.bb_x_max, config.step_budget);
  BusyBeaverResult r;
  r.records.reserve(config.bb_x_max + 1);
  for (std::uint64_t x = 0; x <= config.bb_x_max; ++x) {
    r.records.push_back(busy_beaver_lb(table, x));
  }
  r.identity_crossings = dominance_check(table, Program{}, config.bb_x_max);
  Program const_zero = synthesize_table_program(Evidence{}, Nat(0));
  r.zero_crossings = dominance_check(table, const_zero, config.bb_x_max);
  r.ok = !r.identity_crossings.empty() && !r.zero_crossings.empty();

  fs::path dir = ensure_out(config);
  {
    auto os = open_artifact(dir / "bb.csv");
    os << "x,value,argmax_index,budget\n";
    for (const BBRecord& rec : r.records) {
      os << rec.x << ',' << rec.value.get_str() << ',' << rec.argmax_index
         << ',' << rec.budget << '\n';
    }
  }
  {
    auto os = open_artifact(dir / "crossings.csv");
    os << "comparison,x\n";
    for (std::uint64_t x : r.identity_crossings) os << "identity," << x << '\n';
    for (std::uint64_t x : r.zero_crossings) os << "constant_zero," << x << '\n';
  }
  log_line(dir, "busybeaver x_max=" + std::to_string(config.bb_x_max) +
                    " identity_crossings=" +
                    std::to_string(r.identity_crossings.size()) +
                    " zero_crossings=" +
                    std::to_string(r.zero_crossings.size()));
  return r;
}

WitnessResult cmd_witness(const ExperimentConfig& config) {
  config.validate();
  UtilitySpec utility = config.utility();
  if (utility.bounded) {
    throw ConfigError(
        "witness certificates require an unbounded utility: bounded "
        "utilities have summable prior-weighted terms, so no term can reach "
        "magnitude 1 infinitely often (see the sums command instead)");
  }
  EvalTable table =
      evaluate_range(config.k, std::max(config.n_max, config.j_max),
                     config.step_budget);
  WitnessResult r;
  r.attempts = witness_sequence(table, config.evidence, utility, config.j_max,
                                config.eval_budget, config.search_budget);

  std::vector<Nat> g_prefix;
  for (const WitnessAttempt& attempt : r.attempts) {
    if (attempt.certificate) {
      // Independent replay of every certificate before it is published.
      certify_term(*attempt.certificate, config.evidence, config.k, utility,
                   config.eval_budget);
      if (attempt.certificate->passes) ++r.passing;
      if (g_prefix.size() == attempt.j) {
        g_prefix.push_back(attempt.certificate->g_index);
      }
    }
  }
  for (std::size_t x = 0; x < g_prefix.size(); ++x) {
    r.q_values.push_back(q_function(x, g_prefix));
  }
  r.ok = r.passing >= config.min_passing;

  fs::path dir = ensure_out(config);
  {
    auto os = open_artifact(dir / "certificates.csv");
    os << "j,u_j,b_value,output,g_index,prior_bound,term_magnitude,passes,"
          "failure\n";
    for (const WitnessAttempt& a : r.attempts) {
      if (a.certificate) {
        const WitnessCertificate& cert = *a.certificate;
        os << cert.j << ',' << cert.u_j << ',' << cert.b_value.get_str() << ','
           << cert.output.get_str() << ',' << cert.g_index.get_str() << ','
           << rat_string(cert.prior_bound) << ','
           << rat_string(cert.term_magnitude) << ','
           << (cert.passes ? 1 : 0) << ",\n";
      } else {
        os << a.j << ",,,,,,,," << csv_quote(a.failure) << '\n';
      }
    }
  }
  {
    json doc;
    doc["k"] = config.k.get_str();
    doc["utility"] = json{{"label", utility.label},
                          {"scale", rat_json(config.utility_scale)},
                          {"offset", rat_json(config.utility_offset)}};
    json ev = json::array();
    for (const auto& [input, value] : config.evidence) {
      ev.push_back(json::array({input.get_str(), value.get_str()}));
    }
    doc["evidence"] = ev;
    doc["j_max"] = config.j_max;
    doc["step_budget"] = config.step_budget;
    doc["eval_budget"] = config.eval_budget;
    doc["search_budget"] = config.search_budget;
    json attempts = json::array();
    for (const WitnessAttempt& a : r.attempts) {
      json item{{"j", a.j}};
      if (a.certificate) {
        const WitnessCertificate& cert = *a.certificate;
        item["certificate"] = json{
            {"u_j", cert.u_j},
            {"b_value", cert.b_value.get_str()},
            {"g_index", cert.g_index.get_str()},
            {"output", cert.output.get_str()},
            {"prior_bound", rat_json(cert.prior_bound)},
            {"term_magnitude", rat_json(cert.term_magnitude)},
            {"passes", cert.passes},
            {"reverified", true}};
      } else {
        item["failure"] = a.failure;
      }
      attempts.push_back(std::move(item));
    }
    doc["attempts"] = std::move(attempts);
    json qs = json::array();
    for (const Nat& q : r.q_values) qs.push_back(q.get_str());
    doc["q_values"] = std::move(qs);
    doc["passing"] = r.passing;
    doc["min_passing"] = config.min_passing;
    doc["ok"] = r.ok;
    dump_json(dir / "certificates.json", doc);
  }
  log_line(dir, "witness j_max=" + std::to_string(config.j_max) + " passing=" +
                    std::to_string(r.passing) + " ok=" + (r.ok ? "1" : "0"));
  return r;
}

SumsResult cmd_sums(const ExperimentConfig& config) {
  config.validate();
  UtilitySpec utility = config.utility();
  SumsResult r;
  r.trace = partial_sums(config.evidence, config.k, utility, config.n_max,
                         config.step_budget);

  fs::path dir = ensure_out(config);
  {
    auto os = open_artifact(dir / "partial_sums.csv");
    os << "n,prior,skip,value,term,running_sum,running_sum_approx\n";
    for (const SumRow& row : r.trace.rows) {
      os << row.n.get_str() << ',' << rat_string(row.prior) << ','
         << skip_label(row.skip) << ',';
      if (row.skip == SkipReason::none) os << row.value.get_str();
      os << ',' << rat_string(row.term) << ',' << rat_string(row.running_sum)
         << ',' << approx_string(row.running_sum) << '\n';
    }
  }
  json meta{{"k", config.k.get_str()},
            {"utility", utility.label},
            {"n_max", config.n_max},
            {"budget", config.step_budget},
            {"final_sum", rat_json(r.trace.final_sum)},
            {"skipped_not_halted", r.trace.skipped_not_halted},
            {"skipped_evidence_contradicted", r.trace.skipped_contradicted},
            {"skipped_evidence_undecided", r.trace.skipped_undecided}};
  if (!utility.bounded) {
    meta["note"] =
        "unbounded utility: no tail bound exists, so no convergence report "
        "is produced; non-vanishing terms of the full series are exhibited "
        "by witness certificates instead";
  }
  dump_json(dir / "sums_meta.json", meta);

  if (utility.bounded) {
    std::vector<std::uint64_t> points;
    for (std::uint64_t N : config.checkpoints) {
      if (N < r.trace.rows.size()) points.push_back(N);
    }
    r.report = convergence_report(r.trace, utility, points);
    json doc;
    doc["utility"] = r.report->utility_label;
    doc["sup_abs"] = rat_json(r.report->sup_abs);
    json cps = json::array();
    for (const ConvergenceCheckpoint& cp : r.report->checkpoints) {
      cps.push_back(json{{"N", cp.N},
                         {"sum_at", rat_json(cp.sum_at)},
                         {"increment_to_next", rat_json(cp.increment_to_next)},
                         {"increment_to_end", rat_json(cp.increment_to_end)},
                         {"tail_mass", rat_json(cp.tail_mass)},
                         {"bound", rat_json(cp.bound)},
                         {"ok", cp.ok}});
    }
    doc["checkpoints"] = std::move(cps);
    doc["all_ok"] = r.report->all_ok;
    dump_json(dir / "convergence.json", doc);
  } else {
    // No tail bound exists for unbounded utilities; drop any stale report.
    fs::remove(dir / "convergence.json");
  }
  log_line(dir, "sums n_max=" + std::to_string(config.n_max) + " final=" +
                    rat_string(r.trace.final_sum));
  return r;
}

FixedPointResult cmd_fixedpoint(const ExperimentConfig& config) {
  config.validate();
  auto transformer = [&](const Nat& p) {
    return synthesize_table_program(Evidence{},
                                    nat(config.fixed_a) * p +
                                        nat(config.fixed_b));
  };
  std::vector<Nat> probes{Nat(0), Nat(1), Nat(2), Nat(3)};

  FixedPointResult r;
  try {
    r.p = fixed_point(transformer, probes, config.eval_budget,
                      config.fixedpoint_search_cap);
    r.found = true;
    r.program = decode(r.p);
    Program transformed = transformer(r.p);
    r.verified = true;
    for (const Nat& x : probes) {
      EvalOutcome out = run(r.program, x, config.eval_budget);
      if (out != run(transformed, x, config.eval_budget)) r.verified = false;
      r.probes.emplace_back(x, std::move(out));
    }
  } catch (const FixedPointNotFound& e) {
    r.error = e.what();
  }

  fs::path dir = ensure_out(config);
  json doc{{"a", config.fixed_a},
           {"b", config.fixed_b},
           {"search_cap", config.fixedpoint_search_cap},
           {"probe_budget", config.eval_budget},
           {"found", r.found}};
  if (r.found) {
    doc["p"] = r.p.get_str();
    json lines = json::array();
    std::istringstream listing(format_program(r.program));
    for (std::string line; std::getline(listing, line);) lines.push_back(line);
    doc["program"] = std::move(lines);
    json probe_rows = json::array();
    for (const auto& [x, out] : r.probes) {
      json row{{"x", x.get_str()}, {"halted", out.halted()}};
      if (out.halted()) {
        row["value"] = out.value.get_str();
        row["steps"] = out.steps;
      }
      probe_rows.push_back(std::move(row));
    }
    doc["probes"] = std::move(probe_rows);
    doc["verified"] = r.verified;
  } else {
    doc["error"] = r.error;
  }
  dump_json(dir / "fixedpoint.json", doc);
  log_line(dir, std::string("fixedpoint found=") + (r.found ? "1" : "0"));
  return r;
}

}  // namespace eudiv
