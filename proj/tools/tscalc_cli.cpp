// tscalc command-line front end.
//
// Talks to the engine exclusively through the C API in tscalc/tscalc.h.
// Every command emits a self-contained document {command, inputs, report}
// whose inputs block is sufficient to reproduce the report; `bound --replay`
// re-executes such a document and fails when the stored bytes cannot be
// reproduced.
//
// Exit codes: 0 success, 1 mathematical violation (negative margin, nonzero
// identity residual, failing suite, replay mismatch), 2 usage/input error.

#include "tscalc/tscalc.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Owns a string allocated by the library.
struct CStr {
  char* p = nullptr;
  ~CStr() { tsc_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct ScaleHandle {
  tsc_scale* p = nullptr;
  ~ScaleHandle() { tsc_scale_destroy(p); }
};

struct FunctionHandle {
  tsc_function* p = nullptr;
  ~FunctionHandle() { tsc_function_destroy(p); }
};

void check(tsc_status rc, const std::string& context) {
  if (rc == TSC_OK) return;
  throw CliError(context + ": " + tsc_last_error());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Writes via a temporary in the same directory plus rename, so readers never
/// observe a torn document.
void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(static_cast<long long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw CliError("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw CliError("cannot move document into place at " + path);
  }
}

struct OutputOptions {
  std::string path;   // empty: stdout
  std::string format = "json";
};

void emit(const OutputOptions& io, const std::string& content) {
  if (io.path.empty()) {
    std::cout << content;
  } else {
    write_atomic(io.path, content);
  }
}

std::string render_document(const Json& doc) { return doc.dump(2) + "\n"; }

/// One CSV cell: JSON strings lose their quotes, everything else serializes
/// compactly. Values never contain commas or quotes by construction.
std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string render_csv(const std::vector<std::string>& header, const Json& row) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ",";
    out += header[i];
  }
  out += "\n";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ",";
    out += csv_cell(row.contains(header[i]) ? row.at(header[i]) : Json(nullptr));
  }
  out += "\n";
  return out;
}

// --------------------------------------------------------------------------
// violation predicates on emitted reports
// --------------------------------------------------------------------------

bool scalar_json_is_negative(const Json& v) {
  if (v.is_string()) {
    const auto& s = v.get<std::string>();
    return !s.empty() && s[0] == '-';
  }
  return v.get<double>() < 0.0;
}

double scalar_json_magnitude(const Json& v) {
  if (v.is_string()) return 0.0; // exact path never uses the float slack
  return std::fabs(v.get<double>());
}

/// Negative beyond float slack: exact rationals must be >= 0 outright.
bool margin_violates(const Json& report) {
  const Json& margin = report.at("margin");
  if (margin.is_string()) return scalar_json_is_negative(margin);
  double tol = report.value("tolerance", 1e-9);
  double scale = std::max({1.0, scalar_json_magnitude(report.at("lhs")),
                           scalar_json_magnitude(report.at("rhs"))});
  return margin.get<double>() < -tol * scale;
}

bool residual_violates(const Json& report) {
  // the engine judges the residual with knowledge of the cancelled magnitudes
  return !report.at("within_tolerance").get<bool>();
}

// --------------------------------------------------------------------------
// shared command plumbing
// --------------------------------------------------------------------------

ScaleHandle load_scale(const std::string& path) {
  ScaleHandle h;
  check(tsc_scale_create(read_file(path).c_str(), &h.p), "scale spec");
  return h;
}

ScaleHandle scale_from_json(const Json& spec) {
  ScaleHandle h;
  check(tsc_scale_create(spec.dump().c_str(), &h.p), "scale spec");
  return h;
}

FunctionHandle load_function(const std::string& path) {
  FunctionHandle h;
  check(tsc_function_create(read_file(path).c_str(), &h.p), "function spec");
  return h;
}

FunctionHandle function_from_json(const Json& spec) {
  FunctionHandle h;
  check(tsc_function_create(spec.dump().c_str(), &h.p), "function spec");
  return h;
}

Json canonical_scale(const ScaleHandle& scale) {
  CStr s;
  check(tsc_scale_serialize(scale.p, &s.p), "scale serialize");
  return Json::parse(s.str());
}

Json canonical_function(const FunctionHandle& fn) {
  CStr s;
  check(tsc_function_serialize(fn.p, &s.p), "function serialize");
  return Json::parse(s.str());
}

// --------------------------------------------------------------------------
// bound
// --------------------------------------------------------------------------

struct BoundArgs {
  std::string scale_path;
  std::string fn_path;
  std::string lambda;
  std::string t;
  std::string mode = "direct";
  std::string kind;
  std::string replay_path;
  OutputOptions io;
};

/// Produces the full bound document from an inputs block (fresh run and
/// replay share this path, so replay compares like with like).
Json bound_document_from_inputs(const Json& inputs) {
  ScaleHandle scale = scale_from_json(inputs.at("scale"));
  FunctionHandle fn = function_from_json(inputs.at("fn"));

  const Json& jlambda = inputs.at("lambda");
  const Json& jt = inputs.at("t");
  const Json& jkind = inputs.at("kind");
  std::string lambda = jlambda.is_null() ? "" : jlambda.get<std::string>();
  std::string t = jt.is_null() ? "" : jt.get<std::string>();
  std::string mode = inputs.at("mode").get<std::string>();

  CStr report_str;
  if (!jkind.is_null()) {
    check(tsc_special_case_bound(scale.p, fn.p, jkind.get<std::string>().c_str(),
                                 lambda.empty() ? nullptr : lambda.c_str(),
                                 t.empty() ? nullptr : t.c_str(), mode.c_str(), &report_str.p),
          "bound");
  } else {
    if (lambda.empty() || t.empty()) throw CliError("--lambda and --t are required");
    check(tsc_ostrowski_bound(scale.p, fn.p, lambda.c_str(), t.c_str(), mode.c_str(),
                              &report_str.p),
          "bound");
  }

  Json doc = Json::object();
  doc["command"] = "bound";
  doc["inputs"] = inputs;
  doc["report"] = Json::parse(report_str.str());
  return doc;
}

int run_bound(const BoundArgs& args) {
  if (!args.replay_path.empty()) {
    std::string original = read_file(args.replay_path);
    Json doc = Json::parse(original);
    if (doc.value("command", std::string()) != "bound") {
      throw CliError("replay target is not a bound document");
    }
    Json regenerated = bound_document_from_inputs(doc.at("inputs"));
    std::string fresh = render_document(regenerated);
    if (fresh != original) {
      std::cerr << "replay mismatch: " << args.replay_path << "\n";
      std::cout << fresh;
      return kExitViolation;
    }
    std::cerr << "replay verified: " << args.replay_path << "\n";
    return 0;
  }

  ScaleHandle scale = load_scale(args.scale_path);
  FunctionHandle fn = load_function(args.fn_path);

  Json inputs = Json::object();
  inputs["scale"] = canonical_scale(scale);
  inputs["fn"] = canonical_function(fn);
  inputs["lambda"] = args.lambda.empty() ? Json(nullptr) : Json(args.lambda);
  inputs["t"] = args.t.empty() ? Json(nullptr) : Json(args.t);
  inputs["mode"] = args.mode;
  inputs["kind"] = args.kind.empty() ? Json(nullptr) : Json(args.kind);

  Json doc = bound_document_from_inputs(inputs);
  const Json& report = doc.at("report");

  if (args.io.format == "csv") {
    emit(args.io, render_csv({"lhs", "rhs", "margin", "M", "mode", "kind",
                              "sharpness_condition", "equality_case"},
                             report));
  } else {
    emit(args.io, render_document(doc));
  }
  return margin_violates(report) ? kExitViolation : 0;
}

// --------------------------------------------------------------------------
// identity
// --------------------------------------------------------------------------

struct IdentityArgs {
  std::string scale_path;
  std::string fn_path;
  std::string lambda;
  std::string t;
  OutputOptions io;
};

int run_identity(const IdentityArgs& args) {
  ScaleHandle scale = load_scale(args.scale_path);
  FunctionHandle fn = load_function(args.fn_path);

  CStr report_str;
  check(tsc_montgomery_identity(scale.p, fn.p, args.lambda.c_str(), args.t.c_str(),
                                &report_str.p),
        "identity");
  Json report = Json::parse(report_str.str());

  Json doc = Json::object();
  doc["command"] = "identity";
  doc["inputs"] = Json{{"scale", canonical_scale(scale)},
                       {"fn", canonical_function(fn)},
                       {"lambda", args.lambda},
                       {"t", args.t}};
  doc["report"] = report;

  if (args.io.format == "csv") {
    emit(args.io, render_csv({"lhs", "rhs", "residual", "within_tolerance"}, report));
  } else {
    emit(args.io, render_document(doc));
  }
  return residual_violates(report) ? kExitViolation : 0;
}

// --------------------------------------------------------------------------
// h2
// --------------------------------------------------------------------------

struct H2Args {
  std::string scale_path;
  std::string family;
  std::string q;
  unsigned k = 2;
  std::string t;
  std::string s;
  OutputOptions io;
};

int run_h2(const H2Args& args) {
  if (args.scale_path.empty() == args.family.empty()) {
    throw CliError("exactly one of --scale or --family is required");
  }

  Json inputs = Json::object();
  Json report = Json::object();

  if (!args.scale_path.empty()) {
    ScaleHandle scale = load_scale(args.scale_path);
    CStr value;
    check(tsc_monomial_hk(scale.p, args.k, args.t.c_str(), args.s.c_str(), &value.p), "h2");
    inputs["scale"] = canonical_scale(scale);
    inputs["k"] = args.k;
    inputs["t"] = args.t;
    inputs["s"] = args.s;
    report["k"] = args.k;
    report["t"] = args.t;
    report["s"] = args.s;
    report["value"] = value.str();
    report["method"] = "recursive";
  } else {
    if (args.k != 2) throw CliError("--family route computes k = 2 only");
    Json spec;
    if (args.family == "reals") {
      spec = Json{{"components", Json::array({Json{{"interval", Json::array({"0", "1"})}}})},
                  {"backend", "rational"}};
    } else if (args.family == "integers") {
      spec = Json{{"components", Json::array({Json{{"integers", Json{{"a", 0}, {"b", 1}}}}})},
                  {"backend", "rational"}};
    } else if (args.family == "q-lattice") {
      if (args.q.empty()) throw CliError("--family q-lattice requires --q");
      spec = Json{{"components",
                   Json::array({Json{{"qlattice", Json{{"q", args.q}, {"m", 0}, {"n", 1}}}}})},
                  {"backend", "rational"}};
    } else {
      throw CliError("unknown family \"" + args.family +
                     "\" (expected reals, integers, or q-lattice)");
    }
    ScaleHandle scale = scale_from_json(spec);
    CStr value;
    check(tsc_h2_closed_form(scale.p, args.t.c_str(), args.s.c_str(), &value.p), "h2");
    inputs["family"] = args.family;
    inputs["q"] = args.q.empty() ? Json(nullptr) : Json(args.q);
    inputs["k"] = args.k;
    inputs["t"] = args.t;
    inputs["s"] = args.s;
    report["k"] = args.k;
    report["t"] = args.t;
    report["s"] = args.s;
    report["value"] = value.str();
    report["method"] = "closed-form";
  }

  Json doc = Json::object();
  doc["command"] = "h2";
  doc["inputs"] = inputs;
  doc["report"] = report;

  if (args.io.format == "csv") {
    emit(args.io, render_csv({"k", "t", "s", "value", "method"}, report));
  } else {
    emit(args.io, render_document(doc));
  }
  return 0;
}

// --------------------------------------------------------------------------
// sharpness
// --------------------------------------------------------------------------

struct SharpnessArgs {
  std::string scale_path;
  std::string lambda;
  OutputOptions io;
};

int run_sharpness(const SharpnessArgs& args) {
  ScaleHandle scale = load_scale(args.scale_path);
  int holds = 0;
  check(tsc_sharpness_condition(scale.p, args.lambda.c_str(), &holds), "sharpness");

  Json report = Json{{"lambda", args.lambda}, {"holds", holds != 0}};
  Json doc = Json::object();
  doc["command"] = "sharpness";
  doc["inputs"] = Json{{"scale", canonical_scale(scale)}, {"lambda", args.lambda}};
  doc["report"] = report;

  if (args.io.format == "csv") {
    emit(args.io, render_csv({"lambda", "holds"}, report));
  } else {
    emit(args.io, render_document(doc));
  }
  return 0;
}

// --------------------------------------------------------------------------
// gruss
// --------------------------------------------------------------------------

struct GrussArgs {
  std::string scale_path;
  std::string fn_path;
  std::string t;
  std::string gamma;
  std::string Gamma;
  OutputOptions io;
};

int run_gruss(const GrussArgs& args) {
  if (args.gamma.empty() != args.Gamma.empty()) {
    throw CliError("--gamma and --Gamma must be supplied together");
  }
  ScaleHandle scale = load_scale(args.scale_path);
  FunctionHandle fn = load_function(args.fn_path);

  CStr report_str;
  check(tsc_gruss_bound(scale.p, fn.p, args.t.c_str(),
                        args.gamma.empty() ? nullptr : args.gamma.c_str(),
                        args.Gamma.empty() ? nullptr : args.Gamma.c_str(), &report_str.p),
        "gruss");
  Json report = Json::parse(report_str.str());

  Json doc = Json::object();
  doc["command"] = "gruss";
  doc["inputs"] = Json{{"scale", canonical_scale(scale)},
                       {"fn", canonical_function(fn)},
                       {"t", args.t},
                       {"gamma", args.gamma.empty() ? Json(nullptr) : Json(args.gamma)},
                       {"Gamma", args.Gamma.empty() ? Json(nullptr) : Json(args.Gamma)}};
  doc["report"] = report;

  if (args.io.format == "csv") {
    emit(args.io,
         render_csv({"lhs", "rhs", "margin", "M", "gamma", "Gamma", "equality_case"}, report));
  } else {
    emit(args.io, render_document(doc));
  }
  return margin_violates(report) ? kExitViolation : 0;
}

// --------------------------------------------------------------------------
// suite
// --------------------------------------------------------------------------

struct SuiteArgs {
  std::string name;
  std::optional<std::uint64_t> seed;
  std::optional<int> cases;
  std::string backend;
  std::vector<std::string> families;
  OutputOptions io;
};

int run_suite_cmd(const SuiteArgs& args) {
  Json cfg = Json::object();
  if (args.seed) {
    cfg["seed"] = *args.seed;
  } else if (const char* env = std::getenv("TSCALC_SEED")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (!end || *end != '\0') throw CliError("TSCALC_SEED is not an unsigned integer");
    cfg["seed"] = static_cast<std::uint64_t>(v);
  }
  if (args.cases) cfg["cases"] = *args.cases;
  if (!args.backend.empty()) cfg["backend"] = args.backend;
  if (!args.families.empty()) cfg["families"] = args.families;

  CStr report_str;
  check(tsc_run_suite(args.name.c_str(), cfg.dump().c_str(), &report_str.p), "suite");
  Json report = Json::parse(report_str.str());

  Json doc = Json::object();
  doc["command"] = "suite";
  doc["inputs"] = Json{{"name", args.name}, {"config", report.at("config")}};
  doc["report"] = report;

  if (args.io.format == "csv") {
    Json row = Json::object();
    row["suite"] = report.at("suite");
    row["cases_requested"] = report.at("cases_requested");
    row["cases_run"] = report.at("cases_run");
    row["cases_skipped"] = report.at("cases_skipped");
    row["violations"] = report.at("violations").size();
    row["verdict"] = report.at("verdict");
    emit(args.io, render_csv({"suite", "cases_requested", "cases_run", "cases_skipped",
                              "violations", "verdict"},
                             row));
  } else {
    emit(args.io, render_document(doc));
  }
  return report.at("verdict").get<std::string>() == "pass" ? 0 : kExitViolation;
}

void add_output_options(CLI::App* cmd, OutputOptions& io) {
  cmd->add_option("-o,--out", io.path, "Write the document to this path (atomic)");
  cmd->add_option("--format", io.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-scale calculus engine"};
  app.require_subcommand(1);

  BoundArgs bound;
  auto* cmd_bound = app.add_subcommand("bound", "Weighted Ostrowski bound report");
  cmd_bound->add_option("--scale", bound.scale_path, "Scale spec JSON file");
  cmd_bound->add_option("--fn", bound.fn_path, "Function spec JSON file");
  cmd_bound->add_option("--lambda", bound.lambda, "Weight in [0, 1]");
  cmd_bound->add_option("--t", bound.t, "Evaluation point");
  cmd_bound->add_option("--mode", bound.mode, "Bound mode")
      ->check(CLI::IsMember({"direct", "four-h2"}));
  cmd_bound->add_option("--kind", bound.kind, "Special-case kind");
  cmd_bound->add_option("--replay", bound.replay_path,
                        "Re-execute an emitted bound document and compare bytes");
  add_output_options(cmd_bound, bound.io);

  IdentityArgs identity;
  auto* cmd_identity = app.add_subcommand("identity", "Montgomery identity check");
  cmd_identity->add_option("--scale", identity.scale_path, "Scale spec JSON file")->required();
  cmd_identity->add_option("--fn", identity.fn_path, "Function spec JSON file")->required();
  cmd_identity->add_option("--lambda", identity.lambda, "Weight in [0, 1]")->required();
  cmd_identity->add_option("--t", identity.t, "Evaluation point")->required();
  add_output_options(cmd_identity, identity.io);

  H2Args h2;
  auto* cmd_h2 = app.add_subcommand("h2", "Generalized monomial h_k / closed form");
  cmd_h2->add_option("--scale", h2.scale_path, "Scale spec JSON file (recursive route)");
  cmd_h2->add_option("--family", h2.family, "Canonical family (closed-form route)");
  cmd_h2->add_option("--q", h2.q, "Lattice ratio for --family q-lattice");
  cmd_h2->add_option("--k", h2.k, "Monomial order (recursive route)");
  cmd_h2->add_option("--t", h2.t, "First argument")->required();
  cmd_h2->add_option("--s", h2.s, "Second argument")->required();
  add_output_options(cmd_h2, h2.io);

  SharpnessArgs sharpness;
  auto* cmd_sharpness = app.add_subcommand("sharpness", "Sharpness condition at lambda");
  cmd_sharpness->add_option("--scale", sharpness.scale_path, "Scale spec JSON file")->required();
  cmd_sharpness->add_option("--lambda", sharpness.lambda, "Weight in [0, 1]")->required();
  add_output_options(cmd_sharpness, sharpness.io);

  GrussArgs gruss;
  auto* cmd_gruss = app.add_subcommand("gruss", "Gruss-type bound report");
  cmd_gruss->add_option("--scale", gruss.scale_path, "Scale spec JSON file")->required();
  cmd_gruss->add_option("--fn", gruss.fn_path, "Function spec JSON file")->required();
  cmd_gruss->add_option("--t", gruss.t, "Evaluation point")->required();
  cmd_gruss->add_option("--gamma", gruss.gamma, "Lower derivative bound");
  cmd_gruss->add_option("--Gamma", gruss.Gamma, "Upper derivative bound");
  add_output_options(cmd_gruss, gruss.io);

  SuiteArgs suite;
  auto* cmd_suite = app.add_subcommand("suite", "Run a property-verification suite");
  cmd_suite->add_option("--name", suite.name, "Suite name")->required();
  std::uint64_t seed_value = 0;
  auto* seed_opt = cmd_suite->add_option("--seed", seed_value, "Deterministic seed");
  int cases_value = 0;
  auto* cases_opt = cmd_suite->add_option("--cases", cases_value, "Number of cases");
  cmd_suite->add_option("--backend", suite.backend, "rational | float | mixed")
      ->check(CLI::IsMember({"rational", "float", "mixed"}));
  cmd_suite->add_option("--families", suite.families, "Restrict scale families");
  add_output_options(cmd_suite, suite.io);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  if (*seed_opt) suite.seed = seed_value;
  if (*cases_opt) suite.cases = cases_value;

  try {
    if (cmd_bound->parsed()) {
      bool replaying = !bound.replay_path.empty();
      if (!replaying && (bound.scale_path.empty() || bound.fn_path.empty())) {
        throw CliError("--scale and --fn are required (unless --replay)");
      }
      return run_bound(bound);
    }
    if (cmd_identity->parsed()) return run_identity(identity);
    if (cmd_h2->parsed()) return run_h2(h2);
    if (cmd_sharpness->parsed()) return run_sharpness(sharpness);
    if (cmd_gruss->parsed()) return run_gruss(gruss);
    if (cmd_suite->parsed()) return run_suite_cmd(suite);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
