#include <doctest.h>

#include "core/errors.hpp"
#include "core/verifier.hpp"

#include "helpers.hpp"

using namespace tscalc;
using tst::R;

namespace {

SuiteConfig small_config(std::uint64_t seed, int cases, BackendMode backend) {
  SuiteConfig cfg;
  cfg.seed = seed;
  cfg.cases = cases;
  cfg.backend = backend;
  return cfg;
}

} // namespace

TEST_CASE("suite and family names round-trip") {
  for (SuiteName s : {SuiteName::Identity, SuiteName::Inequality, SuiteName::CalculusRules,
                      SuiteName::ClosedForms, SuiteName::Sharpness, SuiteName::Gruss,
                      SuiteName::ModeAgreement}) {
    auto back = suite_from_name(suite_name(s));
    REQUIRE(back.has_value());
    CHECK(*back == s);
  }
  CHECK(!suite_from_name("fuzz").has_value());

  for (ScaleFamily f : {ScaleFamily::IntegerSlice, ScaleFamily::QLattice,
                        ScaleFamily::RealInterval, ScaleFamily::Hybrid,
                        ScaleFamily::HybridDiscrete}) {
    auto back = scale_family_from_name(scale_family_name(f));
    REQUIRE(back.has_value());
    CHECK(*back == f);
  }
  CHECK(!scale_family_from_name("cantor").has_value());
}

TEST_CASE("suite config parses with defaults and validates its fields") {
  SuiteConfig def = SuiteConfig::from_json(Json::object());
  CHECK(def.seed == 0);
  CHECK(def.cases == 100);
  CHECK(def.families.empty());
  CHECK(def.max_points == 64);
  CHECK(def.poly_degree_max == 5);
  CHECK(def.backend == BackendMode::Rational);
  CHECK(def.tol_identity == 1e-10);
  CHECK(def.tol_inequality == 1e-9);
  CHECK(def.tol_closed_form == 1e-12);

  SuiteConfig cfg = SuiteConfig::from_json(Json::parse(
      R"({"seed": 11, "cases": 42, "families": ["integer-slice", "q-lattice"],
          "max_points": 16, "poly_degree_max": 3, "backend": "mixed",
          "tolerances": {"identity": 1e-8, "inequality": 1e-7, "closed_form": 1e-11}})"));
  CHECK(cfg.seed == 11);
  CHECK(cfg.cases == 42);
  REQUIRE(cfg.families.size() == 2);
  CHECK(cfg.families[0] == ScaleFamily::IntegerSlice);
  CHECK(cfg.families[1] == ScaleFamily::QLattice);
  CHECK(cfg.max_points == 16);
  CHECK(cfg.poly_degree_max == 3);
  CHECK(cfg.backend == BackendMode::Mixed);
  CHECK(cfg.tol_identity == 1e-8);
  CHECK(cfg.tol_inequality == 1e-7);
  CHECK(cfg.tol_closed_form == 1e-11);

  // round-trip through the canonical form
  SuiteConfig back = SuiteConfig::from_json(cfg.to_json());
  CHECK(back.to_json() == cfg.to_json());

  CHECK_THROWS_AS((void)SuiteConfig::from_json(Json::parse(R"({"backend": "decimal"})")),
                  SpecError);
  CHECK_THROWS_AS((void)SuiteConfig::from_json(Json::parse(R"({"families": ["cantor"]})")),
                  SpecError);
  CHECK_THROWS_AS((void)SuiteConfig::from_json(Json::parse(R"({"cases": -1})")), SpecError);
  CHECK_THROWS_AS((void)SuiteConfig::from_json(Json::parse(R"({"cases": 2000000})")), SpecError);
  CHECK_THROWS_AS((void)SuiteConfig::from_json(Json::parse(R"({"max_points": 2})")), SpecError);
  CHECK_THROWS_AS((void)SuiteConfig::from_json(Json::parse(R"({"poly_degree_max": 9})")),
                  SpecError);
}

TEST_CASE("suite runs are deterministic for a fixed seed") {
  SuiteConfig cfg = small_config(5, 30, BackendMode::Rational);
  SuiteReport first = run_suite(SuiteName::Identity, cfg);
  SuiteReport second = run_suite(SuiteName::Identity, cfg);
  CHECK(first.to_json().dump() == second.to_json().dump());

  SuiteConfig mixed = small_config(5, 30, BackendMode::Mixed);
  CHECK(run_suite(SuiteName::Inequality, mixed).to_json().dump() ==
        run_suite(SuiteName::Inequality, mixed).to_json().dump());
}

TEST_CASE("every suite passes on small deterministic runs") {
  for (SuiteName s : {SuiteName::Identity, SuiteName::Inequality, SuiteName::CalculusRules,
                      SuiteName::ClosedForms, SuiteName::Sharpness, SuiteName::Gruss,
                      SuiteName::ModeAgreement}) {
    for (BackendMode mode : {BackendMode::Rational, BackendMode::Mixed}) {
      SuiteReport report = run_suite(s, small_config(17, 40, mode));
      INFO("suite ", suite_name(s), " backend ", static_cast<int>(mode));
      CHECK(report.pass());
      CHECK(report.violations.empty());
      CHECK(report.cases_requested == 40);
      CHECK(report.cases_run + report.cases_skipped == 40);
      CHECK(report.cases_run > 0);
    }
  }
}

TEST_CASE("identity suite reports an exactly-zero residual on rationals") {
  SuiteReport report = run_suite(SuiteName::Identity, small_config(3, 25, BackendMode::Rational));
  CHECK(report.pass());
  REQUIRE(report.max_abs_residual.has_value());
  CHECK(report.max_abs_residual->is_zero());
  CHECK(!report.min_margin.has_value());
}

TEST_CASE("inequality suite tracks a nonnegative minimum margin") {
  SuiteReport report =
      run_suite(SuiteName::Inequality, small_config(3, 25, BackendMode::Rational));
  CHECK(report.pass());
  REQUIRE(report.min_margin.has_value());
  CHECK(*report.min_margin >= R("0"));
  CHECK(!report.max_abs_residual.has_value());
}

TEST_CASE("suite reports serialize with the documented shape") {
  SuiteReport report = run_suite(SuiteName::Gruss, small_config(9, 10, BackendMode::Rational));
  Json doc = report.to_json();
  CHECK(doc.at("suite") == Json("gruss"));
  CHECK(doc.at("config").at("seed") == Json(9));
  CHECK(doc.at("cases_requested") == Json(10));
  CHECK(doc.at("violations").is_array());
  CHECK(doc.at("verdict") == Json("pass"));
  CHECK(doc.contains("max_abs_residual"));
  CHECK(doc.contains("min_margin"));
}

TEST_CASE("oracle integral agrees with the engine") {
  FunctionSpec sq = tst::fn_from(R"({"poly": ["0", "0", "1"]})");
  FunctionSpec cube = tst::fn_from(R"({"poly": ["1", "-2", "0", "1"]})");

  // pure discrete: the naive enumeration is exact
  TimeScale zs = tst::integer_slice(0, 5);
  PolyIntegrand g{sq.poly()};
  Scalar engine = delta_integral(zs, g, zs.point(R("0")), zs.point(R("5")));
  CHECK(oracle_integral(zs, sq, R("0"), R("5"), false, 1e-10) == engine);

  SigmaComposedIntegrand gs{zs, sq.poly()};
  Scalar engine_sigma = delta_integral(zs, gs, zs.point(R("0")), zs.point(R("5")));
  CHECK(oracle_integral(zs, sq, R("0"), R("5"), true, 1e-10) == engine_sigma);

  TimeScale ql = tst::q_lattice("3/2", 0, 5);
  PolyIntegrand gq{cube.poly()};
  CHECK(oracle_integral(ql, cube, ql.min(), ql.max(), false, 1e-10) ==
        delta_integral(ql, gq, ql.point(ql.min()), ql.point(ql.max())));

  // reversal carries the sign
  CHECK(oracle_integral(zs, sq, R("5"), R("0"), false, 1e-10) == -engine);
  CHECK(oracle_integral(zs, sq, R("2"), R("2"), false, 1e-10).is_zero());

  // dense runs go through quadrature: close, not exact
  TimeScale iv = tst::scale_from(
      R"({"components": [{"interval": [0, 2]}, {"point": 3}],
          "backend": "float", "tolerance": 1e-9})");
  PolyIntegrand gi{cube.poly()};
  Scalar exact = delta_integral(iv, gi, iv.point(Scalar::from_double(0.0, 1e-9)),
                                iv.point(Scalar::from_double(3.0, 1e-9)));
  Scalar approx = oracle_integral(iv, cube, Scalar::from_double(0.0, 1e-9),
                                  Scalar::from_double(3.0, 1e-9), false, 1e-10);
  CHECK(approx.approx_equal(exact, 1e-8));
  CHECK(!approx.is_rational());
}

TEST_CASE("identity residual verdicts are backend-aware") {
  TimeScale zs = tst::integer_slice(0, 4);
  FunctionSpec sq = tst::fn_from(R"({"poly": ["0", "0", "1"]})");

  MontgomerySides zero{R("6"), R("6"), R("0")};
  CHECK(identity_residual_within(zs, sq, R("0"), R("4"), R("2"), zero, 1e-10));
  MontgomerySides off{R("6"), R("7"), R("-1")};
  CHECK(!identity_residual_within(zs, sq, R("0"), R("4"), R("2"), off, 1e-10));

  // float: the verdict scales with the magnitudes the residual came from
  TimeScale fiv = tst::scale_from(
      R"({"components": [{"interval": [0, 4]}], "backend": "float", "tolerance": 1e-9})");
  Scalar tiny = Scalar::from_double(1e-13, 1e-9);
  MontgomerySides close{Scalar::from_double(6.0, 1e-9), Scalar::from_double(6.0 - 1e-13, 1e-9),
                        tiny};
  CHECK(identity_residual_within(fiv, sq, Scalar::from_double(0.0, 1e-9),
                                 Scalar::from_double(4.0, 1e-9),
                                 Scalar::from_double(2.0, 1e-9), close, 1e-10));
  MontgomerySides wide{Scalar::from_double(6.0, 1e-9), Scalar::from_double(5.0, 1e-9),
                       Scalar::from_double(1.0, 1e-9)};
  CHECK(!identity_residual_within(fiv, sq, Scalar::from_double(0.0, 1e-9),
                                  Scalar::from_double(4.0, 1e-9),
                                  Scalar::from_double(2.0, 1e-9), wide, 1e-10));
}

TEST_CASE("violation records replay from their own inputs") {
  // a record whose checks pass now: replay confirms the fix
  Json healthy = Json::parse(R"({
    "suite": "identity",
    "scale": {"components": [{"integers": {"a": 0, "b": 4}}], "backend": "rational"},
    "fn": {"poly": ["0", "0", "1"]},
    "lambda": "1/2",
    "t": "2",
    "variant": 0,
    "index": 0,
    "check": "montgomery-residual",
    "detail": "crafted"
  })");
  CHECK(replay_violation(healthy));

  // a record that reproduces its failure: the calculus additivity midpoint
  // lies outside the scale, so evaluation fails the same way again
  Json broken = Json::parse(R"({
    "suite": "calculus-rules",
    "scale": {"components": [{"integers": {"a": 0, "b": 4}}], "backend": "rational"},
    "fn": {"poly": ["0", "0", "1"]},
    "g": {"poly": ["1", "1"]},
    "alpha": "2",
    "beta": "3",
    "c": "7/2",
    "lambda": "0",
    "t": "2",
    "variant": 0,
    "index": 0,
    "check": "exception",
    "detail": "crafted"
  })");
  CHECK(!replay_violation(broken));

  // same inputs, but the recorded check is one that passes: replay clears it
  Json other = broken;
  other["c"] = "3";
  CHECK(replay_violation(other));

  CHECK_THROWS_AS((void)replay_violation(Json::parse(R"({"suite": "nope"})")), SpecError);
}
