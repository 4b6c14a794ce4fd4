#pragma once

#include "core/function_spec.hpp"
#include "core/json.hpp"
#include "core/ostrowski.hpp"
#include "core/time_scale.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tscalc {

enum class ScaleFamily { IntegerSlice, QLattice, RealInterval, Hybrid, HybridDiscrete };

std::optional<ScaleFamily> scale_family_from_name(const std::string& name);
std::string scale_family_name(ScaleFamily f);

enum class BackendMode { Rational, Float, Mixed };

enum class SuiteName {
  Identity,
  Inequality,
  CalculusRules,
  ClosedForms,
  Sharpness,
  Gruss,
  ModeAgreement,
};

std::optional<SuiteName> suite_from_name(const std::string& name);
std::string suite_name(SuiteName s);

struct SuiteConfig {
  std::uint64_t seed = 0;
  int cases = 100;
  std::vector<ScaleFamily> families; // empty: per-suite default
  int max_points = 64;
  int poly_degree_max = 5;
  BackendMode backend = BackendMode::Rational;
  double tol_identity = 1e-10;
  double tol_inequality = 1e-9;
  double tol_closed_form = 1e-12;

  static SuiteConfig from_json(const Json& doc);
  Json to_json() const;
};

struct SuiteReport {
  std::string suite;
  SuiteConfig config;
  int cases_requested = 0;
  int cases_run = 0;
  int cases_skipped = 0;
  std::vector<Json> violations; // self-contained replay records
  std::optional<Scalar> max_abs_residual;
  std::optional<Scalar> min_margin;

  bool pass() const { return violations.empty(); }
  Json to_json() const;
};

/// Runs one named suite under a config. Case generation is deterministic per
/// (seed, case index); cases whose admissible window is empty are re-drawn a
/// bounded number of times and then counted as skipped.
SuiteReport run_suite(SuiteName suite, const SuiteConfig& config);

/// Re-executes the checks of a single violation record (as embedded in
/// SuiteReport::violations) from its own inputs. Returns true when the checks
/// pass now; deterministic for a fixed record.
bool replay_violation(const Json& record);

/// Independent reference integral: explicit enumeration of scattered parts
/// (naive left-to-right accumulation) plus Romberg-refined trapezoid sums on
/// dense runs. Shares no logic with delta_integral. compose_sigma selects the
/// integrand f(sigma(s)) instead of f(s).
Scalar oracle_integral(const TimeScale& scale, const FunctionSpec& f, const Scalar& a,
                       const Scalar& b, bool compose_sigma, double dense_tol);

/// Residual verdict for a Montgomery-identity evaluation. Rational backend:
/// exactly zero. Float backend: within tol scaled by the magnitude of the
/// values the residual was cancelled out of (|f| at the endpoints and t times
/// the window width), since both sides are assembled from integrals of that
/// size.
bool identity_residual_within(const TimeScale& scale, const FunctionSpec& f,
                              const Scalar& a, const Scalar& b, const Scalar& t,
                              const MontgomerySides& sides, double tol);

} // namespace tscalc
