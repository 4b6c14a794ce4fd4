#include "tscalc/tscalc.h"

#include "core/delta_calculus.hpp"
#include "core/errors.hpp"
#include "core/function_spec.hpp"
#include "core/json.hpp"
#include "core/ostrowski.hpp"
#include "core/serde.hpp"
#include "core/time_scale.hpp"
#include "core/verifier.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

using namespace tscalc;

struct tsc_scale {
  TimeScale impl;
};

struct tsc_function {
  FunctionSpec impl;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

/// Runs the body, translating exceptions into status codes and the
/// thread-local message.
template <typename Fn>
tsc_status guarded(Fn&& body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const SpecError& e) {
    g_last_error = e.what();
    return TSC_ERROR_INVALID_ARGUMENT;
  } catch (const DomainError& e) {
    g_last_error = e.what();
    return TSC_ERROR_DOMAIN;
  } catch (const Json::exception& e) {
    g_last_error = e.what();
    return TSC_ERROR_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TSC_ERROR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TSC_ERROR_INTERNAL;
  }
}

tsc_status require(bool ok, const char* message) {
  if (ok) return TSC_OK;
  g_last_error = message;
  return TSC_ERROR_INVALID_ARGUMENT;
}

Scalar parse_value(const tsc_scale* scale, const char* text) {
  if (!text) throw SpecError("numeric argument is NULL");
  return scalar_from_text(text, scale->impl.backend(), scale->impl.tolerance());
}

tsc_status emit_value(const Scalar& v, char** out) {
  *out = dup_string(v.to_string());
  return *out ? TSC_OK : TSC_ERROR_INTERNAL;
}

tsc_status emit_json(const Json& doc, char** out) {
  *out = dup_string(doc.dump(2));
  return *out ? TSC_OK : TSC_ERROR_INTERNAL;
}

BoundMode parse_mode(const char* mode) {
  std::string m = mode ? mode : "direct";
  if (m == "direct") return BoundMode::Direct;
  if (m == "four-h2") return BoundMode::FourH2;
  throw SpecError("unknown mode \"" + m + "\" (expected \"direct\" or \"four-h2\")");
}

KernelParams kernel_params_full_span(const tsc_scale* scale, const char* lambda, const char* t) {
  const TimeScale& ts = scale->impl;
  ScalePoint a = ts.point(ts.min());
  ScalePoint b = ts.point(ts.max());
  Scalar lam = parse_value(scale, lambda);
  ScalePoint tp = ts.point(parse_value(scale, t));
  return KernelParams::make(ts, a, b, lam, tp);
}

} // namespace

extern "C" {

const char* tsc_version(void) { return "1.0.0"; }

const char* tsc_last_error(void) { return g_last_error.c_str(); }

void tsc_string_free(char* s) { std::free(s); }

/* ------------------------------------------------------------------ */

tsc_status tsc_scale_create(const char* spec_json, tsc_scale** out) {
  if (tsc_status rc = require(spec_json && out, "spec_json and out must be non-NULL")) return rc;
  return guarded([&] {
    Json doc = Json::parse(spec_json);
    *out = new tsc_scale{TimeScale::from_spec_json(doc)};
    return TSC_OK;
  });
}

void tsc_scale_destroy(tsc_scale* scale) { delete scale; }

tsc_status tsc_scale_serialize(const tsc_scale* scale, char** out_json) {
  if (tsc_status rc = require(scale && out_json, "scale and out_json must be non-NULL")) return rc;
  return guarded([&] { return emit_json(scale->impl.to_spec_json(), out_json); });
}

tsc_status tsc_scale_min(const tsc_scale* scale, char** out_value) {
  if (tsc_status rc = require(scale && out_value, "scale and out_value must be non-NULL")) return rc;
  return guarded([&] { return emit_value(scale->impl.min(), out_value); });
}

tsc_status tsc_scale_max(const tsc_scale* scale, char** out_value) {
  if (tsc_status rc = require(scale && out_value, "scale and out_value must be non-NULL")) return rc;
  return guarded([&] { return emit_value(scale->impl.max(), out_value); });
}

tsc_status tsc_scale_sigma(const tsc_scale* scale, const char* t, char** out_value) {
  if (tsc_status rc = require(scale && out_value, "scale and out_value must be non-NULL")) return rc;
  return guarded([&] {
    return emit_value(scale->impl.sigma(scale->impl.point(parse_value(scale, t))), out_value);
  });
}

tsc_status tsc_scale_rho(const tsc_scale* scale, const char* t, char** out_value) {
  if (tsc_status rc = require(scale && out_value, "scale and out_value must be non-NULL")) return rc;
  return guarded([&] {
    return emit_value(scale->impl.rho(scale->impl.point(parse_value(scale, t))), out_value);
  });
}

tsc_status tsc_scale_mu(const tsc_scale* scale, const char* t, char** out_value) {
  if (tsc_status rc = require(scale && out_value, "scale and out_value must be non-NULL")) return rc;
  return guarded([&] {
    return emit_value(scale->impl.mu(scale->impl.point(parse_value(scale, t))), out_value);
  });
}

tsc_status tsc_scale_nu(const tsc_scale* scale, const char* t, char** out_value) {
  if (tsc_status rc = require(scale && out_value, "scale and out_value must be non-NULL")) return rc;
  return guarded([&] {
    return emit_value(scale->impl.nu(scale->impl.point(parse_value(scale, t))), out_value);
  });
}

tsc_status tsc_scale_classify(const tsc_scale* scale, const char* t, int* right_scattered,
                              int* left_scattered, int* in_kappa) {
  if (tsc_status rc = require(scale && right_scattered && left_scattered && in_kappa,
                              "scale and all out-flags must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    auto c = scale->impl.classify(scale->impl.point(parse_value(scale, t)));
    *right_scattered = c.right_scattered ? 1 : 0;
    *left_scattered = c.left_scattered ? 1 : 0;
    *in_kappa = c.in_kappa ? 1 : 0;
    return TSC_OK;
  });
}

/* ------------------------------------------------------------------ */

tsc_status tsc_function_create(const char* fn_json, tsc_function** out) {
  if (tsc_status rc = require(fn_json && out, "fn_json and out must be non-NULL")) return rc;
  return guarded([&] {
    Json doc = Json::parse(fn_json);
    *out = new tsc_function{FunctionSpec::from_json(doc)};
    return TSC_OK;
  });
}

void tsc_function_destroy(tsc_function* fn) { delete fn; }

tsc_status tsc_function_serialize(const tsc_function* fn, char** out_json) {
  if (tsc_status rc = require(fn && out_json, "fn and out_json must be non-NULL")) return rc;
  return guarded([&] { return emit_json(fn->impl.to_json(), out_json); });
}

/* ------------------------------------------------------------------ */

tsc_status tsc_delta_derivative(const tsc_scale* scale, const tsc_function* fn, const char* t,
                                char** out_value) {
  if (tsc_status rc = require(scale && fn && out_value, "scale, fn, out_value must be non-NULL"))
    return rc;
  return guarded([&] {
    ScalePoint tp = scale->impl.point(parse_value(scale, t));
    return emit_value(delta_derivative(scale->impl, fn->impl, tp), out_value);
  });
}

tsc_status tsc_delta_integral(const tsc_scale* scale, const tsc_function* fn, const char* a,
                              const char* b, int compose_sigma, char** out_value) {
  if (tsc_status rc = require(scale && fn && out_value, "scale, fn, out_value must be non-NULL"))
    return rc;
  return guarded([&] {
    ScalePoint ap = scale->impl.point(parse_value(scale, a));
    ScalePoint bp = scale->impl.point(parse_value(scale, b));
    Scalar result;
    if (compose_sigma) {
      SigmaComposedIntegrand g(scale->impl, fn->impl.poly());
      result = delta_integral(scale->impl, g, ap, bp);
    } else {
      PolyIntegrand g(fn->impl.poly());
      result = delta_integral(scale->impl, g, ap, bp);
    }
    return emit_value(result, out_value);
  });
}

tsc_status tsc_monomial_hk(const tsc_scale* scale, unsigned k, const char* t, const char* s,
                           char** out_value) {
  if (tsc_status rc = require(scale && out_value, "scale and out_value must be non-NULL")) return rc;
  return guarded([&] {
    ScalePoint tp = scale->impl.point(parse_value(scale, t));
    ScalePoint sp = scale->impl.point(parse_value(scale, s));
    return emit_value(monomial_hk(scale->impl, k, tp, sp).value, out_value);
  });
}

tsc_status tsc_h2_closed_form(const tsc_scale* scale, const char* t, const char* s,
                              char** out_value) {
  if (tsc_status rc = require(scale && out_value, "scale and out_value must be non-NULL")) return rc;
  g_last_error.clear();
  if (scale->impl.family() == FamilyKind::None) {
    g_last_error = "scale is not a canonical family; no closed form";
    return TSC_ERROR_UNSUPPORTED;
  }
  return guarded([&] {
    Scalar q = scale->impl.family() == FamilyKind::QLattice ? scale->impl.family_q()
                                                            : Scalar::from_int(0);
    Scalar value = h2_closed_form(scale->impl.family(), q, parse_value(scale, t),
                                  parse_value(scale, s));
    return emit_value(value, out_value);
  });
}

/* ------------------------------------------------------------------ */

tsc_status tsc_montgomery_identity(const tsc_scale* scale, const tsc_function* fn,
                                   const char* lambda, const char* t, char** out_json) {
  if (tsc_status rc = require(scale && fn && out_json, "scale, fn, out_json must be non-NULL"))
    return rc;
  return guarded([&] {
    auto p = kernel_params_full_span(scale, lambda, t);
    auto sides = montgomery_sides(scale->impl, fn->impl, p);
    Json doc = Json::object();
    doc["lhs"] = scalar_to_json(sides.lhs);
    doc["rhs"] = scalar_to_json(sides.rhs);
    doc["residual"] = scalar_to_json(sides.residual);
    doc["within_tolerance"] =
        identity_residual_within(scale->impl, fn->impl, p.a.value(), p.b.value(), p.t.value(),
                                 sides, scale->impl.tolerance() > 0 ? scale->impl.tolerance()
                                                                    : 1e-9);
    if (scale->impl.backend() == Backend::Float) doc["tolerance"] = scale->impl.tolerance();
    return emit_json(doc, out_json);
  });
}

tsc_status tsc_ostrowski_bound(const tsc_scale* scale, const tsc_function* fn,
                               const char* lambda, const char* t, const char* mode,
                               char** out_json) {
  if (tsc_status rc = require(scale && fn && out_json, "scale, fn, out_json must be non-NULL"))
    return rc;
  return guarded([&] {
    auto p = kernel_params_full_span(scale, lambda, t);
    auto report = ostrowski_bound(scale->impl, fn->impl, p, parse_mode(mode));
    return emit_json(report.to_json(scale->impl.backend(), scale->impl.tolerance()), out_json);
  });
}

tsc_status tsc_special_case_bound(const tsc_scale* scale, const tsc_function* fn,
                                  const char* kind, const char* lambda, const char* t,
                                  const char* mode, char** out_json) {
  if (tsc_status rc =
          require(scale && fn && kind && out_json, "scale, fn, kind, out_json must be non-NULL")) {
    return rc;
  }
  return guarded([&] {
    auto k = special_kind_from_name(kind);
    if (!k) throw SpecError("unknown special-case kind \"" + std::string(kind) + "\"");
    std::optional<Scalar> lam, tp;
    if (lambda) lam = parse_value(scale, lambda);
    if (t) tp = parse_value(scale, t);
    ScalePoint a = scale->impl.point(scale->impl.min());
    ScalePoint b = scale->impl.point(scale->impl.max());
    auto report = special_case_bound(scale->impl, fn->impl, a, b, *k, lam, tp, parse_mode(mode));
    return emit_json(report.to_json(scale->impl.backend(), scale->impl.tolerance()), out_json);
  });
}

tsc_status tsc_sharpness_condition(const tsc_scale* scale, const char* lambda, int* out_holds) {
  if (tsc_status rc = require(scale && out_holds, "scale and out_holds must be non-NULL"))
    return rc;
  return guarded([&] {
    ScalePoint a = scale->impl.point(scale->impl.min());
    ScalePoint b = scale->impl.point(scale->impl.max());
    *out_holds = sharpness_condition(scale->impl, a, b, parse_value(scale, lambda)) ? 1 : 0;
    return TSC_OK;
  });
}

tsc_status tsc_gruss_bound(const tsc_scale* scale, const tsc_function* fn, const char* t,
                           const char* gamma, const char* Gamma, char** out_json) {
  if (tsc_status rc = require(scale && fn && out_json, "scale, fn, out_json must be non-NULL"))
    return rc;
  if (tsc_status rc = require((gamma == nullptr) == (Gamma == nullptr),
                              "gamma and Gamma must be supplied together")) {
    return rc;
  }
  return guarded([&] {
    ScalePoint a = scale->impl.point(scale->impl.min());
    ScalePoint b = scale->impl.point(scale->impl.max());
    ScalePoint tp = scale->impl.point(parse_value(scale, t));
    std::optional<GrussParams> given;
    if (gamma) given = GrussParams{parse_value(scale, gamma), parse_value(scale, Gamma)};
    auto report = gruss_bound(scale->impl, fn->impl, a, b, tp, given);
    return emit_json(report.to_json(scale->impl.backend(), scale->impl.tolerance()), out_json);
  });
}

/* ------------------------------------------------------------------ */

tsc_status tsc_run_suite(const char* suite, const char* config_json, char** out_json) {
  if (tsc_status rc = require(suite && out_json, "suite and out_json must be non-NULL")) return rc;
  return guarded([&] {
    auto name = suite_from_name(suite);
    if (!name) throw SpecError("unknown suite \"" + std::string(suite) + "\"");
    Json cfg_doc = config_json ? Json::parse(config_json) : Json(nullptr);
    SuiteConfig cfg = SuiteConfig::from_json(cfg_doc);
    auto report = run_suite(*name, cfg);
    return emit_json(report.to_json(), out_json);
  });
}

tsc_status tsc_replay_violation(const char* record_json, int* out_passes) {
  if (tsc_status rc = require(record_json && out_passes, "record_json and out_passes must be non-NULL"))
    return rc;
  return guarded([&] {
    Json record = Json::parse(record_json);
    *out_passes = replay_violation(record) ? 1 : 0;
    return TSC_OK;
  });
}

} // extern "C"
