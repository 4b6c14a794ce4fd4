#include "core/ostrowski.hpp"

#include "core/errors.hpp"
#include "core/serde.hpp"

#include <cmath>

namespace tscalc {

namespace {

Scalar half(const Scalar& v) { return v / Scalar::from_int(2); }

bool scalars_equal(Backend backend, const Scalar& x, const Scalar& y, double tol) {
  if (backend == Backend::Rational) return x == y;
  return x.approx_equal(y, tol);
}

} // namespace

KernelParams KernelParams::make(const TimeScale& scale, const ScalePoint& a, const ScalePoint& b,
                                const Scalar& lambda, const ScalePoint& t) {
  if (!(a.value() < b.value())) throw DomainError("kernel needs a < b");
  if (lambda < Scalar::from_int(0) || lambda > Scalar::from_int(1)) {
    throw SpecError("lambda must lie in [0, 1]");
  }
  Scalar width = b.value() - a.value();
  Scalar offset = half(lambda * width);
  Scalar split_lo = a.value() + offset;
  Scalar split_hi = b.value() - offset;

  double tol = scale.tolerance();
  bool inside;
  if (scale.backend() == Backend::Rational) {
    inside = t.value() >= split_lo && t.value() <= split_hi;
  } else {
    inside = t.value().as_double() >= split_lo.as_double() - tol &&
             t.value().as_double() <= split_hi.as_double() + tol;
  }
  if (!inside) {
    throw DomainError("t = " + t.value().to_string() + " outside admissible window [" +
                      split_lo.to_string() + ", " + split_hi.to_string() + "]");
  }
  return KernelParams{a, b, t, lambda, split_lo, split_hi};
}

Scalar kernel_value(const KernelParams& p, const Scalar& s) {
  if (s < p.a.value() || s > p.b.value()) throw DomainError("kernel argument outside [a, b]");
  if (s < p.t.value()) return s - p.split_lo;
  return s - p.split_hi;
}

MontgomerySides montgomery_sides(const TimeScale& scale, const FunctionSpec& f,
                                 const KernelParams& p) {
  Scalar one = Scalar::from_int(1);
  Scalar lhs = (one - p.lambda) * f.evaluate(p.t.value()) +
               half(p.lambda * (f.evaluate(p.a.value()) + f.evaluate(p.b.value())));

  SigmaComposedIntegrand f_sigma(scale, f.poly());
  Scalar int_f_sigma = delta_integral(scale, f_sigma, p.a, p.b);

  Polynomial left_kernel({-p.split_lo, one});  // s - split_lo
  Polynomial right_kernel({-p.split_hi, one}); // s - split_hi
  PolyTimesDeltaDerivIntegrand left(scale, left_kernel, f);
  PolyTimesDeltaDerivIntegrand right(scale, right_kernel, f);
  Scalar kernel_int =
      delta_integral(scale, left, p.a, p.t) + delta_integral(scale, right, p.t, p.b);

  Scalar rhs = (int_f_sigma + kernel_int) / (p.b.value() - p.a.value());
  return MontgomerySides{lhs, rhs, lhs - rhs};
}

namespace {

/// Brackets of sign changes of p inside (lo, hi), each refined to width 1e-12.
std::vector<std::pair<Scalar, Scalar>> sign_change_brackets(const Polynomial& p,
                                                            const Scalar& lo, const Scalar& hi) {
  std::vector<std::pair<Scalar, Scalar>> out;
  if (p.degree() < 1) return out;

  const int grid = 128;
  Scalar width = hi - lo;
  Scalar prev_x = lo;
  int prev_sign = compare(p.evaluate(lo), Scalar::from_int(0));
  for (int i = 1; i <= grid; ++i) {
    Scalar x = lo + width * Scalar::from_rational(Rational(i, grid));
    int sign = compare(p.evaluate(x), Scalar::from_int(0));
    if (sign != 0 && prev_sign != 0 && sign != prev_sign) {
      Scalar a = prev_x;
      Scalar b = x;
      while ((b - a).as_double() > 1e-12) {
        Scalar mid = half(a + b);
        int ms = compare(p.evaluate(mid), Scalar::from_int(0));
        if (ms == 0) {
          a = mid;
          b = mid;
          break;
        }
        if (ms == prev_sign) {
          a = mid;
        } else {
          b = mid;
        }
      }
      out.emplace_back(a, b);
    }
    if (sign != 0) {
      prev_sign = sign;
      prev_x = x;
    } else {
      out.emplace_back(x, x); // exact zero on the grid
      // sign continues from the last nonzero sample
      prev_x = x;
    }
  }
  return out;
}

struct DerivativeRange {
  Scalar lo;
  Scalar hi;
};

DerivativeRange scan_delta_derivative(const TimeScale& scale, const FunctionSpec& f,
                                      const ScalePoint& a, const ScalePoint& b) {
  auto pieces = scale.decompose(a.value(), b.value());

  bool interior_nonempty = false;
  for (const auto& piece : pieces) {
    if (std::holds_alternative<TimeScale::DenseRun>(piece)) {
      interior_nonempty = true;
    } else if (std::get<TimeScale::ScatteredPoint>(piece).t > a.value()) {
      interior_nonempty = true;
    }
  }
  if (!interior_nonempty) {
    throw DomainError("no scale points strictly between a and b");
  }

  Polynomial fprime = f.classical_derivative();
  Polynomial fsecond = fprime.derivative();

  bool have = false;
  Scalar lo = Scalar::from_int(0);
  Scalar hi = Scalar::from_int(0);
  auto include = [&](const Scalar& v) {
    if (!have) {
      lo = v;
      hi = v;
      have = true;
      return;
    }
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  };

  for (const auto& piece : pieces) {
    if (const auto* sp = std::get_if<TimeScale::ScatteredPoint>(&piece)) {
      Scalar fwd = f.evaluate(sp->t + sp->mu) - f.evaluate(sp->t);
      include(fwd / sp->mu);
    } else {
      const auto& run = std::get<TimeScale::DenseRun>(piece);
      include(fprime.evaluate(run.lo));
      include(fprime.evaluate(run.hi));
      for (const auto& [x0, x1] : sign_change_brackets(fsecond, run.lo, run.hi)) {
        include(fprime.evaluate(x0));
        if (x1 != x0) include(fprime.evaluate(x1));
      }
    }
  }
  return DerivativeRange{lo, hi};
}

} // namespace

Scalar sup_abs_delta_derivative(const TimeScale& scale, const FunctionSpec& f,
                                const ScalePoint& a, const ScalePoint& b) {
  auto range = scan_delta_derivative(scale, f, a, b);
  return max(range.lo.abs(), range.hi.abs());
}

std::pair<Scalar, Scalar> delta_derivative_range(const TimeScale& scale, const FunctionSpec& f,
                                                 const ScalePoint& a, const ScalePoint& b) {
  auto range = scan_delta_derivative(scale, f, a, b);
  return {range.lo, range.hi};
}

std::string report_mode_name(ReportMode m) {
  switch (m) {
    case ReportMode::DirectKernelIntegral: return "direct-kernel-integral";
    case ReportMode::FourH2Members: return "four-h2-members";
    case ReportMode::FourH2ClosedForm: return "four-h2-closed-form";
    case ReportMode::Gruss: return "gruss";
  }
  return "?";
}

Json BoundReport::to_json(Backend backend, double tolerance) const {
  Json out = Json::object();
  out["lhs"] = scalar_to_json(lhs);
  out["rhs"] = scalar_to_json(rhs);
  out["margin"] = scalar_to_json(margin);
  out["M"] = scalar_to_json(M);
  out["mode"] = report_mode_name(mode);
  if (kind) out["kind"] = *kind;
  if (components) {
    Json arr = Json::array();
    for (const auto& c : *components) arr.push_back(scalar_to_json(c));
    out["components"] = arr;
  } else {
    out["components"] = nullptr;
  }
  if (gruss_bounds) {
    out["gamma"] = scalar_to_json(gruss_bounds->first);
    out["Gamma"] = scalar_to_json(gruss_bounds->second);
  }
  out["sharpness_condition"] = sharpness_condition_holds;
  out["equality_case"] = equality_case;
  if (backend == Backend::Float) out["tolerance"] = tolerance;
  return out;
}

namespace {

bool sharpness_condition_or_false(const TimeScale& scale, const ScalePoint& a,
                                  const ScalePoint& b, const Scalar& lambda) {
  try {
    return sharpness_condition(scale, a, b, lambda);
  } catch (const DomainError&) {
    return false; // split point off-scale: not verifiable, reported as not holding
  }
}

} // namespace

BoundReport ostrowski_bound(const TimeScale& scale, const FunctionSpec& f,
                            const KernelParams& p, BoundMode mode) {
  Scalar one = Scalar::from_int(1);
  Scalar width = p.b.value() - p.a.value();
  Scalar M = sup_abs_delta_derivative(scale, f, p.a, p.b);

  SigmaComposedIntegrand f_sigma(scale, f.poly());
  Scalar avg = delta_integral(scale, f_sigma, p.a, p.b) / width;
  Scalar lhs = ((one - p.lambda) * f.evaluate(p.t.value()) +
                half(p.lambda * (f.evaluate(p.a.value()) + f.evaluate(p.b.value()))) - avg)
                   .abs();

  BoundReport report;
  report.lhs = lhs;
  report.M = M;

  if (mode == BoundMode::Direct) {
    AbsDeviationIntegrand left(p.split_lo);
    AbsDeviationIntegrand right(p.split_hi);
    Scalar abs_int =
        delta_integral(scale, left, p.a, p.t) + delta_integral(scale, right, p.t, p.b);
    report.rhs = M * abs_int / width;
    report.mode = ReportMode::DirectKernelIntegral;
  } else {
    std::array<Scalar, 4> h2;
    if (scale.contains(p.split_lo) && scale.contains(p.split_hi)) {
      ScalePoint lo = scale.point(p.split_lo);
      ScalePoint hi = scale.point(p.split_hi);
      h2[0] = monomial_hk(scale, 2, p.a, lo).value;
      h2[1] = monomial_hk(scale, 2, p.t, lo).value;
      h2[2] = monomial_hk(scale, 2, p.t, hi).value;
      h2[3] = monomial_hk(scale, 2, p.b, hi).value;
      report.mode = ReportMode::FourH2Members;
    } else if (scale.family() != FamilyKind::None) {
      Scalar q = scale.family() == FamilyKind::QLattice ? scale.family_q() : Scalar::from_int(0);
      h2[0] = h2_closed_form(scale.family(), q, p.a.value(), p.split_lo);
      h2[1] = h2_closed_form(scale.family(), q, p.t.value(), p.split_lo);
      h2[2] = h2_closed_form(scale.family(), q, p.t.value(), p.split_hi);
      h2[3] = h2_closed_form(scale.family(), q, p.b.value(), p.split_hi);
      report.mode = ReportMode::FourH2ClosedForm;
    } else {
      throw DomainError(
          "four-h2 mode needs the split points on the scale or a canonical family");
    }
    report.components = h2;
    report.rhs = M * (h2[0] + h2[1] + h2[2] + h2[3]) / width;
  }

  report.margin = report.rhs - report.lhs;
  report.sharpness_condition_holds = sharpness_condition_or_false(scale, p.a, p.b, p.lambda);

  double tol = scale.tolerance();
  bool at_upper = scalars_equal(scale.backend(), p.t.value(), p.split_hi, tol);
  bool at_a_with_lambda0 = p.lambda.is_zero() &&
                           scalars_equal(scale.backend(), p.t.value(), p.a.value(), tol);
  report.equality_case =
      f.is_identity() && report.sharpness_condition_holds && (at_upper || at_a_with_lambda0);
  return report;
}

bool sharpness_condition(const TimeScale& scale, const ScalePoint& a, const ScalePoint& b,
                         const Scalar& lambda) {
  if (lambda < Scalar::from_int(0) || lambda > Scalar::from_int(1)) {
    throw SpecError("lambda must lie in [0, 1]");
  }
  if (lambda.is_zero()) return true;
  Scalar width = b.value() - a.value();
  Scalar upper = a.value() + half(lambda * width);
  if (!scale.contains(upper)) {
    throw DomainError("sharpness upper limit " + upper.to_string() + " is not a scale member");
  }
  Scalar lhs = half(lambda) * a.value() * width + half(half(lambda * lambda)) * width * width;
  PolyIntegrand s_itself(Polynomial::identity());
  Scalar integral = delta_integral(scale, s_itself, a, scale.point(upper));
  return lhs <= integral;
}

BoundReport gruss_bound(const TimeScale& scale, const FunctionSpec& f, const ScalePoint& a,
                        const ScalePoint& b, const ScalePoint& t,
                        const std::optional<GrussParams>& given) {
  if (!(a.value() < b.value())) throw DomainError("gruss needs a < b");
  Scalar width = b.value() - a.value();

  auto range = delta_derivative_range(scale, f, a, b);
  Scalar gamma = range.first;
  Scalar Gamma = range.second;
  if (given) {
    if (given->gamma > given->Gamma) throw SpecError("gamma exceeds Gamma");
    double tol = scale.tolerance();
    bool ok_lo = scale.backend() == Backend::Rational ? given->gamma <= gamma
                                                      : given->gamma.as_double() <=
                                                            gamma.as_double() + tol;
    bool ok_hi = scale.backend() == Backend::Rational ? Gamma <= given->Gamma
                                                      : Gamma.as_double() <=
                                                            given->Gamma.as_double() + tol;
    if (!ok_lo || !ok_hi) {
      throw DomainError("derivative bound hypothesis violated: fdelta ranges over [" +
                        gamma.to_string() + ", " + Gamma.to_string() + "]");
    }
    gamma = given->gamma;
    Gamma = given->Gamma;
  }

  SigmaComposedIntegrand f_sigma(scale, f.poly());
  Scalar avg = delta_integral(scale, f_sigma, a, b) / width;
  Scalar h2_ta = monomial_hk(scale, 2, t, a).value;
  Scalar h2_tb = monomial_hk(scale, 2, t, b).value;
  Scalar slope = (f.evaluate(b.value()) - f.evaluate(a.value())) / (width * width);
  Scalar lhs = (f.evaluate(t.value()) - avg - slope * (h2_ta - h2_tb)).abs();
  Scalar rhs = half(half(width * (Gamma - gamma)));

  BoundReport report;
  report.lhs = lhs;
  report.rhs = rhs;
  report.margin = rhs - lhs;
  report.M = max(range.first.abs(), range.second.abs());
  report.mode = ReportMode::Gruss;
  report.gruss_bounds = std::make_pair(gamma, Gamma);
  report.sharpness_condition_holds = false;
  report.equality_case = scale.backend() == Backend::Rational
                             ? lhs == rhs
                             : lhs.approx_equal(rhs, 1e-12 * std::max(1.0, rhs.as_double()));
  return report;
}

std::optional<SpecialKind> special_kind_from_name(const std::string& name) {
  if (name == "bohner-matthews") return SpecialKind::BohnerMatthews;
  if (name == "trapezoid") return SpecialKind::Trapezoid;
  if (name == "third-family") return SpecialKind::ThirdFamily;
  if (name == "simpson") return SpecialKind::Simpson;
  if (name == "half-family") return SpecialKind::HalfFamily;
  if (name == "averaged") return SpecialKind::Averaged;
  if (name == "center-family") return SpecialKind::CenterFamily;
  if (name == "midpoint") return SpecialKind::Midpoint;
  return std::nullopt;
}

std::string special_kind_name(SpecialKind k) {
  switch (k) {
    case SpecialKind::BohnerMatthews: return "bohner-matthews";
    case SpecialKind::Trapezoid: return "trapezoid";
    case SpecialKind::ThirdFamily: return "third-family";
    case SpecialKind::Simpson: return "simpson";
    case SpecialKind::HalfFamily: return "half-family";
    case SpecialKind::Averaged: return "averaged";
    case SpecialKind::CenterFamily: return "center-family";
    case SpecialKind::Midpoint: return "midpoint";
  }
  return "?";
}

BoundReport special_case_bound(const TimeScale& scale, const FunctionSpec& f,
                               const ScalePoint& a, const ScalePoint& b, SpecialKind kind,
                               const std::optional<Scalar>& lambda_extra,
                               const std::optional<Scalar>& t_extra, BoundMode mode) {
  std::optional<Scalar> lambda;
  bool t_pinned_to_center = false;
  switch (kind) {
    case SpecialKind::BohnerMatthews: lambda = Scalar::from_int(0); break;
    case SpecialKind::Trapezoid:
      lambda = Scalar::from_int(1);
      t_pinned_to_center = true;
      break;
    case SpecialKind::ThirdFamily:
      lambda = Scalar::from_rational(Rational(1, 3));
      break;
    case SpecialKind::Simpson:
      lambda = Scalar::from_rational(Rational(1, 3));
      t_pinned_to_center = true;
      break;
    case SpecialKind::HalfFamily:
      lambda = Scalar::from_rational(Rational(1, 2));
      break;
    case SpecialKind::Averaged:
      lambda = Scalar::from_rational(Rational(1, 2));
      t_pinned_to_center = true;
      break;
    case SpecialKind::CenterFamily:
      t_pinned_to_center = true;
      break;
    case SpecialKind::Midpoint:
      lambda = Scalar::from_int(0);
      t_pinned_to_center = true;
      break;
  }

  if (lambda && lambda_extra) {
    throw SpecError("lambda is pinned to " + lambda->to_string() + " for kind \"" +
                    special_kind_name(kind) + "\"");
  }
  if (!lambda) {
    if (!lambda_extra) throw SpecError("kind \"" + special_kind_name(kind) + "\" needs lambda");
    lambda = *lambda_extra;
  }

  std::optional<Scalar> t_value;
  if (t_pinned_to_center) {
    if (t_extra) {
      throw SpecError("t is pinned to (a+b)/2 for kind \"" + special_kind_name(kind) + "\"");
    }
    Scalar mid = half(a.value() + b.value());
    if (!scale.contains(mid)) {
      throw DomainError("(a+b)/2 = " + mid.to_string() + " is not a scale member");
    }
    t_value = mid;
  } else {
    if (!t_extra) throw SpecError("kind \"" + special_kind_name(kind) + "\" needs t");
    t_value = *t_extra;
  }

  KernelParams p = KernelParams::make(scale, a, b, *lambda, scale.point(*t_value));
  BoundReport report = ostrowski_bound(scale, f, p, mode);
  report.kind = special_kind_name(kind);
  return report;
}

} // namespace tscalc
