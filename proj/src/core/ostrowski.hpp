#pragma once

#include "core/delta_calculus.hpp"
#include "core/function_spec.hpp"
#include "core/json.hpp"
#include "core/time_scale.hpp"

#include <array>
#include <optional>
#include <string>

namespace tscalc {

/// Parameters of the weighted Montgomery kernel on [a, b]:
///   K(t, s) = s - (a + lambda (b-a)/2)   for s in [a, t)
///   K(t, s) = s - (b - lambda (b-a)/2)   for s in [t, b].
/// lambda in [0, 1]; t must lie in the admissible window
/// [a + lambda (b-a)/2, b - lambda (b-a)/2] ∩ scale.
struct KernelParams {
  ScalePoint a;
  ScalePoint b;
  ScalePoint t;
  Scalar lambda;
  Scalar split_lo; // a + lambda (b-a)/2
  Scalar split_hi; // b - lambda (b-a)/2

  static KernelParams make(const TimeScale& scale, const ScalePoint& a, const ScalePoint& b,
                           const Scalar& lambda, const ScalePoint& t);
};

/// K(t, s) for s in [a, b]; errors outside.
Scalar kernel_value(const KernelParams& p, const Scalar& s);

struct MontgomerySides {
  Scalar lhs;      // (1-lambda) f(t) + lambda (f(a) + f(b)) / 2
  Scalar rhs;      // (1/(b-a)) [ integral of f(sigma(s)) + integral of K(t,s) fdelta(s) ]
  Scalar residual; // lhs - rhs; zero exactly on the rational backend
};

MontgomerySides montgomery_sides(const TimeScale& scale, const FunctionSpec& f,
                                 const KernelParams& p);

/// sup of |fdelta| over [a, b): exact maximum over the right-scattered points
/// of [a, b) (including a), plus the maximum of |f'| over dense runs, located
/// at run endpoints and at sign changes of f'' refined to 1e-12.
/// Errors when (a, b) ∩ scale is empty.
Scalar sup_abs_delta_derivative(const TimeScale& scale, const FunctionSpec& f,
                                const ScalePoint& a, const ScalePoint& b);

/// [min, max] of fdelta over the same domain; the tight Gruss bounds.
std::pair<Scalar, Scalar> delta_derivative_range(const TimeScale& scale, const FunctionSpec& f,
                                                 const ScalePoint& a, const ScalePoint& b);

enum class BoundMode { Direct, FourH2 };

enum class ReportMode { DirectKernelIntegral, FourH2Members, FourH2ClosedForm, Gruss };

std::string report_mode_name(ReportMode m);

struct BoundReport {
  Scalar lhs;
  Scalar rhs;
  Scalar margin; // rhs - lhs
  Scalar M;
  ReportMode mode;
  std::optional<std::array<Scalar, 4>> components; // the four h2 terms, when applicable
  bool sharpness_condition_holds = false;
  bool equality_case = false;
  std::optional<std::string> kind;             // special-case name, when dispatched
  std::optional<std::pair<Scalar, Scalar>> gruss_bounds; // gamma, Gamma for the Gruss route

  /// Field order is fixed; rational scalars emit "p/q" strings, float
  /// backends emit numbers plus a "tolerance" field.
  Json to_json(Backend backend, double tolerance) const;
};

/// Weighted Ostrowski bound:
///   lhs = |(1-lambda) f(t) + lambda (f(a)+f(b))/2 - (1/(b-a)) integral f^sigma|
///   rhs = (M/(b-a)) * integral |K(t, .)|          (direct mode)
///   rhs = (M/(b-a)) * [h2(a, split_lo) + h2(t, split_lo)
///                      + h2(t, split_hi) + h2(b, split_hi)]   (four-h2 mode)
/// Four-h2 uses the recursive monomials when both split points are scale
/// members, the family closed form otherwise (canonical families only).
BoundReport ostrowski_bound(const TimeScale& scale, const FunctionSpec& f,
                            const KernelParams& p, BoundMode mode);

/// Whether (lambda/2) a (b-a) + (lambda^2/4) (b-a)^2 <= integral of s
/// from a to a + lambda (b-a)/2. Trivially true at lambda = 0; errors when
/// the upper limit is not a scale member.
bool sharpness_condition(const TimeScale& scale, const ScalePoint& a, const ScalePoint& b,
                         const Scalar& lambda);

struct GrussParams {
  Scalar gamma;
  Scalar Gamma;
};

/// Gruss-type bound:
///   lhs = |f(t) - (1/(b-a)) integral f^sigma
///          - ((f(b)-f(a))/(b-a)^2) (h2(t, a) - h2(t, b))|
///   rhs = (1/4)(b-a)(Gamma - gamma).
/// Omitted bounds are computed tight; supplied bounds are validated against
/// the actual range of fdelta.
BoundReport gruss_bound(const TimeScale& scale, const FunctionSpec& f, const ScalePoint& a,
                        const ScalePoint& b, const ScalePoint& t,
                        const std::optional<GrussParams>& given);

enum class SpecialKind {
  BohnerMatthews, // lambda = 0, free t
  Trapezoid,      // lambda = 1, t = midpoint
  ThirdFamily,    // lambda = 1/3, free t
  Simpson,        // lambda = 1/3, t = midpoint
  HalfFamily,     // lambda = 1/2, free t
  Averaged,       // lambda = 1/2, t = midpoint
  CenterFamily,   // free lambda, t = midpoint
  Midpoint,       // lambda = 0, t = midpoint
};

std::optional<SpecialKind> special_kind_from_name(const std::string& name);
std::string special_kind_name(SpecialKind k);

/// Pins (lambda, t) per the named quadrature family and delegates to
/// ostrowski_bound over [min, max] by default (or an explicit [a, b]).
/// Midpoint-style kinds require (a+b)/2 to be a scale member.
BoundReport special_case_bound(const TimeScale& scale, const FunctionSpec& f,
                               const ScalePoint& a, const ScalePoint& b, SpecialKind kind,
                               const std::optional<Scalar>& lambda_extra,
                               const std::optional<Scalar>& t_extra, BoundMode mode);

} // namespace tscalc
