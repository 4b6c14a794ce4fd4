#include <doctest.h>

#include "core/delta_calculus.hpp"
#include "core/errors.hpp"
#include "core/integrand.hpp"

#include "helpers.hpp"

using namespace tscalc;
using tst::F;
using tst::R;

namespace {

Scalar integrate(const TimeScale& ts, const FunctionSpec& f, const std::string& a,
                 const std::string& b) {
  PolyIntegrand g{f.poly()};
  return delta_integral(ts, g, ts.point(R(a)), ts.point(R(b)));
}

} // namespace

TEST_CASE("delta derivative: forward quotient on discrete scales") {
  TimeScale zs = tst::integer_slice(0, 6);
  FunctionSpec sq = tst::fn_from(R"({"poly": ["0", "0", "1"]})");
  // ((t+1)^2 - t^2) / 1 = 2t + 1
  CHECK(delta_derivative(zs, sq, zs.point(R("2"))) == R("5"));
  CHECK(delta_derivative(zs, sq, zs.point(R("0"))) == R("1"));

  FunctionSpec cube = tst::fn_from(R"({"poly": ["0", "0", "0", "1"]})");
  // ((t+1)^3 - t^3) / 1 = 3t^2 + 3t + 1
  CHECK(delta_derivative(zs, cube, zs.point(R("2"))) == R("19"));

  CHECK(delta_derivative(zs, FunctionSpec::identity(), zs.point(R("3"))) == R("1"));
  CHECK(delta_derivative(zs, FunctionSpec::constant(R("7")), zs.point(R("3"))) == R("0"));
}

TEST_CASE("delta derivative: classical derivative at dense points") {
  TimeScale iv = tst::real_interval("0", "1");
  FunctionSpec sq = tst::fn_from(R"({"poly": ["0", "0", "1"]})");
  CHECK(delta_derivative(iv, sq, iv.point(R("1/2"))) == R("1"));
  // the maximum of an interval is left-dense, still differentiable
  CHECK(delta_derivative(iv, sq, iv.point(R("1"))) == R("2"));
}

TEST_CASE("delta derivative: q-difference quotient on the q-lattice") {
  TimeScale ql = tst::q_lattice("2", 0, 3); // {1, 2, 4, 8}
  FunctionSpec sq = tst::fn_from(R"({"poly": ["0", "0", "1"]})");
  // ((qt)^2 - t^2) / ((q-1) t) = (q+1) t = 3t
  CHECK(delta_derivative(ql, sq, ql.point(R("1"))) == R("3"));
  CHECK(delta_derivative(ql, sq, ql.point(R("2"))) == R("6"));
  CHECK(delta_derivative(ql, sq, ql.point(R("4"))) == R("12"));
}

TEST_CASE("delta derivative is undefined at a left-scattered maximum") {
  TimeScale zs = tst::integer_slice(0, 4);
  FunctionSpec sq = tst::fn_from(R"({"poly": ["0", "0", "1"]})");
  CHECK_THROWS_AS((void)delta_derivative(zs, sq, zs.point(R("4"))), DomainError);
  TimeScale ql = tst::q_lattice("2", 0, 3);
  CHECK_THROWS_AS((void)delta_derivative(ql, sq, ql.point(R("8"))), DomainError);
}

TEST_CASE("delta integral: scattered sums") {
  TimeScale zs = tst::integer_slice(0, 5);
  FunctionSpec id = FunctionSpec::identity();
  // sum of t over {0,...,4}
  CHECK(integrate(zs, id, "0", "5") == R("10"));
  CHECK(integrate(zs, id, "5", "0") == R("-10")); // reversed orientation
  CHECK(integrate(zs, id, "2", "2") == R("0"));   // empty window
  CHECK(integrate(zs, id, "1", "4") == R("6"));

  TimeScale ql = tst::q_lattice("2", 0, 3); // {1, 2, 4, 8}
  // sum of t * mu(t) = 1*1 + 2*2 + 4*4
  CHECK(integrate(ql, id, "1", "8") == R("21"));
}

TEST_CASE("delta integral: dense runs use exact antiderivatives") {
  TimeScale iv = tst::real_interval("0", "1");
  FunctionSpec sq = tst::fn_from(R"({"poly": ["0", "0", "1"]})");
  CHECK(integrate(iv, sq, "0", "1") == R("1/3"));
  CHECK(integrate(iv, sq, "1", "0") == R("-1/3"));
  CHECK(integrate(iv, sq, "1/4", "3/4") == R("13/96"));
}

TEST_CASE("delta integral: hybrid scales mix both contributions") {
  TimeScale hs = tst::scale_from(
      R"({"components": [{"interval": ["0", "1"]}, {"point": "2"}], "backend": "rational"})");
  FunctionSpec id = FunctionSpec::identity();
  // classical integral over [0,1] plus f(1) * mu(1) = 1/2 + 1
  CHECK(integrate(hs, id, "0", "2") == R("3/2"));
}

TEST_CASE("sigma-composed integrand shifts scattered evaluations forward") {
  TimeScale zs = tst::integer_slice(0, 3);
  SigmaComposedIntegrand fsigma{zs, Polynomial::identity()};
  // sum of sigma(s) over {0,1,2} = 1 + 2 + 3
  CHECK(delta_integral(zs, fsigma, zs.point(R("0")), zs.point(R("3"))) == R("6"));
  // matches b^2 - a^2 - integral of s
  CHECK(delta_integral(zs, fsigma, zs.point(R("0")), zs.point(R("3"))) ==
        R("9") - integrate(zs, FunctionSpec::identity(), "0", "3"));
}

TEST_CASE("absolute-deviation integrand splits at its center") {
  AbsDeviationIntegrand dev{R("2")};
  TimeScale zs = tst::integer_slice(0, 4);
  // |0-2| + |1-2| + |2-2| + |3-2|
  CHECK(delta_integral(zs, dev, zs.point(R("0")), zs.point(R("4"))) == R("4"));

  TimeScale iv = tst::real_interval("0", "4");
  CHECK(delta_integral(iv, dev, iv.point(R("0")), iv.point(R("4"))) == R("4"));
  // center outside the run: plain linear integral
  AbsDeviationIntegrand above{R("10")};
  CHECK(delta_integral(iv, above, iv.point(R("0")), iv.point(R("4"))) == R("32"));
}

TEST_CASE("monomials: h0 and h1 are degenerate") {
  TimeScale zs = tst::integer_slice(0, 6);
  auto h0 = monomial_hk(zs, 0, zs.point(R("5")), zs.point(R("2")));
  CHECK(h0.value == R("1"));
  CHECK(h0.k == 0);
  auto h1 = monomial_hk(zs, 1, zs.point(R("5")), zs.point(R("2")));
  CHECK(h1.value == R("3")); // t - s on every scale
  CHECK(h1.method == HkMethod::Recursive);
  CHECK(h1.t == R("5"));
  CHECK(h1.s == R("2"));
}

TEST_CASE("monomials: h2 recursion matches the family closed forms") {
  // integers: (t-s)(t-s-1)/2
  TimeScale zs = tst::integer_slice(0, 6);
  CHECK(monomial_hk(zs, 2, zs.point(R("5")), zs.point(R("2"))).value == R("3"));
  CHECK(h2_closed_form(FamilyKind::Integers, R("0"), R("5"), R("2")) == R("3"));
  // reversed arguments flip through the same formula
  CHECK(monomial_hk(zs, 2, zs.point(R("2")), zs.point(R("5"))).value == R("6"));
  CHECK(h2_closed_form(FamilyKind::Integers, R("0"), R("2"), R("5")) == R("6"));

  // q-lattice: (t-s)(t-qs)/(1+q)
  TimeScale ql = tst::q_lattice("2", 0, 3);
  CHECK(monomial_hk(ql, 2, ql.point(R("4")), ql.point(R("1"))).value == R("2"));
  CHECK(h2_closed_form(FamilyKind::QLattice, R("2"), R("4"), R("1")) == R("2"));
  CHECK(monomial_hk(ql, 2, ql.point(R("8")), ql.point(R("2"))).value ==
        h2_closed_form(FamilyKind::QLattice, R("2"), R("8"), R("2")));

  // reals: (t-s)^2 / 2
  TimeScale iv = tst::real_interval("0", "1");
  CHECK(monomial_hk(iv, 2, iv.point(R("1")), iv.point(R("0"))).value == R("1/2"));
  CHECK(h2_closed_form(FamilyKind::Reals, R("0"), R("1"), R("0")) == R("1/2"));
  CHECK(monomial_hk(iv, 2, iv.point(R("1/4")), iv.point(R("3/4"))).value == R("1/8"));
}

TEST_CASE("monomials: higher orders keep following the recursion") {
  // integers: h_k(t, s) = binomial(t - s, k)
  TimeScale zs = tst::integer_slice(0, 8);
  CHECK(monomial_hk(zs, 3, zs.point(R("5")), zs.point(R("2"))).value == R("1"));
  CHECK(monomial_hk(zs, 3, zs.point(R("6")), zs.point(R("2"))).value == R("4"));
  CHECK(monomial_hk(zs, 4, zs.point(R("6")), zs.point(R("2"))).value == R("1"));

  // reals: h_k(t, s) = (t-s)^k / k!
  TimeScale iv = tst::real_interval("0", "1");
  CHECK(monomial_hk(iv, 3, iv.point(R("1")), iv.point(R("0"))).value == R("1/6"));
  CHECK(monomial_hk(iv, 4, iv.point(R("1")), iv.point(R("0"))).value == R("1/24"));

  // coincident arguments vanish for k >= 1
  CHECK(monomial_hk(zs, 3, zs.point(R("4")), zs.point(R("4"))).value == R("0"));
}

TEST_CASE("h2 closed form guards its parameters") {
  CHECK_THROWS_AS((void)h2_closed_form(FamilyKind::None, R("0"), R("1"), R("0")), DomainError);
  CHECK_THROWS_AS((void)h2_closed_form(FamilyKind::QLattice, R("1"), R("4"), R("1")), DomainError);
  CHECK_THROWS_AS((void)h2_closed_form(FamilyKind::QLattice, R("1/2"), R("4"), R("1")),
                  DomainError);
}

TEST_CASE("monomials require scale membership") {
  TimeScale zs = tst::integer_slice(0, 4);
  CHECK_THROWS_AS((void)zs.point(R("7/2")), DomainError);
}

TEST_CASE("float backend integrates with promoted arithmetic") {
  TimeScale iv = tst::scale_from(
      R"({"components": [{"interval": [0, 1]}], "backend": "float", "tolerance": 1e-9})");
  FunctionSpec sq = tst::fn_from(R"({"poly": ["0", "0", "1"]})");
  PolyIntegrand g{sq.poly()};
  Scalar v = delta_integral(iv, g, iv.point(F(0.0)), iv.point(F(1.0)));
  CHECK(v.backend() == Backend::Float);
  CHECK(v.approx_equal(F(1.0 / 3.0), 1e-12));
}
