#include <doctest.h>

#include "core/errors.hpp"
#include "core/polynomial.hpp"
#include "core/rational.hpp"
#include "core/scalar.hpp"
#include "core/serde.hpp"

#include "helpers.hpp"

#include <cmath>
#include <string>

using namespace tscalc;
using tst::F;
using tst::R;

TEST_CASE("rational text parses exactly and formats canonically") {
  CHECK(R("7/2").to_string() == "7/2");
  CHECK(R("-3").to_string() == "-3");
  CHECK(R("4/6").to_string() == "2/3");   // reduced
  CHECK(R("-0.25").to_string() == "-1/4"); // decimals are exact
  CHECK(R("2.5e3").to_string() == "2500"); // exponents too
  CHECK(R("1e-2").to_string() == "1/100");
  CHECK(R("0").to_string() == "0");
  // leading zeros are decimal, never octal
  CHECK(R("007").to_string() == "7");
  CHECK(R("0.18").to_string() == "9/50");
  CHECK(R("-0.081").to_string() == "-81/1000");
  CHECK(R("018/09").to_string() == "2");

  CHECK(!parse_rational("1/0").has_value());
  CHECK(!parse_rational("abc").has_value());
  CHECK(!parse_rational("").has_value());
  CHECK(!parse_rational("1/").has_value());
  CHECK_THROWS_AS((void)scalar_from_text("1/0", Backend::Rational, 0.0), SpecError);
  CHECK_THROWS_AS((void)scalar_from_text("nope", Backend::Rational, 0.0), SpecError);
}

TEST_CASE("format_rational and rational_pow") {
  CHECK(format_rational(Rational(5)) == "5");
  CHECK(format_rational(Rational(-3, 6)) == "-1/2");
  CHECK(rational_pow(Rational(2), 10) == Rational(1024));
  CHECK(rational_pow(Rational(2), -3) == Rational(1, 8));
  CHECK(rational_pow(Rational(3, 2), 0) == Rational(1));
  CHECK(rational_pow(Rational(-2), 3) == Rational(-8));
}

TEST_CASE("rational arithmetic is exact") {
  CHECK(R("1/3") + R("1/6") == R("1/2"));
  CHECK(R("2/3") * R("9/4") == R("3/2"));
  CHECK(R("1") / R("3") == R("1/3"));
  CHECK(R("1/3") - R("1/3") == R("0"));
  CHECK((R("1/3") - R("1/3")).is_zero());
  CHECK((-R("2/5")).to_string() == "-2/5");
  CHECK(R("-7/3").abs() == R("7/3"));

  Scalar acc = R("0");
  for (int i = 0; i < 10; ++i) acc += R("1/10");
  CHECK(acc == R("1")); // no drift, unlike doubles
}

TEST_CASE("backend promotion and tolerance propagation") {
  Scalar r = R("1/2");
  Scalar f = F(0.5, 1e-9);

  CHECK(r.backend() == Backend::Rational);
  CHECK(r.is_rational());
  CHECK(r.tolerance() == 0.0);
  CHECK(f.backend() == Backend::Float);
  CHECK(!f.is_rational());
  CHECK(f.tolerance() == 1e-9);

  CHECK((r + r).backend() == Backend::Rational);
  CHECK((r + f).backend() == Backend::Float);
  CHECK((f * r).backend() == Backend::Float);

  // tolerance is the max of the operands'
  Scalar loose = F(1.0, 1e-6);
  Scalar tight = F(1.0, 1e-9);
  CHECK((loose + tight).tolerance() == 1e-6);
  CHECK((tight - loose).tolerance() == 1e-6);
  CHECK((r * loose).tolerance() == 1e-6);
}

TEST_CASE("from_double guards its invariants") {
  CHECK_THROWS_AS((void)Scalar::from_double(1.0, 0.0), DomainError);
  CHECK_THROWS_AS((void)Scalar::from_double(1.0, -1e-9), DomainError);
  CHECK_THROWS_AS((void)Scalar::from_double(std::nan(""), 1e-9), DomainError);
  CHECK_THROWS_AS((void)Scalar::from_double(INFINITY, 1e-9), DomainError);
}

TEST_CASE("rational_value accessor") {
  CHECK(R("3/4").rational_value() == Rational(3, 4));
  CHECK_THROWS_AS((void)F(0.75).rational_value(), DomainError);
}

TEST_CASE("comparison is exact for rationals, numeric for floats") {
  CHECK(R("1/3") < R("34/100"));
  CHECK(R("1/3") > R("33/100"));
  CHECK(R("2/4") == R("1/2"));
  CHECK(R("1/3") != R("333333333/1000000000"));
  CHECK(compare(R("5"), R("5")) == 0);
  CHECK(compare(R("-1"), R("1")) < 0);

  CHECK(F(0.5) == R("1/2"));
  // mixed compare goes through double, and double(1/10) rounds to the same bits as 0.1
  CHECK(F(0.1) == R("1/10"));
  // differences the double grid can represent stay visible
  CHECK(F(0.1) != R("11/100"));

  CHECK(min(R("1/3"), R("1/4")) == R("1/4"));
  CHECK(max(R("1/3"), R("1/4")) == R("1/3"));
}

TEST_CASE("approx_equal evaluates the gap exactly for rational pairs") {
  CHECK(R("1/3").approx_equal(R("333/1000"), 1e-3));  // gap = 1/3000
  CHECK(!R("1/3").approx_equal(R("333/1000"), 1e-4));
  CHECK(F(1.0).approx_equal(F(1.0 + 5e-10), 1e-9));
  CHECK(!F(1.0).approx_equal(F(1.0 + 5e-9), 1e-9));
}

TEST_CASE("float formatting round-trips the exact double") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(1.0) == "1");
  double third = 1.0 / 3.0;
  CHECK(std::stod(format_double(third)) == third);
  CHECK(std::stod(F(third).to_string()) == third);
}

TEST_CASE("scalar json serialization shape") {
  // rational -> "p/q" string
  CHECK(scalar_to_json(R("7/2")) == Json("7/2"));
  CHECK(scalar_to_json(R("-3")) == Json("-3"));
  // float -> plain number
  Json f = scalar_to_json(F(0.5));
  CHECK(f.is_number());
  CHECK(f.get<double>() == 0.5);
}

TEST_CASE("scalar json parsing enforces backend exactness") {
  // integral JSON numbers are exact on the rational backend
  CHECK(scalar_from_json(Json(5), Backend::Rational, 0.0) == R("5"));
  CHECK(scalar_from_json(Json("3/4"), Backend::Rational, 0.0) == R("3/4"));
  CHECK(scalar_from_json(Json("-0.5"), Backend::Rational, 0.0) == R("-1/2"));
  // non-integral JSON numbers would be lossy as rationals
  CHECK_THROWS_AS((void)scalar_from_json(Json(0.5), Backend::Rational, 0.0), SpecError);
  // the float backend accepts anything numeric
  Scalar f = scalar_from_json(Json(0.5), Backend::Float, 1e-9);
  CHECK(f.backend() == Backend::Float);
  CHECK(f.as_double() == 0.5);
  CHECK(f.tolerance() == 1e-9);
  Scalar g = scalar_from_json(Json("1/8"), Backend::Float, 1e-9);
  CHECK(g.as_double() == 0.125);
  CHECK_THROWS_AS((void)scalar_from_json(Json(true), Backend::Float, 1e-9), SpecError);
}

TEST_CASE("polynomial evaluation, calculus and ring operations") {
  Polynomial p{{R("1"), R("2"), R("3")}}; // 1 + 2x + 3x^2
  CHECK(p.degree() == 2);
  CHECK(p.evaluate(R("2")) == R("17"));
  CHECK(p.evaluate(R("-1/2")) == R("3/4"));

  Polynomial d = p.derivative(); // 2 + 6x
  CHECK(d.degree() == 1);
  CHECK(d.evaluate(R("2")) == R("14"));

  Polynomial a = p.antiderivative(); // x + x^2 + x^3
  CHECK(a.evaluate(R("0")) == R("0")); // zero constant term
  CHECK(a.evaluate(R("1")) == R("3"));

  CHECK(p.integral(R("0"), R("1")) == R("3"));
  CHECK(p.integral(R("1"), R("0")) == R("-3")); // oriented
  Polynomial sq{{R("0"), R("0"), R("1")}};
  CHECK(sq.integral(R("0"), R("1")) == R("1/3"));

  CHECK(p.scaled(R("2")).evaluate(R("2")) == R("34"));
  CHECK((p + d).evaluate(R("1")) == R("14"));
  CHECK((p - p).is_zero());
  Polynomial prod = Polynomial::identity() * Polynomial::identity();
  CHECK(prod == sq);
}

TEST_CASE("polynomial normalization and predicates") {
  CHECK(Polynomial{}.degree() == -1);
  CHECK(Polynomial{}.is_zero());
  CHECK(Polynomial{{R("0"), R("0")}}.is_zero()); // trailing zeros trimmed
  CHECK(Polynomial{{R("4"), R("0")}}.degree() == 0);
  CHECK(Polynomial::constant(R("4")).is_constant());
  CHECK(Polynomial::identity().is_identity());
  CHECK(!Polynomial{{R("1"), R("1")}}.is_identity());
  CHECK(Polynomial{{R("0"), R("1")}}.is_identity());
  CHECK(Polynomial{}.integral(R("0"), R("5")) == R("0"));
}

TEST_CASE("function specs parse, evaluate and serialize canonically") {
  FunctionSpec sq = tst::fn_from(R"({"poly": ["0", "0", "1"]})");
  CHECK(sq.evaluate(R("3")) == R("9"));
  CHECK(sq.classical_derivative().evaluate(R("3")) == R("6"));
  CHECK(!sq.is_identity());
  CHECK(sq.to_json() == Json::parse(R"({"poly": ["0", "0", "1"]})"));

  FunctionSpec id = tst::fn_from(R"({"builtin": "identity"})");
  CHECK(id.is_identity());
  CHECK(id.evaluate(R("5/2")) == R("5/2"));
  CHECK(id.to_json() == Json::parse(R"({"builtin": "identity"})"));

  FunctionSpec c = tst::fn_from(R"({"builtin": {"constant": "3/2"}})");
  CHECK(c.evaluate(R("100")) == R("3/2"));
  CHECK(c.classical_derivative().is_zero());
  CHECK(c.to_json() == Json::parse(R"({"builtin": {"constant": "3/2"}})"));

  // the polynomial x is recognized as the identity
  CHECK(tst::fn_from(R"({"poly": ["0", "1"]})").is_identity());

  CHECK_THROWS_AS((void)tst::fn_from(R"({"builtin": "tan"})"), SpecError);
  CHECK_THROWS_AS((void)tst::fn_from(R"({"nope": 1})"), SpecError);
}
