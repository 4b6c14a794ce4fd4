#include "core/time_scale.hpp"

#include "core/errors.hpp"
#include "core/serde.hpp"

#include <algorithm>
#include <cmath>

namespace tscalc {

namespace {

constexpr double kDefaultFloatTolerance = 1e-9;

long long read_int(const Json& v, const char* what) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_string()) {
    auto r = parse_rational(v.get<std::string>());
    if (r && denominator(*r) == 1) return static_cast<long long>(numerator(*r));
  }
  throw SpecError(std::string("expected an integer for ") + what);
}

} // namespace

TimeScale TimeScale::from_spec_json(const Json& doc) {
  if (!doc.is_object()) throw SpecError("scale spec must be a JSON object");

  TimeScale ts;
  std::string backend = doc.value("backend", std::string("rational"));
  if (backend == "rational") {
    ts.backend_ = Backend::Rational;
    ts.tolerance_ = 0.0;
    if (doc.contains("tolerance")) throw SpecError("rational backend takes no tolerance");
  } else if (backend == "float") {
    ts.backend_ = Backend::Float;
    ts.tolerance_ = doc.value("tolerance", kDefaultFloatTolerance);
    if (!(ts.tolerance_ > 0.0)) throw SpecError("float backend tolerance must be > 0");
  } else {
    throw SpecError("unknown backend \"" + backend + "\"");
  }

  if (!doc.contains("components") || !doc.at("components").is_array() ||
      doc.at("components").empty()) {
    throw SpecError("scale spec needs a non-empty \"components\" array");
  }
  const auto& comps = doc.at("components");

  auto num = [&](const Json& v) { return scalar_from_json(v, ts.backend_, ts.tolerance_); };

  std::vector<Component> raw;
  for (const auto& entry : comps) {
    if (!entry.is_object() || entry.size() != 1) {
      throw SpecError("each component must be a single-key object");
    }
    if (entry.contains("interval")) {
      const auto& iv = entry.at("interval");
      if (!iv.is_array() || iv.size() != 2) throw SpecError("\"interval\" must be [lo, hi]");
      Scalar lo = num(iv[0]);
      Scalar hi = num(iv[1]);
      if (!(lo < hi)) throw SpecError("interval needs lo < hi");
      raw.push_back({lo, hi});
    } else if (entry.contains("point")) {
      Scalar x = num(entry.at("point"));
      raw.push_back({x, x});
    } else if (entry.contains("integers")) {
      const auto& g = entry.at("integers");
      long long a = read_int(g.at("a"), "integers.a");
      long long b = read_int(g.at("b"), "integers.b");
      if (a > b) throw SpecError("integers needs a <= b");
      if (b - a > 100000) throw SpecError("integers slice too large");
      for (long long k = a; k <= b; ++k) {
        Scalar x = ts.backend_ == Backend::Rational
                       ? Scalar::from_int(k)
                       : Scalar::from_double(static_cast<double>(k), ts.tolerance_);
        raw.push_back({x, x});
      }
    } else if (entry.contains("qlattice")) {
      const auto& g = entry.at("qlattice");
      Scalar q = num(g.at("q"));
      if (!(q > Scalar::from_int(1))) throw SpecError("qlattice needs q > 1");
      long long m = read_int(g.at("m"), "qlattice.m");
      long long n = read_int(g.at("n"), "qlattice.n");
      if (m > n) throw SpecError("qlattice needs m <= n");
      if (n - m > 4096) throw SpecError("qlattice span too large");
      for (long long k = m; k <= n; ++k) {
        Scalar x;
        if (ts.backend_ == Backend::Rational) {
          x = Scalar::from_rational(rational_pow(q.rational_value(), static_cast<long>(k)));
        } else {
          x = Scalar::from_double(std::pow(q.as_double(), static_cast<double>(k)), ts.tolerance_);
        }
        raw.push_back({x, x});
      }
    } else {
      throw SpecError("unknown component kind: " + entry.dump());
    }
  }

  // canonical-family provenance: exactly one shorthand component
  if (comps.size() == 1) {
    const auto& only = comps[0];
    if (only.contains("integers")) {
      ts.family_ = FamilyKind::Integers;
      ts.family_spec_ = only;
    } else if (only.contains("qlattice")) {
      ts.family_ = FamilyKind::QLattice;
      ts.family_q_ = num(only.at("qlattice").at("q"));
      ts.family_spec_ = only;
    } else if (only.contains("interval")) {
      ts.family_ = FamilyKind::Reals;
      ts.family_spec_ = only;
    }
  }

  std::sort(raw.begin(), raw.end(), [](const Component& a, const Component& b) {
    int c = compare(a.lo, b.lo);
    if (c != 0) return c < 0;
    return compare(a.hi, b.hi) < 0;
  });

  // merge touching pieces, reject interior overlap
  for (const auto& c : raw) {
    if (ts.comps_.empty()) {
      ts.comps_.push_back(c);
      continue;
    }
    Component& last = ts.comps_.back();
    int rel = compare(c.lo, last.hi);
    if (rel > 0) {
      ts.comps_.push_back(c);
    } else if (rel == 0) {
      // touching: dedupe points, absorb boundary points, join intervals
      if (compare(c.hi, last.hi) > 0) last.hi = c.hi;
    } else {
      if (c.is_point() && !last.is_point()) {
        throw SpecError("overlapping components: point " + c.lo.to_string() +
                        " lies inside an interval");
      }
      throw SpecError("overlapping components near " + c.lo.to_string());
    }
  }

  return ts;
}

Json TimeScale::to_spec_json() const {
  Json out = Json::object();
  Json arr = Json::array();
  if (family_ != FamilyKind::None && !family_spec_.is_null()) {
    arr.push_back(family_spec_);
  } else {
    for (const auto& c : comps_) {
      if (c.is_point()) {
        arr.push_back(Json{{"point", scalar_to_json(c.lo)}});
      } else {
        arr.push_back(Json{{"interval", Json::array({scalar_to_json(c.lo), scalar_to_json(c.hi)})}});
      }
    }
  }
  out["components"] = arr;
  out["backend"] = backend_ == Backend::Rational ? "rational" : "float";
  if (backend_ == Backend::Float) out["tolerance"] = tolerance_;
  return out;
}

const Scalar& TimeScale::family_q() const {
  if (!family_q_) throw DomainError("scale is not a q-lattice family");
  return *family_q_;
}

int TimeScale::locate(const Scalar& x) const {
  // first component with hi >= x (tolerance-padded on the float backend)
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    const auto& c = comps_[i];
    if (backend_ == Backend::Rational) {
      if (x < c.lo) return -1;
      if (x <= c.hi) return static_cast<int>(i);
    } else {
      double v = x.as_double();
      if (v < c.lo.as_double() - tolerance_) return -1;
      if (v <= c.hi.as_double() + tolerance_) return static_cast<int>(i);
    }
  }
  return -1;
}

Scalar TimeScale::snap(const Scalar& x, int comp) const {
  const auto& c = comps_[comp];
  if (backend_ == Backend::Rational) return x;
  double v = x.as_double();
  if (std::fabs(v - c.lo.as_double()) <= tolerance_) return c.lo;
  if (std::fabs(v - c.hi.as_double()) <= tolerance_) return c.hi;
  return x;
}

bool TimeScale::contains(const Scalar& x) const { return locate(x) >= 0; }

ScalePoint TimeScale::point(const Scalar& x) const {
  int i = locate(x);
  if (i < 0) throw DomainError("point " + x.to_string() + " is not in the scale");
  return ScalePoint(this, snap(x, i));
}

Scalar TimeScale::sigma(const ScalePoint& t) const {
  int i = locate(t.value());
  const auto& c = comps_[i];
  if (!c.is_point() && t.value() < c.hi) return t.value(); // right-dense inside an interval
  if (i + 1 < static_cast<int>(comps_.size())) return comps_[i + 1].lo;
  return t.value(); // sigma(max) = max
}

Scalar TimeScale::rho(const ScalePoint& t) const {
  int i = locate(t.value());
  const auto& c = comps_[i];
  if (!c.is_point() && t.value() > c.lo) return t.value();
  if (i > 0) return comps_[i - 1].hi;
  return t.value(); // rho(min) = min
}

Classification TimeScale::classify(const ScalePoint& t) const {
  Classification cls;
  cls.right_scattered = sigma(t) > t.value();
  cls.left_scattered = rho(t) < t.value();
  cls.in_kappa = !(t.value() == max() && cls.left_scattered);
  return cls;
}

std::vector<TimeScale::Piece> TimeScale::decompose(const Scalar& a, const Scalar& b) const {
  if (!(a < b)) throw DomainError("decompose needs a < b");
  int first = locate(a);
  int last = locate(b);
  if (first < 0 || last < 0) throw DomainError("decompose endpoints must be scale members");

  std::vector<Piece> pieces;
  for (int i = first; i <= last; ++i) {
    const auto& c = comps_[i];
    if (c.is_point()) {
      const Scalar& x = c.lo;
      if (x >= a && x < b) {
        pieces.push_back(ScatteredPoint{x, comps_[i + 1].lo - x});
      }
      continue;
    }
    Scalar lo = tscalc::max(c.lo, a);
    Scalar hi = tscalc::min(c.hi, b);
    if (lo < hi) pieces.push_back(DenseRun{lo, hi});
    if (c.hi >= a && c.hi < b) {
      pieces.push_back(ScatteredPoint{c.hi, comps_[i + 1].lo - c.hi});
    }
  }
  return pieces;
}

std::vector<Scalar> TimeScale::members_in(const Scalar& lo, const Scalar& hi,
                                          int interior_samples) const {
  std::vector<Scalar> out;
  for (const auto& c : comps_) {
    if (c.hi < lo || c.lo > hi) continue;
    if (c.is_point()) {
      if (c.lo >= lo && c.lo <= hi) out.push_back(c.lo);
      continue;
    }
    Scalar s = tscalc::max(c.lo, lo);
    Scalar e = tscalc::min(c.hi, hi);
    if (s > e) continue;
    out.push_back(s);
    if (s < e) {
      out.push_back(e);
      for (int k = 1; k <= interior_samples; ++k) {
        Scalar frac = Scalar::from_rational(Rational(k, interior_samples + 1));
        out.push_back(s + (e - s) * frac);
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Scalar& x, const Scalar& y) { return x == y; }),
            out.end());
  return out;
}

bool TimeScale::operator==(const TimeScale& o) const {
  if (backend_ != o.backend_ || comps_.size() != o.comps_.size()) return false;
  for (std::size_t i = 0; i < comps_.size(); ++i) {
    if (comps_[i].lo != o.comps_[i].lo || comps_[i].hi != o.comps_[i].hi) return false;
  }
  return true;
}

} // namespace tscalc
