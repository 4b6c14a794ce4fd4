#include "core/delta_calculus.hpp"

#include "core/errors.hpp"

#include <map>
#include <utility>

namespace tscalc {

Scalar delta_derivative(const TimeScale& scale, const FunctionSpec& f, const ScalePoint& t) {
  Classification cls = scale.classify(t);
  if (!cls.in_kappa) {
    throw DomainError("delta derivative undefined at a left-scattered maximum");
  }
  if (cls.right_scattered) {
    Scalar step = scale.mu(t);
    return (f.evaluate(scale.sigma(t)) - f.evaluate(t.value())) / step;
  }
  return f.classical_derivative().evaluate(t.value());
}

namespace {

Scalar integrate_forward(const TimeScale& scale, const Integrand& g, const Scalar& a,
                         const Scalar& b) {
  Scalar acc = Scalar::from_int(0);
  for (const auto& piece : scale.decompose(a, b)) {
    if (const auto* sp = std::get_if<TimeScale::ScatteredPoint>(&piece)) {
      acc += g.value_at(sp->t) * sp->mu;
    } else {
      const auto& run = std::get<TimeScale::DenseRun>(piece);
      acc += g.dense_integral(run.lo, run.hi);
    }
  }
  return acc;
}

} // namespace

Scalar delta_integral(const TimeScale& scale, const Integrand& g, const ScalePoint& a,
                      const ScalePoint& b) {
  int rel = compare(a.value(), b.value());
  if (rel == 0) return Scalar::from_int(0);
  if (rel < 0) return integrate_forward(scale, g, a.value(), b.value());
  return -integrate_forward(scale, g, b.value(), a.value());
}

namespace {

/// Evaluates h_k(., s) on one scale with a memo shared across the recursion.
class HkEvaluator {
public:
  HkEvaluator(const TimeScale& scale, Scalar s) : scale_(scale), s_(std::move(s)) {}

  Scalar eval(unsigned k, const Scalar& t) {
    if (k == 0) return Scalar::from_int(1);
    auto key = std::make_pair(k, t);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    HkIntegrand g(*this, k - 1);
    Scalar v = delta_integral(scale_, g, scale_.point(s_), scale_.point(t));
    memo_.emplace(std::move(key), v);
    return v;
  }

private:
  // Integrand tau -> h_{k}(tau, s). The dense integral uses the segment
  // Taylor form: within a dense run starting at c,
  // h_k(x, s) = sum_i h_{k-i}(c, s) (x - c)^i / i!.
  class HkIntegrand final : public Integrand {
  public:
    HkIntegrand(HkEvaluator& owner, unsigned k) : owner_(owner), k_(k) {}
    Scalar value_at(const Scalar& t) const override { return owner_.eval(k_, t); }
    Scalar dense_integral(const Scalar& lo, const Scalar& hi) const override {
      Scalar width = hi - lo;
      Scalar term = width; // (hi-lo)^(i+1) / (i+1)! for i = 0
      Scalar acc = Scalar::from_int(0);
      for (unsigned i = 0; i <= k_; ++i) {
        acc += owner_.eval(k_ - i, lo) * term;
        term = term * width / Scalar::from_int(static_cast<long long>(i + 2));
      }
      return acc;
    }

  private:
    HkEvaluator& owner_;
    unsigned k_;
  };

  struct KeyLess {
    bool operator()(const std::pair<unsigned, Scalar>& a,
                    const std::pair<unsigned, Scalar>& b) const {
      if (a.first != b.first) return a.first < b.first;
      return compare(a.second, b.second) < 0;
    }
  };

  const TimeScale& scale_;
  Scalar s_;
  std::map<std::pair<unsigned, Scalar>, Scalar, KeyLess> memo_;
};

} // namespace

HkValue monomial_hk(const TimeScale& scale, unsigned k, const ScalePoint& t,
                    const ScalePoint& s) {
  HkEvaluator ev(scale, s.value());
  Scalar v = ev.eval(k, t.value());
  return HkValue{k, t.value(), s.value(), v, HkMethod::Recursive};
}

Scalar h2_closed_form(FamilyKind family, const Scalar& q, const Scalar& t, const Scalar& s) {
  Scalar one = Scalar::from_int(1);
  Scalar two = Scalar::from_int(2);
  switch (family) {
    case FamilyKind::Reals:
      return (t - s) * (t - s) / two;
    case FamilyKind::Integers:
      return (t - s) * (t - s - one) / two;
    case FamilyKind::QLattice:
      if (!(q > one)) throw DomainError("q-lattice closed form needs q > 1");
      return (t - s) * (t - q * s) / (one + q);
    case FamilyKind::None:
      break;
  }
  throw DomainError("no closed form for this scale family");
}

} // namespace tscalc
