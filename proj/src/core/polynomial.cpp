#include "core/polynomial.hpp"

namespace tscalc {

Polynomial::Polynomial(std::vector<Scalar> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial Polynomial::constant(Scalar c) { return Polynomial({std::move(c)}); }

Polynomial Polynomial::identity() {
  return Polynomial({Scalar::from_int(0), Scalar::from_int(1)});
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Scalar Polynomial::evaluate(const Scalar& x) const {
  if (coeffs_.empty()) return Scalar::from_int(0);
  Scalar acc = coeffs_.back();
  for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<Scalar> d;
  d.reserve(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    d.push_back(coeffs_[k] * Scalar::from_int(static_cast<long long>(k)));
  }
  return Polynomial(std::move(d));
}

Polynomial Polynomial::antiderivative() const {
  if (coeffs_.empty()) return Polynomial();
  std::vector<Scalar> a;
  a.reserve(coeffs_.size() + 1);
  a.push_back(Scalar::from_int(0));
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    a.push_back(coeffs_[k] / Scalar::from_int(static_cast<long long>(k + 1)));
  }
  return Polynomial(std::move(a));
}

Scalar Polynomial::integral(const Scalar& lo, const Scalar& hi) const {
  Polynomial F = antiderivative();
  return F.evaluate(hi) - F.evaluate(lo);
}

Polynomial Polynomial::scaled(const Scalar& c) const {
  std::vector<Scalar> out;
  out.reserve(coeffs_.size());
  for (const auto& ck : coeffs_) out.push_back(ck * c);
  return Polynomial(std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Scalar> out(std::max(a.coeffs_.size(), b.coeffs_.size()), Scalar::from_int(0));
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out[k] = out[k] + a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[k] = out[k] + b.coeffs_[k];
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  return a + b.scaled(Scalar::from_int(-1));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  std::vector<Scalar> out(a.coeffs_.size() + b.coeffs_.size() - 1, Scalar::from_int(0));
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      out[i + j] = out[i + j] + a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return Polynomial(std::move(out));
}

bool Polynomial::is_identity() const {
  return coeffs_.size() == 2 && coeffs_[0].is_zero() && coeffs_[1] == Scalar::from_int(1);
}

bool Polynomial::operator==(const Polynomial& o) const {
  if (coeffs_.size() != o.coeffs_.size()) return false;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] != o.coeffs_[k]) return false;
  }
  return true;
}

} // namespace tscalc
