#pragma once

#include "core/json.hpp"
#include "core/scalar.hpp"

#include <optional>
#include <variant>
#include <vector>

namespace tscalc {

/// How a point sits inside its scale.
struct Classification {
  bool right_scattered = false;
  bool left_scattered = false;
  /// Member of the scale with its left-scattered maximum removed; the delta
  /// derivative is defined exactly there.
  bool in_kappa = true;

  bool is_isolated() const { return right_scattered && left_scattered; }
  bool is_dense() const { return !right_scattered && !left_scattered; }
};

enum class FamilyKind { None, Reals, Integers, QLattice };

class TimeScale;

/// A membership-checked point of a specific scale. Obtained via
/// TimeScale::point, which validates (and, on the float backend, snaps to the
/// stored component value within tolerance).
class ScalePoint {
public:
  const Scalar& value() const { return value_; }
  const TimeScale& scale() const { return *scale_; }

private:
  friend class TimeScale;
  ScalePoint(const TimeScale* s, Scalar v) : scale_(s), value_(std::move(v)) {}
  const TimeScale* scale_;
  Scalar value_;
};

/// A nonempty closed subset of the reals: finitely many closed intervals and
/// isolated points, normalized to pairwise-disjoint, strictly increasing
/// components.
class TimeScale {
public:
  struct Component {
    Scalar lo;
    Scalar hi; // lo == hi for an isolated point
    bool is_point() const { return lo == hi; }
  };

  /// {"components": [...], "backend": "rational"|"float", "tolerance": t?}
  /// Component forms: {"interval": [lo, hi]}, {"point": x},
  /// {"integers": {"a": .., "b": ..}}, {"qlattice": {"q": "p/q", "m": .., "n": ..}}.
  static TimeScale from_spec_json(const Json& doc);
  Json to_spec_json() const;

  Backend backend() const { return backend_; }
  /// Membership tolerance; 0 on the rational backend.
  double tolerance() const { return tolerance_; }
  FamilyKind family() const { return family_; }
  /// Ratio of the q-lattice family; requires family() == QLattice.
  const Scalar& family_q() const;

  const std::vector<Component>& components() const { return comps_; }
  const Scalar& min() const { return comps_.front().lo; }
  const Scalar& max() const { return comps_.back().hi; }

  bool contains(const Scalar& x) const;
  /// Validates membership; throws DomainError for outsiders.
  ScalePoint point(const Scalar& x) const;

  Scalar sigma(const ScalePoint& t) const; // forward jump, clamped at max
  Scalar rho(const ScalePoint& t) const;   // backward jump, clamped at min
  Scalar mu(const ScalePoint& t) const { return sigma(t) - t.value(); }
  Scalar nu(const ScalePoint& t) const { return t.value() - rho(t); }
  Classification classify(const ScalePoint& t) const;

  struct ScatteredPoint {
    Scalar t;
    Scalar mu; // sigma(t) - t, strictly positive
  };
  struct DenseRun {
    Scalar lo;
    Scalar hi; // lo < hi, [lo, hi] contained in one interval component
  };
  using Piece = std::variant<ScatteredPoint, DenseRun>;

  /// Splits [a, b] ∩ scale for a < b (members) into right-scattered points of
  /// [a, b) with their graininess and maximal dense runs, in increasing order.
  std::vector<Piece> decompose(const Scalar& a, const Scalar& b) const;

  /// Scale members inside [lo, hi]: every isolated point and interval
  /// endpoint, plus `interior_samples` evenly spaced interior points per
  /// clipped interval. Used by generators; sorted, deduplicated.
  std::vector<Scalar> members_in(const Scalar& lo, const Scalar& hi, int interior_samples) const;

  bool operator==(const TimeScale& o) const;

private:
  TimeScale() = default;

  int locate(const Scalar& x) const; // component index or -1
  Scalar snap(const Scalar& x, int comp) const;

  std::vector<Component> comps_;
  Backend backend_ = Backend::Rational;
  double tolerance_ = 0.0;
  FamilyKind family_ = FamilyKind::None;
  std::optional<Scalar> family_q_;
  Json family_spec_; // original shorthand component, for canonical serialization
};

} // namespace tscalc
