#pragma once

// Extended Lorentz boost group in 1+1 dimensions (c = 1).
//
// Boosts act on column vectors (t, x). The subluminal branch is the usual
//
//   t' = γ (t − V x),   x' = γ (x − V t),   γ = 1/√(1 − V²)
//
// and the superluminal branch has the same shape with
//
//   γ̃ = s · sgn(V) / √(V² − 1),   s = ±1 (the conventional overall sign).
//
// In rapidity form, with tanh φ = V (subluminal) and tanh φ̃ = 1/V
// (superluminal):
//
//   Sub :       [[ cosh φ, −sinh φ ], [ −sinh φ, cosh φ ]]
//   Sup(s) : s·[[ sinh φ̃, −cosh φ̃ ], [ −cosh φ̃, sinh φ̃ ]]
//
// These are the tabulated group matrices conjugated by spatial parity
// diag(1, −1), which is what makes the rapidity and velocity
// constructors agree on (t, x) with a positive rapidity meaning a positive
// velocity.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "sqrf/errors.hpp"

namespace sqrf {

inline constexpr double kLightlikeTolerance = 1e-12;
inline constexpr double kClosureTolerance = 1e-10;

enum class BranchTag { Sub, SupPlus, SupMinus };

inline std::string_view to_string(BranchTag b) {
  switch (b) {
    case BranchTag::Sub: return "Sub";
    case BranchTag::SupPlus: return "SupPlus";
    case BranchTag::SupMinus: return "SupMinus";
  }
  return "?";
}

inline bool is_superluminal(BranchTag b) { return b != BranchTag::Sub; }

/// Overall sign s of a superluminal branch (+1 for Sub by convention).
inline int branch_sign(BranchTag b) { return b == BranchTag::SupMinus ? -1 : 1; }

inline BranchTag sup_branch(int sign_choice) {
  if (sign_choice != 1 && sign_choice != -1)
    fail(ErrorCode::InvalidArgument, "superluminal sign choice must be +1 or -1");
  return sign_choice > 0 ? BranchTag::SupPlus : BranchTag::SupMinus;
}

/// Relative velocity in units of c. Lightlike values are rejected, not clamped.
class Velocity {
 public:
  explicit Velocity(double v) : value_(v) {
    if (!std::isfinite(v)) fail(ErrorCode::NonFinite, "velocity must be finite");
    if (std::abs(std::abs(v) - 1.0) < kLightlikeTolerance)
      fail(ErrorCode::LightlikeVelocity, "|v| = 1 has no boost");
  }

  double value() const { return value_; }
  bool superluminal() const { return std::abs(value_) > 1.0; }

 private:
  double value_;
};

struct Rapidity {
  double value = 0.0;
  BranchTag branch = BranchTag::Sub;
};

struct TwoVector {
  double t = 0.0;
  double x = 0.0;
};

inline double interval(const TwoVector& e) { return e.t * e.t - e.x * e.x; }

/// Plain 2×2 real matrix, rows/cols ordered (t, x).
struct Mat2 {
  double tt = 1.0, tx = 0.0, xt = 0.0, xx = 1.0;

  double det() const { return tt * xx - tx * xt; }

  Mat2 inverse() const {
    const double d = det();
    return {xx / d, -tx / d, -xt / d, tt / d};
  }

  double max_abs() const {
    return std::max(std::max(std::abs(tt), std::abs(tx)), std::max(std::abs(xt), std::abs(xx)));
  }

  friend Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.tt * b.tt + a.tx * b.xt, a.tt * b.tx + a.tx * b.xx,
            a.xt * b.tt + a.xx * b.xt, a.xt * b.tx + a.xx * b.xx};
  }

  friend Mat2 operator*(double s, const Mat2& a) { return {s * a.tt, s * a.tx, s * a.xt, s * a.xx}; }
};

inline double max_abs_diff(const Mat2& a, const Mat2& b) {
  return std::max(std::max(std::abs(a.tt - b.tt), std::abs(a.tx - b.tx)),
                  std::max(std::abs(a.xt - b.xt), std::abs(a.xx - b.xx)));
}

/// Canonical matrix of a branch-tagged rapidity.
inline Mat2 rapidity_matrix(const Rapidity& r) {
  const double c = std::cosh(r.value);
  const double s = std::sinh(r.value);
  if (r.branch == BranchTag::Sub) return {c, -s, -s, c};
  const double sign = branch_sign(r.branch);
  return {sign * s, -sign * c, -sign * c, sign * s};
}

/// A group element: matrix plus branch tag. Immutable after construction.
class Boost {
 public:
  Boost() = default;

  const Mat2& matrix() const { return m_; }
  BranchTag branch() const { return rapidity_.branch; }
  const Rapidity& rapidity() const { return rapidity_; }
  double det() const { return m_.det(); }

  /// Boost velocity; ±inf for the superluminal element with φ̃ = 0.
  double velocity() const {
    if (rapidity_.branch == BranchTag::Sub) return std::tanh(rapidity_.value);
    const double u = std::tanh(rapidity_.value);
    if (u == 0.0) return std::copysign(std::numeric_limits<double>::infinity(), rapidity_.value);
    return 1.0 / u;
  }

  bool is_identity(double tol = 1e-12) const { return max_abs_diff(m_, Mat2{}) <= tol; }

  // Used by the constructors below and by branch inference in compose().
  static Boost from_parts(const Mat2& m, const Rapidity& r) {
    Boost b;
    b.m_ = m;
    b.rapidity_ = r;
    return b;
  }

 private:
  Mat2 m_{};
  Rapidity rapidity_{};
};

inline Boost identity_boost() { return Boost{}; }

inline Boost boost_from_rapidity(const Rapidity& r) {
  if (!std::isfinite(r.value)) fail(ErrorCode::NonFinite, "rapidity must be finite");
  return Boost::from_parts(rapidity_matrix(r), r);
}

/// Velocity-form constructor. `sign_choice` is ignored for |v| < 1.
inline Boost boost_from_velocity(Velocity v, int sign_choice = 1) {
  const double V = v.value();
  if (!v.superluminal()) {
    const double g = 1.0 / std::sqrt(1.0 - V * V);
    return Boost::from_parts({g, -g * V, -g * V, g}, {std::atanh(V), BranchTag::Sub});
  }
  const BranchTag tag = sup_branch(sign_choice);
  const double g = sign_choice * (V > 0 ? 1.0 : -1.0) / std::sqrt(V * V - 1.0);
  return Boost::from_parts({g, -g * V, -g * V, g}, {std::atanh(1.0 / V), tag});
}

inline Boost boost_from_velocity(double v, int sign_choice = 1) {
  return boost_from_velocity(Velocity(v), sign_choice);
}

/// Lorentz factor γ (subluminal) or γ̃ (superluminal, signed).
inline double lorentz_factor(Velocity v, int sign_choice = 1) {
  const double V = v.value();
  if (!v.superluminal()) return 1.0 / std::sqrt(1.0 - V * V);
  if (sign_choice != 1 && sign_choice != -1)
    fail(ErrorCode::InvalidArgument, "superluminal sign choice must be +1 or -1");
  return sign_choice * (V > 0 ? 1.0 : -1.0) / std::sqrt(V * V - 1.0);
}

/// Sign-preserving reciprocal, Ṽ = 1/V.
inline Velocity dual_velocity(Velocity v) {
  if (v.value() == 0.0) fail(ErrorCode::ZeroVelocity, "zero velocity has no dual");
  return Velocity(1.0 / v.value());
}

/// Identify which branch form `m` has. Throws ClosureViolation when none fits.
inline Boost classify_matrix(const Mat2& m, double tol = kClosureTolerance) {
  for (double e : {m.tt, m.tx, m.xt, m.xx})
    if (!std::isfinite(e)) fail(ErrorCode::NonFinite, "non-finite boost matrix");
  const double scale = std::max(1.0, m.max_abs());
  const double d = m.det();
  if (std::abs(std::abs(d) - 1.0) > tol * scale * scale)
    fail(ErrorCode::ClosureViolation, "determinant is not +-1: " + std::to_string(d));
  if (std::abs(m.tt - m.xx) > tol * scale || std::abs(m.tx - m.xt) > tol * scale)
    fail(ErrorCode::ClosureViolation, "matrix is not of symmetric boost shape");

  Rapidity r;
  if (d > 0) {
    // cosh must be positive; −B_φ (total inversion) is not one of the three forms.
    if (m.tt <= 0) fail(ErrorCode::ClosureViolation, "det +1 element with negative time-time entry");
    r = {std::asinh(-m.tx), BranchTag::Sub};
  } else if (m.tx < 0) {
    r = {std::asinh(m.tt), BranchTag::SupPlus};
  } else {
    r = {std::asinh(-m.tt), BranchTag::SupMinus};
  }
  if (max_abs_diff(rapidity_matrix(r), m) > tol * scale)
    fail(ErrorCode::ClosureViolation, "matrix does not match its branch canonical form");
  return Boost::from_parts(m, r);
}

/// `b1 ∘ b2`: apply b2 first, then b1.
inline Boost compose(const Boost& b1, const Boost& b2) {
  return classify_matrix(b1.matrix() * b2.matrix());
}

inline Boost inverse(const Boost& b) {
  const Rapidity& r = b.rapidity();
  // Every branch inverts by flipping the rapidity, i.e. V -> -V.
  return Boost::from_parts(b.matrix().inverse(), {-r.value, r.branch});
}

inline TwoVector apply(const Boost& b, const TwoVector& e) {
  const Mat2& m = b.matrix();
  return {m.tt * e.t + m.tx * e.x, m.xt * e.t + m.xx * e.x};
}

}  // namespace sqrf
