#pragma once

// On-shell 2-momentum algebra: classes I/II/III, boosted energies, the
// energy-sign table for initially subluminal particles, and the
// (E, p) -> (−E, −p) reinterpretation with its incoming/outgoing flip.

#include <cmath>
#include <limits>
#include <string_view>
#include <utility>

#include "sqrf/errors.hpp"
#include "sqrf/kinematics.hpp"

namespace sqrf {

inline constexpr double kShellTolerance = 1e-9;
inline constexpr double kEnergyBoundaryTolerance = 1e-12;

struct TwoMomentum {
  double e = 0.0;  // energy p⁰
  double p = 0.0;  // spatial momentum p¹

  friend bool operator==(const TwoMomentum&, const TwoMomentum&) = default;
};

inline TwoMomentum operator-(const TwoMomentum& q) { return {-q.e, -q.p}; }

enum class ShellClass { I_Massive, II_Lightlike, III_Tachyonic };

inline std::string_view to_string(ShellClass c) {
  switch (c) {
    case ShellClass::I_Massive: return "I_Massive";
    case ShellClass::II_Lightlike: return "II_Lightlike";
    case ShellClass::III_Tachyonic: return "III_Tachyonic";
  }
  return "?";
}

enum class Sector { Incoming, Outgoing };

inline std::string_view to_string(Sector s) { return s == Sector::Incoming ? "Incoming" : "Outgoing"; }
inline Sector flip(Sector s) { return s == Sector::Incoming ? Sector::Outgoing : Sector::Incoming; }

/// p² = +m² (shell_sign +1) or p² = −m² (shell_sign −1); m = 0 is the light cone.
struct MassShell {
  double m = 1.0;
  int shell_sign = 1;

  MassShell() = default;
  MassShell(double mass, int sign) : m(mass), shell_sign(sign) {
    if (!std::isfinite(mass) || mass < 0) fail(ErrorCode::InvalidArgument, "shell mass must be finite and >= 0");
    if (sign != 1 && sign != -1) fail(ErrorCode::InvalidArgument, "shell sign must be +1 or -1");
  }

  static MassShell massive(double mass) { return {mass, 1}; }
  static MassShell tachyonic(double mass) { return {mass, -1}; }
  static MassShell photon() { return {0.0, 1}; }

  bool is_photon() const { return m == 0.0; }

  ShellClass shell_class() const {
    if (is_photon()) return ShellClass::II_Lightlike;
    return shell_sign > 0 ? ShellClass::I_Massive : ShellClass::III_Tachyonic;
  }
};

inline double invariant_square(const TwoMomentum& q) { return q.e * q.e - q.p * q.p; }

inline ShellClass classify(const TwoMomentum& q, double tol = kShellTolerance) {
  if (!(tol > 0)) fail(ErrorCode::InvalidArgument, "classification tolerance must be positive");
  const double s = invariant_square(q);
  if (std::abs(s) <= tol) return ShellClass::II_Lightlike;
  return s > 0 ? ShellClass::I_Massive : ShellClass::III_Tachyonic;
}

/// Rapidity parameterisation of a massive or tachyonic shell point.
/// Tachyons: Outgoing -> (m sinh ξ, m cosh ξ), Incoming -> (m sinh ξ, −m cosh ξ).
inline TwoMomentum momentum_from_rapidity(const MassShell& shell, double xi, Sector sector) {
  if (shell.is_photon()) fail(ErrorCode::PhotonShell, "photons are parameterised by signed energy");
  const double m = shell.m;
  if (shell.shell_sign > 0) return {m * std::cosh(xi), m * std::sinh(xi)};
  const double side = sector == Sector::Outgoing ? 1.0 : -1.0;
  return {m * std::sinh(xi), side * m * std::cosh(xi)};
}

/// Photon momentum from a signed energy, travelling in `direction` (±1).
inline TwoMomentum photon_momentum(double signed_energy, int direction = 1) {
  return {signed_energy, direction * signed_energy};
}

inline TwoMomentum apply(const Boost& b, const TwoMomentum& q) {
  const TwoVector v = apply(b, TwoVector{q.e, q.p});
  return {v.t, v.x};
}

/// E' = γ(E − Vp), with γ̃ on the superluminal branch.
inline double boosted_energy(double e, double p, Velocity v, int sign_choice = 1) {
  return lorentz_factor(v, sign_choice) * (e - v.value() * p);
}

enum class EnergySign { Positive, Negative };

inline std::string_view to_string(EnergySign s) { return s == EnergySign::Positive ? "Positive" : "Negative"; }

/// Closed-form energy sign for a particle with e = √(m² + p²).
///
/// The tabulated conditions take p > 0. For p < 0 use parity: p -> −p and
/// v -> −v, which also flips the sign of γ̃ (it carries sgn v), so the
/// superluminal answer is inverted. Positive energy under a superluminal
/// boost with s = +1 requires √(m²/p² + 1) > Ṽ, which never holds for Ṽ < 0.
/// s = −1 flips the answer.
inline EnergySign energy_sign_predicate(double m, double p, Velocity v, int sign_choice = 1) {
  if (!(m >= 0) || !std::isfinite(m) || !std::isfinite(p))
    fail(ErrorCode::InvalidArgument, "need finite m >= 0 and finite p");
  if (m == 0 && p == 0) fail(ErrorCode::BoundaryCase, "zero momentum photon has no energy sign");
  if (!v.superluminal()) return EnergySign::Positive;
  if (sign_choice != 1 && sign_choice != -1)
    fail(ErrorCode::InvalidArgument, "superluminal sign choice must be +1 or -1");

  const double V = p >= 0 ? v.value() : -v.value();
  const double ratio = p == 0 ? std::numeric_limits<double>::infinity() : std::sqrt(m * m / (p * p) + 1.0);
  bool positive;
  if (V > 0) {
    if (std::abs(ratio - V) < kEnergyBoundaryTolerance)
      fail(ErrorCode::BoundaryCase, "boosted energy vanishes at sqrt(m^2/p^2+1) = V");
    positive = ratio > V;
  } else {
    positive = false;
  }
  if (p < 0) positive = !positive;
  if (sign_choice < 0) positive = !positive;
  return positive ? EnergySign::Positive : EnergySign::Negative;
}

/// (E, p) -> (−E, −p) together with the sector flip. An involution.
inline std::pair<TwoMomentum, Sector> reinterpret(const TwoMomentum& q, Sector s) {
  return {-q, flip(s)};
}

}  // namespace sqrf
