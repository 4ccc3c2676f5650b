#pragma once

// Entropy, heat and temperature seen from a boosted frame.
//
// Γ is γ for |v| < 1 and |γ̃| for |v| > 1. Using |γ̃| rather than the signed
// γ̃ is the reinterpretation step: a negative heat increment and temperature
// are read as positive ones flowing the other way.

#include <cmath>
#include <string_view>

#include "sqrf/errors.hpp"
#include "sqrf/kinematics.hpp"

namespace sqrf {

enum class Approach { EinsteinPlanck, Ott, Landsberg, CavalleriSalgarelli };

inline std::string_view to_string(Approach a) {
  switch (a) {
    case Approach::EinsteinPlanck: return "EinsteinPlanck";
    case Approach::Ott: return "Ott";
    case Approach::Landsberg: return "Landsberg";
    case Approach::CavalleriSalgarelli: return "CavalleriSalgarelli";
  }
  return "?";
}

inline constexpr Approach kAllApproaches[] = {Approach::EinsteinPlanck, Approach::Ott, Approach::Landsberg,
                                              Approach::CavalleriSalgarelli};

struct ThermoState {
  double S = 0.0;
  double dQ = 0.0;
  double T = 1.0;
};

struct ThermoResult {
  ThermoState state;
  double gamma = 1.0;            // Γ
  double entropy_energy_ratio = 1.0;  // ∂S/∂E scaling (Landsberg bookkeeping)
  bool rest_frame_only = false;  // CavalleriSalgarelli: transformation not defined away from rest
  bool unspecified = false;      // Landsberg with a superluminal boost
};

/// Γ = γ (subluminal) or |γ̃| (superluminal).
inline double thermo_gamma(Velocity v) { return std::abs(lorentz_factor(v, 1)); }

inline ThermoResult transform_thermo(const ThermoState& s, Velocity v, Approach a) {
  if (!std::isfinite(s.T) || !std::isfinite(s.S) || !std::isfinite(s.dQ))
    fail(ErrorCode::NonFinite, "thermodynamic state must be finite");
  if (!(s.T > 0)) fail(ErrorCode::NonPositiveTemperature, "temperature must be positive");
  const double g = thermo_gamma(v);
  ThermoResult r;
  r.gamma = g;
  r.state = s;
  switch (a) {
    case Approach::EinsteinPlanck:
      r.state.dQ = s.dQ / g;
      r.state.T = s.T / g;
      break;
    case Approach::Ott:
      r.state.dQ = s.dQ * g;
      r.state.T = s.T * g;
      break;
    case Approach::Landsberg:
      r.entropy_energy_ratio = g;
      r.unspecified = v.superluminal();
      break;
    case Approach::CavalleriSalgarelli:
      r.rest_frame_only = true;
      break;
  }
  return r;
}

}  // namespace sqrf
