#pragma once

// Quantum reference frame change C -> A:
//
//   S_AC = P_AC ∘ U(L_{p̂_A})
//
// U boosts every target ket by the momentum of the control ket it is paired
// with; P_AC then relabels A's momentum as C's momentum as seen from A.
// Both steps are index permutations on commensurate grids.
//
// A control ket of rapidity ξ on the +m² shell drives the subluminal boost
// with φ = ξ. On the −m² shell a ket (ξ, sheet κ) has velocity κ/tanh ξ and
// drives the superluminal boost with φ̃ = κξ. The overall sign of the
// superluminal branch is a convention and is carried in BoostOptions.

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sqrf/errors.hpp"
#include "sqrf/kinematics.hpp"
#include "sqrf/qstate.hpp"
#include "sqrf/shells.hpp"

namespace sqrf {

enum class OffGridPolicy { Error, Absorb };

struct BoostOptions {
  int sup_sign = 1;
  OffGridPolicy off_grid = OffGridPolicy::Error;
  bool resample = false;    // band-limited interpolation for non-commensurate images
  int resample_halfwidth = 16;
  double locate_tolerance = 1e-9;
  bool inverse = false;     // apply L⁻¹ instead of L
};

// ---------------------------------------------------------------------------
// Parity swap

/// Momentum of C as seen from A, given A's momentum as seen from C.
inline TwoMomentum parity_swap(const TwoMomentum& p_a, double m_a, double m_c) {
  if (!(m_a > 0) || !(m_c > 0) || !std::isfinite(m_a) || !std::isfinite(m_c))
    fail(ErrorCode::MassMissing, "parity swap needs m_A > 0 and m_C > 0");
  const double r = m_c / m_a;
  const TwoMomentum out{r * p_a.e, -r * p_a.p};
  if (invariant_square(p_a) >= 0) return out;
  if (p_a.p == 0) fail(ErrorCode::ZeroSpatialMomentum, "superluminal control momentum with p1 = 0");
  return p_a.p > 0 ? out : -out;
}

/// Locate a continuous chart on a system's grid.
inline std::optional<Mode> locate_mode(const SystemSpec& sys, const ModeChart& c, Sector sector, int spin,
                                       double tol = 1e-9) {
  const auto idx = sys.grid.locate(c.coordinate, tol);
  if (!idx) return std::nullopt;
  return Mode{sector, c.branch, c.sheet, spin, *idx};
}

/// Ket-level parity swap: A's mode relabelled as a mode of C.
inline Mode parity_swap_mode(const SystemSpec& a, const Mode& mode, const SystemSpec& c, double tol = 1e-9) {
  if (a.is_photon() || a.is_position()) fail(ErrorCode::MassMissing, "frame system must be massive");
  const TwoMomentum q = parity_swap(mode_momentum(a, mode), a.mass, c.mass);
  const ModeChart ch = chart_momentum(c, q);
  const auto out = locate_mode(c, ch, mode.sector, c.spin ? (mode.spin ? mode.spin : 1) : 0, tol);
  if (!out) fail(ErrorCode::OffGridOverflow, "parity-swapped momentum is not on " + c.name + "'s grid");
  return *out;
}

// ---------------------------------------------------------------------------
// Boosts driven by a momentum

/// The boost L_p whose velocity is that of momentum q on a shell of mass m.
inline Boost boost_for_momentum(const TwoMomentum& q, double m, int sup_sign = 1) {
  if (!(m > 0)) fail(ErrorCode::MassMissing, "control momentum needs a mass");
  const double s = invariant_square(q);
  if (s > 0) return boost_from_rapidity({std::atanh(q.p / q.e), BranchTag::Sub});
  if (q.p == 0) fail(ErrorCode::ZeroSpatialMomentum, "tachyonic momentum with p1 = 0");
  return boost_from_rapidity({std::atanh(q.e / q.p), sup_branch(sup_sign)});
}

/// Boost driven by a control ket (computed from the label, not the momentum).
inline Boost control_boost(const SystemSpec& sys, const Mode& mode, int sup_sign = 1) {
  if (sys.is_photon() || sys.is_position()) fail(ErrorCode::InvalidArgument, "control system must be massive");
  const double xi = sys.grid.point(mode.index);
  if (mode.branch > 0) return boost_from_rapidity({xi, BranchTag::Sub});
  return boost_from_rapidity({mode.sheet * xi, sup_branch(sup_sign)});
}

/// One contribution of a boosted ket.
struct ModeImage {
  Mode mode;
  double weight = 1.0;
};

namespace detail {

inline double sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace detail

/// Images of a target mode under boost `b`. Empty means absorbed.
inline std::vector<ModeImage> boost_mode(const SystemSpec& sys, const Mode& mode, const Boost& b,
                                         const BoostOptions& opt = {}) {
  if (sys.is_position()) fail(ErrorCode::InvalidArgument, "position systems are not momentum-boosted");
  const TwoMomentum q = apply(b, mode_momentum(sys, mode));
  const ModeChart ch = chart_momentum(sys, q);
  if (auto m = locate_mode(sys, ch, mode.sector, mode.spin, opt.locate_tolerance)) return {{*m, 1.0}};

  const auto& g = sys.grid;
  const double tol = opt.locate_tolerance;
  const bool inside = ch.coordinate >= g.front() - tol && ch.coordinate <= g.back() + tol;
  if (!inside) {
    if (opt.off_grid == OffGridPolicy::Absorb) return {};
    fail(ErrorCode::OffGridOverflow, "boosted coordinate " + std::to_string(ch.coordinate) + " leaves " +
                                         sys.name + "'s grid");
  }
  if (!opt.resample || !g.is_uniform())
    fail(ErrorCode::NonCommensurate, "boosted coordinate is between grid points of " + sys.name);

  // Band-limited interpolation onto neighbouring points, sinc tapered by a
  // Gaussian so the truncated tails don't bias low moments.
  std::vector<ModeImage> out;
  const double h = g.spacing();
  const double taper = opt.resample_halfwidth / 3.0;
  const auto centre = static_cast<long long>(std::llround((ch.coordinate - g.front()) / h));
  for (long long j = centre - opt.resample_halfwidth; j <= centre + opt.resample_halfwidth; ++j) {
    if (j < 0 || j >= static_cast<long long>(g.size())) continue;
    const auto idx = static_cast<std::size_t>(j);
    out.push_back({Mode{mode.sector, ch.branch, ch.sheet, mode.spin, idx},
                   detail::sinc((ch.coordinate - g.point(idx)) / h) *
                       std::exp(-0.5 * std::pow((ch.coordinate - g.point(idx)) / (h * taper), 2))});
  }
  return out;
}

/// U(L_{p̂_control}) on `targets`, paired ket-by-ket with the control.
inline StateVector controlled_boost(const StateVector& state, const std::string& control,
                                    const std::vector<std::string>& targets, const BoostOptions& opt = {}) {
  const std::size_t k = state.system_index(control);
  std::vector<std::size_t> t_idx;
  for (const auto& t : targets) {
    const std::size_t i = state.system_index(t);
    if (i == k) fail(ErrorCode::InvalidArgument, "control cannot be its own target");
    t_idx.push_back(i);
  }
  const auto& systems = state.systems();

  std::map<std::uint64_t, Boost> boosts;
  auto boost_of = [&](std::uint64_t code) -> const Boost& {
    auto it = boosts.find(code);
    if (it == boosts.end()) {
      Boost b = control_boost(systems[k], decode(systems[k], code), opt.sup_sign);
      if (opt.inverse) b = inverse(b);
      it = boosts.emplace(code, b).first;
    }
    return it->second;
  };

  std::vector<Amplitude> out;
  out.reserve(state.entries().size());
  for (const auto& e : state.entries()) {
    const Boost& b = boost_of(state.local_code(e.index, k));
    JointKet ket = state.decode_joint(e.index);
    std::vector<std::pair<JointKet, Complex>> partial{{ket, e.value}};
    for (std::size_t ti : t_idx) {
      const auto images = boost_mode(systems[ti], ket[ti], b, opt);
      std::vector<std::pair<JointKet, Complex>> next;
      for (const auto& [pk, amp] : partial)
        for (const auto& im : images) {
          JointKet nk = pk;
          nk[ti] = im.mode;
          next.emplace_back(std::move(nk), amp * im.weight);
        }
      partial = std::move(next);
    }
    for (const auto& [pk, amp] : partial) out.push_back({state.encode_joint(pk), amp});
  }

  if (!opt.resample) {
    // Exact relabelling must be injective.
    std::vector<std::uint64_t> idx;
    idx.reserve(out.size());
    for (const auto& a : out) idx.push_back(a.index);
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
      fail(ErrorCode::UnitarityViolation, "controlled boost mapped two kets onto one");
  }
  return StateVector(systems, std::move(out));
}

// ---------------------------------------------------------------------------
// Full transformation

struct QrfTransform {
  std::string new_frame = "A";
  std::string old_frame = "C";
  double m_c = 1.0;
  std::optional<GridSpec> c_grid;  // defaults to A's grid
  BoostOptions options;
};

inline SystemSpec old_frame_spec(const StateVector& state, const QrfTransform& t) {
  const SystemSpec& a = state.system(t.new_frame);
  return SystemSpec(t.old_frame, t.m_c, a.spin, t.c_grid ? *t.c_grid : a.grid);
}

/// S_AC: boost all non-A systems by A's momentum, then relabel A as C.
/// Output systems are the targets in input order followed by C.
inline StateVector qrf_transform(const StateVector& state, const QrfTransform& t) {
  if (state.has_system(t.old_frame))
    fail(ErrorCode::LabelCollision, "old frame '" + t.old_frame + "' must not appear in the input");
  const std::size_t a_idx = state.system_index(t.new_frame);
  std::vector<std::string> targets;
  for (const auto& s : state.systems())
    if (s.name != t.new_frame) targets.push_back(s.name);

  const StateVector boosted = controlled_boost(state, t.new_frame, targets, t.options);

  const SystemSpec& a = state.systems()[a_idx];
  const SystemSpec c = old_frame_spec(state, t);
  std::vector<SystemSpec> out_systems;
  for (std::size_t i = 0; i < state.systems().size(); ++i)
    if (i != a_idx) out_systems.push_back(state.systems()[i]);
  out_systems.push_back(c);

  StateVector shell(out_systems, {});
  std::map<std::uint64_t, Mode> swapped;
  std::vector<Amplitude> out;
  out.reserve(boosted.entries().size());
  for (const auto& e : boosted.entries()) {
    const JointKet ket = boosted.decode_joint(e.index);
    const std::uint64_t code = boosted.local_code(e.index, a_idx);
    auto it = swapped.find(code);
    if (it == swapped.end())
      it = swapped.emplace(code, parity_swap_mode(a, ket[a_idx], c, t.options.locate_tolerance)).first;
    JointKet nk;
    for (std::size_t i = 0; i < ket.size(); ++i)
      if (i != a_idx) nk.push_back(ket[i]);
    nk.push_back(it->second);
    out.push_back({shell.encode_joint(nk), e.value});
  }
  // The superluminal swap sends q and −q to the same label, so a control that
  // holds both is not mapped one-to-one.
  std::vector<std::uint64_t> idx;
  idx.reserve(out.size());
  for (const auto& x : out) idx.push_back(x.index);
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    fail(ErrorCode::UnitarityViolation, "parity swap merged two control kets of " + t.new_frame);
  return StateVector(std::move(out_systems), std::move(out));
}

// ---------------------------------------------------------------------------
// Reinterpretation

/// The mode labelling −q in the other sector. An involution on labels; needs a
/// symmetric grid for the −m² shell.
inline Mode partner_mode(const SystemSpec& sys, const Mode& m, double tol = 1e-9) {
  if (sys.is_position()) return m;
  Mode out = m;
  out.sector = flip(m.sector);
  out.sheet = -m.sheet;
  if (!sys.is_photon() && m.branch < 0) {
    const auto idx = sys.grid.locate(-sys.grid.point(m.index), tol);
    if (!idx) fail(ErrorCode::OffGridOverflow, "partner rapidity missing from " + sys.name + "'s grid");
    out.index = *idx;
  }
  return out;
}

/// Partner of a negative-energy mode; zero and positive energies stay put.
inline Mode reinterpret_mode(const SystemSpec& sys, const Mode& m, double tol = 1e-9) {
  if (sys.is_position() || !(mode_momentum(sys, m).e < 0)) return m;
  return partner_mode(sys, m, tol);
}

/// Every ket replaced by its partner in every momentum system.
inline StateVector partner_state(const StateVector& state) {
  std::vector<Amplitude> out;
  out.reserve(state.entries().size());
  for (const auto& e : state.entries()) {
    JointKet ket = state.decode_joint(e.index);
    for (std::size_t i = 0; i < ket.size(); ++i) ket[i] = partner_mode(state.systems()[i], ket[i]);
    out.push_back({state.encode_joint(ket), e.value});
  }
  return StateVector(state.systems(), std::move(out));
}

/// Relabel every negative-energy ket as the positive-energy ket of the other
/// sector. Amplitudes are carried over unchanged.
inline StateVector reinterpret_state(const StateVector& state) {
  const auto& systems = state.systems();
  std::vector<Amplitude> out;
  out.reserve(state.entries().size());
  for (const auto& e : state.entries()) {
    JointKet ket = state.decode_joint(e.index);
    for (std::size_t i = 0; i < ket.size(); ++i) ket[i] = reinterpret_mode(systems[i], ket[i]);
    out.push_back({state.encode_joint(ket), e.value});
  }
  std::vector<std::uint64_t> idx;
  for (const auto& a : out) idx.push_back(a.index);
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    fail(ErrorCode::UnitarityViolation, "reinterpretation collided with an existing positive-energy ket");
  return StateVector(systems, std::move(out));
}

// ---------------------------------------------------------------------------
// Translation baseline (position grids)

/// Periodic-grid translation frame change: B is shifted by −x_A, A becomes C at −x_A.
inline StateVector translation_qrf(const StateVector& state, const QrfTransform& t) {
  const std::size_t a_idx = state.system_index(t.new_frame);
  const auto& systems = state.systems();
  const SystemSpec& a = systems[a_idx];
  if (!a.is_position()) fail(ErrorCode::GridMismatch, "translation frames need position grids");
  for (const auto& s : systems)
    if (!s.is_position() || s.grid.size() != a.grid.size() || s.grid.spacing() != a.grid.spacing())
      fail(ErrorCode::GridMismatch, "all systems need the same periodic position grid");
  if (state.has_system(t.old_frame)) fail(ErrorCode::LabelCollision, "old frame already present");

  std::vector<SystemSpec> out_systems;
  for (std::size_t i = 0; i < systems.size(); ++i)
    if (i != a_idx) out_systems.push_back(systems[i]);
  out_systems.push_back(SystemSpec(t.old_frame, t.m_c, a.spin, a.grid));
  StateVector shell(out_systems, {});

  const auto& g = a.grid;
  const long long n = static_cast<long long>(g.size());
  auto shift = [n](std::size_t i, long long d) {
    long long j = (static_cast<long long>(i) + d) % n;
    return static_cast<std::size_t>(j < 0 ? j + n : j);
  };
  const long long half = n / 2;
  std::vector<Amplitude> out;
  for (const auto& e : state.entries()) {
    const JointKet ket = state.decode_joint(e.index);
    const long long xa = static_cast<long long>(ket[a_idx].index) - half;  // A's position in steps
    JointKet nk;
    for (std::size_t i = 0; i < ket.size(); ++i) {
      if (i == a_idx) continue;
      Mode m = ket[i];
      m.index = shift(m.index, -xa);
      nk.push_back(m);
    }
    Mode c = ket[a_idx];
    c.index = shift(static_cast<std::size_t>(half), -xa);
    nk.push_back(c);
    out.push_back({shell.encode_joint(nk), e.value});
  }
  return StateVector(std::move(out_systems), std::move(out));
}

}  // namespace sqrf
