#pragma once

// Multi-system states over the enlarged (incoming/outgoing) momentum basis.
//
// Each system owns a local label space
//
//   sector × branch × sheet × spin × grid index
//
// where, for a system of mass m on a rapidity grid,
//
//   branch +1 (p² = +m²):  q = sheet · m (cosh ξ, sinh ξ)   sheet = energy sign
//   branch −1 (p² = −m²):  q = m (sinh ξ, sheet · cosh ξ)   sheet = momentum sign
//
// and for a photon on a log|E| grid, q = (E, branch·E) with E = sheet·e^u.
// Position systems use only the grid index.
//
// Joint labels are ordered lexicographically by (system declaration order,
// sector, branch, sheet, spin, index); the flat index of a joint label is the
// mixed-radix number in that order. Amplitudes are stored sparsely and are
// coefficients in the orthonormal discrete basis, i.e. a wavefunction sample
// ψ(ξ_i) enters as √w_i · ψ(ξ_i). Inner products and norms are therefore
// plain sums over coefficients.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sqrf/errors.hpp"
#include "sqrf/grid.hpp"
#include "sqrf/shells.hpp"

namespace sqrf {

using Complex = std::complex<double>;

inline constexpr int kBasisOrderVersion = 1;
inline constexpr double kNormTolerance = 1e-10;

struct SystemSpec {
  std::string name;
  double mass = 1.0;  // 0 for photons, ignored for position systems
  bool spin = false;
  GridSpec grid;

  SystemSpec() = default;
  SystemSpec(std::string n, double m, bool s, GridSpec g)
      : name(std::move(n)), mass(m), spin(s), grid(std::move(g)) {
    validate();
  }

  void validate() const {
    if (name.empty()) fail(ErrorCode::InvalidArgument, "system name must not be empty");
    if (!std::isfinite(mass) || mass < 0) fail(ErrorCode::InvalidArgument, "system mass must be finite and >= 0");
    if (grid.kind() == GridKind::Rapidity && mass == 0)
      fail(ErrorCode::MassMissing, "system '" + name + "' on a rapidity grid needs a mass");
    if (grid.kind() == GridKind::LogEnergy && mass != 0)
      fail(ErrorCode::InvalidArgument, "system '" + name + "' on a log-energy grid must be massless");
  }

  bool is_photon() const { return grid.kind() == GridKind::LogEnergy; }
  bool is_position() const { return grid.kind() == GridKind::Position; }
  std::uint64_t spin_count() const { return spin ? 2 : 1; }
  std::uint64_t local_dim() const { return 8 * spin_count() * grid.size(); }

  friend bool operator==(const SystemSpec& a, const SystemSpec& b) {
    return a.name == b.name && a.mass == b.mass && a.spin == b.spin && a.grid == b.grid;
  }
};

/// One single-system label.
struct Mode {
  Sector sector = Sector::Outgoing;
  int branch = 1;
  int sheet = 1;
  int spin = 0;  // ±1 for spin-carrying systems, 0 otherwise
  std::size_t index = 0;

  friend bool operator==(const Mode&, const Mode&) = default;
};

inline std::uint64_t encode(const SystemSpec& sys, const Mode& m) {
  if (m.index >= sys.grid.size()) fail(ErrorCode::InvalidArgument, "grid index out of range for " + sys.name);
  if (m.branch != 1 && m.branch != -1) fail(ErrorCode::InvalidArgument, "branch must be +-1");
  if (m.sheet != 1 && m.sheet != -1) fail(ErrorCode::InvalidArgument, "sheet must be +-1");
  if (sys.spin != (m.spin != 0)) fail(ErrorCode::InvalidArgument, "spin label must be present iff system carries spin");
  if (sys.spin && m.spin != 1 && m.spin != -1) fail(ErrorCode::InvalidArgument, "spin must be +-1");
  const std::uint64_t sec = m.sector == Sector::Incoming ? 0 : 1;
  const std::uint64_t br = m.branch > 0 ? 0 : 1;
  const std::uint64_t sh = m.sheet > 0 ? 0 : 1;
  const std::uint64_t sp = m.spin < 0 ? 1 : 0;
  return (((sec * 2 + br) * 2 + sh) * sys.spin_count() + sp) * sys.grid.size() + m.index;
}

inline Mode decode(const SystemSpec& sys, std::uint64_t code) {
  Mode m;
  const std::uint64_t n = sys.grid.size();
  m.index = static_cast<std::size_t>(code % n);
  code /= n;
  const std::uint64_t sp = code % sys.spin_count();
  code /= sys.spin_count();
  m.spin = sys.spin ? (sp == 0 ? 1 : -1) : 0;
  m.sheet = (code % 2 == 0) ? 1 : -1;
  code /= 2;
  m.branch = (code % 2 == 0) ? 1 : -1;
  code /= 2;
  m.sector = code == 0 ? Sector::Incoming : Sector::Outgoing;
  return m;
}

/// 2-momentum carried by a mode.
inline TwoMomentum mode_momentum(const SystemSpec& sys, const Mode& m) {
  const double c = sys.grid.point(m.index);
  if (sys.is_position()) fail(ErrorCode::InvalidArgument, "position modes carry no momentum label");
  if (sys.is_photon()) {
    const double e = m.sheet * std::exp(c);
    return {e, m.branch * e};
  }
  if (m.branch > 0) return {m.sheet * sys.mass * std::cosh(c), m.sheet * sys.mass * std::sinh(c)};
  return {sys.mass * std::sinh(c), m.sheet * sys.mass * std::cosh(c)};
}

/// Continuous chart of a momentum on a system's shells.
struct ModeChart {
  int branch = 1;
  int sheet = 1;
  double coordinate = 0.0;
};

inline ModeChart chart_momentum(const SystemSpec& sys, const TwoMomentum& q, double rel_tol = 1e-8) {
  const double s = invariant_square(q);
  const double scale = std::max({q.e * q.e, q.p * q.p, sys.mass * sys.mass});
  if (sys.is_position()) fail(ErrorCode::InvalidArgument, "position systems have no momentum chart");
  if (sys.is_photon()) {
    if (std::abs(s) > rel_tol * scale || q.e == 0)
      fail(ErrorCode::OffShell, "momentum is not on the light cone of " + sys.name);
    const int sheet = q.e > 0 ? 1 : -1;
    const int dir = (q.p > 0) == (q.e > 0) ? 1 : -1;
    return {dir, sheet, std::log(std::abs(q.e))};
  }
  const double m = sys.mass;
  const double m2 = m * m;
  if (std::abs(s - m2) <= rel_tol * scale) {
    const int sheet = q.e > 0 ? 1 : -1;
    return {1, sheet, std::asinh(sheet * q.p / m)};
  }
  if (std::abs(s + m2) <= rel_tol * scale) {
    const int sheet = q.p > 0 ? 1 : -1;
    return {-1, sheet, std::asinh(q.e / m)};
  }
  fail(ErrorCode::OffShell, "momentum is on neither shell of " + sys.name);
}

struct Amplitude {
  std::uint64_t index = 0;
  Complex value{};
};

using JointKet = std::vector<Mode>;

/// Sparse normalised-or-not state over a tensor product of labelled systems.
class StateVector {
 public:
  StateVector() = default;

  StateVector(std::vector<SystemSpec> systems, std::vector<Amplitude> entries)
      : systems_(std::move(systems)), entries_(std::move(entries)) {
    build_strides();
    for (const auto& e : entries_)
      if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag()))
        fail(ErrorCode::NonFinite, "amplitude must be finite");
    canonicalize();
  }

  static StateVector from_kets(std::vector<SystemSpec> systems, const std::vector<std::pair<JointKet, Complex>>& kets) {
    StateVector s(std::move(systems), {});
    std::vector<Amplitude> entries;
    entries.reserve(kets.size());
    for (const auto& [ket, amp] : kets) entries.push_back({s.encode_joint(ket), amp});
    return StateVector(s.systems_, std::move(entries));
  }

  const std::vector<SystemSpec>& systems() const { return systems_; }
  const std::vector<Amplitude>& entries() const { return entries_; }
  std::uint64_t dimension() const { return systems_.empty() ? 1 : strides_.front() * systems_.front().local_dim(); }

  std::size_t system_index(const std::string& name) const {
    for (std::size_t i = 0; i < systems_.size(); ++i)
      if (systems_[i].name == name) return i;
    fail(ErrorCode::UnknownLabel, "no system named '" + name + "'");
  }
  bool has_system(const std::string& name) const {
    return std::any_of(systems_.begin(), systems_.end(), [&](const auto& s) { return s.name == name; });
  }
  const SystemSpec& system(const std::string& name) const { return systems_[system_index(name)]; }

  std::uint64_t encode_joint(const JointKet& ket) const {
    if (ket.size() != systems_.size()) fail(ErrorCode::BasisMismatch, "joint ket has wrong number of systems");
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < systems_.size(); ++i) idx += encode(systems_[i], ket[i]) * strides_[i];
    return idx;
  }

  JointKet decode_joint(std::uint64_t idx) const {
    JointKet ket(systems_.size());
    for (std::size_t i = 0; i < systems_.size(); ++i) ket[i] = local_mode(idx, i);
    return ket;
  }

  std::uint64_t local_code(std::uint64_t idx, std::size_t sys) const {
    return (idx / strides_[sys]) % systems_[sys].local_dim();
  }
  Mode local_mode(std::uint64_t idx, std::size_t sys) const { return decode(systems_[sys], local_code(idx, sys)); }

  double norm_squared() const {
    double s = 0;
    for (const auto& e : entries_) s += std::norm(e.value);
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }

  StateVector normalized() const {
    const double n = norm();
    if (!(n > 0)) fail(ErrorCode::NormalizationError, "cannot normalise a zero state");
    StateVector out = *this;
    for (auto& e : out.entries_) e.value /= n;
    return out;
  }

  Complex amplitude(const JointKet& ket) const {
    const std::uint64_t idx = encode_joint(ket);
    const auto it = std::lower_bound(entries_.begin(), entries_.end(), idx,
                                     [](const Amplitude& a, std::uint64_t i) { return a.index < i; });
    return (it != entries_.end() && it->index == idx) ? it->value : Complex{};
  }

  friend bool operator==(const StateVector& a, const StateVector& b) {
    if (a.systems_ != b.systems_ || a.entries_.size() != b.entries_.size()) return false;
    for (std::size_t i = 0; i < a.entries_.size(); ++i)
      if (a.entries_[i].index != b.entries_[i].index || a.entries_[i].value != b.entries_[i].value) return false;
    return true;
  }

 private:
  void build_strides() {
    std::set<std::string> names;
    for (const auto& s : systems_) {
      s.validate();
      if (!names.insert(s.name).second) fail(ErrorCode::LabelCollision, "duplicate system '" + s.name + "'");
    }
    strides_.assign(systems_.size(), 1);
    long double total = 1;
    for (std::size_t i = systems_.size(); i-- > 0;) {
      strides_[i] = static_cast<std::uint64_t>(total);
      total *= static_cast<long double>(systems_[i].local_dim());
    }
    if (total > static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2))
      fail(ErrorCode::InvalidArgument, "joint label space too large for 64-bit indexing");
  }

  // Sort, merge duplicates, drop exact zeros.
  void canonicalize() {
    std::sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    std::vector<Amplitude> merged;
    merged.reserve(entries_.size());
    const std::uint64_t dim = dimension();
    for (const auto& e : entries_) {
      if (e.index >= dim) fail(ErrorCode::InvalidArgument, "amplitude index outside the joint basis");
      if (!merged.empty() && merged.back().index == e.index)
        merged.back().value += e.value;
      else
        merged.push_back(e);
    }
    std::erase_if(merged, [](const Amplitude& a) { return a.value == Complex{}; });
    entries_ = std::move(merged);
  }

  std::vector<SystemSpec> systems_;
  std::vector<std::uint64_t> strides_;
  std::vector<Amplitude> entries_;
};

/// Product state; joint order is a's systems followed by b's.
inline StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<SystemSpec> systems = a.systems();
  for (const auto& s : b.systems()) {
    if (a.has_system(s.name)) fail(ErrorCode::LabelCollision, "system '" + s.name + "' appears in both factors");
    systems.push_back(s);
  }
  const std::uint64_t dim_b = b.dimension();
  std::vector<Amplitude> entries;
  entries.reserve(a.entries().size() * b.entries().size());
  for (const auto& ea : a.entries())
    for (const auto& eb : b.entries()) entries.push_back({ea.index * dim_b + eb.index, ea.value * eb.value});
  return StateVector(std::move(systems), std::move(entries));
}

/// ⟨a|b⟩.
inline Complex inner(const StateVector& a, const StateVector& b) {
  if (a.systems() != b.systems()) fail(ErrorCode::BasisMismatch, "states live on different joint bases");
  Complex s{};
  auto ia = a.entries().begin();
  auto ib = b.entries().begin();
  while (ia != a.entries().end() && ib != b.entries().end()) {
    if (ia->index < ib->index) {
      ++ia;
    } else if (ib->index < ia->index) {
      ++ib;
    } else {
      s += std::conj(ia->value) * ib->value;
      ++ia;
      ++ib;
    }
  }
  return s;
}

/// Reduced density matrix on the support of the kept systems.
struct DensityData {
  std::vector<SystemSpec> systems;   // kept systems, in state order
  std::vector<JointKet> basis;       // support kets (lexicographic)
  Eigen::MatrixXcd rho;

  double trace() const { return rho.trace().real(); }
  double purity() const { return (rho * rho).trace().real(); }
};

namespace detail {

struct Partition {
  std::vector<std::size_t> keep;
  std::vector<std::size_t> rest;
};

inline Partition partition(const StateVector& s, const std::vector<std::string>& keep_names) {
  if (keep_names.empty()) fail(ErrorCode::InvalidArgument, "keep set must not be empty");
  Partition p;
  std::vector<bool> kept(s.systems().size(), false);
  for (const auto& n : keep_names) kept[s.system_index(n)] = true;
  for (std::size_t i = 0; i < kept.size(); ++i) (kept[i] ? p.keep : p.rest).push_back(i);
  return p;
}

inline std::uint64_t pack(const StateVector& s, std::uint64_t idx, const std::vector<std::size_t>& which) {
  std::uint64_t key = 0;
  for (std::size_t i : which) key = key * s.systems()[i].local_dim() + s.local_code(idx, i);
  return key;
}

inline std::vector<std::uint64_t> support(const StateVector& s, const std::vector<std::size_t>& which) {
  std::vector<std::uint64_t> keys;
  keys.reserve(s.entries().size());
  for (const auto& e : s.entries()) keys.push_back(pack(s, e.index, which));
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

inline Eigen::MatrixXcd reduce(const StateVector& s, const std::vector<std::size_t>& keep,
                               const std::vector<std::size_t>& rest, std::vector<std::uint64_t>& keys) {
  keys = support(s, keep);
  std::map<std::uint64_t, std::vector<std::pair<Eigen::Index, Complex>>> groups;
  for (const auto& e : s.entries()) {
    const auto k = pack(s, e.index, keep);
    const auto pos = std::lower_bound(keys.begin(), keys.end(), k) - keys.begin();
    groups[pack(s, e.index, rest)].emplace_back(static_cast<Eigen::Index>(pos), e.value);
  }
  const auto n = static_cast<Eigen::Index>(keys.size());
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [_, col] : groups)
    for (const auto& [i, ai] : col)
      for (const auto& [j, aj] : col) rho(i, j) += ai * std::conj(aj);
  const double tr = rho.trace().real();
  if (tr > 0) rho /= tr;
  return rho;
}

inline JointKet unpack(const StateVector& s, std::uint64_t key, const std::vector<std::size_t>& which) {
  JointKet ket(which.size());
  for (std::size_t k = which.size(); k-- > 0;) {
    const auto& sys = s.systems()[which[k]];
    ket[k] = decode(sys, key % sys.local_dim());
    key /= sys.local_dim();
  }
  return ket;
}

}  // namespace detail

inline DensityData reduced_state(const StateVector& s, const std::vector<std::string>& keep) {
  if (s.entries().empty()) fail(ErrorCode::NormalizationError, "zero state has no reduced state");
  const auto part = detail::partition(s, keep);
  DensityData out;
  for (std::size_t i : part.keep) out.systems.push_back(s.systems()[i]);
  std::vector<std::uint64_t> keys;
  out.rho = detail::reduce(s, part.keep, part.rest, keys);
  for (auto k : keys) out.basis.push_back(detail::unpack(s, k, part.keep));
  return out;
}

/// Von Neumann entropy (bits) of the eigenvalue spectrum of a density matrix.
inline double von_neumann_bits(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho, Eigen::EigenvaluesOnly);
  double h = 0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double l = solver.eigenvalues()(i);
    if (l > 1e-15) h -= l * std::log2(l);
  }
  return h;
}

/// Entanglement entropy (bits) across the cut `cut | rest`.
/// Uses whichever side has the smaller support; both give the same spectrum.
inline double entanglement_entropy(const StateVector& s, const std::vector<std::string>& cut) {
  const auto part = detail::partition(s, cut);
  if (part.rest.empty()) return 0.0;
  if (std::abs(s.norm() - 1.0) > 1e-8) fail(ErrorCode::NormalizationError, "entropy needs a normalised state");
  const auto cut_support = detail::support(s, part.keep).size();
  const auto rest_support = detail::support(s, part.rest).size();
  std::vector<std::uint64_t> keys;
  const Eigen::MatrixXcd rho = cut_support <= rest_support ? detail::reduce(s, part.keep, part.rest, keys)
                                                           : detail::reduce(s, part.rest, part.keep, keys);
  return von_neumann_bits(rho);
}

inline double sector_probability(const StateVector& s, const std::string& system, Sector sector) {
  const std::size_t k = s.system_index(system);
  double total = 0;
  double hit = 0;
  for (const auto& e : s.entries()) {
    const double p = std::norm(e.value);
    total += p;
    if (s.local_mode(e.index, k).sector == sector) hit += p;
  }
  if (!(total > 0)) fail(ErrorCode::NormalizationError, "zero state");
  return hit / total;
}

/// Probability that `system`'s grid coordinate lies in [lo, hi], trapezoid
/// rule on the sub-interval: a point sitting exactly on an end counts half.
inline double interval_probability(const StateVector& s, const std::string& system, double lo, double hi,
                                   double tol = 1e-12) {
  const std::size_t k = s.system_index(system);
  const auto& grid = s.systems()[k].grid;
  double total = 0;
  double hit = 0;
  for (const auto& e : s.entries()) {
    const double p = std::norm(e.value);
    total += p;
    const double x = grid.point(s.local_mode(e.index, k).index);
    const bool at_lo = std::abs(x - lo) <= tol;
    const bool at_hi = std::abs(x - hi) <= tol;
    if (at_lo || at_hi)
      hit += (at_lo && at_hi) ? p : 0.5 * p;
    else if (x > lo && x < hi)
      hit += p;
  }
  if (!(total > 0)) fail(ErrorCode::NormalizationError, "zero state");
  return hit / total;
}

struct GaussianPacketSpec {
  double xi0 = 0.0;
  double sigma = 1.0;  // std of |ψ|²
  double cutoff = 0.0;  // in sigmas; amplitudes beyond are exactly zero. 0 = no cutoff
};

/// N such that ψ(ξ) = N exp(−(ξ−ξ₀)²/4σ²) has unit norm under the grid weights.
inline double gaussian_normalization(const GaussianPacketSpec& spec, const GridSpec& grid) {
  double s = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double d = grid.point(i) - spec.xi0;
    if (spec.cutoff > 0 && std::abs(d) > spec.cutoff * spec.sigma) continue;
    s += grid.weight(i) * std::exp(-d * d / (2 * spec.sigma * spec.sigma));
  }
  if (!(s > 0)) fail(ErrorCode::NormalizationError, "packet has no weight on the grid");
  return 1.0 / std::sqrt(s);
}

/// Positive-energy massive packet in one sector of `system`.
inline StateVector make_gaussian(const GaussianPacketSpec& spec, const SystemSpec& system, Sector sector,
                                 int spin = 1) {
  if (!(spec.sigma > 0) || !std::isfinite(spec.sigma) || !std::isfinite(spec.xi0))
    fail(ErrorCode::InvalidArgument, "packet needs finite centre and sigma > 0");
  if (system.grid.kind() != GridKind::Rapidity) fail(ErrorCode::InvalidArgument, "packets live on rapidity grids");
  const auto& g = system.grid;
  if (g.front() > spec.xi0 - 6 * spec.sigma || g.back() < spec.xi0 + 6 * spec.sigma)
    fail(ErrorCode::GridTooNarrow, "grid must cover xi0 +- 6 sigma");
  const double norm = gaussian_normalization(spec, g);
  std::vector<std::pair<JointKet, Complex>> kets;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g.point(i) - spec.xi0;
    if (spec.cutoff > 0 && std::abs(d) > spec.cutoff * spec.sigma) continue;
    const double amp = std::sqrt(g.weight(i)) * norm * std::exp(-d * d / (4 * spec.sigma * spec.sigma));
    if (amp == 0) continue;
    kets.push_back({{Mode{sector, 1, 1, system.spin ? spin : 0, i}}, amp});
  }
  return StateVector::from_kets({system}, kets);
}

/// Single sharp ket on one system.
inline StateVector make_ket(const SystemSpec& system, const Mode& mode, Complex amp = 1.0) {
  return StateVector::from_kets({system}, {{{mode}, amp}});
}

}  // namespace sqrf
