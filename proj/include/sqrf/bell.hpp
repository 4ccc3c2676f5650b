#pragma once

// Spin-momentum Bell experiment seen from a (possibly superposed, possibly
// superluminal) laboratory frame.
//
// Systems: A and B carry spin-½ and momentum on a shared rapidity grid; C is
// the laboratory. Moving to the lab frame is the controlled boost of A and B
// by C's momentum. In 1+1 dimensions there is no rotation subgroup, so the
// spin factor is left untouched by the boost and spin measurements only see
// the permutation of the momentum labels.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "sqrf/errors.hpp"
#include "sqrf/kinematics.hpp"
#include "sqrf/qrf.hpp"
#include "sqrf/qstate.hpp"

namespace sqrf {

enum class Party { Alice, Bob };

struct MeasurementSetting {
  std::array<double, 3> n{0.0, 0.0, 1.0};
  Party party = Party::Alice;

  MeasurementSetting() = default;
  MeasurementSetting(std::array<double, 3> dir, Party p) : n(dir), party(p) {
    const double len = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    if (std::abs(len - 1.0) > 1e-12) fail(ErrorCode::InvalidArgument, "setting direction must be a unit vector");
  }

  /// Direction in the x-z plane at `degrees` from +z towards +x.
  static MeasurementSetting xz(double degrees, Party p) {
    const double th = degrees * std::numbers::pi / 180.0;
    return MeasurementSetting({std::sin(th), 0.0, std::cos(th)}, p);
  }
};

/// Spin coefficients λ[z][z'] (index 0 is spin +1) and B's momentum weights.
struct EntangledSpinState {
  std::array<std::array<Complex, 2>, 2> lambda{};
  std::vector<std::pair<std::size_t, Complex>> eta;  // (grid index, weight) for B on the +m² shell

  static EntangledSpinState singlet(std::size_t b_index) {
    EntangledSpinState e;
    const double r = 1.0 / std::sqrt(2.0);
    e.lambda[0][1] = r;
    e.lambda[1][0] = -r;
    e.eta = {{b_index, 1.0}};
    return e;
  }
};

struct BellSetup {
  double m_a = 1.0;
  double m_b = 1.0;
  double m_c = 1.0;
  GridSpec grid = GridSpec::uniform(-4, 4, 33);
  /// C's state; empty means C at rest.
  std::vector<std::pair<Mode, Complex>> lab;
};

inline std::size_t rest_index(const GridSpec& g) {
  const auto i = g.locate(0.0);
  if (!i) fail(ErrorCode::GridMismatch, "grid has no rest point");
  return *i;
}

/// Rest-frame state of A (at rest), B (spread by η) and C.
inline StateVector build_bell_state(const EntangledSpinState& e, const BellSetup& setup) {
  double lam = 0;
  for (const auto& row : e.lambda)
    for (const auto& c : row) lam += std::norm(c);
  double eta = 0;
  for (const auto& [_, w] : e.eta) eta += std::norm(w);
  if (!(lam > 0) || !(eta > 0)) fail(ErrorCode::NormalizationError, "spin or momentum weights vanish");

  const SystemSpec a("A", setup.m_a, true, setup.grid);
  const SystemSpec b("B", setup.m_b, true, setup.grid);
  const SystemSpec c("C", setup.m_c, false, setup.grid);
  const std::size_t rest = rest_index(setup.grid);
  std::vector<std::pair<Mode, Complex>> lab = setup.lab;
  if (lab.empty()) lab = {{Mode{Sector::Outgoing, 1, 1, 0, rest}, 1.0}};

  std::vector<std::pair<JointKet, Complex>> kets;
  for (int z = 0; z < 2; ++z)
    for (int zp = 0; zp < 2; ++zp) {
      if (e.lambda[z][zp] == Complex{}) continue;
      for (const auto& [bi, w] : e.eta)
        for (const auto& [cm, cw] : lab) {
          const Mode ma{Sector::Outgoing, 1, 1, z == 0 ? 1 : -1, rest};
          const Mode mb{Sector::Outgoing, 1, 1, zp == 0 ? 1 : -1, bi};
          kets.push_back({{ma, mb, cm}, e.lambda[z][zp] * w * cw});
        }
    }
  return StateVector::from_kets({a, b, c}, kets).normalized();
}

/// A and B as seen from C's frame.
inline StateVector boost_to_lab(const StateVector& s, const BoostOptions& opt = {}) {
  return controlled_boost(s, "C", {"A", "B"}, opt);
}

inline StateVector boost_from_lab(const StateVector& s, BoostOptions opt = {}) {
  opt.inverse = !opt.inverse;
  return controlled_boost(s, "C", {"A", "B"}, opt);
}

using ProbabilityTable = std::array<std::array<double, 2>, 2>;  // [a][b], index 0 is outcome +1

inline Eigen::Matrix2cd projector(const MeasurementSetting& x, int outcome) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd ns;
  ns << x.n[2], x.n[0] - 1i * x.n[1], x.n[0] + 1i * x.n[1], -x.n[2];
  return 0.5 * (Eigen::Matrix2cd::Identity() + static_cast<double>(outcome) * ns);
}

/// Born probabilities of Alice's and Bob's spin outcomes, marginal over every other label.
inline ProbabilityTable bell_probabilities(const StateVector& s, const MeasurementSetting& x,
                                           const MeasurementSetting& y) {
  const std::size_t ia = s.system_index("A");
  const std::size_t ib = s.system_index("B");
  std::map<std::uint64_t, Eigen::Vector4cd> groups;
  for (const auto& e : s.entries()) {
    JointKet ket = s.decode_joint(e.index);
    const int slot = (ket[ia].spin > 0 ? 0 : 2) + (ket[ib].spin > 0 ? 0 : 1);
    ket[ia].spin = 1;
    ket[ib].spin = 1;
    auto [it, fresh] = groups.try_emplace(s.encode_joint(ket), Eigen::Vector4cd::Zero());
    it->second(slot) += e.value;
  }
  ProbabilityTable p{};
  double total = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const Eigen::Matrix2cd pa = projector(x, a == 0 ? 1 : -1);
      const Eigen::Matrix2cd pb = projector(y, b == 0 ? 1 : -1);
      Eigen::Matrix4cd proj;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) proj(i, j) = pa(i / 2, j / 2) * pb(i % 2, j % 2);
      for (const auto& [_, v] : groups) p[a][b] += (v.adjoint() * proj * v)(0, 0).real();
      total += p[a][b];
    }
  if (!(total > 0)) fail(ErrorCode::NormalizationError, "zero state");
  for (auto& row : p)
    for (auto& v : row) v /= total;
  return p;
}

inline double correlator(const ProbabilityTable& p) { return p[0][0] - p[0][1] - p[1][0] + p[1][1]; }

inline double chsh_value(const StateVector& s, const MeasurementSetting& x, const MeasurementSetting& xp,
                         const MeasurementSetting& y, const MeasurementSetting& yp) {
  return correlator(bell_probabilities(s, x, y)) + correlator(bell_probabilities(s, x, yp)) +
         correlator(bell_probabilities(s, xp, y)) - correlator(bell_probabilities(s, xp, yp));
}

struct ChshSettings {
  MeasurementSetting x, xp, y, yp;
};

/// Settings reaching 2√2 on the singlet.
inline ChshSettings singlet_optimal_settings() {
  return {MeasurementSetting::xz(0, Party::Alice), MeasurementSetting::xz(90, Party::Alice),
          MeasurementSetting::xz(225, Party::Bob), MeasurementSetting::xz(135, Party::Bob)};
}

// ---------------------------------------------------------------------------
// Representation checks on one system's label space

/// Partial permutation matrix of a boost on a single system's modes.
inline Eigen::MatrixXd boost_representation(const SystemSpec& sys, const Boost& b) {
  const auto n = static_cast<Eigen::Index>(sys.local_dim());
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, n);
  BoostOptions opt;
  opt.off_grid = OffGridPolicy::Absorb;
  for (Eigen::Index c = 0; c < n; ++c) {
    const Mode m = decode(sys, static_cast<std::uint64_t>(c));
    for (const auto& im : boost_mode(sys, m, b, opt))
      u(static_cast<Eigen::Index>(encode(sys, im.mode)), c) += im.weight;
  }
  return u;
}

struct AdjointRow {
  Rapidity rapidity;
  double deviation = 0.0;  // max |U(L⁻¹) − U(L)†|
};

struct AdjointReport {
  std::vector<AdjointRow> rows;
  double composite_deviation = 0.0;  // max |U(L1 L2) − U(L1) U(L2)| on surviving columns
  double composite_adjoint_deviation = 0.0;
  double max_deviation() const {
    double d = std::max(composite_deviation, composite_adjoint_deviation);
    for (const auto& r : rows) d = std::max(d, r.deviation);
    return d;
  }
};

inline AdjointReport adjoint_relation_check(const SystemSpec& sys, const std::vector<Rapidity>& samples,
                                            const std::pair<Rapidity, Rapidity>& composite) {
  AdjointReport rep;
  for (const auto& r : samples) {
    const Eigen::MatrixXd fwd = boost_representation(sys, boost_from_rapidity(r));
    const Eigen::MatrixXd back = boost_representation(sys, boost_from_rapidity({-r.value, r.branch}));
    rep.rows.push_back({r, (back - fwd.adjoint()).cwiseAbs().maxCoeff()});
  }
  const Boost l1 = boost_from_rapidity(composite.first);
  const Boost l2 = boost_from_rapidity(composite.second);
  const Boost l = compose(l1, l2);
  const Eigen::MatrixXd ul = boost_representation(sys, l);
  const Eigen::MatrixXd prod = boost_representation(sys, l1) * boost_representation(sys, l2);
  for (Eigen::Index c = 0; c < prod.cols(); ++c)
    if (prod.col(c).cwiseAbs().maxCoeff() > 0)
      rep.composite_deviation = std::max(rep.composite_deviation, (ul.col(c) - prod.col(c)).cwiseAbs().maxCoeff());
  const Eigen::MatrixXd ul_inv = boost_representation(sys, boost_from_rapidity({-l.rapidity().value, l.branch()}));
  rep.composite_adjoint_deviation = (ul_inv - ul.adjoint()).cwiseAbs().maxCoeff();
  return rep;
}

/// Boost matrix of a momentum in the block form used for the spin construction.
/// The lower-right entry is written as p⁰/m, which is what the 1+1 reduction gives on both shells.
inline Mat2 momentum_boost_matrix(const TwoMomentum& q, double m, int sup_sign = 1) {
  if (!(m > 0)) fail(ErrorCode::MassMissing, "needs a mass");
  const Mat2 base{q.e / m, -q.p / m, -q.p / m, q.e / m};
  if (invariant_square(q) > 0) return base;
  if (q.p == 0) fail(ErrorCode::ZeroSpatialMomentum, "tachyonic momentum with p1 = 0");
  return (sup_sign * (q.p > 0 ? 1.0 : -1.0)) * base;
}

}  // namespace sqrf
