#pragma once

// Two end-to-end frame changes:
//
//  * photon: A in an equal superposition of a subluminal and a superluminal
//    momentum, B a right-moving photon; seen from A the photon's sector is
//    entangled with the old lab frame C.
//  * gaussian: B a massive packet in rapidity, A in a sub/sup superposition;
//    the superluminal branch splits B into incoming and outgoing parts.

#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "sqrf/errors.hpp"
#include "sqrf/grid.hpp"
#include "sqrf/qrf.hpp"
#include "sqrf/qstate.hpp"
#include "sqrf/shells.hpp"

namespace sqrf {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

namespace detail {

inline std::vector<double> dedupe(std::vector<double> v, double tol = 1e-12) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > tol) out.push_back(x);
  return out;
}

inline bool on_shell(const TwoMomentum& q, double m2, double rel = 1e-9) {
  return std::abs(invariant_square(q) - m2) <= rel * std::max({1.0, q.e * q.e, q.p * q.p});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Photon

struct PhotonScenarioConfig {
  double p_b = 1.0;
  TwoMomentum p_a{1.25, 0.75};        // +m_A² shell
  TwoMomentum p_tilde_a{0.75, 1.25};  // −m_A² shell
  double m_a = 1.0;
  double m_c = 1.0;
  int sup_sign = 1;

  void validate() const {
    if (!(p_b > 0) || !std::isfinite(p_b)) fail(ErrorCode::InvalidArgument, "p_B must be positive");
    if (!(m_a > 0) || !(m_c > 0)) fail(ErrorCode::MassMissing, "m_A and m_C must be positive");
    if (!detail::on_shell(p_a, m_a * m_a) || !(p_a.e > 0))
      fail(ErrorCode::OffShell, "p_A must be a positive-energy point of the +m_A^2 shell");
    if (!detail::on_shell(p_tilde_a, -m_a * m_a)) fail(ErrorCode::OffShell, "p~_A must lie on the -m_A^2 shell");
    if (!(p_a.p > 0) || !(p_tilde_a.p > 0)) fail(ErrorCode::InvalidArgument, "control spatial momenta must be positive");
    if (sup_sign != 1 && sup_sign != -1) fail(ErrorCode::InvalidArgument, "sup_sign must be +-1");
  }
};

struct PhotonBranch {
  std::string branch;  // "sub" or "sup"
  TwoMomentum raw;     // before reinterpretation
  Sector raw_sector = Sector::Outgoing;
  TwoMomentum final;   // after reinterpretation
  Sector final_sector = Sector::Outgoing;
  double probability = 0.0;
};

struct PhotonReport {
  PhotonScenarioConfig config;
  StateVector initial;
  StateVector raw;
  StateVector final;
  std::vector<PhotonBranch> branches;
  double doppler_oracle = 0.0;     // p_B √((1−V)/(1+V)) for the subluminal control
  double entanglement_bits = 0.0;  // B vs C
  bool sector_correlated = false;  // each C ket fixes B's sector, and they differ
  double norm = 0.0;
};

inline PhotonReport run_photon_scenario(const PhotonScenarioConfig& cfg) {
  cfg.validate();
  const double xi_sub = std::asinh(cfg.p_a.p / cfg.m_a);
  const double xi_sup = std::asinh(cfg.p_tilde_a.e / cfg.m_a);

  const GridSpec a_grid = GridSpec::discrete(detail::dedupe({xi_sub, -xi_sub, xi_sup, -xi_sup}));
  const double u0 = std::log(cfg.p_b);
  const GridSpec b_grid = GridSpec::discrete(detail::dedupe({u0, u0 - xi_sub, u0 - xi_sup}), GridKind::LogEnergy);
  const SystemSpec a("A", cfg.m_a, false, a_grid);
  const SystemSpec b("B", 0.0, false, b_grid);

  const Mode a_sub{Sector::Outgoing, 1, 1, 0, *a_grid.locate(xi_sub)};
  const Mode a_sup{Sector::Outgoing, -1, 1, 0, *a_grid.locate(xi_sup)};
  const Mode b0{Sector::Outgoing, 1, 1, 0, *b_grid.locate(u0)};
  const double r = 1.0 / std::sqrt(2.0);

  PhotonReport rep;
  rep.config = cfg;
  rep.initial = StateVector::from_kets({a, b}, {{{a_sub, b0}, r}, {{a_sup, b0}, r}});

  QrfTransform t;
  t.m_c = cfg.m_c;
  t.options.sup_sign = cfg.sup_sign;
  rep.raw = qrf_transform(rep.initial, t);
  rep.final = reinterpret_state(rep.raw);
  rep.norm = rep.final.norm();

  const auto& sys = rep.final.systems();
  const std::size_t ib = rep.final.system_index("B");
  const std::size_t ic = rep.final.system_index("C");
  std::map<int, Sector> sector_by_c_branch;
  for (std::size_t k = 0; k < rep.raw.entries().size(); ++k) {
    const auto& e_raw = rep.raw.entries()[k];
    const JointKet raw = rep.raw.decode_joint(e_raw.index);
    PhotonBranch br;
    br.branch = raw[ic].branch > 0 ? "sub" : "sup";
    br.raw = mode_momentum(sys[ib], raw[ib]);
    br.raw_sector = raw[ib].sector;
    const Mode fin = reinterpret_mode(sys[ib], raw[ib]);
    br.final = mode_momentum(sys[ib], fin);
    br.final_sector = fin.sector;
    br.probability = std::norm(e_raw.value);
    sector_by_c_branch[raw[ic].branch] = fin.sector;
    rep.branches.push_back(br);
  }
  std::stable_partition(rep.branches.begin(), rep.branches.end(), [](const auto& x) { return x.branch == "sub"; });

  const double v = cfg.p_a.p / cfg.p_a.e;
  rep.doppler_oracle = cfg.p_b * std::sqrt((1 - v) / (1 + v));
  rep.entanglement_bits = entanglement_entropy(rep.final, {"B"});
  rep.sector_correlated = sector_by_c_branch.size() == 2 && sector_by_c_branch[1] != sector_by_c_branch[-1];
  return rep;
}

// ---------------------------------------------------------------------------
// Gaussian packet

struct GaussianScenarioConfig {
  GaussianPacketSpec packet{3.0, 1.0, 6.0};
  double phi = 1.0;
  double phi_tilde = 5.0;
  GridSpec grid = GridSpec::uniform(-10, 10, 2001);
  double m_a = 1.0;
  double m_b = 1.0;
  double m_c = 1.0;
  int sup_sign = -1;
  double coverage_sigmas = 6.0;
};

struct GaussianReport {
  GaussianScenarioConfig config;
  StateVector initial;
  StateVector raw;
  StateVector final;
  StateVector analytic;
  double normalization = 0.0;  // N of the packet
  double p_sub = 0.0;
  double p_sup_in = 0.0;
  double p_sup_out = 0.0;
  double p_incoming_given_sup = 0.0;
  double p_incoming_oracle = 0.0;
  double zero_energy_weight = 0.0;  // sup-branch weight on the η = 0 ket, split half/half
  double linf = 0.0;
  double l2 = 0.0;
  double sub_outgoing_fraction = 0.0;
  double norm = 0.0;
};

inline void validate_gaussian(const GaussianScenarioConfig& cfg) {
  const auto& g = cfg.grid;
  const auto& pk = cfg.packet;
  if (!(pk.sigma > 0)) fail(ErrorCode::InvalidArgument, "sigma must be positive");
  if (!(cfg.m_a > 0) || !(cfg.m_b > 0) || !(cfg.m_c > 0)) fail(ErrorCode::MassMissing, "masses must be positive");
  if (g.kind() != GridKind::Rapidity || !g.is_uniform() || !g.symmetric())
    fail(ErrorCode::GridMismatch, "scenario needs a uniform, symmetric rapidity grid");
  if (!g.locate(0.0)) fail(ErrorCode::GridMismatch, "scenario grid must contain the rest point (odd n)");
  if (!std::isfinite(cfg.phi) || !std::isfinite(cfg.phi_tilde))
    fail(ErrorCode::InvalidArgument, "control rapidities must be finite");
  if (cfg.phi_tilde == 0) fail(ErrorCode::ZeroSpatialMomentum, "superluminal control needs phi~ != 0");
  if (!g.commensurate(cfg.phi) || !g.commensurate(cfg.phi_tilde))
    fail(ErrorCode::NonCommensurate, "phi and phi~ must be multiples of the grid spacing");
  const double w = cfg.coverage_sigmas * pk.sigma;
  const double d = pk.xi0 - cfg.phi_tilde;
  for (double centre : {pk.xi0, pk.xi0 - cfg.phi, d, -d})
    if (centre - w < g.front() || centre + w > g.back())
      fail(ErrorCode::GridTooNarrow, "grid must cover every packet image by " + std::to_string(cfg.coverage_sigmas) +
                                         " sigma");
}

/// Coefficient of the initial packet from the closed form at rapidity ξ.
inline double packet_amplitude(const GaussianScenarioConfig& cfg, double norm, double xi) {
  const double d = xi - cfg.packet.xi0;
  return std::sqrt(cfg.grid.spacing()) * norm * std::exp(-d * d / (4 * cfg.packet.sigma * cfg.packet.sigma));
}

inline GaussianReport run_gaussian_scenario(const GaussianScenarioConfig& cfg) {
  validate_gaussian(cfg);
  GaussianReport rep;
  rep.config = cfg;
  const GridSpec& g = cfg.grid;
  GaussianPacketSpec pk = cfg.packet;
  if (pk.cutoff <= 0) pk.cutoff = cfg.coverage_sigmas;

  const SystemSpec a("A", cfg.m_a, false, g);
  const SystemSpec b("B", cfg.m_b, false, g);
  const StateVector packet = make_gaussian(pk, b, Sector::Outgoing);
  rep.normalization = gaussian_normalization(pk, g);

  const double r = 1.0 / std::sqrt(2.0);
  const Mode a_sub{Sector::Outgoing, 1, 1, 0, *g.locate(cfg.phi)};
  const Mode a_sup{Sector::Outgoing, -1, 1, 0, *g.locate(cfg.phi_tilde)};
  const StateVector control = StateVector::from_kets({a}, {{{a_sub}, r}, {{a_sup}, r}});
  rep.initial = tensor(control, packet);

  QrfTransform t;
  t.m_c = cfg.m_c;
  t.options.sup_sign = cfg.sup_sign;
  rep.raw = qrf_transform(rep.initial, t);
  rep.final = reinterpret_state(rep.raw);
  rep.norm = rep.final.norm();

  // Probabilities per term.
  const auto& fs = rep.final;
  const std::size_t ib = fs.system_index("B");
  const std::size_t ic = fs.system_index("C");
  double sub_out = 0;
  for (const auto& e : fs.entries()) {
    const JointKet k = fs.decode_joint(e.index);
    const double p = std::norm(e.value);
    if (k[ic].branch > 0) {
      rep.p_sub += p;
      if (k[ib].sector == Sector::Outgoing) sub_out += p;
    } else if (k[ib].sector == Sector::Incoming) {
      rep.p_sup_in += p;
    } else {
      rep.p_sup_out += p;
      if (k[ib].branch < 0 && g.point(k[ib].index) == 0.0) rep.zero_energy_weight += p;
    }
  }
  const double p_sup = rep.p_sup_in + rep.p_sup_out;
  rep.sub_outgoing_fraction = rep.p_sub > 0 ? sub_out / rep.p_sub : 0.0;
  rep.p_incoming_given_sup = p_sup > 0 ? (rep.p_sup_in + 0.5 * rep.zero_energy_weight) / p_sup : 0.0;
  rep.p_incoming_oracle = normal_cdf(-(pk.xi0 - cfg.phi_tilde) / pk.sigma);

  // Closed-form three-term state on the output basis.
  const SystemSpec c = old_frame_spec(rep.initial, t);
  const Mode c_sub{Sector::Outgoing, 1, 1, 0, *g.locate(-cfg.phi)};
  const Mode c_sup{Sector::Outgoing, -1, -1, 0, *g.locate(cfg.phi_tilde)};
  const double h = g.spacing();
  auto in_support = [&](double xi) {
    const double k = std::round((xi - g.front()) / h);
    if (k < 0 || k > static_cast<double>(g.size() - 1)) return false;
    return std::abs(g.point(static_cast<std::size_t>(k)) - pk.xi0) <= pk.cutoff * pk.sigma;
  };
  auto f = [&](double xi) { return in_support(xi) ? r * packet_amplitude(cfg, rep.normalization, xi) : 0.0; };
  std::vector<std::pair<JointKet, Complex>> kets;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = g.point(i);
    kets.push_back({{Mode{Sector::Outgoing, 1, 1, 0, i}, c_sub}, f(y + cfg.phi)});
    if (y >= 0) kets.push_back({{Mode{Sector::Outgoing, -1, 1, 0, i}, c_sup}, f(y + cfg.phi_tilde)});
    if (y > 0) kets.push_back({{Mode{Sector::Incoming, -1, -1, 0, i}, c_sup}, f(cfg.phi_tilde - y)});
  }
  rep.analytic = StateVector::from_kets({b, c}, kets);

  // Deviations (merge-walk over the two sparse supports).
  const auto& x = rep.final.entries();
  const auto& z = rep.analytic.entries();
  std::size_t i = 0, j = 0;
  double l2 = 0;
  while (i < x.size() || j < z.size()) {
    Complex d;
    if (j == z.size() || (i < x.size() && x[i].index < z[j].index)) {
      d = x[i++].value;
    } else if (i == x.size() || z[j].index < x[i].index) {
      d = z[j++].value;
    } else {
      d = x[i++].value - z[j++].value;
    }
    rep.linf = std::max(rep.linf, std::abs(d));
    l2 += std::norm(d);
  }
  rep.l2 = std::sqrt(l2);
  return rep;
}

}  // namespace sqrf
