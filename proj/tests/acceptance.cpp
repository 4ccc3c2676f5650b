// Acceptance gate: one PASS/FAIL line per criterion. argv[1] is the CLI binary.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "random_states.hpp"
#include "sqrf/bell.hpp"
#include "sqrf/scenarios.hpp"
#include "sqrf/thermo.hpp"

using namespace sqrf;

namespace {

// Pinned tolerances.
constexpr double kDetTol = 1e-12;
constexpr double kGoldenComposeTol = 1e-10;
constexpr double kIntervalRelTol = 1e-10;
constexpr double kEnergyFloor = 1e-9;
constexpr double kNormTol = 1e-10;
constexpr double kMeasureRelTol = 1e-12;
constexpr double kAnalyticLinf = 1e-8;
constexpr double kIncomingTol = 1e-3;
constexpr double kPhotonEntropyTol = 1e-9;
constexpr double kChshTol = 1e-9;
constexpr double kTableTol = 1e-10;
constexpr double kThermoTol = 1e-12;
constexpr double kAdjointTol = 1e-12;

constexpr double kLimit1 = 1.0, kLimit3 = 1.0, kLimit5 = 5.0, kLimit7 = 10.0;

constexpr int kSamples = 10000;

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Boost matrix from (v, s) by hand.
Mat2 oracle_matrix(double v, int s) {
  const double g = std::abs(v) < 1 ? 1 / std::sqrt(1 - v * v) : s * (v > 0 ? 1 : -1) / std::sqrt(v * v - 1);
  return {g, -g * v, -g * v, g};
}

double oracle_energy(double e, double p, double v, int s) {
  const double g = std::abs(v) < 1 ? 1 / std::sqrt(1 - v * v) : s * (v > 0 ? 1 : -1) / std::sqrt(v * v - 1);
  return g * (e - v * p);
}

Outcome closure() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> r(-2, 2);
  double worst = 0;
  for (int i = 0; i < kSamples; ++i) {
    // Pairs are drawn inside one sign subgroup; mixed signs leave the set.
    const BranchTag sup = i % 2 ? BranchTag::SupPlus : BranchTag::SupMinus;
    const BranchTag t1 = (i / 2) % 2 ? sup : BranchTag::Sub;
    const BranchTag t2 = (i / 4) % 2 ? sup : BranchTag::Sub;
    const Boost b1 = boost_from_rapidity({r(rng), t1}), b2 = boost_from_rapidity({r(rng), t2});
    Boost c;
    try {
      c = compose(b1, b2);
    } catch (const Error& e) {
      o.require(false, std::string("compose threw ") + e.what());
      continue;
    }
    const int n_sup = (t1 != BranchTag::Sub) + (t2 != BranchTag::Sub);
    const BranchTag want = n_sup == 1 ? sup : BranchTag::Sub;
    o.require(c.branch() == want, "wrong branch");
    o.require(classify_matrix(c.matrix()).branch() == want, "matrix is not of its branch form");
    worst = std::max(worst, std::abs(c.det() - (want == BranchTag::Sub ? 1.0 : -1.0)));
  }
  o.require(worst <= kDetTol, "det deviation " + num(worst));
  const Boost g = compose(boost_from_velocity(2.0, 1), boost_from_velocity(2.0, 1));
  const double dg = max_abs_diff(g.matrix(), oracle_matrix(0.8, 1));
  o.require(g.branch() == BranchTag::Sub && dg <= kGoldenComposeTol, "golden deviation " + num(dg));
  const double t = seconds_since(t0);
  o.require(t < kLimit1, "took " + num(t) + " s");
  if (o.pass) o.detail = "max |det - rule| " + num(worst) + ", golden " + num(dg) + ", " + num(t) + " s";
  return o;
}

Outcome interval_flip() {
  Outcome o;
  std::mt19937_64 rng(1002);
  std::uniform_real_distribution<double> r(-2.5, 2.5), ev(-5, 5);
  const BranchTag tags[] = {BranchTag::Sub, BranchTag::SupPlus, BranchTag::SupMinus};
  double worst = 0;
  for (int i = 0; i < kSamples; ++i) {
    const Boost b = boost_from_rapidity({r(rng), tags[i % 3]});
    const TwoVector e{ev(rng), ev(rng)};
    const double s0 = interval(e), s1 = interval(apply(b, e));
    const double want = b.branch() == BranchTag::Sub ? s0 : -s0;
    const double m = b.matrix().max_abs();
    const double scale = std::max(1.0, (e.t * e.t + e.x * e.x) * m * m);
    worst = std::max(worst, std::abs(s1 - want) / scale);
  }
  o.require(worst <= kIntervalRelTol, "relative deviation " + num(worst));
  if (o.pass) o.detail = "max relative deviation " + num(worst);
  return o;
}

Outcome energy_predicate() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1003);
  std::uniform_real_distribution<double> um(0, 10), up(1e-6, 10), usub(-1, 1), usup(1, 10), coin(0, 1);
  int checked = 0, wrong = 0;
  for (int i = 0; i < kSamples; ++i) {
    const double m = um(rng);
    const double p = (coin(rng) < 0.5 ? 1 : -1) * up(rng);
    const double v = coin(rng) < 0.5 ? usub(rng) : usup(rng) * (coin(rng) < 0.5 ? 1 : -1);
    if (std::abs(std::abs(v) - 1) <= kLightlikeTolerance) continue;
    const int s = coin(rng) < 0.5 ? 1 : -1;
    const double ep = oracle_energy(std::sqrt(m * m + p * p), p, v, s);
    if (std::abs(ep) <= kEnergyFloor) continue;
    ++checked;
    try {
      if ((energy_sign_predicate(m, p, Velocity(v), s) == EnergySign::Positive) != (ep > 0)) ++wrong;
    } catch (const Error&) {
      ++wrong;
    }
  }
  o.require(wrong == 0, std::to_string(wrong) + " of " + std::to_string(checked) + " disagree");
  std::uniform_real_distribution<double> uv(1 + 1e-6, 50), uph(1e-3, 100);
  int positive = 0;
  for (int i = 0; i < kSamples; ++i) {
    const double ph = uph(rng);
    if (!(boosted_energy(ph, ph, Velocity(uv(rng)), 1) < 0)) ++positive;
  }
  o.require(positive == 0, std::to_string(positive) + " superluminal photon energies not negative");
  const double t = seconds_since(t0);
  o.require(t < kLimit3, "took " + num(t) + " s");
  if (o.pass) o.detail = std::to_string(checked) + " samples agree, photons all negative, " + num(t) + " s";
  return o;
}

Outcome qrf_unitarity() {
  Outcome o;
  std::mt19937_64 rng(1004);
  double worst_norm = 0, worst_measure = 0;
  int states = 0;
  for (std::size_t n : {64u, 256u, 1024u})
    for (int i = 0; i < 100; ++i) {
      const StateVector s = testing::random_frame_state(rng, n);
      StateVector t;
      try {
        t = qrf_transform(s, {});
      } catch (const Error& e) {
        o.require(false, std::string("transform threw ") + e.what());
        continue;
      }
      ++states;
      worst_norm = std::max(worst_norm, std::abs(t.norm() - 1));
      o.require(t.entries().size() == s.entries().size(), "support size changed");
      // Cell measure carried by the target's support, before and after relabelling.
      const GridSpec& g = s.system("B").grid;
      const std::size_t ib = s.system_index("B"), tb = t.system_index("B");
      double before = 0, after = 0;
      for (const auto& e : s.entries()) before += g.weight(s.local_mode(e.index, ib).index);
      for (const auto& e : t.entries()) after += g.weight(t.local_mode(e.index, tb).index);
      worst_measure = std::max(worst_measure, std::abs(after - before) / before);
    }
  o.require(worst_norm <= kNormTol, "norm deviation " + num(worst_norm));
  o.require(worst_measure <= kMeasureRelTol, "measure deviation " + num(worst_measure));
  if (o.pass)
    o.detail = std::to_string(states) + " states, max |norm - 1| " + num(worst_norm) + ", measure " +
               num(worst_measure);
  return o;
}

Outcome gaussian() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst_linf = 0, worst_p = 0;
  for (double d : {-2.0, 0.0, 2.0}) {
    GaussianScenarioConfig c;
    c.packet = {1.25 + d, 1.0, 6.0};
    c.phi = 1.25;
    c.phi_tilde = 1.25;
    c.grid = GridSpec::uniform(-10, 10, 1025);
    const GaussianReport r = run_gaussian_scenario(c);
    worst_linf = std::max(worst_linf, r.linf);
    worst_p = std::max(worst_p, std::abs(r.p_incoming_given_sup - normal_cdf(-d)));
  }
  o.require(worst_linf <= kAnalyticLinf, "L-inf " + num(worst_linf));
  o.require(worst_p <= kIncomingTol, "P(In|sup) off by " + num(worst_p));
  const double t = seconds_since(t0);
  o.require(t < kLimit5, "took " + num(t) + " s");
  if (o.pass) o.detail = "L-inf " + num(worst_linf) + ", P(In|sup) within " + num(worst_p) + ", " + num(t) + " s";
  return o;
}

Outcome photon() {
  Outcome o;
  const PhotonReport r = run_photon_scenario({});
  const PhotonBranch* sup = nullptr;
  for (const auto& b : r.branches)
    if (b.branch == "sup") sup = &b;
  o.require(sup != nullptr, "no superluminal branch");
  if (!sup) return o;
  o.require(sup->final_sector == Sector::Incoming, "sup photon not Incoming");
  o.require(sup->final.e > 0, "sup photon energy not positive");
  const double d = std::abs(r.entanglement_bits - 1);
  o.require(d <= kPhotonEntropyTol, "entropy off by " + num(d));
  if (o.pass) o.detail = "sup photon Incoming with E = " + num(sup->final.e) + ", entropy - 1 = " + num(d);
  return o;
}

Outcome bell() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const GridSpec g = BellSetup{}.grid;
  const auto at = [&](double xi) { return *g.locate(xi); };
  const Mode sub{Sector::Outgoing, 1, 1, 0, at(0.75)};
  const Mode sup{Sector::Outgoing, -1, 1, 0, at(0.5)};
  const ChshSettings c = singlet_optimal_settings();
  const double target = 2 * std::sqrt(2.0);
  double worst_chsh = 0;
  const std::vector<std::vector<std::pair<Mode, Complex>>> labs = {
      {}, {{sub, 1.0}}, {{sup, 1.0}}, {{sub, 1.0}, {sup, Complex{0, 1}}}};
  for (const auto& lab : labs) {
    BellSetup setup;
    setup.lab = lab;
    const StateVector rest = build_bell_state(EntangledSpinState::singlet(rest_index(g)), setup);
    for (const StateVector& s : {rest, boost_to_lab(rest)})
      worst_chsh = std::max(worst_chsh, std::abs(chsh_value(s, c.x, c.xp, c.y, c.yp) - target));
  }
  o.require(worst_chsh <= kChshTol, "CHSH off by " + num(worst_chsh));

  std::mt19937_64 rng(1007);
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> near(-2, 2);
  std::uniform_real_distribution<double> ang(0, 360);
  const std::size_t rest_i = rest_index(g);
  double worst_table = 0;
  for (int i = 0; i < 100; ++i) {
    EntangledSpinState e;
    for (auto& row : e.lambda)
      for (auto& x : row) x = {gauss(rng), gauss(rng)};
    for (int k = 0; k < 3; ++k)
      e.eta.push_back({static_cast<std::size_t>(static_cast<int>(rest_i) + near(rng)), {gauss(rng), gauss(rng)}});
    BellSetup setup;
    setup.lab = {{Mode{Sector::Outgoing, 1, 1, 0, rest_i + near(rng)}, {gauss(rng), gauss(rng)}},
                 {Mode{Sector::Outgoing, -1, 1, 0, rest_i + near(rng)}, {gauss(rng), gauss(rng)}},
                 {Mode{Sector::Outgoing, -1, -1, 0, rest_i + near(rng)}, {gauss(rng), gauss(rng)}}};
    const StateVector s = build_bell_state(e, setup);
    const StateVector t = boost_to_lab(s);
    const auto x = MeasurementSetting::xz(ang(rng), Party::Alice);
    const auto y = MeasurementSetting::xz(ang(rng), Party::Bob);
    const ProbabilityTable p = bell_probabilities(s, x, y), q = bell_probabilities(t, x, y);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) worst_table = std::max(worst_table, std::abs(p[a][b] - q[a][b]));
  }
  o.require(worst_table <= kTableTol, "table deviation " + num(worst_table));
  const double t = seconds_since(t0);
  o.require(t < kLimit7, "took " + num(t) + " s");
  if (o.pass)
    o.detail = "|CHSH - 2 sqrt 2| " + num(worst_chsh) + ", tables " + num(worst_table) + ", " + num(t) + " s";
  return o;
}

Outcome thermo() {
  Outcome o;
  const ThermoState s{2.0, 5.0, 300.0};
  struct Golden {
    double v;
    Approach a;
    double t;
  };
  const Golden goldens[] = {{0.6, Approach::EinsteinPlanck, 240.0},
                            {0.6, Approach::Ott, 375.0},
                            {0.6, Approach::Landsberg, 300.0},
                            {2.0, Approach::EinsteinPlanck, 300 * std::sqrt(3.0)},
                            {2.0, Approach::Ott, 300 / std::sqrt(3.0)}};
  double worst = 0;
  for (const auto& g : goldens) worst = std::max(worst, std::abs(transform_thermo(s, Velocity(g.v), g.a).state.T - g.t));
  o.require(worst <= kThermoTol, "golden deviation " + num(worst));
  for (double v : {0.6, 2.0, -0.3, -5.0})
    for (Approach a : kAllApproaches) {
      const ThermoResult r = transform_thermo(s, Velocity(v), a);
      o.require(r.state.S == s.S, "entropy changed");
      o.require(r.state.T > 0, "non-positive temperature");
    }
  if (o.pass) o.detail = "max golden deviation " + num(worst);
  return o;
}

Outcome involutions() {
  Outcome o;
  // Relabelling every ket as −q in the other sector, twice.
  std::mt19937_64 rng(1009);
  for (int i = 0; i < 20; ++i) {
    const StateVector s = testing::random_frame_state(rng, 129);
    o.require(partner_state(partner_state(s)) == s, "partner relabelling is not an involution");
  }
  // Reinterpreting the negative-energy kets of a transformed state is a projection.
  for (const StateVector& raw : {run_photon_scenario({}).raw, run_gaussian_scenario({}).raw}) {
    const StateVector r = reinterpret_state(raw);
    o.require(reinterpret_state(r) == r, "reinterpretation is not idempotent");
    o.require(partner_state(partner_state(r)) == r, "partner relabelling is not an involution");
  }
  // Subluminal parity swap twice.
  const SystemSpec a("A", 1.0, false, GridSpec::uniform(-3, 3, 61));
  const SystemSpec c("C", 1.5, false, GridSpec::uniform(-3, 3, 61));
  for (std::size_t i = 0; i < a.grid.size(); ++i)
    for (int sheet : {1, -1}) {
      const Mode m{Sector::Outgoing, 1, sheet, 0, i};
      o.require(parity_swap_mode(c, parity_swap_mode(a, m, c), a) == m, "subluminal swap twice is not identity");
    }
  const SystemSpec b("B", 1.0, false, GridSpec::uniform(-2, 2, 17));
  const AdjointReport rep = adjoint_relation_check(
      b, {{0.25, BranchTag::Sub}, {-0.75, BranchTag::Sub}, {0.5, BranchTag::SupPlus}, {-0.25, BranchTag::SupMinus},
          {1.0, BranchTag::SupPlus}},
      {{0.5, BranchTag::Sub}, {0.25, BranchTag::SupPlus}});
  o.require(rep.max_deviation() <= kAdjointTol, "adjoint deviation " + num(rep.max_deviation()));
  if (o.pass) o.detail = "exact relabelling involutions, adjoint deviation " + num(rep.max_deviation());
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome cli_determinism(const char* cli) {
  Outcome o;
  if (!cli) {
    o.require(false, "no CLI path given");
    return o;
  }
  const auto root = std::filesystem::temp_directory_path() / ("sqrf-acceptance-" + std::to_string(::getpid()));
  const char* runs[][2] = {{"gaussian", "gaussian --xi0 3 --phi 1 --phit 5 --sigma 1"},
                           {"photon", "photon"},
                           {"bell", "bell"},
                           {"thermo", "thermo"}};
  for (const auto& [scenario, args] : runs) {
    std::string reports[2];
    for (int k = 0; k < 2; ++k) {
      const auto dir = root / std::to_string(k);
      std::filesystem::create_directories(dir);
      const std::string cmd = std::string("\"") + cli + "\" --out \"" + dir.string() + "\" " + args + " >/dev/null";
      const int rc = std::system(cmd.c_str());
      o.require(rc == 0, std::string(scenario) + " exited with " + std::to_string(rc));
      reports[k] = slurp(dir / (std::string(scenario) + "-report.json"));
    }
    o.require(!reports[0].empty() && reports[0] == reports[1], std::string(scenario) + " reports differ");
  }
  std::filesystem::remove_all(root);
  if (o.pass) o.detail = "4 scenarios byte-identical across runs";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : nullptr;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"group closure", closure},
      {"interval sign flip", interval_flip},
      {"energy predicate vs oracle", energy_predicate},
      {"QRF unitarity and measure", qrf_unitarity},
      {"Gaussian scenario", gaussian},
      {"photon scenario", photon},
      {"Bell invariance", bell},
      {"thermo goldens", thermo},
      {"involutions", involutions},
      {"CLI determinism", [cli] { return cli_determinism(cli); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("threw: ") + e.what());
    }
    failed += !o.pass;
    std::printf("criterion %2zu %-28s %s  %s\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  }
  std::printf("%d of %zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
