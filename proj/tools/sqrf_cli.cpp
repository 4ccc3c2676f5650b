// sqrf: scenario runner. Writes <out>/<scenario>-report.json and
// <out>/<scenario>-<series>.csv; default output dir comes from SQRF_OUT_DIR.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sqrf/bell.hpp"
#include "sqrf/io.hpp"
#include "sqrf/scenarios.hpp"
#include "sqrf/thermo.hpp"

namespace {

using sqrf::CsvWriter;
using sqrf::Json;
using sqrf::format_double;

constexpr int kConfigSchema = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInvariant = 3;

std::vector<double> parse_list(const std::string& s, std::size_t want = 0) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double v = 0;
    const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || p != cell.data() + cell.size())
      sqrf::fail(sqrf::ErrorCode::InvalidArgument, "not a number: '" + cell + "'");
    out.push_back(v);
  }
  if (want && out.size() != want)
    sqrf::fail(sqrf::ErrorCode::InvalidArgument, "expected " + std::to_string(want) + " values in '" + s + "'");
  return out;
}

// "lo:hi:step", inclusive of hi up to rounding.
std::vector<double> parse_range(const std::string& s) {
  std::string t = s;
  for (char& c : t)
    if (c == ':') c = ',';
  const auto r = parse_list(t, 3);
  if (!(r[2] > 0) || !(r[1] >= r[0])) sqrf::fail(sqrf::ErrorCode::InvalidArgument, "bad range '" + s + "'");
  const auto n = static_cast<long long>(std::floor((r[1] - r[0]) / r[2] + 1e-9));
  std::vector<double> out;
  for (long long i = 0; i <= n; ++i) out.push_back(r[0] + static_cast<double>(i) * r[2]);
  return out;
}

// "tag:value,tag:value"
std::vector<std::pair<std::string, double>> parse_tagged(const std::string& s) {
  std::vector<std::pair<std::string, double>> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto colon = cell.find(':');
    if (colon == std::string::npos) sqrf::fail(sqrf::ErrorCode::InvalidArgument, "expected tag:value, got '" + cell + "'");
    out.push_back({cell.substr(0, colon), parse_list(cell.substr(colon + 1), 1)[0]});
  }
  return out;
}

sqrf::BranchTag branch_from(const std::string& tag) {
  if (tag == "sub") return sqrf::BranchTag::Sub;
  if (tag == "sup+" || tag == "sup") return sqrf::BranchTag::SupPlus;
  if (tag == "sup-") return sqrf::BranchTag::SupMinus;
  sqrf::fail(sqrf::ErrorCode::InvalidArgument, "unknown branch tag '" + tag + "'");
}

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json mat_json(const sqrf::Mat2& m) { return Json::array({Json::array({m.tt, m.tx}), Json::array({m.xt, m.xx})}); }

// Flags that parse as numbers are stored as numbers, anything else as a string.
Json typed(const std::string& s) {
  long long n = 0;
  const auto [q, eq] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (!s.empty() && eq == std::errc{} && q == s.data() + s.size()) return n;
  double v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (!s.empty() && ec == std::errc{} && p == s.data() + s.size()) return v;
  return s;
}

Json resolved_config(const CLI::App& sub) {
  Json params = Json::object();
  for (const CLI::Option* o : sub.get_options()) {
    if (o->get_lnames().empty()) continue;
    const std::string name = o->get_lnames().front();
    if (name == "help" || name == "config" || name == "out") continue;
    const auto& res = o->results();
    params[name] = typed(res.empty() ? o->get_default_str() : res.back());
  }
  Json j;
  j["schema_version"] = kConfigSchema;
  j["subcommand"] = sub.get_name();
  j["params"] = params;
  return j;
}

struct Output {
  std::string dir;
  void write(const std::string& scenario, const Json& report,
             const std::vector<std::pair<std::string, CsvWriter>>& series = {}) const {
    std::filesystem::create_directories(dir);
    const std::filesystem::path base(dir);
    sqrf::write_text((base / (scenario + "-report.json")).string(), report.dump(2) + "\n");
    for (const auto& [name, csv] : series)
      sqrf::write_text((base / (scenario + "-" + name + ".csv")).string(), csv.str());
  }
};

// Config keys become "--key value" right after the subcommand, so flags given
// on the command line (later, TakeLast) win.
std::vector<std::string> expand_config(std::vector<std::string> args, const std::vector<std::string>& subcommands) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream f(path);
  if (!f) sqrf::fail(sqrf::ErrorCode::InvalidArgument, "cannot read config '" + path + "'");
  const Json cfg = Json::parse(f);
  if (!cfg.contains("schema_version") || cfg["schema_version"] != kConfigSchema)
    sqrf::fail(sqrf::ErrorCode::InvalidArgument, "config schema_version must be " + std::to_string(kConfigSchema));
  const Json params = cfg.contains("params") ? cfg["params"] : Json::object();
  std::vector<std::string> injected;
  for (const auto& [key, value] : params.items()) {
    injected.push_back("--" + key);
    if (value.is_string())
      injected.push_back(value.get<std::string>());
    else if (value.is_number())
      injected.push_back(format_double(value.get<double>()));
    else
      injected.push_back(value.dump());
  }
  std::size_t at = args.size();
  for (std::size_t i = 1; i < args.size(); ++i)
    if (std::find(subcommands.begin(), subcommands.end(), args[i]) != subcommands.end()) {
      at = i + 1;
      break;
    }
  if (at == args.size() && cfg.contains("subcommand")) {
    args.push_back(cfg["subcommand"].get<std::string>());
    at = args.size();
  }
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(), injected.end());
  return args;
}

// ---------------------------------------------------------------------------

struct BoostArgs {
  double v = 0.6;
  int sign = 1;
  std::string event = "0,1";
  std::string momentum;
};

int run_boost(const BoostArgs& a, const CLI::App& sub, const Output& out) {
  const sqrf::Boost b = sqrf::boost_from_velocity(a.v, a.sign);
  const auto ev = parse_list(a.event, 2);
  const sqrf::TwoVector e = sqrf::apply(b, sqrf::TwoVector{ev[0], ev[1]});
  Json rep;
  rep["scenario"] = "boost";
  rep["config"] = resolved_config(sub);
  rep["branch"] = std::string(sqrf::to_string(b.branch()));
  rep["rapidity"] = b.rapidity().value;
  rep["matrix"] = mat_json(b.matrix());
  rep["event"] = Json::array({ev[0], ev[1]});
  rep["event_out"] = Json::array({e.t, e.x});
  rep["interval_in"] = sqrf::interval(sqrf::TwoVector{ev[0], ev[1]});
  rep["interval_out"] = sqrf::interval(e);
  std::cout << "(" << short_num(e.t) << ", " << short_num(e.x) << ")  branch " << sqrf::to_string(b.branch()) << "\n";
  if (!a.momentum.empty()) {
    const auto q = parse_list(a.momentum, 2);
    const sqrf::TwoMomentum qq = sqrf::apply(b, sqrf::TwoMomentum{q[0], q[1]});
    rep["momentum"] = Json::array({q[0], q[1]});
    rep["momentum_out"] = Json::array({qq.e, qq.p});
    std::cout << "momentum (" << short_num(qq.e) << ", " << short_num(qq.p) << ")\n";
  }
  out.write("boost", rep);
  return 0;
}

struct ComposeArgs {
  double v1 = 0.5, v2 = 0.5;
  int s1 = 1, s2 = 1;
};

int run_compose(const ComposeArgs& a, const CLI::App& sub, const Output& out) {
  const sqrf::Boost l1 = sqrf::boost_from_velocity(a.v1, a.s1);
  const sqrf::Boost l2 = sqrf::boost_from_velocity(a.v2, a.s2);
  const sqrf::Boost c = sqrf::compose(l1, l2);
  Json rep;
  rep["scenario"] = "compose";
  rep["config"] = resolved_config(sub);
  rep["first"] = {{"branch", std::string(sqrf::to_string(l1.branch()))}, {"matrix", mat_json(l1.matrix())}};
  rep["second"] = {{"branch", std::string(sqrf::to_string(l2.branch()))}, {"matrix", mat_json(l2.matrix())}};
  rep["branch"] = std::string(sqrf::to_string(c.branch()));
  rep["velocity"] = c.velocity();
  rep["determinant"] = c.det();
  rep["matrix"] = mat_json(c.matrix());
  std::cout << sqrf::to_string(c.branch()) << "  V = " << short_num(c.velocity()) << "  det = " << short_num(c.det())
            << "\n";
  out.write("compose", rep);
  return 0;
}

struct EnergyArgs {
  double m = 1.0, p = 1.0;
  std::string v_range = "1.1:3.0:0.1";
  int sign = 1;
};

int run_energy_table(const EnergyArgs& a, const CLI::App& sub, const Output& out) {
  if (!(a.m >= 0) || !std::isfinite(a.p)) sqrf::fail(sqrf::ErrorCode::InvalidArgument, "need m >= 0 and finite p");
  const double e = std::sqrt(a.m * a.m + a.p * a.p);
  CsvWriter csv({"v", "energy", "sign"});
  Json rows = Json::array();
  std::string prev;
  double change_lo = NAN, change_hi = NAN, prev_v = NAN;
  for (double v : parse_range(a.v_range)) {
    if (std::abs(std::abs(v) - 1) <= sqrf::kLightlikeTolerance) continue;
    const sqrf::Velocity vel(v);
    const double ep = sqrf::boosted_energy(e, a.p, vel, a.sign);
    std::string sign;
    try {
      sign = std::string(sqrf::to_string(sqrf::energy_sign_predicate(a.m, a.p, vel, a.sign)));
    } catch (const sqrf::Error& err) {
      if (err.code() != sqrf::ErrorCode::BoundaryCase) throw;
      sign = "Boundary";
    }
    csv.row(std::vector<std::string>{format_double(v), format_double(ep), sign});
    rows.push_back({{"v", v}, {"energy", ep}, {"sign", sign}});
    if (!prev.empty() && sign != prev && std::isnan(change_lo)) {
      change_lo = prev_v;
      change_hi = v;
    }
    prev = sign;
    prev_v = v;
  }
  Json rep;
  rep["scenario"] = "energy-table";
  rep["config"] = resolved_config(sub);
  rep["energy"] = e;
  rep["boundary_velocity"] = a.p != 0 ? Json(std::sqrt(a.m * a.m / (a.p * a.p) + 1)) : Json(nullptr);
  rep["sign_change"] = std::isnan(change_lo) ? Json(nullptr) : Json::array({change_lo, change_hi});
  rep["rows"] = rows;
  if (!std::isnan(change_lo))
    std::cout << "sign change between V = " << short_num(change_lo) << " and " << short_num(change_hi);
  else
    std::cout << "no sign change in range";
  if (a.p != 0) std::cout << "  (boundary " << short_num(std::sqrt(a.m * a.m / (a.p * a.p) + 1)) << ")";
  std::cout << "\n";
  out.write("energy-table", rep, {{"energy", csv}});
  return 0;
}

struct PhotonArgs {
  double pb = 1.0;
  double xi = std::log(2.0);  // p_A = (1.25, 0.75)
  double ma = 1.0, mc = 1.0;
  int sup_sign = 1;
};

int run_photon(const PhotonArgs& a, const CLI::App& sub, const Output& out) {
  sqrf::PhotonScenarioConfig c;
  c.p_b = a.pb;
  c.m_a = a.ma;
  c.m_c = a.mc;
  c.p_a = {a.ma * std::cosh(a.xi), a.ma * std::sinh(a.xi)};
  c.p_tilde_a = {a.ma * std::sinh(a.xi), a.ma * std::cosh(a.xi)};
  c.sup_sign = a.sup_sign;
  const sqrf::PhotonReport r = sqrf::run_photon_scenario(c);
  CsvWriter csv({"branch", "probability", "raw_energy", "raw_momentum", "raw_sector", "energy", "momentum", "sector"});
  for (const auto& b : r.branches) {
    csv.row(std::vector<std::string>{b.branch, format_double(b.probability), format_double(b.raw.e),
                                     format_double(b.raw.p), std::string(sqrf::to_string(b.raw_sector)),
                                     format_double(b.final.e), format_double(b.final.p),
                                     std::string(sqrf::to_string(b.final_sector))});
    std::cout << b.branch << ": E = " << short_num(b.final.e) << " " << sqrf::to_string(b.final_sector)
              << " (raw E = " << short_num(b.raw.e) << ")\n";
  }
  std::cout << "entanglement " << short_num(r.entanglement_bits) << " bit\n";
  out.write("photon", sqrf::photon_report_json(r, resolved_config(sub)), {{"branches", csv}});
  if (std::abs(r.norm - 1) > 1e-10) {
    std::cerr << "norm drifted to " << r.norm << "\n";
    return kExitInvariant;
  }
  return 0;
}

struct GaussianArgs {
  double xi0 = 3, phi = 1, phit = 5, sigma = 1;
  double grid_lo = -10, grid_hi = 10;
  std::size_t grid_n = 2001;
  double ma = 1, mb = 1, mc = 1;
  int sup_sign = -1;
  double coverage = 6;
};

int run_gaussian(const GaussianArgs& a, const CLI::App& sub, const Output& out) {
  sqrf::GaussianScenarioConfig c;
  c.packet = {a.xi0, a.sigma, a.coverage};
  c.phi = a.phi;
  c.phi_tilde = a.phit;
  c.grid = sqrf::GridSpec::uniform(a.grid_lo, a.grid_hi, a.grid_n);
  c.m_a = a.ma;
  c.m_b = a.mb;
  c.m_c = a.mc;
  c.sup_sign = a.sup_sign;
  c.coverage_sigmas = a.coverage;
  const sqrf::GaussianReport r = sqrf::run_gaussian_scenario(c);
  std::cout << "P(Incoming|sup) = " << short_num(r.p_incoming_given_sup) << "  oracle "
            << short_num(r.p_incoming_oracle) << "  Linf " << short_num(r.linf) << "\n";
  out.write("gaussian", sqrf::gaussian_report_json(r, resolved_config(sub)), {{"terms", sqrf::gaussian_terms_csv(r)}});
  if (std::abs(r.norm - 1) > 1e-10) {
    std::cerr << "norm drifted to " << r.norm << "\n";
    return kExitInvariant;
  }
  return 0;
}

struct ThermoArgs {
  double T = 300, S = 1, dQ = 1;
  std::string v = "0.6,2";
};

int run_thermo(const ThermoArgs& a, const CLI::App& sub, const Output& out) {
  CsvWriter csv({"approach", "v", "gamma", "S", "dQ", "T", "note"});
  Json rows = Json::array();
  for (double v : parse_list(a.v)) {
    for (sqrf::Approach ap : sqrf::kAllApproaches) {
      const sqrf::ThermoResult r = sqrf::transform_thermo({a.S, a.dQ, a.T}, sqrf::Velocity(v), ap);
      const std::string note = r.rest_frame_only ? "rest_frame_only" : r.unspecified ? "unspecified" : "";
      csv.row(std::vector<std::string>{std::string(sqrf::to_string(ap)), format_double(v), format_double(r.gamma),
                                       format_double(r.state.S), format_double(r.state.dQ), format_double(r.state.T),
                                       note});
      rows.push_back({{"approach", std::string(sqrf::to_string(ap))},
                      {"v", v},
                      {"gamma", r.gamma},
                      {"S", r.state.S},
                      {"dQ", r.state.dQ},
                      {"T", r.state.T},
                      {"entropy_energy_ratio", r.entropy_energy_ratio},
                      {"note", note}});
      std::cout << sqrf::to_string(ap) << " V=" << short_num(v) << ": T' = " << short_num(r.state.T)
                << (note.empty() ? "" : "  [" + note + "]") << "\n";
    }
  }
  Json rep;
  rep["scenario"] = "thermo";
  rep["config"] = resolved_config(sub);
  rep["rows"] = rows;
  out.write("thermo", rep, {{"table", csv}});
  return 0;
}

struct BellArgs {
  std::string lab = "sub:0.75,sup:0.5";
  std::string alice = "0,90";
  std::string bob = "225,135";
  double grid_lo = -4, grid_hi = 4;
  std::size_t grid_n = 33;
};

int run_bell(const BellArgs& a, const CLI::App& sub, const Output& out) {
  sqrf::BellSetup setup;
  setup.grid = sqrf::GridSpec::uniform(a.grid_lo, a.grid_hi, a.grid_n);
  const double r = 1.0;
  for (const auto& [tag, xi] : parse_tagged(a.lab)) {
    const auto idx = setup.grid.locate(xi);
    if (!idx) sqrf::fail(sqrf::ErrorCode::NonCommensurate, "lab rapidity " + short_num(xi) + " is not a grid point");
    const sqrf::BranchTag b = branch_from(tag);
    const int shell = b == sqrf::BranchTag::Sub ? 1 : -1;
    const int sheet = b == sqrf::BranchTag::SupMinus ? -1 : 1;
    setup.lab.push_back({sqrf::Mode{sqrf::Sector::Outgoing, shell, sheet, 0, *idx}, r});
  }
  const auto al = parse_list(a.alice, 2);
  const auto bo = parse_list(a.bob, 2);
  const sqrf::MeasurementSetting x = sqrf::MeasurementSetting::xz(al[0], sqrf::Party::Alice);
  const sqrf::MeasurementSetting xp = sqrf::MeasurementSetting::xz(al[1], sqrf::Party::Alice);
  const sqrf::MeasurementSetting y = sqrf::MeasurementSetting::xz(bo[0], sqrf::Party::Bob);
  const sqrf::MeasurementSetting yp = sqrf::MeasurementSetting::xz(bo[1], sqrf::Party::Bob);

  const sqrf::StateVector rest =
      sqrf::build_bell_state(sqrf::EntangledSpinState::singlet(sqrf::rest_index(setup.grid)), setup);
  const sqrf::StateVector lab = sqrf::boost_to_lab(rest);

  CsvWriter csv({"frame", "x", "y", "a", "b", "p"});
  Json tables = Json::array();
  double dev = 0;
  const std::pair<double, const sqrf::MeasurementSetting*> xs[] = {{al[0], &x}, {al[1], &xp}};
  const std::pair<double, const sqrf::MeasurementSetting*> ys[] = {{bo[0], &y}, {bo[1], &yp}};
  for (const auto& [xa, xset] : xs)
    for (const auto& [yb, yset] : ys) {
      const sqrf::ProbabilityTable pr = sqrf::bell_probabilities(rest, *xset, *yset);
      const sqrf::ProbabilityTable pl = sqrf::bell_probabilities(lab, *xset, *yset);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const int oa = i == 0 ? 1 : -1, ob = j == 0 ? 1 : -1;
          csv.row(std::vector<std::string>{"rest", format_double(xa), format_double(yb), std::to_string(oa),
                                           std::to_string(ob), format_double(pr[i][j])});
          csv.row(std::vector<std::string>{"lab", format_double(xa), format_double(yb), std::to_string(oa),
                                           std::to_string(ob), format_double(pl[i][j])});
          dev = std::max(dev, std::abs(pr[i][j] - pl[i][j]));
        }
      tables.push_back({{"x", xa},
                        {"y", yb},
                        {"rest", {{pr[0][0], pr[0][1]}, {pr[1][0], pr[1][1]}}},
                        {"lab", {{pl[0][0], pl[0][1]}, {pl[1][0], pl[1][1]}}}});
    }
  const double chsh_rest = sqrf::chsh_value(rest, x, xp, y, yp);
  const double chsh_lab = sqrf::chsh_value(lab, x, xp, y, yp);
  Json rep;
  rep["scenario"] = "bell";
  rep["config"] = resolved_config(sub);
  rep["chsh"] = {{"rest", chsh_rest}, {"lab", chsh_lab}};
  rep["max_table_deviation"] = dev;
  rep["spin_entropy_bits"] = {{"rest", sqrf::entanglement_entropy(rest, {"A"})},
                              {"lab", sqrf::entanglement_entropy(lab, {"A"})}};
  rep["tables"] = tables;
  std::cout << "CHSH rest " << short_num(chsh_rest) << "  lab " << short_num(chsh_lab) << "  max table deviation "
            << short_num(dev) << "\n";
  out.write("bell", rep, {{"probabilities", csv}});
  if (dev > 1e-10) {
    std::cerr << "probability tables differ between frames\n";
    return kExitInvariant;
  }
  return 0;
}

struct AdjointArgs {
  double grid_lo = -2, grid_hi = 2;
  std::size_t grid_n = 17;
  std::string rapidities = "sub:0.25,sub:-0.75,sup+:0.5,sup-:-0.25";
  std::string composite = "sub:0.5,sup+:0.25";
  double tol = 1e-12;
};

int run_adjoint(const AdjointArgs& a, const CLI::App& sub, const Output& out) {
  const sqrf::SystemSpec sys("B", 1.0, false, sqrf::GridSpec::uniform(a.grid_lo, a.grid_hi, a.grid_n));
  std::vector<sqrf::Rapidity> samples;
  for (const auto& [tag, v] : parse_tagged(a.rapidities)) samples.push_back({v, branch_from(tag)});
  const auto comp = parse_tagged(a.composite);
  if (comp.size() != 2) sqrf::fail(sqrf::ErrorCode::InvalidArgument, "composite needs exactly two boosts");
  const sqrf::AdjointReport r = sqrf::adjoint_relation_check(
      sys, samples, {{comp[0].second, branch_from(comp[0].first)}, {comp[1].second, branch_from(comp[1].first)}});
  CsvWriter csv({"branch", "rapidity", "deviation"});
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    csv.row(std::vector<std::string>{std::string(sqrf::to_string(row.rapidity.branch)),
                                     format_double(row.rapidity.value), format_double(row.deviation)});
    rows.push_back({{"branch", std::string(sqrf::to_string(row.rapidity.branch))},
                    {"rapidity", row.rapidity.value},
                    {"deviation", row.deviation}});
  }
  Json rep;
  rep["scenario"] = "adjoint-check";
  rep["config"] = resolved_config(sub);
  rep["rows"] = rows;
  rep["composite_deviation"] = r.composite_deviation;
  rep["composite_adjoint_deviation"] = r.composite_adjoint_deviation;
  rep["max_deviation"] = r.max_deviation();
  rep["pass"] = r.max_deviation() <= a.tol;
  std::cout << (r.max_deviation() <= a.tol ? "ok" : "FAIL") << "  max deviation " << short_num(r.max_deviation())
            << "\n";
  out.write("adjoint-check", rep, {{"deviations", csv}});
  return r.max_deviation() <= a.tol ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub- and superluminal quantum reference frame scenarios in 1+1D"};
  app.require_subcommand(1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast)->always_capture_default();

  const char* env_out = std::getenv("SQRF_OUT_DIR");
  Output out{env_out && *env_out ? env_out : "."};
  std::string config_path;
  app.add_option("--out", out.dir, "output directory (default $SQRF_OUT_DIR or .)");
  app.add_option("--config", config_path, "JSON config with schema_version and params; flags override it");

  BoostArgs boost;
  auto* s_boost = app.add_subcommand("boost", "boost an event (and optionally a momentum)");
  s_boost->add_option("--v", boost.v, "velocity, |v| != 1");
  s_boost->add_option("--sign", boost.sign, "superluminal sign choice")->check(CLI::IsMember({-1, 1}));
  s_boost->add_option("--event", boost.event, "t,x");
  s_boost->add_option("--momentum", boost.momentum, "E,p");

  ComposeArgs comp;
  auto* s_comp = app.add_subcommand("compose", "compose two boosts");
  s_comp->add_option("--v1", comp.v1);
  s_comp->add_option("--s1", comp.s1)->check(CLI::IsMember({-1, 1}));
  s_comp->add_option("--v2", comp.v2);
  s_comp->add_option("--s2", comp.s2)->check(CLI::IsMember({-1, 1}));

  EnergyArgs energy;
  auto* s_energy = app.add_subcommand("energy-table", "sign of the boosted energy over a velocity range");
  s_energy->add_option("--m", energy.m, "mass");
  s_energy->add_option("--p", energy.p, "spatial momentum");
  s_energy->add_option("--v-range", energy.v_range, "lo:hi:step");
  s_energy->add_option("--sign", energy.sign)->check(CLI::IsMember({-1, 1}));

  PhotonArgs photon;
  auto* s_photon = app.add_subcommand("photon", "photon seen from a sub/sup superposed frame");
  s_photon->add_option("--pb", photon.pb, "photon energy in A's frame");
  s_photon->add_option("--xi", photon.xi, "control rapidity");
  s_photon->add_option("--ma", photon.ma);
  s_photon->add_option("--mc", photon.mc);
  s_photon->add_option("--sup-sign", photon.sup_sign)->check(CLI::IsMember({-1, 1}));

  GaussianArgs gauss;
  auto* s_gauss = app.add_subcommand("gaussian", "Gaussian packet seen from a sub/sup superposed frame");
  s_gauss->add_option("--xi0", gauss.xi0);
  s_gauss->add_option("--phi", gauss.phi);
  s_gauss->add_option("--phit", gauss.phit);
  s_gauss->add_option("--sigma", gauss.sigma);
  s_gauss->add_option("--grid-lo", gauss.grid_lo);
  s_gauss->add_option("--grid-hi", gauss.grid_hi);
  s_gauss->add_option("--grid-n", gauss.grid_n);
  s_gauss->add_option("--ma", gauss.ma);
  s_gauss->add_option("--mb", gauss.mb);
  s_gauss->add_option("--mc", gauss.mc);
  s_gauss->add_option("--sup-sign", gauss.sup_sign)->check(CLI::IsMember({-1, 1}));
  s_gauss->add_option("--coverage", gauss.coverage, "packet cutoff and grid margin, in sigmas");

  ThermoArgs thermo;
  auto* s_thermo = app.add_subcommand("thermo", "temperature under the four transformation rules");
  s_thermo->add_option("--T", thermo.T);
  s_thermo->add_option("--S", thermo.S);
  s_thermo->add_option("--dQ", thermo.dQ);
  s_thermo->add_option("--v", thermo.v, "comma-separated velocities");

  BellArgs bell;
  auto* s_bell = app.add_subcommand("bell", "singlet CHSH in the rest and lab frames");
  s_bell->add_option("--lab", bell.lab, "lab kets, e.g. sub:0.75,sup:0.5,sup-:0.25, or empty for rest");
  s_bell->add_option("--alice", bell.alice, "two angles in degrees");
  s_bell->add_option("--bob", bell.bob, "two angles in degrees");
  s_bell->add_option("--grid-lo", bell.grid_lo);
  s_bell->add_option("--grid-hi", bell.grid_hi);
  s_bell->add_option("--grid-n", bell.grid_n);

  AdjointArgs adj;
  auto* s_adj = app.add_subcommand("adjoint-check", "inverse boost vs adjoint on the discrete basis");
  s_adj->add_option("--grid-lo", adj.grid_lo);
  s_adj->add_option("--grid-hi", adj.grid_hi);
  s_adj->add_option("--grid-n", adj.grid_n);
  s_adj->add_option("--rapidities", adj.rapidities, "tag:value list, tags sub, sup+, sup-");
  s_adj->add_option("--composite", adj.composite, "two tag:value boosts");
  s_adj->add_option("--tol", adj.tol);

  try {
    std::vector<std::string> names;
    for (const CLI::App* s : app.get_subcommands({})) names.push_back(s->get_name());
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args), names);
    std::vector<const char*> cargs;
    for (const auto& s : args) cargs.push_back(s.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  } catch (const sqrf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Json::exception& e) {
    std::cerr << "error: bad config: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*s_boost) return run_boost(boost, *s_boost, out);
    if (*s_comp) return run_compose(comp, *s_comp, out);
    if (*s_energy) return run_energy_table(energy, *s_energy, out);
    if (*s_photon) return run_photon(photon, *s_photon, out);
    if (*s_gauss) return run_gaussian(gauss, *s_gauss, out);
    if (*s_thermo) return run_thermo(thermo, *s_thermo, out);
    if (*s_bell) return run_bell(bell, *s_bell, out);
    if (*s_adj) return run_adjoint(adj, *s_adj, out);
  } catch (const sqrf::Error& e) {
    std::cerr << "error [" << sqrf::to_string(e.code()) << "]: " << e.what() << "\n";
    return e.is_invariant_failure() ? kExitInvariant : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
