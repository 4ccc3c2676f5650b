#pragma once

// JSON snapshots of states and scenario reports, and CSV emission.
// Doubles are written in shortest round-trip form so a dump/parse cycle is
// bit-exact.

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "json.hpp"
#include "sqrf/bell.hpp"
#include "sqrf/errors.hpp"
#include "sqrf/grid.hpp"
#include "sqrf/qstate.hpp"
#include "sqrf/scenarios.hpp"
#include "sqrf/thermo.hpp"

namespace sqrf {

using Json = nlohmann::ordered_json;

inline constexpr int kStateSchemaVersion = 1;

inline std::string format_double(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

// ---------------------------------------------------------------------------
// State snapshots

inline Json grid_to_json(const GridSpec& g) {
  Json j;
  j["kind"] = std::string(to_string(g.kind()));
  j["quadrature"] = std::string(to_string(g.quadrature()));
  j["uniform"] = g.is_uniform();
  j["periodic"] = g.is_periodic();
  j["spacing"] = g.spacing();
  j["points"] = g.points();
  j["weights"] = g.weights();
  return j;
}

inline GridKind grid_kind_from(const std::string& s) {
  if (s == "rapidity") return GridKind::Rapidity;
  if (s == "log_energy") return GridKind::LogEnergy;
  if (s == "position") return GridKind::Position;
  fail(ErrorCode::InvalidArgument, "unknown grid kind '" + s + "'");
}

inline Quadrature quadrature_from(const std::string& s) {
  if (s == "uniform") return Quadrature::Uniform;
  if (s == "trapezoid") return Quadrature::Trapezoid;
  if (s == "unit") return Quadrature::Unit;
  fail(ErrorCode::InvalidArgument, "unknown quadrature '" + s + "'");
}

inline GridSpec grid_from_json(const Json& j) {
  return GridSpec::restore(grid_kind_from(j.at("kind")), quadrature_from(j.at("quadrature")), j.at("uniform"),
                           j.at("periodic"), j.at("spacing"), j.at("points").get<std::vector<double>>(),
                           j.at("weights").get<std::vector<double>>());
}

inline Json state_to_json(const StateVector& s) {
  Json j;
  j["schema_version"] = kStateSchemaVersion;
  j["basis_order_version"] = kBasisOrderVersion;
  j["basis_order"] = {"system", "sector", "branch", "sheet", "spin", "index"};
  Json systems = Json::array();
  Json grids = Json::array();
  for (const auto& sys : s.systems()) {
    systems.push_back({{"name", sys.name}, {"mass", sys.mass}, {"spin", sys.spin}});
    grids.push_back(grid_to_json(sys.grid));
  }
  j["systems"] = systems;
  j["grids"] = grids;
  Json idx = Json::array();
  Json amps = Json::array();
  for (const auto& e : s.entries()) {
    idx.push_back(e.index);
    amps.push_back({e.value.real(), e.value.imag()});
  }
  j["indices"] = idx;
  j["amplitudes"] = amps;
  return j;
}

inline StateVector state_from_json(const Json& j) {
  if (j.at("basis_order_version") != kBasisOrderVersion)
    fail(ErrorCode::InvalidArgument, "unsupported basis order version");
  const auto& sj = j.at("systems");
  const auto& gj = j.at("grids");
  if (sj.size() != gj.size()) fail(ErrorCode::InvalidArgument, "systems and grids differ in length");
  std::vector<SystemSpec> systems;
  for (std::size_t i = 0; i < sj.size(); ++i)
    systems.emplace_back(sj[i].at("name").get<std::string>(), sj[i].at("mass").get<double>(),
                         sj[i].at("spin").get<bool>(), grid_from_json(gj[i]));
  const auto& idx = j.at("indices");
  const auto& amps = j.at("amplitudes");
  if (idx.size() != amps.size()) fail(ErrorCode::InvalidArgument, "indices and amplitudes differ in length");
  std::vector<Amplitude> entries;
  for (std::size_t i = 0; i < idx.size(); ++i)
    entries.push_back({idx[i].get<std::uint64_t>(), {amps[i].at(0).get<double>(), amps[i].at(1).get<double>()}});
  return StateVector(std::move(systems), std::move(entries));
}

// ---------------------------------------------------------------------------
// Report pieces

inline Json momentum_json(const TwoMomentum& q) { return Json::array({q.e, q.p}); }

inline Json mode_json(const SystemSpec& sys, const Mode& m) {
  Json j;
  j["sector"] = std::string(to_string(m.sector));
  j["branch"] = m.branch;
  j["sheet"] = m.sheet;
  if (sys.spin) j["spin"] = m.spin;
  j["coordinate"] = sys.grid.point(m.index);
  if (!sys.is_position()) j["momentum"] = momentum_json(mode_momentum(sys, m));
  return j;
}

/// Human-readable listing of a (small) state's kets.
inline Json kets_json(const StateVector& s) {
  Json out = Json::array();
  for (const auto& e : s.entries()) {
    const JointKet k = s.decode_joint(e.index);
    Json ket;
    for (std::size_t i = 0; i < k.size(); ++i) ket[s.systems()[i].name] = mode_json(s.systems()[i], k[i]);
    out.push_back({{"amplitude", {e.value.real(), e.value.imag()}}, {"ket", ket}});
  }
  return out;
}

inline Json photon_report_json(const PhotonReport& r, const Json& config) {
  Json j;
  j["scenario"] = "photon";
  j["config"] = config;
  Json branches = Json::array();
  for (const auto& b : r.branches)
    branches.push_back({{"branch", b.branch},
                        {"probability", b.probability},
                        {"raw_momentum", momentum_json(b.raw)},
                        {"raw_sector", std::string(to_string(b.raw_sector))},
                        {"momentum", momentum_json(b.final)},
                        {"sector", std::string(to_string(b.final_sector))}});
  j["branches"] = branches;
  j["probabilities"] = {{"sub", r.branches.at(0).probability}, {"sup", r.branches.at(1).probability}};
  j["doppler_oracle"] = r.doppler_oracle;
  j["entanglement_bits"] = r.entanglement_bits;
  j["sector_correlated"] = r.sector_correlated;
  j["norm"] = r.norm;
  j["final_kets"] = kets_json(r.final);
  j["final_state"] = state_to_json(r.final);
  return j;
}

inline Json gaussian_report_json(const GaussianReport& r, const Json& config) {
  Json j;
  j["scenario"] = "gaussian";
  j["config"] = config;
  j["normalization"] = r.normalization;
  j["probabilities"] = {{"sub", r.p_sub}, {"sup_in", r.p_sup_in}, {"sup_out", r.p_sup_out}};
  j["p_incoming_given_sup"] = r.p_incoming_given_sup;
  j["p_incoming_oracle"] = r.p_incoming_oracle;
  j["zero_energy_weight"] = r.zero_energy_weight;
  j["sub_outgoing_fraction"] = r.sub_outgoing_fraction;
  j["entanglement_bits"] = entanglement_entropy(r.final, {"B"});
  j["deviations"] = {{"linf", r.linf}, {"l2", r.l2}};
  j["norm"] = r.norm;
  j["grids"] = {{"B", grid_to_json(r.config.grid)}};
  return j;
}

// ---------------------------------------------------------------------------
// CSV

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) fail(ErrorCode::InvalidArgument, "csv row has wrong width");
    rows_.push_back(cells);
  }
  void row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    for (double c : cells) s.push_back(format_double(c));
    row(s);
  }

  std::string str() const {
    std::ostringstream os;
    write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
    return os.str();
  }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) os << ',';
      const std::string& c = cells[i];
      if (c.find_first_of(",\"\n") == std::string::npos) {
        os << c;
        continue;
      }
      os << '"';
      for (char ch : c) os << (ch == '"' ? "\"\"" : std::string(1, ch));
      os << '"';
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Per-term density |c|²/w of B on the output grid of the packet scenario.
inline CsvWriter gaussian_terms_csv(const GaussianReport& r) {
  const auto& g = r.config.grid;
  std::vector<double> sub(g.size()), in(g.size()), out(g.size());
  const auto& s = r.final;
  const std::size_t ib = s.system_index("B");
  const std::size_t ic = s.system_index("C");
  for (const auto& e : s.entries()) {
    const JointKet k = s.decode_joint(e.index);
    const double d = std::norm(e.value) / g.weight(k[ib].index);
    if (k[ic].branch > 0)
      sub[k[ib].index] += d;
    else if (k[ib].sector == Sector::Incoming)
      in[k[ib].index] += d;
    else
      out[k[ib].index] += d;
  }
  CsvWriter w({"xi", "sub", "sup_in", "sup_out"});
  for (std::size_t i = 0; i < g.size(); ++i) w.row(std::vector<double>{g.point(i), sub[i], in[i], out[i]});
  return w;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  f << text;
  if (!f) fail(ErrorCode::InvalidArgument, "failed writing '" + path + "'");
}

}  // namespace sqrf
