#include <gtest/gtest.h>

#include <bit>
#include <charconv>
#include <cstdint>
#include <random>
#include <sstream>

#include "sqrf/io.hpp"

using namespace sqrf;

namespace {

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

StateVector sample_state() {
  std::mt19937_64 rng(79);
  std::normal_distribution<double> g;
  const SystemSpec a("A", 1.0, true, GridSpec::uniform(-2, 2, 9));
  const SystemSpec b("B", 0.0, false, GridSpec::discrete({-0.3, 0.1, 0.7}, GridKind::LogEnergy));
  std::vector<std::pair<JointKet, Complex>> kets;
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      kets.push_back({{Mode{i % 2 ? Sector::Incoming : Sector::Outgoing, i % 3 ? 1 : -1, 1, i % 4 ? 1 : -1, i},
                       Mode{Sector::Outgoing, j % 2 ? 1 : -1, 1, 0, j}},
                      {g(rng) / 3, g(rng) * 1e-7}});
  return StateVector::from_kets({a, b}, kets).normalized();
}

}  // namespace

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(-2.5), "-2.5");
  std::mt19937_64 rng(83);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int i = 0; i < 10000; ++i) {
    const double x = std::bit_cast<double>(bits(rng));
    if (!std::isfinite(x)) continue;
    const std::string t = format_double(x);
    double back = 0;
    std::from_chars(t.data(), t.data() + t.size(), back);
    EXPECT_TRUE(same_bits(back, x)) << t;
  }
}

TEST(StateJson, RoundTripIsBitExact) {
  const StateVector s = sample_state();
  const std::string text = state_to_json(s).dump();
  const StateVector t = state_from_json(Json::parse(text));
  ASSERT_EQ(t.entries().size(), s.entries().size());
  for (std::size_t k = 0; k < s.entries().size(); ++k) {
    EXPECT_EQ(t.entries()[k].index, s.entries()[k].index);
    EXPECT_TRUE(same_bits(t.entries()[k].value.real(), s.entries()[k].value.real()));
    EXPECT_TRUE(same_bits(t.entries()[k].value.imag(), s.entries()[k].value.imag()));
  }
  for (std::size_t i = 0; i < s.systems().size(); ++i) {
    EXPECT_EQ(t.systems()[i].name, s.systems()[i].name);
    EXPECT_EQ(t.systems()[i].grid.points(), s.systems()[i].grid.points());
    EXPECT_EQ(t.systems()[i].grid.weights(), s.systems()[i].grid.weights());
  }
  EXPECT_EQ(state_to_json(t).dump(), text);
}

TEST(StateJson, RejectsOtherBasisOrder) {
  Json j = state_to_json(sample_state());
  j["basis_order_version"] = 99;
  EXPECT_THROW(state_from_json(j), Error);
  j = state_to_json(sample_state());
  j["indices"].erase(0);
  EXPECT_THROW(state_from_json(j), Error);
}

TEST(GridJson, RoundTrip) {
  const std::vector<GridSpec> grids = {GridSpec::uniform(-1, 1, 5, GridKind::Rapidity, Quadrature::Trapezoid),
                                       GridSpec::periodic(8, 0.25), GridSpec::discrete({0.2, 0.5})};
  for (const GridSpec& g : grids) {
    const GridSpec r = grid_from_json(Json::parse(grid_to_json(g).dump()));
    EXPECT_EQ(r.points(), g.points());
    EXPECT_EQ(r.weights(), g.weights());
    EXPECT_EQ(r.kind(), g.kind());
    EXPECT_EQ(r.is_periodic(), g.is_periodic());
  }
  EXPECT_THROW(grid_kind_from("momentum"), Error);
}

TEST(Csv, WritesHeaderRowsAndQuotes) {
  CsvWriter w({"name", "value"});
  w.row(std::vector<std::string>{"a,b", "say \"hi\""});
  EXPECT_EQ(w.str(), "name,value\n\"a,b\",\"say \"\"hi\"\"\"\n");
  EXPECT_THROW(w.row(std::vector<double>{1.0}), Error);
}

TEST(Csv, GaussianTermsIntegrateToProbabilities) {
  const GaussianReport r = run_gaussian_scenario({});
  const std::string text = gaussian_terms_csv(r).str();
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "xi,sub,sup_in,sup_out");
  const double h = r.config.grid.spacing();
  double sub = 0, sin = 0, sout = 0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ls, cell, ',')) v.push_back(std::stod(cell));
    ASSERT_EQ(v.size(), 4u);
    sub += v[1] * h;
    sin += v[2] * h;
    sout += v[3] * h;
    ++rows;
  }
  EXPECT_EQ(rows, r.config.grid.size());
  EXPECT_NEAR(sub, r.p_sub, 1e-12);
  EXPECT_NEAR(sin, r.p_sup_in, 1e-12);
  EXPECT_NEAR(sout, r.p_sup_out, 1e-12);
}
