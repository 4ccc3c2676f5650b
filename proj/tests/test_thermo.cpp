#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sqrf/thermo.hpp"

using namespace sqrf;

namespace {

// Γ written out: 1/√(1−V²) below light speed, 1/√(V²−1) above.
double oracle_gamma(double v) { return std::abs(v) < 1 ? 1 / std::sqrt(1 - v * v) : 1 / std::sqrt(v * v - 1); }

const ThermoState kRoom{2.0, 5.0, 300.0};

}  // namespace

TEST(Thermo, SubluminalGoldens) {
  const Velocity v(0.6);
  EXPECT_NEAR(transform_thermo(kRoom, v, Approach::EinsteinPlanck).state.T, 240.0, 1e-10);
  EXPECT_NEAR(transform_thermo(kRoom, v, Approach::Ott).state.T, 375.0, 1e-10);
  EXPECT_EQ(transform_thermo(kRoom, v, Approach::Landsberg).state.T, 300.0);
  EXPECT_NEAR(transform_thermo(kRoom, v, Approach::Ott).gamma, 1.25, 1e-14);
}

TEST(Thermo, SuperluminalGoldens) {
  const Velocity v(2.0);
  EXPECT_NEAR(transform_thermo(kRoom, v, Approach::EinsteinPlanck).state.T, 300 * std::sqrt(3.0), 1e-10);
  EXPECT_NEAR(transform_thermo(kRoom, v, Approach::Ott).state.T, 300 / std::sqrt(3.0), 1e-10);
  const ThermoResult l = transform_thermo(kRoom, v, Approach::Landsberg);
  EXPECT_EQ(l.state.T, 300.0);
  EXPECT_TRUE(l.unspecified);
  EXPECT_FALSE(transform_thermo(kRoom, Velocity(0.6), Approach::Landsberg).unspecified);
}

TEST(Thermo, CavalleriSalgarelliIsRestFrameOnly) {
  const ThermoResult r = transform_thermo(kRoom, Velocity(0.3), Approach::CavalleriSalgarelli);
  EXPECT_TRUE(r.rest_frame_only);
  EXPECT_EQ(r.state.T, 300.0);
}

TEST(Thermo, RandomVelocitiesAgreeWithOracle) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> uv(-20, 20), ut(1, 1000);
  for (int i = 0; i < 2000; ++i) {
    const double v = uv(rng);
    if (std::abs(std::abs(v) - 1) < 1e-6) continue;
    const ThermoState s{1.5, 3.0, ut(rng)};
    const double g = oracle_gamma(v);
    const ThermoResult ep = transform_thermo(s, Velocity(v), Approach::EinsteinPlanck);
    const ThermoResult ott = transform_thermo(s, Velocity(v), Approach::Ott);
    EXPECT_NEAR(ep.state.T, s.T / g, 1e-10 * s.T / g);
    EXPECT_NEAR(ott.state.T, s.T * g, 1e-10 * s.T * g);
    EXPECT_NEAR(ep.state.T * ott.state.T, s.T * s.T, 1e-9 * s.T * s.T);
    for (Approach a : kAllApproaches) {
      const ThermoResult r = transform_thermo(s, Velocity(v), a);
      EXPECT_GT(r.state.T, 0.0);
      EXPECT_EQ(r.state.S, s.S);
    }
  }
}

TEST(Thermo, GammaDivergesAtLightSpeed) {
  for (double eps : {1e-3, 1e-5, 1e-7}) {
    EXPECT_GT(thermo_gamma(Velocity(1 - eps)), 0.7 / std::sqrt(eps));
    EXPECT_GT(thermo_gamma(Velocity(1 + eps)), 0.7 / std::sqrt(eps));
  }
  EXPECT_NEAR(thermo_gamma(Velocity(1e6)), 1e-6, 1e-12);
}

TEST(Thermo, RejectsBadTemperature) {
  for (double t : {0.0, -5.0}) {
    try {
      transform_thermo({1, 1, t}, Velocity(0.5), Approach::Ott);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NonPositiveTemperature);
    }
  }
  EXPECT_THROW(transform_thermo({1, 1, NAN}, Velocity(0.5), Approach::Ott), Error);
}
