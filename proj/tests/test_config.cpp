#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "kdvsat/config.hpp"

using namespace kdvsat;

constexpr double kPi = std::numbers::pi;

TEST(Preset, Fig2SaturationLevel) {
  const auto c = preset("fig2");
  EXPECT_EQ(c.sat.u0, 0.5);
  EXPECT_EQ(c.sat.kind, SatKind::l2);
  EXPECT_EQ(c.omega.lo, 0.0);
  EXPECT_EQ(c.omega.hi, 2 * kPi);
}

TEST(Preset, Fig7MiddleThird) {
  const auto c = preset("fig7");
  EXPECT_NEAR(c.omega.lo, 2 * kPi / 3, 1e-15);
  EXPECT_NEAR(c.omega.hi, 4 * kPi / 3, 1e-15);
  EXPECT_EQ(c.sat.kind, SatKind::none);
  EXPECT_EQ(preset("fig8").sat.kind, SatKind::localized);
}

TEST(Preset, StationaryAndFree) {
  EXPECT_TRUE(preset("stationary").linearized);
  EXPECT_FALSE(preset("stationary").control);
  EXPECT_FALSE(preset("free").linearized);
  EXPECT_FALSE(preset("free").control);
}

TEST(Preset, UnknownNameListsValidOnes) {
  try {
    preset("bogus");
    FAIL();
  } catch (const InvalidParameter& e) {
    const std::string msg = e.what();
    for (const auto& n : preset_names()) EXPECT_NE(msg.find(n), std::string::npos) << n;
  }
}

TEST(Config, RoundTripEveryPreset) {
  for (const auto& name : preset_names()) {
    const auto c = preset(name);
    EXPECT_EQ(parse_config(emit_config(c)), c) << name;
  }
}

TEST(Config, RoundTripInitialConditions) {
  ScenarioConfig c;
  c.initial = Gaussian{1.25, 0.1, -3.5};
  EXPECT_EQ(parse_config(emit_config(c)), c);
  c.initial = Tabulated{"/tmp/some profile.csv"};
  EXPECT_EQ(parse_config(emit_config(c)), c);
}

TEST(Config, PartialTextKeepsBase) {
  const auto base = preset("fig8");
  const auto c = parse_config("# comment\n\nnx = 64   # trailing\n u0=0.25\n", base);
  EXPECT_EQ(c.nx, 64);
  EXPECT_EQ(c.sat.u0, 0.25);
  EXPECT_EQ(c.sat.kind, SatKind::localized);
  EXPECT_EQ(c.omega, base.omega);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("nx 64\n"), DataError);
  EXPECT_THROW(parse_config("colour = red\n"), InvalidParameter);
  EXPECT_THROW(parse_config("nx = 6.5\n"), InvalidParameter);
  EXPECT_THROW(parse_config("u0 = half\n"), InvalidParameter);
  EXPECT_THROW(parse_config("control = yes\n"), InvalidParameter);
  EXPECT_THROW(parse_config("sat_kind = tanh\n"), InvalidParameter);
  EXPECT_THROW(parse_config("initial = gaussian:1,2\n"), InvalidParameter);
  EXPECT_THROW(load_config("/nonexistent/dir/x.cfg"), DataError);
}

TEST(Config, LoadFromFile) {
  const auto path = std::filesystem::temp_directory_path() / "kdvsat_test_config.cfg";
  {
    std::ofstream out(path);
    out << "sat_kind = l2\nomega_lo = 1\nomega_hi = 2\nlinearized = true\n";
  }
  const auto c = load_config(path.string());
  EXPECT_EQ(c.sat.kind, SatKind::l2);
  EXPECT_EQ(c.omega, (Interval{1.0, 2.0}));
  EXPECT_TRUE(c.linearized);
  std::filesystem::remove(path);
}

TEST(FormatNumber, RoundTrips) {
  for (double v : {0.1, 2 * kPi, 1e-300, -0.0, 123456789.123456789})
    EXPECT_EQ(std::stod(format_number(v)), v);
}
