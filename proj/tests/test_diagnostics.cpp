#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kdvsat/config.hpp"
#include "kdvsat/diagnostics.hpp"

using namespace kdvsat;

namespace {

constexpr double kPi = std::numbers::pi;

EnergyTrace synthetic(double e0, double rate, int n, double t_end) {
  EnergyTrace tr;
  for (int i = 0; i <= n; ++i) {
    const double t = t_end * i / n;
    tr.times.push_back(t);
    tr.energies.push_back(e0 * std::exp(-rate * t));
  }
  return tr;
}

/// |one-sided difference - f'(0)| for f sampled on [0, 2 pi].
double boundary_error(int nx, double (*f)(double), double slope) {
  const Grid g = build_grid(2 * kPi, nx, 1.0, 1);
  std::vector<double> y(g.nodes());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = f(g.x(i));
  return std::abs(boundary_derivative(y, g.dx) - slope);
}

double sine(double x) { return std::sin(x); }
double curved(double x) { return std::sin(x) + 1.0 - std::cos(x); }

}  // namespace

TEST(Energy, Zero) { EXPECT_EQ(energy(std::vector<double>(10, 0.0), 0.1), 0.0); }

TEST(Energy, OneMinusCosNorm) {
  const Grid g = build_grid(2 * kPi, 200, 6.0, 6000);
  const double e = energy(sample_initial(OneMinusCos{}, g), g.dx);
  EXPECT_NEAR(e, 3 * kPi, 1e-2);
  EXPECT_NEAR(std::sqrt(e), 3.07, 1e-2);
}

TEST(Energy, ConstantOnUnitInterval) {
  const std::vector<double> y(10, 2.0);
  EXPECT_NEAR(energy(y, 0.1), 4.0, 1e-14);
}

TEST(Energy, SquareRootIsDiscreteNorm) {
  const std::vector<double> y = {0.0, 1.0, -2.0, 0.5};
  EXPECT_DOUBLE_EQ(std::sqrt(energy(y, 0.3)), l2_norm(y, 0.3));
}

TEST(BoundaryDerivative, ZeroAndRamp) {
  EXPECT_EQ(boundary_derivative(std::vector<double>(5, 0.0), 0.1), 0.0);
  const double dx = 0.01;
  std::vector<double> ramp(50);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = static_cast<double>(i) * dx;
  EXPECT_NEAR(boundary_derivative(ramp, dx), 1.0, 1e-12);
  EXPECT_THROW(boundary_derivative(std::vector<double>(1, 0.0), dx), InvalidParameter);
}

TEST(BoundaryDerivative, AtLeastFirstOrderOnSine) {
  // sin'' vanishes at 0, so the error here actually drops fourfold.
  const double coarse = boundary_error(100, sine, 1.0), mid = boundary_error(200, sine, 1.0),
               fine = boundary_error(400, sine, 1.0);
  EXPECT_GE(coarse / mid, 1.8);
  EXPECT_GE(mid / fine, 1.8);
}

TEST(BoundaryDerivative, FirstOrderWithCurvature) {
  const double coarse = boundary_error(100, curved, 1.0), mid = boundary_error(200, curved, 1.0),
               fine = boundary_error(400, curved, 1.0);
  EXPECT_NEAR(coarse / mid, 2.0, 0.1);
  EXPECT_NEAR(mid / fine, 2.0, 0.1);
}

TEST(Mu, Examples) {
  EXPECT_NEAR(mu_theoretical(1, 1, 0.5, 3.07), 0.16287, 1e-5);
  EXPECT_EQ(mu_theoretical(1, 1, 10, 1), 1.0);
  EXPECT_THROW(mu_theoretical(0, 1, 1, 1), InvalidParameter);
  EXPECT_THROW(mu_theoretical(1, 1, 1, 0), InvalidParameter);
}

TEST(Envelope, Examples) {
  EXPECT_EQ(envelope(9.4248, 0.16287, 0.0), 9.4248);
  EXPECT_EQ(envelope(9.4248, 0.0, 5.0), 9.4248);
  EXPECT_NEAR(envelope(9.4248, 0.16287, 6.0), 1.334, 1e-3);
  EXPECT_THROW(envelope(-1.0, 0.1, 1.0), InvalidParameter);
  EXPECT_THROW(envelope(1.0, -0.1, 1.0), InvalidParameter);
}

TEST(Envelope, MultiplicativeAndNonIncreasing) {
  for (double mu : {0.0, 0.1, 0.16287, 1.0, 3.0})
    for (double s : {0.0, 0.5, 2.0})
      for (double t : {0.0, 0.25, 4.0}) {
        const double direct = envelope(7.0, mu, s + t);
        EXPECT_NEAR(envelope(envelope(7.0, mu, s), mu, t), direct, 1e-14 * 7.0);
        EXPECT_LE(envelope(7.0, mu, s + t), envelope(7.0, mu, s));
      }
}

TEST(Fit, ExactExponential) {
  const auto tr = synthetic(5.0, 0.8, 600, 6.0);
  EXPECT_NEAR(fit_decay_rate(tr), 0.4, 4e-11);
  EXPECT_NEAR(fit_decay_rate(tr, 0.5), 0.4, 4e-11);
}

TEST(Fit, ConstantTrace) {
  EXPECT_NEAR(fit_decay_rate(synthetic(2.0, 0.0, 10, 1.0)), 0.0, 1e-15);
}

TEST(Fit, DomainErrors) {
  EXPECT_THROW(fit_decay_rate(synthetic(1.0, 1.0, 1, 1.0)), FitDomainError);
  auto tr = synthetic(1.0, 1.0, 10, 1.0);
  tr.energies[8] = 0.0;
  EXPECT_THROW(fit_decay_rate(tr), FitDomainError);
  EnergyTrace flat{{1.0, 1.0, 1.0}, {1.0, 0.5, 0.2}, {}, {}};
  EXPECT_THROW(fit_decay_rate(flat), FitDomainError);
  EXPECT_THROW(fit_decay_rate(synthetic(1.0, 1.0, 10, 1.0), 0.0), InvalidParameter);
}

TEST(DecayReport, CountsViolations) {
  auto tr = synthetic(1.0, 0.5, 20, 2.0);
  EXPECT_EQ(decay_report(tr, 0.25).envelope_violations, 0u);
  EXPECT_GT(decay_report(tr, 0.5).envelope_violations, 0u);
}

TEST(Budget, ZeroTrajectory) {
  ScenarioConfig c = preset("fig2");
  c.initial = Gaussian{1.0, 1.0, 0.0};
  c.nt = 20;
  c.t_final = 0.02;
  const auto rep = energy_budget_residual(run(c));
  EXPECT_EQ(rep.residuals.size(), 20u);
  EXPECT_EQ(rep.max_abs, 0.0);
}

TEST(Budget, ConvergesUnderRefinement) {
  auto budget_at = [](int nx) {
    ScenarioConfig c = preset("fig2");
    c.nx = nx;
    c.nt = 30 * nx;
    return energy_budget_residual(run(c)).max_abs;
  };
  const double coarse = budget_at(100), fine = budget_at(200);
  EXPECT_GE(coarse / fine, 1.8);
}

TEST(Budget, StationaryDriftNotSecular) {
  ScenarioConfig c = preset("stationary");
  c.t_final = 1.0;
  c.nt = 1000;
  const auto r = run(c);
  const auto rep = energy_budget_residual(r);
  EXPECT_LE(std::abs(rep.cumulative_drift), 0.05 * r.energies.front());
}

TEST(Budget, MisalignedTracesRejected) {
  RunResult r;
  r.times = {0.0, 1.0};
  r.energies = {1.0};
  EXPECT_THROW(energy_budget_residual(r), InvalidParameter);
}

TEST(Fig2, FittedRateAboveFormula) {
  const auto r = run(preset("fig2"));
  const double mu = mu_theoretical(1, 1, 0.5, std::sqrt(r.energies.front()));
  const auto rep = decay_report(energy_trace(r), mu);
  EXPECT_GE(rep.mu_fitted, mu);
  EXPECT_GE(rep.mu_tail, mu);
  EXPECT_EQ(rep.envelope_violations, 0u);
}
