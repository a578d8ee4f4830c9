#include <gtest/gtest.h>

#include "kdvlab/kdv_oracle.hpp"
#include "kdvlab/model.hpp"
#include "kdvlab/numerics.hpp"

using namespace kdvlab;

namespace {

double soliton(double kappa, double x) {
  const double s = 1.0 / std::cosh(kappa * x);
  return -2.0 * kappa * kappa * s * s;
}

SolverConfig small_box(std::size_t nx = 1024, double dt = 1e-3) {
  SolverConfig c;
  c.x_min = -40.0;
  c.x_max = 60.0;
  c.nx = nx;
  c.dt = dt;
  c.sponge_width = 8.0;
  c.ramp = RampKind::Constant;
  c.ramp_value = 0.0;
  c.times = {1.0};
  return c;
}

double window_error(const FieldGrid& f, std::size_t i, const SolverConfig& c,
                    const std::function<double(double)>& exact) {
  double e = 0.0;
  for (std::size_t n = 0; n < f.x.size(); ++n)
    if (f.x[n] >= c.window_lo() && f.x[n] <= c.window_hi()) e = std::max(e, std::abs(f.q[i][n] - exact(f.x[n])));
  return e;
}

}  // namespace

TEST(Oracle, RampMatchesBackgrounds) {
  SolverConfig c;
  c.c = 1.5;
  EXPECT_NEAR(ramp_value(c, -40.0), -2.25, 1e-14);
  EXPECT_NEAR(ramp_value(c, 40.0), 0.0, 1e-14);
  const double h = 1e-4;
  for (int d = 1; d <= 3; ++d)
    EXPECT_NEAR(ramp_value(c, 0.4, d), (ramp_value(c, 0.4 + h, d - 1) - ramp_value(c, 0.4 - h, d - 1)) / (2 * h),
                1e-6)
        << d;
}

TEST(Oracle, OneSolitonTranslates) {
  const auto c = small_box();
  const auto f = evolve([](double x) { return soliton(1.0, x); }, c);
  EXPECT_LT(window_error(f, 0, c, [](double x) { return soliton(1.0, x - 4.0); }), 1e-4);
}

TEST(Oracle, ConstantStateIsInvariant) {
  auto c = small_box(256, 1e-2);
  c.ramp_value = -1.0;
  c.times = {0.5, 2.0};
  const auto f = evolve([](double) { return -1.0; }, c);
  for (const auto& row : f.q)
    for (double v : row) EXPECT_NEAR(v, -1.0, 1e-10);
  const auto r = conservation_report(f);
  EXPECT_LT(r.max_mass_drift, 1e-12);
  EXPECT_LT(r.max_energy_drift, 1e-12);
}

TEST(Oracle, ConservationAndUnderResolution) {
  auto c = small_box(1024, 1e-3);
  c.times = {1.0, 2.5, 5.0};
  const auto q0 = [](double x) { return soliton(1.0, x + 15.0); };
  const auto good = conservation_report(evolve(q0, c));
  EXPECT_LT(good.max_mass_drift, 1e-6);
  EXPECT_LT(good.max_energy_drift, 1e-6);
  c.nx = 256;
  const auto coarse = conservation_report(evolve(q0, c));
  EXPECT_GE(std::max(coarse.max_mass_drift, coarse.max_energy_drift),
            100.0 * std::max(good.max_mass_drift, good.max_energy_drift));
}

TEST(Oracle, TimeStepOrder) {
  std::vector<double> dts{4e-3, 2e-3, 1e-3}, errs;
  for (double dt : dts) {
    const auto c = small_box(1024, dt);
    const auto f = evolve([](double x) { return soliton(1.0, x + 10.0); }, c);
    errs.push_back(window_error(f, 0, c, [](double x) { return soliton(1.0, x + 6.0); }));
  }
  const auto fit = loglog_fit(dts, errs);
  EXPECT_NEAR(fit.slope, 4.0, 1.0);
}

TEST(Oracle, TimeReversal) {
  auto c = small_box(1024, 1e-3);
  const auto q0 = [](double x) { return soliton(1.2, x + 3.0); };
  const auto fwd = evolve(q0, c);
  const double dx = fwd.x[1] - fwd.x[0];
  const auto& q1 = fwd.q[0];
  const auto back_datum = [&](double x) {
    const long i = std::lround((x - c.x_min) / dx);
    return i >= 0 && i < long(q1.size()) ? q1[std::size_t(i)] : 0.0;
  };
  c.times = {-1.0};
  const auto back = evolve(back_datum, c);
  EXPECT_LT(window_error(back, 0, c, q0), 1e-5);
  EXPECT_EQ(back.meta["sponge_strength"].get<double>(), 0.0);
}

TEST(Oracle, TwoSolitonPhaseShifts) {
  PotentialSpec s;
  s.family = Family::TanhStepPlusWells;
  s.c = 0.0;
  s.wells = {{6.0, 0.0, 1.0}};
  const Potential pot(s);
  const auto d = scattering_data(pot);
  ASSERT_EQ(d.N(), 2u);
  SolverConfig c;
  c.x_min = -60.0;
  c.x_max = 140.0;
  c.nx = 2048;
  c.dt = 1e-4;
  c.sponge_width = 10.0;
  c.times = {3.0};
  const auto f = evolve(pot, c);
  const auto lines = soliton_lines(d);
  for (std::size_t j = 0; j < 2; ++j) {
    const double xp = lines[j].velocity * 3.0 + lines[j].offset;
    std::size_t best = 0;
    for (std::size_t n = 0; n < f.x.size(); ++n)
      if (std::abs(f.x[n] - xp) < 1.0 && (best == 0 || f.q[0][n] < f.q[0][best])) best = n;
    const double a = f.q[0][best - 1], b = f.q[0][best], cc = f.q[0][best + 1];
    const double xf = f.x[best] + 0.5 * (a - cc) / (a - 2 * b + cc) * (f.x[1] - f.x[0]);
    const double shift_num = -lines[j].kappa * (xf - lines[j].velocity * 3.0);
    const double shift = phase_shift(d, int(j) + 1);
    EXPECT_NEAR(shift_num, shift, 0.01 * std::max(1.0, std::abs(shift))) << j;
  }
}

TEST(Oracle, StepDatumKeepsBackgrounds) {
  PotentialSpec s;
  s.family = Family::TanhStep;
  s.c = 1.0;
  SolverConfig c;
  c.x_min = -80.0;
  c.x_max = 80.0;
  c.nx = 1024;
  c.dt = 2e-3;
  c.sponge_width = 10.0;
  c.times = {0.5};
  const auto f = evolve(Potential(s), c);
  const auto& q = f.q[0];
  for (std::size_t n = 0; n < f.x.size(); ++n) {
    if (std::abs(f.x[n] - c.window_lo()) < 0.2) EXPECT_NEAR(q[n], -1.0, 1e-4);
    if (std::abs(f.x[n] - c.window_hi()) < 0.2) EXPECT_NEAR(q[n], 0.0, 1e-4);
  }
}

TEST(Oracle, BlowUpIsReported) {
  auto c = small_box(1024, 0.05);
  c.times = {5.0};
  c.check_every = 1;
  try {
    evolve([](double x) { return soliton(2.0, x); }, c);
    FAIL() << "no instability reported";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("instability at t ="), std::string::npos);
  }
}

TEST(Oracle, InputValidation) {
  auto c = small_box();
  EXPECT_THROW(evolve([](double) { return 0.5; }, c), DomainError);
  c.times = {1.0, -1.0};
  EXPECT_THROW(evolve([](double x) { return soliton(1.0, x); }, c), DomainError);
  c.times = {1.0};
  c.sponge_width = 30.0;
  EXPECT_THROW(evolve([](double x) { return soliton(1.0, x); }, c), DomainError);
  PotentialSpec s;
  s.family = Family::SharpStep;
  EXPECT_THROW(evolve(Potential(s), SolverConfig{}), DomainError);
  FieldGrid bare;
  EXPECT_THROW(conservation_report(bare), DomainError);
}
