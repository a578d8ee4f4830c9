#include <gtest/gtest.h>

#include "kdvlab/model.hpp"

using namespace kdvlab;

namespace {

Potential headline() {
  PotentialSpec s;
  s.family = Family::TanhStepPlusWells;
  s.c = 1.0;
  s.wells = {{1.2, -3.0, 1.0}, {3.0, -1.0, 1.0}};
  return Potential(s);
}

const ScatteringData& data() {
  static const ScatteringData d = scattering_data(headline());
  return d;
}

ScatteringData one_soliton(double kappa, double g2) {
  ScatteringData d;
  d.c = 0.0;
  d.kappas = {kappa};
  d.gammas2 = {g2};
  return d;
}

}  // namespace

TEST(Model, RegionClassification) {
  const std::vector<double> kap{1.0, 2.0};
  RegionConfig cfg;
  cfg.eps = 1.0;
  const double t = 10.0;
  EXPECT_EQ(classify_region(30.0, t, 1.0, kap, cfg).kind, RegionKind::Outside);
  EXPECT_EQ(classify_region(42.0, t, 1.0, kap, cfg).kind, RegionKind::DjSol);
  auto tag = classify_region(100.0, t, 1.0, kap, cfg);
  EXPECT_EQ(tag.kind, RegionKind::Dj);
  EXPECT_EQ(tag.j, 1);
  tag = classify_region(163.0, t, 1.0, kap, cfg);
  EXPECT_EQ(tag.kind, RegionKind::DjSol);
  EXPECT_EQ(tag.j, 2);
  tag = classify_region(300.0, t, 1.0, kap, cfg);
  EXPECT_EQ(tag.kind, RegionKind::Dj);
  EXPECT_EQ(tag.j, 2);
  EXPECT_THROW(classify_region(50.0, 1.0, 1.0, kap, cfg), DomainError);
}

TEST(Model, RegionConfigResolution) {
  const auto cfg = resolve_region_config(data());
  EXPECT_GT(cfg.eps, 0.0);
  EXPECT_GT(cfg.delta, 0.0);
  RegionConfig bad;
  bad.eps = 10.0;
  EXPECT_THROW(resolve_region_config(data(), bad), DomainError);
}

TEST(Model, BetaShiftsOnlyTheLowerEdge) {
  RegionConfig a, b;
  a.eps = b.eps = 0.5;
  b.beta = 2.0;
  const std::vector<double> kap{1.5};
  const double t = 20.0;
  EXPECT_EQ(classify_region(81.0, t, 1.0, kap, a).kind, RegionKind::D0);
  EXPECT_EQ(classify_region(81.0, t, 1.0, kap, b).kind, RegionKind::Outside);
  const std::vector<double> xs{70.0, 81.0, 90.0, 180.0};
  const auto fa = asymptotic_field(data(), xs, {t}, a);
  const auto fb = asymptotic_field(data(), xs, {t}, b);
  EXPECT_EQ(fa.q, fb.q);
}

TEST(Model, AlgebraicIdentities) {
  for (int j = 1; j <= 2; ++j) {
    const auto r = model_algebra_check(data(), j, RegionConfig{}, 7u + unsigned(j));
    EXPECT_EQ(r.probes, 100u);
    EXPECT_TRUE(r.pass) << "det " << r.det << " sym " << r.symmetry << " inf " << r.infinity << " row " << r.row;
  }
}

TEST(Model, AlgebraProbesAreSeeded) {
  const auto a = model_algebra_check(data(), 1, RegionConfig{}, 99u);
  const auto b = model_algebra_check(data(), 1, RegionConfig{}, 99u);
  EXPECT_EQ(a.det, b.det);
  EXPECT_EQ(a.row, b.row);
}

TEST(Model, PolesAreRemovable) {
  for (int j = 1; j <= 2; ++j)
    for (double t : {5.0, 20.0}) {
      const double k = data().kappas[j - 1];
      const auto r = removability_check(data(), j, 4.0 * k * k * t + 0.3, t);
      EXPECT_TRUE(r.pass) << j << ' ' << t << ' ' << r.at_1e4;
    }
}

TEST(Model, InverseAndPoleChecks) {
  const auto mm = model_matrix(data(), 1, Complex(0.3, 0.4), 30.0, 5.0);
  EXPECT_LT((mm.M * mm.Minv - Mat2::Identity()).norm(), 1e-12);
  EXPECT_THROW(model_matrix(data(), 1, Complex(0.0, data().kappas[0]), 30.0, 5.0), PoleError);
  EXPECT_THROW(model_matrix(data(), 3, Complex(0.3, 0.4), 30.0, 5.0), DomainError);
}

TEST(Model, ReflectionlessDatumReproduced) {
  const auto d = one_soliton(1.0, 2.0);
  for (double x = -10.0; x <= 10.0; x += 0.25) {
    const double s = 1.0 / std::cosh(x);
    EXPECT_NEAR(q_sol(d, x, 0.0), -2.0 * s * s, 1e-8) << x;
  }
}

TEST(Model, TwoProfileFormsAgree) {
  for (double t : {5.0, 40.0})
    for (double x = 4.0 * t; x < 12.0 * t; x += 0.37)
      EXPECT_NEAR(q_sol(data(), x, t), q_sol_mobius(data(), x, t), 1e-12) << x;
}

TEST(Model, SolitonMinimumOnItsLine) {
  const auto d = one_soliton(1.3, 0.8);
  const auto line = soliton_lines(d)[0];
  const double t = 10.0;
  const double xp = line.velocity * t + line.offset;
  EXPECT_NEAR(q_sol(d, xp, t), line.height, 1e-12);
  EXPECT_GT(q_sol(d, xp + 0.01, t), line.height);
  EXPECT_GT(q_sol(d, xp - 0.01, t), line.height);
}

TEST(Model, NoSolitonsGiveZeroField) {
  ScatteringData d;
  d.c = 1.0;
  RegionConfig cfg;
  cfg.eps = 1.0;
  const auto f = asymptotic_field(d, {0.0, 50.0, 100.0}, {10.0}, cfg);
  for (double v : f.q[0]) EXPECT_EQ(v, 0.0);
  EXPECT_TRUE(f.tagged());
}

TEST(Model, DressedPhaseShift) {
  // reflectionless kappa = 1, 2 from -6 sech^2 x
  PotentialSpec s;
  s.family = Family::TanhStepPlusWells;
  s.c = 0.0;
  s.wells = {{6.0, 0.0, 1.0}};
  const auto d = scattering_data(Potential(s));
  ASSERT_EQ(d.N(), 2u);
  const double d1 = phase_shift(d, 1), d2 = phase_shift(d, 2);
  // the faster soliton is undressed, the slower one carries log 3
  EXPECT_NEAR(d2, -0.5 * std::log(d.gammas2[1] / 4.0), 1e-12);
  EXPECT_NEAR(d1 - (-0.5 * std::log(d.gammas2[0] / 2.0)), -std::log(1.0 / 3.0), 1e-10);
}
