#include <gtest/gtest.h>

#include "kdvlab/scattering.hpp"

using namespace kdvlab;

namespace {

Potential sharp_step() {
  PotentialSpec s;
  s.family = Family::SharpStep;
  s.c = 1.0;
  return Potential(s);
}

Potential well(double depth, double center, double width = 1.0) {
  PotentialSpec s;
  s.family = Family::TanhStepPlusWells;
  s.c = 0.0;
  s.wells = {{depth, center, width}};
  return Potential(s);
}

const ScatteringData& sharp_data() {
  static const ScatteringData d = scattering_data(sharp_step());
  return d;
}

}  // namespace

TEST(Scattering, BranchOfK1) {
  const auto a = SpectralParameter::make(Complex(3.0, 0.0), 4.0);
  EXPECT_NEAR(std::abs(a.k1 - 5.0), 0.0, 1e-14);
  const auto b = SpectralParameter::make(Complex(-3.0, 0.0), 4.0);
  EXPECT_NEAR(std::abs(b.k1 + 5.0), 0.0, 1e-14);
  const auto r = SpectralParameter::make(Complex(0.0, 0.6), 1.0, CutSide::Right);
  const auto l = SpectralParameter::make(Complex(0.0, 0.6), 1.0, CutSide::Left);
  EXPECT_NEAR(std::abs(r.k1 - 0.8), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(l.k1 + 0.8), 0.0, 1e-14);
}

TEST(Scattering, SharpStepReflectionClosedForm) {
  const auto& d = sharp_data();
  double err = 0.0;
  for (int i = 0; i <= 490; ++i) {
    const double k = 0.1 + 0.01 * i;
    const double s = std::sqrt(k * k + 1.0);
    err = std::max(err, std::abs(d.R_at(k) - (k - s) / (k + s)));
  }
  EXPECT_LT(err, 1e-6);
}

TEST(Scattering, SharpStepCutDensityClosedForm) {
  const auto& d = sharp_data();
  double err = 0.0;
  for (int i = 0; i <= 90; ++i) {
    const double h = 0.05 + 0.01 * i;
    err = std::max(err, std::abs(d.chi_at(h) - Complex(0.0, 4.0 * h * std::sqrt(1.0 - h * h))));
  }
  EXPECT_LT(err, 1e-6);
}

TEST(Scattering, SharpStepHasNoBoundStates) {
  EXPECT_EQ(sharp_data().N(), 0u);
  EXPECT_GT(std::abs(sharp_data().W_ic), 1e-3);
}

TEST(Scattering, ReflectionlessSoliton) {
  const auto d = scattering_data(well(2.0, 0.0));
  ASSERT_EQ(d.N(), 1u);
  EXPECT_NEAR(d.kappas[0], 1.0, 1e-8);
  EXPECT_NEAR(d.gammas2[0], 2.0, 1e-6);
  for (double k = 0.05; k <= 10.0; k += 0.05) EXPECT_LT(std::abs(d.R_at(k)), 1e-8) << k;
}

TEST(Scattering, ShiftedWellNormingConstant) {
  const double x0 = 0.7;
  const auto d = scattering_data(well(2.0, x0));
  ASSERT_EQ(d.N(), 1u);
  EXPECT_NEAR(d.gammas2[0] / (2.0 * std::exp(2.0 * x0)), 1.0, 1e-6);
}

TEST(Scattering, TwoBoundStatesSortedAscending) {
  const auto d = scattering_data(well(6.0, 0.0));
  ASSERT_EQ(d.N(), 2u);
  EXPECT_NEAR(d.kappas[0], 1.0, 1e-8);
  EXPECT_NEAR(d.kappas[1], 2.0, 1e-8);
}

TEST(Scattering, PlainTanhStepHasNoBoundState) {
  PotentialSpec s;
  s.family = Family::TanhStep;
  s.c = 1.0;
  const auto d = scattering_data(Potential(s));
  EXPECT_EQ(d.N(), 0u);
  EXPECT_LT(d.unitarity_deficit, 1e-8);
}

TEST(Scattering, WronskianIndependentOfMatchingPoint) {
  PotentialSpec s;
  s.family = Family::TanhStepPlusWells;
  s.c = 1.0;
  s.wells = {{1.2, -3.0, 1.0}};
  const Potential p(s);
  for (Complex k : {Complex(0.4, 0.0), Complex(2.0, 0.5), Complex(0.0, 0.3)}) {
    const auto w = wronskian(p, SpectralParameter::make(k, 1.0));
    EXPECT_LT(w.spread, 1e-8) << k;
  }
}

TEST(Scattering, ArtifactRoundTrip) {
  const auto& d = sharp_data();
  const auto back = scattering_from_json(to_json(d));
  EXPECT_EQ(back.N(), d.N());
  for (double k : {0.2, 1.3, 7.0}) EXPECT_LT(std::abs(back.R_at(k) - d.R_at(k)), 1e-13);
  for (double h : {0.1, 0.6}) EXPECT_LT(std::abs(back.chi_at(h) - d.chi_at(h)), 1e-13);
}

TEST(Scattering, ArtifactRejectsWrongSchemaAndResonance) {
  auto j = to_json(sharp_data());
  auto bad = j;
  bad["schema"] = "kdvlab.scatter/0";
  EXPECT_THROW(scattering_from_json(bad), DomainError);
  j["W_ic"] = {0.0, 0.0};
  EXPECT_THROW(scattering_from_json(j), ResonanceError);
}
