#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "kdvlab/potentials.hpp"

using namespace kdvlab;

namespace {

PotentialSpec tanh_step(double c) {
  PotentialSpec s;
  s.family = Family::TanhStep;
  s.c = c;
  return s;
}

}  // namespace

TEST(Potentials, TanhStepBackgrounds) {
  const Potential p(tanh_step(1.5));
  EXPECT_NEAR(p(-60.0), -2.25, 1e-14);
  EXPECT_NEAR(p(60.0), 0.0, 1e-14);
  EXPECT_NEAR(p(0.0), -1.125, 1e-14);
}

TEST(Potentials, TanhDerivativeMatchesDifferences) {
  PotentialSpec s = tanh_step(1.0);
  s.family = Family::TanhStepPlusWells;
  s.wells = {{1.2, -3.0, 1.0}};
  const Potential p(s);
  const double h = 1e-4;
  for (double x : {-4.0, -1.0, 0.3, 2.0}) {
    const double fd = (p(x + h) - p(x - h)) / (2 * h);
    EXPECT_NEAR(p.derivative(x, 1), fd, 1e-7) << x;
    const double fd2 = (p.derivative(x + h, 1) - p.derivative(x - h, 1)) / (2 * h);
    EXPECT_NEAR(p.derivative(x, 2), fd2, 1e-6) << x;
  }
}

TEST(Potentials, WellsAddToStep) {
  PotentialSpec s = tanh_step(1.0);
  s.family = Family::TanhStepPlusWells;
  s.wells = {{2.0, 5.0, 1.0}};
  const Potential p(s);
  const Potential base(tanh_step(1.0));
  EXPECT_NEAR(p(5.0) - base(5.0), -2.0, 1e-14);
}

TEST(Potentials, SharpStepIsPiecewiseConstant) {
  PotentialSpec s;
  s.family = Family::SharpStep;
  s.c = 1.0;
  const Potential p(s);
  EXPECT_EQ(p(-1e-9), -1.0);
  EXPECT_EQ(p(1e-9), 0.0);
  EXPECT_FALSE(p.smooth());
  EXPECT_TRUE(p.fixture_only());
  EXPECT_THROW(p.derivative(0.5, 1), DomainError);
}

TEST(Potentials, FamilyNamesRoundTrip) {
  for (Family f : {Family::SharpStep, Family::TanhStep, Family::TanhStepPlusWells, Family::Tabulated})
    EXPECT_EQ(family_from_string(to_string(f)), f);
  EXPECT_THROW(family_from_string("gaussian"), DomainError);
}

TEST(Potentials, TabulatedFromCsv) {
  const std::string path = ::testing::TempDir() + "kdvlab_table.csv";
  {
    std::ofstream o(path);
    o << "x,q\n# comment\n";
    for (int i = -400; i <= 400; ++i) {
      const double x = 0.05 * i;
      o << x << ',' << -0.5 * (1.0 - std::tanh(x)) << '\n';
    }
  }
  PotentialSpec s;
  s.family = Family::Tabulated;
  s.c = 1.0;
  read_table_csv(path, s.table_x, s.table_q);
  ASSERT_EQ(s.table_x.size(), 801u);
  const Potential p(s);
  EXPECT_NEAR(p(0.33), -0.5 * (1.0 - std::tanh(0.33)), 1e-6);
  EXPECT_EQ(p(-100.0), -1.0);
  EXPECT_EQ(p(100.0), 0.0);
  std::remove(path.c_str());
}

TEST(Potentials, SmoothStepSatisfiesDecayClass) {
  const Potential p(tanh_step(1.0));
  const auto samples = sample_potential(p, GridParams{});
  EXPECT_FALSE(samples.derivatives_distributional);
  EXPECT_TRUE(samples.tail_envelope_ok);
  const auto rep = moment_diagnostics(samples, 4);
  EXPECT_TRUE(rep.satisfies_class);
  for (const auto& e : rep.entries) EXPECT_EQ(e.verdict, Verdict::Finite) << e.order;
}

TEST(Potentials, SharpStepDerivativesAreDistributional) {
  PotentialSpec s;
  s.family = Family::SharpStep;
  s.c = 1.0;
  const auto samples = sample_potential(Potential(s), GridParams{});
  EXPECT_TRUE(samples.derivatives_distributional);
  EXPECT_TRUE(samples.fixture_only);
}

TEST(Potentials, TruncationRadiiAreFinite) {
  const Potential p(tanh_step(1.0));
  EXPECT_GT(p.left_radius(), 0.0);
  EXPECT_LT(p.left_radius(), 40.0);
  EXPECT_LT(std::abs(p(-p.left_radius()) + 1.0), 1e-13);
  EXPECT_LT(std::abs(p(p.right_radius())), 1e-13);
}
