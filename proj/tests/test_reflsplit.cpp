#include <gtest/gtest.h>

#include "kdvlab/reflsplit.hpp"

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

const SplitReflection& split() {
  static const SplitReflection s(data(), SplitConfig{});
  return s;
}

}  // namespace

TEST(Reflsplit, JetAgreesWithCutDensity) {
  const auto jet = taylor_at_zero(data(), 4);
  EXPECT_LT(jet.consistency_residual, 1e-6);
  ASSERT_GE(jet.coeffs.size(), 4u);
  // R(+0) = -1 for step-like data
  EXPECT_NEAR(std::abs(jet.coeffs[0] + 1.0), 0.0, 1e-8);
}

TEST(Reflsplit, RationalPairMatchesJet) {
  const auto& s = split();
  const auto& pr = s.pair();
  EXPECT_LT(pr.roundtrip_error, 1e-8);
  EXPECT_LT(pr.condition, 1e12);
  EXPECT_LT(pr.mirror_residual, 1e-12);
  const auto qt = pr.q_taylor(3);
  for (int l = 0; l < 4; ++l) EXPECT_LT(std::abs(qt[l] - s.jet().coeffs[l]), 1e-8 * (1.0 + std::abs(qt[l]))) << l;
}

TEST(Reflsplit, MirrorIsConjugateReflection) {
  const auto& pr = split().pair();
  for (double k : {-3.0, -0.4, 0.2, 1.7}) EXPECT_LT(std::abs(pr.p(k) - std::conj(pr.q(-k))), 1e-13) << k;
}

TEST(Reflsplit, RationalSystemIllConditionedThrows) {
  std::vector<Complex> coeffs{1.0, 0.5, 0.25, 0.125};
  EXPECT_THROW(rational_approximants(coeffs, 1e-7, 7, 4), NumericalError);
}

TEST(Reflsplit, ResidualVanishesToOrder) {
  const auto& f = split().f_report();
  ASSERT_FALSE(f.skipped);
  EXPECT_TRUE(f.pass) << "slope " << f.fit.slope << " required " << f.required_slope;
}

TEST(Reflsplit, TransformIsRealAndDecays) {
  const auto& g = split().transform();
  EXPECT_LT(g.mirror_residual, 1e-12);
  EXPECT_LT(g.edge_value, 1e-10);
  double mx = 0.0;
  for (double v : g.Ghat) mx = std::max(mx, std::abs(v));
  EXPECT_LT(g.ghat_imag_max, 1e-8 * mx);
}

TEST(Reflsplit, SplitSumsToCalR) {
  const auto& s = split();
  const double t = 10.0;
  for (double k : {0.3, 1.1, 2.5}) EXPECT_LT(std::abs(s.R_a(k, t) + s.R_r(k, t) - s.calR(k)), 1e-12) << k;
}

TEST(Reflsplit, LineTransformMatchesQuadrature) {
  const auto& s = split();
  const double t = 5.0, eta = 0.5;
  const auto line = s.R_a_line(eta, t);
  const auto& g = s.transform();
  for (std::size_t m : {g.n / 2 + 40, g.n / 2 + 200, g.n / 2 - 120}) {
    const Complex k(g.k_at(m), eta);
    EXPECT_LT(std::abs(line[m] - s.R_a(k, t)), 1e-8 * (1.0 + std::abs(line[m]))) << m;
  }
}

TEST(Reflsplit, BoundsAndSymmetries) {
  const auto r = split_bounds(split(), {5.0, 10.0, 20.0, 40.0});
  EXPECT_TRUE(r.symmetry_pass);
  EXPECT_LT(r.conjugation_residual, 1e-6);
  EXPECT_LT(r.strip_symmetry_residual, 1e-6);
  // the remainder decays at least as fast as the worst-case rate
  EXPECT_LE(r.remainder_fit.slope, r.target_exponent + 0.5);
}

TEST(Reflsplit, SharpStepWindowCannotCloseOff) {
  PotentialSpec s;
  s.family = Family::SharpStep;
  s.c = 1.0;
  const auto d = scattering_data(Potential(s));
  SplitConfig cfg;
  cfg.max_points = std::size_t(1) << 16;
  EXPECT_THROW(SplitReflection(d, cfg), NumericalError);
}

TEST(Reflsplit, DecayingDataWithoutCutIsTrivial) {
  PotentialSpec s;
  s.family = Family::TanhStepPlusWells;
  s.c = 0.0;
  s.wells = {{2.0, 0.0, 1.0}};
  const auto d = scattering_data(Potential(s));
  const SplitReflection sp(d, SplitConfig{});
  EXPECT_TRUE(sp.trivial());
  EXPECT_EQ(sp.R_a(Complex(0.5, 0.1), 3.0), Complex(0.0));
}

TEST(Reflsplit, RemainderGridMatchesPointwise) {
  const auto& s = split();
  const auto& g = s.transform();
  const double t = 20.0;
  const auto rr = s.R_r_grid(t);
  for (std::size_t m : {g.n / 2 + 30, g.n / 2 + 150, g.n / 2 + 900}) {
    const double k = g.k_at(m);
    EXPECT_LT(std::abs(rr[m] - s.R_r(k, t)), 1e-9) << k;
  }
}
