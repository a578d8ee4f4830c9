#include <gtest/gtest.h>

#include "kdvlab/rhp.hpp"

using namespace kdvlab;

namespace {

Potential headline() {
  PotentialSpec s;
  s.family = Family::TanhStepPlusWells;
  s.c = 1.0;
  s.wells = {{1.2, -3.0, 1.0}, {3.0, -1.0, 1.0}};
  return Potential(s);
}

Potential step_and_well() {
  PotentialSpec s;
  s.family = Family::TanhStepPlusWells;
  s.c = 1.0;
  s.wells = {{1.2, -3.0, 1.0}};
  return Potential(s);
}

Potential sharp_step() {
  PotentialSpec s;
  s.family = Family::SharpStep;
  s.c = 1.0;
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

TEST(Rhp, PhaseAndTimeScaledPhase) {
  const Complex k(0.3, 0.2);
  EXPECT_LT(std::abs(phase(k, 2.0, 4.0) * 4.0 - t_phase(k, 2.0, 4.0)), 1e-14);
  EXPECT_THROW(phase(k, 1.0, 0.0), DomainError);
}

TEST(Rhp, BlaschkeIsUnimodularOnRealAxis) {
  const std::vector<double> kap{0.5, 1.5};
  for (double k : {-2.0, -0.1, 0.7, 3.0}) EXPECT_NEAR(std::abs(blaschke(kap, 1, k)), 1.0, 1e-14);
  EXPECT_EQ(blaschke(kap, 3, Complex(0.2, 0.1)), Complex(1.0));
  EXPECT_THROW(blaschke(kap, 0, 1.0), DomainError);
  EXPECT_THROW(blaschke(kap, 1, Complex(0.0, 0.5)), PoleError);
}

TEST(Rhp, PoleMatricesAreUnimodular) {
  const auto pm = pole_matrices(1.2, 0.3, Complex(0.4, 1.0), 5.0, 2.0);
  EXPECT_NEAR(std::abs(pm.A.determinant() - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(pm.B.determinant() - 1.0), 0.0, 1e-12);
  // huge exponent stays finite
  const auto big = pole_matrices(1.2, 0.3, Complex(0.4, 1.0), -5.0, 100.0);
  EXPECT_TRUE(std::isfinite(std::abs(big.B(0, 1))));
}

TEST(Rhp, ContoursComeInMirrorPairs) {
  const auto cs = build_contours(data());
  int upper = 0, mirror = 0;
  for (const auto& p : cs.pieces) (is_mirror(p.piece) ? mirror : upper)++;
  EXPECT_EQ(upper, mirror);
  for (const auto& p : cs.pieces) {
    if (is_mirror(p.piece)) continue;
    EXPECT_EQ(mirror_of(mirror_of(p.piece)), p.piece);
    ASSERT_EQ(p.k.size(), p.w.size());
  }
  EXPECT_GT(cs.delta, 0.0);
  EXPECT_LT(cs.delta, 0.5 * (data().kappas[1] - data().kappas[0]) + 1e-12);
}

TEST(Rhp, JumpHoldsAtTimeZero) {
  for (const auto& pot : {sharp_step(), step_and_well()}) {
    const auto d = scattering_data(pot);
    for (double x : {-2.0, 0.0, 3.0}) {
      const auto r = verify_jump_real_axis(pot, d, x, default_jump_grid(), 1e-5, false);
      EXPECT_TRUE(r.pass) << "x = " << x << " residual " << r.residual << " at k = " << r.worst_k;
    }
  }
}

TEST(Rhp, CorruptedReflectionBreaksJump) {
  const auto pot = step_and_well();
  auto d = scattering_data(pot);
  auto vals = d.R.values();
  for (auto& v : vals) v *= Complex(1.0, 1e-3);
  d.R.set_values(vals);
  EXPECT_THROW(verify_jump_real_axis(pot, d, 0.0, default_jump_grid()), NumericalError);
}

TEST(Rhp, ReconstructionRecoversPotential) {
  for (const auto& pot : {step_and_well(), headline()})
    for (double x : {-2.0, 0.0, 3.0}) {
      const auto r = reconstruct_q(pot, x);
      EXPECT_NEAR(r.q, pot(x), 1e-3) << x;
    }
}

TEST(Rhp, MirrorSymmetryOfJump) {
  const ContourPoint p{Piece::RealPlus, Complex(0.8, 0.0), 0};
  const ContourPoint pm{Piece::RealMinus, Complex(-0.8, 0.0), 0};
  Mat2 s1;
  s1 << 0, 1, 1, 0;
  const Mat2 a = jump_v(data(), 0, p, 30.0, 5.0);
  const Mat2 b = jump_v(data(), 0, pm, 30.0, 5.0);
  EXPECT_LT((b - s1 * a * s1).norm(), 1e-12);
  EXPECT_NEAR(std::abs(a.determinant() - 1.0), 0.0, 1e-10);
}

TEST(Rhp, DecayOnLowerCutAndLines) {
  const auto r = jump_decay_report(data(), split(), 0, 0.0, {5.0, 10.0, 20.0, 40.0});
  EXPECT_TRUE(r.total_pass) << r.total_exponent;
  EXPECT_TRUE(r.cut_lower_pass) << r.cut_lower_exponent;
  EXPECT_TRUE(r.line_pass) << r.line_norm_at_10;
  EXPECT_LT(r.mirror_mismatch, 1e-10);
  EXPECT_LT(r.det_error, 1e-8);
  const auto j = to_json(r);
  EXPECT_EQ(j["schema"], "kdvlab.decay/1");
}

TEST(Rhp, SmallKBehaviour) {
  const auto r = small_k_report(data(), split(), 0, 20.0, 5.0);
  EXPECT_TRUE(r.pass) << r.slope;
}
