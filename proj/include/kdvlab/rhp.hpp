#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "kdvlab/numerics.hpp"
#include "kdvlab/potentials.hpp"
#include "kdvlab/reflsplit.hpp"
#include "kdvlab/scattering.hpp"

namespace kdvlab {

using Mat2 = Eigen::Matrix2cd;
using Vec2 = Eigen::RowVector2cd;

// Phi(k) = 4ik^3 + ikx/t.  t_phase returns t*Phi, which stays meaningful at t = 0.
Complex phase(Complex k, double x, double t);
Complex t_phase(Complex k, double x, double t);

// P_j(k) = prod_{l=j}^{N} (k + i kappa_l)/(k - i kappa_l), j is 1-based; P_{N+1} = 1.
Complex blaschke(const std::vector<double>& kappas, int j, Complex k);

// A: lower-left -i g^2 e^{2t Phi(i kappa)}/(k - i kappa);
// B: upper-right -(k - i kappa)/(i g^2 e^{2t Phi(i kappa)}).
// The exponential is carried log-scaled, so either entry may underflow to 0
// but never overflows to inf.
struct PoleMatrices {
  Mat2 A, B;
  LogScaled dressing;  // g^2 e^{2t Phi(i kappa)}
};
PoleMatrices pole_matrices(double kappa, double gamma2, Complex k, double x, double t);

enum class Piece {
  RealPlus,
  RealMinus,
  CutUpper,       // [ic, ic/2], top-down
  CutLower,       // [ic/2, 0]
  CutUpperStar,   // [-ic, -ic/2]
  CutLowerStar,   // [-ic/2, 0]
  LineC,          // Im k = c/2, left to right
  LineCStar,      // Im k = -c/2, right to left
  Circle,         // |k - i kappa_l| = delta
  CircleStar,
};
std::string to_string(Piece p);
bool is_mirror(Piece p);
Piece mirror_of(Piece p);

struct ContourPoint {
  Piece piece = Piece::RealPlus;
  Complex k;
  int l = 0;  // circle index, 1-based
};

struct PieceGrid {
  Piece piece = Piece::RealPlus;
  int l = 0;
  std::vector<Complex> k;
  std::vector<double> w;  // arc-length quadrature weights
};

struct ContourOptions {
  double density = 512.0;  // points per unit length near 0
  int circle_points = 256;
  double real_max = 40.0;  // R_+ and C are truncated at |Re k| = real_max
  double line_max = 8.0;
};

struct ContourSet {
  double c = 0.0;
  double delta = 0.0;  // circle radius
  std::vector<double> kappas;
  std::vector<PieceGrid> pieces;  // upper family first, mirrors after
};

// delta = min(min gap, kappa_1 - c) / 3
double circle_radius(const std::vector<double>& kappas, double c);
ContourSet build_contours(const ScatteringData& d, const ContourOptions& opt = {});
void write_contour_csv(const ContourSet& cs, const std::string& path);

// m(k, x) at t = 0 from the Jost solutions.  Im k < 0 uses m(-k) sigma_1.
// Points of the cut need a side, real points are taken as boundary values
// from above.
Vec2 build_m_from_jost(const Potential& pot, Complex k, double x, CutSide side = CutSide::Right,
                       const JostOptions& opt = {});

struct JumpCheck {
  double x = 0.0;
  double residual = 0.0;  // max |m+ - m- v| / |m+|
  double worst_k = 0.0;
  std::size_t points = 0;
  bool pass = false;
};

// m+ = m- v on a real grid at t = 0 with the raw (P = 1) jump.
// Throws NumericalError with the worst k when the residual exceeds tol,
// unless throw_on_fail is false.
JumpCheck verify_jump_real_axis(const Potential& pot, const ScatteringData& d, double x,
                                const std::vector<double>& ks, double tol = 1e-5,
                                bool throw_on_fail = true);
std::vector<double> default_jump_grid(double k_min = 0.05, double k_max = 10.0, std::size_t n = 120);

struct Reconstruction {
  double x = 0.0;
  double q = 0.0;
  double error_estimate = 0.0;
  std::vector<double> kappa;
  std::vector<double> samples;  // 2k^2 (m1 m2 - 1) at k = i kappa
};

// Extrapolates 2k^2 (m1 m2 - 1) along k = i kappa to kappa = inf.
Reconstruction reconstruct_q(const Potential& pot, double x, std::vector<double> kappas = {},
                             const JostOptions& opt = {});

// Raw jump of the region-j problem.  Mirror pieces use sigma_1 v(-k) sigma_1.
Mat2 jump_v(const ScatteringData& d, int j, const ContourPoint& p, double x, double t);

// Jump after the lens opening, built from the split at time t.  Point-wise
// evaluation uses direct quadrature for R_a.
Mat2 conjugated_jump_vhat(const ScatteringData& d, const SplitReflection& s, int j, const ContourPoint& p,
                          double x, double t);

struct PieceNorms {
  Piece piece = Piece::RealPlus;
  int l = 0;
  // index [s] for the weight |k|^s
  std::vector<std::array<double, 3>> sup, l1;
  std::array<LineFit, 3> sup_fit, l1_fit;
};

struct DecayReport {
  int j = 0;
  double beta = 0.0;
  int m0 = 0;
  double nu = 0.0;
  std::vector<double> t, x;
  std::vector<PieceNorms> pieces;  // upper family; mirrors are identical by construction
  double mirror_mismatch = 0.0;    // max |v(k) - sigma_1 v(-k) sigma_1| over mirrored grids
  double det_error = 0.0;
  double total_exponent = 0.0;     // sup over the whole contour, s = 0
  bool total_pass = false;         // total_exponent <= -nu + 0.3

  // piecewise acceptance
  double cut_upper_exponent = 0.0;
  double cut_lower_exponent = 0.0;
  double line_norm_at_10 = 0.0;
  bool cut_upper_pass = false;
  bool cut_lower_pass = false;
  bool line_pass = false;
};

// x = 4c^2 t + (beta/c) log t for every t.
DecayReport jump_decay_report(const ScatteringData& d, const SplitReflection& s, int j, double beta,
                              const std::vector<double>& ts, const ContourOptions& opt = {});
nlohmann::json to_json(const DecayReport& r);

struct SmallKReport {
  double t = 0.0, x = 0.0;
  std::vector<double> k;
  std::vector<double> real_norm, cut_norm;  // |W| on R_+ at k and on the cut at i k
  LineFit real_fit, cut_fit;
  double slope = 0.0;  // the smaller of the two
  bool pass = false;   // slope >= 1.7
};

// |v_hat - I| against |k| on [1e-3, 1e-1] along R_+ and the lower cut.
SmallKReport small_k_report(const ScatteringData& d, const SplitReflection& s, int j, double x, double t,
                            std::size_t npts = 25);
nlohmann::json to_json(const SmallKReport& r);

}  // namespace kdvlab
