#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "kdvlab/numerics.hpp"
#include "kdvlab/scattering.hpp"

namespace kdvlab {

struct SplitConfig {
  double tau = NAN;  // NaN: (c + kappa_1) / 2
  int m0 = 4;
  int n0 = 7;
  double dk = 0.01;
  // half-width of the k window for the Fourier transform; 0 picks the
  // smallest power-of-two grid with |G| below edge_tol at the ends
  double k_window = 0.0;
  double edge_tol = 1e-12;
  std::size_t max_points = std::size_t(1) << 21;
  double jet_tol = 1e-6;
};

// One-sided jet of R at +0.  derivs[l] = R^{(l)}(+0), coeffs[l] = derivs[l] / l!.
struct TaylorJet {
  std::vector<Complex> derivs;
  std::vector<Complex> coeffs;
  // chi(ih) = i sum_l b_l h^l near 0, fitted independently of R
  std::vector<double> chi_coeffs;
  // max_l |2 Im(i^l R_l) - b_l| rho^l, relative to max_l |R_l| rho^l
  double consistency_residual = 0.0;
  // size of the part of R_l violating "R_l real for even l, imaginary for odd l"
  double parity_residual = 0.0;
};

// Reads the jet off the scattering data and checks it against the jet of chi.
// Throws NumericalError when the two disagree beyond tol.
TaylorJet taylor_at_zero(const ScatteringData& d, int m0, double tol = 1e-6);

// q(k) = sum_{s=n0+1}^{n0+m0} a_s (k - i tau)^{-s} and its mirror
// p(k) = conj(q(-conj k)), both analytic away from i tau.
struct RationalPair {
  double tau = 0.0;
  int n0 = 0, m0 = 0;
  std::vector<Complex> a;  // a[i] = a_{n0+1+i}
  double condition = 0.0;
  double roundtrip_error = 0.0;  // relative, re-evaluated jet vs input
  double parity_residual = 0.0;  // deviation from the real/imaginary alternation of a_s
  double mirror_residual = 0.0;  // max |p(k) - conj q(-k)| on a real probe grid

  Complex q(Complex k) const;
  Complex p(Complex k) const;
  // l-th derivative
  Complex dq(Complex k, int l) const;
  Complex dp(Complex k, int l) const;
  // Taylor coefficients of q at 0, l = 0..L
  std::vector<Complex> q_taylor(int L) const;
};

// Matches the first m0 Taylor coefficients of q at 0 to coeffs.
// Throws NumericalError if the linear system has condition number > 1e12.
RationalPair rational_approximants(const std::vector<Complex>& coeffs, double tau, int n0, int m0);

struct ResidualF {
  std::vector<double> h;
  std::vector<Complex> f;
  LineFit fit;  // log|f| vs log h on [1e-3 c, 1e-1 c]
  double required_slope = 0.0;
  bool pass = false;
  bool skipped = false;  // c = 0: no cut
  double switch_mismatch = 0.0;  // series vs chi-based value at the switch point
};

// f(ih) = chi(ih) + p(ih) - q(ih) on (0, c/2].
Complex residual_f_at(const ScatteringData& d, const RationalPair& pair, double h);
ResidualF residual_f(const ScatteringData& d, const RationalPair& pair,
                     std::size_t npts = 200);

// G(k) = (k - i tau)^6 / k^2 * calR(k) on a uniform grid and its transform
// Ghat(x) = (1/2pi) int G(k) e^{-ikx} dk on the dual grid.
struct GTransform {
  double dk = 0.0, dx = 0.0;
  std::size_t n = 0;
  // k_m = (m - n/2) dk, x_j = (j - n/2) dx
  std::vector<Complex> G;
  std::vector<double> Ghat;
  double ghat_imag_max = 0.0;
  double edge_value = 0.0;   // max |G| over the outer 1% of the window
  double mirror_residual = 0.0;  // max |G(-k) - conj G(k)|
  double x_half() const { return 0.5 * double(n) * dx; }
  double k_half() const { return 0.5 * double(n) * dk; }
  double k_at(std::size_t m) const { return (double(m) - 0.5 * double(n)) * dk; }
  double x_at(std::size_t j) const { return (double(j) - 0.5 * double(n)) * dx; }
};

// Throws NumericalError ("enlarge window") if |G| at the window edge exceeds edge_tol.
GTransform calG_and_fourier(const std::function<Complex(double)>& calR, double tau, const SplitConfig& cfg);

// Everything downstream of the scattering data needed to deform the jump.
class SplitReflection {
public:
  SplitReflection() = default;
  SplitReflection(const ScatteringData& d, const SplitConfig& cfg);

  const SplitConfig& config() const { return cfg_; }
  double c() const { return c_; }
  double tau() const { return pair_.tau; }
  bool trivial() const { return trivial_; }
  const TaylorJet& jet() const { return jet_; }
  const RationalPair& pair() const { return pair_; }
  const GTransform& transform() const { return gt_; }
  const ResidualF& f_report() const { return fres_; }

  // R - q for k >= 0, R - p for k < 0
  Complex calR(double k) const;
  Complex f(double h) const;

  // k^2/(k - i tau)^6 int_{-c^2 t}^{c^2 t} Ghat(x) e^{ikx} dx, any complex k
  Complex R_a(Complex k, double t) const;
  // Remainder calR - R_a on the transform's real grid, k_m for m in [0, n).
  std::vector<Complex> R_r_grid(double t) const;
  // R_a(k_m + i eta, t) on the transform's grid, one FFT.
  std::vector<Complex> R_a_line(double eta, double t) const;
  // Remainder at arbitrary real k, calR - R_a.
  Complex R_r(double k, double t) const;

  nlohmann::json report_json() const;

private:
  void check_window(double t) const;

  std::shared_ptr<const ScatteringData> data_;
  SplitConfig cfg_;
  double c_ = 0.0;
  bool trivial_ = false;
  TaylorJet jet_;
  RationalPair pair_;
  ResidualF fres_;
  GTransform gt_;
  std::vector<Complex> series_;  // Taylor coefficients of R - q at 0
  double series_radius_ = 0.0;
  mutable double cached_t_ = NAN;
  mutable std::vector<Complex> cached_rr_;
};

struct SplitBoundReport {
  std::vector<double> t;
  std::vector<double> remainder_sup;  // max_k |R_r| (k^6+1)/k^2
  LineFit remainder_fit;
  double target_exponent = 0.0;       // -(m0 - 3)
  bool remainder_pass = false;
  std::vector<double> analytic_constant;  // max |R_a| (|k|^6+1)/|k|^2 e^{-c^2 |Im k| t}
  double analytic_constant_spread = 0.0;  // max/min over the sweep
  double conjugation_residual = 0.0;      // real grid, R_a and R_r
  double strip_symmetry_residual = 0.0;   // R_a(-conj k) vs conj R_a(k) in the strip
  double cauchy_riemann_residual = 0.0;
  bool symmetry_pass = false;
};

SplitBoundReport split_bounds(const SplitReflection& s, const std::vector<double>& ts);
nlohmann::json to_json(const SplitBoundReport& r);

// G and Ghat as CSV: k, re G, im G  /  x, Ghat (every stride-th row)
void write_transform_csv(const GTransform& g, const std::string& g_path, const std::string& ghat_path,
                         std::size_t stride = 1);

}  // namespace kdvlab
