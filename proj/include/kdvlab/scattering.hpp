#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kdvlab/numerics.hpp"
#include "kdvlab/potentials.hpp"

namespace kdvlab {

enum class CutSide { Right, Left };

// k together with k1 = sqrt(k^2 + c^2) on a chosen branch.
struct SpectralParameter {
  Complex k;
  Complex k1;

  // Branch cut on [-ic, ic], k1 ~ k at infinity.  On the cut itself the side
  // flag picks the boundary value; it is ignored elsewhere.
  static SpectralParameter make(Complex k, double c, CutSide side = CutSide::Right);
  // Principal sqrt(k^2 + c^2): the continuation from the right half plane
  // across the cut, analytic in |k| < c.
  static SpectralParameter continued(Complex k, double c);
};

struct JostOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
};

// Values of a Jost solution on a requested grid.  f = phi (or phi_1); the
// reduced amplitude is u = e^{-ikx} phi (right) or u = e^{i k1 x} phi_1 (left).
struct JostValues {
  SpectralParameter sp;
  std::vector<double> x;
  std::vector<Complex> f, df;
  std::vector<Complex> u, du;
  // size of the first-order tail correction applied at the launch point
  double tail_correction = 0.0;
};

JostValues jost_right(const Potential& pot, const SpectralParameter& sp, const std::vector<double>& xs,
                      const JostOptions& opt = {});
JostValues jost_left(const Potential& pot, const SpectralParameter& sp, const std::vector<double>& xs,
                     const JostOptions& opt = {});

// Reduced amplitudes of both Jost solutions at one point; everything
// downstream (W, R, T, m) is built from these.
struct JostPair {
  SpectralParameter sp;
  double x = 0.0;
  Complex u, du;    // right, u = e^{-ikx} phi
  Complex u1, du1;  // left, u1 = e^{i k1 x} phi_1
};
JostPair jost_pair(const Potential& pot, const SpectralParameter& sp, double x, const JostOptions& opt = {});

Complex wronskian_of(const JostPair& p);

struct WronskianResult {
  Complex W;
  double spread = 0.0;  // relative, across x = -1, 0, 1
};

// W = phi_1 phi' - phi_1' phi, checked for x-independence.
WronskianResult wronskian(const Potential& pot, const SpectralParameter& sp, const JostOptions& opt = {});

struct ReflTrans {
  Complex R, T;
  double condition = 0.0;
};

// T phi_1 = conj(phi) + R phi on the real axis, solved at x = 0.
ReflTrans reflection_transmission(const Potential& pot, double k, const JostOptions& opt = {});

// Continuation of R from k > 0 into |k| < c (used for the jet of R at +0).
Complex reflection_continued(const Potential& pot, Complex k, const JostOptions& opt = {});

// chi(ih) = 4 k [k1]_r / |W(k)|^2 at k = ih, 0 <= h <= c.
Complex chi(const Potential& pot, double h, const JostOptions& opt = {});

struct SpectrumResult {
  std::vector<double> kappas;
  std::vector<std::string> warnings;
};
SpectrumResult discrete_spectrum(const Potential& pot, const JostOptions& opt = {});

std::vector<double> norming_constants(const Potential& pot, const std::vector<double>& kappas,
                                      const JostOptions& opt = {});

// Taylor coefficients R_l = R^{(l)}(+0)/l! of the right-side continuation,
// from a trapezoid Cauchy integral on |k| = radius.
std::vector<Complex> reflection_taylor(const Potential& pot, int order, double radius, int npts = 48,
                                       const JostOptions& opt = {});

struct ScatterOptions {
  JostOptions jost{1e-11, 1e-15};
  int r_degree = 48;
  int chi_degree = 32;
  int taylor_order = 14;
  double taylor_radius = 0.0;  // 0: automatic
  double k_max = 64.0;
};

struct ScatteringData {
  double c = 0.0;
  std::vector<double> kappas;   // increasing
  std::vector<double> gammas2;  // gamma_j^2
  Complex W_ic;
  ChebPanels R, T;              // k >= 0
  ChebPanels chi_theta;         // chi(i c sin(theta)), theta in [0, pi/2]
  std::vector<Complex> R_taylor;
  double taylor_radius = 0.0;
  double k_small = 0.0;         // below this R is taken from R_taylor
  double R_tail = 0.0;          // R(k) ~ R_tail / k^2 beyond R.hi()
  double unitarity_deficit = 0.0;
  std::vector<std::string> warnings;
  nlohmann::json potential;     // provenance

  std::size_t N() const { return kappas.size(); }
  Complex R_at(double k) const;
  Complex T_at(double k) const;
  Complex chi_at(double h) const;
};

ScatteringData scattering_data(const Potential& pot, const ScatterOptions& opt = {});

inline constexpr const char* kScatterSchema = "kdvlab.scatter/1";
nlohmann::json to_json(const ScatteringData& d);
ScatteringData scattering_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const PotentialSpec& s);

}  // namespace kdvlab
