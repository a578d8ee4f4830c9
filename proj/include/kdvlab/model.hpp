#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kdvlab/field.hpp"
#include "kdvlab/rhp.hpp"
#include "kdvlab/scattering.hpp"

namespace kdvlab {

enum class RegionKind { D0, Dj, DjSol, Outside };
std::string to_string(RegionKind k);

struct RegionConfig {
  double eps = NAN;    // NaN: min gap of the velocities 4c^2, 4 kappa_j^2, divided by 4
  double beta = 0.0;
  double T0 = 5.0;
  double delta = NAN;  // NaN: circle_radius()
};

// Fills eps and delta from the spectrum; checks eps against the gaps.
RegionConfig resolve_region_config(const ScatteringData& d, RegionConfig cfg = {});

struct RegionTag {
  RegionKind kind = RegionKind::Outside;
  int j = 0;
};

// D_j lies between the bands of solitons j and j+1, D_N above the last band,
// D_0 between the lower edge of the domain and the first band.  Throws
// DomainError for t < T0.
RegionTag classify_region(double x, double t, double c, const std::vector<double>& kappas, const RegionConfig& cfg);

// gamma_j^2(x, t); j is 1-based
LogScaled gamma_xt(const ScatteringData& d, int j, double x, double t);
double phase_shift(const ScatteringData& d, int j);
Complex mu(const ScatteringData& d, int j, double x, double t);

struct ModelVectors {
  Vec2 S, V;
};
ModelVectors model_vectors(const ScatteringData& d, int j, Complex k, double x, double t);

struct ModelMatrix {
  Mat2 M, Minv;
};
ModelMatrix model_matrix(const ScatteringData& d, int j, Complex k, double x, double t);

struct RemovabilityReport {
  int j = 0;
  double x = 0.0, t = 0.0;
  std::vector<double> distance;               // 1e-2 .. 1e-6
  std::vector<double> at_pole, at_mirror, at_zero;  // |S M^{-1} - (1,1)|
  double at_1e4 = 0.0;
  double max_deviation = 0.0;
  bool pass = false;  // < 1e-8 at distance 1e-4, finite everywhere
};
RemovabilityReport removability_check(const ScatteringData& d, int j, double x, double t);

// Seeded probes of det M = 1, M(-k) = sigma_1 M(k) sigma_1, M -> I at infinity
// and (1,1) M = S at points (x, t) of the band around soliton line j.
struct AlgebraReport {
  int j = 0;
  unsigned seed = 0;
  std::size_t points = 0, probes = 0;
  double det = 0.0, symmetry = 0.0, infinity = 0.0, row = 0.0;
  bool pass = false;  // all four below 1e-12
};
AlgebraReport model_algebra_check(const ScatteringData& d, int j, const RegionConfig& cfg, unsigned seed,
                                  std::size_t points = 20, std::size_t probes_per_point = 5, double t_max = 40.0);
nlohmann::json to_json(const AlgebraReport& r);
nlohmann::json to_json(const RemovabilityReport& r);

// -sum 2 kappa^2 / cosh^2(kappa x - 4 kappa^3 t + Delta)
double q_sol(const ScatteringData& d, double x, double t);
// Same sum from -4 kappa g / (1 + g / 2 kappa)^2, g = gamma_j^2(x, t)
double q_sol_mobius(const ScatteringData& d, double x, double t);
double q_sol_term(const ScatteringData& d, int j, double x, double t);

// x = 4 kappa_j^2 t - Delta_j / kappa_j
struct SolitonLine {
  double kappa = 0.0, velocity = 0.0, offset = 0.0, height = 0.0;
};
std::vector<SolitonLine> soliton_lines(const ScatteringData& d);

FieldGrid asymptotic_field(const ScatteringData& d, const std::vector<double>& xs, const std::vector<double>& ts,
                           const RegionConfig& cfg);

}  // namespace kdvlab
