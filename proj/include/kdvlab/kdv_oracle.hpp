#pragma once

#include <functional>
#include <vector>

#include <json.hpp>

#include "kdvlab/field.hpp"
#include "kdvlab/potentials.hpp"

namespace kdvlab {

enum class RampKind { Tanh, Constant };

// q = ramp + w; w is periodic on [x_min, x_max) and evolved pseudo-spectrally.
struct SolverConfig {
  double x_min = -300.0;
  double x_max = 600.0;
  std::size_t nx = std::size_t(1) << 13;
  double dt = 1e-4;
  double sponge_width = 40.0;
  double sponge_strength = 20.0;
  RampKind ramp = RampKind::Tanh;
  double c = 1.0;               // tanh ramp -c^2 (1 - tanh x)/2
  double ramp_value = 0.0;      // constant ramp
  std::vector<double> times{5.0, 10.0, 20.0, 40.0};
  double blowup_factor = 10.0;
  std::size_t check_every = 50;
  bool dealias = true;

  // the measurement window stays two sponge widths away from either end
  double window_lo() const { return x_min + 2.0 * sponge_width; }
  double window_hi() const { return x_max - 2.0 * sponge_width; }
};

double ramp_value(const SolverConfig& cfg, double x, int derivative = 0);

// ETDRK4 for w_t + w_xxx = 6 q q_x - ramp''' - sponge * w.
// Output times must be all positive or all negative (backward run, sponge off).
// Throws NumericalError when max|w| grows beyond blowup_factor times its start value.
FieldGrid evolve(const std::function<double(double)>& q0, const SolverConfig& cfg);
FieldGrid evolve(const Potential& pot, SolverConfig cfg);

struct ConservationReport {
  std::vector<double> t;
  std::vector<double> mass_drift, energy_drift;  // relative, flux-corrected
  double max_mass_drift = 0.0, max_energy_drift = 0.0;
};

// Uses the window integrals and edge fluxes the solver stores in the field meta.
ConservationReport conservation_report(const FieldGrid& f);
nlohmann::json to_json(const ConservationReport& r);

}  // namespace kdvlab
