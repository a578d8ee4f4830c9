#pragma once

#include <vector>

#include <json.hpp>

#include "kdvlab/field.hpp"
#include "kdvlab/model.hpp"

namespace kdvlab {

struct PeakMatch {
  int j = 0;
  double x_pred = 0.0, x_found = 0.0;
  double h_pred = 0.0, h_found = 0.0;
  double x_rel = 0.0, h_rel = 0.0;
  bool pass = false;
};

struct ValidationReport {
  double beta = 0.0, c = 0.0;
  int m0 = 4;
  double nu = 0.0;
  std::vector<double> t, sup_error, x_at;
  LineFit fit;
  bool exponent_pass = false;
  std::vector<PeakMatch> peaks;  // at the last common time
  bool peaks_pass = true;
  double peak_tol = 0.01;
  bool pass = false;
};

// Sup error over {x >= 4c^2 t + (beta/c) log t} intersected with [x_lo, x_hi].
// Throws DomainError unless both fields share the x grid and at least three times.
ValidationReport validate_fields(const FieldGrid& oracle, const FieldGrid& asym, double c, double beta, int m0,
                                 double x_lo, double x_hi, const std::vector<SolitonLine>& lines = {});
nlohmann::json to_json(const ValidationReport& r);

}  // namespace kdvlab
