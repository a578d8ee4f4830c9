#pragma once

#include <string>
#include <vector>

#include "kdvlab/types.hpp"

namespace kdvlab {

enum class Family { SharpStep, TanhStep, TanhStepPlusWells, Tabulated };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

// -depth * sech^2((x - center) / width)
struct Well {
  double depth = 0.0;
  double center = 0.0;
  double width = 1.0;
};

struct PotentialSpec {
  Family family = Family::TanhStep;
  double c = 1.0;
  double steepness = 1.0;
  std::vector<Well> wells;
  std::vector<double> table_x, table_q;
  int m0 = 4;
  int n0 = 7;
  // NaN: chosen automatically where the tail residual drops below kTailTol
  double left_radius = NAN;
  double right_radius = NAN;

  bool decaying_mode() const { return c == 0.0; }
};

inline constexpr double kTailTol = 1e-14;

// q(x) ~ sum amp * exp(-rate * |x|) on one side, relative to the background
struct ExpTerm {
  double amp = 0.0;
  double rate = 0.0;
};

class Potential {
public:
  explicit Potential(PotentialSpec spec);

  double operator()(double x) const;
  // q restricted to the open segment (lo, hi): endpoint values are one-sided
  // limits from inside, so jumps at breakpoints are never sampled across.
  double inside(double x, double lo, double hi) const {
    if (x <= lo) return (*this)(std::nextafter(lo, hi));
    if (x >= hi) return (*this)(std::nextafter(hi, lo));
    return (*this)(x);
  }
  // order-th derivative; closed form for analytic families, 4th-order
  // differences of the interpolant for tabulated data.  Throws for the sharp
  // step (order >= 1), whose derivative is distributional.
  double derivative(double x, int order) const;

  double c() const { return spec_.c; }
  const PotentialSpec& spec() const { return spec_; }
  double left_radius() const { return left_radius_; }
  double right_radius() const { return right_radius_; }
  // Points where q or a low derivative jumps; ODE integration stops there.
  const std::vector<double>& breakpoints() const { return breaks_; }
  bool smooth() const { return spec_.family != Family::SharpStep; }
  bool fixture_only() const { return spec_.family == Family::SharpStep; }

  // q(x) ~ sum amp e^{-rate x} for x -> +inf
  const std::vector<ExpTerm>& right_tail() const { return rtail_; }
  // q(x) + c^2 ~ sum amp e^{rate x} for x -> -inf
  const std::vector<ExpTerm>& left_tail() const { return ltail_; }

  // max |q(x) + c^2 1_{x<0}| over the truncated window
  double max_excess() const;

private:
  double table_eval(double x) const;
  void init_tails();
  double find_radius(int side) const;

  PotentialSpec spec_;
  double left_radius_ = 0.0, right_radius_ = 0.0;
  double table_h_ = 0.0;
  std::vector<double> breaks_;
  std::vector<ExpTerm> rtail_, ltail_;
};

struct GridParams {
  double x_min = -40.0;
  double x_max = 40.0;
  double h = 0.01;
};

struct PotentialSamples {
  double c = 0.0;
  int m0 = 4, n0 = 7;
  double h = 0.0;
  std::vector<double> x, q;
  // dq[i-1][n] = q^{(i)}(x_n), i = 1..n0; empty when derivatives are distributional
  std::vector<std::vector<double>> dq;
  bool derivatives_distributional = false;
  bool fixture_only = false;
  double left_radius = 0.0, right_radius = 0.0;
  // |q(r)| + |q(-r) + c^2| at r = 0, h, 2h, ...
  std::vector<double> r, tail_residual;
  bool tail_envelope_ok = true;
};

PotentialSamples sample_potential(const Potential& pot, const GridParams& grid);

enum class Verdict { Finite, Divergent, Inconclusive };
std::string to_string(Verdict v);

struct MomentEntry {
  int order = 0;  // 0: weighted residual; i >= 1: derivative moment
  double value = 0.0;
  double tail_estimate = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::string note;
};

struct MomentReport {
  int m0 = 0;
  std::vector<MomentEntry> entries;
  bool satisfies_class = false;
};

MomentReport moment_diagnostics(const PotentialSamples& s, int m0);

// Two-column CSV (x, q); '#' comments and a non-numeric header are skipped.
void read_table_csv(const std::string& path, std::vector<double>& x, std::vector<double>& q);

}  // namespace kdvlab
