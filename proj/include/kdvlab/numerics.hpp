#pragma once

#include <functional>
#include <vector>

#include "kdvlab/types.hpp"

namespace kdvlab {

// Piecewise Chebyshev-Lobatto interpolant of a complex function of one real
// variable.  Panels share endpoints; each panel carries n+1 nodes.
class ChebPanels {
public:
  ChebPanels() = default;
  ChebPanels(std::vector<double> breaks, int n);

  // Distinct node abscissae in increasing order.
  std::vector<double> nodes() const;
  // Values ordered like nodes().
  void set_values(const std::vector<Complex>& v);
  const std::vector<Complex>& values() const { return vals_; }

  void fill(const std::function<Complex(double)>& f);

  Complex operator()(double x) const;
  double lo() const { return breaks_.front(); }
  double hi() const { return breaks_.back(); }
  int degree() const { return n_; }
  const std::vector<double>& breaks() const { return breaks_; }
  bool empty() const { return breaks_.size() < 2; }

private:
  std::vector<double> breaks_;
  int n_ = 0;
  std::vector<Complex> vals_;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  int used = 0;
};

// Least squares fit of log(y) against log(x); nonpositive y are skipped.
LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);
// Same fit when log(y) is already available (possibly -inf, skipped).
LineFit loglog_fit_logy(const std::vector<double>& x, const std::vector<double>& logy);

// Neville extrapolation of values f(h_i) to h = 0.  Returns the estimate and
// writes the last correction into *err if given.
Complex richardson(const std::vector<double>& h, const std::vector<Complex>& f,
                   double* err = nullptr);

int thread_count();
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

std::vector<double> linspace(double a, double b, std::size_t n);
std::vector<double> geomspace(double a, double b, std::size_t n);

}  // namespace kdvlab
