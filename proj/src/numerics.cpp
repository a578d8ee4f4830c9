#include "kdvlab/numerics.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace kdvlab {

ChebPanels::ChebPanels(std::vector<double> breaks, int n) : breaks_(std::move(breaks)), n_(n) {
  if (breaks_.size() < 2 || n_ < 1) throw DomainError("ChebPanels: need >= 1 panel and degree >= 1");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    if (!(breaks_[i] > breaks_[i - 1])) throw DomainError("ChebPanels: breaks must increase");
}

std::vector<double> ChebPanels::nodes() const {
  std::vector<double> out;
  const std::size_t np = breaks_.size() - 1;
  out.reserve(np * n_ + 1);
  for (std::size_t p = 0; p < np; ++p) {
    double a = breaks_[p], b = breaks_[p + 1];
    for (int j = (p == 0 ? 0 : 1); j <= n_; ++j) {
      if (j == 0) out.push_back(a);
      else if (j == n_) out.push_back(b);
      else out.push_back(0.5 * (a + b) - 0.5 * (b - a) * std::cos(kPi * j / n_));
    }
  }
  return out;
}

void ChebPanels::set_values(const std::vector<Complex>& v) {
  if (v.size() != (breaks_.size() - 1) * n_ + 1) throw DomainError("ChebPanels: value count mismatch");
  vals_ = v;
}

void ChebPanels::fill(const std::function<Complex(double)>& f) {
  auto xs = nodes();
  std::vector<Complex> v(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { v[i] = f(xs[i]); });
  vals_ = std::move(v);
}

Complex ChebPanels::operator()(double x) const {
  if (x < lo() || x > hi()) throw DomainError("ChebPanels: abscissa outside interpolation range");
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t p = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - breaks_.begin() - 1, 0),
                                        breaks_.size() - 2);
  double a = breaks_[p], b = breaks_[p + 1];
  const Complex* f = vals_.data() + p * n_;
  Complex num = 0.0;
  double den = 0.0;
  for (int j = 0; j <= n_; ++j) {
    double xj = (j == 0) ? a : (j == n_ ? b : 0.5 * (a + b) - 0.5 * (b - a) * std::cos(kPi * j / n_));
    double d = x - xj;
    if (d == 0.0) return f[j];
    double w = (j % 2 ? -1.0 : 1.0) * ((j == 0 || j == n_) ? 0.5 : 1.0) / d;
    num += w * f[j];
    den += w;
  }
  return num / den;
}

LineFit loglog_fit_logy(const std::vector<double>& x, const std::vector<double>& logy) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(logy[i]) || x[i] <= 0) continue;
    double lx = std::log(x[i]);
    sx += lx; sy += logy[i]; sxx += lx * lx; sxy += lx * logy[i];
    ++n;
  }
  LineFit fit;
  fit.used = n;
  if (n < 2) {
    fit.slope = n == 0 ? -INFINITY : 0.0;
    return fit;
  }
  double d = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / d;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

LineFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> ly(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) ly[i] = y[i] > 0 ? std::log(y[i]) : -INFINITY;
  return loglog_fit_logy(x, ly);
}

Complex richardson(const std::vector<double>& h, const std::vector<Complex>& f, double* err) {
  std::vector<Complex> p = f;
  const std::size_t n = p.size();
  Complex last = 0.0;
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      Complex prev = p[i];
      p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
      if (i == 0) last = p[i] - prev;
    }
  }
  if (err) *err = std::abs(last);
  return p[0];
}

int thread_count() {
  int hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("KDVLAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return std::min(v, hw);
  }
  return hw;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t nt = std::min<std::size_t>(thread_count(), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += nt) body(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
  return v;
}

std::vector<double> geomspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? a : a * std::pow(b / a, double(i) / double(n - 1));
  return v;
}

}  // namespace kdvlab
