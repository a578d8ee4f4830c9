#include "kdvlab/reflsplit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include <Eigen/Dense>
#include <fftw3.h>

namespace kdvlab {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// rising factorial s (s+1) ... (s+l-1)
double rising(int s, int l) {
  double r = 1.0;
  for (int i = 0; i < l; ++i) r *= double(s + i);
  return r;
}

Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex s = 0.0;
  for (std::size_t l = c.size(); l-- > 0;) s = s * z + c[l];
  return s;
}

// Least squares fit of Im chi(ih) on [0, hmax] by a polynomial without
// constant term; returns b_l with chi(ih) ~ i sum b_l h^l, b_0 = 0.
std::vector<double> fit_chi_jet(const ScatteringData& d, double hmax, int order) {
  const int m = 4 * order + 8;
  Eigen::MatrixXd A(m, order);
  Eigen::VectorXd y(m);
  for (int i = 0; i < m; ++i) {
    double s = 0.5 * (1.0 - std::cos(kPi * (i + 0.5) / m));  // (0, 1)
    for (int j = 0; j < order; ++j) A(i, j) = std::pow(s, j + 1);
    y(i) = d.chi_at(s * hmax).imag();
  }
  Eigen::VectorXd b = A.colPivHouseholderQr().solve(y);
  std::vector<double> out(order + 1, 0.0);
  for (int j = 0; j < order; ++j) out[j + 1] = b(j) / std::pow(hmax, j + 1);
  return out;
}

void fft_inplace(std::vector<Complex>& v, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(v.data());
  fftw_plan plan = fftw_plan_dft_1d(int(v.size()), p, p, sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

}  // namespace

TaylorJet taylor_at_zero(const ScatteringData& d, int m0, double tol) {
  if (m0 < 1) throw DomainError("taylor_at_zero: m0 must be positive");
  if (int(d.R_taylor.size()) < m0) throw DomainError("taylor_at_zero: scattering data carries too short a jet");
  TaylorJet jet;
  for (int l = 0; l < m0; ++l) {
    jet.coeffs.push_back(d.R_taylor[l]);
    jet.derivs.push_back(d.R_taylor[l] * factorial(l));
  }
  const double rho = d.taylor_radius > 0.0 ? d.taylor_radius : 0.05;
  double scale = 0.0;
  for (int l = 0; l < m0; ++l) scale = std::max(scale, std::abs(jet.coeffs[l]) * std::pow(rho, l));
  for (int l = 0; l < m0; ++l) {
    const Complex r = jet.coeffs[l];
    const double off = (l % 2 == 0) ? std::abs(r.imag()) : std::abs(r.real());
    jet.parity_residual = std::max(jet.parity_residual, off * std::pow(rho, l) / std::max(scale, 1e-300));
  }
  if (d.c > 0.0) {
    jet.chi_coeffs = fit_chi_jet(d, 0.4 * rho, std::max(m0 + 10, 14));
    // chi(ih) = 2i Im R(ih) near 0, so b_l = 2 Im(i^l R_l)
    for (int l = 0; l < m0; ++l) {
      const double mis = std::abs(2.0 * (std::pow(I, l) * jet.coeffs[l]).imag() - jet.chi_coeffs[l]);
      jet.consistency_residual =
          std::max(jet.consistency_residual, mis * std::pow(rho, l) / std::max(scale, 1e-300));
    }
    if (jet.consistency_residual > tol)
      throw NumericalError("data-quality error: jet of R at +0 inconsistent with the jet of chi (residual " +
                           std::to_string(jet.consistency_residual) + ")");
  }
  return jet;
}

Complex RationalPair::q(Complex k) const { return dq(k, 0); }
Complex RationalPair::p(Complex k) const { return std::conj(q(-std::conj(k))); }

Complex RationalPair::dq(Complex k, int l) const {
  const Complex z = k - I * tau;
  Complex s = 0.0;
  const double sign = (l % 2 == 0) ? 1.0 : -1.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const int ord = n0 + 1 + int(i);
    s += a[i] * sign * rising(ord, l) / std::pow(z, ord + l);
  }
  return s;
}

Complex RationalPair::dp(Complex k, int l) const {
  const double sign = (l % 2 == 0) ? 1.0 : -1.0;
  return sign * std::conj(dq(-std::conj(k), l));
}

std::vector<Complex> RationalPair::q_taylor(int L) const {
  std::vector<Complex> out(L + 1, 0.0);
  const Complex w = -I * tau;
  for (int l = 0; l <= L; ++l) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int ord = n0 + 1 + int(i);
      // (k - i tau)^{-s} = (-i tau)^{-s} sum_l C(s+l-1, l) (k / (i tau))^l
      s += a[i] * std::pow(w, -ord) * (rising(ord, l) / factorial(l)) * std::pow(I * tau, -l);
    }
    out[l] = s;
  }
  return out;
}

RationalPair rational_approximants(const std::vector<Complex>& coeffs, double tau, int n0, int m0) {
  if (!(tau > 0.0)) throw DomainError("rational_approximants: tau must be positive");
  if (m0 < 1 || int(coeffs.size()) < m0) throw DomainError("rational_approximants: need m0 Taylor coefficients");
  if (n0 < 0) throw DomainError("rational_approximants: n0 must be nonnegative");
  RationalPair rp;
  rp.tau = tau;
  rp.n0 = n0;
  rp.m0 = m0;
  Eigen::MatrixXcd A(m0, m0);
  Eigen::VectorXcd b(m0);
  const Complex w = -I * tau;
  for (int l = 0; l < m0; ++l) {
    for (int i = 0; i < m0; ++i) {
      const int ord = n0 + 1 + i;
      A(l, i) = std::pow(w, -ord) * (rising(ord, l) / factorial(l)) * std::pow(I * tau, -l);
    }
    b(l) = coeffs[l];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& sv = svd.singularValues();
  rp.condition = sv(0) / sv(sv.size() - 1);
  if (!(rp.condition <= 1e12))
    throw NumericalError("rational approximant system ill-conditioned (condition " + std::to_string(rp.condition) +
                         "); reconfigure tau or the jet");
  Eigen::VectorXcd x = A.fullPivLu().solve(b);
  rp.a.assign(x.data(), x.data() + m0);

  auto back = rp.q_taylor(m0 - 1);
  double num = 0.0, den = 0.0;
  for (int l = 0; l < m0; ++l) {
    num = std::max(num, std::abs(back[l] - coeffs[l]) * std::pow(tau, l));
    den = std::max(den, std::abs(coeffs[l]) * std::pow(tau, l));
  }
  rp.roundtrip_error = den > 0.0 ? num / den : num;

  double amax = 0.0;
  for (auto v : rp.a) amax = std::max(amax, std::abs(v));
  for (int i = 0; i < m0; ++i) {
    const int ord = n0 + 1 + i;
    const bool want_real = ((ord - n0) % 2 == 0) == (n0 % 2 == 1);
    const double off = want_real ? std::abs(rp.a[i].imag()) : std::abs(rp.a[i].real());
    rp.parity_residual = std::max(rp.parity_residual, amax > 0.0 ? off / amax : 0.0);
  }
  for (double k : linspace(-10.0, 10.0, 41))
    rp.mirror_residual = std::max(rp.mirror_residual, std::abs(rp.p(k) - std::conj(rp.q(-k))));
  return rp;
}

Complex residual_f_at(const ScatteringData& d, const RationalPair& pair, double h) {
  if (d.c == 0.0) return 0.0;
  if (!(h >= 0.0 && h <= 0.5 * d.c)) throw DomainError("residual_f: h outside [0, c/2]");
  const double hs = 0.2 * d.taylor_radius;
  if (h < hs && !d.R_taylor.empty()) {
    auto qt = pair.q_taylor(int(d.R_taylor.size()) - 1);
    std::vector<Complex> diff(d.R_taylor.size());
    for (std::size_t l = 0; l < diff.size(); ++l) diff[l] = d.R_taylor[l] - qt[l];
    return 2.0 * I * horner(diff, I * h).imag();
  }
  const Complex k = I * h;
  return d.chi_at(h) + pair.p(k) - pair.q(k);
}

ResidualF residual_f(const ScatteringData& d, const RationalPair& pair, std::size_t npts) {
  ResidualF r;
  r.required_slope = pair.m0 - 1 - 0.3;
  if (d.c == 0.0) {
    r.skipped = true;
    r.pass = true;
    return r;
  }
  const double c = d.c;
  r.h = geomspace(1e-4 * c, 0.5 * c, npts);
  r.f.resize(npts);
  for (std::size_t i = 0; i < npts; ++i) r.f[i] = residual_f_at(d, pair, r.h[i]);
  std::vector<double> fh, fa;
  for (std::size_t i = 0; i < npts; ++i)
    if (r.h[i] >= 1e-3 * c * (1 - 1e-12) && r.h[i] <= 1e-1 * c * (1 + 1e-12)) {
      fh.push_back(r.h[i]);
      fa.push_back(std::abs(r.f[i]));
    }
  r.fit = loglog_fit(fh, fa);
  r.pass = r.fit.used >= 3 && r.fit.slope >= r.required_slope;
  // an identically vanishing residual trivially satisfies the bound
  if (r.fit.used < 3) r.pass = std::all_of(fa.begin(), fa.end(), [](double v) { return v < 1e-14; });
  const double hs = 0.2 * d.taylor_radius;
  if (hs > 0.0 && hs <= 0.5 * c) {
    const double hm = hs * (1 + 1e-9);
    const Complex k = I * hm;
    const Complex direct = d.chi_at(hm) + pair.p(k) - pair.q(k);
    r.switch_mismatch = std::abs(direct - residual_f_at(d, pair, hs * (1 - 1e-9)));
  }
  return r;
}

GTransform calG_and_fourier(const std::function<Complex(double)>& calR, double tau, const SplitConfig& cfg) {
  auto G_of = [&](double k) -> Complex {
    if (k == 0.0) return 0.0;
    return std::pow(Complex(k, -tau), 6) / (k * k) * calR(k);
  };
  const double dk = cfg.dk;
  auto edge = [&](double K) {
    double m = 0.0;
    for (double s : linspace(0.99 * K, K, 9)) m = std::max({m, std::abs(G_of(s)), std::abs(G_of(-s))});
    return m;
  };
  double K = cfg.k_window;
  const double Kmax = 0.5 * double(cfg.max_points) * dk;
  if (K <= 0.0) {
    K = 64.0;
    while (edge(K) > cfg.edge_tol && 2.0 * K <= Kmax) K *= 2.0;
  }
  std::size_t n = 16;
  while (double(n) * dk < 2.0 * K) n *= 2;
  if (n > cfg.max_points) n = cfg.max_points;
  GTransform g;
  g.dk = dk;
  g.n = n;
  g.dx = 2.0 * kPi / (double(n) * dk);
  const double Kw = 0.5 * double(n) * dk;
  g.edge_value = edge(Kw);
  if (g.edge_value > cfg.edge_tol)
    throw NumericalError("enlarge window: |G| = " + std::to_string(g.edge_value) + " at |k| = " +
                         std::to_string(Kw) + " exceeds " + std::to_string(cfg.edge_tol));
  g.G.resize(n);
  parallel_for(n, [&](std::size_t m) { g.G[m] = G_of(g.k_at(m)); });
  for (std::size_t m = 1; m < n / 2; ++m)
    g.mirror_residual = std::max(g.mirror_residual, std::abs(g.G[n / 2 + m] - std::conj(g.G[n / 2 - m])));
  // trapezoid: the unpaired endpoint k = -K carries half weight of a negligible value
  std::vector<Complex> work(n);
  for (std::size_t m = 0; m < n; ++m) work[m] = (m % 2 ? -1.0 : 1.0) * g.G[m] * (m == 0 ? 0.5 : 1.0);
  fft_inplace(work, FFTW_FORWARD);
  g.Ghat.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const Complex v = (j % 2 ? -1.0 : 1.0) * work[j] * (dk / (2.0 * kPi));
    g.Ghat[j] = v.real();
    g.ghat_imag_max = std::max(g.ghat_imag_max, std::abs(v.imag()));
  }
  return g;
}

SplitReflection::SplitReflection(const ScatteringData& d, const SplitConfig& cfg) : cfg_(cfg) {
  data_ = std::make_shared<const ScatteringData>(d);
  c_ = d.c;
  if (c_ == 0.0) {
    trivial_ = true;
    fres_.skipped = true;
    fres_.pass = true;
    return;
  }
  double tau = cfg.tau;
  if (std::isnan(tau)) tau = d.kappas.empty() ? 1.5 * c_ : 0.5 * (c_ + d.kappas.front());
  if (!(tau > c_) || (!d.kappas.empty() && !(tau < d.kappas.front())))
    throw DomainError("split: tau must lie strictly between c and kappa_1");
  jet_ = taylor_at_zero(d, cfg.m0, cfg.jet_tol);
  pair_ = rational_approximants(jet_.coeffs, tau, cfg.n0, cfg.m0);
  fres_ = residual_f(d, pair_);
  auto qt = pair_.q_taylor(int(d.R_taylor.size()) - 1);
  series_.resize(d.R_taylor.size());
  for (std::size_t l = 0; l < series_.size(); ++l) series_[l] = d.R_taylor[l] - qt[l];
  series_radius_ = 0.2 * d.taylor_radius;
  gt_ = calG_and_fourier([this](double k) { return calR(k); }, tau, cfg_);
}

Complex SplitReflection::calR(double k) const {
  if (trivial_) return 0.0;
  if (k < 0.0) return std::conj(calR(-k));
  if (k < series_radius_) return horner(series_, k);
  return data_->R_at(k) - pair_.q(k);
}

Complex SplitReflection::f(double h) const {
  if (trivial_) return 0.0;
  return residual_f_at(*data_, pair_, h);
}

void SplitReflection::check_window(double t) const {
  if (!(t > 0.0)) throw DomainError("split: t must be positive");
  if (c_ * c_ * t > 0.9 * gt_.x_half())
    throw NumericalError("regrid: window [-c^2 t, c^2 t] exceeds the transform grid (|x| <= " +
                         std::to_string(gt_.x_half()) + "); decrease dk");
}

namespace {

// Trapezoid pieces between the last grid node inside [-X0, X0] and +-X0,
// with Ghat interpolated linearly to the truncation points.
struct EndCells {
  bool partial = false;
  double rem = 0.0;
  double x0[2] = {0, 0}, x1[2] = {0, 0}, g0[2] = {0, 0}, g1[2] = {0, 0};

  EndCells(const GTransform& g, double X0) {
    const std::size_t mid = g.n / 2;
    const std::size_t half = std::size_t(std::floor(X0 / g.dx));
    rem = X0 - double(half) * g.dx;
    partial = rem > 0.0 && mid + half + 1 < g.n;
    if (!partial) return;
    for (int s = 0; s < 2; ++s) {
      const std::size_t j0 = s ? mid + half : mid - half;
      const std::size_t j1 = s ? j0 + 1 : j0 - 1;
      x0[s] = g.x_at(j0);
      x1[s] = s ? X0 : -X0;
      g0[s] = g.Ghat[j0];
      g1[s] = g0[s] + (g.Ghat[j1] - g0[s]) * rem / g.dx;
    }
  }
  Complex at(Complex k) const {
    if (!partial) return 0.0;
    Complex s = 0.0;
    for (int e = 0; e < 2; ++e) s += 0.5 * rem * (g0[e] * std::exp(I * k * x0[e]) + g1[e] * std::exp(I * k * x1[e]));
    return s;
  }
};

}  // namespace

Complex SplitReflection::R_a(Complex k, double t) const {
  if (trivial_) return 0.0;
  check_window(t);
  const double X0 = c_ * c_ * t;
  const std::size_t n = gt_.n;
  const double dx = gt_.dx;
  const std::size_t mid = n / 2;
  const std::size_t half = std::size_t(std::floor(X0 / dx));
  const Complex step = std::exp(I * k * dx);
  Complex e = std::exp(-I * k * (double(half) * dx));
  Complex s = 0.0;
  for (std::size_t j = mid - half; j <= mid + half; ++j) {
    const double w = (j == mid - half || j == mid + half) ? 0.5 : 1.0;
    s += w * gt_.Ghat[j] * e;
    e *= step;
  }
  s *= dx;
  s += EndCells(gt_, X0).at(k);
  return k * k / std::pow(k - I * pair_.tau, 6) * s;
}

std::vector<Complex> SplitReflection::R_r_grid(double t) const {
  const std::size_t n = gt_.n;
  if (trivial_) return std::vector<Complex>(n, 0.0);
  check_window(t);
  if (t == cached_t_) return cached_rr_;
  const double X0 = c_ * c_ * t;
  const std::size_t mid = n / 2;
  const std::size_t half = std::size_t(std::floor(X0 / gt_.dx));
  // complement of the quadrature used by R_a
  std::vector<Complex> work(n);
  for (std::size_t j = 0; j < n; ++j) {
    double w = 1.0;
    if (j == mid - half || j == mid + half) w = 0.5;
    else if (j > mid - half && j < mid + half) w = 0.0;
    work[j] = (j % 2 ? -1.0 : 1.0) * gt_.Ghat[j] * w * gt_.dx;
  }
  fft_inplace(work, FFTW_BACKWARD);
  const EndCells ends(gt_, X0);
  std::vector<Complex> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double k = gt_.k_at(m);
    const Complex tail = (m % 2 ? -1.0 : 1.0) * work[m] - ends.at(k);
    out[m] = k == 0.0 ? Complex(0.0) : k * k / std::pow(Complex(k, -pair_.tau), 6) * tail;
  }
  cached_t_ = t;
  cached_rr_ = out;
  return out;
}

std::vector<Complex> SplitReflection::R_a_line(double eta, double t) const {
  const std::size_t n = gt_.n;
  if (trivial_) return std::vector<Complex>(n, 0.0);
  check_window(t);
  const double X0 = c_ * c_ * t;
  const double dx = gt_.dx;
  const std::size_t mid = n / 2;
  const std::size_t half = std::size_t(std::floor(X0 / dx));
  std::vector<Complex> work(n);
  for (std::size_t j = mid - half; j <= mid + half; ++j) {
    const double w = (j == mid - half || j == mid + half) ? 0.5 : 1.0;
    work[j] = (j % 2 ? -1.0 : 1.0) * w * gt_.Ghat[j] * std::exp(-eta * gt_.x_at(j)) * dx;
  }
  fft_inplace(work, FFTW_BACKWARD);
  const EndCells ends(gt_, X0);
  std::vector<Complex> out(n);
  for (std::size_t m = 0; m < n; ++m) {
    const Complex k(gt_.k_at(m), eta);
    Complex s = (m % 2 ? -1.0 : 1.0) * work[m];
    s += ends.at(k);
    out[m] = k * k / std::pow(k - Complex(0.0, pair_.tau), 6) * s;
  }
  return out;
}

Complex SplitReflection::R_r(double k, double t) const {
  if (trivial_) return 0.0;
  return calR(k) - R_a(k, t);
}

nlohmann::json SplitReflection::report_json() const {
  nlohmann::json j;
  j["schema"] = "kdvlab.split/1";
  j["c"] = c_;
  j["trivial"] = trivial_;
  if (trivial_) return j;
  j["tau"] = pair_.tau;
  j["m0"] = pair_.m0;
  j["n0"] = pair_.n0;
  auto cx = [](Complex z) { return nlohmann::json::array({z.real(), z.imag()}); };
  nlohmann::json a = nlohmann::json::array(), r = nlohmann::json::array();
  for (auto v : pair_.a) a.push_back(cx(v));
  for (auto v : jet_.derivs) r.push_back(cx(v));
  j["a"] = a;
  j["R_derivs_at_0"] = r;
  j["jet_consistency_residual"] = jet_.consistency_residual;
  j["jet_parity_residual"] = jet_.parity_residual;
  j["a_parity_residual"] = pair_.parity_residual;
  j["condition"] = pair_.condition;
  j["roundtrip_error"] = pair_.roundtrip_error;
  j["mirror_residual"] = pair_.mirror_residual;
  j["f_slope"] = fres_.fit.slope;
  j["f_required_slope"] = fres_.required_slope;
  j["f_pass"] = fres_.pass;
  j["f_switch_mismatch"] = fres_.switch_mismatch;
  j["transform"] = {{"n", gt_.n},
                    {"dk", gt_.dk},
                    {"dx", gt_.dx},
                    {"k_half", gt_.k_half()},
                    {"x_half", gt_.x_half()},
                    {"edge_value", gt_.edge_value},
                    {"ghat_imag_max", gt_.ghat_imag_max},
                    {"mirror_residual", gt_.mirror_residual}};
  double l1 = 0.0;
  for (std::size_t i = 0; i < gt_.n; ++i)
    l1 += std::pow(std::abs(gt_.x_at(i)), pair_.m0 - 3) * std::abs(gt_.Ghat[i]) * gt_.dx;
  j["weighted_ghat_l1"] = l1;
  return j;
}

SplitBoundReport split_bounds(const SplitReflection& s, const std::vector<double>& ts) {
  SplitBoundReport r;
  r.t = ts;
  r.target_exponent = -(s.config().m0 - 3);
  if (s.trivial()) {
    r.remainder_sup.assign(ts.size(), 0.0);
    r.analytic_constant.assign(ts.size(), 0.0);
    r.remainder_pass = r.symmetry_pass = true;
    return r;
  }
  const auto& g = s.transform();
  const double c = s.c();
  // strip probes: Re k in [-8, 8], 0 <= Im k <= c/2
  std::vector<Complex> probes;
  for (double re : linspace(-8.0, 8.0, 17))
    for (double im : linspace(0.0, 0.5 * c, 5)) probes.push_back(Complex(re + 0.013, im));
  for (double t : ts) {
    auto rr = s.R_r_grid(t);
    double sup = 0.0;
    for (std::size_t m = 0; m < g.n; ++m) {
      const double k = g.k_at(m);
      if (k == 0.0) continue;
      sup = std::max(sup, std::abs(rr[m]) * (std::pow(k, 6) + 1.0) / (k * k));
    }
    r.remainder_sup.push_back(sup);
    double C = 0.0;
    for (auto k : probes) {
      const Complex ra = s.R_a(k, t);
      const double ak = std::abs(k);
      C = std::max(C, std::abs(ra) * (std::pow(ak, 6) + 1.0) / (ak * ak) * std::exp(-c * c * k.imag() * t));
      r.strip_symmetry_residual =
          std::max(r.strip_symmetry_residual, std::abs(s.R_a(-std::conj(k), t) - std::conj(ra)) /
                                                  std::max(std::abs(ra), 1e-300));
    }
    r.analytic_constant.push_back(C);
    for (double k : linspace(0.05, 6.0, 24)) {
      const Complex a1 = s.R_a(k, t), a2 = s.R_a(-k, t);
      const Complex r1 = s.R_r(k, t), r2 = s.R_r(-k, t);
      r.conjugation_residual = std::max({r.conjugation_residual, std::abs(a2 - std::conj(a1)),
                                         std::abs(r2 - std::conj(r1))});
    }
    for (Complex k : {Complex(0.7, 0.2 * c), Complex(-1.9, 0.3 * c), Complex(3.1, 0.1 * c)}) {
      const double h = 1e-4;
      const Complex dxv = (-s.R_a(k + 2.0 * h, t) + 8.0 * s.R_a(k + h, t) - 8.0 * s.R_a(k - h, t) +
                           s.R_a(k - 2.0 * h, t)) /
                          (12.0 * h);
      const Complex ih = I * h;
      const Complex dyv = (-s.R_a(k + 2.0 * ih, t) + 8.0 * s.R_a(k + ih, t) - 8.0 * s.R_a(k - ih, t) +
                           s.R_a(k - 2.0 * ih, t)) /
                          (12.0 * ih);
      r.cauchy_riemann_residual =
          std::max(r.cauchy_riemann_residual, std::abs(dxv - dyv) / std::max(std::abs(dxv), 1e-300));
    }
  }
  r.remainder_fit = loglog_fit(ts, r.remainder_sup);
  r.remainder_pass = r.remainder_fit.used >= 2 && std::abs(r.remainder_fit.slope - r.target_exponent) <= 0.5;
  auto [mn, mx] = std::minmax_element(r.analytic_constant.begin(), r.analytic_constant.end());
  r.analytic_constant_spread = *mn > 0.0 ? *mx / *mn : INFINITY;
  r.symmetry_pass = r.conjugation_residual < 1e-6 && r.strip_symmetry_residual < 1e-6;
  return r;
}

nlohmann::json to_json(const SplitBoundReport& r) {
  return {{"t", r.t},
          {"remainder_sup", r.remainder_sup},
          {"remainder_exponent", r.remainder_fit.slope},
          {"target_exponent", r.target_exponent},
          {"remainder_pass", r.remainder_pass},
          {"analytic_constant", r.analytic_constant},
          {"analytic_constant_spread", r.analytic_constant_spread},
          {"conjugation_residual", r.conjugation_residual},
          {"strip_symmetry_residual", r.strip_symmetry_residual},
          {"cauchy_riemann_residual", r.cauchy_riemann_residual},
          {"symmetry_pass", r.symmetry_pass}};
}

void write_transform_csv(const GTransform& g, const std::string& g_path, const std::string& ghat_path,
                         std::size_t stride) {
  if (stride == 0) stride = 1;
  std::ofstream a(g_path), b(ghat_path);
  if (!a || !b) throw DomainError("cannot open transform CSV output");
  a << std::setprecision(17) << "k,re,im\n";
  b << std::setprecision(17) << "x,ghat\n";
  for (std::size_t m = 0; m < g.n; m += stride) a << g.k_at(m) << ',' << g.G[m].real() << ',' << g.G[m].imag() << '\n';
  for (std::size_t j = 0; j < g.n; j += stride) b << g.x_at(j) << ',' << g.Ghat[j] << '\n';
}

}  // namespace kdvlab
