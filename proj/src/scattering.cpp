#include <cstdio>
#include "kdvlab/scattering.hpp"

#include <algorithm>
#include <array>
#include <functional>

#include <boost/numeric/odeint.hpp>

namespace kdvlab {

namespace odeint = boost::numeric::odeint;

SpectralParameter SpectralParameter::make(Complex k, double c, CutSide side) {
  if (c == 0.0) return {k, k};
  const double sgn = side == CutSide::Right ? 1.0 : -1.0;
  if (k.real() == 0.0 && std::abs(k.imag()) <= c) {
    double h = k.imag();
    return {k, sgn * std::sqrt(std::max(0.0, c * c - h * h))};
  }
  return {k, k * std::sqrt(1.0 + c * c / (k * k))};
}

SpectralParameter SpectralParameter::continued(Complex k, double c) {
  return {k, std::sqrt(k * k + c * c)};
}

namespace {

using State = std::array<Complex, 3>;

struct Launch {
  double x0;
  State y0;
  double correction;
};

// Integrates y from x0 through the monotone list `stops`, returning the state
// at each stop.  Breakpoints of the potential are inserted as extra stops so
// no step straddles a jump.
template <class Rhs>
std::vector<State> run(const Rhs& rhs, const Launch& L, double dir, const std::vector<double>& stops,
                       const std::vector<double>& breaks, const JostOptions& opt) {
  std::vector<double> times{L.x0};
  std::vector<int> which{-1};
  std::vector<std::pair<double, int>> pts;
  for (std::size_t i = 0; i < stops.size(); ++i) pts.push_back({stops[i], int(i)});
  const double far = stops.empty() ? L.x0 : stops.back();
  for (double b : breaks)
    if ((b - L.x0) * dir > 0 && (far - b) * dir > 0) pts.push_back({b, -1});
  std::sort(pts.begin(), pts.end(), [dir](auto& a, auto& b) { return a.first * dir < b.first * dir; });
  for (auto& p : pts) {
    if (p.first == times.back()) {
      if (p.second >= 0) which.back() = p.second;
      continue;
    }
    times.push_back(p.first);
    which.push_back(p.second);
  }
  std::vector<State> out(stops.size());
  State y = L.y0;
  if (times.size() == 1) {
    for (std::size_t i = 0; i < stops.size(); ++i) out[i] = y;
    return out;
  }
  auto stepper = odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_fehlberg78<State>());
  double dt = dir * 1e-2;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    Rhs seg = rhs;
    seg.lo = std::min(times[i], times[i + 1]);
    seg.hi = std::max(times[i], times[i + 1]);
    try {
      double span = times[i + 1] - times[i];
      if (std::abs(dt) > std::abs(span)) dt = span;
      odeint::integrate_adaptive(stepper, seg, y, times[i], times[i + 1], dt);
    } catch (const std::exception& e) {
      throw NumericalError("Jost integration failed between x = " + std::to_string(times[i]) + " and " +
                           std::to_string(times[i + 1]) + ": " + e.what());
    }
    if (which[i + 1] >= 0) out[which[i + 1]] = y;
  }
  for (const auto& s : out)
    for (const auto& v : s)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NumericalError("Jost integration produced a non-finite value");
  return out;
}

struct RightRhs {
  const Potential* pot;
  Complex k;
  bool norm;
  double lo = -INFINITY, hi = INFINITY;
  void operator()(const State& y, State& d, double x) const {
    d[0] = y[1];
    d[1] = -2.0 * I * k * y[1] + pot->inside(x, lo, hi) * y[0];
    d[2] = norm ? -(y[0] * y[0]) * std::exp(2.0 * I * k * x) : Complex(0.0);
  }
};

struct LeftRhs {
  const Potential* pot;
  Complex k1;
  double c2;
  bool norm;
  double lo = -INFINITY, hi = INFINITY;
  void operator()(const State& y, State& d, double x) const {
    d[0] = y[1];
    d[1] = 2.0 * I * k1 * y[1] + (pot->inside(x, lo, hi) + c2) * y[0];
    d[2] = norm ? (y[0] * y[0]) * std::exp(-2.0 * I * k1 * x) : Complex(0.0);
  }
};

Launch right_launch(const Potential& pot, Complex k, double x0, bool norm) {
  Complex u = 1.0, du = 0.0;
  for (const auto& t : pot.right_tail()) {
    Complex den = t.rate * (t.rate - 2.0 * I * k);
    if (std::abs(den) < 1e-12) continue;
    Complex v = t.amp * std::exp(-t.rate * x0) / den;
    u += v;
    du += -t.rate * v;
  }
  Complex integral = 0.0;
  if (norm) integral = -u * u * std::exp(2.0 * I * k * x0) / (2.0 * I * k);
  return {x0, {u, du, integral}, std::abs(u - 1.0)};
}

Launch left_launch(const Potential& pot, Complex k1, double x0, bool norm) {
  Complex u = 1.0, du = 0.0;
  for (const auto& t : pot.left_tail()) {
    Complex den = t.rate * (t.rate - 2.0 * I * k1);
    if (std::abs(den) < 1e-12) continue;
    Complex v = t.amp * std::exp(t.rate * x0) / den;
    u += v;
    du += t.rate * v;
  }
  Complex integral = 0.0;
  if (norm) integral = u * u * std::exp(-2.0 * I * k1 * x0) / (-2.0 * I * k1);
  return {x0, {u, du, integral}, std::abs(u - 1.0)};
}

// states of the right solution at xs (any order)
std::vector<State> right_states(const Potential& pot, Complex k, const std::vector<double>& xs, bool norm,
                                const JostOptions& opt, double* corr = nullptr) {
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] > xs[b]; });
  double x0 = pot.right_radius();
  if (!xs.empty()) x0 = std::max(x0, xs[order.front()]);
  Launch L = right_launch(pot, k, x0, norm);
  if (corr) *corr = L.correction;
  std::vector<double> stops;
  for (auto i : order) stops.push_back(xs[i]);
  auto st = run(RightRhs{&pot, k, norm, -INFINITY, INFINITY}, L, -1.0, stops, pot.breakpoints(), opt);
  std::vector<State> out(xs.size());
  for (std::size_t j = 0; j < order.size(); ++j) out[order[j]] = st[j];
  return out;
}

std::vector<State> left_states(const Potential& pot, Complex k1, const std::vector<double>& xs, bool norm,
                               const JostOptions& opt, double* corr = nullptr) {
  std::vector<std::size_t> order(xs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  double x0 = -pot.left_radius();
  if (!xs.empty()) x0 = std::min(x0, xs[order.front()]);
  Launch L = left_launch(pot, k1, x0, norm);
  if (corr) *corr = L.correction;
  std::vector<double> stops;
  for (auto i : order) stops.push_back(xs[i]);
  const double c2 = pot.c() * pot.c();
  auto st = run(LeftRhs{&pot, k1, c2, norm, -INFINITY, INFINITY}, L, 1.0, stops, pot.breakpoints(), opt);
  std::vector<State> out(xs.size());
  for (std::size_t j = 0; j < order.size(); ++j) out[order[j]] = st[j];
  return out;
}

}  // namespace

JostValues jost_right(const Potential& pot, const SpectralParameter& sp, const std::vector<double>& xs,
                      const JostOptions& opt) {
  JostValues jv;
  jv.sp = sp;
  jv.x = xs;
  auto st = right_states(pot, sp.k, xs, false, opt, &jv.tail_correction);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Complex e = std::exp(I * sp.k * xs[i]);
    jv.u.push_back(st[i][0]);
    jv.du.push_back(st[i][1]);
    jv.f.push_back(st[i][0] * e);
    jv.df.push_back((st[i][1] + I * sp.k * st[i][0]) * e);
  }
  return jv;
}

JostValues jost_left(const Potential& pot, const SpectralParameter& sp, const std::vector<double>& xs,
                     const JostOptions& opt) {
  JostValues jv;
  jv.sp = sp;
  jv.x = xs;
  auto st = left_states(pot, sp.k1, xs, false, opt, &jv.tail_correction);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Complex e = std::exp(-I * sp.k1 * xs[i]);
    jv.u.push_back(st[i][0]);
    jv.du.push_back(st[i][1]);
    jv.f.push_back(st[i][0] * e);
    jv.df.push_back((st[i][1] - I * sp.k1 * st[i][0]) * e);
  }
  return jv;
}

JostPair jost_pair(const Potential& pot, const SpectralParameter& sp, double x, const JostOptions& opt) {
  auto r = right_states(pot, sp.k, {x}, false, opt);
  auto l = left_states(pot, sp.k1, {x}, false, opt);
  return {sp, x, r[0][0], r[0][1], l[0][0], l[0][1]};
}

Complex wronskian_of(const JostPair& p) {
  const Complex k = p.sp.k, k1 = p.sp.k1;
  return std::exp(I * (k - k1) * p.x) * (p.u1 * p.du - p.du1 * p.u + I * (k + k1) * p.u * p.u1);
}

static std::string fmt_g(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

WronskianResult wronskian(const Potential& pot, const SpectralParameter& sp, const JostOptions& opt) {
  const std::vector<double> xs{-1.0, 0.0, 1.0};
  auto r = right_states(pot, sp.k, xs, false, opt);
  auto l = left_states(pot, sp.k1, xs, false, opt);
  Complex W[3];
  double scale = 0.0;
  for (int i = 0; i < 3; ++i) {
    JostPair jp{sp, xs[i], r[i][0], r[i][1], l[i][0], l[i][1]};
    W[i] = wronskian_of(jp);
    const Complex k = sp.k, k1 = sp.k1;
    const double terms = std::abs(std::exp(I * (k - k1) * xs[i])) *
                         (std::abs(jp.u1 * jp.du) + std::abs(jp.du1 * jp.u) + std::abs((k + k1) * jp.u * jp.u1));
    scale = std::max(scale, terms);
  }
  WronskianResult res;
  res.W = W[1];
  res.spread = scale == 0.0 ? 0.0 : std::max(std::abs(W[0] - W[1]), std::abs(W[2] - W[1])) / scale;
  if (res.spread > 1e-8 && scale > 1e-12)
    throw NumericalError("inconsistent integration: Wronskian spread " + fmt_g(res.spread) + " at k = " + fmt_g(sp.k.real()) + (sp.k.imag() < 0 ? "" : "+") + fmt_g(sp.k.imag()) + "i");
  return res;
}

ReflTrans reflection_transmission(const Potential& pot, double k, const JostOptions& opt) {
  if (k == 0.0) throw DomainError("reflection_transmission: k = 0 is excluded");
  auto sp = SpectralParameter::make(k, pot.c());
  auto p = jost_pair(pot, sp, 0.0, opt);
  const Complex phi = p.u, dphi = p.du + I * sp.k * p.u;
  const Complex phi1 = p.u1, dphi1 = p.du1 - I * sp.k1 * p.u1;
  // [phi1  -phi ] [T]   [conj phi ]
  // [phi1' -phi'] [R] = [conj phi']
  const Complex a = phi1, b = -phi, c = dphi1, d = -dphi;
  const Complex det = a * d - b * c;
  const Complex r1 = std::conj(phi), r2 = std::conj(dphi);
  ReflTrans out;
  out.T = (r1 * d - b * r2) / det;
  out.R = (a * r2 - c * r1) / det;
  double fro = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  out.condition = fro / std::abs(det);
  if (!(out.condition < 1e12))
    throw NumericalError("ill-conditioned scattering solve at k = " + std::to_string(k) +
                         " (condition " + std::to_string(out.condition) + ")");
  return out;
}

Complex reflection_continued(const Potential& pot, Complex k, const JostOptions& opt) {
  auto sp = SpectralParameter::continued(k, pot.c());
  auto rp = right_states(pot, k, {0.0}, false, opt);
  auto rm = right_states(pot, -k, {0.0}, false, opt);
  auto l = left_states(pot, sp.k1, {0.0}, false, opt);
  const Complex u = rp[0][0], du = rp[0][1];
  const Complex v = rm[0][0], dv = rm[0][1];
  const Complex u1 = l[0][0], du1 = l[0][1];
  const Complex W = u1 * du - du1 * u + I * (k + sp.k1) * u * u1;
  const Complex Wm = u1 * dv - du1 * v - I * (k - sp.k1) * u1 * v;
  return -Wm / W;
}

Complex chi(const Potential& pot, double h, const JostOptions& opt) {
  const double c = pot.c();
  if (!(h >= 0.0 && h <= c)) throw DomainError("chi: h outside [0, c]");
  if (h == 0.0 || h == c) return 0.0;
  auto sp = SpectralParameter::make(Complex(0.0, h), c, CutSide::Right);
  auto p = jost_pair(pot, sp, 0.0, opt);
  Complex W = wronskian_of(p);
  return 4.0 * sp.k * sp.k1 / std::norm(W);
}

namespace {

// Bound-state matching point: where the right and left solutions agree best
// relative to their size (both are dominant only near the eigenfunction bulk).
double matching_point(const Potential& pot, const SpectralParameter& sp, const JostOptions& opt) {
  std::vector<double> xs;
  for (double x = -pot.left_radius(); x <= pot.right_radius(); x += 0.25) xs.push_back(x);
  auto r = right_states(pot, sp.k, xs, false, opt);
  auto l = left_states(pot, sp.k1, xs, false, opt);
  std::vector<double> rel(xs.size()), logsize(xs.size());
  double best = INFINITY;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Complex u = r[i][0], du = r[i][1], u1 = l[i][0], du1 = l[i][1];
    const Complex w = u1 * du - du1 * u + I * (sp.k + sp.k1) * u * u1;
    const double scale = std::abs(u1 * (du + I * sp.k * u)) + std::abs((du1 - I * sp.k1 * u1) * u);
    rel[i] = scale > 0.0 ? std::abs(w) / scale : INFINITY;
    logsize[i] = std::log(std::abs(u) * std::abs(u1) + 1e-300) + (I * (sp.k - sp.k1) * xs[i]).real();
    best = std::min(best, rel[i]);
  }
  // among consistent points, the one where the eigenfunction is largest
  const double accept = std::max(1e-6, 10.0 * best);
  double xm = 0.0, top = -INFINITY;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (rel[i] <= accept && logsize[i] > top) {
      top = logsize[i];
      xm = xs[i];
    }
  return xm;
}

double W_on_axis(const Potential& pot, double kappa, double x, const JostOptions& opt) {
  auto sp = SpectralParameter::make(Complex(0.0, kappa), pot.c());
  return wronskian_of(jost_pair(pot, sp, x, opt)).real();
}

// bisection then secant on a bracketing interval
double refine_root(const std::function<double(double)>& f, double a, double b, double fa, double fb) {
  for (int it = 0; it < 40 && b - a > 1e-14 * b; ++it) {
    double m = 0.5 * (a + b), fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) { a = m; fa = fm; } else { b = m; fb = fm; }
  }
  double x0 = a, x1 = b, f0 = fa, f1 = fb;
  for (int it = 0; it < 20 && std::abs(x1 - x0) > 1e-15 * x1; ++it) {
    if (f1 == f0) break;
    double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 >= a && x2 <= b)) break;
    x0 = x1; f0 = f1;
    x1 = x2; f1 = f(x2);
  }
  return std::abs(f1) <= std::abs(f0) ? x1 : x0;
}

}  // namespace

SpectrumResult discrete_spectrum(const Potential& pot, const JostOptions& opt) {
  const double c = pot.c();
  SpectrumResult res;
  const double kmin = c > 0.0 ? c * (1.0 + 1e-6) : 1e-3;
  const double kmax = c + std::sqrt(pot.max_excess()) + 1.0;
  const int n = 400;
  std::vector<double> ks(n), ws(n);
  for (int i = 0; i < n; ++i) ks[i] = kmin + (kmax - kmin) * i / (n - 1);
  parallel_for(n, [&](std::size_t i) { ws[i] = W_on_axis(pot, ks[i], 0.0, opt); });
  if (ws.back() > 0.0)
    throw DomainError("eigenvalue window too small: sign change pending at kappa_max = " + std::to_string(kmax));
  const double cell = ks[1] - ks[0];
  for (int i = 0; i + 1 < n; ++i) {
    if ((ws[i] > 0.0) == (ws[i + 1] > 0.0) && ws[i] != 0.0) continue;
    auto f0 = [&](double kap) { return W_on_axis(pot, kap, 0.0, opt); };
    double guess = refine_root(f0, ks[i], ks[i + 1], ws[i], ws[i + 1]);
    // re-solve at a well-conditioned matching point
    const double xm = matching_point(pot, SpectralParameter::make(Complex(0.0, guess), c), opt);
    auto fm = [&](double kap) { return W_on_axis(pot, kap, xm, opt); };
    double a = std::max(kmin, guess - 0.5 * cell), b = std::min(kmax, guess + 0.5 * cell);
    double fa = fm(a), fb = fm(b);
    for (int grow = 0; grow < 4 && (fa > 0.0) == (fb > 0.0); ++grow) {
      a = std::max(kmin, a - cell);
      b = std::min(kmax, b + cell);
      fa = fm(a);
      fb = fm(b);
    }
    double root = (fa > 0.0) == (fb > 0.0) ? guess : refine_root(fm, a, b, fa, fb);
    res.kappas.push_back(root);
  }
  std::sort(res.kappas.begin(), res.kappas.end());
  for (double kap : res.kappas)
    if (c > 0.0 && kap - c < 1e-6 * c)
      res.warnings.push_back("near-resonance: eigenvalue parameter " + std::to_string(kap) + " within tolerance of c");
  return res;
}

std::vector<double> norming_constants(const Potential& pot, const std::vector<double>& kappas,
                                      const JostOptions& opt) {
  std::vector<double> out;
  const double c = pot.c();
  for (double kap : kappas) {
    auto sp = SpectralParameter::make(Complex(0.0, kap), c);
    const double xm = matching_point(pot, sp, opt);
    auto r = right_states(pot, sp.k, {xm}, true, opt)[0];
    auto l = left_states(pot, sp.k1, {xm}, true, opt)[0];
    // real amplitudes at xm; the exponential factors are positive
    const double er = std::exp(-kap * xm), el = std::exp(sp.k1.imag() * xm);
    const double phi = r[0].real() * er, dphi = (r[1] + I * sp.k * r[0]).real() * er;
    const double phi1 = l[0].real() * el, dphi1 = (l[1] - I * sp.k1 * l[0]).real() * el;
    const double alpha = std::abs(phi1) > std::abs(dphi1) * 1e-3 ? phi / phi1 : dphi / dphi1;
    double mismatch = std::abs(phi - alpha * phi1) + std::abs(dphi - alpha * dphi1);
    double scale = std::abs(phi) + std::abs(dphi);
    if (mismatch > 1e-6 * scale)
      throw NumericalError("diverging tail: " + std::to_string(kap) + " is not an eigenvalue parameter (mismatch " +
                           std::to_string(mismatch / scale) + ")");
    double norm2 = r[2].real() + alpha * alpha * l[2].real();
    if (!(norm2 > 0.0)) throw NumericalError("non-positive norm for eigenfunction");
    out.push_back(1.0 / norm2);
  }
  return out;
}

std::vector<Complex> reflection_taylor(const Potential& pot, int order, double radius, int npts,
                                       const JostOptions& opt) {
  std::vector<Complex> vals(npts);
  parallel_for(npts, [&](std::size_t n) {
    double th = 2.0 * kPi * double(n) / npts;
    vals[n] = reflection_continued(pot, radius * std::exp(I * th), opt);
  });
  std::vector<Complex> coef(order + 1);
  for (int l = 0; l <= order; ++l) {
    Complex s = 0.0;
    for (int n = 0; n < npts; ++n) s += vals[n] * std::exp(-I * (2.0 * kPi * l * n / npts));
    coef[l] = s / double(npts) / std::pow(radius, l);
  }
  return coef;
}

Complex ScatteringData::R_at(double k) const {
  if (k < 0.0) return std::conj(R_at(-k));
  if (k < k_small && !R_taylor.empty()) {
    Complex s = 0.0;
    for (std::size_t l = R_taylor.size(); l-- > 0;) s = s * k + R_taylor[l];
    return s;
  }
  if (k > R.hi()) return R_tail / (k * k);
  return R(k);
}

Complex ScatteringData::T_at(double k) const {
  if (k < 0.0) return std::conj(T_at(-k));
  if (k > T.hi()) return 1.0 + (T(T.hi()) - 1.0) * T.hi() / k;
  return T(k);
}

Complex ScatteringData::chi_at(double h) const {
  if (c == 0.0) return 0.0;
  if (!(h >= 0.0 && h <= c)) throw DomainError("chi_at: h outside [0, c]");
  return chi_theta(std::asin(std::min(1.0, h / c)));
}

ScatteringData scattering_data(const Potential& pot, const ScatterOptions& opt) {
  ScatteringData d;
  const double c = pot.c();
  d.c = c;
  d.potential = spec_to_json(pot.spec());
  const auto& jo = opt.jost;
  if (c > 0.0) {
    auto sp = SpectralParameter::make(Complex(0.0, c), c);
    d.W_ic = wronskian(pot, sp, jo).W;
    if (std::abs(d.W_ic) < 1e-8)
      throw ResonanceError("resonant data: the condition W(ic) != 0 fails (|W(ic)| = " +
                           std::to_string(std::abs(d.W_ic)) + ")");
  } else {
    d.W_ic = wronskian(pot, SpectralParameter::make(0.0, 0.0), jo).W;
  }
  auto spec = discrete_spectrum(pot, jo);
  d.kappas = spec.kappas;
  d.warnings = spec.warnings;
  d.gammas2 = norming_constants(pot, d.kappas, jo);

  const double s = c > 0.0 ? std::min(c, 1.0) : 1.0;
  d.taylor_radius = opt.taylor_radius > 0.0 ? opt.taylor_radius : 0.05 * s;
  for (const auto& t : pot.right_tail()) d.taylor_radius = std::min(d.taylor_radius, t.rate / 8.0);
  for (const auto& t : pot.left_tail()) d.taylor_radius = std::min(d.taylor_radius, t.rate / 8.0);
  d.R_taylor = reflection_taylor(pot, opt.taylor_order, d.taylor_radius, 64, jo);
  d.k_small = 1e-3 * s;

  std::vector<double> breaks{0.0, 0.05 * s, 0.25 * s, 0.5 * s};
  for (double b = 1.0; b <= 16.0 + 1e-12; b += 1.0)
    if (b > breaks.back()) breaks.push_back(b);
  for (double b : {20.0, 24.0, 32.0, 48.0, 64.0, 96.0, 128.0})
    if (b <= opt.k_max + 1e-12 && b > breaks.back()) breaks.push_back(b);
  d.R = ChebPanels(breaks, opt.r_degree);
  d.T = ChebPanels(breaks, opt.r_degree);
  auto nodes = d.R.nodes();
  std::vector<Complex> rv(nodes.size()), tv(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t i) {
    double k = nodes[i];
    if (k < d.k_small) {
      Complex s0 = 0.0;
      for (std::size_t l = d.R_taylor.size(); l-- > 0;) s0 = s0 * k + d.R_taylor[l];
      rv[i] = s0;
      double kk = c > 0.0 ? k : d.k_small;
      if (kk == 0.0) {
        tv[i] = 0.0;
      } else {
        auto sp = SpectralParameter::make(kk, c);
        tv[i] = 2.0 * I * kk / wronskian_of(jost_pair(pot, sp, 0.0, jo));
      }
    } else {
      auto rt = reflection_transmission(pot, k, jo);
      rv[i] = rt.R;
      tv[i] = rt.T;
    }
  });
  d.R.set_values(rv);
  d.T.set_values(tv);
  const double K = d.R.hi();
  // only a jump in q produces the 1/k^2 tail; smooth data decay faster than any power
  d.R_tail = pot.smooth() ? 0.0 : (rv.back() * K * K).real();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double k = nodes[i];
    if (k < d.k_small) continue;
    double k1 = std::sqrt(k * k + c * c);
    d.unitarity_deficit = std::max(d.unitarity_deficit, std::abs(std::norm(rv[i]) + k1 / k * std::norm(tv[i]) - 1.0));
  }
  if (c > 0.0) {
    d.chi_theta = ChebPanels({0.0, 0.1, 0.3, 0.6, 0.9, 1.2, 0.5 * kPi}, opt.chi_degree);
    d.chi_theta.fill([&](double th) { return chi(pot, th >= 0.5 * kPi ? c : c * std::sin(th), jo); });
  }
  return d;
}

nlohmann::json spec_to_json(const PotentialSpec& s) {
  nlohmann::json j;
  j["family"] = to_string(s.family);
  j["c"] = s.c;
  j["steepness"] = s.steepness;
  j["m0"] = s.m0;
  j["n0"] = s.n0;
  auto wells = nlohmann::json::array();
  for (const auto& w : s.wells) wells.push_back({{"depth", w.depth}, {"center", w.center}, {"width", w.width}});
  j["wells"] = wells;
  if (s.family == Family::Tabulated) j["table_rows"] = s.table_x.size();
  return j;
}

namespace {

nlohmann::json panel_json(const ChebPanels& p, const char* var, bool im_only) {
  auto arr = nlohmann::json::array();
  auto xs = p.nodes();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (im_only) arr.push_back({{var, xs[i]}, {"im", p.values()[i].imag()}});
    else arr.push_back({{var, xs[i]}, {"re", p.values()[i].real()}, {"im", p.values()[i].imag()}});
  }
  return arr;
}

ChebPanels panel_from(const nlohmann::json& breaks, int degree, const nlohmann::json& rows, bool im_only,
                      const char* var) {
  ChebPanels p(breaks.get<std::vector<double>>(), degree);
  std::vector<Complex> v;
  for (const auto& r : rows) v.emplace_back(im_only ? 0.0 : r.at("re").get<double>(), r.at("im").get<double>());
  p.set_values(v);
  auto xs = p.nodes();
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (std::abs(rows[i].at(var).get<double>() - xs[i]) > 1e-12 * std::max(1.0, std::abs(xs[i])))
      throw DomainError("scatter artifact: grid nodes do not match the declared panels");
  return p;
}

}  // namespace

nlohmann::json to_json(const ScatteringData& d) {
  nlohmann::json j;
  j["schema"] = kScatterSchema;
  j["c"] = d.c;
  j["kappas"] = d.kappas;
  j["gammas2"] = d.gammas2;
  j["W_ic"] = {d.W_ic.real(), d.W_ic.imag()};
  j["R"] = panel_json(d.R, "k", false);
  j["T"] = panel_json(d.T, "k", false);
  j["R_breaks"] = d.R.breaks();
  j["R_degree"] = d.R.degree();
  if (!d.chi_theta.empty()) {
    auto rows = nlohmann::json::array();
    auto th = d.chi_theta.nodes();
    for (std::size_t i = 0; i < th.size(); ++i)
      rows.push_back({{"h", d.c * std::sin(th[i])}, {"theta", th[i]}, {"im", d.chi_theta.values()[i].imag()}});
    j["chi"] = rows;
    j["chi_theta_breaks"] = d.chi_theta.breaks();
    j["chi_degree"] = d.chi_theta.degree();
  } else {
    j["chi"] = nlohmann::json::array();
  }
  auto tay = nlohmann::json::array();
  for (auto z : d.R_taylor) tay.push_back({z.real(), z.imag()});
  j["R_taylor"] = tay;
  j["taylor_radius"] = d.taylor_radius;
  j["k_small"] = d.k_small;
  j["R_tail"] = d.R_tail;
  j["unitarity_deficit"] = d.unitarity_deficit;
  j["warnings"] = d.warnings;
  j["potential"] = d.potential;
  return j;
}

ScatteringData scattering_from_json(const nlohmann::json& j) {
  if (!j.contains("schema") || j["schema"] != kScatterSchema)
    throw DomainError(std::string("scatter artifact: expected schema ") + kScatterSchema);
  ScatteringData d;
  d.c = j.at("c").get<double>();
  d.kappas = j.at("kappas").get<std::vector<double>>();
  d.gammas2 = j.at("gammas2").get<std::vector<double>>();
  if (d.kappas.size() != d.gammas2.size()) throw DomainError("scatter artifact: kappas/gammas2 length mismatch");
  d.W_ic = {j.at("W_ic")[0].get<double>(), j.at("W_ic")[1].get<double>()};
  if (d.c > 0.0 && std::abs(d.W_ic) < 1e-8)
    throw ResonanceError("resonant data: the condition W(ic) != 0 fails");
  d.R = panel_from(j.at("R_breaks"), j.at("R_degree").get<int>(), j.at("R"), false, "k");
  d.T = panel_from(j.at("R_breaks"), j.at("R_degree").get<int>(), j.at("T"), false, "k");
  if (d.c > 0.0) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : j.at("chi")) rows.push_back({{"theta", r.at("theta")}, {"im", r.at("im")}});
    d.chi_theta = panel_from(j.at("chi_theta_breaks"), j.at("chi_degree").get<int>(), rows, true, "theta");
  }
  for (const auto& z : j.at("R_taylor")) d.R_taylor.emplace_back(z[0].get<double>(), z[1].get<double>());
  d.taylor_radius = j.at("taylor_radius").get<double>();
  d.k_small = j.at("k_small").get<double>();
  d.R_tail = j.at("R_tail").get<double>();
  d.unitarity_deficit = j.value("unitarity_deficit", 0.0);
  d.warnings = j.value("warnings", std::vector<std::string>{});
  d.potential = j.value("potential", nlohmann::json::object());
  return d;
}

}  // namespace kdvlab
