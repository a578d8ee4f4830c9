#include "kdvlab/kdv_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include <fftw3.h>

#include "kdvlab/types.hpp"

namespace kdvlab {

double ramp_value(const SolverConfig& cfg, double x, int derivative) {
  if (cfg.ramp == RampKind::Constant) return derivative == 0 ? cfg.ramp_value : 0.0;
  const double c2 = cfg.c * cfg.c;
  const double th = std::tanh(x);
  const double s = 1.0 - th * th;  // sech^2
  switch (derivative) {
    case 0: return -0.5 * c2 * (1.0 - th);
    case 1: return 0.5 * c2 * s;
    case 2: return -c2 * s * th;
    case 3: return c2 * (2.0 * s - 3.0 * s * s);
  }
  throw DomainError("ramp_value: derivative order must be 0..3");
}

namespace {

using cvec = std::vector<Complex>;

class RealFFT {
public:
  explicit RealFFT(std::size_t n) : n_(n) {
    r_ = fftw_alloc_real(n);
    c_ = fftw_alloc_complex(n / 2 + 1);
    fwd_ = fftw_plan_dft_r2c_1d(int(n), r_, c_, FFTW_MEASURE);
    bwd_ = fftw_plan_dft_c2r_1d(int(n), c_, r_, FFTW_MEASURE);
  }
  ~RealFFT() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(r_);
    fftw_free(c_);
  }
  RealFFT(const RealFFT&) = delete;
  RealFFT& operator=(const RealFFT&) = delete;

  void forward(const std::vector<double>& in, cvec& out) {
    std::copy(in.begin(), in.end(), r_);
    fftw_execute(fwd_);
    out.resize(n_ / 2 + 1);
    for (std::size_t m = 0; m <= n_ / 2; ++m) out[m] = Complex(c_[m][0], c_[m][1]);
  }
  // out = inverse transform of (mult * in), normalized
  void backward(const cvec& in, const cvec* mult, std::vector<double>& out) {
    for (std::size_t m = 0; m <= n_ / 2; ++m) {
      const Complex z = mult ? (*mult)[m] * in[m] : in[m];
      c_[m][0] = z.real();
      c_[m][1] = z.imag();
    }
    fftw_execute(bwd_);
    out.resize(n_);
    const double s = 1.0 / double(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = r_[i] * s;
  }

private:
  std::size_t n_;
  double* r_;
  fftw_complex* c_;
  fftw_plan fwd_, bwd_;
};

std::string fmt_g(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

}  // namespace

FieldGrid evolve(const std::function<double(double)>& q0, const SolverConfig& cfg) {
  const auto wall0 = std::chrono::steady_clock::now();
  const std::size_t n = cfg.nx;
  if (n < 16 || n % 2) throw DomainError("oracle: nx must be even and >= 16");
  if (!(cfg.x_max > cfg.x_min)) throw DomainError("oracle: empty domain");
  if (!(cfg.dt > 0.0)) throw DomainError("oracle: dt must be positive");
  if (cfg.times.empty()) throw DomainError("oracle: no output times");
  const bool backward = cfg.times.front() < 0.0;
  for (std::size_t i = 0; i < cfg.times.size(); ++i) {
    const double t = cfg.times[i];
    if (backward ? !(t < 0.0) : !(t >= 0.0)) throw DomainError("oracle: output times must not change sign");
    if (i && (backward ? t >= cfg.times[i - 1] : t <= cfg.times[i - 1]))
      throw DomainError("oracle: output times must be monotone");
  }
  if (!(cfg.window_hi() > cfg.window_lo())) throw DomainError("oracle: sponges leave no measurement window");

  const double Lx = cfg.x_max - cfg.x_min;
  const double dx = Lx / double(n);
  std::vector<double> x(n), phi(n), phi1(n), phi2(n), phi3(n), sponge(n), w(n);
  const double W = cfg.sponge_width;
  const double sig = backward ? 0.0 : cfg.sponge_strength;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = cfg.x_min + double(i) * dx;
    phi[i] = ramp_value(cfg, x[i], 0);
    phi1[i] = ramp_value(cfg, x[i], 1);
    phi2[i] = ramp_value(cfg, x[i], 2);
    phi3[i] = ramp_value(cfg, x[i], 3);
    sponge[i] = sig * 0.5 * ((1.0 + std::tanh((x[i] - (cfg.x_max - W / 2)) / (W / 8))) +
                             (1.0 - std::tanh((x[i] - (cfg.x_min + W / 2)) / (W / 8))));
    w[i] = q0(x[i]) - phi[i];
  }
  const double edge_tol = 1e-8 * std::max(1.0, cfg.c * cfg.c);
  if (std::abs(w.front()) > edge_tol || std::abs(q0(cfg.x_max) - ramp_value(cfg, cfg.x_max)) > edge_tol)
    throw DomainError("oracle: initial datum does not match the ramp backgrounds at the domain ends");

  const std::size_t nh = n / 2 + 1;
  cvec ik(nh), L(nh);
  std::vector<double> mask(nh, 1.0);
  for (std::size_t m = 0; m < nh; ++m) {
    const double k = 2.0 * kPi * double(m) / Lx;
    ik[m] = m == n / 2 ? Complex(0.0) : Complex(0.0, k);
    L[m] = Complex(0.0, k * k * k);  // w_t = -w_xxx
    if (cfg.dealias && double(m) > 2.0 * double(n / 2) / 3.0) mask[m] = 0.0;
  }
  cvec ik2(nh);
  for (std::size_t m = 0; m < nh; ++m) ik2[m] = ik[m] * ik[m];

  RealFFT fft(n);
  std::vector<double> wr(n), wx(n), wxx(n), prod(n);
  auto N = [&](const cvec& wh, cvec& out) {
    fft.backward(wh, nullptr, wr);
    fft.backward(wh, &ik, wx);
    for (std::size_t i = 0; i < n; ++i)
      prod[i] = 6.0 * (phi[i] + wr[i]) * (phi1[i] + wx[i]) - phi3[i] - sponge[i] * wr[i];
    fft.forward(prod, out);
    for (std::size_t m = 0; m < nh; ++m) out[m] *= mask[m];
  };

  const std::size_t ilo = std::size_t(std::ceil((cfg.window_lo() - cfg.x_min) / dx));
  const std::size_t ihi = std::size_t(std::floor((cfg.window_hi() - cfg.x_min) / dx));
  struct Diag {
    double mass = 0, energy = 0, fmass = 0, fenergy = 0, qmax = 0;
  };
  // Fourier synthesis at the two window edges
  std::vector<cvec> edge_basis;
  for (std::size_t i : {ilo, ihi}) {
    cvec e(nh);
    for (std::size_t m = 0; m < nh; ++m) {
      const double wt = (m == 0 || m == n / 2) ? 1.0 : 2.0;
      e[m] = wt / double(n) * std::exp(I * (2.0 * kPi * double((m * i) % n) / double(n)));
    }
    edge_basis.push_back(std::move(e));
  }
  // q_t = (3q^2 - q_xx)_x,  (q^2)_t = (4q^3 - 2 q q_xx + q_x^2)_x
  auto fluxes = [&](const cvec& wh, Diag& d) {
    double fm[2], fe[2];
    for (int s = 0; s < 2; ++s) {
      const std::size_t i = s ? ihi : ilo;
      Complex v(0.0), vx(0.0), vxx(0.0);
      for (std::size_t m = 0; m < nh; ++m) {
        const Complex z = wh[m] * edge_basis[s][m];
        v += z;
        vx += ik[m] * z;
        vxx += ik2[m] * z;
      }
      const double q = phi[i] + v.real(), qx = phi1[i] + vx.real(), qxx = phi2[i] + vxx.real();
      fm[s] = 3.0 * q * q - qxx;
      fe[s] = 4.0 * q * q * q - 2.0 * q * qxx + qx * qx;
    }
    d.fmass = fm[1] - fm[0];
    d.fenergy = fe[1] - fe[0];
  };
  // fills wr
  auto field_max = [&](const cvec& wh) {
    fft.backward(wh, nullptr, wr);
    double mx = 0.0;
    for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, std::abs(phi[i] + wr[i]));
    return std::isfinite(mx) ? mx : NAN;
  };
  auto diagnose = [&](const cvec& wh) {
    Diag d;
    d.qmax = field_max(wh);
    for (std::size_t i = ilo; i <= ihi; ++i) {
      const double wt = (i == ilo || i == ihi) ? 0.5 * dx : dx;
      const double q = phi[i] + wr[i];
      d.mass += wt * wr[i];
      d.energy += wt * (q * q - phi[i] * phi[i]);
    }
    fluxes(wh, d);
    return d;
  };

  cvec wh;
  fft.forward(w, wh);
  for (std::size_t m = 0; m < nh; ++m) wh[m] *= mask[m];

  FieldGrid out;
  out.provenance = "oracle";
  out.x = x;
  out.t = cfg.times;
  nlohmann::json cons = {{"t", nlohmann::json::array()},
                         {"mass", nlohmann::json::array()},
                         {"energy", nlohmann::json::array()},
                         {"mass_flux", nlohmann::json::array()},
                         {"energy_flux", nlohmann::json::array()},
                         {"mass_scale", 0.0},
                         {"energy_scale", 0.0}};
  Diag d0 = diagnose(wh);
  {
    double ms = 0.0, es = 0.0;
    for (std::size_t i = ilo; i <= ihi; ++i) {
      const double q = phi[i] + wr[i];
      ms += dx * std::abs(wr[i]);
      es += dx * std::abs(q * q - phi[i] * phi[i]);
    }
    cons["mass_scale"] = ms;
    cons["energy_scale"] = es;
  }
  auto record = [&](double t, const Diag& d, double fm, double fe) {
    cons["t"].push_back(t);
    cons["mass"].push_back(d.mass);
    cons["energy"].push_back(d.energy);
    cons["mass_flux"].push_back(fm);
    cons["energy_flux"].push_back(fe);
  };
  record(0.0, d0, 0.0, 0.0);
  const double qmax0 = std::max(d0.qmax, 1e-300);

  cvec Nv(nh), Na(nh), Nb(nh), Nc(nh), a(nh), b(nh), cc(nh), E(nh), E2(nh), Q(nh), f1(nh), f2(nh), f3(nh);
  // ETDRK4 coefficients by contour averaging around z = L h
  auto coefficients = [&](double h) {
    constexpr int M = 64;
    for (std::size_t m = 0; m < nh; ++m) {
      const Complex Lh = L[m] * h;
      E[m] = std::exp(Lh);
      E2[m] = std::exp(0.5 * Lh);
      Complex q(0.0), a1(0.0), a2(0.0), a3(0.0);
      for (int j = 0; j < M; ++j) {
        const Complex z = Lh + std::exp(I * (2.0 * kPi * (j + 0.5) / M));
        const Complex ez = std::exp(z), z3 = z * z * z;
        q += (std::exp(0.5 * z) - 1.0) / z;
        a1 += (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3;
        a2 += (2.0 + z + ez * (z - 2.0)) / z3;
        a3 += (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3;
      }
      Q[m] = h * q / double(M);
      f1[m] = h * a1 / double(M);
      f2[m] = h * a2 / double(M);
      f3[m] = h * a3 / double(M);
    }
  };
  double t = 0.0, fm_acc = 0.0, fe_acc = 0.0;
  Diag dprev = d0;
  std::size_t steps = 0;
  for (double t_out : cfg.times) {
    const double span = t_out - t;
    const std::size_t ns = std::max<std::size_t>(1, std::size_t(std::ceil(std::abs(span) / cfg.dt - 1e-9)));
    const double h = span / double(ns);
    coefficients(h);
    for (std::size_t s = 0; s < ns; ++s) {
      N(wh, Nv);
      for (std::size_t m = 0; m < nh; ++m) a[m] = E2[m] * wh[m] + Q[m] * Nv[m];
      N(a, Na);
      for (std::size_t m = 0; m < nh; ++m) b[m] = E2[m] * wh[m] + Q[m] * Na[m];
      N(b, Nb);
      for (std::size_t m = 0; m < nh; ++m) cc[m] = E2[m] * a[m] + Q[m] * (2.0 * Nb[m] - Nv[m]);
      N(cc, Nc);
      for (std::size_t m = 0; m < nh; ++m)
        wh[m] = E[m] * wh[m] + Nv[m] * f1[m] + 2.0 * (Na[m] + Nb[m]) * f2[m] + Nc[m] * f3[m];
      t += h;
      ++steps;
      Diag dn;
      fluxes(wh, dn);
      fm_acc += 0.5 * h * (dprev.fmass + dn.fmass);
      fe_acc += 0.5 * h * (dprev.fenergy + dn.fenergy);
      dprev = dn;
      if (steps % cfg.check_every == 0 || s + 1 == ns) {
        const double qm = field_max(wh);
        if (!(qm <= cfg.blowup_factor * qmax0))
          throw NumericalError("oracle: instability at t = " + fmt_g(t) + " (max|q| = " + fmt_g(qm) + ")");
      }
    }
    t = t_out;
    record(t, diagnose(wh), fm_acc, fe_acc);
    std::vector<double> q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = phi[i] + wr[i];
    out.q.push_back(q);
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  out.meta = {{"x_min", cfg.x_min},
              {"x_max", cfg.x_max},
              {"nx", n},
              {"dt", cfg.dt},
              {"steps", steps},
              {"sponge_width", cfg.sponge_width},
              {"sponge_strength", sig},
              {"ramp", cfg.ramp == RampKind::Tanh ? "tanh" : "constant"},
              {"c", cfg.c},
              {"window", {x[ilo], x[ihi]}},
              {"dealias", cfg.dealias},
              {"wall_seconds", wall},
              {"conservation", cons}};
  return out;
}

FieldGrid evolve(const Potential& pot, SolverConfig cfg) {
  if (!pot.smooth()) throw DomainError("oracle: the sharp step is not resolvable by a spectral solver");
  cfg.c = pot.c();
  cfg.ramp = RampKind::Tanh;
  return evolve([&](double x) { return pot(x); }, cfg);
}

ConservationReport conservation_report(const FieldGrid& f) {
  if (!f.meta.contains("conservation")) throw DomainError("conservation_report: field carries no diagnostics");
  const auto& c = f.meta["conservation"];
  ConservationReport r;
  const auto t = c["t"].get<std::vector<double>>();
  if (t.size() < 2) throw DomainError("conservation_report: needs at least two snapshots");
  const auto m = c["mass"].get<std::vector<double>>(), e = c["energy"].get<std::vector<double>>();
  const auto fm = c["mass_flux"].get<std::vector<double>>(), fe = c["energy_flux"].get<std::vector<double>>();
  const double ms = std::max(c["mass_scale"].get<double>(), std::abs(m[0]));
  const double es = std::max(c["energy_scale"].get<double>(), std::abs(e[0]));
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double dm = m[i] - m[0] - fm[i], de = e[i] - e[0] - fe[i];
    r.t.push_back(t[i]);
    r.mass_drift.push_back(ms > 0.0 ? std::abs(dm) / ms : std::abs(dm));
    r.energy_drift.push_back(es > 0.0 ? std::abs(de) / es : std::abs(de));
    r.max_mass_drift = std::max(r.max_mass_drift, r.mass_drift.back());
    r.max_energy_drift = std::max(r.max_energy_drift, r.energy_drift.back());
  }
  return r;
}

nlohmann::json to_json(const ConservationReport& r) {
  return {{"t", r.t},
          {"mass_drift", r.mass_drift},
          {"energy_drift", r.energy_drift},
          {"max_mass_drift", r.max_mass_drift},
          {"max_energy_drift", r.max_energy_drift}};
}

}  // namespace kdvlab
