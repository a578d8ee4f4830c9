#include "kdvlab/model.hpp"

#include <algorithm>
#include <random>

namespace kdvlab {

std::string to_string(RegionKind k) {
  switch (k) {
    case RegionKind::D0: return "D0";
    case RegionKind::Dj: return "Dj";
    case RegionKind::DjSol: return "Dj_sol";
    case RegionKind::Outside: return "outside";
  }
  return "?";
}

namespace {

std::vector<double> velocities(double c, const std::vector<double>& kappas) {
  std::vector<double> v{4.0 * c * c};
  for (double k : kappas) v.push_back(4.0 * k * k);
  return v;
}

void check_index(const ScatteringData& d, int j) {
  if (j < 1 || j > int(d.N())) throw DomainError("soliton index " + std::to_string(j) + " out of range");
}

// log of prod_{l>j} ((kappa_l - kappa_j)/(kappa_l + kappa_j))^2
double log_dressing(const ScatteringData& d, int j) {
  double s = 0.0;
  const double kj = d.kappas[j - 1];
  for (std::size_t l = j; l < d.N(); ++l) {
    const double kl = d.kappas[l];
    s += 2.0 * std::log(std::abs((kl - kj) / (kl + kj)));
  }
  return s;
}

// log(gamma_j^2(x, t) / 2 kappa_j)
double log_G(const ScatteringData& d, int j, double x, double t) {
  return gamma_xt(d, j, x, t).log_abs() - std::log(2.0 * d.kappas[j - 1]);
}

// G/(1+G) and G/(1+G)^2 without overflow
double ratio1(double logG) {
  return logG > 0.0 ? 1.0 / (1.0 + std::exp(-logG)) : std::exp(logG) / (1.0 + std::exp(logG));
}
double ratio2(double logG) {
  const double e = std::exp(-std::abs(logG));
  return e / ((1.0 + e) * (1.0 + e));
}

}  // namespace

RegionConfig resolve_region_config(const ScatteringData& d, RegionConfig cfg) {
  const auto v = velocities(d.c, d.kappas);
  double gap = INFINITY;
  for (std::size_t i = 1; i < v.size(); ++i) gap = std::min(gap, v[i] - v[i - 1]);
  if (std::isnan(cfg.eps)) cfg.eps = std::isfinite(gap) ? gap / 4.0 : 1.0;
  if (!(cfg.eps > 0.0)) throw DomainError("region: eps must be positive");
  if (std::isfinite(gap) && !(cfg.eps < gap / 2.0))
    throw DomainError("region: eps must stay below half the smallest velocity gap (" + std::to_string(gap) + ")");
  if (cfg.beta < 0.0) throw DomainError("region: beta must be nonnegative");
  if (std::isnan(cfg.delta)) cfg.delta = circle_radius(d.kappas, d.c);
  return cfg;
}

RegionTag classify_region(double x, double t, double c, const std::vector<double>& kappas, const RegionConfig& cfg) {
  if (t < cfg.T0) throw DomainError("classify_region: t below T0");
  // with c = 0 there is no log correction: the lower edge is x = 0
  const double lower = 4.0 * c * c * t + (c > 0.0 ? cfg.beta / c * std::log(t) : 0.0);
  if (x < lower) return {RegionKind::Outside, 0};
  const double xi = x / t;
  int below = 0;
  for (std::size_t l = 0; l < kappas.size(); ++l) {
    const double v = 4.0 * kappas[l] * kappas[l];
    if (std::abs(xi - v) <= cfg.eps) return {RegionKind::DjSol, int(l) + 1};
    if (xi > v) below = int(l) + 1;
  }
  return {below == 0 ? RegionKind::D0 : RegionKind::Dj, below};
}

LogScaled gamma_xt(const ScatteringData& d, int j, double x, double t) {
  check_index(d, j);
  const double k = d.kappas[j - 1];
  const double lg = std::log(d.gammas2[j - 1]) + 8.0 * k * k * k * t - 2.0 * k * x + log_dressing(d, j);
  return {Complex(1.0, 0.0), lg};
}

double phase_shift(const ScatteringData& d, int j) {
  check_index(d, j);
  const double k = d.kappas[j - 1];
  return -0.5 * std::log(d.gammas2[j - 1] / (2.0 * k)) - 0.5 * log_dressing(d, j);
}

Complex mu(const ScatteringData& d, int j, double x, double t) {
  check_index(d, j);
  const double k = d.kappas[j - 1];
  return Complex(0.0, 2.0 * k * ratio1(log_G(d, j, x, t)));
}

ModelVectors model_vectors(const ScatteringData& d, int j, Complex k, double x, double t) {
  check_index(d, j);
  const double kap = d.kappas[j - 1];
  const Complex ik(0.0, kap);
  if (std::abs(k) == 0.0 || std::abs(k - ik) == 0.0 || std::abs(k + ik) == 0.0)
    throw PoleError("model_vectors: k is a pole");
  const Complex m = mu(d, j, x, t);
  ModelVectors r;
  r.S = Vec2(1.0 + m / (k - ik), 1.0 - m / (k + ik));
  auto upper = [&](Complex z) {
    return Vec2(-1.0 + ik * m / (z * (z - ik)), 1.0 - ik * m / (z * (z + ik)));
  };
  r.V = k.imag() >= 0.0 ? upper(k) : Vec2(-upper(-k));
  return r;
}

ModelMatrix model_matrix(const ScatteringData& d, int j, Complex k, double x, double t) {
  check_index(d, j);
  const Complex ik(0.0, d.kappas[j - 1]);
  if (std::abs(k) == 0.0 || std::abs(k - ik) == 0.0 || std::abs(k + ik) == 0.0)
    throw PoleError("model_matrix: k is a pole");
  const Complex a = mu(d, j, x, t) / (2.0 * k);
  const Complex r = (k - ik) / (k + ik);
  ModelMatrix mm;
  mm.M << 1.0 + a, -a * r, a / r, 1.0 - a;
  mm.Minv << 1.0 - a, a * r, -a / r, 1.0 + a;
  return mm;
}

RemovabilityReport removability_check(const ScatteringData& d, int j, double x, double t) {
  check_index(d, j);
  RemovabilityReport rep;
  rep.j = j;
  rep.x = x;
  rep.t = t;
  const Complex ik(0.0, d.kappas[j - 1]);
  const Vec2 one(1.0, 1.0);
  // approach along a diagonal so the probe is never on the real or imaginary axis
  const Complex dir = std::exp(I * (kPi / 4));
  auto dev = [&](Complex k) {
    const auto v = model_vectors(d, j, k, x, t);
    const auto mm = model_matrix(d, j, k, x, t);
    return (v.S * mm.Minv - one).norm();
  };
  bool finite = true;
  for (int n = 2; n <= 6; ++n) {
    const double h = std::pow(10.0, -n);
    rep.distance.push_back(h);
    rep.at_pole.push_back(dev(ik + h * dir));
    rep.at_mirror.push_back(dev(-ik + h * dir));
    rep.at_zero.push_back(dev(h * dir));
    for (double v : {rep.at_pole.back(), rep.at_mirror.back(), rep.at_zero.back()}) {
      finite = finite && std::isfinite(v);
      rep.max_deviation = std::max(rep.max_deviation, v);
    }
    if (n == 4) rep.at_1e4 = std::max({rep.at_pole.back(), rep.at_mirror.back(), rep.at_zero.back()});
  }
  rep.pass = finite && rep.at_1e4 < 1e-8;
  return rep;
}

AlgebraReport model_algebra_check(const ScatteringData& d, int j, const RegionConfig& cfg_in, unsigned seed,
                                  std::size_t points, std::size_t probes_per_point, double t_max) {
  check_index(d, j);
  const RegionConfig cfg = resolve_region_config(d, cfg_in);
  AlgebraReport r;
  r.j = j;
  r.seed = seed;
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> ut(cfg.T0, t_max), uxi(-cfg.eps, cfg.eps), urad(0.1, 10.0),
      uang(-kPi, kPi);
  const double kap = d.kappas[j - 1];
  const double v = 4.0 * kap * kap;
  Mat2 s1;
  s1 << 0.0, 1.0, 1.0, 0.0;
  const Vec2 one(1.0, 1.0);
  for (std::size_t p = 0; p < points; ++p) {
    const double t = ut(gen);
    const double x = (v + uxi(gen)) * t;
    ++r.points;
    for (std::size_t n = 0; n < probes_per_point; ++n) {
      Complex k;
      do k = std::polar(urad(gen), uang(gen));
      while (std::abs(k - I * kap) < 1e-3 || std::abs(k + I * kap) < 1e-3);
      const auto mm = model_matrix(d, j, k, x, t);
      const double scale = std::max(1.0, mm.M.norm() * mm.M.norm());
      r.det = std::max(r.det, std::abs(mm.M.determinant() - 1.0) / scale);
      const auto mr = model_matrix(d, j, -k, x, t);
      r.symmetry = std::max(r.symmetry, (mr.M - s1 * mm.M * s1).norm() / std::max(1.0, mm.M.norm()));
      const auto mi = model_matrix(d, j, k * 1e14, x, t);
      r.infinity = std::max(r.infinity, (mi.M - Mat2::Identity()).norm());
      const auto vs = model_vectors(d, j, k, x, t);
      r.row = std::max(r.row, (one * mm.M - vs.S).norm() / std::max(1.0, vs.S.norm()));
      ++r.probes;
    }
  }
  r.pass = r.det < 1e-12 && r.symmetry < 1e-12 && r.infinity < 1e-12 && r.row < 1e-12;
  return r;
}

nlohmann::json to_json(const AlgebraReport& r) {
  return {{"j", r.j},         {"seed", r.seed},         {"points", r.points},     {"probes", r.probes},
          {"det", r.det},     {"symmetry", r.symmetry}, {"infinity", r.infinity}, {"row", r.row},
          {"pass", r.pass}};
}

nlohmann::json to_json(const RemovabilityReport& r) {
  return {{"j", r.j},
          {"x", r.x},
          {"t", r.t},
          {"distance", r.distance},
          {"at_pole", r.at_pole},
          {"at_mirror", r.at_mirror},
          {"at_zero", r.at_zero},
          {"at_1e4", r.at_1e4},
          {"pass", r.pass}};
}

double q_sol_term(const ScatteringData& d, int j, double x, double t) {
  check_index(d, j);
  const double k = d.kappas[j - 1];
  const double a = k * x - 4.0 * k * k * k * t + phase_shift(d, j);
  // 1/cosh^2(a) = 4 e^{-2|a|} / (1 + e^{-2|a|})^2
  const double e = std::exp(-2.0 * std::abs(a));
  return -2.0 * k * k * 4.0 * e / ((1.0 + e) * (1.0 + e));
}

double q_sol(const ScatteringData& d, double x, double t) {
  double s = 0.0;
  for (int j = 1; j <= int(d.N()); ++j) s += q_sol_term(d, j, x, t);
  return s;
}

double q_sol_mobius(const ScatteringData& d, double x, double t) {
  double s = 0.0;
  for (int j = 1; j <= int(d.N()); ++j) {
    const double k = d.kappas[j - 1];
    s += -8.0 * k * k * ratio2(log_G(d, j, x, t));
  }
  return s;
}

std::vector<SolitonLine> soliton_lines(const ScatteringData& d) {
  std::vector<SolitonLine> v;
  for (int j = 1; j <= int(d.N()); ++j) {
    const double k = d.kappas[j - 1];
    v.push_back({k, 4.0 * k * k, -phase_shift(d, j) / k, -2.0 * k * k});
  }
  return v;
}

FieldGrid asymptotic_field(const ScatteringData& d, const std::vector<double>& xs, const std::vector<double>& ts,
                           const RegionConfig& cfg_in) {
  const RegionConfig cfg = resolve_region_config(d, cfg_in);
  FieldGrid f;
  f.provenance = "asymptotic";
  f.x = xs;
  f.t = ts;
  f.q.assign(ts.size(), std::vector<double>(xs.size(), 0.0));
  f.region_kind.assign(ts.size(), std::vector<std::string>(xs.size()));
  f.region_index.assign(ts.size(), std::vector<int>(xs.size(), 0));
  parallel_for(ts.size(), [&](std::size_t i) {
    for (std::size_t n = 0; n < xs.size(); ++n) {
      f.q[i][n] = q_sol(d, xs[n], ts[i]);
      RegionTag tag;
      if (ts[i] >= cfg.T0) tag = classify_region(xs[n], ts[i], d.c, d.kappas, cfg);
      f.region_kind[i][n] = to_string(tag.kind);
      f.region_index[i][n] = tag.j;
    }
  });
  nlohmann::json lines = nlohmann::json::array();
  for (const auto& l : soliton_lines(d))
    lines.push_back({{"kappa", l.kappa}, {"velocity", l.velocity}, {"offset", l.offset}, {"height", l.height}});
  f.meta = {{"c", d.c}, {"eps", cfg.eps}, {"beta", cfg.beta}, {"T0", cfg.T0}, {"soliton_lines", lines}};
  return f;
}

}  // namespace kdvlab
