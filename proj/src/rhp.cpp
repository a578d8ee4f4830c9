#include "kdvlab/rhp.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace kdvlab {

namespace {

Mat2 sigma1() {
  Mat2 s;
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

Mat2 lower(Complex z) {
  Mat2 m = Mat2::Identity();
  m(1, 0) = z;
  return m;
}

// P^{sigma_3} X P^{-sigma_3}
Mat2 twist(const Mat2& X, Complex P) {
  Mat2 m = X;
  m(0, 1) *= P * P;
  m(1, 0) /= P * P;
  return m;
}

// e^{z}, flushed to 0 instead of overflowing the other way
Complex exp_safe(Complex z) {
  if (z.real() < -745.0) return 0.0;
  return std::exp(z);
}

Mat2 y_matrix(Complex rr, Complex rr_minus, Complex P, Complex E) {
  Mat2 m;
  m << 1.0 - std::norm(rr), -rr_minus * P * P / E, rr * E / (P * P), 1.0;
  return m;
}

double frob(const Mat2& m) { return m.norm(); }

std::string fmt_g(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

}  // namespace

Complex phase(Complex k, double x, double t) {
  if (!(t > 0.0)) throw DomainError("phase: t must be positive");
  return 4.0 * I * k * k * k + I * k * (x / t);
}

Complex t_phase(Complex k, double x, double t) { return 4.0 * I * k * k * k * t + I * k * x; }

Complex blaschke(const std::vector<double>& kappas, int j, Complex k) {
  const int N = int(kappas.size());
  if (j < 1 || j > N + 1) throw DomainError("blaschke: index " + std::to_string(j) + " outside 1.." + std::to_string(N + 1));
  Complex P = 1.0;
  for (int l = j; l <= N; ++l) {
    const Complex ik(0.0, kappas[l - 1]);
    if (std::abs(k - ik) <= 1e-14 * std::max(1.0, kappas[l - 1]))
      throw PoleError("blaschke: k = i*" + fmt_g(kappas[l - 1]) + " is a pole");
    P *= (k + ik) / (k - ik);
  }
  return P;
}

PoleMatrices pole_matrices(double kappa, double gamma2, Complex k, double x, double t) {
  if (!(gamma2 > 0.0)) throw DomainError("pole_matrices: gamma^2 must be positive");
  const Complex ik(0.0, kappa);
  PoleMatrices pm;
  pm.dressing = LogScaled::exp_of(2.0 * t_phase(ik, x, t)) * Complex(gamma2);
  pm.A = Mat2::Identity();
  pm.B = Mat2::Identity();
  if (std::abs(k - ik) > 0.0) pm.A(1, 0) = -I * pm.dressing.value() / (k - ik);
  else throw PoleError("pole_matrices: A is singular at k = i kappa");
  pm.B(0, 1) = -(k - ik) * pm.dressing.inverse().value() / I;
  return pm;
}

std::string to_string(Piece p) {
  switch (p) {
    case Piece::RealPlus: return "R+";
    case Piece::RealMinus: return "R-";
    case Piece::CutUpper: return "cut[ic,ic/2]";
    case Piece::CutLower: return "cut[ic/2,0]";
    case Piece::CutUpperStar: return "cut[-ic,-ic/2]";
    case Piece::CutLowerStar: return "cut[-ic/2,0]";
    case Piece::LineC: return "C";
    case Piece::LineCStar: return "C*";
    case Piece::Circle: return "T";
    case Piece::CircleStar: return "T*";
  }
  return "?";
}

bool is_mirror(Piece p) {
  return p == Piece::RealMinus || p == Piece::CutUpperStar || p == Piece::CutLowerStar ||
         p == Piece::LineCStar || p == Piece::CircleStar;
}

Piece mirror_of(Piece p) {
  switch (p) {
    case Piece::RealPlus: return Piece::RealMinus;
    case Piece::RealMinus: return Piece::RealPlus;
    case Piece::CutUpper: return Piece::CutUpperStar;
    case Piece::CutUpperStar: return Piece::CutUpper;
    case Piece::CutLower: return Piece::CutLowerStar;
    case Piece::CutLowerStar: return Piece::CutLower;
    case Piece::LineC: return Piece::LineCStar;
    case Piece::LineCStar: return Piece::LineC;
    case Piece::Circle: return Piece::CircleStar;
    case Piece::CircleStar: return Piece::Circle;
  }
  return p;
}

double circle_radius(const std::vector<double>& kappas, double c) {
  if (kappas.empty()) return 0.0;
  double g = kappas.front() - c;
  for (std::size_t i = 1; i < kappas.size(); ++i) g = std::min(g, kappas[i] - kappas[i - 1]);
  return g / 3.0;
}

namespace {

std::vector<double> arc_weights(const std::vector<Complex>& k, bool closed) {
  const std::size_t n = k.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double d = std::abs(k[i + 1] - k[i]) * 0.5;
    w[i] += d;
    w[i + 1] += d;
  }
  if (closed) {
    const double d = std::abs(k.front() - k.back()) * 0.5;
    w.front() += d;
    w.back() += d;
  }
  return w;
}

// points on (0, L]: uniform spacing 1/density up to 1, then spacing growing by 1% up to 0.05
std::vector<double> graded(double L, double density) {
  std::vector<double> v;
  double h = 1.0 / density, s = h;
  while (s <= L) {
    v.push_back(s);
    if (s >= 1.0) h = std::min(h * 1.01, 0.05);
    s += h;
  }
  if (v.empty() || v.back() < L) v.push_back(L);
  return v;
}

// points on (0, L] clustered at 0: geometric from L*1e-9 merged with a uniform grid
std::vector<double> clustered(double L, double density) {
  std::vector<double> v = geomspace(L * 1e-9, L, 400);
  const std::size_t nu = std::max<std::size_t>(16, std::size_t(density * L));
  for (std::size_t i = 1; i <= nu; ++i) v.push_back(L * double(i) / double(nu));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }), v.end());
  return v;
}

PieceGrid mirrored(const PieceGrid& g) {
  PieceGrid m;
  m.piece = mirror_of(g.piece);
  m.l = g.l;
  m.w = g.w;
  for (auto k : g.k) m.k.push_back(-k);
  return m;
}

}  // namespace

ContourSet build_contours(const ScatteringData& d, const ContourOptions& opt) {
  ContourSet cs;
  cs.c = d.c;
  cs.kappas = d.kappas;
  cs.delta = circle_radius(d.kappas, d.c);
  std::vector<PieceGrid> up;

  PieceGrid rp{Piece::RealPlus, 0, {}, {}};
  for (double k : graded(opt.real_max, opt.density)) rp.k.push_back(k);
  up.push_back(rp);

  if (d.c > 0.0) {
    const double c = d.c;
    PieceGrid cu{Piece::CutUpper, 0, {}, {}};
    cu.k.push_back(Complex(0.0, c));
    for (double s : clustered(c / 2, opt.density)) cu.k.push_back(Complex(0.0, c - s));
    up.push_back(cu);

    PieceGrid cl{Piece::CutLower, 0, {}, {}};
    auto h = clustered(c / 2, opt.density);
    for (auto it = h.rbegin(); it != h.rend(); ++it) cl.k.push_back(Complex(0.0, *it));
    up.push_back(cl);

    PieceGrid lc{Piece::LineC, 0, {}, {}};
    const std::size_t n = std::size_t(2.0 * opt.line_max * opt.density);
    for (std::size_t i = 0; i <= n; ++i)
      lc.k.push_back(Complex(-opt.line_max + 2.0 * opt.line_max * double(i) / double(n), c / 2));
    up.push_back(lc);
  }

  for (std::size_t l = 1; l <= d.kappas.size(); ++l) {
    PieceGrid g{Piece::Circle, int(l), {}, {}};
    for (int i = 0; i < opt.circle_points; ++i) {
      const double th = 2.0 * kPi * double(i) / double(opt.circle_points);
      g.k.push_back(Complex(0.0, d.kappas[l - 1]) + cs.delta * std::exp(I * th));
    }
    up.push_back(g);
  }

  for (auto& g : up) {
    g.w = arc_weights(g.k, g.piece == Piece::Circle);
    cs.pieces.push_back(g);
  }
  for (const auto& g : up) cs.pieces.push_back(mirrored(g));
  return cs;
}

void write_contour_csv(const ContourSet& cs, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw DomainError("cannot write " + path);
  f << "piece,l,re_k,im_k,weight\n";
  f.precision(12);
  for (const auto& g : cs.pieces)
    for (std::size_t i = 0; i < g.k.size(); ++i)
      f << to_string(g.piece) << ',' << g.l << ',' << g.k[i].real() << ',' << g.k[i].imag() << ',' << g.w[i] << '\n';
}

Vec2 build_m_from_jost(const Potential& pot, Complex k, double x, CutSide side, const JostOptions& opt) {
  if (k.imag() < 0.0) {
    const CutSide flipped = side == CutSide::Right ? CutSide::Left : CutSide::Right;
    Vec2 m = build_m_from_jost(pot, -k, x, flipped, opt);
    return Vec2(m(1), m(0));
  }
  if (k == Complex(0.0, 0.0)) throw DomainError("build_m_from_jost: k = 0 is on the contour");
  const auto sp = SpectralParameter::make(k, pot.c(), side);
  const auto jp = jost_pair(pot, sp, x, opt);
  const Complex D = jp.u1 * jp.du - jp.du1 * jp.u + I * (sp.k + sp.k1) * jp.u * jp.u1;
  if (std::abs(D) == 0.0) throw PoleError("build_m_from_jost: W(k) = 0");
  return Vec2(2.0 * I * k * jp.u1 / D, jp.u);
}

std::vector<double> default_jump_grid(double k_min, double k_max, std::size_t n) {
  return geomspace(k_min, k_max, n);
}

JumpCheck verify_jump_real_axis(const Potential& pot, const ScatteringData& d, double x,
                                const std::vector<double>& ks, double tol, bool throw_on_fail) {
  JumpCheck r;
  r.x = x;
  const Mat2 s1 = sigma1();
  std::vector<double> res(ks.size(), 0.0), worst(ks.size(), 0.0);
  parallel_for(ks.size(), [&](std::size_t i) {
    const double k = ks[i];
    if (!(k > 0.0)) throw DomainError("verify_jump_real_axis: grid must be positive");
    const Complex R = d.R_at(k);
    const Complex E = std::exp(2.0 * I * k * x);
    Mat2 v;
    v << 1.0 - std::norm(R), -std::conj(R) / E, R * E, 1.0;
    const Vec2 mp = build_m_from_jost(pot, k, x);
    const Vec2 mm = build_m_from_jost(pot, -k, x) * s1;
    // R_- carries the reversed orientation, so its jump relation is this one mirrored
    res[i] = (mp - mm * v).norm() / mp.norm();
    worst[i] = k;
  });
  for (std::size_t i = 0; i < ks.size(); ++i)
    if (res[i] >= r.residual) {
      r.residual = res[i];
      r.worst_k = worst[i];
    }
  r.points = ks.size();
  r.pass = r.residual < tol;
  if (!r.pass && throw_on_fail)
    throw NumericalError("jump verification failed at x = " + fmt_g(x) + ": residual " + fmt_g(r.residual) +
                         " at k = " + fmt_g(r.worst_k));
  return r;
}

Reconstruction reconstruct_q(const Potential& pot, double x, std::vector<double> kappas, const JostOptions& opt) {
  if (kappas.empty()) kappas = {8.0, 16.0, 32.0, 64.0, 128.0};
  const double c = pot.c();
  Reconstruction r;
  r.x = x;
  r.kappa = kappas;
  std::vector<double> h;
  std::vector<Complex> f;
  for (double kap : kappas) {
    if (!(kap > c)) throw DomainError("reconstruct_q: ladder must lie above ic");
    const Complex k(0.0, kap);
    const auto sp = SpectralParameter::make(k, c);
    const auto jp = jost_pair(pot, sp, x, opt);
    const Complex D = jp.u1 * jp.du - jp.du1 * jp.u + I * (sp.k + sp.k1) * jp.u * jp.u1;
    // 2ik u u1 - D without the cancellation: k - k1 = -c^2/(k + k1)
    const Complex num = jp.du1 * jp.u - jp.u1 * jp.du - I * c * c / (sp.k + sp.k1) * jp.u * jp.u1;
    const Complex v = 2.0 * k * k * num / D;
    r.samples.push_back(v.real());
    h.push_back(1.0 / kap);
    f.push_back(v);
  }
  double err = 0.0;
  const Complex q = richardson(h, f, &err);
  r.q = q.real();
  r.error_estimate = err;
  const double scale = std::max(1.0, std::abs(r.q));
  if (!std::isfinite(r.q) || err > 1e-2 * scale) {
    std::string seq;
    for (double s : r.samples) seq += " " + fmt_g(s);
    throw NumericalError("reconstruct_q: ladder does not converge at x = " + fmt_g(x) + ":" + seq);
  }
  return r;
}

Mat2 jump_v(const ScatteringData& d, int j, const ContourPoint& p, double x, double t) {
  if (is_mirror(p.piece)) {
    const Mat2 s1 = sigma1();
    return s1 * jump_v(d, j, {mirror_of(p.piece), -p.k, p.l}, x, t) * s1;
  }
  const Complex k = p.k;
  switch (p.piece) {
    case Piece::RealPlus: {
      const Complex P = blaschke(d.kappas, j + 1, k);
      const Complex E = exp_safe(2.0 * t_phase(k, x, t));
      const Complex R = d.R_at(k.real());
      Mat2 v;
      v << 1.0 - std::norm(R), -std::conj(R) * P * P / E, R * E / (P * P), 1.0;
      return v;
    }
    case Piece::CutUpper:
    case Piece::CutLower: {
      const Complex P = blaschke(d.kappas, j + 1, k);
      const Complex E = exp_safe(2.0 * t_phase(k, x, t));
      return lower(d.chi_at(k.imag()) * E / (P * P));
    }
    case Piece::Circle: {
      if (p.l < 1 || p.l > int(d.N())) throw DomainError("jump_v: circle index out of range");
      const Complex P = blaschke(d.kappas, j + 1, k);
      const auto pm = pole_matrices(d.kappas[p.l - 1], d.gammas2[p.l - 1], k, x, t);
      return twist(p.l <= j ? pm.A : pm.B, P);
    }
    case Piece::LineC:
      return Mat2::Identity();
    default:
      break;
  }
  throw DomainError("jump_v: untagged contour point");
}

namespace {

Complex rational_part(const SplitReflection& s, Complex k) {
  return k.real() >= 0.0 ? s.pair().q(k) : s.pair().p(k);
}

}  // namespace

Mat2 conjugated_jump_vhat(const ScatteringData& d, const SplitReflection& s, int j, const ContourPoint& p,
                          double x, double t) {
  if (is_mirror(p.piece)) {
    const Mat2 s1 = sigma1();
    return s1 * conjugated_jump_vhat(d, s, j, {mirror_of(p.piece), -p.k, p.l}, x, t) * s1;
  }
  const Complex k = p.k;
  switch (p.piece) {
    case Piece::RealPlus: {
      const Complex P = blaschke(d.kappas, j + 1, k);
      const Complex E = exp_safe(2.0 * t_phase(k, x, t));
      return y_matrix(s.R_r(k.real(), t), s.R_r(-k.real(), t), P, E);
    }
    case Piece::LineC: {
      const Complex P = blaschke(d.kappas, j + 1, k);
      const Complex E = exp_safe(2.0 * t_phase(k, x, t));
      return lower((s.R_a(k, t) + rational_part(s, k)) * E / (P * P));
    }
    case Piece::CutLower: {
      const Complex P = blaschke(d.kappas, j + 1, k);
      const Complex E = exp_safe(2.0 * t_phase(k, x, t));
      return lower(s.f(k.imag()) * E / (P * P));
    }
    case Piece::CutUpper:
    case Piece::Circle:
      return jump_v(d, j, p, x, t);
    default:
      break;
  }
  throw DomainError("conjugated_jump_vhat: untagged contour point");
}

DecayReport jump_decay_report(const ScatteringData& d, const SplitReflection& s, int j, double beta,
                              const std::vector<double>& ts, const ContourOptions& opt) {
  if (!(d.c > 0.0)) throw DomainError("jump_decay_report: needs c > 0");
  if (s.trivial()) throw DomainError("jump_decay_report: split is trivial");
  if (ts.size() < 4) throw DomainError("jump_decay_report: at least four times are needed");
  const double c = d.c;
  const auto& g = s.transform();
  const ContourSet cs = build_contours(d, opt);
  const Mat2 s1 = sigma1();

  DecayReport rep;
  rep.j = j;
  rep.beta = beta;
  rep.m0 = s.pair().m0;
  rep.nu = std::min<double>(rep.m0 - 3, beta + 1.0);
  rep.t = ts;

  // R_+ and C live on the transform grid; the other pieces come from the contour set
  std::vector<PieceGrid> grids;
  std::vector<std::size_t> rp_idx, lc_idx;
  {
    PieceGrid rp{Piece::RealPlus, 0, {}, {}};
    for (std::size_t m = g.n / 2 + 1; m < g.n; ++m) {
      if (g.k_at(m) > opt.real_max) break;
      rp.k.push_back(g.k_at(m));
      rp_idx.push_back(m);
    }
    rp.w.assign(rp.k.size(), g.dk);
    grids.push_back(rp);
    PieceGrid lc{Piece::LineC, 0, {}, {}};
    for (std::size_t m = 0; m < g.n; ++m)
      if (std::abs(g.k_at(m)) <= opt.line_max) {
        lc.k.push_back(Complex(g.k_at(m), c / 2));
        lc_idx.push_back(m);
      }
    lc.w.assign(lc.k.size(), g.dk);
    grids.push_back(lc);
    for (const auto& pg : cs.pieces)
      if (!is_mirror(pg.piece) && pg.piece != Piece::RealPlus && pg.piece != Piece::LineC) grids.push_back(pg);
  }
  for (const auto& pg : grids) rep.pieces.push_back({pg.piece, pg.l, {}, {}, {}, {}});

  std::vector<double> total(ts.size(), 0.0);
  for (std::size_t it = 0; it < ts.size(); ++it) {
    const double t = ts[it];
    const double x = 4.0 * c * c * t + (beta / c) * std::log(t);
    rep.x.push_back(x);
    const auto rr = s.R_r_grid(t);
    const auto ra = s.R_a_line(c / 2, t);
    for (std::size_t ip = 0; ip < grids.size(); ++ip) {
      const auto& pg = grids[ip];
      std::array<double, 3> sup{0, 0, 0}, l1{0, 0, 0};
      for (std::size_t i = 0; i < pg.k.size(); ++i) {
        const Complex k = pg.k[i];
        Mat2 v;
        if (pg.piece == Piece::RealPlus) {
          const std::size_t m = rp_idx[i];
          const Complex P = blaschke(d.kappas, j + 1, k);
          v = y_matrix(rr[m], rr[g.n - m], P, exp_safe(2.0 * t_phase(k, x, t)));
        } else if (pg.piece == Piece::LineC) {
          const Complex P = blaschke(d.kappas, j + 1, k);
          const Complex E = exp_safe(2.0 * t_phase(k, x, t));
          v = lower((ra[lc_idx[i]] + rational_part(s, k)) * E / (P * P));
        } else {
          v = conjugated_jump_vhat(d, s, j, {pg.piece, k, pg.l}, x, t);
        }
        rep.det_error = std::max(rep.det_error, std::abs(v.determinant() - 1.0));
        const double nv = frob(v - Mat2::Identity());
        const double ak = std::abs(k);
        for (int e = 0; e < 3; ++e) {
          const double val = nv * std::pow(ak, e);
          sup[e] = std::max(sup[e], val);
          l1[e] += pg.w[i] * val;
        }
      }
      rep.pieces[ip].sup.push_back(sup);
      rep.pieces[ip].l1.push_back(l1);
      total[it] = std::max(total[it], sup[0]);
    }
  }

  // mirror identity on the point-wise path, a few points per piece
  for (const auto& pg : grids) {
    const std::size_t stride = std::max<std::size_t>(1, pg.k.size() / 8);
    for (std::size_t i = 0; i < pg.k.size(); i += stride) {
      const double t = ts[1], x = rep.x[1];
      const ContourPoint p{pg.piece, pg.k[i], pg.l};
      const ContourPoint q{mirror_of(pg.piece), -pg.k[i], pg.l};
      const Mat2 a = conjugated_jump_vhat(d, s, j, q, x, t);
      const Mat2 b = s1 * conjugated_jump_vhat(d, s, j, p, x, t) * s1;
      rep.mirror_mismatch = std::max(rep.mirror_mismatch, (a - b).norm());
    }
  }

  for (auto& pn : rep.pieces)
    for (int e = 0; e < 3; ++e) {
      std::vector<double> ys, yl;
      for (std::size_t it = 0; it < ts.size(); ++it) {
        ys.push_back(pn.sup[it][e]);
        yl.push_back(pn.l1[it][e]);
      }
      pn.sup_fit[e] = loglog_fit(ts, ys);
      pn.l1_fit[e] = loglog_fit(ts, yl);
    }
  rep.total_exponent = loglog_fit(ts, total).slope;
  rep.total_pass = rep.total_exponent <= -rep.nu + 0.3;

  for (const auto& pn : rep.pieces) {
    if (pn.piece == Piece::CutUpper) {
      rep.cut_upper_exponent = pn.sup_fit[0].slope;
      rep.cut_upper_pass = rep.cut_upper_exponent >= -1.3 && rep.cut_upper_exponent <= -0.7;
    } else if (pn.piece == Piece::CutLower) {
      rep.cut_lower_exponent = pn.sup_fit[0].slope;
      rep.cut_lower_pass = rep.cut_lower_exponent <= -(rep.m0 - 1) + 0.5;
    } else if (pn.piece == Piece::LineC) {
      bool seen = false, ok = true;
      for (std::size_t it = 0; it < ts.size(); ++it) {
        if (ts[it] < 10.0) continue;
        double worst = 0.0;
        for (int e = 0; e < 3; ++e) worst = std::max({worst, pn.sup[it][e], pn.l1[it][e]});
        if (!seen) rep.line_norm_at_10 = worst;
        seen = true;
        ok = ok && worst < 1e-8;
      }
      rep.line_pass = seen && ok;
    }
  }
  return rep;
}

nlohmann::json to_json(const DecayReport& r) {
  nlohmann::json j;
  j["schema"] = "kdvlab.decay/1";
  j["j"] = r.j;
  j["beta"] = r.beta;
  j["m0"] = r.m0;
  j["nu"] = r.nu;
  j["t"] = r.t;
  j["x"] = r.x;
  j["mirror_mismatch"] = r.mirror_mismatch;
  j["det_error"] = r.det_error;
  j["total_exponent"] = r.total_exponent;
  j["total_pass"] = r.total_pass;
  j["cut_upper_exponent"] = r.cut_upper_exponent;
  j["cut_upper_pass"] = r.cut_upper_pass;
  j["cut_lower_exponent"] = r.cut_lower_exponent;
  j["cut_lower_pass"] = r.cut_lower_pass;
  j["line_norm_at_10"] = r.line_norm_at_10;
  j["line_pass"] = r.line_pass;
  nlohmann::json ps = nlohmann::json::array();
  for (const auto& p : r.pieces) {
    nlohmann::json e;
    e["piece"] = to_string(p.piece);
    if (p.piece == Piece::Circle) e["l"] = p.l;
    for (int s = 0; s < 3; ++s) {
      std::vector<double> a, b;
      for (std::size_t i = 0; i < p.sup.size(); ++i) {
        a.push_back(p.sup[i][s]);
        b.push_back(p.l1[i][s]);
      }
      const std::string suf = "_s" + std::to_string(s);
      e["sup" + suf] = a;
      e["l1" + suf] = b;
      e["sup_exponent" + suf] = p.sup_fit[s].slope;
      e["l1_exponent" + suf] = p.l1_fit[s].slope;
    }
    ps.push_back(e);
  }
  j["pieces"] = ps;
  return j;
}

SmallKReport small_k_report(const ScatteringData& d, const SplitReflection& s, int j, double x, double t,
                            std::size_t npts) {
  SmallKReport r;
  r.t = t;
  r.x = x;
  r.k = geomspace(1e-3, 1e-1, npts);
  for (double k : r.k) {
    const Mat2 a = conjugated_jump_vhat(d, s, j, {Piece::RealPlus, Complex(k, 0.0), 0}, x, t);
    r.real_norm.push_back(frob(a - Mat2::Identity()));
    if (d.c > 0.0) {
      const Mat2 b = conjugated_jump_vhat(d, s, j, {Piece::CutLower, Complex(0.0, k), 0}, x, t);
      r.cut_norm.push_back(frob(b - Mat2::Identity()));
    }
  }
  r.real_fit = loglog_fit(r.k, r.real_norm);
  r.slope = r.real_fit.slope;
  if (!r.cut_norm.empty()) {
    r.cut_fit = loglog_fit(r.k, r.cut_norm);
    r.slope = std::min(r.slope, r.cut_fit.slope);
  }
  r.pass = r.slope >= 1.7;
  return r;
}

nlohmann::json to_json(const SmallKReport& r) {
  return {{"schema", "kdvlab.smallk/1"},
          {"t", r.t},
          {"x", r.x},
          {"k", r.k},
          {"real_norm", r.real_norm},
          {"cut_norm", r.cut_norm},
          {"real_slope", r.real_fit.slope},
          {"cut_slope", r.cut_fit.slope},
          {"slope", r.slope},
          {"pass", r.pass}};
}

}  // namespace kdvlab
