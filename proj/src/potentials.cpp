#include "kdvlab/potentials.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace kdvlab {

namespace {

// d^n/dy^n sech^2(y) = sech^2(y) Q_n(tanh y)
using Poly = std::vector<double>;

const std::vector<Poly>& sech2_polys() {
  static const std::vector<Poly> polys = [] {
    std::vector<Poly> out{{1.0}};
    for (int n = 0; n < 24; ++n) {
      const Poly& q = out.back();
      Poly next(q.size() + 1, 0.0);
      for (std::size_t i = 0; i < q.size(); ++i) {
        next[i + 1] += -2.0 * q[i];
        if (i >= 1) {
          next[i - 1] += i * q[i];
          next[i + 1] -= i * q[i];
        }
      }
      out.push_back(next);
    }
    return out;
  }();
  return polys;
}

double horner(const Poly& p, double x) {
  double s = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * x + *it;
  return s;
}

double sech2(double y) {
  double e = std::exp(-2.0 * std::abs(y));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

double sech2_derivative(double y, int n) {
  const auto& polys = sech2_polys();
  if (n >= static_cast<int>(polys.size())) throw DomainError("derivative order too high");
  return sech2(y) * horner(polys[n], std::tanh(y));
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::SharpStep: return "sharp-step";
    case Family::TanhStep: return "tanh-step";
    case Family::TanhStepPlusWells: return "tanh-step-plus-wells";
    case Family::Tabulated: return "tabulated";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "sharp-step") return Family::SharpStep;
  if (s == "tanh-step") return Family::TanhStep;
  if (s == "tanh-step-plus-wells") return Family::TanhStepPlusWells;
  if (s == "tabulated") return Family::Tabulated;
  throw DomainError("unknown potential family '" + s + "'");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "finite";
    case Verdict::Divergent: return "divergent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

Potential::Potential(PotentialSpec spec) : spec_(std::move(spec)) {
  if (!(spec_.c >= 0.0) || !std::isfinite(spec_.c)) throw DomainError("background c must be >= 0");
  if (spec_.m0 < 1 || spec_.n0 < 0) throw DomainError("m0 >= 1 and n0 >= 0 required");
  if (spec_.steepness <= 0.0) throw DomainError("steepness must be positive");
  for (const auto& w : spec_.wells)
    if (w.width <= 0.0) throw DomainError("well width must be positive");
  if (spec_.family == Family::Tabulated) {
    const auto& tx = spec_.table_x;
    if (tx.size() < 8 || tx.size() != spec_.table_q.size())
      throw DomainError("tabulated potential needs >= 8 (x, q) rows");
    table_h_ = (tx.back() - tx.front()) / double(tx.size() - 1);
    for (std::size_t i = 1; i < tx.size(); ++i)
      if (std::abs(tx[i] - tx[i - 1] - table_h_) > 1e-9 * std::max(1.0, std::abs(table_h_)))
        throw DomainError("tabulated potential must be on a uniform grid");
    breaks_ = {tx.front(), tx.back()};
  }
  if (spec_.family == Family::SharpStep) breaks_ = {0.0};
  init_tails();
  right_radius_ = std::isnan(spec_.right_radius) ? find_radius(+1) : spec_.right_radius;
  left_radius_ = std::isnan(spec_.left_radius) ? find_radius(-1) : spec_.left_radius;
  if (right_radius_ <= 0.0 || left_radius_ <= 0.0) throw DomainError("truncation radii must be positive");
}

void Potential::init_tails() {
  const double c2 = spec_.c * spec_.c;
  const double s = spec_.steepness;
  if (spec_.family == Family::TanhStep || spec_.family == Family::TanhStepPlusWells) {
    if (c2 > 0.0) {
      rtail_.push_back({-c2, 2.0 * s});
      ltail_.push_back({c2, 2.0 * s});
    }
  }
  if (spec_.family == Family::TanhStepPlusWells) {
    for (const auto& w : spec_.wells) {
      double a = 2.0 / w.width;
      rtail_.push_back({-4.0 * w.depth * std::exp(a * w.center), a});
      ltail_.push_back({-4.0 * w.depth * std::exp(-a * w.center), a});
    }
  }
}

double Potential::find_radius(int side) const {
  const double c2 = spec_.c * spec_.c;
  auto resid = [&](double x) { return side > 0 ? std::abs((*this)(x)) : std::abs((*this)(x) + c2); };
  double start = 2.0;
  for (const auto& w : spec_.wells) start = std::max(start, side * w.center + 2.0 * w.width);
  if (spec_.family == Family::Tabulated)
    return std::max(2.0, side > 0 ? spec_.table_x.back() : -spec_.table_x.front());
  if (spec_.family == Family::SharpStep) return 2.0;
  // tails are sums of decaying exponentials beyond start: first crossing is final
  double x = start;
  const double step = 0.125;
  while (resid(side * x) >= kTailTol) {
    x += step;
    if (x > 1e4) throw DomainError("potential tail does not decay below tolerance");
  }
  return x;
}

double Potential::table_eval(double x) const {
  const auto& tx = spec_.table_x;
  const auto& tq = spec_.table_q;
  const std::size_t n = tx.size();
  double u = (x - tx.front()) / table_h_;
  std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::floor(u)) - 1;
  i0 = std::clamp<std::ptrdiff_t>(i0, 0, static_cast<std::ptrdiff_t>(n) - 4);
  double s = 0.0;
  for (int a = 0; a < 4; ++a) {
    double l = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) l *= (u - double(i0 + b)) / double(a - b);
    s += l * tq[i0 + a];
  }
  return s;
}

double Potential::operator()(double x) const {
  const double c2 = spec_.c * spec_.c;
  switch (spec_.family) {
    case Family::SharpStep:
      return x < 0.0 ? -c2 : 0.0;
    case Family::TanhStep:
    case Family::TanhStepPlusWells: {
      double z = 2.0 * spec_.steepness * x;
      double q = z > 700.0 ? 0.0 : -c2 / (1.0 + std::exp(z));
      if (spec_.family == Family::TanhStepPlusWells)
        for (const auto& w : spec_.wells) q -= w.depth * sech2((x - w.center) / w.width);
      return q;
    }
    case Family::Tabulated:
      if (x < spec_.table_x.front()) return -c2;
      if (x > spec_.table_x.back()) return 0.0;
      return table_eval(x);
  }
  return 0.0;
}

double Potential::derivative(double x, int order) const {
  if (order == 0) return (*this)(x);
  if (order < 0) throw DomainError("negative derivative order");
  const double c2 = spec_.c * spec_.c;
  switch (spec_.family) {
    case Family::SharpStep:
      throw DomainError("sharp-step derivative is distributional");
    case Family::TanhStep:
    case Family::TanhStepPlusWells: {
      const double s = spec_.steepness;
      double d = 0.5 * c2 * std::pow(s, order) * sech2_derivative(s * x, order - 1);
      if (spec_.family == Family::TanhStepPlusWells)
        for (const auto& w : spec_.wells)
          d -= w.depth * std::pow(w.width, -order) * sech2_derivative((x - w.center) / w.width, order);
      return d;
    }
    case Family::Tabulated: {
      const double h = table_h_;
      auto f = [&](double y) { return derivative(y, order > 4 ? order - 1 : 0); };
      switch (order) {
        case 1: return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
        case 2: return (-f(x - 2 * h) + 16 * f(x - h) - 30 * f(x) + 16 * f(x + h) - f(x + 2 * h)) / (12 * h * h);
        case 3:
          return (f(x - 3 * h) - 8 * f(x - 2 * h) + 13 * f(x - h) - 13 * f(x + h) + 8 * f(x + 2 * h) - f(x + 3 * h)) /
                 (8 * h * h * h);
        case 4:
          return (-f(x - 3 * h) + 12 * f(x - 2 * h) - 39 * f(x - h) + 56 * f(x) - 39 * f(x + h) + 12 * f(x + 2 * h) -
                  f(x + 3 * h)) / (6 * h * h * h * h);
        default:
          return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
      }
    }
  }
  return 0.0;
}

double Potential::max_excess() const {
  const double c2 = spec_.c * spec_.c;
  double m = 0.0;
  const double a = -left_radius_, b = right_radius_;
  const int n = 20000;
  for (int i = 0; i <= n; ++i) {
    double x = a + (b - a) * i / n;
    m = std::max(m, std::abs((*this)(x) + (x < 0.0 ? c2 : 0.0)));
  }
  return m;
}

PotentialSamples sample_potential(const Potential& pot, const GridParams& grid) {
  if (!(grid.h > 0.0) || !(grid.x_max > grid.x_min)) throw DomainError("bad sampling grid");
  if (grid.x_min > -pot.left_radius() || grid.x_max < pot.right_radius())
    throw DomainError("sampling grid does not cover the truncation radii");
  const auto& spec = pot.spec();
  if (spec.family == Family::Tabulated) {
    double ht = (spec.table_x.back() - spec.table_x.front()) / double(spec.table_x.size() - 1);
    double ratio = grid.h / ht;
    double off = (grid.x_min - spec.table_x.front()) / ht;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || std::abs(off - std::round(off)) > 1e-9)
      throw DomainError("tabulated potential: sampling grid is not aligned with the table (resampling required)");
  }
  PotentialSamples s;
  s.c = pot.c();
  s.m0 = spec.m0;
  s.n0 = spec.n0;
  s.h = grid.h;
  s.fixture_only = pot.fixture_only();
  s.left_radius = pot.left_radius();
  s.right_radius = pot.right_radius();
  const std::size_t n = static_cast<std::size_t>(std::llround((grid.x_max - grid.x_min) / grid.h)) + 1;
  s.x.resize(n);
  s.q.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.x[i] = grid.x_min + grid.h * double(i);
    s.q[i] = pot(s.x[i]);
  }
  if (pot.smooth()) {
    s.dq.assign(spec.n0, std::vector<double>(n));
    for (int o = 1; o <= spec.n0; ++o)
      for (std::size_t i = 0; i < n; ++i) s.dq[o - 1][i] = pot.derivative(s.x[i], o);
  } else {
    s.derivatives_distributional = true;
  }
  const double c2 = s.c * s.c;
  const double rmax = std::min(-grid.x_min, grid.x_max);
  const std::size_t nr = static_cast<std::size_t>(std::floor(rmax / grid.h)) + 1;
  s.r.resize(nr);
  s.tail_residual.resize(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    double r = grid.h * double(i);
    s.r[i] = r;
    s.tail_residual[i] = std::abs(pot(r)) + std::abs(pot(-r) + c2);
  }
  // beyond both radii the residual envelope must stay below tolerance
  const double rr = std::max(pot.left_radius(), pot.right_radius());
  for (std::size_t i = 0; i < nr; ++i)
    if (s.r[i] > rr && s.tail_residual[i] > 2.0 * kTailTol) s.tail_envelope_ok = false;
  return s;
}

namespace {

// trapezoid integral of g on a uniform grid plus an exponential tail estimate
// taken from the last samples
MomentEntry integrate_with_tail(const std::vector<double>& x, const std::vector<double>& g, int order,
                                bool covers_radius) {
  MomentEntry e;
  e.order = order;
  const std::size_t n = g.size();
  double sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) sum += 0.5 * (g[i] + g[i - 1]) * (x[i] - x[i - 1]);
  e.value = sum;
  const std::size_t back = std::max<std::size_t>(1, static_cast<std::size_t>(n / 20));
  const double g1 = g[n - 1], g0 = g[n - 1 - back];
  const double dx = std::abs(x[n - 1] - x[n - 1 - back]);
  double peak = *std::max_element(g.begin(), g.end());
  if (g1 == 0.0) {
    e.tail_estimate = 0.0;
  } else if (g1 > 0.0 && g0 > g1) {
    double rate = std::log(g0 / g1) / dx;
    e.tail_estimate = g1 / rate;
  } else {
    e.tail_estimate = INFINITY;
  }
  if (!covers_radius) {
    e.verdict = Verdict::Inconclusive;
    e.note = "window does not reach the truncation radius";
  } else if (!std::isfinite(e.tail_estimate)) {
    bool flat = g1 > 1e-10 * std::max(peak, 1e-300);
    e.verdict = flat ? Verdict::Divergent : Verdict::Inconclusive;
    e.note = flat ? "integrand does not decay at the window edge" : "tail too noisy to extrapolate";
  } else if (e.tail_estimate <= 1e-8 * std::max(std::abs(sum), 1e-300) || e.tail_estimate < 1e-14) {
    e.verdict = Verdict::Finite;
  } else {
    e.verdict = Verdict::Inconclusive;
    e.note = "tail increment above tolerance; enlarge the window";
  }
  return e;
}

}  // namespace

MomentReport moment_diagnostics(const PotentialSamples& s, int m0) {
  MomentReport rep;
  rep.m0 = m0;
  const double c2 = s.c * s.c;
  const bool covers = (s.x.front() <= -s.left_radius) && (s.x.back() >= s.right_radius);

  // order 0: int_0^R r^{m0} (|q(r)| + |q(-r) + c^2|) dr, from the grid halves
  {
    std::vector<double> gr, xr, gl, xl;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (s.x[i] >= 0.0) {
        xr.push_back(s.x[i]);
        gr.push_back(std::pow(s.x[i], m0) * std::abs(s.q[i]));
      }
    }
    for (std::size_t i = s.x.size(); i-- > 0;) {
      if (s.x[i] <= 0.0) {
        xl.push_back(-s.x[i]);
        gl.push_back(std::pow(-s.x[i], m0) * std::abs(s.q[i] + c2));
      }
    }
    MomentEntry a = integrate_with_tail(xr, gr, 0, covers);
    MomentEntry b = integrate_with_tail(xl, gl, 0, covers);
    MomentEntry e;
    e.order = 0;
    e.value = a.value + b.value;
    e.tail_estimate = a.tail_estimate + b.tail_estimate;
    if (a.verdict == Verdict::Divergent || b.verdict == Verdict::Divergent) e.verdict = Verdict::Divergent;
    else if (a.verdict == Verdict::Finite && b.verdict == Verdict::Finite) e.verdict = Verdict::Finite;
    else e.verdict = Verdict::Inconclusive;
    e.note = !a.note.empty() ? a.note : b.note;
    rep.entries.push_back(e);
  }

  for (int i = 1; i <= s.n0; ++i) {
    MomentEntry e;
    e.order = i;
    if (s.derivatives_distributional) {
      e.value = INFINITY;
      e.tail_estimate = INFINITY;
      e.verdict = Verdict::Divergent;
      e.note = "derivative is distributional (jump in q)";
      rep.entries.push_back(e);
      continue;
    }
    const auto& d = s.dq[i - 1];
    std::vector<double> gr, xr, gl, xl;
    for (std::size_t n = 0; n < s.x.size(); ++n)
      if (s.x[n] >= 0.0) {
        xr.push_back(s.x[n]);
        gr.push_back(std::pow(s.x[n], m0 - 1) * std::abs(d[n]));
      }
    for (std::size_t n = s.x.size(); n-- > 0;)
      if (s.x[n] <= 0.0) {
        xl.push_back(-s.x[n]);
        gl.push_back(std::pow(-s.x[n], m0 - 1) * std::abs(d[n]));
      }
    MomentEntry a = integrate_with_tail(xr, gr, i, covers);
    MomentEntry b = integrate_with_tail(xl, gl, i, covers);
    e.value = a.value + b.value;
    e.tail_estimate = a.tail_estimate + b.tail_estimate;
    if (a.verdict == Verdict::Divergent || b.verdict == Verdict::Divergent) e.verdict = Verdict::Divergent;
    else if (a.verdict == Verdict::Finite && b.verdict == Verdict::Finite) e.verdict = Verdict::Finite;
    else e.verdict = Verdict::Inconclusive;
    e.note = !a.note.empty() ? a.note : b.note;
    rep.entries.push_back(e);
  }
  rep.satisfies_class = std::all_of(rep.entries.begin(), rep.entries.end(),
                                    [](const MomentEntry& e) { return e.verdict == Verdict::Finite; });
  return rep;
}

void read_table_csv(const std::string& path, std::vector<double>& x, std::vector<double>& q) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open table '" + path + "'");
  x.clear();
  q.clear();
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double a, b;
    if (!(ss >> a >> b)) {
      if (x.empty()) continue;  // header
      throw DomainError("malformed row in '" + path + "': " + line);
    }
    x.push_back(a);
    q.push_back(b);
  }
}

}  // namespace kdvlab
