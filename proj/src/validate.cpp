#include "kdvlab/validate.hpp"

#include <algorithm>
#include <cmath>

namespace kdvlab {

namespace {

// minimum of q near x0, refined by a parabola through the three lowest samples
std::pair<double, double> local_min(const std::vector<double>& x, const std::vector<double>& q, double x0,
                                    double halfwidth) {
  std::size_t best = x.size();
  for (std::size_t n = 1; n + 1 < x.size(); ++n)
    if (std::abs(x[n] - x0) <= halfwidth && (best == x.size() || q[n] < q[best])) best = n;
  if (best == x.size()) return {NAN, NAN};
  const double a = q[best - 1], b = q[best], c = q[best + 1], h = x[best + 1] - x[best];
  const double den = a - 2.0 * b + c;
  if (den <= 0.0) return {x[best], b};
  const double s = 0.5 * (a - c) / den;
  return {x[best] + s * h, b - 0.25 * (a - c) * s};
}

}  // namespace

ValidationReport validate_fields(const FieldGrid& oracle, const FieldGrid& asym, double c, double beta, int m0,
                                 double x_lo, double x_hi, const std::vector<SolitonLine>& lines) {
  if (oracle.x.size() != asym.x.size()) throw DomainError("validate: x grids differ in size");
  for (std::size_t n = 0; n < oracle.x.size(); ++n)
    if (std::abs(oracle.x[n] - asym.x[n]) > 1e-9 * std::max(1.0, std::abs(oracle.x[n])))
      throw DomainError("validate: x grids differ");
  ValidationReport r;
  r.beta = beta;
  r.c = c;
  r.m0 = m0;
  r.nu = std::min(double(m0 - 3), beta + 1.0);
  for (std::size_t i = 0; i < oracle.t.size(); ++i) {
    const double t = oracle.t[i];
    auto it = std::find_if(asym.t.begin(), asym.t.end(), [&](double s) { return std::abs(s - t) < 1e-12; });
    if (it == asym.t.end()) continue;
    const auto& qa = asym.q[std::size_t(it - asym.t.begin())];
    const double edge = 4.0 * c * c * t + (c > 0.0 && t > 0.0 ? beta / c * std::log(t) : 0.0);
    double e = 0.0, xe = NAN;
    for (std::size_t n = 0; n < oracle.x.size(); ++n) {
      const double x = oracle.x[n];
      if (x < edge || x < x_lo || x > x_hi) continue;
      const double d = std::abs(oracle.q[i][n] - qa[n]);
      if (d > e) e = d, xe = x;
    }
    r.t.push_back(t);
    r.sup_error.push_back(e);
    r.x_at.push_back(xe);
  }
  if (r.t.size() < 3) throw DomainError("validate: fewer than three common times");
  const bool identical = std::all_of(r.sup_error.begin(), r.sup_error.end(), [](double e) { return e == 0.0; });
  r.fit = loglog_fit(r.t, r.sup_error);
  r.exponent_pass = identical || (r.fit.used >= 3 && r.fit.slope <= -r.nu + 0.3);

  const double tl = r.t.back();
  const std::size_t il = std::size_t(std::find(oracle.t.begin(), oracle.t.end(), tl) - oracle.t.begin());
  for (std::size_t j = 0; j < lines.size(); ++j) {
    PeakMatch p;
    p.j = int(j) + 1;
    p.x_pred = lines[j].velocity * tl + lines[j].offset;
    p.h_pred = lines[j].height;
    if (p.x_pred < x_lo || p.x_pred > x_hi) throw DomainError("validate: predicted soliton outside the window");
    const auto [xf, hf] = local_min(oracle.x, oracle.q[il], p.x_pred, 1.0 / lines[j].kappa);
    p.x_found = xf;
    p.h_found = hf;
    p.x_rel = std::abs(xf - p.x_pred) / std::max(1.0, std::abs(p.x_pred));
    p.h_rel = std::abs(hf - p.h_pred) / std::abs(p.h_pred);
    p.pass = std::isfinite(xf) && p.x_rel <= r.peak_tol && p.h_rel <= r.peak_tol;
    r.peaks_pass = r.peaks_pass && p.pass;
    r.peaks.push_back(p);
  }
  r.pass = r.exponent_pass && r.peaks_pass;
  return r;
}

nlohmann::json to_json(const ValidationReport& r) {
  nlohmann::json peaks = nlohmann::json::array();
  for (const auto& p : r.peaks)
    peaks.push_back({{"j", p.j},
                     {"x_pred", p.x_pred},
                     {"x_found", p.x_found},
                     {"h_pred", p.h_pred},
                     {"h_found", p.h_found},
                     {"x_rel", p.x_rel},
                     {"h_rel", p.h_rel},
                     {"pass", p.pass}});
  return {{"schema", "kdvlab.validate/1"},
          {"beta", r.beta},
          {"c", r.c},
          {"m0", r.m0},
          {"nu", r.nu},
          {"t", r.t},
          {"sup_error", r.sup_error},
          {"x_at", r.x_at},
          {"exponent", r.fit.slope},
          {"exponent_pass", r.exponent_pass},
          {"peaks", peaks},
          {"peaks_pass", r.peaks_pass},
          {"pass", r.pass}};
}

}  // namespace kdvlab
