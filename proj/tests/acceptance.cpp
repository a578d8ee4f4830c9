#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdvlab/config.hpp"
#include "kdvlab/kdv_oracle.hpp"
#include "kdvlab/model.hpp"
#include "kdvlab/reflsplit.hpp"
#include "kdvlab/rhp.hpp"
#include "kdvlab/scattering.hpp"
#include "kdvlab/validate.hpp"

#ifndef KDVLAB_CONFIG_DIR
#define KDVLAB_CONFIG_DIR "configs"
#endif

using namespace kdvlab;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
  json detail = json::object();
};

Potential make(Family f, double c, std::vector<Well> wells = {}) {
  PotentialSpec s;
  s.family = f;
  s.c = c;
  s.wells = std::move(wells);
  return Potential(s);
}

std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(3) << v;
  return o.str();
}

const RunConfig& headline_config() {
  static const RunConfig c = load_config(std::string(KDVLAB_CONFIG_DIR) + "/headline.cfg");
  return c;
}

const ScatteringData& headline_data() {
  static const ScatteringData d = scattering_data(Potential(headline_config().potential));
  return d;
}

const SplitReflection& headline_split() {
  static const SplitReflection s(headline_data(), headline_config().split);
  return s;
}

Outcome closed_form() {
  const auto d = scattering_data(make(Family::SharpStep, 1.0));
  double er = 0.0, ec = 0.0;
  for (int i = 0; i <= 490; ++i) {
    const double k = 0.1 + 0.01 * i, s = std::sqrt(k * k + 1.0);
    er = std::max(er, std::abs(d.R_at(k) - (k - s) / (k + s)));
  }
  for (int i = 0; i <= 90; ++i) {
    const double h = 0.05 + 0.01 * i;
    ec = std::max(ec, std::abs(d.chi_at(h) - Complex(0.0, 4.0 * h * std::sqrt(1.0 - h * h))));
  }
  return {er < 1e-6 && ec < 1e-6 && d.N() == 0,
          "R err " + fmt(er) + ", chi err " + fmt(ec) + ", N " + std::to_string(d.N()),
          {{"R_error", er}, {"chi_error", ec}, {"N", d.N()}}};
}

Outcome reflectionless() {
  const auto d = scattering_data(make(Family::TanhStepPlusWells, 0.0, {{2.0, 0.0, 1.0}}));
  if (d.N() != 1) return {false, "N = " + std::to_string(d.N()) + ", expected 1"};
  double rmax = 0.0, qerr = 0.0;
  for (double k = 0.05; k <= 10.0; k += 0.05) rmax = std::max(rmax, std::abs(d.R_at(k)));
  for (double x = -10.0; x <= 10.0; x += 0.05) {
    const double s = 1.0 / std::cosh(x);
    qerr = std::max(qerr, std::abs(q_sol(d, x, 0.0) + 2.0 * s * s));
  }
  const double ek = std::abs(d.kappas[0] - 1.0), eg = std::abs(d.gammas2[0] - 2.0);
  return {ek < 1e-8 && eg < 1e-6 && rmax < 1e-8 && qerr < 1e-8,
          "kappa err " + fmt(ek) + ", gamma^2 err " + fmt(eg) + ", |R| " + fmt(rmax) + ", q_sol err " + fmt(qerr),
          {{"kappa_error", ek}, {"gamma2_error", eg}, {"R_max", rmax}, {"q_sol_error", qerr}}};
}

Outcome jumps() {
  double worst = 0.0;
  json rows = json::array();
  for (const auto& [name, pot] : {std::pair{"sharp-step", make(Family::SharpStep, 1.0)},
                                  std::pair{"tanh-step+well", make(Family::TanhStepPlusWells, 1.0, {{1.2, -3.0, 1.0}})}}) {
    const auto d = scattering_data(pot);
    for (double x : {-2.0, 0.0, 3.0}) {
      const auto r = verify_jump_real_axis(pot, d, x, default_jump_grid(), 1e-5, false);
      worst = std::max(worst, r.residual);
      rows.push_back({{"fixture", name}, {"x", x}, {"residual", r.residual}, {"worst_k", r.worst_k}});
    }
  }
  return {worst < 1e-5, "max relative residual " + fmt(worst), {{"rows", rows}}};
}

Outcome reconstruction() {
  double worst = 0.0;
  json rows = json::array();
  for (const auto& [name, pot] :
       {std::pair{"tanh-step+well", make(Family::TanhStepPlusWells, 1.0, {{1.2, -3.0, 1.0}})},
        std::pair{"headline", Potential(headline_config().potential)}})
    for (double x : {-2.0, 0.0, 3.0}) {
      const auto r = reconstruct_q(pot, x);
      const double e = std::abs(r.q - pot(x));
      worst = std::max(worst, e);
      rows.push_back({{"fixture", name}, {"x", x}, {"q", r.q}, {"exact", pot(x)}});
    }
  return {worst < 1e-3, "max error " + fmt(worst), {{"rows", rows}}};
}

Outcome model_algebra() {
  const auto& d = headline_data();
  const auto& cfg = headline_config();
  bool pass = d.N() > 0;
  double alg = 0.0, rem = 0.0;
  json rows = json::array();
  for (int j = 1; j <= int(d.N()); ++j) {
    const auto a = model_algebra_check(d, j, cfg.region, cfg.seed + unsigned(j));
    alg = std::max({alg, a.det, a.symmetry, a.infinity, a.row});
    pass = pass && a.pass && a.probes == 100;
    for (double t : {5.0, 40.0}) {
      const double k = d.kappas[j - 1];
      const auto r = removability_check(d, j, 4.0 * k * k * t, t);
      rem = std::max(rem, r.at_1e4);
      pass = pass && r.pass;
      rows.push_back({{"algebra", to_json(a)}, {"removability", to_json(r)}});
    }
  }
  return {pass, "identities " + fmt(alg) + ", removability at 1e-4 " + fmt(rem), {{"rows", rows}}};
}

Outcome jump_decay() {
  const auto& cfg = headline_config();
  const auto r = jump_decay_report(headline_data(), headline_split(), 0, 0.0, cfg.times, cfg.contour);
  return {r.cut_upper_pass && r.cut_lower_pass && r.line_pass,
          "cut [ic,ic/2] " + fmt(r.cut_upper_exponent) + " (needs [-1.3,-0.7]), cut [ic/2,0] " +
              fmt(r.cut_lower_exponent) + " (needs <= " + fmt(-(r.m0 - 1) + 0.5) + "), circles at t=10 " +
              fmt(r.line_norm_at_10),
          to_json(r)};
}

Outcome split_bounds_check() {
  const auto r = split_bounds(headline_split(), headline_config().times);
  return {r.remainder_pass && r.symmetry_pass,
          "remainder exponent " + fmt(r.remainder_fit.slope) + " (needs " + fmt(r.target_exponent) +
              " +- 0.5), conjugation " + fmt(r.conjugation_residual) + ", strip " + fmt(r.strip_symmetry_residual),
          to_json(r)};
}

Outcome headline(const fs::path& out) {
  const auto& cfg = headline_config();
  const auto& d = headline_data();
  if (d.N() != 2) return {false, "N = " + std::to_string(d.N()) + ", expected 2"};
  const auto fo = evolve(Potential(cfg.potential), cfg.oracle);
  auto fa = asymptotic_field(d, fo.x, cfg.times, cfg.region);
  write_field_csv(fo, (out / "headline_oracle.csv").string());
  write_field_csv(fa, (out / "headline_asymptotic.csv").string());
  const auto r = validate_fields(fo, fa, d.c, cfg.region.beta, cfg.potential.m0, cfg.oracle.window_lo(),
                                 cfg.oracle.window_hi(), soliton_lines(d));
  double xr = 0.0, hr = 0.0;
  for (const auto& p : r.peaks) {
    xr = std::max(xr, p.x_rel);
    hr = std::max(hr, p.h_rel);
  }
  std::string errs;
  for (std::size_t i = 0; i < r.t.size(); ++i) errs += (i ? ", " : "") + fmt(r.sup_error[i]);
  return {r.pass,
          "exponent " + fmt(r.fit.slope) + " (needs <= " + fmt(-r.nu + 0.3) + "), sup errors " + errs +
              ", peaks x " + fmt(xr) + " h " + fmt(hr),
          to_json(r)};
}

Outcome small_k() {
  const auto& d = headline_data();
  const double t = headline_config().times.front();
  const auto r = small_k_report(d, headline_split(), 0, 4.0 * d.c * d.c * t, t);
  return {r.pass, "slope " + fmt(r.slope) + " at t = " + fmt(t) + " (needs >= 1.7)", to_json(r)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria 1-9"};
  bool report = false;
  std::string out = "acceptance_out";
  std::vector<int> only;
  app.add_flag("--report", report, "write acceptance.json");
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--only", only, "run these criteria only");
  CLI11_PARSE(app, argc, argv);

  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
  };
  const fs::path dir(out);
  const std::vector<Criterion> all{
      {1, "closed-form scattering", 60.0, closed_form},
      {2, "reflectionless fixture", 60.0, reflectionless},
      {3, "jump at t = 0", 120.0, jumps},
      {4, "reconstruction", INFINITY, reconstruction},
      {5, "model algebra", 60.0, model_algebra},
      {6, "jump decay", 300.0, jump_decay},
      {7, "splitting bounds", 180.0, split_bounds_check},
      {8, "headline", 900.0, [&] { return headline(dir); }},
      {9, "small-k jump", 60.0, small_k},
  };

  fs::create_directories(dir);
  json rep = json::array();
  int operational = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
      ++operational;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = wall <= c.budget;
    const bool pass = o.pass && in_time;
    std::cout << "criterion " << c.id << " [" << c.name << "]: " << (pass ? "PASS" : "FAIL") << "  " << o.summary
              << "  (" << fmt(wall) << " s" << (in_time ? "" : ", over budget " + fmt(c.budget) + " s") << ")"
              << std::endl;
    rep.push_back({{"criterion", c.id}, {"name", c.name}, {"pass", pass}, {"wall_seconds", wall},
                   {"budget_seconds", c.budget}, {"summary", o.summary}, {"detail", o.detail}});
  }
  if (report) std::ofstream((dir / "acceptance.json").string()) << rep.dump(2) << '\n';
  return operational ? 1 : 0;
}
