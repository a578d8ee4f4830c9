#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kdvlab/config.hpp"
#include "kdvlab/kdv_oracle.hpp"
#include "kdvlab/model.hpp"
#include "kdvlab/reflsplit.hpp"
#include "kdvlab/rhp.hpp"
#include "kdvlab/scattering.hpp"
#include "kdvlab/validate.hpp"

#ifndef KDVLAB_VERSION
#define KDVLAB_VERSION "dev"
#endif

using namespace kdvlab;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kPass = 0, kOperational = 1, kScientific = 2;

struct Args {
  std::string config, out = "out", scatter, oracle, asym, times;
  double beta = NAN, eps = NAN;
  int j = -1, m0 = -1;
  bool schema_check = false;
};

struct Run {
  std::string command;
  Args args;
  std::vector<std::string> inputs, outputs;
  json extra = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  std::string out(const std::string& name) {
    fs::create_directories(args.out);
    const std::string p = (fs::path(args.out) / name).string();
    outputs.push_back(p);
    return p;
  }
  void manifest(bool pass, int code) {
    fs::create_directories(args.out);
    json m = {{"command", command},
              {"config", args.config},
              {"inputs", inputs},
              {"outputs", outputs},
              {"version", KDVLAB_VERSION},
              {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
              {"timestamp", std::time(nullptr)},
              {"pass", pass},
              {"exit_code", code}};
    m.update(extra);
    std::ofstream((fs::path(args.out) / "manifest.jsonl").string(), std::ios::app) << m.dump() << '\n';
  }
};

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void write_json(const json& j, const std::string& path) {
  std::ofstream o(path);
  o << j.dump(2) << '\n';
  if (!o) throw DomainError("write failed: " + path);
}

RunConfig config_or_default(const Args& a) {
  RunConfig c = a.config.empty() ? RunConfig{} : load_config(a.config);
  if (!a.times.empty()) {
    c.times = parse_list(a.times);
    c.oracle.times = c.times;
  }
  if (!std::isnan(a.beta)) c.region.beta = a.beta;
  if (!std::isnan(a.eps)) c.region.eps = a.eps;
  if (a.j >= 0) c.j = a.j;
  return c;
}

std::string scatter_path(const Args& a) {
  return a.scatter.empty() ? (fs::path(a.out) / "scatter.json").string() : a.scatter;
}

json moments_json(const MomentReport& r) {
  json e = json::array();
  for (const auto& m : r.entries)
    e.push_back({{"order", m.order},
                 {"value", m.value},
                 {"tail_estimate", m.tail_estimate},
                 {"verdict", to_string(m.verdict)},
                 {"note", m.note}});
  return {{"m0", r.m0}, {"entries", e}, {"satisfies_class", r.satisfies_class}};
}

int cmd_scatter(Run& run) {
  const RunConfig cfg = config_or_default(run.args);
  run.inputs.push_back(cfg.path);
  const Potential pot(cfg.potential);
  const auto d = scattering_data(pot);
  const auto moments = moment_diagnostics(sample_potential(pot, cfg.grid), cfg.potential.m0);
  json j = to_json(d);
  j["moments"] = moments_json(moments);
  write_json(j, run.out("scatter.json"));
  std::cout << "N = " << d.N() << '\n';
  for (std::size_t i = 0; i < d.N(); ++i)
    std::cout << "  kappa_" << i + 1 << " = " << d.kappas[i] << "  gamma^2 = " << d.gammas2[i] << '\n';
  if (d.c > 0.0) std::cout << "resonance margin |W(ic)| = " << std::abs(d.W_ic) << '\n';
  std::cout << "moment class m0=" << moments.m0 << ": " << (moments.satisfies_class ? "yes" : "not established")
            << '\n';
  for (const auto& w : d.warnings) std::cout << "warning: " << w << '\n';
  run.extra["N"] = d.N();
  return kPass;
}

std::vector<double> oracle_grid(const SolverConfig& o) {
  std::vector<double> x(o.nx);
  const double dx = (o.x_max - o.x_min) / double(o.nx);
  for (std::size_t i = 0; i < o.nx; ++i) x[i] = o.x_min + double(i) * dx;
  return x;
}

int cmd_asymptote(Run& run) {
  const RunConfig cfg = config_or_default(run.args);
  const std::string sp = scatter_path(run.args);
  run.inputs.push_back(sp);
  const auto d = scattering_from_json(read_json(sp));
  if (run.args.schema_check) {
    std::cout << sp << ": schema ok\n";
    return kPass;
  }
  auto f = asymptotic_field(d, oracle_grid(cfg.oracle), cfg.times, cfg.region);
  f.meta["window"] = {cfg.oracle.window_lo(), cfg.oracle.window_hi()};
  write_field_csv(f, run.out("asymptotic.csv"));
  std::cout << "soliton lines (x = v t + offset):\n";
  for (const auto& l : soliton_lines(d))
    std::cout << "  kappa " << l.kappa << "  v " << l.velocity << "  offset " << l.offset << "  height " << l.height
              << '\n';
  if (d.N() == 0) std::cout << "  none: the field vanishes identically\n";
  return kPass;
}

int cmd_evolve(Run& run) {
  const RunConfig cfg = config_or_default(run.args);
  run.inputs.push_back(cfg.path);
  const Potential pot(cfg.potential);
  const auto f = evolve(pot, cfg.oracle);
  write_field_csv(f, run.out("oracle.csv"));
  const auto cr = conservation_report(f);
  write_json(to_json(cr), run.out("conservation.json"));
  std::cout << "steps " << f.meta["steps"] << "  wall " << f.meta["wall_seconds"] << " s\n"
            << "max drift: mass " << cr.max_mass_drift << "  energy " << cr.max_energy_drift << '\n';
  return kPass;
}

int cmd_validate(Run& run) {
  const Args& a = run.args;
  const std::string op = a.oracle.empty() ? (fs::path(a.out) / "oracle.csv").string() : a.oracle;
  const std::string ap = a.asym.empty() ? (fs::path(a.out) / "asymptotic.csv").string() : a.asym;
  run.inputs = {op, ap};
  const auto fo = read_field_csv(op);
  const auto fa = read_field_csv(ap);
  if (a.schema_check) {
    std::cout << op << ", " << ap << ": schema ok\n";
    return kPass;
  }
  int m0 = a.m0;
  double beta = a.beta;
  if (!a.config.empty()) {
    const RunConfig cfg = config_or_default(a);
    if (m0 < 0) m0 = cfg.potential.m0;
    beta = cfg.region.beta;
  }
  if (m0 < 0) m0 = 4;
  if (std::isnan(beta)) beta = fa.meta.value("beta", 0.0);
  const double c = fa.meta.value("c", 0.0);
  double lo = -INFINITY, hi = INFINITY;
  if (fo.meta.contains("window")) {
    lo = fo.meta["window"][0].get<double>();
    hi = fo.meta["window"][1].get<double>();
  }
  std::vector<SolitonLine> lines;
  if (fa.meta.contains("soliton_lines"))
    for (const auto& l : fa.meta["soliton_lines"])
      lines.push_back({l["kappa"].get<double>(), l["velocity"].get<double>(), l["offset"].get<double>(),
                       l["height"].get<double>()});
  const auto r = validate_fields(fo, fa, c, beta, m0, lo, hi, lines);
  write_json(to_json(r), run.out("validate.json"));
  for (std::size_t i = 0; i < r.t.size(); ++i)
    std::cout << "t " << r.t[i] << "  sup error " << r.sup_error[i] << '\n';
  std::cout << "exponent " << r.fit.slope << " (needs <= " << -r.nu + 0.3 << ")  "
            << (r.exponent_pass ? "PASS" : "FAIL") << '\n';
  for (const auto& p : r.peaks)
    std::cout << "soliton " << p.j << ": x " << p.x_found << " vs " << p.x_pred << ", height " << p.h_found
              << " vs " << p.h_pred << "  " << (p.pass ? "PASS" : "FAIL") << '\n';
  run.extra["pass"] = r.pass;
  return r.pass ? kPass : kScientific;
}

int cmd_rhpcheck(Run& run) {
  const RunConfig cfg = config_or_default(run.args);
  const std::string sp = scatter_path(run.args);
  run.inputs = {sp, cfg.path};
  const auto d = scattering_from_json(read_json(sp));
  if (run.args.schema_check) {
    std::cout << sp << ": schema ok\n";
    return kPass;
  }
  if (cfg.path.empty()) throw DomainError("rhpcheck needs --config for the potential and split settings");
  const Potential pot(cfg.potential);
  bool pass = true;
  json rep = {{"schema", "kdvlab.rhpcheck/1"}, {"j", cfg.j}, {"beta", cfg.region.beta}, {"seed", cfg.seed}};
  run.extra["seed"] = cfg.seed;

  const SplitReflection s(d, cfg.split);
  const auto dr = jump_decay_report(d, s, cfg.j, cfg.region.beta, cfg.times, cfg.contour);
  rep["decay"] = to_json(dr);
  std::cout << "decay: total " << dr.total_exponent << " (nu " << dr.nu << ") " << (dr.total_pass ? "PASS" : "FAIL")
            << "; cut [ic, ic/2] " << dr.cut_upper_exponent << ' ' << (dr.cut_upper_pass ? "PASS" : "FAIL")
            << "; cut [ic/2, 0] " << dr.cut_lower_exponent << ' ' << (dr.cut_lower_pass ? "PASS" : "FAIL")
            << "; line " << dr.line_norm_at_10 << ' ' << (dr.line_pass ? "PASS" : "FAIL") << '\n';
  pass = pass && dr.total_pass && dr.cut_upper_pass && dr.cut_lower_pass && dr.line_pass;

  const double t0 = cfg.times.empty() ? 5.0 : cfg.times.front();
  const double tm = cfg.times.empty() ? 10.0 : cfg.times.back();
  const auto sk = small_k_report(d, s, cfg.j, 4.0 * d.c * d.c * t0, t0);
  rep["small_k"] = to_json(sk);
  std::cout << "W = O(k^2): slope " << sk.slope << ' ' << (sk.pass ? "PASS" : "FAIL") << '\n';
  pass = pass && sk.pass;

  json alg = json::array();
  for (int j = 1; j <= int(d.N()); ++j) {
    const auto a = model_algebra_check(d, j, cfg.region, cfg.seed + unsigned(j));
    const auto rv = removability_check(d, j, 4.0 * d.kappas[j - 1] * d.kappas[j - 1] * tm, tm);
    alg.push_back({{"algebra", to_json(a)}, {"removability", to_json(rv)}});
    std::cout << "model " << j << ": det " << a.det << " sym " << a.symmetry << " inf " << a.infinity << " row "
              << a.row << " removability " << rv.at_1e4 << ' ' << (a.pass && rv.pass ? "PASS" : "FAIL") << '\n';
    pass = pass && a.pass && rv.pass;
  }
  rep["model"] = alg;

  json jumps = json::array();
  for (double x : {-2.0, 0.0, 3.0}) {
    const auto jc = verify_jump_real_axis(pot, d, x, default_jump_grid(), 1e-5, false);
    jumps.push_back({{"x", x}, {"residual", jc.residual}, {"worst_k", jc.worst_k}, {"pass", jc.pass}});
    std::cout << "jump t=0 x=" << x << ": residual " << jc.residual << ' ' << (jc.pass ? "PASS" : "FAIL") << '\n';
    pass = pass && jc.pass;
  }
  rep["jump_t0"] = jumps;
  rep["pass"] = pass;
  write_json(rep, run.out("rhpcheck.json"));
  run.extra["pass"] = pass;
  return pass ? kPass : kScientific;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kdvlab: scattering, asymptotics and a reference solver for step-like KdV data"};
  app.require_subcommand(1);
  Args a;
  auto common = [&](CLI::App* c) {
    c->add_option("--config", a.config, "INI config file");
    c->add_option("--out", a.out, "output directory")->capture_default_str();
    c->add_flag("--schema-check", a.schema_check, "only check the schemas of input artifacts");
  };
  auto* sc = app.add_subcommand("scatter", "scattering data and moment diagnostics");
  common(sc);
  auto* as = app.add_subcommand("asymptote", "soliton asymptotics on the oracle grid");
  common(as);
  auto* ev = app.add_subcommand("evolve", "reference KdV evolution");
  common(ev);
  auto* va = app.add_subcommand("validate", "oracle vs asymptotics error exponent");
  common(va);
  auto* rc = app.add_subcommand("rhpcheck", "jump decay, model algebra and jump verification");
  common(rc);
  for (auto* c : {as, rc}) c->add_option("--scatter", a.scatter, "scatter.json (default <out>/scatter.json)");
  for (auto* c : {as, va, rc}) c->add_option("--beta", a.beta, "log-correction coefficient of the region edge");
  for (auto* c : {as, rc}) c->add_option("--eps", a.eps, "half width of the soliton bands in x/t");
  for (auto* c : {as, ev, rc}) c->add_option("--times", a.times, "comma separated output times");
  rc->add_option("--j", a.j, "region index");
  va->add_option("--oracle", a.oracle, "oracle field CSV");
  va->add_option("--asym", a.asym, "asymptotic field CSV");
  va->add_option("--m0", a.m0, "decay class");
  CLI11_PARSE(app, argc, argv);

  Run run;
  run.command = app.get_subcommands().front()->get_name();
  run.args = a;
  int code = kOperational;
  try {
    if (run.command == "scatter") code = cmd_scatter(run);
    else if (run.command == "asymptote") code = cmd_asymptote(run);
    else if (run.command == "evolve") code = cmd_evolve(run);
    else if (run.command == "validate") code = cmd_validate(run);
    else code = cmd_rhpcheck(run);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kOperational;
  }
  try {
    run.manifest(code == kPass, code);
  } catch (const std::exception& e) {
    std::cerr << "error: manifest: " << e.what() << '\n';
    if (code == kPass) code = kOperational;
  }
  return code;
}
