#include "kdvlab/config.hpp"

#include <filesystem>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace kdvlab {

namespace pt = boost::property_tree;

std::vector<double> parse_list(const std::string& s) {
  std::vector<std::string> parts;
  boost::split(parts, s, boost::is_any_of(", "), boost::token_compress_on);
  std::vector<double> v;
  for (auto& p : parts) {
    boost::trim(p);
    if (p.empty()) continue;
    try {
      std::size_t used = 0;
      v.push_back(std::stod(p, &used));
      if (used != p.size()) throw std::invalid_argument(p);
    } catch (const std::exception&) {
      throw DomainError("not a number: '" + p + "'");
    }
  }
  return v;
}

std::vector<Well> parse_wells(const std::string& s) {
  std::vector<std::string> items;
  boost::split(items, s, boost::is_any_of(","));
  std::vector<Well> wells;
  for (auto& it : items) {
    boost::trim(it);
    if (it.empty()) continue;
    std::vector<std::string> f;
    boost::split(f, it, boost::is_any_of(":"));
    if (f.size() != 3) throw DomainError("well '" + it + "' is not depth:center:width");
    const auto d = parse_list(f[0]), x0 = parse_list(f[1]), w = parse_list(f[2]);
    if (d.size() != 1 || x0.size() != 1 || w.size() != 1) throw DomainError("bad well '" + it + "'");
    if (!(w[0] > 0.0)) throw DomainError("well width must be positive in '" + it + "'");
    wells.push_back({d[0], x0[0], w[0]});
  }
  return wells;
}

namespace {

template <class T>
void get(const pt::ptree& t, const char* key, T& out) {
  auto raw = t.get_optional<std::string>(key);
  if (!raw) return;
  auto v = t.get_optional<T>(key);
  if (!v) throw DomainError(std::string("config: bad value for ") + key + ": '" + *raw + "'");
  out = *v;
}

void check_keys(const pt::ptree& tree, const std::string& section, std::initializer_list<const char*> keys) {
  auto sec = tree.get_child_optional(section);
  if (!sec) return;
  for (const auto& kv : *sec) {
    bool known = false;
    for (const char* k : keys) known = known || kv.first == k;
    if (!known) throw DomainError("config: unknown key [" + section + "] " + kv.first);
  }
}

}  // namespace

RunConfig load_config(const std::string& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  for (const auto& kv : tree)
    if (kv.first != "potential" && kv.first != "grid" && kv.first != "split" && kv.first != "oracle" &&
        kv.first != "region" && kv.first != "contour" && kv.first != "run")
      throw DomainError("config: unknown section [" + kv.first + "]");
  check_keys(tree, "potential",
             {"family", "c", "steepness", "wells", "table", "m0", "n0", "left_radius", "right_radius"});
  check_keys(tree, "grid", {"x_min", "x_max", "h"});
  check_keys(tree, "split", {"tau", "dk", "k_window", "edge_tol", "jet_tol", "max_points"});
  check_keys(tree, "oracle", {"x_min", "x_max", "nx", "dt", "sponge_width", "sponge_strength", "dealias"});
  check_keys(tree, "region", {"eps", "beta", "T0", "delta"});
  check_keys(tree, "contour", {"density", "circle_points", "real_max", "line_max"});
  check_keys(tree, "run", {"times", "j", "seed"});

  RunConfig c;
  c.path = path;
  try {
    const pt::ptree empty;
    const auto& p = tree.get_child("potential", empty);
    c.potential.family = family_from_string(p.get<std::string>("family", "tanh-step"));
    get(p, "c", c.potential.c);
    get(p, "steepness", c.potential.steepness);
    get(p, "m0", c.potential.m0);
    get(p, "n0", c.potential.n0);
    get(p, "left_radius", c.potential.left_radius);
    get(p, "right_radius", c.potential.right_radius);
    if (auto w = p.get_optional<std::string>("wells")) c.potential.wells = parse_wells(*w);
    if (auto tab = p.get_optional<std::string>("table")) {
      std::filesystem::path tp(*tab);
      if (tp.is_relative()) tp = std::filesystem::path(path).parent_path() / tp;
      read_table_csv(tp.string(), c.potential.table_x, c.potential.table_q);
    }
    if (c.potential.family == Family::Tabulated && c.potential.table_x.empty())
      throw DomainError("config: tabulated potential needs [potential] table");

    const auto& g = tree.get_child("grid", empty);
    get(g, "x_min", c.grid.x_min);
    get(g, "x_max", c.grid.x_max);
    get(g, "h", c.grid.h);

    const auto& s = tree.get_child("split", empty);
    get(s, "tau", c.split.tau);
    get(s, "dk", c.split.dk);
    get(s, "k_window", c.split.k_window);
    get(s, "edge_tol", c.split.edge_tol);
    get(s, "jet_tol", c.split.jet_tol);
    get(s, "max_points", c.split.max_points);
    c.split.m0 = c.potential.m0;
    c.split.n0 = c.potential.n0;

    const auto& o = tree.get_child("oracle", empty);
    get(o, "x_min", c.oracle.x_min);
    get(o, "x_max", c.oracle.x_max);
    get(o, "nx", c.oracle.nx);
    get(o, "dt", c.oracle.dt);
    get(o, "sponge_width", c.oracle.sponge_width);
    get(o, "sponge_strength", c.oracle.sponge_strength);
    get(o, "dealias", c.oracle.dealias);
    c.oracle.c = c.potential.c;

    const auto& r = tree.get_child("region", empty);
    get(r, "eps", c.region.eps);
    get(r, "beta", c.region.beta);
    get(r, "T0", c.region.T0);
    get(r, "delta", c.region.delta);

    const auto& k = tree.get_child("contour", empty);
    get(k, "density", c.contour.density);
    get(k, "circle_points", c.contour.circle_points);
    get(k, "real_max", c.contour.real_max);
    get(k, "line_max", c.contour.line_max);

    const auto& run = tree.get_child("run", empty);
    if (auto t = run.get_optional<std::string>("times")) c.times = parse_list(*t);
    get(run, "j", c.j);
    get(run, "seed", c.seed);
  } catch (const pt::ptree_bad_data& e) {
    throw DomainError(std::string("config: bad value: ") + e.what());
  }
  c.oracle.times = c.times;
  return c;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"path", c.path},
          {"potential", spec_to_json(c.potential)},
          {"grid", {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"h", c.grid.h}}},
          {"split", {{"tau", c.split.tau}, {"dk", c.split.dk}, {"k_window", c.split.k_window}}},
          {"oracle",
           {{"x_min", c.oracle.x_min}, {"x_max", c.oracle.x_max}, {"nx", c.oracle.nx}, {"dt", c.oracle.dt},
            {"sponge_width", c.oracle.sponge_width}}},
          {"region", {{"eps", c.region.eps}, {"beta", c.region.beta}, {"T0", c.region.T0}}},
          {"times", c.times},
          {"j", c.j},
          {"seed", c.seed}};
}

}  // namespace kdvlab
