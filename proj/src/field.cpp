#include "kdvlab/field.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "kdvlab/types.hpp"

namespace kdvlab {

namespace {

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  return errno != ERANGE || std::abs(v) < 1.0;
}

}  // namespace

void write_field_csv(const FieldGrid& f, const std::string& path) {
  std::ofstream o(path);
  if (!o) throw DomainError("cannot write " + path);
  nlohmann::json meta = f.meta;
  meta["schema"] = kFieldSchema;
  meta["provenance"] = f.provenance;
  meta["nx"] = f.x.size();
  meta["t"] = f.t;
  o << "# " << meta.dump() << '\n';
  o << (f.tagged() ? "x,t,q,region_kind,region_index\n" : "x,t,q\n");
  o.precision(15);
  for (std::size_t i = 0; i < f.t.size(); ++i)
    for (std::size_t n = 0; n < f.x.size(); ++n) {
      o << f.x[n] << ',' << f.t[i] << ',' << f.q[i][n];
      if (f.tagged()) o << ',' << f.region_kind[i][n] << ',' << f.region_index[i][n];
      o << '\n';
    }
  if (!o) throw DomainError("write failed: " + path);
}

FieldGrid read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  FieldGrid f;
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw DomainError(path + ": missing meta line");
  try {
    f.meta = nlohmann::json::parse(line.substr(2));
  } catch (const std::exception& e) {
    throw DomainError(path + ": bad meta line: " + e.what());
  }
  if (f.meta.value("schema", "") != kFieldSchema)
    throw DomainError(path + ": schema " + f.meta.value("schema", "?") + ", expected " + kFieldSchema);
  f.provenance = f.meta.value("provenance", "");
  if (!std::getline(in, line)) throw DomainError(path + ": missing header");
  const bool tagged = line.find("region_kind") != std::string::npos;

  std::map<double, std::size_t> tindex;
  std::vector<std::vector<double>> qs;
  std::vector<std::vector<std::string>> kinds;
  std::vector<std::vector<int>> idx;
  std::vector<double> xs;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string a, b, c, d, e;
    std::getline(ss, a, ',');
    std::getline(ss, b, ',');
    std::getline(ss, c, ',');
    if (tagged) {
      std::getline(ss, d, ',');
      std::getline(ss, e, ',');
    }
    double x, t, q;
    if (!parse_double(a, x) || !parse_double(b, t) || !parse_double(c, q))
      throw DomainError(path + ": bad row '" + line + "'");
    auto it = tindex.find(t);
    if (it == tindex.end()) {
      it = tindex.emplace(t, qs.size()).first;
      f.t.push_back(t);
      qs.emplace_back();
      kinds.emplace_back();
      idx.emplace_back();
    }
    const std::size_t i = it->second;
    if (i == 0) xs.push_back(x);
    else if (qs[i].size() >= xs.size() || xs[qs[i].size()] != x)
      throw DomainError(path + ": x grid differs between snapshots");
    qs[i].push_back(q);
    if (tagged) {
      kinds[i].push_back(d);
      idx[i].push_back(std::stoi(e));
    }
  }
  for (const auto& row : qs)
    if (row.size() != xs.size()) throw DomainError(path + ": ragged snapshot");
  f.x = xs;
  f.q = qs;
  if (tagged) {
    f.region_kind = kinds;
    f.region_index = idx;
  }
  return f;
}

}  // namespace kdvlab
