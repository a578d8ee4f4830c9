#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "kdvlab/kdv_oracle.hpp"
#include "kdvlab/model.hpp"
#include "kdvlab/potentials.hpp"
#include "kdvlab/reflsplit.hpp"
#include "kdvlab/rhp.hpp"

namespace kdvlab {

// INI file with sections [potential] [grid] [split] [oracle] [region] [contour] [run].
// Wells are written "depth:center:width, ...".
struct RunConfig {
  std::string path;
  PotentialSpec potential;
  GridParams grid;
  SplitConfig split;
  SolverConfig oracle;
  RegionConfig region;
  ContourOptions contour;
  std::vector<double> times{5.0, 10.0, 20.0, 40.0};
  int j = 0;
  unsigned seed = 12345;
};

RunConfig load_config(const std::string& path);
std::vector<double> parse_list(const std::string& s);
std::vector<Well> parse_wells(const std::string& s);
nlohmann::json to_json(const RunConfig& c);

}  // namespace kdvlab
