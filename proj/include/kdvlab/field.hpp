#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace kdvlab {

// Snapshots q(x, t_i) on a common x grid.  Region tags are only present for
// asymptotic fields.  The CSV starts with one "# {json}" line carrying meta.
struct FieldGrid {
  std::string provenance;  // "oracle" or "asymptotic"
  std::vector<double> x, t;
  std::vector<std::vector<double>> q;  // q[i][n] = q(x_n, t_i)
  std::vector<std::vector<std::string>> region_kind;
  std::vector<std::vector<int>> region_index;
  nlohmann::json meta = nlohmann::json::object();

  bool tagged() const { return !region_kind.empty(); }
};

inline constexpr const char* kFieldSchema = "kdvlab.field/1";

void write_field_csv(const FieldGrid& f, const std::string& path);
// Throws DomainError on malformed files or a schema mismatch.
FieldGrid read_field_csv(const std::string& path);

}  // namespace kdvlab
