#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ruinrk::app {

/// Published reference columns stored as CSV with `#` comment lines and
/// `# tol <name> <value>` tolerance lines.
struct ReferenceTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::map<std::string, double> tolerances;

  std::size_t column(const std::string& name) const;
  double at(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }
  double tolerance(const std::string& name) const;
};

ReferenceTable parse_reference_table(const std::string& text);
ReferenceTable load_reference_table(const std::filesystem::path& path);

/// $RUINRK_DATA_DIR when set, otherwise the data directory of the source tree.
std::filesystem::path default_data_dir();

}  // namespace ruinrk::app
