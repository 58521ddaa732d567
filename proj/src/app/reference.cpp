#include "ruinrk/app/reference.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ruinrk/errors.hpp"

#ifndef RUINRK_DATA_DIR
#define RUINRK_DATA_DIR "data"
#endif

namespace ruinrk::app {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double number(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError("reference table: '" + text + "' is not a number");
  return v;
}

}  // namespace

std::size_t ReferenceTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw ConfigError("reference table has no column '" + name + "'");
}

double ReferenceTable::tolerance(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it == tolerances.end()) throw ConfigError("reference table has no tolerance '" + name + "'");
  return it->second;
}

ReferenceTable parse_reference_table(const std::string& text) {
  ReferenceTable t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream c(line.substr(1));
      std::string tag, name, value;
      if (c >> tag >> name >> value && tag == "tol") t.tolerances[name] = number(value);
      continue;
    }
    if (t.columns.empty()) {
      t.columns = split(line, ',');
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != t.columns.size()) throw ConfigError("reference table row has the wrong number of cells");
    std::vector<double> row;
    for (const auto& cell : cells) row.push_back(number(cell));
    t.rows.push_back(std::move(row));
  }
  if (t.columns.empty()) throw ConfigError("reference table has no header");
  return t;
}

ReferenceTable load_reference_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reference table " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_reference_table(buf.str());
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("RUINRK_DATA_DIR"); env && *env) return env;
  return RUINRK_DATA_DIR;
}

}  // namespace ruinrk::app
