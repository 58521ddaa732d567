#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ruinrk/app/config.hpp"

namespace ruinrk::app {

using Json = nlohmann::ordered_json;

struct Row {
  double u = 0.0;
  double psi = 0.0;
  std::string method;
  double h = 0.0;
  std::vector<std::pair<std::string, Json>> extra;
};

struct Report {
  std::string command;
  Json config = Json::object();
  std::vector<Row> rows;
  Json metadata = Json::object();
};

/// Shortest decimal string that parses back to the same double.
std::string format_number(double x);

/// CSV: `# key: value` metadata lines, then `u,psi,survival,method,h,extra`;
/// extra holds `key=value` pairs separated by ';'.
void write_csv(const Report& report, std::ostream& out);
/// JSON object with `config`, `rows` and `metadata`.
void write_json(const Report& report, std::ostream& out);
Json to_json(const Report& report);

/// Writes to `path`, or stdout when empty.
void emit(const Report& report, Format format, const std::optional<std::filesystem::path>& path);

}  // namespace ruinrk::app
