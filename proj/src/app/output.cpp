#include "ruinrk/app/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "ruinrk/errors.hpp"

namespace ruinrk::app {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

namespace {

std::string csv_value(const Json& v) {
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

Json number_or_string(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

void write_csv(const Report& report, std::ostream& out) {
  out << "# command: " << report.command << '\n';
  for (const auto& [key, value] : report.config.items()) out << "# config." << key << ": " << csv_value(value) << '\n';
  for (const auto& [key, value] : report.metadata.items()) out << "# " << key << ": " << csv_value(value) << '\n';
  out << "u,psi,survival,method,h,extra\n";
  for (const Row& r : report.rows) {
    std::string extra;
    for (const auto& [key, value] : r.extra) {
      if (!extra.empty()) extra += ';';
      extra += key + "=" + csv_value(value);
    }
    out << format_number(r.u) << ',' << format_number(r.psi) << ',' << format_number(1.0 - r.psi) << ','
        << csv_escape(r.method) << ',' << format_number(r.h) << ',' << csv_escape(extra) << '\n';
  }
}

Json to_json(const Report& report) {
  Json j;
  j["command"] = report.command;
  j["config"] = report.config;
  Json rows = Json::array();
  for (const Row& r : report.rows) {
    Json row;
    row["u"] = number_or_string(r.u);
    row["psi"] = number_or_string(r.psi);
    row["survival"] = number_or_string(1.0 - r.psi);
    row["method"] = r.method;
    row["h"] = r.h;
    for (const auto& [key, value] : r.extra) row[key] = value;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["metadata"] = report.metadata;
  return j;
}

void write_json(const Report& report, std::ostream& out) { out << to_json(report).dump(2) << '\n'; }

void emit(const Report& report, Format format, const std::optional<std::filesystem::path>& path) {
  auto write = [&](std::ostream& os) {
    if (format == Format::csv) {
      write_csv(report, os);
    } else {
      write_json(report, os);
    }
  };
  if (!path || path->empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(*path);
  if (!file) throw ConfigError("cannot open output file " + path->string());
  write(file);
  if (!file) throw Error("failed writing " + path->string());
}

}  // namespace ruinrk::app
