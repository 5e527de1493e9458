#include "fuzzy_casimir/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace fuzzy_casimir::cli {

std::string format_double(double v) {
  if (!std::isfinite(v)) {
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
  }
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
  return {buf.data(), ptr};
}

bool Report::all_checks_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

namespace {

std::string cell_text(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<V, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<V, bool>) {
          return v ? "true" : "false";
        } else {
          return v;
        }
      },
      c);
}

Json cell_json(const Cell& c) {
  return std::visit([](const auto& v) { return Json(v); }, c);
}

}  // namespace

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

Json to_json(const Report& report) {
  Json doc = Json::object();
  doc["schema"] = kSchemaVersion;
  doc["meta"] = {{"subcommand", report.subcommand},
                 {"lambda", report.lambda},
                 {"parameters", report.parameters},
                 {"versions", {{"schema", kSchemaVersion}, {"fuzzy_casimir", kToolVersion}}}};
  Json rows = Json::array();
  for (const auto& row : report.table_in_json ? report.table.rows : std::vector<std::vector<Cell>>{}) {
    Json r = Json::object();
    for (std::size_t i = 0; i < row.size() && i < report.table.columns.size(); ++i) {
      r[report.table.columns[i]] = cell_json(row[i]);
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back(
        {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  doc["checks"] = std::move(checks);
  doc["warnings"] = report.warnings;
  for (const auto& [key, value] : report.extra.items()) doc[key] = value;
  return doc;
}

std::string render(const Report& report, OutputFormat format) {
  if (format == OutputFormat::Csv) return to_csv(report.table);
  return to_json(report).dump(2) + "\n";
}

}  // namespace fuzzy_casimir::cli
