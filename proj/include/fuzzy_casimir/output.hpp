#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace fuzzy_casimir::cli {

enum class OutputFormat { Csv, Json };

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, std::int64_t, std::string, bool>;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Everything a subcommand emits. CSV carries only the table; JSON carries
/// {schema, meta, rows, checks, warnings} plus optional extra fields.
struct Report {
  std::string subcommand;
  double lambda = 0.0;
  Json parameters = Json::object();
  Table table;
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  Json extra = Json::object();
  bool table_in_json = true;  ///< false when the table only mirrors `checks`

  bool all_checks_pass() const;
};

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

/// Header row plus one line per row, comma separated, LF endings.
std::string to_csv(const Table& table);
Json to_json(const Report& report);
std::string render(const Report& report, OutputFormat format);

}  // namespace fuzzy_casimir::cli
