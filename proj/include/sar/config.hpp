#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "sar/errors.hpp"
#include "sar/scenarios.hpp"

namespace sar::config {

/// Parse or field error; `line()` is 1-based, 0 when the error is not tied to a line.
class ConfigError : public Error
{
public:
  ConfigError(const std::string& what, int line = 0)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
  {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

struct Value;
using Array = std::vector<Value>;

struct Value
{
  std::variant<double, bool, std::string, Array> data;
  int line = 0;
};

/// section -> key -> value. Keys before the first [section] live under "".
using Document = std::map<std::string, std::map<std::string, Value>>;

/// Reads the TOML subset used by scenario files: [sections], `key = value`,
/// numbers, booleans, double-quoted strings, (nested, multi-line) arrays, `#` comments.
Document parse(const std::string& text);

/// Builds a scenario from a parsed document. Node and edge indices are 1-based in the file.
Scenario scenario_from_document(const Document& doc);

Scenario load_scenario(const std::string& path);

/// Writes a scenario as an editable config. Numbers use the shortest round-trip form.
void write_scenario(std::ostream& out, const Scenario& scenario);

void save_scenario(const std::string& path, const Scenario& scenario);

/// Shortest decimal string that parses back to exactly `x`.
std::string format_number(double x);

} // namespace sar::config
