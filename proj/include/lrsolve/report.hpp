#pragma once

// Machine-readable run reports and CSV artifacts.  Reports carry one entry
// per check (name, measured value, budget, direction, pass flag) plus enough
// context (tool version, scenario echo, seeds) to reproduce the run.  Output
// is deterministic: no timestamps, no hostnames, fixed field order, floats
// serialized with 17 significant digits.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace lrsolve::report {

inline constexpr const char* kToolVersion = "1.0.0";

// One verification check.  `passed` is stored explicitly because a few
// checks pass when the measurement *exceeds* the budget (non-closure
// witnesses); `direction` records which way the comparison went.
struct Check {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double budget = 0.0;
  std::string direction = "<=";  // "<=" or ">"
  std::string detail;            // where the budget comes from, context

  static Check at_most(std::string name, double measured, double budget,
                       std::string detail = {});
  static Check at_least(std::string name, double measured, double floor,
                        std::string detail = {});
  // Pass when `measured` exceeds `budget` (e.g. a non-closure witness).
  static Check exceeds(std::string name, double measured, double budget,
                       std::string detail = {});
};

struct Report {
  std::string command;                // subcommand that produced the report
  std::string scenario;               // scenario name, empty if none
  std::vector<std::string> seeds;     // seed echoes, "label: values"
  std::vector<Check> checks;

  bool passed() const;
  void add(Check c);

  std::string to_json() const;        // deterministic, 2-space indent
  static Report from_json_text(const std::string& text,
                               const std::string& origin);
};

void write_text(const std::filesystem::path& path, const std::string& text);
Report read_report(const std::filesystem::path& path);

// Concatenates the inputs' checks, prefixing each check name with the
// originating scenario (or command) so every check appears exactly once.
Report merge(std::span<const Report> inputs);

// Formats a double with 17 significant digits (round-trip exact).
std::string format_float(double value);

// Column-oriented CSV writer: fixed header, every value via format_float.
class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, std::span<const std::string> columns);
  void row(std::span<const double> values);
  void close();  // flushes and renames into place; called by destructor
  ~CsvWriter();

  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

 private:
  std::filesystem::path path_;
  std::size_t columns_ = 0;
  std::string buffer_;
  bool closed_ = false;
};

}  // namespace lrsolve::report
