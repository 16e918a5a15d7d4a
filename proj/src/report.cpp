#include "lrsolve/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

namespace lrsolve::report {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error(what);
}

}  // namespace

Check Check::at_most(std::string name, double measured, double budget,
                     std::string detail) {
  Check c;
  c.name = std::move(name);
  c.measured = measured;
  c.budget = budget;
  c.direction = "<=";
  c.passed = measured <= budget;
  c.detail = std::move(detail);
  return c;
}

Check Check::at_least(std::string name, double measured, double floor,
                      std::string detail) {
  Check c;
  c.name = std::move(name);
  c.measured = measured;
  c.budget = floor;
  c.direction = ">=";
  c.passed = measured >= floor;
  c.detail = std::move(detail);
  return c;
}

Check Check::exceeds(std::string name, double measured, double budget,
                     std::string detail) {
  Check c;
  c.name = std::move(name);
  c.measured = measured;
  c.budget = budget;
  c.direction = ">";
  c.passed = measured > budget;
  c.detail = std::move(detail);
  return c;
}

bool Report::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

void Report::add(Check c) { checks.push_back(std::move(c)); }

std::string Report::to_json() const {
  ordered_json j;
  j["tool"] = "lrsolve";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["scenario"] = scenario;
  j["seeds"] = seeds;
  j["passed"] = passed();
  ordered_json arr = ordered_json::array();
  for (const auto& c : checks) {
    ordered_json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["measured"] = format_float(c.measured);
    e["budget"] = format_float(c.budget);
    e["direction"] = c.direction;
    e["detail"] = c.detail;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  return j.dump(2) + "\n";
}

Report Report::from_json_text(const std::string& text,
                              const std::string& origin) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    fail(origin + ": not a valid report (malformed JSON)");
  Report r;
  try {
    r.command = j.at("command").get<std::string>();
    r.scenario = j.at("scenario").get<std::string>();
    if (j.contains("seeds"))
      r.seeds = j.at("seeds").get<std::vector<std::string>>();
    for (const auto& e : j.at("checks")) {
      Check c;
      c.name = e.at("name").get<std::string>();
      c.passed = e.at("passed").get<bool>();
      c.measured = std::stod(e.at("measured").get<std::string>());
      c.budget = std::stod(e.at("budget").get<std::string>());
      c.direction = e.value("direction", "<=");
      c.detail = e.value("detail", "");
      r.checks.push_back(std::move(c));
    }
  } catch (const ordered_json::exception& e) {
    fail(origin + ": not a valid report (" + e.what() + ")");
  }
  return r;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) fail("failed writing " + path.string());
}

Report read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return Report::from_json_text(text, path.string());
}

Report merge(std::span<const Report> inputs) {
  Report out;
  out.command = "report-merge";
  out.scenario = "";
  for (const auto& r : inputs) {
    const std::string prefix =
        (r.scenario.empty() ? r.command : r.scenario) + "/";
    for (const auto& s : r.seeds) out.seeds.push_back(prefix + s);
    for (Check c : r.checks) {
      c.name = prefix + c.name;
      out.checks.push_back(std::move(c));
    }
  }
  return out;
}

std::string format_float(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path,
                     std::span<const std::string> columns)
    : path_(std::move(path)), columns_(columns.size()) {
  if (columns_ == 0) fail("CSV needs at least one column");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i > 0) buffer_ += ',';
    buffer_ += columns[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (closed_) fail("CSV writer already closed: " + path_.string());
  if (values.size() != columns_)
    fail("CSV row width mismatch in " + path_.string());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) buffer_ += ',';
    buffer_ += format_float(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  write_text(path_, buffer_);
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
    // Destructors must not throw; an explicit close() reports errors.
  }
}

}  // namespace lrsolve::report
