#include "lrsolve/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace lrsolve {

namespace {

using invariants::DriveKind;
using invariants::DriveSpec;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw std::runtime_error(origin + ": " + what);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& origin, const std::string& key,
                 const std::string& value) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    fail(origin, "key '" + key + "' has a malformed number '" + value + "'");
  }
  if (pos != value.size())
    fail(origin, "key '" + key + "' has trailing characters in '" + value + "'");
  return out;
}

int to_int(const std::string& origin, const std::string& key,
           const std::string& value) {
  const double d = to_double(origin, key, value);
  const int i = int(std::llround(d));
  if (double(i) != d) fail(origin, "key '" + key + "' must be an integer");
  return i;
}

std::vector<double> to_doubles(const std::string& origin, const std::string& key,
                               const std::string& value) {
  std::istringstream in(value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(origin, key, tok));
  return out;
}

class KeyMap {
 public:
  KeyMap(std::istream& in, std::string origin) : origin_(std::move(origin)) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        fail(origin_, "line " + std::to_string(line_no) + " is not 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) fail(origin_, "line " + std::to_string(line_no) + " has an empty key");
      if (!entries_.emplace(key, value).second)
        fail(origin_, "duplicate key '" + key + "'");
    }
  }

  bool has_prefix(const std::string& prefix) const {
    auto it = entries_.lower_bound(prefix);
    return it != entries_.end() && it->first.compare(0, prefix.size(), prefix) == 0;
  }

  std::optional<std::string> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    std::string v = it->second;
    entries_.erase(it);
    return v;
  }

  double take_double(const std::string& key, double fallback) {
    auto v = take(key);
    return v ? to_double(origin_, key, *v) : fallback;
  }

  int take_int(const std::string& key, int fallback) {
    auto v = take(key);
    return v ? to_int(origin_, key, *v) : fallback;
  }

  void finish() const {
    if (entries_.empty()) return;
    std::string keys;
    for (const auto& [k, v] : entries_) keys += (keys.empty() ? "" : ", ") + k;
    fail(origin_, "unknown keys: " + keys);
  }

  const std::string& origin() const { return origin_; }

 private:
  std::string origin_;
  std::map<std::string, std::string> entries_;
};

DriveSpec parse_drive(KeyMap& keys, const std::string& prefix) {
  const std::string origin = keys.origin();
  auto kind_str = keys.take(prefix + ".kind");
  if (!kind_str) fail(origin, "missing key '" + prefix + ".kind'");

  DriveSpec d;
  if (*kind_str == "constant")
    d.kind = DriveKind::constant;
  else if (*kind_str == "linear_ramp")
    d.kind = DriveKind::linear_ramp;
  else if (*kind_str == "sinusoid")
    d.kind = DriveKind::sinusoid;
  else if (*kind_str == "tabulated")
    d.kind = DriveKind::tabulated;
  else
    fail(origin, "unknown drive kind '" + *kind_str + "'");

  d.amplitude = keys.take_double(prefix + ".amplitude", 0.0);
  d.slope = keys.take_double(prefix + ".slope", 0.0);
  d.frequency = keys.take_double(prefix + ".frequency", 0.0);
  d.phase = keys.take_double(prefix + ".phase", 0.0);
  if (auto table = keys.take(prefix + ".table")) {
    std::istringstream in(*table);
    std::string tok;
    while (in >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos)
        fail(origin, "key '" + prefix + ".table' entries must be time:value");
      d.table.emplace_back(to_double(origin, prefix + ".table", tok.substr(0, colon)),
                           to_double(origin, prefix + ".table", tok.substr(colon + 1)));
    }
  }
  d.validate();
  return d;
}

bool divides(double small, double big, long long& ratio) {
  if (!(small > 0.0) || !(big > 0.0)) return false;
  ratio = std::llround(big / small);
  return ratio >= 1 && std::abs(double(ratio) * small - big) <= 1e-9 * big;
}

}  // namespace

void Tolerances::scale_all(double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("tolerance scale must be positive");
  fidelity *= factor;
  phase *= factor;
  eigen_residual *= factor;
  norm_drift *= factor;
  coefficient_tail *= factor;
}

gridstates::Grid Scenario::make_grid() const {
  return gridstates::Grid::make(grid_n, grid_length);
}

std::vector<double> Scenario::record_times() const {
  if (t1 == t0) return {t0};
  const auto n = std::llround((t1 - t0) / dt_record);
  std::vector<double> times;
  times.reserve(std::size_t(n) + 1);
  for (long long i = 0; i < n; ++i) times.push_back(t0 + double(i) * dt_record);
  times.push_back(t1);
  return times;
}

void Scenario::validate() const {
  const std::string origin = name.empty() ? std::string("scenario") : name;
  if (name.empty()) fail(origin, "missing name");
  if (!(model.mass > 0.0)) fail(origin, "mass must be positive");
  model.drive.validate();
  if (model.omega) model.omega->validate();
  if (t1 < t0) fail(origin, "t1 must be >= t0");

  if (!(ode_step > 0.0) || !(fine_step > 0.0) || !(dt_record > 0.0) ||
      !(oracle_dt > 0.0))
    fail(origin, "all step sizes must be positive");

  long long ratio = 0;
  if (!divides(ode_step, fine_step, ratio) || ratio % 2 != 0)
    fail(origin, "phase.fine_step must be an even multiple of ode.step");
  if (!divides(fine_step, dt_record, ratio))
    fail(origin, "dt_record must be a multiple of phase.fine_step");
  if (t1 > t0 && !divides(dt_record, t1 - t0, ratio))
    fail(origin, "the window t1 - t0 must be a multiple of dt_record");
  if (!(offset_delta > 0.0) || offset_delta > 0.5 * fine_step)
    fail(origin, "derivative.delta must lie in (0, fine_step/2]");

  const gridstates::Grid grid = make_grid();  // validates n and length
  if (n_max < 0) fail(origin, "n_max must be >= 0");
  const int resolvable = gridstates::max_resolvable_hermite(grid, 0.9);
  if (n_max > resolvable)
    fail(origin, "n_max = " + std::to_string(n_max) +
                     " exceeds what the grid resolves (" +
                     std::to_string(resolvable) + ")");
  if (basis_size < 32 || basis_size <= n_max)
    fail(origin, "basis.size must be at least 32 and exceed n_max");

  if (!(tol.fidelity > 0.0) || !(tol.phase > 0.0) || !(tol.eigen_residual > 0.0) ||
      !(tol.norm_drift > 0.0) || !(tol.coefficient_tail > 0.0))
    fail(origin, "tolerances must be positive");
}

Scenario parse_scenario(std::istream& in, const std::string& origin) {
  KeyMap keys(in, origin);
  Scenario sc;

  if (auto v = keys.take("name")) sc.name = *v;
  sc.model.mass = keys.take_double("mass", 1.0);
  if (keys.has_prefix("drive."))
    sc.model.drive = parse_drive(keys, "drive");
  if (keys.has_prefix("omega."))
    sc.model.omega = parse_drive(keys, "omega");

  sc.t0 = keys.take_double("t0", 0.0);
  sc.t1 = keys.take_double("t1", 1.0);
  sc.ode_step = keys.take_double("ode.step", sc.ode_step);
  sc.fine_step = keys.take_double("phase.fine_step", sc.fine_step);
  sc.dt_record = keys.take_double("dt_record", sc.dt_record);
  sc.oracle_dt = keys.take_double("oracle.dt", sc.oracle_dt);
  sc.offset_delta = keys.take_double("derivative.delta", sc.offset_delta);
  sc.grid_n = keys.take_int("grid.n_points", sc.grid_n);
  sc.grid_length = keys.take_double("grid.L", sc.grid_length);
  sc.n_max = keys.take_int("n_max", sc.n_max);
  sc.basis_size = keys.take_int("basis.size", sc.basis_size);

  if (auto v = keys.take("quad_seed")) {
    const auto vals = to_doubles(origin, "quad_seed", *v);
    if (vals.size() != 6) fail(origin, "quad_seed needs 6 numbers");
    std::copy(vals.begin(), vals.end(), sc.quad_seed.begin());
  }
  if (auto v = keys.take("linear_seed")) {
    const auto vals = to_doubles(origin, "linear_seed", *v);
    if (vals.size() != 3) fail(origin, "linear_seed needs 3 numbers");
    std::copy(vals.begin(), vals.end(), sc.linear_seed.begin());
  }

  sc.tol.fidelity = keys.take_double("tolerance.fidelity", sc.tol.fidelity);
  sc.tol.phase = keys.take_double("tolerance.phase", sc.tol.phase);
  sc.tol.eigen_residual =
      keys.take_double("tolerance.eigen_residual", sc.tol.eigen_residual);
  sc.tol.norm_drift = keys.take_double("tolerance.norm_drift", sc.tol.norm_drift);
  sc.tol.coefficient_tail =
      keys.take_double("tolerance.coefficient_tail", sc.tol.coefficient_tail);

  keys.finish();
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  return parse_scenario(in, path);
}

}  // namespace lrsolve
