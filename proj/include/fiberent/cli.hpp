#pragma once

// Command-line front end: run configurations (JSON), commands, and the CSV /
// SVG writers they use.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fiberent/analysis.hpp"
#include "fiberent/channels.hpp"
#include "fiberent/oracle.hpp"
#include "fiberent/states.hpp"

namespace fiberent::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitIo = 4,
};

/// Schema violation in a run configuration; the message names the field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One curve of a sweep: a complete network plus the parameter it scans.
struct SweepSeries {
  std::string label;
  StateKind kind = StateKind::Ghz;
  NetworkConfig network;
  ScanTarget scan;
};

struct SweepSpec {
  std::vector<double> grid;
  std::vector<SweepSeries> series;
};

struct EsdSpec {
  ScanTarget scan;
  std::optional<double> lo;
  std::optional<double> hi;
  double limit = 50.0;
};

struct RunConfig {
  StateKind state = StateKind::Ghz;
  NetworkConfig network;
  std::optional<SweepSpec> sweep;
  std::optional<EsdSpec> esd;
  std::optional<oracle::FrequencyGrid> oracle_grid;

  std::size_t n_qubits() const noexcept { return network.n_qubits; }
};

/// Parse and validate a configuration document (JSON text).
RunConfig parse_run_config(const std::string& text);

/// Read a configuration file; IoError when unreadable.
RunConfig load_run_config(const std::string& path);

/// Fixed formatting used by every CSV writer: 12 significant digits.
std::string format_number(double value);

/// "C_01", "C_12", ... ("C_3_11" once an index needs two digits).
std::string pair_column(std::size_t i, std::size_t j);

std::string csv_header(std::size_t n_qubits, bool with_param);
std::string csv_row(const MetricsReport& report, bool dsf, std::optional<double> param);
std::string sweep_csv(const SweepResult& result, std::size_t n_qubits);

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Single-panel line chart, one polyline per series.
std::string render_svg(const std::vector<SvgSeries>& series, const std::string& x_label, const std::string& y_label);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fiberent::cli
