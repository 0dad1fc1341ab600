#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "degenlab/geometry.hpp"

namespace degenlab {

// 17 significant digits in the C locale; round-trips any finite double.
std::string format_g17(double v);

// Writes to <path>.tmp.<pid> and renames over the target, so a reader never
// observes a partial file. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& contents);

// Precedence: explicit flag value, then $DEGENLAB_OUT, then ".".
std::string resolve_output_dir(const std::string& flag_value);

// Geometry spec strings, also accepted as the "geometry" field of JSON
// configs and echoed back in every report:
//   "Fks:K,SIGMA"   "Dsigma:SIGMA"   "finite:ALPHA"   "constant[:F0]"
// Throws std::invalid_argument on malformed input.
Geometry parse_geometry(const std::string& text);

// JSON object form {"family": ..., "k", "sigma", "alpha", "f0", "R"};
// family in {"power_log", "inverse_power", "finite_type", "constant"}.
// Unknown keys and parameters foreign to the family are rejected.
Geometry parse_geometry_json(const std::string& json_text);

// CSV artifacts: comma delimiter, '.' decimal point, no locale dependence.

struct VolumeRow {
  std::string geometry;
  int n = 2;
  double x1 = 0.0;
  double r = 0.0;
  std::string regime;
  double analytic = 0.0;
  double numeric = 0.0;
  double ratio = 0.0;
};
std::string volume_csv(const std::vector<VolumeRow>& rows);

struct InequalityCsvRow {
  std::string inequality;
  std::string geometry;
  double x1 = 0.0;
  double r = 0.0;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double implied_constant = 0.0;
  bool applicable = true;
};
std::string inequality_csv(const std::vector<InequalityCsvRow>& rows);

struct FieldCsvRow {
  int i = 0;
  int j = 0;
  double x1 = 0.0;
  double x2 = 0.0;
  double u = 0.0;
};
std::string field_csv(const std::vector<FieldCsvRow>& rows);

// Two-column whitespace-separated plot data with a '#'-prefixed header line.
std::string plot_data(const std::string& xlabel, const std::string& ylabel,
                      const std::vector<double>& xs,
                      const std::vector<double>& ys);

// Minimal JSON emission helpers (RFC 8259 string escaping; numbers via
// format_g17). Reports assembled from these re-parse as JSON.
std::string json_escape(const std::string& s);

// True when the text parses as a JSON document; used by the round-trip
// check on emitted reports.
bool is_valid_json(const std::string& text);

}  // namespace degenlab
