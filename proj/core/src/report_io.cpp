#include "degenlab/report_io.hpp"

#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace degenlab {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  std::string tmp = path + ".tmp." + std::to_string(static_cast<long>(getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(contents.data(),
              static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    int err = errno;
    std::remove(tmp.c_str());
    throw std::runtime_error("rename " + tmp + " -> " + path + ": " +
                             std::strerror(err));
  }
}

std::string resolve_output_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("DEGENLAB_OUT"); env && *env) return env;
  return ".";
}

namespace {

double parse_number(const std::string& text, const std::string& what) {
  const char* s = text.c_str();
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0' || errno == ERANGE)
    throw std::invalid_argument("bad " + what + ": '" + text + "'");
  return v;
}

}  // namespace

Geometry parse_geometry(const std::string& text) {
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  std::string args =
      colon == std::string::npos ? std::string() : text.substr(colon + 1);

  if (head == "Fks") {
    auto comma = args.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("Fks needs 'Fks:K,SIGMA', got '" + text +
                                  "'");
    double kd = parse_number(args.substr(0, comma), "Fks depth");
    int k = static_cast<int>(kd);
    if (k != kd || k < 0)
      throw std::invalid_argument("Fks depth must be a small nonnegative "
                                  "integer, got '" + args + "'");
    return Geometry::power_log(k, parse_number(args.substr(comma + 1),
                                               "Fks sigma"));
  }
  if (head == "Dsigma") {
    if (args.empty()) throw std::invalid_argument("Dsigma needs a value");
    return Geometry::inverse_power(parse_number(args, "Dsigma value"));
  }
  if (head == "finite") {
    if (args.empty()) throw std::invalid_argument("finite needs a value");
    return Geometry::finite_type(parse_number(args, "finite exponent"));
  }
  if (head == "constant") {
    if (args.empty()) return Geometry::constant();
    return Geometry::constant(parse_number(args, "constant level"));
  }
  throw std::invalid_argument("unknown geometry '" + text +
                              "' (expected Fks:K,SIGMA, Dsigma:SIGMA, "
                              "finite:ALPHA or constant[:F0])");
}

Geometry parse_geometry_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("geometry config: ") + e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument("geometry config must be a JSON object");

  static const char* known[] = {"family", "k", "sigma", "alpha", "f0", "R"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* key : known) ok = ok || it.key() == key;
    if (!ok)
      throw std::invalid_argument("geometry config: unknown key '" +
                                  it.key() + "'");
  }
  if (!j.contains("family"))
    throw std::invalid_argument("geometry config: missing 'family'");
  std::string family = j.at("family").get<std::string>();
  double R = j.value("R", Geometry::kDefaultR);

  auto reject = [&](const char* key) {
    if (j.contains(key))
      throw std::invalid_argument("geometry config: key '" + std::string(key) +
                                  "' does not apply to family '" + family +
                                  "'");
  };

  if (family == "power_log") {
    reject("alpha");
    reject("f0");
    if (!j.contains("k") || !j.contains("sigma"))
      throw std::invalid_argument("power_log needs 'k' and 'sigma'");
    return Geometry::power_log(j.at("k").get<int>(),
                               j.at("sigma").get<double>(), R);
  }
  if (family == "inverse_power") {
    reject("k");
    reject("alpha");
    reject("f0");
    if (!j.contains("sigma"))
      throw std::invalid_argument("inverse_power needs 'sigma'");
    return Geometry::inverse_power(j.at("sigma").get<double>(), R);
  }
  if (family == "finite_type") {
    reject("k");
    reject("sigma");
    reject("f0");
    if (!j.contains("alpha"))
      throw std::invalid_argument("finite_type needs 'alpha'");
    return Geometry::finite_type(j.at("alpha").get<double>(), R);
  }
  if (family == "constant") {
    reject("k");
    reject("sigma");
    reject("alpha");
    return Geometry::constant(j.value("f0", 1.0), R);
  }
  throw std::invalid_argument("geometry config: unknown family '" + family +
                              "'");
}

namespace {

// RFC 4180 quoting; geometry labels carry commas ("Fks:3,0.5").
void append_csv_field(std::string& out, const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) {
    out += s;
    return;
  }
  out += '"';
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
}

}  // namespace

std::string volume_csv(const std::vector<VolumeRow>& rows) {
  std::string out = "geometry,n,x1,r,regime,analytic,numeric,ratio\n";
  for (const auto& row : rows) {
    append_csv_field(out, row.geometry);
    out += ',' + std::to_string(row.n);
    out += ',' + format_g17(row.x1);
    out += ',' + format_g17(row.r);
    out += ',' + row.regime;
    out += ',' + format_g17(row.analytic);
    out += ',' + format_g17(row.numeric);
    out += ',' + format_g17(row.ratio);
    out += '\n';
  }
  return out;
}

std::string inequality_csv(const std::vector<InequalityCsvRow>& rows) {
  std::string out =
      "inequality,geometry,x1,r,seed,lhs,rhs,implied_constant,applicable\n";
  for (const auto& row : rows) {
    append_csv_field(out, row.inequality);
    out += ',';
    append_csv_field(out, row.geometry);
    out += ',' + format_g17(row.x1);
    out += ',' + format_g17(row.r);
    out += ',' + std::to_string(row.seed);
    out += ',' + format_g17(row.lhs);
    out += ',' + format_g17(row.rhs);
    out += ',' + format_g17(row.implied_constant);
    out += ',';
    out += row.applicable ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::string field_csv(const std::vector<FieldCsvRow>& rows) {
  std::string out = "i,j,x1,x2,u\n";
  for (const auto& row : rows) {
    out += std::to_string(row.i);
    out += ',' + std::to_string(row.j);
    out += ',' + format_g17(row.x1);
    out += ',' + format_g17(row.x2);
    out += ',' + format_g17(row.u);
    out += '\n';
  }
  return out;
}

std::string plot_data(const std::string& xlabel, const std::string& ylabel,
                      const std::vector<double>& xs,
                      const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw std::invalid_argument("plot_data: column length mismatch");
  std::string out = "# " + xlabel + " " + ylabel + "\n";
  for (std::size_t i = 0; i < xs.size(); ++i)
    out += format_g17(xs[i]) + " " + format_g17(ys[i]) + "\n";
  return out;
}

std::string json_escape(const std::string& s) {
  return nlohmann::json(s).dump();
}

bool is_valid_json(const std::string& text) {
  return nlohmann::json::accept(text);
}

}  // namespace degenlab
