#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "degenlab/classifier.hpp"
#include "degenlab/field.hpp"
#include "degenlab/geometry.hpp"
#include "degenlab/grid_oracle.hpp"
#include "degenlab/inequalities.hpp"
#include "degenlab/metric.hpp"
#include "degenlab/report_io.hpp"
#include "degenlab/solver.hpp"
#include "degenlab/suite.hpp"

namespace dl = degenlab;
using nlohmann::json;

namespace {

int g_exit = 0;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

dl::Geometry resolve_geometry(const std::string& spec,
                              const std::string& json_file) {
  if (!json_file.empty()) return dl::parse_geometry_json(read_text_file(json_file));
  if (spec.empty()) {
    throw std::invalid_argument("need --geometry or --geometry-config");
  }
  return dl::parse_geometry(spec);
}

void emit(const std::string& dir, const std::string& name,
          const std::string& contents) {
  const std::string path = dir + "/" + name;
  dl::write_file_atomic(path, contents);
  std::printf("wrote %s\n", path.c_str());
}

void emit_json(const std::string& dir, const std::string& name,
               const json& doc) {
  emit(dir, name, doc.dump(2) + "\n");
}

std::function<double(double, double)> make_boundary(const std::string& name,
                                                    double x1_lo, double x1_hi,
                                                    double x2_lo,
                                                    double x2_hi) {
  if (name == "x1") return [](double a, double) { return a; };
  if (name == "x2") return [](double, double b) { return b; };
  if (name == "saddle") return [](double a, double b) { return a * a - b * b; };
  if (name.rfind("bilinear:", 0) == 0) {
    const std::uint64_t seed = std::stoull(name.substr(9));
    return dl::random_bilinear_function(x1_lo, x1_hi, x2_lo, x2_hi, seed);
  }
  throw std::invalid_argument("unknown boundary '" + name +
                              "' (use x1, x2, saddle or bilinear:SEED)");
}

// JSON run configs mirror the long flags one-to-one: {"x1": 0.2} acts as
// "--x1 0.2". Unknown keys surface as unknown options during parsing.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> out;
  for (int i = 1; i < argc; ++i) {
    const std::string tok = argv[i];
    if (tok != "--config") {
      out.push_back(tok);
      continue;
    }
    if (i + 1 >= argc) throw std::invalid_argument("--config needs a file");
    const json cfg = json::parse(read_text_file(argv[++i]));
    if (!cfg.is_object()) {
      throw std::invalid_argument("config must be a JSON object");
    }
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      auto push_scalar = [&](const json& v) {
        out.push_back("--" + it.key());
        if (v.is_string()) {
          out.push_back(v.get<std::string>());
        } else if (v.is_number_integer()) {
          out.push_back(std::to_string(v.get<long long>()));
        } else if (v.is_number_unsigned()) {
          out.push_back(std::to_string(v.get<unsigned long long>()));
        } else if (v.is_number_float()) {
          out.push_back(dl::format_g17(v.get<double>()));
        } else if (v.is_boolean()) {
          if (!v.get<bool>()) out.pop_back();  // false = flag absent
        } else {
          throw std::invalid_argument("config key '" + it.key() +
                                      "': unsupported value type");
        }
      };
      if (it.value().is_array()) {
        for (const json& v : it.value()) push_scalar(v);
      } else {
        push_scalar(it.value());
      }
    }
  }
  return out;
}

const char* kConditionNames[5] = {
    "(1) F -> +inf at 0+",
    "(2) F' < 0 and F'' > 0",
    "(3) |F'| doubling bound",
    "(4) 1/(-xF') nondecreasing with -xF' >= epsilon",
    "(5) xF''/(-F') comparable to 1",
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "numerical laboratory for infinitely degenerate elliptic operators"};
  app.require_subcommand(1);

  // ---- audit ----
  struct {
    std::string geometry, geometry_config, out;
    double a = 1e-6, b = 0.4;
    dl::StructureAuditConfig cfg;
  } au;
  {
    auto* sub = app.add_subcommand("audit", "check the structure conditions");
    sub->add_option("--geometry", au.geometry, "geometry spec string");
    sub->add_option("--geometry-config", au.geometry_config,
                    "JSON file with the geometry object");
    sub->add_option("--a", au.a, "left end of the audited interval");
    sub->add_option("--b", au.b, "right end of the audited interval");
    sub->add_option("--samples", au.cfg.sample_count, "geometric samples");
    sub->add_option("--epsilon", au.cfg.epsilon, "lower bound on -xF'");
    sub->add_option("--doubling", au.cfg.doubling_C, "doubling constant");
    sub->add_option("--comparability", au.cfg.comparability,
                    "band for xF''/(-F')");
    sub->add_option("--tol", au.cfg.tolerance, "relative slack");
    sub->add_option("--out", au.out, "output directory");
    sub->callback([&] {
      const dl::Geometry g = resolve_geometry(au.geometry, au.geometry_config);
      const dl::AuditReport rep =
          dl::audit_structure_conditions(g, au.a, au.b, au.cfg);
      json doc{{"geometry", g.label()},
               {"interval", {au.a, au.b}},
               {"overall", rep.overall}};
      for (int i = 0; i < 5; ++i) {
        doc["conditions"].push_back({{"name", kConditionNames[i]},
                                     {"pass", rep.conditions[i].pass},
                                     {"witness_x", rep.conditions[i].witness_x},
                                     {"note", rep.conditions[i].note}});
        std::printf("%s: %s%s%s\n", kConditionNames[i],
                    rep.conditions[i].pass ? "pass" : "FAIL",
                    rep.conditions[i].note.empty() ? "" : " - ",
                    rep.conditions[i].note.c_str());
      }
      emit_json(dl::resolve_output_dir(au.out), "audit.json", doc);
      if (!rep.overall) g_exit = 1;
    });
  }

  // ---- geodesic ----
  struct {
    std::string geometry, geometry_config, out;
    double x1 = 0.2, r = 0.03125;
  } ge;
  {
    auto* sub = app.add_subcommand(
        "geodesic", "turning offset, bounding parameter and ball height");
    sub->add_option("--geometry", ge.geometry, "geometry spec string");
    sub->add_option("--geometry-config", ge.geometry_config,
                    "JSON file with the geometry object");
    sub->add_option("--x1", ge.x1, "left edge of the ball");
    sub->add_option("--r", ge.r, "control radius");
    sub->add_option("--out", ge.out, "output directory");
    sub->callback([&] {
      const dl::Geometry g = resolve_geometry(ge.geometry, ge.geometry_config);
      const dl::HeightProfile hp = dl::rstar_and_height(g, ge.x1, ge.r);
      json doc{{"geometry", g.label()},
               {"x1", ge.x1},
               {"r", ge.r},
               {"r_star", hp.r_star},
               {"lambda", hp.lambda},
               {"height", hp.h},
               {"surrogate_height", hp.surrogate},
               {"regime", hp.regime == dl::Regime::Small ? "small" : "large"}};
      const std::string dir = dl::resolve_output_dir(ge.out);
      emit_json(dir, "geodesic.json", doc);
      std::vector<double> ts, hs;
      for (int s = 1; s <= 32; ++s) {
        const double t = hp.r_star * s / 32.0;
        ts.push_back(t);
        hs.push_back(dl::height_hstar(g, ge.x1, t));
      }
      emit(dir, "height_profile.dat", dl::plot_data("t", "hstar", ts, hs));
      std::printf("r* = %s, lambda = %s, height = %s (%s regime)\n",
                  dl::format_g17(hp.r_star).c_str(),
                  dl::format_g17(hp.lambda).c_str(),
                  dl::format_g17(hp.h).c_str(),
                  hp.regime == dl::Regime::Small ? "small" : "large");
    });
  }

  // ---- volume ----
  struct {
    std::string geometry, geometry_config, out;
    int n = 2, grid = 192;
    std::vector<double> x1{0.2};
    std::vector<double> r{0.015625};
  } vo;
  {
    auto* sub = app.add_subcommand(
        "volume", "analytic vs grid-measured control-ball volume");
    sub->add_option("--geometry", vo.geometry, "geometry spec string");
    sub->add_option("--geometry-config", vo.geometry_config,
                    "JSON file with the geometry object");
    sub->add_option("--n", vo.n, "dimension (grid measurement in n = 2 only)");
    sub->add_option("--x1", vo.x1, "ball left edges (repeatable)");
    sub->add_option("--r", vo.r, "radii (repeatable)");
    sub->add_option("--grid", vo.grid, "measurement lattice resolution");
    sub->add_option("--out", vo.out, "output directory");
    sub->callback([&] {
      const dl::Geometry g = resolve_geometry(vo.geometry, vo.geometry_config);
      std::vector<dl::VolumeRow> rows;
      for (const double x1 : vo.x1) {
        for (const double r : vo.r) {
          dl::VolumeRow row;
          row.geometry = g.label();
          row.n = vo.n;
          row.x1 = x1;
          row.r = r;
          row.regime = dl::ball_regime(g, vo.n, x1, r) == dl::Regime::Small
                           ? "small"
                           : "large";
          row.analytic = dl::ball_volume(g, vo.n, x1, r);
          if (vo.n == 2) {
            row.numeric = dl::annulus_measures(g, {x1, 0.0}, r, 0, vo.grid,
                                               vo.grid)[0]
                              .area_B;
            row.ratio = row.numeric / row.analytic;
          } else {
            row.numeric = std::nan("");
            row.ratio = std::nan("");
          }
          rows.push_back(row);
          std::printf("%s n=%d x1=%g r=%g %s analytic=%s numeric=%s\n",
                      row.geometry.c_str(), row.n, row.x1, row.r,
                      row.regime.c_str(), dl::format_g17(row.analytic).c_str(),
                      dl::format_g17(row.numeric).c_str());
        }
      }
      emit(dl::resolve_output_dir(vo.out), "volume.csv", dl::volume_csv(rows));
    });
  }

  // ---- kernel ----
  struct {
    std::string geometry, geometry_config, out;
    int n = 2;
    double x1 = 0.2, r = 0.03125;
  } ke;
  {
    auto* sub = app.add_subcommand(
        "kernel", "straight-across integral of the subrepresentation kernel");
    sub->add_option("--geometry", ke.geometry, "geometry spec string");
    sub->add_option("--geometry-config", ke.geometry_config,
                    "JSON file with the geometry object");
    sub->add_option("--n", ke.n, "dimension (2 = numeric cone, >= 3 analytic)");
    sub->add_option("--x1", ke.x1, "apex left coordinate");
    sub->add_option("--r", ke.r, "cone depth");
    sub->add_option("--out", ke.out, "output directory");
    sub->callback([&] {
      const dl::Geometry g = resolve_geometry(ke.geometry, ke.geometry_config);
      const dl::StraightAcross sa =
          dl::straight_across_integral(g, ke.n, {ke.x1, 0.0}, ke.r);
      json doc{{"geometry", g.label()}, {"n", ke.n},     {"x1", ke.x1},
               {"r", ke.r},             {"integral", sa.integral},
               {"ratio", sa.ratio}};
      emit_json(dl::resolve_output_dir(ke.out), "kernel.json", doc);
      std::printf("integral = %s, integral/r = %s\n",
                  dl::format_g17(sa.integral).c_str(),
                  dl::format_g17(sa.ratio).c_str());
    });
  }

  // ---- the four inequality subcommands ----
  struct IneqOpts {
    std::string geometry, geometry_config, out;
    double x1 = 0.2, r = 0.03125;
    int n1 = 224, n2 = 160;
    dl::McConfig cfg;
  };
  static IneqOpts iq[4];
  const std::pair<const char*, dl::InequalityKind> kinds[4] = {
      {"poincare", dl::InequalityKind::Poincare},
      {"sobolev", dl::InequalityKind::Sobolev},
      {"caccioppoli", dl::InequalityKind::Caccioppoli},
      {"degiorgi", dl::InequalityKind::DeGiorgi}};
  for (int q = 0; q < 4; ++q) {
    IneqOpts& o = iq[q];
    const dl::InequalityKind kind = kinds[q].second;
    auto* sub = app.add_subcommand(
        kinds[q].first,
        std::string("calibrate and validate the ") + kinds[q].first +
            " inequality by Monte Carlo");
    sub->add_option("--geometry", o.geometry, "geometry spec string");
    sub->add_option("--geometry-config", o.geometry_config,
                    "JSON file with the geometry object");
    sub->add_option("--x1", o.x1, "ball left coordinate");
    sub->add_option("--r", o.r, "ball radius");
    sub->add_option("--n1", o.n1, "lattice columns");
    sub->add_option("--n2", o.n2, "lattice rows");
    sub->add_option("--trials", o.cfg.calibration_trials,
                    "calibration trials");
    sub->add_option("--validation", o.cfg.validation_trials,
                    "validation trials");
    sub->add_option("--slack", o.cfg.slack, "relative violation slack");
    sub->add_option("--seed", o.cfg.master_seed, "master seed");
    sub->add_option("--out", o.out, "output directory");
    sub->callback([&o, kind] {
      const dl::Geometry g = resolve_geometry(o.geometry, o.geometry_config);
      const dl::McOutcome out = dl::run_inequality_mc(
          kind, g, {o.x1, 0.0}, o.r, o.n1, o.n2, o.cfg);
      std::vector<dl::InequalityCsvRow> rows;
      for (const dl::TrialRow& t : out.rows) {
        dl::InequalityCsvRow row;
        row.inequality = dl::inequality_name(kind);
        row.geometry = g.label();
        row.x1 = o.x1;
        row.r = o.r;
        row.seed = t.seed;
        row.lhs = t.lhs;
        row.rhs = t.rhs;
        row.implied_constant = t.implied;
        row.applicable = t.applicable;
        rows.push_back(row);
      }
      const std::string dir = dl::resolve_output_dir(o.out);
      const std::string name = dl::inequality_name(kind);
      emit(dir, name + "_trials.csv", dl::inequality_csv(rows));
      json doc{{"inequality", name},
               {"geometry", g.label()},
               {"x1", o.x1},
               {"r", o.r},
               {"prng", "mt19937_64"},
               {"master_seed", o.cfg.master_seed},
               {"calibrated_constant", out.calibrated},
               {"validation_extreme", out.validation_extreme},
               {"violations", out.violations},
               {"calibration_used", out.calibration_used},
               {"validation_used", out.validation_used}};
      if (kind == dl::InequalityKind::Caccioppoli) {
        doc["max_intermediate_ratio"] = out.max_aux_ratio;
      }
      emit_json(dir, name + ".json", doc);
      std::printf("%s: calibrated = %s, validation extreme = %s, "
                  "violations = %d (%d/%d trials applicable)\n",
                  name.c_str(), dl::format_g17(out.calibrated).c_str(),
                  dl::format_g17(out.validation_extreme).c_str(),
                  out.violations, out.calibration_used, out.validation_used);
    });
  }

  // ---- solve ----
  struct {
    std::string geometry, geometry_config, out, boundary = "saddle";
    std::vector<double> rect{0.1, 0.5, -0.2, 0.2};
    int n1 = 128, n2 = 128;
  } so;
  {
    auto* sub = app.add_subcommand("solve",
                                   "Dirichlet solve on a rectangle");
    sub->add_option("--geometry", so.geometry, "geometry spec string");
    sub->add_option("--geometry-config", so.geometry_config,
                    "JSON file with the geometry object");
    sub->add_option("--rect", so.rect, "x1_lo x1_hi x2_lo x2_hi")
        ->expected(4);
    sub->add_option("--n1", so.n1, "cells in x1");
    sub->add_option("--n2", so.n2, "cells in x2");
    sub->add_option("--boundary", so.boundary,
                    "x1, x2, saddle or bilinear:SEED");
    sub->add_option("--out", so.out, "output directory");
    sub->callback([&] {
      const dl::Geometry g = resolve_geometry(so.geometry, so.geometry_config);
      dl::DegenerateProblem p{
          g,     so.rect[0], so.rect[1], so.rect[2], so.rect[3],
          so.n1, so.n2,
          make_boundary(so.boundary, so.rect[0], so.rect[1], so.rect[2],
                        so.rect[3])};
      const dl::SolveResult sr = dl::solve(p);
      std::vector<dl::FieldCsvRow> rows;
      rows.reserve(sr.u.v.size());
      for (int j = 0; j < sr.u.spec.n2; ++j) {
        for (int i = 0; i < sr.u.spec.n1; ++i) {
          rows.push_back({i, j, sr.u.spec.x1(i), sr.u.spec.x2(j),
                          sr.u.at(i, j)});
        }
      }
      const std::string dir = dl::resolve_output_dir(so.out);
      emit(dir, "solution.csv", dl::field_csv(rows));
      json doc{{"geometry", g.label()},
               {"rect", so.rect},
               {"n1", so.n1},
               {"n2", so.n2},
               {"boundary", so.boundary},
               {"residual", sr.residual},
               {"energy", sr.energy}};
      if (so.boundary.rfind("bilinear:", 0) == 0) doc["prng"] = "mt19937_64";
      emit_json(dir, "solve.json", doc);
      std::printf("residual = %s, energy = %s\n",
                  dl::format_g17(sr.residual).c_str(),
                  dl::format_g17(sr.energy).c_str());
    });
  }

  // ---- oscillation ----
  struct {
    std::string geometry, geometry_config, out, boundary = "bilinear:2026";
    std::vector<double> rect{0.073, 0.329, -0.002, 0.002};
    int n1 = 320, n2 = 256, levels = 4;
    double x1 = 0.2, x2 = 0.0, r0 = 0.039;
  } os;
  {
    auto* sub = app.add_subcommand(
        "oscillation", "oscillation decay over shrinking control balls");
    sub->add_option("--geometry", os.geometry, "geometry spec string");
    sub->add_option("--geometry-config", os.geometry_config,
                    "JSON file with the geometry object");
    sub->add_option("--rect", os.rect, "x1_lo x1_hi x2_lo x2_hi")
        ->expected(4);
    sub->add_option("--n1", os.n1, "cells in x1");
    sub->add_option("--n2", os.n2, "cells in x2");
    sub->add_option("--x1", os.x1, "ball centre x1");
    sub->add_option("--x2", os.x2, "ball centre x2");
    sub->add_option("--r0", os.r0, "top radius");
    sub->add_option("--levels", os.levels, "dyadic levels");
    sub->add_option("--boundary", os.boundary,
                    "x1, x2, saddle or bilinear:SEED");
    sub->add_option("--out", os.out, "output directory");
    sub->callback([&] {
      const dl::Geometry g = resolve_geometry(os.geometry, os.geometry_config);
      dl::DegenerateProblem p{
          g,     os.rect[0], os.rect[1], os.rect[2], os.rect[3],
          os.n1, os.n2,
          make_boundary(os.boundary, os.rect[0], os.rect[1], os.rect[2],
                        os.rect[3])};
      const dl::OscillationReport rep =
          dl::oscillation_decay_run(p, {os.x1, os.x2}, os.r0, os.levels);
      json doc{{"geometry", g.label()},
               {"center", {os.x1, os.x2}},
               {"r0", os.r0},
               {"boundary", os.boundary},
               {"lower_half", rep.lower_half}};
      if (os.boundary.rfind("bilinear:", 0) == 0) doc["prng"] = "mt19937_64";
      std::vector<double> rs, oscs;
      for (const dl::OscillationLevel& l : rep.levels) {
        doc["levels"].push_back({{"level", l.level},
                                 {"r", l.r},
                                 {"osc", l.osc},
                                 {"ratio", l.ratio},
                                 {"nodes", l.nodes}});
        rs.push_back(l.r);
        oscs.push_back(l.osc);
        std::printf("level %d: r = %s, osc = %s, nodes = %zu\n", l.level,
                    dl::format_g17(l.r).c_str(), dl::format_g17(l.osc).c_str(),
                    l.nodes);
      }
      const std::string dir = dl::resolve_output_dir(os.out);
      emit_json(dir, "oscillation.json", doc);
      emit(dir, "oscillation.dat", dl::plot_data("r", "osc", rs, oscs));
    });
  }

  // ---- classify ----
  struct {
    std::string geometry, geometry_config, out;
    double C1 = 1.0, C2 = 1.0, C3 = 1.0, N = 1.0, r0 = 0.25;
    long long J = 1000000;
  } cl;
  {
    auto* sub = app.add_subcommand(
        "classify", "summability verdict of the continuity criterion");
    sub->add_option("--geometry", cl.geometry, "geometry spec string");
    sub->add_option("--geometry-config", cl.geometry_config,
                    "JSON file with the geometry object");
    sub->add_option("--C1", cl.C1, "profile constant C1");
    sub->add_option("--C2", cl.C2, "profile constant C2");
    sub->add_option("--C3", cl.C3, "sequence constant C3");
    sub->add_option("--N", cl.N, "profile exponent N");
    sub->add_option("--r0", cl.r0, "top radius of the sequence");
    sub->add_option("--J", cl.J, "sequence length");
    sub->add_option("--out", cl.out, "output directory");
    sub->callback([&] {
      const dl::Geometry g = resolve_geometry(cl.geometry, cl.geometry_config);
      dl::DeltaProfile p = dl::default_profile(g);
      p.C1 = cl.C1;
      p.C2 = cl.C2;
      p.N = cl.N;
      const dl::ClassificationReport rep =
          dl::classify(g, p, cl.C3, cl.r0, cl.J);
      json doc{{"geometry", rep.geometry},
               {"constants",
                {{"C1", rep.C1}, {"C2", rep.C2}, {"C3", rep.C3},
                 {"N", rep.N}}},
               {"G", "F(r)/ln(1/r)"},
               {"r0", rep.r0},
               {"J", rep.J},
               {"rule", rep.detail.structural ? "structural" : "sequence"},
               {"trend_slope", rep.detail.trend_slope},
               {"verdict", dl::verdict_name(rep.verdict)},
               {"dominating_sigma", rep.dominating_sigma}};
      std::vector<double> js, lnl;
      for (std::size_t t = 0; t < rep.table.size(); ++t) {
        const dl::LambdaEntry& e = rep.table[t];
        doc["rows"].push_back({{"j", e.j},
                               {"r_j", e.r_j},
                               {"ln_delta", e.ln_delta},
                               {"ln_lambda", e.ln_lambda}});
        const double s = rep.partial_sums[t];
        doc["partial_sums_log"].push_back(
            s > 0.0 ? json(std::log(s)) : json());
        js.push_back(static_cast<double>(e.j));
        lnl.push_back(e.ln_lambda);
      }
      const std::string dir = dl::resolve_output_dir(cl.out);
      emit_json(dir, "classification.json", doc);
      emit(dir, "lambda_sequence.dat", dl::plot_data("j", "ln_lambda", js,
                                                     lnl));
      std::printf("verdict: %s (rule: %s, slope %s)\n",
                  dl::verdict_name(rep.verdict).c_str(),
                  rep.detail.structural ? "structural" : "sequence",
                  dl::format_g17(rep.detail.trend_slope).c_str());
    });
  }

  // ---- suite ----
  struct {
    std::string out;
  } su;
  {
    auto* sub = app.add_subcommand("suite", "run the full acceptance battery");
    sub->add_option("--out", su.out, "output directory");
    sub->callback([&] {
      const std::vector<dl::CriterionResult> results =
          dl::run_all_criteria();
      json doc;
      int fails = 0;
      for (const dl::CriterionResult& r : results) {
        std::printf("criterion %2d [%s]: %s - %s\n", r.index, r.name.c_str(),
                    r.pass ? "PASS" : "FAIL", r.detail.c_str());
        doc["criteria"].push_back({{"index", r.index},
                                   {"name", r.name},
                                   {"pass", r.pass},
                                   {"detail", r.detail}});
        if (!r.pass) ++fails;
      }
      doc["failures"] = fails;
      emit_json(dl::resolve_output_dir(su.out), "suite.json", doc);
      if (fails > 0) g_exit = 2;
    });
  }

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 2;
  }
  return g_exit;
}
