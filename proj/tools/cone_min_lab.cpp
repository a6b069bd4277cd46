// cone_min_lab: command-line front end to the conemin library.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "conemin/conemin.hpp"

namespace {

using namespace conemin;
using nlohmann::json;

// JSON config files: top-level keys are global options, nested objects are
// subcommand sections, arrays feed multi-value options.
class ConfigJSON : public CLI::Config {
public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json j;
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_configurable() || opt->get_single_name().empty()) {
        continue;
      }
      if (opt->count() == 1) {
        j[opt->get_single_name()] = opt->results().at(0);
      } else if (opt->count() > 1) {
        j[opt->get_single_name()] = opt->results();
      } else if (default_also && !opt->get_default_str().empty()) {
        j[opt->get_single_name()] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      json s = json::parse(to_config(sub, default_also, false, ""));
      if (!s.empty()) {
        j[sub->get_name()] = s;
      }
    }
    return j.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::exception& e) {
      throw CLI::ConversionError("config", e.what());
    }
    return walk(j, {}, "");
  }

private:
  static std::vector<CLI::ConfigItem> walk(const json& j, std::vector<std::string> parents,
                                           const std::string& name) {
    std::vector<CLI::ConfigItem> out;
    if (j.is_object()) {
      if (!name.empty()) {
        parents.push_back(name);
      }
      for (const auto& [key, value] : j.items()) {
        auto sub = walk(value, parents, key);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    if (name.empty()) {
      throw CLI::ConversionError("config", "top level must be an object");
    }
    CLI::ConfigItem item;
    item.parents = std::move(parents);
    item.name = name;
    auto scalar = [](const json& v) {
      if (v.is_string()) {
        return v.get<std::string>();
      }
      if (v.is_boolean()) {
        return std::string(v.get<bool>() ? "true" : "false");
      }
      return v.dump();
    };
    if (j.is_array()) {
      for (const auto& v : j) {
        item.inputs.push_back(scalar(v));
      }
    } else {
      item.inputs.push_back(scalar(j));
    }
    out.push_back(std::move(item));
    return out;
  }
};

struct Globals {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::string output = "-";
  OutputFormat format = OutputFormat::csv;
  unsigned jobs = 0;

  QuadratureConfig quadrature() const {
    QuadratureConfig q;
    q.abs_tol = abs_tol;
    q.rel_tol = rel_tol;
    return q;
  }
};

// Output stream that is either stdout or a file opened on first use.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (path != "-") {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) {
        throw io_error("cannot open " + path + " for writing");
      }
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }
  void close() {
    out().flush();
    if (!out()) {
      throw io_error("output write failed");
    }
  }

private:
  std::unique_ptr<std::ofstream> file_;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_ld(long double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.21Lg", x);
  return buf;
}

// Flat key/value report written as a one-row CSV or a JSON object.
void write_report(Sink& sink, OutputFormat format,
                  const std::vector<std::pair<std::string, std::string>>& fields,
                  const std::vector<std::string>& string_keys = {}) {
  auto& out = sink.out();
  if (format == OutputFormat::json) {
    out << "{";
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const bool quoted = std::find(string_keys.begin(), string_keys.end(), fields[i].first) !=
                          string_keys.end();
      out << (i ? ", " : "") << '"' << fields[i].first << "\": ";
      if (quoted) {
        out << json(fields[i].second).dump();
      } else {
        out << fields[i].second;
      }
    }
    out << "}\n";
  } else if (format == OutputFormat::csv) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out << (i ? "," : "") << fields[i].first;
    }
    out << '\n';
    for (std::size_t i = 0; i < fields.size(); ++i) {
      out << (i ? "," : "") << fields[i].second;
    }
    out << '\n';
  } else {
    throw std::invalid_argument("this subcommand writes csv or json only");
  }
  sink.close();
}

// ---------------------------------------------------------------------------

struct ScanArgs {
  std::vector<int> ns{2, 3, 4, 5, 6};
  double lambda_min = 0.70;
  double lambda_max = 0.99;
  std::size_t lambda_count = 2001;
  std::string mode = "certified";
  bool timing = false;
  int barrier_samples = 1000;
  std::size_t budget = 1000;
};

int run_scan(const Globals& g, const ScanArgs& a) {
  ScanConfig cfg;
  cfg.mode = a.mode == "formula" ? DecideMode::formula_only : DecideMode::certified;
  cfg.jobs = g.jobs;
  cfg.record_timing = a.timing;
  cfg.decide.barrier_samples = a.barrier_samples;
  cfg.decide.search.budget = a.budget;
  const auto records = scan(a.ns, linspace(a.lambda_min, a.lambda_max, a.lambda_count), cfg);
  Sink sink(g.output);
  emit(records, g.format, sink.out());
  sink.close();
  for (int n : a.ns) {
    const auto t = empirical_threshold(records, n);
    std::fprintf(stderr, "n=%d lambda*=%.7f empirical=%s%s\n", n, threshold(n),
                 t ? fmt(*t).c_str() : "none",
                 verdicts_monotone(records, n) ? "" : " (verdicts interleave)");
  }
  return 0;
}

struct ShootArgs {
  int n = 3;
  double lambda = 0.9;
  std::optional<double> h0;
  double h_floor = 1e-9;
  double end_margin = 1e-3;
  double ode_rel_tol = 1e-11;
  double ode_abs_tol = 1e-12;
  std::string trajectory;
};

int run_shoot(const Globals& g, const ShootArgs& a) {
  const ConeSpace space(a.n, a.lambda);
  ShootingConfig cfg;
  cfg.h_floor = a.h_floor;
  cfg.end_margin = a.end_margin;
  cfg.rel_tol = a.ode_rel_tol;
  cfg.abs_tol = a.ode_abs_tol;
  ShootingOutcome o;
  std::string source = "given";
  if (a.h0) {
    o = shoot(space, *a.h0, cfg);
  } else {
    const auto found = find_extending_shot(space, cfg);
    if (found) {
      o = found->outcome;
      source = "bisection";
    } else {
      o = shoot(space, 0.5 * std::numbers::pi, cfg);
      source = "no-extending-shot";
    }
  }
  std::vector<std::pair<std::string, std::string>> fields{
      {"n", std::to_string(a.n)},
      {"lambda", fmt(a.lambda)},
      {"h0", fmt(o.H0)},
      {"h0_source", source},
      {"kind", to_string(o.kind)},
      {"theta_exit", fmt(o.theta_exit)},
      {"h_exit", fmt(o.H_exit)},
      {"steps", std::to_string(o.steps)},
      {"rejected", std::to_string(o.rejected)},
      {"error_bound", fmt(o.error_bound)}};
  if (o.kind == ExitKind::extends_to_half_pi) {
    const double A = initial_slope(o.H0, space);
    const double S = s_functional(reconstruct_f(o, space, g.quadrature()), space, g.quadrature());
    fields.emplace_back("s_functional", fmt(S));
    fields.emplace_back("boundary_flux", fmt(boundary_flux(A, space)));
  }
  if (!a.trajectory.empty()) {
    std::ofstream t(a.trajectory);
    if (!t) {
      throw io_error("cannot open " + a.trajectory + " for writing");
    }
    write_trajectory(t, o.trajectory);
  }
  Sink sink(g.output);
  write_report(sink, g.format, fields, {"h0_source", "kind"});
  return 0;
}

struct CompetitorArgs {
  std::string family = "sec5";
  int n = 2;
  double lambda = 0.9;
  std::optional<double> delta;
  std::optional<double> alpha;
  double L0 = 2.0 * std::numbers::pi;
  std::size_t budget = 1000;
};

int run_competitor(const Globals& g, const CompetitorArgs& a) {
  const auto q = g.quadrature();
  Sink sink(g.output);
  if (a.family == "catenoid" || a.family == "disk") {
    const double delta = a.delta.value_or(0.01);
    const double alpha = a.alpha.value_or(0.5);
    const auto L = LengthProfile::round_sphere(a.L0);
    std::vector<std::pair<std::string, std::string>> fields{
        {"family", a.family}, {"delta", fmt(delta)}, {"alpha", fmt(alpha)}, {"L0", fmt(a.L0)}};
    if (a.family == "catenoid") {
      const auto p = solve_catenoid(delta, alpha);
      if (!p) {
        fields.emplace_back("verdict", "NoSolution");
      } else {
        fields.emplace_back("a", fmt(p->a));
        fields.emplace_back("b", fmt(p->b));
        fields.emplace_back("closed_form", fmt(catenoid_area_closed_form(*p, a.L0)));
        fields.emplace_back("numeric", fmt(graph_area(catenoid_profile(*p), L, q)));
        fields.emplace_back("verdict", "Solved");
      }
    } else {
      const auto d = disk_profile(delta, alpha, L, q);
      fields.emplace_back("area", fmt(d.area));
      fields.emplace_back("numeric", fmt(graph_area(d.profile, L, q)));
      fields.emplace_back("bound", fmt(disk_area_bound(delta, alpha, L)));
      fields.emplace_back("verdict", "Computed");
    }
    write_report(sink, g.format, fields, {"family", "verdict"});
    return 0;
  }
  if (a.family != "sec5") {
    throw std::invalid_argument("unknown competitor family " + a.family);
  }
  const ConeSpace space(a.n, a.lambda);
  double alpha = 0.0;
  long double log_delta = 0.0L;
  if (a.delta && a.alpha) {
    alpha = *a.alpha;
    log_delta = std::log(static_cast<long double>(*a.delta));
  } else {
    CompetitorSearchConfig cfg;
    cfg.budget = a.budget;
    const auto r = competitor_search(space, cfg);
    alpha = r.alpha;
    log_delta = r.log_delta;
  }
  const long double margin = sec5_margin(space, log_delta, alpha);
  const double delta = static_cast<double>(std::exp(log_delta));
  std::string bound = "nan";
  std::string numeric = "nan";
  if (delta > 0.0) {
    bound = fmt(sec5_bound(space, delta, alpha));
    numeric = fmt(sec5_area_numeric(space, delta, alpha, q));
  }
  write_report(sink, g.format,
               {{"family", "sec5"},
                {"n", std::to_string(a.n)},
                {"lambda", fmt(a.lambda)},
                {"delta", fmt(delta)},
                {"log_delta", fmt_ld(log_delta)},
                {"alpha", fmt(alpha)},
                {"bound", bound},
                {"numeric", numeric},
                {"margin", fmt_ld(margin)},
                {"verdict", margin > 0.0L ? "CompetitorFound" : "None"}},
               {"family", "verdict"});
  return 0;
}

struct StabilityArgs {
  double lambda = 0.9;
  std::optional<double> log_ratio;
  std::optional<double> a_sq;
};

int run_stability(const Globals& g, const StabilityArgs& a) {
  std::vector<std::pair<std::string, std::string>> fields{{"lambda", fmt(a.lambda)}};
  fields.emplace_back("critical_log_ratio", fmt(critical_log_ratio(a.lambda)));
  if (a.log_ratio) {
    fields.emplace_back("log_ratio", fmt(*a.log_ratio));
    fields.emplace_back("gap", fmt(stability_gap(a.lambda, TestFunctionEta{1.0, *a.log_ratio})));
  }
  if (const auto c = instability_certificate(a.lambda)) {
    fields.emplace_back("certificate_log_ratio", fmt(c->eta.log_ratio));
    fields.emplace_back("certificate_gap", fmt(c->gap));
  } else {
    fields.emplace_back("certificate_log_ratio", "null");
    fields.emplace_back("certificate_gap", "null");
  }
  if (a.a_sq) {
    fields.emplace_back("scaled_A_sq", fmt(scale_second_fundamental(*a.a_sq, a.lambda)));
  }
  Sink sink(g.output);
  write_report(sink, g.format, fields);
  return 0;
}

struct CurvatureArgs {
  int n = 2;
  double lambda = 0.5;
  double t = 1.0;
};

int run_curvature(const Globals& g, const CurvatureArgs& a) {
  const ConeSpace space(a.n, a.lambda);
  const auto cs = cross_section_curvature(space);
  Sink sink(g.output);
  write_report(sink, g.format,
               {{"n", std::to_string(a.n)},
                {"lambda", fmt(a.lambda)},
                {"t", fmt(a.t)},
                {"cross_section_sectional", fmt(cs.sectional)},
                {"cross_section_ricci", fmt(cs.ricci_diag)},
                {"sectional_tangential", fmt(cone_sectional(space, a.t, PlaneKind::tangential))},
                {"sectional_radial", fmt(cone_sectional(space, a.t, PlaneKind::radial))},
                {"ricci_tangential", fmt(cone_ricci(space, a.t, PlaneKind::tangential))},
                {"ricci_radial", fmt(cone_ricci(space, a.t, PlaneKind::radial))}});
  return 0;
}

struct MonotonicityArgs {
  std::string surface = "hypercone";
  int n = 3;
  double lambda = 0.9;
  double a = 1.0;
  double z_max = 3.0;
  std::vector<double> radii{0.1, 1.0, 10.0};
  double tol = 1e-8;
};

int run_monotonicity(const Globals& g, const MonotonicityArgs& a) {
  std::vector<double> ratios;
  if (a.surface == "hypercone") {
    const GeodesicHypercone cone{ConeSpace(a.n, a.lambda)};
    for (double r : a.radii) {
      ratios.push_back(density_ratio(cone, r));
    }
  } else if (a.surface == "hypercone-quadrature" || a.surface == "catenoid") {
    double r_max = 0.0;
    for (double r : a.radii) {
      r_max = std::max(r_max, r);
    }
    const auto s = a.surface == "catenoid" ? euclidean_catenoid(a.a, a.z_max)
                                           : hypercone_surface(ConeSpace(a.n, a.lambda), r_max);
    DensityConfig cfg;
    cfg.tol = a.tol;
    for (double r : a.radii) {
      ratios.push_back(density_ratio(s, r, cfg));
    }
  } else {
    throw std::invalid_argument("unknown surface " + a.surface);
  }
  Sink sink(g.output);
  auto& out = sink.out();
  if (g.format == OutputFormat::json) {
    json arr = json::array();
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      arr.push_back({{"r", a.radii[i]}, {"density_ratio", ratios[i]}});
    }
    out << arr.dump(2) << '\n';
  } else if (g.format == OutputFormat::csv) {
    out << "r,density_ratio\n";
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      out << fmt(a.radii[i]) << ',' << fmt(ratios[i]) << '\n';
    }
  } else {
    throw std::invalid_argument("monotonicity writes csv or json only");
  }
  sink.close();
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decides minimality of the totally geodesic hypercone in C(S^n(lambda)) and "
               "evaluates the supporting formulas"};
  app.config_formatter(std::make_shared<ConfigJSON>());
  app.set_config("--config", "", "JSON config file; command-line values take precedence");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  std::map<std::string, OutputFormat> formats{
      {"csv", OutputFormat::csv}, {"json", OutputFormat::json}, {"svg", OutputFormat::svg}};
  app.add_option("--abs-tol", g.abs_tol, "Quadrature absolute tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--rel-tol", g.rel_tol, "Quadrature relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("-o,--output", g.output, "Output path, - for stdout")->capture_default_str();
  app.add_option("--format", g.format, "csv, json or svg")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case).description(""))
      ->option_text("csv|json|svg");
  app.add_option("--jobs", g.jobs, "Worker threads for scans, 0 = all cores")
      ->capture_default_str();

  ScanArgs scan_args;
  auto* scan_cmd = app.add_subcommand("scan", "Sweep the (n, lambda) plane");
  scan_cmd->add_option("--n", scan_args.ns, "Dimensions n")->delimiter(',')->capture_default_str();
  scan_cmd->add_option("--lambda-min", scan_args.lambda_min)->capture_default_str();
  scan_cmd->add_option("--lambda-max", scan_args.lambda_max)->capture_default_str();
  scan_cmd->add_option("--lambda-count", scan_args.lambda_count)->capture_default_str();
  scan_cmd->add_option("--mode", scan_args.mode, "certified or formula")
      ->check(CLI::IsMember({"certified", "formula"}))
      ->capture_default_str();
  scan_cmd->add_flag("--timing", scan_args.timing, "Record per-point wall time");
  scan_cmd->add_option("--barrier-samples", scan_args.barrier_samples)->capture_default_str();
  scan_cmd->add_option("--budget", scan_args.budget, "Competitor search evaluations")
      ->capture_default_str();

  ShootArgs shoot_args;
  auto* shoot_cmd = app.add_subcommand("shoot", "Integrate the angle ODE from H(0) = h0");
  shoot_cmd->add_option("--n", shoot_args.n)->capture_default_str();
  shoot_cmd->add_option("--lambda", shoot_args.lambda)->capture_default_str();
  shoot_cmd->add_option("--h0", shoot_args.h0, "Initial angle; omitted: bisect for the extending shot");
  shoot_cmd->add_option("--floor", shoot_args.h_floor)->capture_default_str();
  shoot_cmd->add_option("--end-margin", shoot_args.end_margin)->capture_default_str();
  shoot_cmd->add_option("--ode-rel-tol", shoot_args.ode_rel_tol)->capture_default_str();
  shoot_cmd->add_option("--ode-abs-tol", shoot_args.ode_abs_tol)->capture_default_str();
  shoot_cmd->add_option("--trajectory", shoot_args.trajectory, "Write theta, H, f columns here");

  CompetitorArgs comp_args;
  auto* comp_cmd = app.add_subcommand("competitor", "Evaluate or search explicit competitors");
  comp_cmd->add_option("--family", comp_args.family, "sec5, catenoid or disk")
      ->check(CLI::IsMember({"sec5", "catenoid", "disk"}))
      ->capture_default_str();
  comp_cmd->add_option("--n", comp_args.n)->capture_default_str();
  comp_cmd->add_option("--lambda", comp_args.lambda)->capture_default_str();
  comp_cmd->add_option("--delta", comp_args.delta);
  comp_cmd->add_option("--alpha", comp_args.alpha);
  comp_cmd->add_option("--L0", comp_args.L0)->capture_default_str();
  comp_cmd->add_option("--budget", comp_args.budget)->capture_default_str();

  StabilityArgs stab_args;
  auto* stab_cmd = app.add_subcommand("stability", "Stability gap of the 2-dimensional cone");
  stab_cmd->add_option("--lambda", stab_args.lambda)->capture_default_str();
  stab_cmd->add_option("--log-ratio", stab_args.log_ratio, "ln(R/epsilon) of the test function");
  stab_cmd->add_option("--a-sq", stab_args.a_sq, "|A'|^2 to rescale");

  CurvatureArgs curv_args;
  auto* curv_cmd = app.add_subcommand("curvature", "Cone curvatures at distance t");
  curv_cmd->add_option("--n", curv_args.n)->capture_default_str();
  curv_cmd->add_option("--lambda", curv_args.lambda)->capture_default_str();
  curv_cmd->add_option("--t", curv_args.t)->capture_default_str();

  MonotonicityArgs mono_args;
  auto* mono_cmd = app.add_subcommand("monotonicity", "Density ratios Vol(B_r cap S)/r^k");
  mono_cmd->add_option("--surface", mono_args.surface, "hypercone, hypercone-quadrature or catenoid")
      ->check(CLI::IsMember({"hypercone", "hypercone-quadrature", "catenoid"}))
      ->capture_default_str();
  mono_cmd->add_option("--n", mono_args.n)->capture_default_str();
  mono_cmd->add_option("--lambda", mono_args.lambda)->capture_default_str();
  mono_cmd->add_option("--a", mono_args.a, "Catenoid neck radius")->capture_default_str();
  mono_cmd->add_option("--z-max", mono_args.z_max)->capture_default_str();
  mono_cmd->add_option("--radii", mono_args.radii)->delimiter(',')->capture_default_str();
  mono_cmd->add_option("--tol", mono_args.tol)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*scan_cmd) {
      return run_scan(g, scan_args);
    }
    if (*shoot_cmd) {
      return run_shoot(g, shoot_args);
    }
    if (*comp_cmd) {
      return run_competitor(g, comp_args);
    }
    if (*stab_cmd) {
      return run_stability(g, stab_args);
    }
    if (*curv_cmd) {
      return run_curvature(g, curv_args);
    }
    if (*mono_cmd) {
      return run_monotonicity(g, mono_args);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "cone_min_lab: %s\n", e.what());
    return 1;
  }
  return 0;
}
