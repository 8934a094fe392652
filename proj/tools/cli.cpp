#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include "grhs/constructor.hpp"
#include "grhs/curvature.hpp"
#include "grhs/error.hpp"
#include "grhs/gallery.hpp"
#include "grhs/geodesics.hpp"
#include "grhs/json_io.hpp"
#include "grhs/soliton.hpp"

namespace grhs::cli {

namespace {

struct Options {
  std::string command;
  std::string config;
  std::string gallery;
  int case_id = 0;
  std::optional<double> tol;
  std::string grid;
  double s_max = 1e3;
  std::uint64_t seed = 0;
  std::string out = "grhs_out";
  std::string variant;
  std::vector<double> steps;
  std::vector<std::string> params;
  std::optional<std::size_t> count;
};

struct Source {
  WarpedCandidate candidate;
  std::optional<GridSpec> grid;
  std::optional<CaseParams> params;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file \"" + path + "\"");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config \"" + path + "\" is not valid JSON: " + e.what());
  }
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got \"" + item + "\"");
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
      out[item.substr(0, eq)] = v;
    } catch (const std::exception&) {
      throw ConfigError("--param value is not a number: \"" + item + "\"");
    }
  }
  return out;
}

std::optional<GridSpec> parse_grid(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("--grid expects a:b:count");
  GridSpec g;
  try {
    const double a = std::stod(parts[0]), b = std::stod(parts[1]);
    const long count = std::stol(parts[2]);
    if (!(b > a) || count < 1) throw ConfigError("--grid needs a < b and count >= 1");
    g.xi = Interval::closed(a, b);
    g.zeta = Interval::closed(a, b);
    g.count = static_cast<std::size_t>(count);
  } catch (const std::invalid_argument&) {
    throw ConfigError("--grid expects numbers a:b:count");
  } catch (const std::out_of_range&) {
    throw ConfigError("--grid value out of range");
  }
  return g;
}

void apply_case_variant(CaseParams& p, const std::string& variant) {
  if (variant.empty()) return;
  if (variant == "constant-z") {
    p.z_mode = ZMode::Constant;
  } else if (variant == "variable-z") {
    p.z_mode = ZMode::Variable;
  } else if (variant == "printed-psi") {
    p.z_mode = ZMode::Variable;
    p.psi_form = PsiForm::Printed;
  } else {
    throw ConfigError("case variant must be constant-z, variable-z or printed-psi");
  }
}

Source load_source(const Options& o) {
  Source s;
  if (!o.gallery.empty()) {
    GalleryOptions g{parse_params(o.params), o.variant};
    s.candidate = gallery(o.gallery, g);
    s.grid = gallery_grid(o.gallery, g);
    return s;
  }
  if (!o.params.empty()) throw ConfigError("--param applies to gallery entries only");
  if (!o.config.empty()) {
    const Json j = read_json(o.config);
    const bool is_case = j.is_object() && (j.value("schema", "") == "caseparams-v1" || j.contains("case"));
    if (is_case) {
      CaseParams p = case_params_from_json(j);
      if (o.case_id != 0) p.case_id = o.case_id;
      apply_case_variant(p, o.variant);
      s.params = p;
      s.candidate = construct(p);
    } else {
      if (!o.variant.empty()) throw ConfigError("--variant does not apply to a candidate file");
      s.candidate = candidate_from_json(j);
    }
    return s;
  }
  if (o.case_id != 0) {
    CaseParams p = default_case_params(o.case_id);
    apply_case_variant(p, o.variant);
    s.params = p;
    s.candidate = construct(p);
    return s;
  }
  throw ConfigError("a candidate is needed: --gallery, --config or --case");
}

GridSpec grid_for(const Options& o, const Source& s) {
  const GridSpec base = s.grid ? *s.grid : default_grid(s.candidate);
  auto g = parse_grid(o.grid);
  if (!g) return base;
  g->xi = g->xi.intersect(base.xi);
  g->zeta = g->zeta.intersect(base.zeta);
  if (!(g->xi.lo < g->xi.hi) || !(g->zeta.lo < g->zeta.hi)) {
    throw ConfigError("--grid does not overlap the candidate's working domain");
  }
  return *g;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write \"" + path.string() + "\"");
  f << j.dump(2) << '\n';
}

std::filesystem::path report_path(const Options& o) {
  return std::filesystem::path(o.out) / (o.command + "_report.json");
}

void prepare_out(const Options& o) {
  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) throw ConfigError("cannot create output directory \"" + o.out + "\": " + ec.message());
}

int finish_verify(const Options& o, const ResidualReport& r, Json extra, std::ostream& out) {
  Json j = report_to_json(r);
  for (auto& [k, v] : extra.items()) j[k] = v;
  write_json(report_path(o), j);
  out << r.candidate << ": " << (r.passed ? "PASS" : "FAIL") << " (" << r.equations.size() << " equations, tol "
      << r.tolerance << ")";
  if (!r.passed) {
    out << " failing:";
    for (const auto& id : r.failing()) out << ' ' << id << '=' << *r.residual(id);
  }
  out << '\n';
  return r.passed ? kPass : kCheckFailed;
}

Json psi_diagnostics(const Source& s) {
  Json d = Json::object();
  if (!s.params || s.params->case_id < 3 || s.params->z_mode != ZMode::Variable) return d;
  const CaseParams& p = *s.params;
  PsiZSource::Params q;
  q.n = p.n;
  q.m = p.m;
  q.k = p.k;
  q.c6 = p.c[6];
  q.z0 = p.z0;
  q.xi0 = p.xi0;
  q.span = p.xi_span;
  q.h0 = p.h_c2;
  q.form = p.psi_form;
  d["psi_redundant_spread"] = number_or_null(PsiZSource::integrate(q)->redundant_path_spread());
  d["psi_form"] = std::string(to_string(p.psi_form));
  return {{"diagnostics", d}};
}

int cmd_verify(const Options& o, std::ostream& out) {
  const Source s = load_source(o);
  const double tol = o.tol.value_or(default_tolerance(s.candidate));
  const ResidualReport r = verify(s.candidate, grid_for(o, s), tol);
  return finish_verify(o, r, psi_diagnostics(s), out);
}

int cmd_construct(const Options& o, std::ostream& out) {
  if (o.case_id == 0 && o.config.empty()) throw ConfigError("construct needs --case or a caseparams --config");
  if (!o.gallery.empty()) throw ConfigError("construct builds cases 1-4; use the gallery command for gallery entries");
  const Source s = load_source(o);
  if (!s.params) throw ConfigError("construct needs caseparams, not a candidate file");
  write_json(std::filesystem::path(o.out) / "candidate.json", candidate_to_json(s.candidate));
  write_json(std::filesystem::path(o.out) / "caseparams.json", case_params_to_json(*s.params));
  const double tol = o.tol.value_or(default_tolerance(s.candidate));
  const ResidualReport r = verify(s.candidate, grid_for(o, s), tol);
  return finish_verify(o, r, psi_diagnostics(s), out);
}

int cmd_gallery(const Options& o, std::ostream& out) {
  if (o.gallery.empty()) {
    Json entries = Json::array();
    for (const auto& id : gallery_ids()) {
      entries.push_back({{"id", id}, {"variants", gallery_variants(id)}, {"defaults", gallery_defaults(id)}});
    }
    const Json j = {{"schema", "gallery-list-v1"}, {"entries", entries}};
    write_json(report_path(o), j);
    out << j.dump(2) << '\n';
    return kPass;
  }
  const Source s = load_source(o);
  write_json(std::filesystem::path(o.out) / "candidate.json", candidate_to_json(s.candidate));
  const double tol = o.tol.value_or(default_tolerance(s.candidate));
  return finish_verify(o, verify(s.candidate, grid_for(o, s), tol), Json::object(), out);
}

int cmd_geodesic(const Options& o, std::ostream& out) {
  const Source s = load_source(o);
  ProbeOptions p;
  p.count = o.count.value_or(50);
  p.s_max = o.s_max;
  p.seed = o.seed;
  if (o.tol) p.geodesic.tol = *o.tol;
  if (!(p.s_max > 0.0)) throw ConfigError("--s-max must be positive");
  if (!(p.geodesic.tol > 0.0)) throw ConfigError("--tol must be positive");
  const ProbeSummary summary = completeness_probe(s.candidate, p);

  std::mt19937_64 rng(o.seed);
  const GeodesicState init = sample_initial_state(s.candidate, CausalClass::Null, rng, p.spread);
  const GeodesicTrajectory tr = integrate_geodesic(s.candidate, init, p.s_max, p.geodesic);
  std::ofstream csv(std::filesystem::path(o.out) / "trajectory.csv");
  tr.write_csv(csv);

  write_json(report_path(o), probe_to_json(summary));
  const bool pass = summary.early_terminations == 0 && summary.bound_violations == 0;
  out << summary.candidate << ": " << summary.verdict() << "; max drift " << summary.max_drift;
  if (summary.bound_checked) out << "; bound violations " << summary.bound_violations;
  out << '\n';
  return pass ? kPass : kCheckFailed;
}

Eigen::VectorXd place(const InvariantDirection& d, double target, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd x(static_cast<Eigen::Index>(d.dim()));
  double euclid = 0.0;
  for (std::size_t i = 0; i < d.dim(); ++i) {
    x[static_cast<Eigen::Index>(i)] = u(rng);
    euclid += d[i] * d[i];
  }
  const double shift = (target - d.project(std::span<const double>(x.data(), d.dim()))) / euclid;
  for (std::size_t i = 0; i < d.dim(); ++i) x[static_cast<Eigen::Index>(i)] += shift * d[i];
  return x;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  const Source s = load_source(o);
  const WarpedCandidate c = s.candidate.with_explicit_fiber();
  std::vector<double> steps = o.steps.empty() ? std::vector<double>{1e-3, 5e-4} : o.steps;
  for (double h : steps) {
    if (!(h > 0.0)) throw ConfigError("--step must be positive");
  }
  const double tol = o.tol.value_or(1e-5);
  const std::size_t count = o.count.value_or(5);
  const GridSpec grid = grid_for(o, s);
  const auto samples = grid.samples();
  const MetricField metric = metric_field(c);

  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
  std::vector<double> max_err(steps.size(), 0.0);
  Json points = Json::array();
  for (std::size_t p = 0; p < count; ++p) {
    const GridSample g = samples[pick(rng)];
    Eigen::VectorXd x(static_cast<Eigen::Index>(c.n() + c.m()));
    x << place(c.alpha, g.xi, rng), place(*c.beta, g.zeta, rng);
    const ProductPoint pt = make_product_point(c, x);
    const BlockMatrix closed = warped_ricci(c, pt.xi, pt.zeta);
    Json errs = Json::array();
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const BlockMatrix fd = BlockMatrix::split(fd_ricci(metric, x, steps[k]), c.n(), c.m());
      const double eb = (fd.base - closed.base).cwiseAbs().maxCoeff();
      const double em = (fd.mixed - closed.mixed).cwiseAbs().maxCoeff();
      const double ef = (fd.fiber - closed.fiber).cwiseAbs().maxCoeff();
      max_err[k] = std::max({max_err[k], eb, em, ef});
      errs.push_back({{"step", steps[k]}, {"base", eb}, {"mixed", em}, {"fiber", ef}});
    }
    std::vector<double> xv(x.data(), x.data() + x.size());
    points.push_back({{"x", xv}, {"xi", pt.xi}, {"zeta", pt.zeta}, {"errors", errs}});
  }
  std::vector<double> ratios;
  bool pass = max_err.front() <= tol;
  for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
    const double r = max_err[k] / max_err[k + 1];
    ratios.push_back(r);
    pass = pass && r >= 3.0 && r <= 5.0;
  }
  Json ratio_json = Json::array();
  for (double r : ratios) ratio_json.push_back(number_or_null(r));
  const Json j = {{"schema", "oracle-report-v1"}, {"candidate", c.name},       {"steps", steps},
                  {"tolerance", tol},            {"seed", o.seed},           {"max_errors", max_err},
                  {"order_ratios", ratio_json},  {"points", points},         {"passed", pass}};
  write_json(report_path(o), j);
  out << c.name << ": oracle " << (pass ? "PASS" : "FAIL") << " max error " << max_err.front();
  for (double r : ratios) out << " ratio " << r;
  out << '\n';
  return pass ? kPass : kCheckFailed;
}

void write_error_report(const Options& o, int code, const std::string& message) {
  try {
    prepare_out(o);
    write_json(report_path(o), {{"schema", "error-report-v1"},
                                {"command", o.command},
                                {"exit_code", code},
                                {"error", message}});
  } catch (const std::exception&) {
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Gradient Ricci-harmonic solitons on warped products", "grhs_lab"};
  app.add_option("command", o.command, "verify | construct | geodesic | gallery | oracle")
      ->required()
      ->check(CLI::IsMember({"verify", "construct", "geodesic", "gallery", "oracle"}));
  app.add_option("--config", o.config, "candidate-v1 or caseparams-v1 JSON file")->check(CLI::ExistingFile);
  app.add_option("--gallery", o.gallery, "gallery id (1.5, 1.8, 1.9, 1.10)");
  app.add_option("--case", o.case_id, "construction case 1-4")->check(CLI::Range(1, 4));
  app.add_option("--tol", o.tol, "tolerance")->check(CLI::PositiveNumber);
  app.add_option("--grid", o.grid, "a:b:count (use --grid=-5:5:101 for negative a)");
  app.add_option("--s-max", o.s_max, "geodesic parameter bound");
  app.add_option("--seed", o.seed, "random seed");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--variant", o.variant, "gallery or case variant");
  app.add_option("--step", o.steps, "finite-difference step (repeatable)")->take_all()->allow_extra_args(false);
  app.add_option("--param", o.params, "gallery parameter key=value (repeatable)")->allow_extra_args(false);
  app.add_option("--count", o.count, "geodesics or oracle points");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    prepare_out(o);
    if (o.command == "verify") return cmd_verify(o, out);
    if (o.command == "construct") return cmd_construct(o, out);
    if (o.command == "geodesic") return cmd_geodesic(o, out);
    if (o.command == "gallery") return cmd_gallery(o, out);
    return cmd_oracle(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    write_error_report(o, kConfigError, e.what());
    return kConfigError;
  } catch (const DomainError& e) {
    err << "numerical error: " << e.what() << '\n';
    write_error_report(o, kNumericalError, e.what());
    return kNumericalError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    write_error_report(o, kNumericalError, e.what());
    return kNumericalError;
  }
}

}  // namespace grhs::cli
