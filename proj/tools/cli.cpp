#include "cli.hpp"

#include <sumrules/density.hpp>
#include <sumrules/errors.hpp>
#include <sumrules/expr.hpp>
#include <sumrules/greens.hpp>
#include <sumrules/spectra.hpp>
#include <sumrules/sum_rules.hpp>
#include <sumrules/tail_fit.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace sumrules::cli {
namespace {

using json = nlohmann::ordered_json;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

// nlohmann prints the shortest round-trip form; reports use a fixed format so
// identical runs give identical bytes.
void emit(const json& j, std::ostream& os, int level) {
  const std::string pad(static_cast<std::size_t>(2 * level), ' ');
  const std::string inner(static_cast<std::size_t>(2 * level + 2), ' ');
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << inner << json(k).dump() << ": ";
        emit(v, os, level + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ",\n";
        os << inner;
        emit(j[i], os, level + 1);
      }
      os << "\n" << pad << "]";
      return;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isfinite(v)) os << fmt(v);
      else os << "null";
      return;
    }
    default:
      os << j.dump();
  }
}

std::string to_text(const json& j) {
  std::ostringstream os;
  emit(j, os, 0);
  os << "\n";
  return os.str();
}

json config_echo(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["problem"] = c.density.empty() ? c.problem : "expression";
  if (!c.density.empty()) j["density"] = c.density;
  j["length"] = c.length;
  j["alpha"] = c.alpha;
  j["epsilon"] = c.epsilon;
  j["phase"] = c.phase;
  j["rmin"] = c.rmin;
  j["bc"] = c.bc;
  j["order"] = c.order;
  j["count"] = c.count;
  j["method"] = c.method;
  j["rr_states"] = c.rr_states;
  json params = json::object();
  for (const auto& [k, v] : c.params) params[k] = v;
  j["params"] = params;
  j["tol"] = c.tol ? json(*c.tol) : json(nullptr);
  if (c.command == "annulus-sweep") {
    j["rmin_grid"] = c.rmin_grid;
    j["numeric"] = c.numeric;
  }
  if (!c.config_file.empty()) j["config_file"] = c.config_file;
  return j;
}

std::string csv_preamble(const RunConfig& c, std::string_view title) {
  std::ostringstream os;
  os << "# sumrules " << title << "\n";
  const json echo = config_echo(c);
  for (const auto& [k, v] : echo.items()) {
    std::ostringstream val;
    emit(v, val, 0);
    std::string s = val.str();
    for (auto& ch : s)
      if (ch == '\n') ch = ' ';
    os << "# " << k << " = " << s << "\n";
  }
  return os.str();
}

struct Problem {
  std::string name;
  std::optional<Density> density;  // absent for the disk
  expr::ParamMap params;
  BoundaryCondition bc = BoundaryCondition::neumann;
  bool planar() const { return name == "annulus" || name == "disk"; }
};

Problem make_problem(const RunConfig& c) {
  Problem p;
  p.bc = parse_bc(c.bc);
  if (!c.density.empty()) {
    p.name = "expression";
    std::vector<std::string> names;
    for (const auto& [k, v] : c.params) {
      names.push_back(k);
      p.params[k] = v;
    }
    auto e = expr::Expression::parse(c.density, names);
    p.density = Density::expression(expr::BoundExpression(e, p.params), c.length);
    return p;
  }
  p.name = c.problem;
  if (p.name == "uniform") p.params = {{"length", c.length}};
  else if (p.name == "borg") p.params = {{"alpha", c.alpha}};
  else if (p.name == "oscillating") p.params = {{"epsilon", c.epsilon}, {"phase", c.phase}};
  else if (p.name == "annulus") p.params = {{"rmin", c.rmin}};
  else if (p.name == "disk") p.params = {};
  else throw ParameterError("unknown problem '" + p.name + "'");
  if (p.planar() && p.bc != BoundaryCondition::neumann)
    throw ParameterError(p.name + " is available with Neumann boundary conditions only");
  if (p.name != "disk") p.density = make_builtin(p.name, p.params);
  return p;
}

void check_order(int order) {
  if (order != 1 && order != 2) throw ParameterError("order must be 1 or 2");
}

json e0_json(const std::optional<ZeroModeExpansion>& e) {
  if (!e) return nullptr;
  json j;
  j["e1"] = e->e1;
  j["e2"] = e->e2;
  j["e3"] = e->e3;
  j["truncation_M"] = e->truncation_M;
  j["e3_truncation_estimate"] = e->e3_truncation_estimate;
  return j;
}

json reference_json(const Problem& p, int order) {
  try {
    const auto r = reference_value(p.name, p.params, p.bc, order);
    json j;
    j["value"] = r.value;
    j["exact"] = r.exact;
    j["formula"] = r.formula;
    return j;
  } catch (const UnsupportedError&) {
    return nullptr;
  }
}

struct Analytic {
  SumRuleResult result;
  std::optional<AnnulusZ2> annulus;
};

SumRuleOptions sum_rule_options(const RunConfig& c) {
  SumRuleOptions o;
  if (c.tol) {
    o.quad_1d.abs_tol = *c.tol;
    o.quad_2d.abs_tol = *c.tol;
  }
  return o;
}

Analytic analytic(const Problem& p, const RunConfig& c) {
  check_order(c.order);
  if (p.name == "disk") throw UnsupportedError("the disk has no interval reduction; use annulus or validate");
  Analytic a;
  if (p.name == "annulus") {
    if (c.order != 2) throw ParameterError("the planar Z1 diverges; use --order 2");
    AnnulusOptions o;
    o.sum_rule = sum_rule_options(c);
    a.annulus = annulus_z2(c.rmin, o);
    a.result = a.annulus->result;
    return a;
  }
  a.result = c.order == 1 ? z1(*p.density, p.bc, sum_rule_options(c)) : z2(*p.density, p.bc, sum_rule_options(c));
  a.result.problem = p.name;
  return a;
}

SpectrumMethod resolve_method(const Problem& p, const RunConfig& c) {
  if (p.planar()) {
    if (!c.method.empty() && parse_method(c.method) != SpectrumMethod::bessel)
      throw ParameterError("planar spectra use the bessel method");
    return SpectrumMethod::bessel;
  }
  if (c.method.empty()) return p.bc == BoundaryCondition::periodic ? SpectrumMethod::monodromy : SpectrumMethod::pruefer;
  const auto m = parse_method(c.method);
  if (m == SpectrumMethod::bessel) throw ParameterError("the bessel method applies to the disk and annulus only");
  return m;
}

Spectrum spectrum_for(const Problem& p, const RunConfig& c, SpectrumMethod m) {
  if (c.count < 1) throw ParameterError("count must be >= 1");
  const auto count = static_cast<std::size_t>(c.count);
  if (m == SpectrumMethod::bessel) return disk_annulus_spectrum(p.name == "disk" ? 0.0 : c.rmin, count);
  if (m == SpectrumMethod::rayleigh_ritz) {
    if (c.rr_states < 2) throw ParameterError("rr-states must be >= 2");
    auto s = rayleigh_ritz(*p.density, p.bc, static_cast<std::size_t>(c.rr_states));
    if (s.entries.size() > count) s.entries.resize(count);
    return s;
  }
  ShootingOptions o;
  if (c.tol) o.rel_tol = *c.tol;
  return sl_spectrum(*p.density, p.bc, count, m, o);
}

double default_tolerance(SpectrumMethod m) { return m == SpectrumMethod::pruefer ? 1e-8 : 1e-6; }

void cmd_compute(const RunConfig& c, std::ostream& os) {
  const auto p = make_problem(c);
  const auto a = analytic(p, c);
  json j;
  j["problem"] = p.name;
  j["density"] = p.density ? p.density->describe() : "disk";
  j["bc"] = std::string(to_string(p.bc));
  j["order"] = c.order;
  j["trace_term"] = a.result.trace_term;
  j["g1_term"] = a.result.g1_term;
  j["zero_mode_subtraction"] = a.result.zero_mode_subtraction;
  j["value"] = a.result.value;
  j["error_estimate"] = a.result.error_estimate;
  j["e0_coefficients"] = e0_json(a.result.e0);
  if (a.annulus) {
    j["without_zero_mode"] = a.annulus->without_zero_mode;
    j["angular_tail"] = a.annulus->angular_tail;
  }
  j["reference"] = reference_json(p, c.order);
  j["config"] = config_echo(c);
  os << to_text(j);
}

void cmd_spectrum(const RunConfig& c, std::ostream& os) {
  const auto p = make_problem(c);
  const auto m = resolve_method(p, c);
  const auto s = spectrum_for(p, c, m);
  os << csv_preamble(c, "spectrum");
  os << "# method_used = " << to_string(m) << "\n";
  if (s.zero_mode_removed) os << "# zero mode (E = 0) excluded\n";
  os << "index,eigenvalue,multiplicity,accuracy\n";
  std::size_t index = 1;
  for (const auto& e : s.entries) {
    os << index << "," << fmt(e.value) << "," << e.multiplicity << "," << fmt(e.accuracy) << "\n";
    index += static_cast<std::size_t>(e.multiplicity);
  }
}

int cmd_validate(const RunConfig& c, std::ostream& os) {
  check_order(c.order);
  const auto p = make_problem(c);
  const auto m = resolve_method(p, c);
  double analytic_value = 0.0;
  if (p.name == "disk") {
    if (c.order != 2) throw ParameterError("the planar Z1 diverges; use --order 2");
    analytic_value = annulus_limit();
  } else {
    analytic_value = analytic(p, c).result.value;
  }
  const auto s = spectrum_for(p, c, m);
  NumericSumRule n;
  if (m == SpectrumMethod::bessel) {
    if (c.order != 2) throw ParameterError("the planar Z1 diverges; use --order 2");
    n = numeric_sum_rule(s, 2, fit_weyl(s));
  } else if (m == SpectrumMethod::rayleigh_ritz) {
    n.p = c.order;
    n.partial = n.value = s.partial_sum(c.order);
    n.count = s.count();
    n.tail_model = "none";
  } else {
    n = numeric_sum_rule(s, c.order);
  }
  const double tol = c.tol.value_or(default_tolerance(m));
  const double diff = n.value - analytic_value;
  const bool pass = std::abs(diff) <= tol;
  json j;
  j["problem"] = p.name;
  j["bc"] = std::string(to_string(p.bc));
  j["order"] = c.order;
  j["method"] = std::string(to_string(m));
  j["analytic"] = analytic_value;
  j["numeric"] = n.value;
  j["difference"] = diff;
  j["tolerance"] = tol;
  j["pass"] = pass;
  json detail;
  detail["count"] = n.count;
  detail["partial_sum"] = n.partial;
  detail["tail"] = n.tail;
  detail["tail_model"] = std::string(n.tail_model);
  detail["error_estimate"] = n.error_estimate;
  j["numeric_detail"] = detail;
  j["reference"] = reference_json(p, c.order);
  j["config"] = config_echo(c);
  os << to_text(j);
  return pass ? ExitCode::ok : ExitCode::validation_failed;
}

void cmd_annulus_sweep(const RunConfig& c, std::ostream& os) {
  std::vector<double> grid = c.rmin_grid;
  if (grid.empty()) grid = {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9};
  for (double r : grid)
    if (!(r > 0.0 && r < 1.0)) throw ParameterError("r_min values must lie in (0, 1)");
  AnnulusOptions o;
  o.sum_rule = sum_rule_options(c);
  os << csv_preamble(c, "annulus-sweep");
  os << "r_min,z2_exact,z2_without_zero_mode,z2_asymptotic" << (c.numeric ? ",z2_numeric" : "") << "\n";
  for (double r : grid) {
    const auto a = annulus_z2(r, o);
    os << fmt(r) << "," << fmt(a.result.value) << "," << fmt(a.without_zero_mode) << "," << fmt(annulus_asymptotic(r));
    if (c.numeric) {
      const auto s = disk_annulus_spectrum(r, static_cast<std::size_t>(c.count));
      os << "," << fmt(numeric_sum_rule(s, 2, fit_weyl(s)).value);
    }
    os << "\n";
  }
}

int cmd_density_check(const RunConfig& c, std::ostream& os) {
  const auto p = make_problem(c);
  PositivityReport r;
  if (p.density) r = validate_positivity(*p.density);
  else r = {true, 0.0, 1.0};
  json j;
  j["problem"] = p.name;
  j["density"] = p.density ? p.density->describe() : "disk";
  j["ok"] = r.ok;
  j["min_x"] = r.x;
  j["min_value"] = r.value;
  j["config"] = config_echo(c);
  os << to_text(j);
  return r.ok ? ExitCode::ok : ExitCode::validation_failed;
}

int exit_code_for(const Error& e) {
  const std::string_view k = e.kind();
  if (k == "parameter" || k == "syntax" || k == "unsupported" || k == "no-zero-mode") return ExitCode::config_error;
  return ExitCode::numeric_failure;
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message, int code,
                  const json& extra = json::object()) {
  json j;
  j["error"] = std::string(kind);
  j["message"] = message;
  j["exit_code"] = code;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  err << to_text(j);
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Spectral sum rules for inhomogeneous strings and membranes", "sumrules"};
  app.set_config("--config", "", "TOML-style key = value file; flags override it")->check(CLI::ExistingFile);
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("--problem", c.problem, "uniform, borg, oscillating, annulus or disk")
      ->check(CLI::IsMember({"uniform", "borg", "oscillating", "annulus", "disk"}));
  app.add_option("--length", c.length, "interval length for uniform and expression densities");
  app.add_option("--alpha", c.alpha, "borg parameter (> -1)");
  app.add_option("--epsilon", c.epsilon, "oscillating period (> 0)");
  app.add_option("--phase", c.phase, "oscillating phase offset");
  app.add_option("--rmin", c.rmin, "annulus inner radius in (0, 1)");
  app.add_option("--bc", c.bc, "dirichlet, neumann or periodic");
  app.add_option("--order", c.order, "sum-rule order p (1 or 2)");
  app.add_option("--count", c.count, "number of eigenvalues");
  app.add_option("--method", c.method, "pruefer, monodromy, rayleigh-ritz or bessel");
  app.add_option("--rr-states", c.rr_states, "Rayleigh-Ritz basis size");
  app.add_option("--density", c.density, "density expression in x on [-length/2, length/2]");
  std::vector<std::string> params;
  app.add_option("--param", params, "expression parameter name=value (repeatable)");
  app.add_option("--out", c.out, "write the result here instead of stdout");
  app.add_option("--tol", c.tol, "validation tolerance; quadrature / eigenvalue tolerance elsewhere");
  app.add_option("--rmin-grid", c.rmin_grid, "annulus-sweep radii")->delimiter(',');
  app.add_flag("--numeric", c.numeric, "annulus-sweep: add the Bessel-spectrum column");
  app.require_subcommand(1, 1);
  for (const char* name : {"compute", "spectrum", "validate", "annulus-sweep", "density-check"}) {
    app.add_subcommand(name)->fallthrough();
  }
  static const std::map<std::string, std::string> descriptions{
      {"compute", "analytic sum rule (JSON)"},
      {"spectrum", "numeric eigenvalues (CSV)"},
      {"validate", "analytic vs numeric sum rule (JSON; exit 1 on mismatch)"},
      {"annulus-sweep", "annulus Z2 against r_min (CSV)"},
      {"density-check", "positivity scan of the density (JSON; exit 1 on violation)"}};
  for (auto* sub : app.get_subcommands({})) sub->description(descriptions.at(sub->get_name()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ExitCode::ok;
  } catch (const CLI::ParseError& e) {
    report_error(err, "config", e.what(), ExitCode::config_error);
    return ExitCode::config_error;
  }
  c.command = app.get_subcommands().front()->get_name();
  if (auto* opt = app.get_option("--config"); opt->count() > 0) c.config_file = opt->as<std::string>();

  try {
    for (const auto& kv : params) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) throw ParameterError("--param expects name=value, got '" + kv + "'");
      std::size_t used = 0;
      const std::string value = kv.substr(eq + 1);
      double v = 0.0;
      try {
        v = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size()) throw ParameterError("--param value is not a number: '" + kv + "'");
      c.params[kv.substr(0, eq)] = v;
    }

    std::ostringstream buffer;
    int code = ExitCode::ok;
    if (c.command == "compute") cmd_compute(c, buffer);
    else if (c.command == "spectrum") cmd_spectrum(c, buffer);
    else if (c.command == "validate") code = cmd_validate(c, buffer);
    else if (c.command == "annulus-sweep") cmd_annulus_sweep(c, buffer);
    else code = cmd_density_check(c, buffer);

    if (c.out.empty()) {
      out << buffer.str();
    } else {
      std::ofstream f(c.out, std::ios::binary);
      if (!f) throw ParameterError("cannot open output file '" + c.out + "'");
      f << buffer.str();
    }
    return code;
  } catch (const SyntaxError& e) {
    json extra;
    extra["offset"] = e.offset();
    extra["expected"] = e.expected();
    report_error(err, e.kind(), e.what(), ExitCode::config_error, extra);
    return ExitCode::config_error;
  } catch (const AccuracyError& e) {
    json extra;
    extra["best_estimate"] = e.best_estimate();
    extra["error_estimate"] = e.error_estimate();
    report_error(err, e.kind(), e.what(), ExitCode::numeric_failure, extra);
    return ExitCode::numeric_failure;
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    report_error(err, e.kind(), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what(), ExitCode::numeric_failure);
    return ExitCode::numeric_failure;
  }
}

} // namespace sumrules::cli
