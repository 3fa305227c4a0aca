#include "adplab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "adplab/certify.hpp"
#include "adplab/constants.hpp"
#include "adplab/phi.hpp"
#include "adplab/reduction.hpp"
#include "adplab/rendezvous.hpp"

namespace adp::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSeedEnv = "ADPLAB_SEED";

// Flags shared by every subcommand, with the option handles needed to tell
// an explicit flag from a default.
struct CommonFlags {
  RunConfig cfg;
  std::string config_path;
  std::string format_name = "json";
  bool timing = false;
  std::map<std::string, CLI::Option*> options;

  bool given(const std::string& key) const {
    auto it = options.find(key);
    return it != options.end() && it->second->count() > 0;
  }
};

void add_common(CLI::App* app, CommonFlags& f) {
  f.options["p_list"] = app->add_option("--p", f.cfg.p_list, "Exponent list, comma separated")->delimiter(',');
  f.options["grid"] = app->add_option("--grid", f.cfg.grid, "Grid points per sweep");
  f.options["samples"] = app->add_option("--samples", f.cfg.samples, "Monte Carlo samples");
  f.options["seed"] = app->add_option("--seed", f.cfg.seed, "Random seed (default $ADPLAB_SEED or 42)");
  f.options["enum_cap"] = app->add_option("--enum-cap", f.cfg.enum_cap, "Largest n enumerated exactly");
  f.options["slack"] = app->add_option("--slack", f.cfg.slack, "Absolute slack for inequality sweeps");
  f.options["output_path"] = app->add_option("--output,-o", f.cfg.output_path, "Write the report to this file");
  f.options["format"] =
      app->add_option("--format", f.format_name, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  f.options["threads"] = app->add_option("--threads", f.cfg.threads, "Worker thread cap");
  app->add_option("--config", f.config_path, "Flat JSON file mirroring the run configuration");
  app->add_flag("--timing", f.timing, "Record wall-clock runtimes in reports");
}

template <class T>
T json_value(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw UsageError("config key '" + key + "' has the wrong type");
  }
}

void apply_config_file(CommonFlags& f) {
  if (f.config_path.empty()) return;
  std::ifstream in(f.config_path);
  if (!in) throw UsageError("cannot open config file " + f.config_path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object()) throw UsageError("config file must hold a JSON object");

  RunConfig& c = f.cfg;
  for (const auto& [key, value] : doc.items()) {
    if (f.given(key == "format" ? "format" : key)) continue;
    if (key == "p_list") {
      c.p_list = json_value<std::vector<double>>(value, key);
    } else if (key == "grid") {
      c.grid = json_value<std::size_t>(value, key);
    } else if (key == "samples") {
      c.samples = json_value<std::uint64_t>(value, key);
    } else if (key == "seed") {
      c.seed = json_value<std::uint64_t>(value, key);
    } else if (key == "enum_cap") {
      c.enum_cap = json_value<unsigned>(value, key);
    } else if (key == "slack") {
      c.slack = json_value<double>(value, key);
    } else if (key == "output_path") {
      c.output_path = json_value<std::string>(value, key);
    } else if (key == "format") {
      f.format_name = json_value<std::string>(value, key);
    } else if (key == "threads") {
      c.threads = json_value<unsigned>(value, key);
    } else {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
}

// Flags beat the config file; both beat the environment.
void resolve(CommonFlags& f) {
  const bool seed_from_file = [&] {
    if (f.config_path.empty()) return false;
    std::ifstream in(f.config_path);
    const json doc = json::parse(in, nullptr, false);
    return doc.is_object() && doc.contains("seed");
  }();
  apply_config_file(f);
  if (!f.given("seed") && !seed_from_file) {
    if (const char* env = std::getenv(kSeedEnv); env != nullptr && *env != '\0') {
      try {
        std::size_t used = 0;
        f.cfg.seed = std::stoull(env, &used);
        if (used != std::string(env).size()) throw std::invalid_argument(env);
      } catch (const std::exception&) {
        throw UsageError(std::string(kSeedEnv) + " is not an unsigned integer");
      }
    }
  }
  if (f.format_name == "json") {
    f.cfg.format = Format::json;
  } else if (f.format_name == "csv") {
    f.cfg.format = Format::csv;
  } else {
    throw UsageError("format must be json or csv");
  }
  validate(f.cfg);
}

SuiteConfig suite_config(const RunConfig& c) {
  SuiteConfig s;
  s.grid = c.grid;
  s.slack = c.slack;
  s.seed = c.seed;
  s.phi.enum_cap = c.enum_cap;
  s.phi.threads = c.threads;
  s.mc_samples = c.samples;
  return s;
}

double rounded(double x) { return round_sig(x); }

json rounded_array(std::span<const double> xs) {
  json a = json::array();
  for (double x : xs) a.push_back(rounded(x));
  return a;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.output_path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + c.output_path);
  file << text;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

Exponent single_exponent(const CommonFlags& f) {
  if (f.cfg.p_list.size() != 1) throw UsageError("exactly one --p value is required");
  return Exponent(f.cfg.p_list.front());
}

// certify ------------------------------------------------------------------

struct CertifyFlags {
  CommonFlags common;
  std::string statement;
  bool all = false;
  std::optional<std::size_t> n;
  std::optional<std::size_t> configs;
};

std::vector<CertReport> run_statement(Statement id, const CertifyFlags& f, const SuiteConfig& s) {
  std::vector<CertReport> out;
  if (id == Statement::lemma3) {
    const std::size_t n = f.n.value_or(s.lemma3_max_n);
    if (n < 1 || n > kLemma3Cap) {
      throw UsageError("lemma3 needs 1 <= n <= " + std::to_string(kLemma3Cap) + ", got " + std::to_string(n));
    }
    std::vector<double> equal(n, 1.0);
    std::vector<double> geometric(n);
    for (std::size_t i = 0; i < n; ++i) geometric[i] = std::ldexp(1.0, -static_cast<int>(i));
    out.push_back(certify_lemma3(s.lemma3_t, equal));
    out.push_back(certify_lemma3(s.lemma3_t, geometric));
    return out;
  }
  if (id == Statement::intro_chain) {
    out.push_back(certify_intro_chain(s.slack));
    return out;
  }
  for (double pv : f.common.cfg.p_list) {
    const Exponent p(pv);
    switch (id) {
      case Statement::lemma5:
        out.push_back(certify_lemma5(p, s.grid, s.slack));
        break;
      case Statement::lemma2_v:
        out.push_back(certify_lemma2(p, s.grid, s.slack).first);
        break;
      case Statement::lemma2_w:
        out.push_back(certify_lemma2(p, s.grid, s.slack).second);
        break;
      case Statement::prop4:
      case Statement::cor1: {
        std::vector<std::size_t> ns = s.n_values;
        if (f.n) ns = {*f.n};
        for (std::size_t d : s.dims) {
          out.push_back(id == Statement::prop4
                            ? certify_prop4(p, ns, d, s.samples_per_n, s.seed, s.reduction_slack)
                            : certify_cor1(p, ns, d, s.samples_per_n, s.seed, s.reduction_slack));
        }
        break;
      }
      case Statement::prop1_phi:
        out.push_back(certify_prop1(p, f.n.value_or(s.prop1_n), f.configs.value_or(s.prop1_configs), s.seed, s));
        break;
      case Statement::lemma1_limits:
        out.push_back(certify_lemma1(p));
        break;
      case Statement::prop2_grad:
        if (f.n) {
          out.push_back(certify_prop2(p, *f.n, f.configs.value_or(s.prop2_configs), s.seed, s));
        } else {
          SuiteConfig local = s;
          if (f.configs) local.prop2_configs = *f.configs;
          out.push_back(prop2_threshold(p, local));
        }
        break;
      default:
        break;
    }
  }
  return out;
}

int cmd_certify(const CertifyFlags& f, std::ostream& out, std::ostream& err) {
  const SuiteConfig s = suite_config(f.common.cfg);
  std::vector<CertReport> reports;
  if (f.all) {
    reports = run_all(f.common.cfg.p_list, s);
  } else {
    const auto id = parse_statement(f.statement);
    if (!id) throw UsageError("unknown statement '" + f.statement + "'");
    reports = run_statement(*id, f, s);
  }
  const std::string text = f.common.cfg.format == Format::csv ? reports_to_csv(reports, f.common.timing)
                                                              : reports_to_json(reports, f.common.timing);
  emit(f.common.cfg, text, out);
  for (const auto& r : reports) {
    if (!r.passed) {
      err << to_string(r.statement_id) << " p=" << round_sig(r.p) << (r.expected_fail ? " expected fail" : " FAILED")
          << '\n';
    }
  }
  return all_passed(reports) ? kExitOk : kExitFailure;
}

// constants ----------------------------------------------------------------

json root_json(const RootResult& r) {
  return json{{"value", rounded(r.value)},
              {"bracket", json::array({rounded(r.lo), rounded(r.hi)})},
              {"tolerance", r.tolerance},
              {"iterations", r.iterations}};
}

int cmd_constants(const CommonFlags& f, const std::string& which, std::optional<double> tol, std::ostream& out) {
  json doc;
  try {
    if (which == "intro" || which == "all") doc["threshold_intro"] = root_json(threshold_intro(tol.value_or(1e-8)));
    if (which == "p0" || which == "all") doc["p_zero"] = root_json(p_zero(f.cfg.grid, tol.value_or(1e-6)));
  } catch (const std::domain_error& e) {
    throw std::runtime_error(std::string("bracket failure: ") + e.what());
  }
  emit(f.cfg, json_text(doc), out);
  return kExitOk;
}

// phi ----------------------------------------------------------------------

struct PhiFlags {
  CommonFlags common;
  std::vector<double> alphas;
  std::vector<double> us;
  std::string input_path;
  std::optional<std::size_t> n;
  bool uniform_alphas = false;
  std::optional<double> us_all;
  bool grad = false;
};

ReducedConfig phi_input(const PhiFlags& f) {
  std::vector<double> alphas = f.alphas;
  std::vector<double> us = f.us;
  if (!f.input_path.empty()) {
    std::ifstream in(f.input_path);
    if (!in) throw UsageError("cannot open " + f.input_path);
    const json doc = json::parse(in, nullptr, false);
    if (!doc.is_object() || !doc.contains("alphas") || !doc.contains("us")) {
      throw UsageError("input file must hold {\"alphas\": [...], \"us\": [...]}");
    }
    alphas = json_value<std::vector<double>>(doc["alphas"], "alphas");
    us = json_value<std::vector<double>>(doc["us"], "us");
  }
  if (f.n) {
    if (*f.n < 1) throw UsageError("--n must be >= 1");
    if (f.uniform_alphas) alphas.assign(*f.n, 1.0 / static_cast<double>(*f.n));
    if (f.us_all) us.assign(*f.n, *f.us_all);
  } else if (f.uniform_alphas || f.us_all) {
    const std::size_t n = !us.empty() ? us.size() : alphas.size();
    if (n == 0) throw UsageError("--uniform-alphas and --us-all need --n or an explicit list");
    if (f.uniform_alphas) alphas.assign(n, 1.0 / static_cast<double>(n));
    if (f.us_all) us.assign(n, *f.us_all);
  }
  if (alphas.empty() || us.empty()) throw UsageError("both alphas and us are required");
  if (alphas.size() != us.size()) throw UsageError("alphas and us differ in length");
  try {
    return ReducedConfig(std::move(alphas), std::move(us));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int cmd_phi(const PhiFlags& f, std::ostream& out) {
  const Exponent p = single_exponent(f.common);
  const ReducedConfig rc = phi_input(f);
  const RunConfig& c = f.common.cfg;
  PhiOptions opts;
  opts.enum_cap = c.enum_cap;
  opts.threads = c.threads;

  const PhiResult r = phi_auto(rc, p, opts, c.samples, c.seed);
  json doc{{"p", rounded(p.value())},
           {"n", rc.n()},
           {"value", rounded(r.value)},
           {"method", std::string(to_string(r.method))},
           {"samples", r.samples},
           {"std_error", rounded(r.std_error)}};
  if (f.grad) {
    for (double u : rc.us()) {
      if (u < 0.0) throw UsageError("--grad needs every u >= 0");
    }
    if (rc.n() <= opts.enum_cap) {
      doc["gradient"] = rounded_array(phi_gradient(rc, p, opts));
    } else {
      const GradientEstimate g = phi_gradient_mc(rc, p, c.samples, c.seed);
      doc["gradient"] = rounded_array(g.partials);
      doc["gradient_std_errors"] = rounded_array(g.std_errors);
    }
  }
  emit(c, json_text(doc), out);
  return kExitOk;
}

// rendezvous ---------------------------------------------------------------

struct RendezvousFlags {
  CommonFlags common;
  std::vector<std::string> points;
  std::vector<double> angles;
  std::size_t starts = 16;
};

std::vector<double> parse_coords(const std::string& text) {
  std::vector<double> xs;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      xs.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("bad coordinate '" + item + "' in point '" + text + "'");
    }
  }
  return xs;
}

int cmd_rendezvous(const RendezvousFlags& f, std::ostream& out) {
  const Exponent p = single_exponent(f.common);
  std::vector<LpVector> pts;
  for (const auto& text : f.points) {
    LpVector v(parse_coords(text), p);
    const double r = norm(v);
    if (r == 0.0) throw UsageError("zero point '" + text + "'");
    pts.push_back(v.scaled(1.0 / r));
  }
  for (double t : f.angles) pts.push_back(circle_point(t, p));
  if (pts.empty()) throw UsageError("give --point or --angles");
  for (const auto& v : pts) {
    if (v.dim() != pts.front().dim()) throw UsageError("points differ in dimension");
  }

  const AvgDistInterval iv = interval(pts, f.starts, f.common.cfg.seed);
  json doc{{"p", rounded(p.value())},
           {"dim", pts.front().dim()},
           {"points", pts.size()},
           {"lo", rounded(iv.lo)},
           {"hi", rounded(iv.hi)},
           {"starts", iv.starts},
           {"converged", iv.converged}};
  emit(f.common.cfg, json_text(doc), out);
  return kExitOk;
}

// sweep --------------------------------------------------------------------

int cmd_sweep(const CommonFlags& f, std::ostream& out) {
  const RunConfig& c = f.cfg;
  const char* columns[] = {"p", "u", "even", "odd", "threshold", "root_sum", "concave_ratio", "concave_chord"};
  json rows = json::array();
  std::ostringstream csv;
  csv.precision(12);
  for (std::size_t k = 0; k < std::size(columns); ++k) csv << (k ? "," : "") << columns[k];
  csv << '\n';

  for (double pv : c.p_list) {
    const Exponent p(pv);
    for (std::size_t k = 0; k < c.grid; ++k) {
      const double u = static_cast<double>(k) / static_cast<double>(c.grid - 1);
      const bool interior = u > 0.0 && u < 1.0;
      const double values[] = {pv,
                               u,
                               even_part(u, p),
                               odd_part(u, p),
                               interior ? sign_threshold(u, p) : 0.0,
                               two_point_root_sum(u, p),
                               concave_ratio(u, p),
                               concave_chord(u, p)};
      if (c.format == Format::csv) {
        for (std::size_t i = 0; i < std::size(values); ++i) csv << (i ? "," : "") << rounded(values[i]);
        csv << '\n';
      } else {
        json row;
        for (std::size_t i = 0; i < std::size(values); ++i) row[columns[i]] = rounded(values[i]);
        rows.push_back(std::move(row));
      }
    }
  }
  emit(c, c.format == Format::csv ? csv.str() : json_text(json{{"rows", rows}}), out);
  return kExitOk;
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.grid < 2) throw UsageError("grid must be >= 2");
  if (c.samples < 100) throw UsageError("samples must be >= 100");
  if (c.enum_cap < 1 || c.enum_cap > 30) throw UsageError("enum_cap must lie in [1, 30]");
  if (!(c.slack > 0.0)) throw UsageError("slack must be > 0");
  if (c.threads < 1) throw UsageError("threads must be >= 1");
  for (double p : c.p_list) {
    if (!std::isfinite(p) || p < 2.0) throw UsageError("every p must be finite and >= 2");
  }
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for the average distance property of l_p spheres", "adplab"};
  app.require_subcommand(1);

  CertifyFlags certify;
  CLI::App* certify_cmd = app.add_subcommand("certify", "Run inequality verification suites");
  add_common(certify_cmd, certify.common);
  auto* statement_opt = certify_cmd->add_option("--statement", certify.statement, "Single suite to run");
  auto* all_opt = certify_cmd->add_flag("--all", certify.all, "Run every suite");
  statement_opt->excludes(all_opt);
  certify_cmd->add_option("--n", certify.n, "Size for lemma3, prop1_phi, prop2_grad, prop4, cor1");
  certify_cmd->add_option("--configs", certify.configs, "Configurations for prop1_phi and prop2_grad");

  CommonFlags constants;
  std::string which = "all";
  std::optional<double> tol;
  CLI::App* constants_cmd = app.add_subcommand("constants", "Solve for the critical exponents");
  add_common(constants_cmd, constants);
  constants_cmd->add_option("--which", which, "intro, p0 or all")->check(CLI::IsMember({"intro", "p0", "all"}));
  constants_cmd->add_option("--tol", tol, "Bracket width")->check(CLI::PositiveNumber);

  PhiFlags phi;
  CLI::App* phi_cmd = app.add_subcommand("phi", "Evaluate the sign average");
  add_common(phi_cmd, phi.common);
  phi_cmd->add_option("--alphas", phi.alphas, "Weights, comma separated")->delimiter(',');
  phi_cmd->add_option("--us", phi.us, "Coordinates u_i, comma separated")->delimiter(',');
  phi_cmd->add_option("--input", phi.input_path, "JSON file with alphas and us");
  phi_cmd->add_option("--n", phi.n, "Size for --uniform-alphas / --us-all");
  phi_cmd->add_flag("--uniform-alphas", phi.uniform_alphas, "alpha_i = 1/n");
  phi_cmd->add_option("--us-all", phi.us_all, "Set every u_i to this value");
  phi_cmd->add_flag("--grad", phi.grad, "Also print the gradient in u");

  RendezvousFlags rdv;
  CLI::App* rdv_cmd = app.add_subcommand("rendezvous", "Range of the average distance over the unit sphere");
  add_common(rdv_cmd, rdv.common);
  rdv_cmd->add_option("--point", rdv.points, "Point as comma separated coordinates; repeatable");
  rdv_cmd->add_option("--angles", rdv.angles, "Points on the l_p circle by angle")->delimiter(',');
  rdv_cmd->add_option("--starts", rdv.starts, "Random starts")->check(CLI::PositiveNumber);

  CommonFlags sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Tabulate the scalar functions on a u grid");
  add_common(sweep_cmd, sweep);

  std::vector<std::string> argv_store{"adplab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (certify_cmd->parsed()) {
      resolve(certify.common);
      if (!certify.all && certify.statement.empty()) throw UsageError("give --statement NAME or --all");
      return cmd_certify(certify, out, err);
    }
    if (constants_cmd->parsed()) {
      resolve(constants);
      return cmd_constants(constants, which, tol, out);
    }
    if (phi_cmd->parsed()) {
      resolve(phi.common);
      return cmd_phi(phi, out);
    }
    if (rdv_cmd->parsed()) {
      resolve(rdv.common);
      return cmd_rendezvous(rdv, out);
    }
    resolve(sweep);
    return cmd_sweep(sweep, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace adp::cli
