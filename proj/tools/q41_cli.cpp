// q41: command-line front end for charts, invariants, transforms and energies.
//
//   q41 invariants|verify|transform|energy|mesh|catalog-list [options]
//
// Exit status: 0 ok, 1 a verification tolerance failed, 2 configuration or runtime error
// (reported as JSON on stderr).

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "q41/q41.hpp"
#include "q41/report.hpp"

namespace {

using q41::Error;
using q41::ErrorCode;
using q41::Json;

struct RunConfig {
  std::string command;
  std::string surface = "torus";
  std::map<std::string, double> params;
  std::string dsl;
  int nu = 0, nv = 0;  // 0: command default
  int order = 8;
  std::map<std::string, double> tol;
  std::string chain;
  bool abs_integrand = false;
  std::string out;
  int threads = 0;
};

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> t{
      {"umbilic", 1e-8},        {"gauge_pairing", 1e-8},  {"gauge_conditioning", 0.25},
      {"structure", 1e-8},      {"integrability", 1e-8},  {"willmore", 1e-8},
      {"swillmore", 1e-8},      {"gauss", 1e-8},          {"theta", 1e-8},
      {"willmore_bound", 1e-6}, {"singular_bound", 1e8},    {"inverse", 1e-8}};
  return t;
}

double tolerance(const RunConfig& c, const std::string& name) {
  auto it = c.tol.find(name);
  return it != c.tol.end() ? it->second : default_tolerances().at(name);
}

void set_tolerance(RunConfig& c, const std::string& name, double value) {
  if (!default_tolerances().count(name)) throw Error(ErrorCode::InvalidConfig, "unknown tolerance '" + name + "'");
  if (!(value > 0.0)) throw Error(ErrorCode::InvalidConfig, "tolerance '" + name + "' must be positive");
  c.tol[name] = value;
}

std::pair<std::string, std::string> split_assignment(const std::string& s, const char* what) {
  const auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::InvalidConfig, std::string("expected NAME=VALUE for ") + what + ", got '" + s + "'");
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

std::pair<int, int> parse_grid(const std::string& s) {
  const auto x = s.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    std::size_t a = 0, b = 0;
    const int nu = std::stoi(s.substr(0, x), &a), nv = std::stoi(s.substr(x + 1), &b);
    if (a != x || b != s.size() - x - 1) throw std::invalid_argument(s);
    return {nu, nv};
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidConfig, "grid must look like NUxNV, got '" + s + "'");
  }
}

double param_value(const Json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return q41::dsl_constant(v.get<std::string>());
  throw Error(ErrorCode::InvalidConfig, "parameter values must be numbers or expressions");
}

/// Fields of a JSON config file; command-line flags applied afterwards win.
void apply_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read config '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  static const std::set<std::string> known{"surface", "params", "dsl",   "grid",          "order",
                                           "tol",     "chain",  "out",   "abs_integrand", "threads"};
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!known.count(it.key())) throw Error(ErrorCode::InvalidConfig, "unknown config key '" + it.key() + "'");
    }
    if (j.contains("surface")) c.surface = j["surface"].get<std::string>();
    if (j.contains("dsl")) c.dsl = j["dsl"].get<std::string>();
    if (j.contains("params")) {
      for (auto it = j["params"].begin(); it != j["params"].end(); ++it) c.params[it.key()] = param_value(it.value());
    }
    if (j.contains("grid")) {
      if (j["grid"].is_string()) {
        std::tie(c.nu, c.nv) = parse_grid(j["grid"].get<std::string>());
      } else {
        c.nu = j["grid"].at(0).get<int>();
        c.nv = j["grid"].at(1).get<int>();
      }
    }
    if (j.contains("order")) c.order = j["order"].get<int>();
    if (j.contains("tol")) {
      for (auto it = j["tol"].begin(); it != j["tol"].end(); ++it) set_tolerance(c, it.key(), it.value().get<double>());
    }
    if (j.contains("chain")) c.chain = j["chain"].get<std::string>();
    if (j.contains("out")) c.out = j["out"].get<std::string>();
    if (j.contains("abs_integrand")) c.abs_integrand = j["abs_integrand"].get<bool>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("bad config value: ") + e.what());
  }
}

q41::FrameTolerances frame_tolerances(const RunConfig& c) {
  q41::FrameTolerances t;
  t.umbilic = tolerance(c, "umbilic");
  t.gauge_pairing = tolerance(c, "gauge_pairing");
  t.gauge_conditioning = tolerance(c, "gauge_conditioning");
  return t;
}

q41::TransformOptions transform_options(const RunConfig& c) {
  q41::TransformOptions o;
  o.frame = frame_tolerances(c);
  o.willmore_bound = tolerance(c, "willmore_bound");
  return o;
}

q41::AnalysisOptions analysis_options(const RunConfig& c) {
  q41::AnalysisOptions o;
  o.frame = frame_tolerances(c);
  o.willmore_bound = tolerance(c, "willmore_bound");
  o.swillmore_bound = tolerance(c, "willmore_bound");
  o.threads = c.threads;
  return o;
}

q41::SurfaceChart base_chart(const RunConfig& c) {
  if (!c.dsl.empty()) {
    const auto program = q41::dsl_parse_file(c.dsl);
    return q41::dsl_chart(program, c.params, std::filesystem::path(c.dsl).stem().string());
  }
  const auto names = q41::catalog_names();
  if (std::find(names.begin(), names.end(), c.surface) == names.end()) {
    throw Error(ErrorCode::InvalidConfig, "unknown catalog surface '" + c.surface + "'");
  }
  return q41::catalog_lookup(c.surface, c.params);
}

std::vector<q41::TransformTag> chain_tags(const RunConfig& c) {
  if (c.chain.empty()) return {};
  auto tags = q41::parse_chain(c.chain);
  if (tags.size() > 4) throw Error(ErrorCode::InvalidConfig, "transform chains are limited to 4 steps");
  return tags;
}

q41::TransformedSurface surface(const RunConfig& c) {
  return q41::apply_chain(base_chart(c), chain_tags(c), transform_options(c));
}

q41::GridSpec grid_for(const RunConfig& c, const q41::SurfaceChart& chart, int default_n) {
  const int nu = c.nu ? c.nu : default_n, nv = c.nv ? c.nv : default_n;
  if (nu < 4 || nv < 4) throw Error(ErrorCode::InvalidConfig, "grid must be at least 4x4");
  if (nu > 4096 || nv > 4096) throw Error(ErrorCode::InvalidConfig, "grid is limited to 4096x4096");
  return q41::GridSpec{nu, nv, chart.domain()};
}

Json params_json(const q41::SurfaceChart& chart) {
  Json p = Json::object();
  for (const auto& [k, v] : chart.params()) p[k] = v;
  return p;
}

Json chain_json(const std::vector<q41::TransformTag>& tags) {
  Json a = Json::array();
  for (auto t : tags) a.push_back(q41::tag_name(t));
  return a;
}

using q41::format_double;

// Commands. Each writes its document to `os` and returns the exit status.

int cmd_invariants(const RunConfig& c, std::ostream& os) {
  if (c.order < 4 || c.order > 16) throw Error(ErrorCode::InvalidConfig, "invariants need 4 <= order <= 16");
  const auto ts = surface(c);
  const auto& chart = ts.chart();
  const auto grid = grid_for(c, chart, 8);
  const auto tol = frame_tolerances(c);
  const auto rows = q41::parallel_map(
      grid.size(),
      [&](std::size_t k) {
        const auto [u, v] = grid.point(k);
        std::vector<std::string> row{format_double(u), format_double(v)};
        try {
          const auto inv = q41::invariants_at(chart, u, v, c.order, tol);
          for (const q41::CJet* j : {&inv.lambda1, &inv.lambda2, &inv.s, &inv.alpha, &inv.gamma1,
                                     &inv.gamma2, &inv.beta}) {
            row.push_back(format_double(j->value().real()));
            row.push_back(format_double(j->value().imag()));
          }
          row.push_back(format_double(inv.kappa_pair.value().real()));
          row.push_back(format_double(inv.theta.value().real()));
          row.push_back(format_double(inv.theta.value().imag()));
          row.push_back(q41::point_class_name(q41::classify_point(inv)));
        } catch (const Error& e) {
          if (!q41::detail::is_pointwise_degeneracy(e.code())) throw;
          row.resize(2 + 17);
          row.push_back("degenerate");
        }
        return row;
      },
      c.threads);
  q41::CsvWriter w(os);
  w.row({"u", "v", "lambda1_re", "lambda1_im", "lambda2_re", "lambda2_im", "s_re", "s_im", "alpha_re",
         "alpha_im", "gamma1_re", "gamma1_im", "gamma2_re", "gamma2_im", "beta_re", "beta_im",
         "kappa_pair", "theta_re", "theta_im", "class"});
  for (const auto& r : rows) w.row(r);
  return 0;
}

Json checked(const q41::ResidualReport& r, double tol, bool applicable) {
  const bool passed = r.evaluated() > 0 ? r.max_abs <= tol : true;
  return Json{{"name", r.identity}, {"tolerance", tol}, {"applicable", applicable}, {"passed", passed},
              {"report", q41::to_json(r)}};
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
  const auto ts = surface(c);
  const auto& chart = ts.chart();
  const auto grid = grid_for(c, chart, 32);
  const auto opt = analysis_options(c);
  Json reports = Json::array();
  reports.push_back(checked(q41::check_structure(chart, grid, opt), tolerance(c, "structure"), true));
  reports.push_back(checked(q41::check_integrability(chart, grid, opt), tolerance(c, "integrability"), true));
  const auto w = q41::willmore_residual(chart, grid, opt);
  const bool willmore = w.evaluated() > 0 && w.max_abs <= tolerance(c, "willmore");
  reports.push_back(checked(w, tolerance(c, "willmore"), true));
  // S-Willmore is a classification, not an identity: reported but never fails the run
  reports.push_back(checked(q41::swillmore_residual(chart, grid, opt), tolerance(c, "swillmore"), false));
  reports.push_back(checked(q41::gauss_metric_check(chart, grid, opt), tolerance(c, "gauss"), true));
  if (willmore) {
    reports.push_back(checked(q41::theta_holomorphy(chart, grid, opt), tolerance(c, "theta"), true));
  } else {
    reports.push_back(Json{{"name", "theta_holomorphy"},
                           {"tolerance", tolerance(c, "theta")},
                           {"applicable", false},
                           {"passed", false},
                           {"skipped", "NotWillmore"}});
  }
  bool all = true;
  for (const auto& r : reports) {
    if (r["applicable"].get<bool>() && !r["passed"].get<bool>()) all = false;
  }
  Json doc{{"command", "verify"},         {"surface", chart.name()}, {"params", params_json(chart)},
           {"chain", chain_json(ts.steps())}, {"reports", reports},  {"passed", all}};
  os << doc.dump(2) << '\n';
  return all ? 0 : 1;
}

int cmd_transform(const RunConfig& c, std::ostream& os) {
  const auto tags = chain_tags(c);
  if (tags.empty()) throw Error(ErrorCode::InvalidConfig, "transform needs --chain");
  const auto base = base_chart(c);
  const auto ts = q41::apply_chain(base, tags, transform_options(c));
  const auto& chart = ts.chart();
  const auto grid = grid_for(c, chart, 16);
  const auto opt = analysis_options(c);

  const auto dist = q41::parallel_map(
      grid.size(),
      [&](std::size_t k) -> double {
        const auto [u, v] = grid.point(k);
        try {
          return q41::projective_distance(q41::real_value(base.eval(u, v, 0)),
                                          q41::real_value(chart.eval(u, v, 0)));
        } catch (const Error& e) {
          if (!q41::detail::is_pointwise_degeneracy(e.code())) throw;
          return -1.0;
        }
      },
      c.threads);
  double sup = 0.0;
  std::size_t degenerate = 0;
  for (double d : dist) {
    if (d < 0.0) {
      ++degenerate;
    } else {
      sup = std::max(sup, d);
    }
  }

  const auto w = q41::willmore_residual(chart, grid, opt);
  const double wtol = tolerance(c, "willmore_bound");
  auto duality_of = [&](const q41::SurfaceChart& s) -> Json {
    try {
      return q41::to_json(q41::duality_report(s, grid, transform_options(c)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotWillmore) throw;
      return Json{{"skipped", "NotWillmore"}};
    }
  };
  // L and R are mutual inverses: a chain that cancels to nothing must return the base
  std::vector<q41::TransformTag> net;
  for (auto t : tags) {
    const bool polar = t == q41::TransformTag::PolarLeft || t == q41::TransformTag::PolarRight;
    const bool cancels = polar && !net.empty() && net.back() != t &&
                         (net.back() == q41::TransformTag::PolarLeft || net.back() == q41::TransformTag::PolarRight);
    if (cancels) {
      net.pop_back();
    } else {
      net.push_back(t);
    }
  }
  const bool round_trip = net.empty();
  bool passed = w.evaluated() > 0 && w.max_abs <= wtol;
  if (round_trip) passed = passed && sup <= tolerance(c, "inverse");
  Json doc{{"command", "transform"},
           {"surface", chart.name()},
           {"params", params_json(base)},
           {"chain", chain_json(tags)},
           {"order_cost", ts.order_cost()},
           {"distance_to_base",
            Json{{"sup", sup}, {"evaluated", dist.size() - degenerate}, {"degenerate", degenerate}}},
           {"round_trip", round_trip},
           {"willmore", checked(w, wtol, true)},
           {"duality", duality_of(chart)},
           {"duality_base", duality_of(base)},
           {"passed", passed}};
  os << doc.dump(2) << '\n';
  return passed ? 0 : 1;
}

int cmd_energy(const RunConfig& c, std::ostream& os) {
  const auto tags = chain_tags(c);
  const auto ts = surface(c);
  const auto& chart = ts.chart();
  q41::EnergyOptions eo;
  eo.nu = c.nu ? c.nu : 128;
  eo.nv = c.nv ? c.nv : 128;
  if (eo.nu < 4 || eo.nv < 4) throw Error(ErrorCode::InvalidConfig, "grid must be at least 4x4");
  eo.abs_integrand = c.abs_integrand;
  eo.singular_bound = tolerance(c, "singular_bound");
  eo.frame = frame_tolerances(c);
  eo.threads = c.threads;
  const auto e = q41::willmore_energy(chart, eo);
  Json doc{{"command", "energy"},     {"surface", chart.name()}, {"params", params_json(chart)},
           {"chain", chain_json(tags)}, {"abs_integrand", c.abs_integrand}, {"energy", q41::to_json(e)}};
  const auto& p = chart.params();
  if (c.dsl.empty() && tags.empty() && c.surface == "torus" && p.count("p") && p.count("q")) {
    const double pp = p.at("p"), qq = p.at("q");
    const double ref = pp * pp * std::numbers::pi * std::numbers::pi / std::sqrt(pp * pp - qq * qq);
    doc["reference"] = ref;
    doc["relative_error"] = std::abs(e.value - ref) / ref;
  }
  os << doc.dump(2) << '\n';
  return 0;
}

int cmd_mesh(const RunConfig& c, std::ostream& os) {
  const auto ts = surface(c);
  const auto& chart = ts.chart();
  const auto grid = grid_for(c, chart, 32);
  const auto rows = q41::parallel_map(
      grid.size(),
      [&](std::size_t k) {
        const auto [u, v] = grid.point(k);
        std::vector<std::string> row{format_double(u), format_double(v)};
        try {
          const q41::Vec6 y = q41::real_value(chart.eval(u, v, 0));
          const double d = y[5] - y[0];
          if (std::abs(d) <= 1e-12 * q41::euclidean_norm(y)) {
            row.insert(row.end(), {"", "", "", "", "1"});
          } else {
            for (int i = 1; i <= 4; ++i) row.push_back(format_double(y[i] / d));
            row.push_back("0");
          }
        } catch (const Error& e) {
          if (!q41::detail::is_pointwise_degeneracy(e.code())) throw;
          row.insert(row.end(), {"", "", "", "", "1"});
        }
        return row;
      },
      c.threads);
  q41::CsvWriter w(os);
  w.row({"u", "v", "x1", "x2", "x3", "x4", "inf"});
  for (const auto& r : rows) w.row(r);
  return 0;
}

int cmd_catalog_list(const RunConfig&, std::ostream& os) {
  Json list = Json::array();
  for (const auto& name : q41::catalog_names()) {
    const auto ch = q41::catalog_lookup(name, {});
    list.push_back({{"name", name},
                    {"params", params_json(ch)},
                    {"domain", q41::to_json(ch.domain())},
                    {"periodic_u", ch.periodic_u()},
                    {"periodic_v", ch.periodic_v()}});
  }
  os << Json{{"command", "catalog-list"}, {"surfaces", list}}.dump(2) << '\n';
  return 0;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spacelike surfaces in Q^4_1: invariants, transforms, energies"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path, surface_flag, dsl_flag, grid_flag, chain_flag, out_flag;
  std::vector<std::string> param_flags, tol_flags;
  int order_flag = 0, threads_flag = 0;
  bool abs_flag = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file; flags take precedence");
    sub->add_option("--surface", surface_flag, "catalog surface name");
    sub->add_option("--param", param_flags, "surface parameter NAME=VALUE (VALUE may be an expression)");
    sub->add_option("--dsl", dsl_flag, "DSL file defining the surface");
    sub->add_option("--grid", grid_flag, "grid NUxNV");
    sub->add_option("--order", order_flag, "jet order");
    sub->add_option("--tol", tol_flags, "tolerance NAME=VALUE");
    sub->add_option("--chain", chain_flag, "transform chain, e.g. L,R,adjL");
    sub->add_flag("--abs-integrand", abs_flag, "integrate |<kappa, kappa-bar>|");
    sub->add_option("--out", out_flag, "output path (default: stdout)");
    sub->add_option("--threads", threads_flag, "worker threads (default: hardware)");
  };
  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"invariants", "verify", "transform", "energy", "mesh", "catalog-list"}) {
    subs[name] = app.add_subcommand(name);
    add_common(subs[name]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << Json{{"error", "InvalidConfig"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }

  try {
    for (const auto& [name, sub] : subs) {
      if (sub->parsed()) cfg.command = name;
    }
    CLI::App* sub = subs.at(cfg.command);
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    if (sub->count("--surface")) cfg.surface = surface_flag;
    if (sub->count("--dsl")) cfg.dsl = dsl_flag;
    for (const auto& p : param_flags) {
      const auto [k, v] = split_assignment(p, "--param");
      cfg.params[k] = q41::dsl_constant(v);
    }
    if (sub->count("--grid")) std::tie(cfg.nu, cfg.nv) = parse_grid(grid_flag);
    if (sub->count("--order")) cfg.order = order_flag;
    for (const auto& t : tol_flags) {
      const auto [k, v] = split_assignment(t, "--tol");
      set_tolerance(cfg, k, q41::dsl_constant(v));
    }
    if (sub->count("--chain")) cfg.chain = chain_flag;
    if (abs_flag) cfg.abs_integrand = true;
    if (sub->count("--out")) cfg.out = out_flag;
    if (sub->count("--threads")) cfg.threads = threads_flag;

    std::ostringstream doc;
    int status = 0;
    if (cfg.command == "invariants") status = cmd_invariants(cfg, doc);
    if (cfg.command == "verify") status = cmd_verify(cfg, doc);
    if (cfg.command == "transform") status = cmd_transform(cfg, doc);
    if (cfg.command == "energy") status = cmd_energy(cfg, doc);
    if (cfg.command == "mesh") status = cmd_mesh(cfg, doc);
    if (cfg.command == "catalog-list") status = cmd_catalog_list(cfg, doc);

    if (cfg.out.empty()) {
      std::cout << doc.str();
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw Error(ErrorCode::IoError, "cannot write '" + cfg.out + "'");
      f << doc.str();
      std::ofstream meta(cfg.out + ".meta.json", std::ios::binary);
      Json args = Json::array();
      for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
      meta << Json{{"generated_at", utc_timestamp()}, {"command", cfg.command}, {"argv", args}}.dump(2) << '\n';
    }
    return status;
  } catch (const Error& e) {
    std::cerr << q41::error_json(e).dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << Json{{"error", "InternalError"}, {"message", e.what()}}.dump() << '\n';
    return 2;
  }
}
