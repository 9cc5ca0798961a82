// Command-line driver: emits fringe scans, entanglement-visibility grids,
// one-parameter sweeps, and the library's self-check report.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmzi/qmzi.hpp"

namespace {

struct Options {
  double b0 = 0.7;
  double t = 0.0;
  double x = 0.4;
  double y = 0.0;
  double z = 0.0;
  double chi = 0.0;
  double p = 0.0;
  double q = 0.0;
  double min = 0.0;
  double max = 1.0;
  double tol = 0.0;
  std::size_t samples = 16;
  std::size_t steps = 101;
  std::uint64_t seed = 1;
  std::string param;
  std::string out;
  std::string config;

  bool z_given = false;
  bool tol_given = false;
};

// Ties a subcommand's flags to JSON config keys of the same name. Flags given
// on the command line win over config values; config values win over defaults.
class ConfigurableCommand {
 public:
  ConfigurableCommand(CLI::App* cmd, Options& opts) : cmd_(cmd), opts_(opts) {
    cmd_->add_option("--config", opts_.config, "JSON file with defaults for this command's keys");
  }

  void add_double(const std::string& name, double& var, const std::string& desc) {
    CLI::Option* opt = cmd_->add_option("--" + name, var, desc);
    keys_[name] = {opt, [&var, name](const nlohmann::json& v) {
                     if (!v.is_number())
                       throw std::invalid_argument("config key '" + name + "' must be a number");
                     var = v.get<double>();
                   }};
  }

  void add_count(const std::string& name, std::size_t& var, const std::string& desc) {
    CLI::Option* opt = cmd_->add_option("--" + name, var, desc);
    keys_[name] = {opt, [&var, name](const nlohmann::json& v) {
                     if (!v.is_number_integer() || v.get<long long>() < 0)
                       throw std::invalid_argument("config key '" + name +
                                                   "' must be a nonnegative integer");
                     var = static_cast<std::size_t>(v.get<long long>());
                   }};
  }

  void add_seed(const std::string& name, std::uint64_t& var, const std::string& desc) {
    CLI::Option* opt = cmd_->add_option("--" + name, var, desc);
    keys_[name] = {opt, [&var, name](const nlohmann::json& v) {
                     if (!v.is_number_integer() || v.get<long long>() < 0)
                       throw std::invalid_argument("config key '" + name +
                                                   "' must be a nonnegative integer");
                     var = static_cast<std::uint64_t>(v.get<long long>());
                   }};
  }

  // Overlay the config file (if any) under already-parsed flags, and report
  // which keys it supplied.
  std::map<std::string, bool> apply_config() {
    std::map<std::string, bool> supplied;
    if (opts_.config.empty()) return supplied;
    std::ifstream in(opts_.config);
    if (!in) throw std::runtime_error("cannot open config file '" + opts_.config + "'");
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("config file '" + opts_.config + "' is not valid JSON: " +
                                  e.what());
    }
    if (!doc.is_object())
      throw std::invalid_argument("config file '" + opts_.config + "' must hold a JSON object");
    for (const auto& [key, value] : doc.items()) {
      auto it = keys_.find(key);
      if (it == keys_.end())
        throw std::invalid_argument("config key '" + key + "' is not recognized by this command");
      supplied[key] = true;
      if (it->second.first->count() > 0) continue;  // explicit flag wins
      it->second.second(value);
    }
    return supplied;
  }

  CLI::Option* option(const std::string& name) { return keys_.at(name).first; }

 private:
  CLI::App* cmd_;
  Options& opts_;
  std::map<std::string, std::pair<CLI::Option*, std::function<void(const nlohmann::json&)>>> keys_;
};

void write_table(const qmzi::CsvTable& table, const std::string& out) {
  const std::string text = qmzi::to_csv(table);
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + out + "'");
  f << text;
  if (!f) throw std::runtime_error("failed writing output file '" + out + "'");
}

// Fill in the z component from the unit-sphere constraint unless the user
// pinned it explicitly.
qmzi::UnitaryParams resolve_rotation(const Options& o) {
  qmzi::UnitaryParams u{o.t, o.x, o.y, o.z};
  if (!o.z_given) u.z = std::sqrt(std::max(0.0, 1.0 - o.t * o.t - o.x * o.x - o.y * o.y));
  return u;
}

int run_verify(const Options& o) {
  const std::optional<double> tol_override =
      o.tol_given ? std::optional<double>(o.tol) : std::nullopt;
  const auto results = qmzi::run_properties(o.seed, tol_override);
  std::size_t failed = 0;
  for (const auto& r : results) {
    if (!r.pass) ++failed;
    char line[256];
    std::snprintf(line, sizeof(line), "%s %-44s residual=%-12.4g tol=%-10.3g",
                  r.pass ? "PASS" : "FAIL", r.name.c_str(), r.residual, r.tolerance);
    std::cout << line;
    if (!r.note.empty()) std::cout << "  (" << r.note << ")";
    std::cout << "\n";
  }
  std::cout << (failed == 0 ? "OK" : "FAILED") << ": " << (results.size() - failed) << "/"
            << results.size() << " properties passed\n";
  return failed == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit interferometer simulator: fringes, entanglement grids, self-checks"};
  app.require_subcommand(1);

  Options o;

  CLI::App* fringe = app.add_subcommand(
      "fringe", "Detection probability across one phase period (CSV: chi,P)");
  ConfigurableCommand fringe_cfg(fringe, o);
  fringe_cfg.add_double("b0", o.b0, "Internal-qubit polarization in [0,1]");
  fringe_cfg.add_double("t", o.t, "Rotation component t");
  fringe_cfg.add_double("x", o.x, "Rotation component x");
  fringe_cfg.add_double("y", o.y, "Rotation component y");
  fringe_cfg.add_double("z", o.z, "Rotation component z (default: completes the unit norm)");
  fringe_cfg.add_double("p", o.p, "Bit-flip weight in [0,1]");
  fringe_cfg.add_double("q", o.q, "Phase-noise weight in [0,1]");
  fringe_cfg.add_count("samples", o.samples, "Number of phase samples (>= 3)");
  fringe->add_option("--out", o.out, "Write CSV here instead of stdout");

  CLI::App* fig4 = app.add_subcommand(
      "fig4", "Noise-free entanglement over the (t, Gamma) grid (CSV: t,Gamma,N)");
  ConfigurableCommand fig4_cfg(fig4, o);
  fig4_cfg.add_double("b0", o.b0, "Internal-qubit polarization in [0,1]");
  fig4_cfg.add_count("steps", o.steps, "Grid points per axis");
  fig4->add_option("--out", o.out, "Write CSV here instead of stdout");

  CLI::App* fig6 = app.add_subcommand(
      "fig6", "Entanglement under noise over the (t, Gamma) grid (CSV: t,Gamma,N)");
  ConfigurableCommand fig6_cfg(fig6, o);
  fig6_cfg.add_double("b0", o.b0, "Internal-qubit polarization in [0,1]");
  fig6_cfg.add_double("x", o.x, "Pinned rotation component x");
  fig6_cfg.add_double("p", o.p, "Bit-flip weight in [0,1]");
  fig6_cfg.add_double("q", o.q, "Phase-noise weight in [0,1]");
  fig6_cfg.add_count("steps", o.steps, "Grid points per axis");
  fig6->add_option("--out", o.out, "Write CSV here instead of stdout");

  CLI::App* fig8 = app.add_subcommand(
      "fig8", "Entanglement entropy against visibility for the pure family (CSV: Gamma,S)");
  ConfigurableCommand fig8_cfg(fig8, o);
  fig8_cfg.add_count("steps", o.steps, "Number of visibility points");
  fig8->add_option("--out", o.out, "Write CSV here instead of stdout");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Sweep one parameter; records Gamma, P, N (CSV: <param>,Gamma,P,N)");
  sweep->add_option("param", o.param, "Parameter to sweep: b0, t, x, y, z, p, q, or chi")
      ->required();
  ConfigurableCommand sweep_cfg(sweep, o);
  sweep_cfg.add_double("min", o.min, "Sweep start");
  sweep_cfg.add_double("max", o.max, "Sweep end");
  sweep_cfg.add_count("steps", o.steps, "Number of sweep points");
  sweep_cfg.add_double("b0", o.b0, "Internal-qubit polarization in [0,1]");
  sweep_cfg.add_double("t", o.t, "Rotation component t");
  sweep_cfg.add_double("x", o.x, "Rotation component x");
  sweep_cfg.add_double("y", o.y, "Rotation component y");
  sweep_cfg.add_double("z", o.z, "Rotation component z (default: completes the unit norm)");
  sweep_cfg.add_double("p", o.p, "Bit-flip weight in [0,1]");
  sweep_cfg.add_double("q", o.q, "Phase-noise weight in [0,1]");
  sweep_cfg.add_double("chi", o.chi, "Relative phase used when it is not swept");
  sweep->add_option("--out", o.out, "Write CSV here instead of stdout");

  CLI::App* verify = app.add_subcommand(
      "verify", "Run every self-check property and report pass/fail per line");
  ConfigurableCommand verify_cfg(verify, o);
  verify_cfg.add_seed("seed", o.seed, "Seed for the randomized checks");
  verify_cfg.add_double("tol", o.tol, "Override every property tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(fringe)) {
      const auto supplied = fringe_cfg.apply_config();
      o.z_given = fringe_cfg.option("z")->count() > 0 || supplied.count("z") > 0;
      write_table(qmzi::fringe_dataset(o.b0, resolve_rotation(o), qmzi::NoiseParams{o.p, o.q},
                                       o.samples),
                  o.out);
    } else if (app.got_subcommand(fig4)) {
      fig4_cfg.apply_config();
      write_table(qmzi::fig4_dataset(o.b0, o.steps), o.out);
    } else if (app.got_subcommand(fig6)) {
      fig6_cfg.apply_config();
      write_table(qmzi::fig6_dataset(o.b0, o.x, qmzi::NoiseParams{o.p, o.q}, o.steps), o.out);
    } else if (app.got_subcommand(fig8)) {
      fig8_cfg.apply_config();
      write_table(qmzi::fig8_dataset(o.steps), o.out);
    } else if (app.got_subcommand(sweep)) {
      const auto supplied = sweep_cfg.apply_config();
      o.z_given = sweep_cfg.option("z")->count() > 0 || supplied.count("z") > 0;
      qmzi::SweepSettings base;
      base.b0 = o.b0;
      base.u = resolve_rotation(o);
      base.noise = qmzi::NoiseParams{o.p, o.q};
      base.chi = o.chi;
      write_table(qmzi::sweep_dataset(o.param, o.min, o.max, o.steps, base), o.out);
    } else if (app.got_subcommand(verify)) {
      const auto supplied = verify_cfg.apply_config();
      o.tol_given = verify_cfg.option("tol")->count() > 0 || supplied.count("tol") > 0;
      return run_verify(o);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
