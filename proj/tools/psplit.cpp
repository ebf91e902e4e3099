// psplit: batch runner for the point-split commutator workbench.
//
//   psplit verify|anomaly|vacuum|kernel|derive [--mass M] [--delta-p DP] [--n-max N]
//          [--eps E]... [--f-harmonic n:re:im]... [--eta H] [--cutoff C]
//          [--format json|csv] [--out PATH] [--config FILE]
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or config error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "psplit/commands.hpp"

namespace {

void emit(const psplit::Report& report, const psplit::RunConfig& cfg) {
  namespace fs = std::filesystem;
  if (cfg.format == "json") {
    const std::string text = psplit::to_json(report).dump(2) + "\n";
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream(cfg.out, std::ios::binary) << text;
    }
    return;
  }
  if (cfg.out.empty()) {
    for (const auto& t : report.tables) {
      std::cout << "# " << t.name << '\n';
      psplit::write_csv(t, std::cout);
      std::cout << '\n';
    }
    return;
  }
  // One file per table: <stem>.<table>.csv next to the requested path.
  const fs::path out(cfg.out);
  const fs::path stem = out.parent_path() / out.stem();
  for (const auto& t : report.tables) {
    std::ofstream os(stem.string() + "." + t.name + ".csv", std::ios::binary);
    psplit::write_csv(t, os);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-split commutator workbench for a free 1+1D fermion field"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  double mass = 1.0;
  double delta_p = 1.0;
  int n_max = 2;
  std::vector<double> eps;
  std::vector<std::string> harmonics;
  double eta = 0.0;
  double cutoff = 0.0;
  std::string format = "json";
  std::string out;
  std::string config_path;
  bool corrupt = false;

  auto* o_mass = app.add_option("--mass", mass, "fermion mass");
  auto* o_dp = app.add_option("--delta-p", delta_p, "momentum spacing");
  auto* o_n = app.add_option("--n-max", n_max, "modes j = -n_max..n_max");
  auto* o_eps = app.add_option("--eps", eps, "point-splitting distance (repeatable)")->take_all();
  auto* o_f = app.add_option("--f-harmonic", harmonics, "smearing harmonic n:re:im (repeatable)")->take_all();
  auto* o_eta = app.add_option("--eta", eta, "Abel damping for the kernel asymptote (default eps^2)");
  auto* o_cut = app.add_option("--cutoff", cutoff, "quadrature cutoff (default max(1e4, 100/eps))");
  auto* o_fmt = app.add_option("--format", format, "json or csv");
  auto* o_out = app.add_option("--out", out, "output path (stdout when omitted)");
  app.add_option("--config", config_path, "JSON config file with the same keys; flags override it");
  app.add_flag("--corrupt-current-sign", corrupt)->group("");

  for (const char* name : {"verify", "anomaly", "vacuum", "kernel", "derive"}) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    psplit::RunConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw psplit::ConfigError("cannot read config file " + config_path);
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::exception& e) {
        throw psplit::ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      cfg = psplit::config_from_json(j, cfg);
    }
    if (o_mass->count()) cfg.lattice.mass = mass;
    if (o_dp->count()) cfg.lattice.delta_p = delta_p;
    if (o_n->count()) cfg.lattice.n_max = n_max;
    if (o_eps->count()) cfg.eps = eps;
    if (o_f->count()) {
      cfg.f_harmonics.clear();
      for (const auto& h : harmonics) cfg.f_harmonics.push_back(psplit::parse_harmonic(h));
    }
    if (o_eta->count()) cfg.eta = eta;
    if (o_cut->count()) cfg.cutoff = cutoff;
    if (o_fmt->count()) cfg.format = format;
    if (o_out->count()) cfg.out = out;
    cfg.corrupt_current_sign = corrupt;

    const std::string command = app.get_subcommands().front()->get_name();
    const psplit::Report report = psplit::run_command(command, cfg);
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    emit(report, report.config);
    for (const auto& c : report.checks) {
      if (!c.pass) std::cerr << "check failed: " << c.name << " (residual " << c.max_residual << ")\n";
    }
    return report.exit_code();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
