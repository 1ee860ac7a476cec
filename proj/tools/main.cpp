// ugceq: pure-equilibrium solvers and brute-force oracles for fixed-reward
// content-contribution games. See README.md for the config schema, output
// formats and the exit-code contract (0 certified, 1 non-existence, 2 bad
// config/request, 3 certification failure).

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ugc/fullinfo.hpp"
#include "ugc/io.hpp"
#include "ugc/partialinfo.hpp"
#include "ugc/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoEquilibrium = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitNotCertified = 3;

struct Options {
  std::string config_path;
  std::string out_path;
  std::string profile_path;
  std::uint64_t seed = 12345;
  long mc_samples = 1000000;
  std::optional<double> tol;
  bool all = false;
  int grid = 0;  // 0 = command-specific default
  double epsilon = 1e-8;
  int max_iters = 100000;
};

void emit(const Options& opt, const std::string& content) {
  if (opt.out_path.empty()) {
    std::cout << content;
  } else {
    ugc::io::write_file(opt.out_path, content);
  }
}

// Side outputs (the curve SVG) land next to the main artifact.
std::string sibling_path(const std::string& path, const std::string& new_ext) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return path + new_ext;
  return path.substr(0, dot) + new_ext;
}

int run_solve(const Options& opt) {
  using namespace ugc;
  const GameConfig cfg = io::parse_config_file(opt.config_path);
  switch (cfg.mechanism) {
    case Mechanism::M1: {
      const auto out = fullinfo::solve_m1(cfg);
      emit(opt, io::outcome_to_json(cfg, out));
      for (double g : out.certificates)
        if (g > 0.0) return kExitNotCertified;
      return kExitOk;
    }
    case Mechanism::M2: {
      const auto out = fullinfo::solve_m2(cfg);
      emit(opt, io::outcome_to_json(cfg, out));
      return kExitNoEquilibrium;
    }
    case Mechanism::M3: {
      const auto out = fullinfo::solve_m3(cfg);
      emit(opt, io::outcome_to_json(cfg, out));
      for (double g : out.certificates)
        if (g > 0.0) return kExitNotCertified;
      return kExitOk;
    }
    case Mechanism::M4: {
      fullinfo::SolveM4Options sopt;
      sopt.all = opt.all;
      if (opt.tol) sopt.certify_tol = *opt.tol;
      const auto out = fullinfo::solve_m4(cfg, sopt);
      emit(opt, io::outcome_to_json(cfg, out));
      if (out.verdict == fullinfo::Verdict::None) return kExitNoEquilibrium;
      return kExitOk;
    }
    case Mechanism::M5: {
      const auto eq = partialinfo::solve_m5(cfg, *cfg.distribution);
      emit(opt, io::cutoff_to_json(cfg, eq));
      return eq.residual <= opt.tol.value_or(1e-10) ? kExitOk : kExitNotCertified;
    }
    case Mechanism::M6: {
      const int grid = opt.grid > 0 ? opt.grid : 4096;
      const auto strat = partialinfo::calibrate_beta(cfg, *cfg.distribution, grid);
      emit(opt, io::strategy_to_json(cfg, strat));
      return kExitOk;
    }
    case Mechanism::M7: {
      partialinfo::M7Options mopt;
      mopt.seed = opt.seed;
      if (opt.mc_samples > 0) mopt.mc_samples = opt.mc_samples;
      const auto eq = partialinfo::solve_m7(cfg, *cfg.distribution, mopt);
      emit(opt, io::cutoff_to_json(cfg, eq));
      const double band = std::max(opt.tol.value_or(1e-8), 3.0 * eq.residual_stderr);
      return eq.residual <= band ? kExitOk : kExitNotCertified;
    }
  }
  return kExitBadConfig;
}

int run_verify(const Options& opt) {
  using namespace ugc;
  const GameConfig cfg = io::parse_config_file(opt.config_path);
  if (opt.profile_path.empty())
    throw ConfigError("--profile: required for verify (a solve output or {\"actions\": [...]})");

  if (info_setting(cfg.mechanism) == InfoSetting::Full) {
    const auto profiles = io::parse_profiles_file(opt.profile_path);
    bool all_ok = true;
    std::string out;
    for (const auto& p : profiles) {
      const auto rep = verify::verify_pne(p, cfg, opt.tol);
      out += io::report_to_json(rep);
      all_ok = all_ok && rep.is_equilibrium;
    }
    emit(opt, out);
    return all_ok ? kExitOk : kExitNotCertified;
  }

  verify::DeviationReport rep;
  if (cfg.mechanism == Mechanism::M6) {
    const auto strat = io::parse_strategy_file(opt.profile_path);
    rep = verify::mc_symmetric_check(strat, cfg, *cfg.distribution, opt.mc_samples, opt.seed);
  } else {
    partialinfo::CutoffEquilibrium eq;
    eq.threshold = io::parse_threshold_file(opt.profile_path);
    rep = verify::mc_symmetric_check(eq, cfg, *cfg.distribution, opt.mc_samples, opt.seed);
  }
  emit(opt, io::report_to_json(rep));
  return rep.is_equilibrium ? kExitOk : kExitNotCertified;
}

int run_curve(const Options& opt) {
  using namespace ugc;
  const GameConfig cfg = io::parse_config_file(opt.config_path);
  if (cfg.mechanism != Mechanism::M6)
    throw ConfigError("curve: only the top-K/continuous/partial mechanism (M6) has a strategy curve");
  const int grid = opt.grid > 0 ? opt.grid : 4096;
  const auto strat = partialinfo::calibrate_beta(cfg, *cfg.distribution, grid);
  const std::string csv = io::strategy_to_csv(strat);
  const std::string svg = io::strategy_to_svg(strat);
  if (opt.out_path.empty()) {
    std::cout << csv;
    std::cerr << "curve: pass --out to also write the SVG rendering\n";
  } else {
    ugc::io::write_file(opt.out_path, csv);
    ugc::io::write_file(sibling_path(opt.out_path, ".svg"), svg);
  }
  return kExitOk;
}

int run_dynamics(const Options& opt) {
  using namespace ugc;
  const GameConfig cfg = io::parse_config_file(opt.config_path);
  if (cfg.mechanism != Mechanism::M4)
    throw ConfigError("dynamics: only the proportional/continuous mechanism (M4) has dynamics");
  fullinfo::DynamicsOptions dopt;
  dopt.epsilon = opt.epsilon;
  dopt.max_iters = opt.max_iters;
  if (opt.tol) dopt.tol = *opt.tol;
  dopt.record_trajectory = true;
  const auto res = fullinfo::perturbed_dynamics(cfg, dopt);
  if (res.no_best_response) {
    std::cerr << "dynamics: single-user game has no best response against silence\n";
    return kExitNoEquilibrium;
  }
  emit(opt, io::trajectory_to_csv(res.trajectory));
  std::cerr << "dynamics: " << (res.converged ? "converged" : "did NOT converge") << " after "
            << res.iterations << " iterations (residual " << res.residual
            << (res.damped ? ", damped retry" : "") << ")\n";
  return res.converged ? kExitOk : kExitNotCertified;
}

int run_oracle(const Options& opt) {
  using namespace ugc;
  const GameConfig cfg = io::parse_config_file(opt.config_path);
  switch (action_space(cfg.mechanism)) {
    case ActionSpace::Binary:
      if (info_setting(cfg.mechanism) == InfoSetting::Full) {
        const auto eqs = verify::enumerate_binary_equilibria(cfg);
        emit(opt, io::profiles_to_json(eqs));
        return eqs.empty() ? kExitNoEquilibrium : kExitOk;
      }
      break;
    case ActionSpace::Continuous:
      if (info_setting(cfg.mechanism) == InfoSetting::Full) {
        const double step = opt.grid > 0 ? 1.0 / opt.grid : 0.05;
        const auto scan = verify::grid_nonexistence_scan(cfg, step);
        emit(opt, io::scan_to_json(scan, step));
        if (cfg.mechanism == Mechanism::M2)
          return scan.nonexistence ? kExitNoEquilibrium : kExitNotCertified;
        return scan.nonexistence ? kExitNotCertified : kExitOk;
      }
      break;
  }

  // Partial information: solve, then Monte Carlo check of the strategy.
  verify::DeviationReport rep;
  if (cfg.mechanism == Mechanism::M6) {
    const int grid = opt.grid > 0 ? opt.grid : 4096;
    const auto strat = partialinfo::calibrate_beta(cfg, *cfg.distribution, grid);
    rep = verify::mc_symmetric_check(strat, cfg, *cfg.distribution, opt.mc_samples, opt.seed);
  } else if (cfg.mechanism == Mechanism::M5) {
    const auto eq = partialinfo::solve_m5(cfg, *cfg.distribution);
    rep = verify::mc_symmetric_check(eq, cfg, *cfg.distribution, opt.mc_samples, opt.seed);
  } else {
    partialinfo::M7Options mopt;
    mopt.seed = opt.seed;
    const auto eq = partialinfo::solve_m7(cfg, *cfg.distribution, mopt);
    rep = verify::mc_symmetric_check(eq, cfg, *cfg.distribution, opt.mc_samples, opt.seed);
  }
  emit(opt, io::report_to_json(rep));
  return rep.is_equilibrium ? kExitOk : kExitNotCertified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equilibrium toolkit for fixed-reward content-contribution games"};
  app.require_subcommand(1);

  Options opt;
  double tol_value = -1.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config_path, "game config JSON")->required();
    cmd->add_option("--out", opt.out_path, "output path (stdout when omitted)");
    cmd->add_option("--seed", opt.seed, "RNG seed for Monte Carlo checks");
    cmd->add_option("--mc-samples", opt.mc_samples, "Monte Carlo sample count");
    cmd->add_option("--tol", tol_value, "override the default tolerance");
    cmd->add_option("--grid", opt.grid, "grid resolution (curve/scan)");
    return cmd;
  };

  auto* solve = add_common(app.add_subcommand("solve", "solve for equilibria and certify"));
  solve->add_flag("--all", opt.all, "list every certified equilibrium");
  auto* verify_cmd = add_common(app.add_subcommand("verify", "check a profile or strategy file"));
  verify_cmd->add_option("--profile", opt.profile_path, "profile/strategy JSON to verify");
  add_common(app.add_subcommand("curve", "export the symmetric strategy curve (CSV + SVG)"));
  auto* dynamics = add_common(app.add_subcommand("dynamics", "best-response iteration trace"));
  dynamics->add_option("--epsilon", opt.epsilon, "action floor of the perturbed game");
  dynamics->add_option("--max-iters", opt.max_iters, "iteration cap");
  add_common(app.add_subcommand("oracle", "run the matching brute-force check"));

  CLI11_PARSE(app, argc, argv);
  if (tol_value >= 0.0) opt.tol = tol_value;

  try {
    if (app.got_subcommand("solve")) return run_solve(opt);
    if (app.got_subcommand("verify")) return run_verify(opt);
    if (app.got_subcommand("curve")) return run_curve(opt);
    if (app.got_subcommand("dynamics")) return run_dynamics(opt);
    if (app.got_subcommand("oracle")) return run_oracle(opt);
  } catch (const ugc::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNotCertified;
  }
  return kExitBadConfig;
}
