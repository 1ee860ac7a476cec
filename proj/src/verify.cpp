#include "ugc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ugc/fullinfo.hpp"
#include "ugc/numerics.hpp"

namespace ugc::verify {

std::string to_string(Method m) {
  switch (m) {
    case Method::AnalyticBestResponse: return "analytic-br";
    case Method::Grid: return "grid";
    case Method::SubsetEnumeration: return "subset-enum";
    case Method::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

namespace {

double default_tol(const GameConfig& cfg) {
  return action_space(cfg.mechanism) == ActionSpace::Binary ? 0.0 : 1e-9;
}

struct BestDeviation {
  double action = 0.0;
  double gain = 0.0;
};

// Binary mechanisms: the only deviation is flipping the participation bit.
BestDeviation flip_deviation(int i, const ActionProfile& p, const GameConfig& cfg) {
  ActionProfile alt = p;
  alt.actions[i] = p.actions[i] > 0.0 ? 0.0 : cfg.types[i];
  return {alt.actions[i], utility(i, alt, cfg) - utility(i, p, cfg)};
}

// Proportional continuous: the payoff is concave in own action, so the clamped
// stationary point is the exact argmax whenever anyone else contributes.
BestDeviation analytic_deviation_m4(int i, const ActionProfile& p, const GameConfig& cfg) {
  const double R = cfg.reward, c = cfg.cost_bound, q = cfg.types[i];
  const double xi = p.actions[i];
  const double xm = p.total() - xi;
  if (xm > 0.0) {
    const double br = std::clamp(std::sqrt(R * q * xm / c) - xm, 0.0, q);
    const double u_br = br > 0.0 ? R * br / (br + xm) - c * br / q : 0.0;
    const double u_cur = xi > 0.0 ? R * xi / (xi + xm) - c * xi / q : 0.0;
    return {br, u_br - u_cur};
  }
  // Alone: the whole reward is kept at any positive action, so shrinking it
  // always helps; report an attainable representative deviation.
  if (xi > 0.0) {
    const double dev = 0.5 * xi;
    return {dev, c * (xi - dev) / q};
  }
  const double dev = 1e-6 * q;
  return {dev, R - c * dev / q};
}

// Top-K continuous: reward is a step function of rank, so scan a fine action
// grid plus the exact tie/undercut points, then polish locally.
BestDeviation grid_deviation_topk(int i, const ActionProfile& p, const GameConfig& cfg) {
  const double q = cfg.types[i];
  const double u_cur = utility(i, p, cfg);
  ActionProfile probe = p;
  auto u_at = [&](double a) {
    probe.actions[i] = a;
    return utility(i, probe, cfg);
  };

  std::vector<double> candidates;
  constexpr double kStep = 1e-4;
  const long steps = static_cast<long>(q / kStep);
  candidates.reserve(steps + 16 + 4 * p.actions.size());
  for (long s = 0; s <= steps; ++s) candidates.push_back(std::min(q, s * kStep));
  candidates.push_back(q);
  for (std::size_t j = 0; j < p.actions.size(); ++j) {
    if (j == static_cast<std::size_t>(i)) continue;
    const double o = p.actions[j];
    if (o <= 0.0 || o > q + 1e-9) continue;
    candidates.push_back(std::min(q, o));
    candidates.push_back(std::min(q, o + 1e-9));
    if (o - 1e-9 > 0.0) candidates.push_back(o - 1e-9);
  }

  BestDeviation best{p.actions[i], 0.0};
  for (double a : candidates) {
    const double g = u_at(a) - u_cur;
    if (g > best.gain) best = {a, g};
  }
  const double lo = std::max(0.0, best.action - kStep);
  const double hi = std::min(q, best.action + kStep);
  const double polished = num::golden_section_max(u_at, lo, hi, 1e-12);
  const double g = u_at(polished) - u_cur;
  if (g > best.gain) best = {polished, g};
  probe.actions[i] = p.actions[i];
  return best;
}

}  // namespace

DeviationReport verify_pne(const ActionProfile& p, const GameConfig& cfg,
                           std::optional<double> tol_opt) {
  if (info_setting(cfg.mechanism) != InfoSetting::Full)
    throw std::invalid_argument("verify_pne: full-information mechanisms only");
  const auto validation = validate_profile(p, cfg);
  if (!validation.ok) throw std::invalid_argument("verify_pne: invalid profile: " + validation.message);

  const double tol = tol_opt.value_or(default_tol(cfg));
  DeviationReport rep;
  rep.tolerance = tol;
  switch (cfg.mechanism) {
    case Mechanism::M1:
    case Mechanism::M3:
      rep.method = Method::SubsetEnumeration;
      break;
    case Mechanism::M4:
      rep.method = Method::AnalyticBestResponse;
      break;
    default:
      rep.method = Method::Grid;
      break;
  }

  rep.gain = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < cfg.n_users; ++i) {
    BestDeviation d;
    if (action_space(cfg.mechanism) == ActionSpace::Binary) {
      d = flip_deviation(i, p, cfg);
    } else if (cfg.mechanism == Mechanism::M4) {
      d = analytic_deviation_m4(i, p, cfg);
    } else {
      d = grid_deviation_topk(i, p, cfg);
    }
    if (d.gain > rep.gain) {
      rep.gain = d.gain;
      rep.worst_deviator = i + 1;
      rep.best_deviation = d.action;
    }
  }
  rep.is_equilibrium = rep.gain <= tol;
  return rep;
}

std::vector<ActionProfile> enumerate_binary_equilibria(const GameConfig& cfg) {
  if (action_space(cfg.mechanism) != ActionSpace::Binary)
    throw std::invalid_argument("enumerate_binary_equilibria: binary mechanisms only");
  if (cfg.n_users > 20)
    throw std::invalid_argument("enumerate_binary_equilibria: N > 20 exceeds the 2^N budget");

  const int n = cfg.n_users;
  std::vector<ActionProfile> equilibria;
  ActionProfile p{std::vector<double>(n, 0.0)};
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (int i = 0; i < n; ++i) p.actions[i] = (mask >> i) & 1u ? cfg.types[i] : 0.0;
    bool stable = true;
    for (int i = 0; i < n && stable; ++i) {
      if (flip_deviation(i, p, cfg).gain > 0.0) stable = false;
    }
    if (stable) equilibria.push_back(p);
  }
  return equilibria;
}

ScanResult grid_nonexistence_scan(const GameConfig& cfg, double step) {
  if (action_space(cfg.mechanism) != ActionSpace::Continuous)
    throw std::invalid_argument("grid_nonexistence_scan: continuous mechanisms only");
  if (cfg.n_users > 4)
    throw std::invalid_argument("grid_nonexistence_scan: N > 4 exceeds the grid budget");
  if (!(step > 0.0)) throw std::invalid_argument("grid_nonexistence_scan: step must be positive");

  ScanResult result;
  if (allocation_rule(cfg.mechanism) == AllocationRule::TopK && cfg.n_users <= cfg.top_k) {
    result.nonexistence = false;
    result.notes =
        "degenerate: N <= K, every participant wins R/K regardless of rank and the "
        "scan logic does not apply";
    return result;
  }

  const int n = cfg.n_users;
  std::vector<std::vector<double>> grids(n);
  double profile_count = 1.0;
  for (int i = 0; i < n; ++i) {
    const double q = cfg.types[i];
    for (double v = 0.0; v < q - 1e-12; v += step) grids[i].push_back(v);
    grids[i].push_back(q);
    profile_count *= static_cast<double>(grids[i].size());
  }
  if (profile_count > 5e6) throw SolverError("grid_nonexistence_scan: budget exceeded");

  const double threshold = step * cfg.cost_bound;
  result.nonexistence = true;
  result.witnesses.reserve(static_cast<std::size_t>(profile_count));

  std::vector<std::size_t> idx(n, 0);
  ActionProfile p{std::vector<double>(n, 0.0)};
  ActionProfile probe = p;
  while (true) {
    for (int i = 0; i < n; ++i) p.actions[i] = grids[i][idx[i]];

    ScanWitness witness;
    bool refuted = false;
    for (int i = 0; i < n && !refuted; ++i) {
      const double u_cur = utility(i, p, cfg);
      probe = p;
      for (double a : grids[i]) {
        probe.actions[i] = a;
        const double gain = utility(i, probe, cfg) - u_cur;
        if (gain > threshold) {
          witness = {i + 1, a, gain};
          refuted = true;
          break;
        }
      }
    }
    if (refuted) {
      result.witnesses.push_back(witness);
    } else {
      result.nonexistence = false;
      result.stable_profile = p;
      result.notes = "grid-stable profile found: every unilateral grid deviation gains <= step*c";
      return result;
    }

    int carry = 0;
    while (carry < n && ++idx[carry] == grids[carry].size()) idx[carry++] = 0;
    if (carry == n) break;
  }
  result.notes = "every grid profile admits a deviation gaining more than step*c";
  return result;
}

namespace {

// Dense table of a symmetric strategy for fast Monte Carlo evaluation.
struct StrategyTable {
  std::vector<double> ys;

  explicit StrategyTable(const std::function<double(double)>& f, int cells = 8192) {
    ys.resize(cells + 1);
    for (int i = 0; i <= cells; ++i) ys[i] = f(static_cast<double>(i) / cells);
  }
  double operator()(double x) const {
    const int cells = static_cast<int>(ys.size()) - 1;
    const double t = std::clamp(x, 0.0, 1.0) * cells;
    const int i = std::min(static_cast<int>(t), cells - 1);
    const double frac = t - i;
    return ys[i] + frac * (ys[i + 1] - ys[i]);
  }
};

}  // namespace

DeviationReport mc_symmetric_check_action(const std::function<double(double)>& action_of_type,
                                          const GameConfig& cfg, const TypeDistribution& dist,
                                          long samples, std::uint64_t seed, const McOptions& opts) {
  if (info_setting(cfg.mechanism) != InfoSetting::Partial)
    throw std::invalid_argument("mc_symmetric_check: partial-information mechanisms only");
  if (samples < 2) throw std::invalid_argument("mc_symmetric_check: need at least 2 samples");

  const int n_opp = cfg.n_users - 1;
  const bool topk = allocation_rule(cfg.mechanism) == AllocationRule::TopK;
  const bool binary = action_space(cfg.mechanism) == ActionSpace::Binary;
  const double R = cfg.reward, c = cfg.cost_bound;
  const int k = cfg.top_k;

  num::Rng rng(seed);
  std::vector<double> dev_types(opts.deviator_types);
  for (double& t : dev_types) t = dist.quantile(rng.uniform01());

  // Alternative actions per deviator type: the other binary action, or a
  // uniform action grid over [0, type].
  std::vector<std::vector<double>> dev_actions(dev_types.size());
  std::vector<double> prescribed(dev_types.size());
  for (std::size_t d = 0; d < dev_types.size(); ++d) {
    prescribed[d] = action_of_type(dev_types[d]);
    if (binary) {
      dev_actions[d] = {prescribed[d] > 0.0 ? 0.0 : dev_types[d]};
    } else {
      dev_actions[d].reserve(opts.deviation_grid);
      for (int g = 0; g < opts.deviation_grid; ++g)
        dev_actions[d].push_back(dev_types[d] * g / (opts.deviation_grid - 1));
    }
  }

  struct Acc {
    double sum = 0.0, sum_sq = 0.0;
  };
  std::vector<std::vector<Acc>> acc(dev_types.size());
  for (std::size_t d = 0; d < dev_types.size(); ++d) acc[d].resize(dev_actions[d].size());

  // Tabulate smooth strategies once; cutoff strategies stay exact (a table
  // would smear the jump over one interpolation cell).
  std::optional<StrategyTable> table;
  if (!binary) table.emplace(action_of_type);
  auto opponent_action = [&](double t) { return table ? (*table)(t) : action_of_type(t); };
  std::vector<double> opp(n_opp);

  auto deviator_utility = [&](double a, double q, double opp_sum) -> double {
    if (a <= 0.0) return 0.0;
    double reward = 0.0;
    if (topk) {
      int above = 0, tied = 1;
      for (double o : opp) {
        if (o > a) ++above;
        else if (o == a) ++tied;
      }
      if (above < k)
        reward = R / k * std::min(1.0, static_cast<double>(k - above) / tied);
    } else {
      reward = R * a / (a + opp_sum);
    }
    return reward - c * a / q;
  };

  for (long s = 0; s < samples; ++s) {
    double opp_sum = 0.0;
    for (int j = 0; j < n_opp; ++j) {
      opp[j] = opponent_action(dist.quantile(rng.uniform01()));
      if (opp[j] > 0.0) opp_sum += opp[j];
    }
    for (std::size_t d = 0; d < dev_types.size(); ++d) {
      const double u0 = deviator_utility(prescribed[d], dev_types[d], opp_sum);
      for (std::size_t a = 0; a < dev_actions[d].size(); ++a) {
        const double diff = deviator_utility(dev_actions[d][a], dev_types[d], opp_sum) - u0;
        acc[d][a].sum += diff;
        acc[d][a].sum_sq += diff * diff;
      }
    }
  }

  DeviationReport rep;
  rep.method = Method::MonteCarlo;
  rep.gain = -std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < dev_types.size(); ++d) {
    for (std::size_t a = 0; a < dev_actions[d].size(); ++a) {
      const double mean = acc[d][a].sum / samples;
      if (mean > rep.gain) {
        const double var =
            std::max(0.0, (acc[d][a].sum_sq - samples * mean * mean) / (samples - 1.0));
        rep.gain = mean;
        rep.gain_stderr = std::sqrt(var / samples);
        rep.worst_deviator = static_cast<int>(d) + 1;
        rep.deviator_type = dev_types[d];
        rep.best_deviation = dev_actions[d][a];
      }
    }
  }
  rep.tolerance = 3.0 * rep.gain_stderr;
  rep.is_equilibrium = rep.gain <= rep.tolerance;
  return rep;
}

DeviationReport mc_symmetric_check(const partialinfo::SymmetricStrategy& strategy,
                                   const GameConfig& cfg, const TypeDistribution& dist,
                                   long samples, std::uint64_t seed, const McOptions& opts) {
  return mc_symmetric_check_action([&](double t) { return strategy.value(t); }, cfg, dist,
                                   samples, seed, opts);
}

DeviationReport mc_symmetric_check(const partialinfo::CutoffEquilibrium& cutoff,
                                   const GameConfig& cfg, const TypeDistribution& dist,
                                   long samples, std::uint64_t seed, const McOptions& opts) {
  const double threshold = cutoff.threshold;
  return mc_symmetric_check_action([threshold](double t) { return t >= threshold ? t : 0.0; },
                                   cfg, dist, samples, seed, opts);
}

}  // namespace ugc::verify
