#include "ugc/fullinfo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ugc/verify.hpp"

namespace ugc::fullinfo {

namespace {

constexpr double kMarginalRelTol = 1e-12;

bool nearly_equal(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) <= kMarginalRelTol * scale;
}

ActionProfile zero_profile(int n) { return ActionProfile{std::vector<double>(n, 0.0)}; }

ActionProfile prefix_profile(const GameConfig& cfg, int k) {
  ActionProfile p = zero_profile(cfg.n_users);
  for (int i = 0; i < k; ++i) p.actions[i] = cfg.types[i];
  return p;
}

void require_mechanism(const GameConfig& cfg, Mechanism m, const char* who) {
  if (cfg.mechanism != m)
    throw std::invalid_argument(std::string(who) + ": config is for " + to_string(cfg.mechanism));
}

void attach_certificates(EquilibriumOutcome& out, const GameConfig& cfg) {
  out.certificates.clear();
  for (const auto& p : out.profiles) out.certificates.push_back(verify::verify_pne(p, cfg).gain);
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Unique: return "unique";
    case Verdict::Multiple: return "multiple";
    case Verdict::None: return "none";
    case Verdict::MarginalMultiplicity: return "marginal-multiplicity";
  }
  return "?";
}

EquilibriumOutcome solve_m1(const GameConfig& cfg) {
  require_mechanism(cfg, Mechanism::M1, "solve_m1");
  const double R = cfg.reward, c = cfg.cost_bound;
  const int N = cfg.n_users, K = cfg.top_k;
  const int k_eff = std::min(K, N);
  EquilibriumOutcome out;
  if (nearly_equal(R, static_cast<double>(K) * c)) {
    out.verdict = Verdict::MarginalMultiplicity;
    out.profiles = {zero_profile(N), prefix_profile(cfg, k_eff)};
    out.notes =
        "R = K*c: every contributor set of size at most K is an equilibrium; "
        "returning the all-zero and top-K representatives";
  } else if (R < K * c) {
    out.verdict = Verdict::Unique;
    out.profiles = {zero_profile(N)};
    out.notes = "R < K*c: contributing cannot recoup the cost";
  } else {
    ActionProfile p = prefix_profile(cfg, k_eff);
    const bool boundary_tie = k_eff < N && cfg.types[k_eff - 1] == cfg.types[k_eff];
    if (boundary_tie) {
      // Equal types at the K-th rank: under the equal tie split, tied outsiders
      // may profit from joining. Grow the contributor set until the next tied
      // user no longer gains; the result is one of several equilibria.
      int j = k_eff;
      while (j < N && cfg.types[j] == cfg.types[k_eff - 1]) {
        ActionProfile trial = p;
        trial.actions[j] = cfg.types[j];
        if (utility_topk(j, trial, cfg) > 0.0) {
          p = std::move(trial);
          ++j;
        } else {
          break;
        }
      }
      out.verdict = Verdict::Multiple;
      out.profiles = {std::move(p)};
      out.notes = "tied types at the top-K boundary admit multiple equilibria; one representative returned";
    } else {
      out.verdict = Verdict::Unique;
      out.profiles = {std::move(p)};
      out.notes = N < K ? "R > K*c with N < K: everyone contributes"
                        : "R > K*c: the K strongest users contribute";
    }
  }
  attach_certificates(out, cfg);
  return out;
}

EquilibriumOutcome solve_m2(const GameConfig& cfg) {
  require_mechanism(cfg, Mechanism::M2, "solve_m2");
  EquilibriumOutcome out;
  out.verdict = Verdict::None;
  const bool main_case = cfg.reward > cfg.top_k * cfg.cost_bound && cfg.n_users > cfg.top_k;
  if (main_case) {
    out.notes =
        "no pure equilibrium (R > K*c, N > K, distinct types): with fewer than K "
        "participants an outsider enters at negligible cost, with K participants the "
        "winners shave quality indefinitely, with more than K the losers withdraw";
  } else {
    out.notes =
        "outside the analyzed parameter region (argument needs R > K*c and N > K); "
        "corroborate with the grid oracle";
  }
  return out;
}

EquilibriumOutcome solve_m3(const GameConfig& cfg, int enumeration_cap) {
  require_mechanism(cfg, Mechanism::M3, "solve_m3");
  const double R = cfg.reward, c = cfg.cost_bound;
  const int N = cfg.n_users;
  EquilibriumOutcome out;
  if (nearly_equal(R, c)) {
    out.verdict = Verdict::MarginalMultiplicity;
    out.profiles.push_back(zero_profile(N));
    for (int i = 0; i < N; ++i) {
      ActionProfile single = zero_profile(N);
      single.actions[i] = cfg.types[i];
      out.profiles.push_back(std::move(single));
    }
    out.notes = "R = c: nobody contributing and every single contributor are equilibria";
  } else if (R < c) {
    out.verdict = Verdict::Unique;
    out.profiles = {zero_profile(N)};
    out.notes = "R < c: even a sole participant runs a loss";
  } else {
    // Largest prefix whose weakest member still clears the cost rate.
    int j = 1;
    double qsum = cfg.types[0];
    while (j < N && R * cfg.types[j] / (qsum + cfg.types[j]) > c) {
      qsum += cfg.types[j];
      ++j;
    }
    std::ostringstream notes;
    notes << "prefix equilibrium of size " << j;
    if (N <= enumeration_cap) {
      out.profiles = verify::enumerate_binary_equilibria(cfg);
      out.verdict = out.profiles.size() == 1 ? Verdict::Unique : Verdict::Multiple;
      notes << "; all binary equilibria enumerated (" << out.profiles.size() << ")";
    } else {
      out.profiles = {prefix_profile(cfg, j)};
      out.verdict = Verdict::Unique;
      notes << "; enumeration skipped for N > " << enumeration_cap
            << ", further equilibria may exist";
    }
    out.notes = notes.str();
  }
  attach_certificates(out, cfg);
  return out;
}

std::optional<double> best_response_m4(double q_i, double x_minus, const GameConfig& cfg) {
  if (!(q_i > 0.0)) throw std::invalid_argument("best_response_m4: type must be positive");
  if (x_minus <= 0.0) return std::nullopt;  // no best response against silence
  const double raw = std::sqrt(cfg.reward * q_i * x_minus / cfg.cost_bound) - x_minus;
  return std::clamp(raw, 0.0, q_i);
}

std::vector<double> eq_interior(const GameConfig& cfg, int n) {
  if (n < 2 || n > cfg.n_users) throw std::invalid_argument("eq_interior: need 2 <= n <= N");
  double inv_sum = 0.0;
  for (int k = 0; k < n; ++k) inv_sum += 1.0 / cfg.types[k];
  const double scale = cfg.reward * (n - 1) / (cfg.cost_bound * inv_sum);
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = scale * (1.0 - (n - 1) / (cfg.types[i] * inv_sum));
  return y;
}

LocalGameSolution eq_boundary(const GameConfig& cfg, int n, int m) {
  if (m < 1 || m > n || n > cfg.n_users) throw std::invalid_argument("eq_boundary: need 1 <= m <= n <= N");
  if (n == 1) throw std::invalid_argument("eq_boundary: single-user local game is degenerate");
  const double R = cfg.reward, c = cfg.cost_bound;
  constexpr double kSlack = 1e-12;

  LocalGameSolution sol;
  sol.n = n;
  sol.m = m;
  sol.profile.actions.assign(n, 0.0);
  double pinned_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    sol.profile.actions[i] = cfg.types[i];
    pinned_sum += cfg.types[i];
  }

  if (m == n) {
    // Everyone pinned: nobody may profit from shading her contribution, which
    // binds at the largest and smallest pinned types.
    sol.feasible = true;
    for (int i : {0, m - 1}) {
      const double denom = cfg.types[i] * (pinned_sum - cfg.types[i]);
      if (denom <= 0.0 || R * denom < c * pinned_sum * pinned_sum - kSlack) {
        sol.feasible = false;
        break;
      }
    }
    return sol;
  }

  // Aggregate quality solves A*s^2 - (n-m-1)*s - Q = 0 (positive root), where
  // the interior users' stationarity conditions were summed out.
  double a_nm = 0.0;
  for (int i = m; i < n; ++i) a_nm += c / (R * cfg.types[i]);
  const double lin = static_cast<double>(n - m - 1);
  const double s = (lin + std::sqrt(lin * lin + 4.0 * pinned_sum * a_nm)) / (2.0 * a_nm);

  bool ok = true;
  for (int i = m; i < n; ++i) {
    const double x = s - c / (R * cfg.types[i]) * s * s;
    if (x < -kSlack || x > cfg.types[i] + kSlack) ok = false;
    sol.profile.actions[i] = std::clamp(x, 0.0, cfg.types[i]);
  }

  // Pinned users must not want to shade: the aggregate has to sit inside the
  // band derived from their capped best responses, which needs R >= 4c.
  const double disc = 1.0 - 4.0 * c / R;
  if (disc < 0.0) {
    ok = false;
  } else if (ok) {
    const double sq = std::sqrt(disc);
    const double lower = R * cfg.types[0] / (2.0 * c) * (1.0 - sq);
    const double upper = R * cfg.types[m - 1] / (2.0 * c) * (1.0 + sq);
    if (s < lower - kSlack || s > upper + kSlack) ok = false;
  }
  sol.feasible = ok;
  return sol;
}

DynamicsResult perturbed_dynamics(const GameConfig& cfg, const DynamicsOptions& opts) {
  require_mechanism(cfg, Mechanism::M4, "perturbed_dynamics");
  const int N = cfg.n_users;
  DynamicsResult res;
  if (N < 2) {
    res.no_best_response = true;
    res.profile = zero_profile(N);
    return res;
  }
  if (!(opts.epsilon > 0.0)) throw std::invalid_argument("perturbed_dynamics: epsilon must be positive");
  const double q_min = cfg.types[N - 1];
  if (opts.epsilon >= q_min)
    throw std::invalid_argument("perturbed_dynamics: epsilon must stay below the smallest type");

  const double R = cfg.reward, c = cfg.cost_bound;
  std::vector<double> x(cfg.types), next(N), br(N);

  auto run = [&](double damping) -> bool {
    x = cfg.types;
    res.trajectory.clear();
    if (opts.record_trajectory) res.trajectory.push_back(ActionProfile{x});
    for (int iter = 1; iter <= opts.max_iters; ++iter) {
      double total = 0.0;
      for (double v : x) total += v;
      for (int i = 0; i < N; ++i) {
        const double xm = std::max(total - x[i], 0.0);
        const double raw = std::sqrt(R * cfg.types[i] * xm / c) - xm;
        br[i] = raw <= opts.epsilon ? opts.epsilon : std::min(raw, cfg.types[i]);
      }
      double diff = 0.0;
      for (int i = 0; i < N; ++i) {
        next[i] = (1.0 - damping) * x[i] + damping * br[i];
        diff = std::max(diff, std::abs(next[i] - x[i]));
      }
      x.swap(next);
      if (opts.record_trajectory) res.trajectory.push_back(ActionProfile{x});
      res.iterations = iter;
      res.residual = diff;
      if (diff < opts.tol) return true;
    }
    return false;
  };

  if (run(1.0)) {
    res.converged = true;
  } else if (run(0.5)) {
    res.converged = true;
    res.damped = true;
  } else {
    res.damped = true;
  }
  res.profile = ActionProfile{x};
  return res;
}

EquilibriumOutcome solve_m4(const GameConfig& cfg, const SolveM4Options& opts) {
  require_mechanism(cfg, Mechanism::M4, "solve_m4");
  const int N = cfg.n_users;
  EquilibriumOutcome out;
  if (N < 2) {
    out.verdict = Verdict::None;
    out.notes = "single user: no best response against silence, hence no equilibrium";
    return out;
  }

  const double R = cfg.reward, c = cfg.cost_bound;
  const double slack = opts.feasibility_slack;
  std::vector<std::pair<ActionProfile, double>> found;
  int candidates_tried = 0;

  // Lift an n-user local equilibrium: outsiders stay out iff the aggregate is
  // already large enough to price them out, then certify the full profile.
  auto consider = [&](const std::vector<double>& local, int n) -> bool {
    ++candidates_tried;
    double total = 0.0;
    for (double v : local) total += v;
    if (total <= 0.0) return false;
    if (n < N) {
      const double need = R * cfg.types[n] / c;
      if (total < need - slack * std::max(1.0, need)) return false;
    }
    ActionProfile full = zero_profile(N);
    std::copy(local.begin(), local.end(), full.actions.begin());
    const auto rep = verify::verify_pne(full, cfg, opts.certify_tol);
    if (!rep.is_equilibrium) return false;
    for (const auto& [p, g] : found) {
      double d = 0.0;
      for (int i = 0; i < N; ++i) d = std::max(d, std::abs(p.actions[i] - full.actions[i]));
      if (d < 1e-9) return false;  // duplicate
    }
    found.emplace_back(std::move(full), rep.gain);
    return true;
  };

  for (int n = 2; n <= N; ++n) {
    auto y = eq_interior(cfg, n);
    bool interior_ok = true;
    for (int i = 0; i < n; ++i) {
      if (y[i] < -slack || y[i] > cfg.types[i] + slack) interior_ok = false;
      y[i] = std::clamp(y[i], 0.0, cfg.types[i]);
    }
    if (interior_ok && consider(y, n) && !opts.all) break;
    for (int m = 1; m <= n; ++m) {
      const auto sol = eq_boundary(cfg, n, m);
      if (!sol.feasible) continue;
      if (consider(sol.profile.actions, n) && !opts.all) break;
    }
    if (!found.empty() && !opts.all) break;
  }

  if (found.empty()) {
    std::ostringstream err;
    err << "solve_m4: no candidate certified (N=" << N << ", R/c=" << R / c << ", "
        << candidates_tried << " candidates tried); an equilibrium exists, so this "
        << "indicates a numerical tolerance problem";
    throw SolverError(err.str());
  }

  for (auto& [p, g] : found) {
    out.profiles.push_back(std::move(p));
    out.certificates.push_back(g);
  }
  out.verdict = out.profiles.size() == 1 ? Verdict::Unique : Verdict::Multiple;
  out.notes = opts.all ? "all certified local-game equilibria (deduplicated)"
                       : "first certified equilibrium from the local-game search";
  return out;
}

}  // namespace ugc::fullinfo
