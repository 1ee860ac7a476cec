#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ugc/core.hpp"

namespace ugc::fullinfo {

enum class Verdict { Unique, Multiple, None, MarginalMultiplicity };
std::string to_string(Verdict v);

struct EquilibriumOutcome {
  Verdict verdict = Verdict::None;
  std::vector<ActionProfile> profiles;
  std::vector<double> certificates;  // max unilateral deviation gain per profile
  std::string notes;
};

// Equilibrium candidate of the induced local game: the first n users compete
// for the whole reward, the first m of them pinned at x_i = q_i.
struct LocalGameSolution {
  int n = 0;
  int m = 0;
  ActionProfile profile;  // actions of the first n users
  bool feasible = false;
};

EquilibriumOutcome solve_m1(const GameConfig& cfg);
EquilibriumOutcome solve_m2(const GameConfig& cfg);
EquilibriumOutcome solve_m3(const GameConfig& cfg, int enumeration_cap = 20);

// Mutual best response under proportional sharing, clamped to [0, q_i].
// Empty when x_minus = 0: no best response exists against silence.
std::optional<double> best_response_m4(double q_i, double x_minus, const GameConfig& cfg);

// Stationary actions of the n-user local game assuming everyone is interior;
// components may fall outside [0, q_i], signalling infeasibility.
std::vector<double> eq_interior(const GameConfig& cfg, int n);

// Local-game candidate with the first m users pinned at their types and the
// rest mutually best-responding; feasibility covers both the interior bounds
// and the pinned users' no-deviation range.
LocalGameSolution eq_boundary(const GameConfig& cfg, int n, int m);

struct DynamicsOptions {
  double epsilon = 1e-8;  // action floor of the perturbed game
  int max_iters = 100000;
  double tol = 1e-12;  // successive-iterate max-norm stopping threshold
  bool record_trajectory = false;
};

struct DynamicsResult {
  ActionProfile profile;
  bool converged = false;
  bool damped = false;            // converged only after the 0.5-damped retry
  bool no_best_response = false;  // single-user game: dynamics undefined
  int iterations = 0;
  double residual = 0.0;
  std::vector<ActionProfile> trajectory;
};

// Simultaneous best-response iteration of the epsilon-floored game, started
// from x_i = q_i. On non-convergence the map is retried once with 0.5 damping.
DynamicsResult perturbed_dynamics(const GameConfig& cfg, const DynamicsOptions& opts = {});

struct SolveM4Options {
  bool all = false;           // keep searching after the first certified profile
  double certify_tol = 1e-9;  // max certified deviation gain
  double feasibility_slack = 1e-12;
};

// Local-game search over participant prefixes n = 2..N and pinned prefixes
// m = 0..n; every feasible local solution is lifted to the full game and
// certified before being returned. Throws SolverError on exhaustion.
EquilibriumOutcome solve_m4(const GameConfig& cfg, const SolveM4Options& opts = {});

}  // namespace ugc::fullinfo
