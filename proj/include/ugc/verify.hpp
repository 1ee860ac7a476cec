#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ugc/core.hpp"
#include "ugc/partialinfo.hpp"

namespace ugc::verify {

enum class Method { AnalyticBestResponse, Grid, SubsetEnumeration, MonteCarlo };
std::string to_string(Method m);

struct DeviationReport {
  bool is_equilibrium = false;
  int worst_deviator = 0;       // 1-based user index; deviator-type slot for MC checks
  double deviator_type = 0.0;   // sampled type behind worst_deviator (MC checks)
  double best_deviation = 0.0;  // action achieving the reported gain
  double gain = 0.0;            // best unilateral utility improvement found
  double gain_stderr = 0.0;     // Monte Carlo only
  Method method = Method::Grid;
  double tolerance = 0.0;
};

// Best unilateral deviation over every user. Closed-form best responses for
// M4, exhaustive bit flips for the binary mechanisms, grid search with local
// refinement for M2. Default tolerance: 0 for binary, 1e-9 for continuous.
DeviationReport verify_pne(const ActionProfile& p, const GameConfig& cfg,
                           std::optional<double> tol = std::nullopt);

// All pure equilibria of a binary mechanism by testing every support set.
// Rejects N > 20.
std::vector<ActionProfile> enumerate_binary_equilibria(const GameConfig& cfg);

struct ScanWitness {
  int deviator = 0;  // 1-based
  double deviation = 0.0;
  double gain = 0.0;
};

struct ScanResult {
  bool nonexistence = false;  // every grid profile admits a gain > step * c
  std::vector<ScanWitness> witnesses;  // one per grid profile, enumeration order
  std::optional<ActionProfile> stable_profile;  // grid point with no such gain
  std::string notes;
};

// Exhaustive deviation scan over the product action grid of a continuous
// mechanism (N <= 4). nonexistence = true means no exact equilibrium fits
// near the grid; a stable grid point is corroborating evidence against.
ScanResult grid_nonexistence_scan(const GameConfig& cfg, double step);

struct McOptions {
  int deviator_types = 8;    // sampled types playing the deviator role
  int deviation_grid = 101;  // candidate actions per type (continuous mechanisms)
};

// Monte Carlo check of a symmetric strategy: sampled deviator types compare
// the prescribed action against a deviation grid over shared opponent draws;
// equilibrium is accepted iff the worst mean gain is within 3 standard errors.
DeviationReport mc_symmetric_check(const partialinfo::SymmetricStrategy& strategy,
                                   const GameConfig& cfg, const TypeDistribution& dist,
                                   long samples, std::uint64_t seed, const McOptions& = {});
DeviationReport mc_symmetric_check(const partialinfo::CutoffEquilibrium& cutoff,
                                   const GameConfig& cfg, const TypeDistribution& dist,
                                   long samples, std::uint64_t seed, const McOptions& = {});
DeviationReport mc_symmetric_check_action(const std::function<double(double)>& action_of_type,
                                          const GameConfig& cfg, const TypeDistribution& dist,
                                          long samples, std::uint64_t seed, const McOptions& = {});

}  // namespace ugc::verify
