#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ugc/core.hpp"

namespace ugc::partialinfo {

// P(a user of type x places in the top K against N-1 i.i.d. rivals drawn
// from F). Identically 1 when N <= K.
double win_probability_T(double x, const GameConfig& cfg, const TypeDistribution& dist);

// Closed form (N-1) f(x) C(N-2,K-1) F(x)^(N-K-1) (1-F(x))^(K-1); requires N - K >= 1.
double win_probability_T_derivative(double x, const GameConfig& cfg, const TypeDistribution& dist);

struct CutoffEquilibrium {
  double threshold = 0.0;  // x*: contribute the full type iff type >= x*
  double residual = 0.0;   // |equation value| at x*
  double residual_stderr = 0.0;  // Monte Carlo part of the residual, when used
  std::uint64_t seed = 0;
  long mc_samples = 0;
  std::string notes;
};

// Threshold of the participation equation (R/K) T(x) = c. Requires R > K c;
// the marginal region is rejected with ConfigError.
CutoffEquilibrium solve_m5(const GameConfig& cfg, const TypeDistribution& dist);

// Unconstrained symmetric bid curve: scaled integral of t dT(t) from 0 to x.
// Values come from adaptive quadrature over a cached prefix grid; the
// derivative has a closed form.
class BetaCurve {
 public:
  BetaCurve(const GameConfig& cfg, const TypeDistribution& dist, double abs_tol = 1e-8,
            int cache_cells = 2048);

  double value(double x) const;
  double derivative(double x) const;

 private:
  double integrand(double t) const;

  int n_ = 0;
  int k_ = 0;
  double prefactor_ = 0.0;  // R (N-1) C(N-2,K-1) / (c K)
  double abs_tol_ = 1e-8;
  TypeDistribution dist_;
  std::vector<double> node_x_;
  std::vector<double> node_prefix_;  // unscaled prefix integrals
};

// One-shot quadrature evaluation of the curve above. Requires N - K >= 1.
double beta_uncalibrated(double x, const GameConfig& cfg, const TypeDistribution& dist);

// Polynomial form of the same curve for the uniform distribution.
double beta_uniform_closed_form(double x, const GameConfig& cfg);

enum class SegmentKind { OriginalBeta, Diagonal, ShiftedBeta };
std::string to_string(SegmentKind k);

// Piecewise symmetric equilibrium strategy: the unconstrained curve with
// over-bidding stretches pinned to the diagonal and the tail shifted down to
// stay continuous. Invariants: value(0) = 0, continuity across joins,
// non-decreasing, value(x) <= x.
class SymmetricStrategy {
 public:
  struct Segment {
    double lo = 0.0;
    double hi = 1.0;
    SegmentKind kind = SegmentKind::OriginalBeta;
    double offset = 0.0;  // added to the base curve; 0 for diagonal segments
  };

  SymmetricStrategy(std::shared_ptr<const BetaCurve> beta, std::vector<Segment> segments,
                    int grid_resolution, bool fallback_pin_used);
  // Rebuild from exported data (file round-trips): diagonal segments evaluate
  // exactly, curve segments interpolate the grid linearly.
  static SymmetricStrategy from_grid(std::vector<Segment> segments,
                                     std::vector<std::array<double, 2>> grid,
                                     bool fallback_pin_used);

  double value(double x) const;
  SegmentKind kind_at(double x) const;
  const std::vector<Segment>& segments() const { return segments_; }
  const std::vector<std::array<double, 2>>& grid() const { return grid_; }
  bool fallback_pin_used() const { return fallback_pin_used_; }

 private:
  SymmetricStrategy() = default;
  const Segment& segment_at(double x) const;

  std::shared_ptr<const BetaCurve> beta_;  // null when grid-backed
  std::vector<Segment> segments_;
  std::vector<std::array<double, 2>> grid_;
  bool fallback_pin_used_ = false;
};

// Repeated calibration: find the first interval where the curve exceeds the
// diagonal, pin it to the diagonal up to the unit-slope point, shift the tail,
// and repeat until the curve lies below the diagonal everywhere. When a
// crossing interval has no unit-slope point the whole interval is pinned and
// the result is flagged via fallback_pin_used().
SymmetricStrategy calibrate_beta(const GameConfig& cfg, const TypeDistribution& dist,
                                 int grid_resolution = 4096);

struct M7Options {
  long mc_samples = 200000;
  std::uint64_t seed = 12345;
  double bisect_xtol = 1e-12;
};

// Expected gross reward y(q, t) of a type-q participant when rivals follow the
// cutoff t: binomial mixture over the number of participating rivals, with the
// 0- and 1-rival terms evaluated by quadrature and k >= 2 terms by seeded
// Monte Carlo over truncated draws (common random numbers across evaluations).
class M7Evaluator {
 public:
  M7Evaluator(const GameConfig& cfg, const TypeDistribution& dist, const M7Options& opts = {});

  double y(double q, double t) const;
  // (value, standard error of the Monte Carlo part)
  std::pair<double, double> y_with_se(double q, double t) const;

 private:
  int n_ = 0;
  double reward_ = 0.0;
  TypeDistribution dist_;
  M7Options opts_;
  std::vector<double> uniforms_;  // mc_samples x (N-2) draws, used for k >= 2
};

// Cutoff x* with y(x*, x*) = c, bracketed by y(0,0) = 0 and y(1,1) = R.
// Requires R > c; the marginal region is rejected with ConfigError.
CutoffEquilibrium solve_m7(const GameConfig& cfg, const TypeDistribution& dist,
                           const M7Options& opts = {});

}  // namespace ugc::partialinfo
