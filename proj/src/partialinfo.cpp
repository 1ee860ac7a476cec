#include "ugc/partialinfo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ugc/numerics.hpp"

namespace ugc::partialinfo {

namespace {

void require_partial_topk(const GameConfig& cfg, const char* who) {
  if (info_setting(cfg.mechanism) != InfoSetting::Partial ||
      allocation_rule(cfg.mechanism) != AllocationRule::TopK)
    throw std::invalid_argument(std::string(who) + ": partial-information top-K mechanisms only");
}

}  // namespace

double win_probability_T(double x, const GameConfig& cfg, const TypeDistribution& dist) {
  require_partial_topk(cfg, "win_probability_T");
  const int n = cfg.n_users, k = cfg.top_k;
  if (n - k <= 0) return 1.0;
  const double F = dist.cdf(x);
  const double G = 1.0 - F;
  double sum = 0.0;
  for (int j = 0; j < k; ++j)
    sum += num::choose(n - 1, j) * std::pow(F, n - 1 - j) * std::pow(G, j);
  return std::min(sum, 1.0);
}

double win_probability_T_derivative(double x, const GameConfig& cfg,
                                    const TypeDistribution& dist) {
  require_partial_topk(cfg, "win_probability_T_derivative");
  const int n = cfg.n_users, k = cfg.top_k;
  if (n - k < 1)
    throw std::invalid_argument("win_probability_T_derivative: needs N - K >= 1");
  const double F = dist.cdf(x);
  const double G = 1.0 - F;
  return (n - 1) * dist.density(x) * num::choose(n - 2, k - 1) * std::pow(F, n - k - 1) *
         std::pow(G, k - 1);
}

CutoffEquilibrium solve_m5(const GameConfig& cfg, const TypeDistribution& dist) {
  if (cfg.mechanism != Mechanism::M5)
    throw std::invalid_argument("solve_m5: config is for " + to_string(cfg.mechanism));
  const double R = cfg.reward, c = cfg.cost_bound;
  const int k = cfg.top_k;
  if (!(R > k * c))
    throw ConfigError("R: the marginal region R <= K*c is not analyzed; rejected");

  CutoffEquilibrium eq;
  if (cfg.n_users <= k) {
    // No competition: the win probability is identically 1, the participation
    // surplus R/K - c is positive everywhere, and the threshold clamps to 0.
    eq.threshold = 0.0;
    eq.residual = 0.0;
    eq.notes = "N <= K: everyone participates (threshold clamped to 0)";
    return eq;
  }
  auto g = [&](double x) { return R / k * win_probability_T(x, cfg, dist) - c; };
  eq.threshold = num::bisect(g, 0.0, 1.0, 1e-13);
  eq.residual = std::abs(g(eq.threshold));
  eq.notes = "root of (R/K) T(x) - c via bisection; contribute the full type iff type >= threshold";
  return eq;
}

BetaCurve::BetaCurve(const GameConfig& cfg, const TypeDistribution& dist, double abs_tol,
                     int cache_cells)
    : n_(cfg.n_users), k_(cfg.top_k), abs_tol_(abs_tol), dist_(dist) {
  require_partial_topk(cfg, "BetaCurve");
  if (n_ - k_ < 1) throw std::invalid_argument("BetaCurve: needs N - K >= 1");
  prefactor_ = cfg.reward * (n_ - 1) * num::choose(n_ - 2, k_ - 1) / (cfg.cost_bound * k_);

  const auto bps = dist_.breakpoints();
  node_x_.resize(cache_cells + 1);
  node_prefix_.resize(cache_cells + 1);
  node_x_[0] = 0.0;
  node_prefix_[0] = 0.0;
  auto f = [this](double t) { return integrand(t); };
  for (int i = 1; i <= cache_cells; ++i) {
    node_x_[i] = static_cast<double>(i) / cache_cells;
    node_prefix_[i] =
        node_prefix_[i - 1] +
        num::integrate(f, node_x_[i - 1], node_x_[i], abs_tol_ / cache_cells, bps);
  }
}

double BetaCurve::integrand(double t) const {
  const double F = dist_.cdf(t);
  return t * std::pow(F, n_ - k_ - 1) * std::pow(1.0 - F, k_ - 1) * dist_.density(t);
}

double BetaCurve::value(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  const int cells = static_cast<int>(node_x_.size()) - 1;
  const int i = std::min(static_cast<int>(x * cells), cells - 1);
  auto f = [this](double t) { return integrand(t); };
  const double local = num::integrate(f, node_x_[i], x, abs_tol_ / cells, dist_.breakpoints());
  return prefactor_ * (node_prefix_[i] + local);
}

double BetaCurve::derivative(double x) const {
  const double F = dist_.cdf(x);
  return prefactor_ * x * std::pow(F, n_ - k_ - 1) * std::pow(1.0 - F, k_ - 1) *
         dist_.density(x);
}

double beta_uncalibrated(double x, const GameConfig& cfg, const TypeDistribution& dist) {
  require_partial_topk(cfg, "beta_uncalibrated");
  const int n = cfg.n_users, k = cfg.top_k;
  if (n - k < 1) throw std::invalid_argument("beta_uncalibrated: needs N - K >= 1");
  const double pref =
      cfg.reward * (n - 1) * num::choose(n - 2, k - 1) / (cfg.cost_bound * k);
  auto f = [&](double t) {
    const double F = dist.cdf(t);
    return t * std::pow(F, n - k - 1) * std::pow(1.0 - F, k - 1) * dist.density(t);
  };
  return pref * num::integrate(f, 0.0, std::clamp(x, 0.0, 1.0), 1e-10, dist.breakpoints());
}

double beta_uniform_closed_form(double x, const GameConfig& cfg) {
  require_partial_topk(cfg, "beta_uniform_closed_form");
  const int n = cfg.n_users, k = cfg.top_k;
  if (n - k < 1) throw std::invalid_argument("beta_uniform_closed_form: needs N - K >= 1");
  const double pref =
      cfg.reward * (n - 1) * num::choose(n - 2, k - 1) / (cfg.cost_bound * k);
  double sum = 0.0;
  for (int j = 0; j < k; ++j) {
    const double sign = (k - j - 1) % 2 == 0 ? 1.0 : -1.0;
    sum += sign * num::choose(k - 1, j) * std::pow(x, n - j) / (n - j);
  }
  return pref * sum;
}

std::string to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::OriginalBeta: return "original-beta";
    case SegmentKind::Diagonal: return "diagonal";
    case SegmentKind::ShiftedBeta: return "shifted-beta";
  }
  return "?";
}

SymmetricStrategy::SymmetricStrategy(std::shared_ptr<const BetaCurve> beta,
                                     std::vector<Segment> segments, int grid_resolution,
                                     bool fallback_pin_used)
    : beta_(std::move(beta)), segments_(std::move(segments)),
      fallback_pin_used_(fallback_pin_used) {
  grid_.resize(grid_resolution + 1);
  for (int i = 0; i <= grid_resolution; ++i) {
    const double x = static_cast<double>(i) / grid_resolution;
    grid_[i] = {x, value(x)};
  }
}

SymmetricStrategy SymmetricStrategy::from_grid(std::vector<Segment> segments,
                                               std::vector<std::array<double, 2>> grid,
                                               bool fallback_pin_used) {
  if (grid.size() < 2) throw std::invalid_argument("SymmetricStrategy: grid too small");
  SymmetricStrategy s;
  s.segments_ = std::move(segments);
  s.grid_ = std::move(grid);
  s.fallback_pin_used_ = fallback_pin_used;
  return s;
}

const SymmetricStrategy::Segment& SymmetricStrategy::segment_at(double x) const {
  for (const auto& seg : segments_) {
    if (x <= seg.hi || &seg == &segments_.back()) return seg;
  }
  return segments_.back();
}

double SymmetricStrategy::value(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  const Segment& seg = segment_at(x);
  if (seg.kind == SegmentKind::Diagonal) return x;
  if (beta_) return beta_->value(x) + seg.offset;
  // grid-backed: linear interpolation of the exported samples
  const std::size_t cells = grid_.size() - 1;
  const double t = x * cells;
  const std::size_t i = std::min(static_cast<std::size_t>(t), cells - 1);
  const double frac = t - i;
  return grid_[i][1] + frac * (grid_[i + 1][1] - grid_[i][1]);
}

SegmentKind SymmetricStrategy::kind_at(double x) const {
  return segment_at(std::clamp(x, 0.0, 1.0)).kind;
}

SymmetricStrategy calibrate_beta(const GameConfig& cfg, const TypeDistribution& dist,
                                 int grid_resolution) {
  if (cfg.mechanism != Mechanism::M6)
    throw std::invalid_argument("calibrate_beta: config is for " + to_string(cfg.mechanism));
  if (grid_resolution < 1000)
    throw std::invalid_argument("calibrate_beta: grid_resolution must be at least 1000");

  auto beta = std::make_shared<const BetaCurve>(cfg, dist);
  constexpr double kCrossTol = 1e-12;
  constexpr int kMaxPasses = 64;

  using Segment = SymmetricStrategy::Segment;
  std::vector<Segment> segments{{0.0, 1.0, SegmentKind::OriginalBeta, 0.0}};
  double cur_offset = 0.0;
  double scan_from = 0.0;
  bool fallback_used = false;

  auto g = [&](double x) { return beta->value(x) + cur_offset - x; };  // tail excess

  for (int pass = 0; pass < kMaxPasses; ++pass) {
    // First grid point past scan_from where the tail exceeds the diagonal.
    int first_above = -1;
    double prev = scan_from;
    for (int i = static_cast<int>(std::ceil(scan_from * grid_resolution)); i <= grid_resolution;
         ++i) {
      const double x = static_cast<double>(i) / grid_resolution;
      if (x <= scan_from) continue;
      if (g(x) > kCrossTol) {
        first_above = i;
        break;
      }
      prev = x;
    }
    if (first_above < 0) break;  // below the diagonal everywhere: done

    const double x_above = static_cast<double>(first_above) / grid_resolution;
    double x1;
    if (g(prev) > 0.0) {
      x1 = prev;  // tangential continuation right at the previous pin
    } else {
      x1 = num::bisect(g, prev, x_above, 1e-10);
    }

    // End of the crossing interval: first grid point where the tail is back
    // below the diagonal, refined by bisection; 1.0 if it never returns.
    double x2 = 1.0;
    double above = x_above;
    for (int i = first_above + 1; i <= grid_resolution; ++i) {
      const double x = static_cast<double>(i) / grid_resolution;
      if (g(x) <= 0.0) {
        x2 = num::bisect(g, above, x, 1e-10);
        break;
      }
      above = x;
    }

    // Unit-slope point inside the interval; without one, pin the whole
    // interval to the diagonal (flagged: this branch is heuristic).
    auto slope_excess = [&](double x) { return beta->derivative(x) - 1.0; };
    const double probe_lo = std::min(x1 + 1e-9, x2);
    double x_p = -1.0;
    if (slope_excess(probe_lo) > 0.0 && slope_excess(x2) < 0.0)
      x_p = num::bisect(slope_excess, probe_lo, x2, 1e-12);

    auto& last = segments.back();
    if (x_p < 0.0 || x_p - x1 < 1e-9) {
      fallback_used = true;
      if (last.lo >= x1 - 1e-15) {
        segments.pop_back();
      } else {
        last.hi = x1;
      }
      segments.push_back({x1, x2, SegmentKind::Diagonal, 0.0});
      if (x2 < 1.0) {
        // g(x2) = 0, so the tail continues with an unchanged offset.
        segments.push_back({x2, 1.0,
                            cur_offset == 0.0 ? SegmentKind::OriginalBeta
                                              : SegmentKind::ShiftedBeta,
                            cur_offset});
        scan_from = x2;
        continue;
      }
      break;
    }

    const double pre_pin_value = beta->value(x_p) + cur_offset;
    cur_offset += x_p - pre_pin_value;  // tail drops to meet the diagonal at x_p
    if (last.lo >= x1 - 1e-15) {
      segments.pop_back();
    } else {
      last.hi = x1;
    }
    segments.push_back({x1, x_p, SegmentKind::Diagonal, 0.0});
    segments.push_back({x_p, 1.0, SegmentKind::ShiftedBeta, cur_offset});
    scan_from = x_p;
  }

  SymmetricStrategy strategy(beta, std::move(segments), grid_resolution, fallback_used);

  // Construction self-checks.
  if (std::abs(strategy.value(0.0)) > 1e-9)
    throw SolverError("calibrate_beta: strategy does not vanish at 0");
  const auto& grid = strategy.grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i][1] > grid[i][0] + 1e-9)
      throw SolverError("calibrate_beta: strategy exceeds the diagonal after calibration");
    if (i > 0 && grid[i][1] < grid[i - 1][1] - 1e-9)
      throw SolverError("calibrate_beta: strategy is not non-decreasing");
  }
  for (std::size_t s = 1; s < strategy.segments().size(); ++s) {
    const double join = strategy.segments()[s].lo;
    const auto& left = strategy.segments()[s - 1];
    const double lv = left.kind == SegmentKind::Diagonal ? join : beta->value(join) + left.offset;
    if (std::abs(lv - strategy.value(join)) > 1e-9)
      throw SolverError("calibrate_beta: discontinuity at a segment join");
  }
  return strategy;
}

M7Evaluator::M7Evaluator(const GameConfig& cfg, const TypeDistribution& dist,
                         const M7Options& opts)
    : n_(cfg.n_users), reward_(cfg.reward), dist_(dist), opts_(opts) {
  if (cfg.mechanism != Mechanism::M7)
    throw std::invalid_argument("M7Evaluator: config is for " + to_string(cfg.mechanism));
  if (n_ >= 3) {
    // Fixed uniform draws shared by every y() evaluation, so the Monte Carlo
    // part is a smooth deterministic function of the cutoff.
    num::Rng rng(opts_.seed);
    uniforms_.resize(static_cast<std::size_t>(opts_.mc_samples) * (n_ - 1));
    for (double& u : uniforms_) u = rng.uniform01();
  }
}

std::pair<double, double> M7Evaluator::y_with_se(double q, double t) const {
  const double F = dist_.cdf(t);
  const double G = 1.0 - F;

  std::vector<double> w(n_);
  for (int k = 0; k < n_; ++k)
    w[k] = num::choose(n_ - 1, k) * std::pow(F, n_ - 1 - k) * std::pow(G, k);

  double value = w[0] * reward_;  // alone: the whole reward
  double se = 0.0;
  if (q <= 0.0) return {value, 0.0};  // shared-reward terms vanish at q = 0

  if (n_ >= 2 && w[1] > 0.0 && G > 0.0) {
    auto f = [&](double s) { return q / (q + s) * dist_.density(s); };
    const double integral = num::integrate(f, t, 1.0, 1e-10, dist_.breakpoints());
    value += w[1] * reward_ * integral / G;
  }

  if (n_ >= 3 && G > 0.0) {
    bool any = false;
    for (int k = 2; k < n_; ++k) any = any || w[k] > 0.0;
    if (any) {
      double sum = 0.0, sum_sq = 0.0;
      const long S = opts_.mc_samples;
      for (long s = 0; s < S; ++s) {
        const double* row = &uniforms_[static_cast<std::size_t>(s) * (n_ - 1)];
        double partial = 0.0, v = 0.0;
        for (int k = 1; k < n_; ++k) {
          partial += dist_.truncated_sample(t, row[k - 1]);
          if (k >= 2 && w[k] > 0.0) v += w[k] * q / (q + partial);
        }
        sum += v;
        sum_sq += v * v;
      }
      const double mean = sum / S;
      const double var = std::max(0.0, (sum_sq - S * mean * mean) / (S - 1.0));
      value += reward_ * mean;
      se = reward_ * std::sqrt(var / S);
    }
  }
  return {value, se};
}

double M7Evaluator::y(double q, double t) const { return y_with_se(q, t).first; }

CutoffEquilibrium solve_m7(const GameConfig& cfg, const TypeDistribution& dist,
                           const M7Options& opts) {
  if (cfg.mechanism != Mechanism::M7)
    throw std::invalid_argument("solve_m7: config is for " + to_string(cfg.mechanism));
  const double R = cfg.reward, c = cfg.cost_bound;
  if (!(R > c)) throw ConfigError("R: the marginal region R <= c is not analyzed; rejected");

  CutoffEquilibrium eq;
  eq.seed = opts.seed;
  eq.mc_samples = cfg.n_users >= 3 ? opts.mc_samples : 0;
  if (cfg.n_users == 1) {
    eq.threshold = 0.0;
    eq.residual = 0.0;
    eq.notes = "single user: the whole reward beats the cost, everyone participates";
    return eq;
  }

  M7Evaluator eval(cfg, dist, opts);
  auto g = [&](double t) { return eval.y(t, t) - c; };
  // g(0) = -c and g(1) = R - c bracket the root.
  eq.threshold = num::bisect(g, 0.0, 1.0, opts.bisect_xtol);
  const auto [value, se] = eval.y_with_se(eq.threshold, eq.threshold);
  eq.residual = std::abs(value - c);
  eq.residual_stderr = se;
  eq.notes = "root of y(t, t) = c via bisection on common random numbers";
  return eq;
}

}  // namespace ugc::partialinfo
