#include "ugc/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ugc {

AllocationRule allocation_rule(Mechanism m) {
  switch (m) {
    case Mechanism::M1:
    case Mechanism::M2:
    case Mechanism::M5:
    case Mechanism::M6:
      return AllocationRule::TopK;
    default:
      return AllocationRule::Proportional;
  }
}

ActionSpace action_space(Mechanism m) {
  switch (m) {
    case Mechanism::M2:
    case Mechanism::M4:
    case Mechanism::M6:
      return ActionSpace::Continuous;
    default:
      return ActionSpace::Binary;
  }
}

InfoSetting info_setting(Mechanism m) {
  switch (m) {
    case Mechanism::M5:
    case Mechanism::M6:
    case Mechanism::M7:
      return InfoSetting::Partial;
    default:
      return InfoSetting::Full;
  }
}

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::M1: return "M1";
    case Mechanism::M2: return "M2";
    case Mechanism::M3: return "M3";
    case Mechanism::M4: return "M4";
    case Mechanism::M5: return "M5";
    case Mechanism::M6: return "M6";
    case Mechanism::M7: return "M7";
  }
  return "?";
}

std::optional<Mechanism> mechanism_from_string(const std::string& s) {
  for (Mechanism m : {Mechanism::M1, Mechanism::M2, Mechanism::M3, Mechanism::M4, Mechanism::M5,
                      Mechanism::M6, Mechanism::M7}) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

namespace {

void validate_common(const GameConfig& cfg) {
  if (cfg.n_users < 1) throw ConfigError("N: must be a positive integer");
  if (!(cfg.reward > 0.0)) throw ConfigError("R: must be positive");
  if (!(cfg.cost_bound > 0.0)) throw ConfigError("c: must be positive");
  if (allocation_rule(cfg.mechanism) == AllocationRule::TopK && cfg.top_k < 1)
    throw ConfigError("K: top-K mechanisms need K >= 1");
}

}  // namespace

GameConfig GameConfig::make(Mechanism mech, int n_users, double reward, double cost_bound,
                            std::vector<double> types, int top_k) {
  if (info_setting(mech) != InfoSetting::Full)
    throw ConfigError("types: mechanism " + to_string(mech) + " takes a distribution, not types");
  GameConfig cfg;
  cfg.mechanism = mech;
  cfg.n_users = n_users;
  cfg.reward = reward;
  cfg.cost_bound = cost_bound;
  cfg.top_k = top_k;
  cfg.types = std::move(types);
  validate_common(cfg);
  if (static_cast<int>(cfg.types.size()) != n_users)
    throw ConfigError("types: expected exactly N values");
  for (std::size_t i = 0; i < cfg.types.size(); ++i) {
    const double q = cfg.types[i];
    if (!(q > 0.0))
      throw ConfigError("types: user " + std::to_string(i + 1) +
                        " has non-positive type (the cost rate is undefined at 0)");
    if (q > 1.0)
      throw ConfigError("types: user " + std::to_string(i + 1) + " exceeds the unit type bound");
    if (i > 0 && cfg.types[i] > cfg.types[i - 1])
      throw ConfigError("types: must be sorted non-increasing");
  }
  return cfg;
}

GameConfig GameConfig::make_partial(Mechanism mech, int n_users, double reward, double cost_bound,
                                    TypeDistribution dist, int top_k) {
  if (info_setting(mech) != InfoSetting::Partial)
    throw ConfigError("distribution: mechanism " + to_string(mech) + " takes types, not a distribution");
  GameConfig cfg;
  cfg.mechanism = mech;
  cfg.n_users = n_users;
  cfg.reward = reward;
  cfg.cost_bound = cost_bound;
  cfg.top_k = top_k;
  cfg.distribution = std::move(dist);
  validate_common(cfg);
  return cfg;
}

double ActionProfile::total() const {
  double s = 0.0;
  for (double x : actions) s += x;
  return s;
}

double total_quality(const ActionProfile& p) { return p.total(); }

double utility_proportional(int i, const ActionProfile& p, const GameConfig& cfg) {
  const double xi = p.actions[i];
  if (xi <= 0.0) return 0.0;
  return cfg.reward * xi / p.total() - cfg.cost_bound * xi / cfg.types[i];
}

double utility_topk(int i, const ActionProfile& p, const GameConfig& cfg) {
  const double xi = p.actions[i];
  if (xi <= 0.0) return 0.0;
  const int k = cfg.top_k;
  int above = 0, tied = 0;
  for (double xj : p.actions) {
    if (xj > xi) ++above;
    else if (xj == xi) ++tied;  // includes user i
  }
  double reward = 0.0;
  if (above < k) {
    const int slots = k - above;
    reward = cfg.reward / k * std::min(1.0, static_cast<double>(slots) / tied);
  }
  return reward - cfg.cost_bound * xi / cfg.types[i];
}

double utility(int i, const ActionProfile& p, const GameConfig& cfg) {
  return allocation_rule(cfg.mechanism) == AllocationRule::TopK ? utility_topk(i, p, cfg)
                                                                : utility_proportional(i, p, cfg);
}

ProfileValidation validate_profile(const ActionProfile& p, const GameConfig& cfg) {
  ProfileValidation v;
  if (static_cast<int>(p.actions.size()) != cfg.n_users) {
    v.ok = false;
    v.message = "profile length does not match N";
    return v;
  }
  constexpr double kSlack = 1e-12;
  const bool binary = action_space(cfg.mechanism) == ActionSpace::Binary;
  std::ostringstream msg;
  for (int i = 0; i < cfg.n_users; ++i) {
    const double x = p.actions[i];
    const double q = cfg.types[i];
    bool bad = x < -kSlack || x > q + kSlack;
    if (!bad && binary) bad = std::abs(x) > kSlack && std::abs(x - q) > kSlack;
    if (bad) {
      v.ok = false;
      v.violating_users.push_back(i + 1);
      msg << (v.violating_users.size() > 1 ? "; " : "") << "user " << (i + 1)
          << (binary && x > -kSlack && x < q + kSlack ? ": action not in {0, q}"
                                                      : ": action outside [0, q]");
    }
  }
  v.message = msg.str();
  return v;
}

}  // namespace ugc
