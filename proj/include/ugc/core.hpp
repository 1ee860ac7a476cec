#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ugc/distribution.hpp"

namespace ugc {

// Mechanism = allocation rule x action space x information setting.
//   M1 top-K / binary / full      M5 top-K / binary / partial
//   M2 top-K / continuous / full  M6 top-K / continuous / partial
//   M3 proportional / binary / full      M7 proportional / binary / partial
//   M4 proportional / continuous / full
enum class Mechanism { M1, M2, M3, M4, M5, M6, M7 };

enum class AllocationRule { TopK, Proportional };
enum class ActionSpace { Binary, Continuous };
enum class InfoSetting { Full, Partial };

AllocationRule allocation_rule(Mechanism m);
ActionSpace action_space(Mechanism m);
InfoSetting info_setting(Mechanism m);

std::string to_string(Mechanism m);
std::optional<Mechanism> mechanism_from_string(const std::string& s);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Immutable game description. Build through make()/make_partial(); invalid
// parameters throw ConfigError with a field-level message.
struct GameConfig {
  Mechanism mechanism = Mechanism::M4;
  int n_users = 0;
  double reward = 0.0;
  int top_k = 0;  // meaningful for top-K mechanisms only
  double cost_bound = 0.0;
  std::vector<double> types;  // full information: sorted non-increasing, each in (0,1]
  std::optional<TypeDistribution> distribution;  // partial information

  static GameConfig make(Mechanism mech, int n_users, double reward, double cost_bound,
                         std::vector<double> types, int top_k = 0);
  static GameConfig make_partial(Mechanism mech, int n_users, double reward, double cost_bound,
                                 TypeDistribution dist, int top_k = 0);
};

struct ActionProfile {
  std::vector<double> actions;
  double total() const;
};

struct ProfileValidation {
  bool ok = true;
  std::vector<int> violating_users;  // 1-based
  std::string message;
};

// u_i = R * x_i / sum(x) - c * x_i / q_i, and exactly 0 when x_i = 0.
double utility_proportional(int i, const ActionProfile& p, const GameConfig& cfg);

// Reward R/K for a positive contribution ranked in the top K. A tie group
// straddling rank K splits the remaining slots' reward equally. Fewer than K
// participants still receive R/K each.
double utility_topk(int i, const ActionProfile& p, const GameConfig& cfg);

// Dispatch on the mechanism's allocation rule.
double utility(int i, const ActionProfile& p, const GameConfig& cfg);

double total_quality(const ActionProfile& p);

// Bounds 0 <= x_i <= q_i, plus x_i in {0, q_i} for binary action spaces.
ProfileValidation validate_profile(const ActionProfile& p, const GameConfig& cfg);

}  // namespace ugc
