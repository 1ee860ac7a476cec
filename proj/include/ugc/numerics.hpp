#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace ugc::num {

/// Binomial coefficient as a double; 0 when k < 0 or k > n.
double choose(int n, int k);

// Root of f on [lo, hi]. Requires f(lo) and f(hi) of opposite sign (or zero).
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol = 1e-12, int max_iter = 200);

// Argmax of f on [lo, hi]; assumes f is unimodal around the maximum.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double xtol = 1e-10);

// Adaptive Simpson quadrature with absolute tolerance. The interval is split at
// any interior breakpoints first (integrand kinks). Throws when the evaluation
// budget is exhausted.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-8, std::vector<double> breakpoints = {},
                 long max_evals = 1000000);

// Seeded uniform generator. Identical seeds give identical streams; doubles are
// derived from raw 64-bit draws so results do not depend on library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }
  std::uint64_t next_u64() { return gen_(); }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform01() * (hi - lo + 1) * (1.0 - 1e-16));
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace ugc::num
