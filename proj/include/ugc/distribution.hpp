#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ugc {

// Type distribution F on [0,1]: continuous CDF with F(0) = 0 and F(1) = 1.
// Two concrete kinds: the uniform distribution and a piecewise-linear CDF
// given by knots (x, F(x)).
class TypeDistribution {
 public:
  enum class Kind { Uniform, PiecewiseLinearCdf };

  static TypeDistribution uniform();
  // Knots must start at (0,0), end at (1,1), have strictly increasing x and
  // non-decreasing F. Throws std::invalid_argument otherwise.
  static TypeDistribution piecewise_linear(std::vector<std::pair<double, double>> knots);

  double cdf(double x) const;
  double density(double x) const;   // right derivative; left derivative at x = 1
  double quantile(double u) const;  // inf{x : F(x) >= u}

  // Sample from F conditioned on T >= cutoff, driven by a uniform variate.
  double truncated_sample(double cutoff, double u01) const;

  Kind kind() const { return kind_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }
  // Interior kink locations (integrand splitting points); empty for uniform.
  std::vector<double> breakpoints() const;

 private:
  Kind kind_ = Kind::Uniform;
  std::vector<std::pair<double, double>> knots_;
};

}  // namespace ugc
