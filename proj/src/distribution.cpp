#include "ugc/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ugc {

TypeDistribution TypeDistribution::uniform() {
  TypeDistribution d;
  d.kind_ = Kind::Uniform;
  return d;
}

TypeDistribution TypeDistribution::piecewise_linear(std::vector<std::pair<double, double>> knots) {
  if (knots.size() < 2) throw std::invalid_argument("distribution: need at least two knots");
  if (knots.front().first != 0.0 || knots.front().second != 0.0)
    throw std::invalid_argument("distribution: first knot must be (0, 0)");
  if (knots.back().first != 1.0 || knots.back().second != 1.0)
    throw std::invalid_argument("distribution: last knot must be (1, 1)");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first))
      throw std::invalid_argument("distribution: knot positions must be strictly increasing");
    if (knots[i].second < knots[i - 1].second)
      throw std::invalid_argument("distribution: CDF values must be non-decreasing");
  }
  TypeDistribution d;
  d.kind_ = Kind::PiecewiseLinearCdf;
  d.knots_ = std::move(knots);
  return d;
}

double TypeDistribution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  if (kind_ == Kind::Uniform) return x;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const std::pair<double, double>& k) { return v < k.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (x - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

double TypeDistribution::density(double x) const {
  if (kind_ == Kind::Uniform) return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
  if (x < 0.0 || x > 1.0) return 0.0;
  // right slope; at x = 1 fall back to the last segment
  std::size_t i = 0;
  while (i + 2 < knots_.size() && knots_[i + 1].first <= x) ++i;
  const auto& lo = knots_[i];
  const auto& hi = knots_[i + 1];
  return (hi.second - lo.second) / (hi.first - lo.first);
}

double TypeDistribution::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  if (kind_ == Kind::Uniform) return u;
  if (u <= 0.0) return 0.0;
  // first knot with F >= u, then invert the segment ending there
  auto it = std::lower_bound(knots_.begin(), knots_.end(), u,
                             [](const std::pair<double, double>& k, double v) { return k.second < v; });
  if (it == knots_.begin()) return it->first;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  if (hi.second == lo.second) return lo.first;
  const double t = (u - lo.second) / (hi.second - lo.second);
  return lo.first + t * (hi.first - lo.first);
}

double TypeDistribution::truncated_sample(double cutoff, double u01) const {
  const double fc = cdf(cutoff);
  if (fc >= 1.0) return 1.0;
  const double v = quantile(fc + u01 * (1.0 - fc));
  return std::max(v, cutoff);
}

std::vector<double> TypeDistribution::breakpoints() const {
  std::vector<double> pts;
  if (kind_ == Kind::PiecewiseLinearCdf) {
    for (std::size_t i = 1; i + 1 < knots_.size(); ++i) pts.push_back(knots_[i].first);
  }
  return pts;
}

}  // namespace ugc
