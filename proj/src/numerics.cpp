#include "ugc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ugc::num {

double choose(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (int i = 1; i <= k; ++i) result *= static_cast<double>(n - k + i) / i;
  return result;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol,
              int max_iter) {
  if (!(lo <= hi)) throw std::invalid_argument("bisect: empty interval");
  double flo = f(lo);
  if (flo == 0.0) return lo;
  double fhi = f(hi);
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) throw std::runtime_error("bisect: root not bracketed");
  for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double xtol) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return 0.5 * (a + b);
}

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  long evals = 0;
  long max_evals = 0;

  double eval(double x) {
    if (++evals > max_evals) throw std::runtime_error("integrate: evaluation budget exhausted");
    return f(x);
  }
};

double simpson_recurse(SimpsonState& st, double a, double m, double b, double fa, double fm,
                       double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.eval(lm);
  const double frm = st.eval(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_recurse(st, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(st, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double simpson_segment(SimpsonState& st, double a, double b, double tol) {
  if (b <= a) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = st.eval(a);
  const double fm = st.eval(m);
  const double fb = st.eval(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(st, a, m, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 std::vector<double> breakpoints, long max_evals) {
  if (b <= a) return 0.0;
  std::vector<double> cuts = {a, b};
  for (double x : breakpoints) {
    if (x > a && x < b) cuts.push_back(x);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  SimpsonState st{f, 0, max_evals};
  const double span = b - a;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    sum += simpson_segment(st, lo, hi, abs_tol * (hi - lo) / span);
  }
  return sum;
}

}  // namespace ugc::num
