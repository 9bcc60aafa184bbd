#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cavchain {

// Locate every sign change of f on [lo, hi].
//
// The interval is sampled at n_samples uniformly spaced abscissae merged with
// the caller's seed points; each sign-changing pair is refined by bisection
// until the bracket is narrower than xtol. A sample where f vanishes exactly
// is returned as a root directly. Roots are returned sorted; the caller owns
// deduplication, since the merging tolerance is problem specific.
template <class F>
std::vector<double> find_sign_change_roots(F&& f, double lo, double hi, int n_samples,
                                           double xtol,
                                           const std::vector<double>& seeds = {}) {
  std::vector<double> roots;
  if (!(hi > lo) || n_samples < 2) return roots;

  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(n_samples) + seeds.size());
  const double step = (hi - lo) / static_cast<double>(n_samples - 1);
  for (int i = 0; i < n_samples; ++i) {
    xs.push_back(i + 1 == n_samples ? hi : lo + step * static_cast<double>(i));
  }
  for (double s : seeds) {
    if (s > lo && s < hi) xs.push_back(s);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double x_prev = xs.front();
  double f_prev = f(x_prev);
  if (f_prev == 0.0) roots.push_back(x_prev);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double x = xs[i];
    const double fx = f(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (f_prev != 0.0 && ((f_prev < 0.0) != (fx < 0.0))) {
      // bisect [x_prev, x]
      double a = x_prev, b = x, fa = f_prev;
      for (int iter = 0; iter < 200 && (b - a) > xtol; ++iter) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        const double fm = f(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if ((fa < 0.0) != (fm < 0.0)) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    x_prev = x;
    f_prev = fx;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Merge roots closer than tol, keeping the representative with the smallest
// residual magnitude.
template <class F>
std::vector<double> dedup_roots(F&& f, std::vector<double> roots, double tol) {
  if (roots.size() < 2) return roots;
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  std::size_t i = 0;
  while (i < roots.size()) {
    std::size_t j = i;
    double best = roots[i];
    double best_abs = std::fabs(f(roots[i]));
    while (j + 1 < roots.size() && roots[j + 1] - roots[j] < tol) {
      ++j;
      const double cand_abs = std::fabs(f(roots[j]));
      if (cand_abs < best_abs) {
        best = roots[j];
        best_abs = cand_abs;
      }
    }
    out.push_back(best);
    i = j + 1;
  }
  return out;
}

}  // namespace cavchain
