#ifndef ATOMCHIP_NUMERICS_HPP
#define ATOMCHIP_NUMERICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <type_traits>

#include "atomchip/units.hpp"

namespace atomchip::numerics {

/// Central difference along `dir` with one Richardson step:
///   D(h) = (f(x + h d) - f(x - h d)) / 2h,  result = (4 D(h/2) - D(h)) / 3.
/// Truncation error is O(h^4). Works for scalar or Eigen-valued f.
template <typename F>
auto richardson_directional(const F& f, const Vec3& x, const Vec3& dir, double h) {
  using R = std::decay_t<decltype(f(x))>;
  const auto d = [&](double s) -> R { return (f(x + s * dir) - f(x - s * dir)) / (2.0 * s); };
  const R coarse = d(h);
  const R fine = d(h / 2.0);
  return R((4.0 * fine - coarse) / 3.0);
}

/// Columns are derivatives of the vector field f along x, y, z: J(i, j) = d f_i / d x_j.
template <typename F>
Mat3 jacobian(const F& f, const Vec3& x, double h) {
  Mat3 J;
  for (int j = 0; j < 3; ++j) J.col(j) = richardson_directional(f, x, Vec3::Unit(j), h);
  return J;
}

struct SimplexOptions {
  double initial_step = 1e-6;
  double x_tolerance = 1e-10;
  double f_tolerance = 0.0;
  int max_evaluations = 20000;
};

struct SimplexResult {
  Vec3 x;
  double value;
  int evaluations;
  bool converged;
};

/// Nelder-Mead downhill simplex in three dimensions (standard coefficients).
/// Converges when the simplex diameter drops below x_tolerance and the spread
/// of vertex values below f_tolerance.
inline SimplexResult nelder_mead(const std::function<double(const Vec3&)>& f, const Vec3& start,
                                 const SimplexOptions& opt = {}) {
  std::array<Vec3, 4> v;
  std::array<double, 4> fv;
  int evals = 0;
  const auto eval = [&](const Vec3& p) {
    ++evals;
    return f(p);
  };
  v[0] = start;
  for (int i = 0; i < 3; ++i) v[i + 1] = start + opt.initial_step * Vec3::Unit(i);
  for (int i = 0; i < 4; ++i) fv[i] = eval(v[i]);

  std::array<int, 4> idx;
  while (true) {
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = idx[0], worst = idx[3], second = idx[2];

    double diameter = 0.0;
    for (int i = 1; i < 4; ++i) diameter = std::max(diameter, (v[idx[i]] - v[best]).norm());
    const double spread = fv[worst] - fv[best];
    if (diameter < opt.x_tolerance && spread <= opt.f_tolerance) return {v[best], fv[best], evals, true};
    if (evals >= opt.max_evaluations) return {v[best], fv[best], evals, false};

    Vec3 centroid = Vec3::Zero();
    for (int i = 0; i < 3; ++i) centroid += v[idx[i]];
    centroid /= 3.0;

    const Vec3 xr = centroid + (centroid - v[worst]);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      const Vec3 xe = centroid + 2.0 * (centroid - v[worst]);
      const double fe = eval(xe);
      if (fe < fr) v[worst] = xe, fv[worst] = fe;
      else v[worst] = xr, fv[worst] = fr;
      continue;
    }
    if (fr < fv[second]) {
      v[worst] = xr, fv[worst] = fr;
      continue;
    }
    const bool outside = fr < fv[worst];
    const Vec3 xc = outside ? Vec3(centroid + 0.5 * (xr - centroid)) : Vec3(centroid + 0.5 * (v[worst] - centroid));
    const double fc = eval(xc);
    if (fc < (outside ? fr : fv[worst])) {
      v[worst] = xc, fv[worst] = fc;
      continue;
    }
    for (int i = 1; i < 4; ++i) {
      v[idx[i]] = v[best] + 0.5 * (v[idx[i]] - v[best]);
      fv[idx[i]] = eval(v[idx[i]]);
    }
  }
}

}  // namespace atomchip::numerics

#endif  // ATOMCHIP_NUMERICS_HPP
