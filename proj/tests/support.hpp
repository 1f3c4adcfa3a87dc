#pragma once

// Finite-difference oracles shared by the test suites.

#include <cmath>
#include <complex>
#include <functional>

#include "levikit/expr.hpp"
#include "levikit/sampling.hpp"

namespace levikit::testing {

using RealFn = std::function<cplx(const Point&)>;

inline Point shifted(Point z, int j, cplx delta) {
  z[static_cast<std::size_t>(j)] += delta;
  return z;
}

/// Central-difference Wirtinger derivative d/dz_j (or d/dconj(z_j)) of f.
inline cplx fd_wirtinger(const RealFn& f, const Point& z, int j, bool anti, double h = 1e-5) {
  const cplx dx = (f(shifted(z, j, h)) - f(shifted(z, j, -h))) / (2.0 * h);
  const cplx dy = (f(shifted(z, j, cplx{0.0, h})) - f(shifted(z, j, cplx{0.0, -h}))) / (2.0 * h);
  const cplx i{0.0, 1.0};
  return anti ? 0.5 * (dx + i * dy) : 0.5 * (dx - i * dy);
}

/// d^2 f / dz_j dconj(z_k) from second differences of f in real coordinates,
/// Richardson-extrapolated over steps h and h/2.
inline cplx fd_mixed(const RealFn& f, const Point& z, int j, int k, double h = 1e-3) {
  const cplx i{0.0, 1.0};
  auto at_step = [&](double s) {
    auto second = [&](cplx dj, cplx dk) {
      return (f(shifted(shifted(z, j, dj), k, dk)) - f(shifted(shifted(z, j, dj), k, -dk)) -
              f(shifted(shifted(z, j, -dj), k, dk)) + f(shifted(shifted(z, j, -dj), k, -dk))) /
             (4.0 * s * s);
    };
    const cplx xx = second(s, s);
    const cplx yy = second(i * s, i * s);
    const cplx xy = second(s, i * s);  // d_xj d_yk
    const cplx yx = second(i * s, s);  // d_yj d_xk
    return 0.25 * (xx + yy + i * (xy - yx));
  };
  return (4.0 * at_step(h / 2.0) - at_step(h)) / 3.0;
}

inline double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace levikit::testing
