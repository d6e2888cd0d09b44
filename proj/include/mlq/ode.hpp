#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "mlq/types.hpp"

namespace mlq {

struct OdeOptions {
  enum class Method { RK45, RK4 };
  Method method = Method::RK45;
  double tol = 1e-10;     // absolute, per component (RK45)
  int rk4_steps = 200;    // per unit parameter length (RK4)
  bool det_renormalize = true;
  int max_steps = 2000000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

// Dormand-Prince 5(4) on t in [0, 1]; rhs(t, y, dy). Vec is an Eigen vector type.
template <class Vec, class Rhs>
Vec integrate_rk45(Rhs&& rhs, Vec y, double tol, int max_steps, OdeStats* stats = nullptr) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  double t = 0.0;
  double h = 0.05;
  Vec k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), k5(y.size()), k6(y.size()), k7(y.size());
  Vec tmp(y.size()), ynew(y.size());
  rhs(t, y, k1);
  int steps = 0;
  while (t < 1.0) {
    if (++steps > max_steps) throw Error(ErrorKind::Integration, "ODE step budget exhausted");
    if (t + h > 1.0) h = 1.0 - t;
    tmp = y + h * a21 * k1;
    rhs(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, tmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, ynew, k7);
    const double err = (h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).cwiseAbs().maxCoeff();
    if (!std::isfinite(err)) throw Error(ErrorKind::Integration, "ODE solution is not finite");
    if (err <= tol) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);
      if (stats) ++stats->accepted;
    } else if (stats) {
      ++stats->rejected;
    }
    const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 5.0);
    h *= fac;
    if (h < 1e-14) throw Error(ErrorKind::Integration, "ODE step size underflow");
  }
  return y;
}

template <class Vec, class Rhs>
Vec integrate_rk4(Rhs&& rhs, Vec y, int n) {
  const double h = 1.0 / n;
  Vec k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    rhs(t, y, k1);
    tmp = y + 0.5 * h * k1;
    rhs(t + 0.5 * h, tmp, k2);
    tmp = y + 0.5 * h * k2;
    rhs(t + 0.5 * h, tmp, k3);
    tmp = y + h * k3;
    rhs(t + h, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!y.allFinite()) throw Error(ErrorKind::Integration, "ODE solution is not finite");
  return y;
}

}  // namespace mlq
