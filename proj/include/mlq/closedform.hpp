#pragma once

#include <array>
#include <string>
#include <vector>

#include "mlq/types.hpp"

namespace mlq {

Mat2 sphere_frame(cplx z, cplx lambda);
Mat2 torus_frame(cplx z, cplx lambda);
// Homogeneous Q2 vectors displayed for the two totally geodesic families.
Vec4c sphere_surface(cplx z, cplx lambda);
Vec4c torus_surface(cplx z, cplx lambda);

// Even solution of v'' = -2 v^3 + 4 (a^2 + b^2) v, v(0) = 2b, v'(0) = 0, tabulated on [0, x_max].
class EquivariantProfile {
 public:
  EquivariantProfile(double a, double b, double x_max, double step = 1e-3);

  double a() const { return a_; }
  double b() const { return b_; }
  double x_max() const { return x_.back(); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& v() const { return v_; }
  const std::vector<double>& v_prime() const { return vp_; }
  // max |v'^2 + (v^2 - 4a^2)(v^2 - 4b^2)| over the grid.
  double energy_residual() const;

  // v and v' at any |x| <= x_max (v even, v' odd), by Hermite interpolation.
  std::pair<double, double> at(double x) const;
  // f(x) = int_0^x 2 dt / (1 + v(t)^2 / (4 a b lambda^2)), composite Simpson; odd in x.
  cplx f_integral(double x, cplx lambda) const;

 private:
  double a_, b_, h_;
  std::vector<double> x_, v_, vp_;
};

// Frame in the log coordinate w (z = e^w, base point w = 0) for the c = 0 family.
Mat2 equivariant_frame(const EquivariantProfile& prof, cplx w, cplx lambda);

struct ClosingReport {
  double mu1 = 0.0, mu2 = 0.0;
  bool closes_q2 = false;
  bool closes_s3 = false;
};
ClosingReport cylinder_closing(double a, double b, double c, cplx lambda0);

struct AdmissibilityReport {
  cplx h_plus, h_minus;  // h(1), h(-1)
  std::array<double, 3> n{}, m{};
  bool precondition = true;
  bool admissible = false;
  std::vector<std::string> violated;
};
AdmissibilityReport trinoid_admissible(cplx lambda0, double v0, double v1, double vinf);

struct TrinoidClosingReport {
  bool closes_q2 = false;
  double max_pm_distance = 0.0;     // worst distance of an H to {+I, -I}
  double product_residual = 0.0;    // worst |H_inf H_1 H_0 - I| over both spectral values
  std::array<int, 6> signs{};       // +1, -1, or 0 when neither
};
// hs = {H0, H1, Hinf} at lambda0 followed by the same at the partner value.
TrinoidClosingReport trinoid_closing_check(const std::array<Mat2, 6>& hs, double tol);

}  // namespace mlq
