#include "mlq/closedform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mlq {

Mat2 sphere_frame(cplx z, cplx lambda) {
  Mat2 m;
  m << 1.0, z / lambda, -std::conj(z) * lambda, 1.0;
  return m / std::sqrt(1.0 + std::norm(z));
}

Mat2 torus_frame(cplx z, cplx lambda) {
  const cplx s = z / lambda - std::conj(z) * lambda;
  Mat2 m;
  m << std::cosh(s), std::sinh(s), std::sinh(s), std::cosh(s);
  return m;
}

Vec4c sphere_surface(cplx z, cplx lambda) {
  const double r2 = std::norm(z);
  const cplx zl = z / lambda, zbl = std::conj(z) * lambda;
  Vec4c v(cplx(1.0, -r2), cplx(-r2, 1.0), zl + kI * zbl, -zbl - kI * zl);
  return v / (1.0 + r2);
}

Vec4c torus_surface(cplx z, cplx lambda) {
  const cplx zl = z / lambda, zbl = std::conj(z) * lambda;
  const cplx sp = zl + zbl + kI * (zl - zbl);
  const cplx sm = zl + zbl - kI * (zl - zbl);
  return Vec4c(std::cos(sp), kI * std::cos(sm), kI * std::sin(sm), -std::sin(sp));
}

EquivariantProfile::EquivariantProfile(double a, double b, double x_max, double step) : a_(a), b_(b) {
  if (a == 0.0 || b == 0.0) throw Error(ErrorKind::Validation, "equivariant profile: a and b must be nonzero");
  if (!(x_max > 0.0) || !(step > 0.0)) throw Error(ErrorKind::Validation, "equivariant profile: x_max and step must be positive");
  const int n = std::max(2, static_cast<int>(std::ceil(x_max / step)));
  h_ = x_max / n;
  if (h_ < 1e-12) throw Error(ErrorKind::Integration, "equivariant profile: step underflow");
  const double k = 4.0 * (a * a + b * b);
  auto acc = [k](double v) { return -2.0 * v * v * v + k * v; };
  double v = 2.0 * b, p = 0.0;
  x_.reserve(n + 1);
  for (int i = 0; i <= n; ++i) {
    x_.push_back(i * h_);
    v_.push_back(v);
    vp_.push_back(p);
    if (i == n) break;
    const double k1v = p, k1p = acc(v);
    const double k2v = p + 0.5 * h_ * k1p, k2p = acc(v + 0.5 * h_ * k1v);
    const double k3v = p + 0.5 * h_ * k2p, k3p = acc(v + 0.5 * h_ * k2v);
    const double k4v = p + h_ * k3p, k4p = acc(v + h_ * k3v);
    v += h_ / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    p += h_ / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    if (!std::isfinite(v) || !std::isfinite(p)) throw Error(ErrorKind::Integration, "equivariant profile diverged");
  }
}

double EquivariantProfile::energy_residual() const {
  double worst = 0.0;
  for (size_t i = 0; i < v_.size(); ++i) {
    const double v2 = v_[i] * v_[i];
    worst = std::max(worst, std::abs(vp_[i] * vp_[i] + (v2 - 4 * a_ * a_) * (v2 - 4 * b_ * b_)));
  }
  return worst;
}

std::pair<double, double> EquivariantProfile::at(double x) const {
  const double ax = std::abs(x);
  if (ax > x_.back() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "equivariant profile: |Re w| = " << ax << " is outside [0, " << x_.back() << "]";
    throw Error(ErrorKind::Domain, os.str());
  }
  const size_t i = std::min(v_.size() - 2, static_cast<size_t>(ax / h_));
  const double k = 4.0 * (a_ * a_ + b_ * b_);
  auto acc = [k](double v) { return -2.0 * v * v * v + k * v; };
  // Quintic Hermite on [x_i, x_{i+1}] from v, v', v''.
  const double t = (ax - x_[i]) / h_;
  const double y0 = v_[i], y1 = v_[i + 1];
  const double d0 = vp_[i] * h_, d1 = vp_[i + 1] * h_;
  const double s0 = acc(v_[i]) * h_ * h_, s1 = acc(v_[i + 1]) * h_ * h_;
  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
  const double h00 = 1 - 10 * t3 + 15 * t4 - 6 * t5, h01 = 10 * t3 - 15 * t4 + 6 * t5;
  const double h10 = t - 6 * t3 + 8 * t4 - 3 * t5, h11 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h20 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5), h21 = 0.5 * (t3 - 2 * t4 + t5);
  const double g00 = -30 * t2 + 60 * t3 - 30 * t4, g01 = -g00;
  const double g10 = 1 - 18 * t2 + 32 * t3 - 15 * t4, g11 = -12 * t2 + 28 * t3 - 15 * t4;
  const double g20 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4), g21 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4);
  const double v = h00 * y0 + h01 * y1 + h10 * d0 + h11 * d1 + h20 * s0 + h21 * s1;
  const double vp = (g00 * y0 + g01 * y1 + g10 * d0 + g11 * d1 + g20 * s0 + g21 * s1) / h_;
  return {v, x < 0 ? -vp : vp};
}

cplx EquivariantProfile::f_integral(double x, cplx lambda) const {
  const double ax = std::abs(x);
  at(ax);  // range check
  const cplx q = 4.0 * a_ * b_ * lambda * lambda;
  auto g = [&](double v) { return 2.0 / (1.0 + v * v / q); };
  cplx sum = 0.0;
  size_t i = 0;
  for (; i + 1 < x_.size() && x_[i + 1] <= ax; ++i)
    sum += h_ / 6.0 * (g(v_[i]) + 4.0 * g(at(x_[i] + 0.5 * h_).first) + g(v_[i + 1]));
  const double rest = ax - x_[i];
  if (rest > 0.0) sum += rest / 6.0 * (g(v_[i]) + 4.0 * g(at(x_[i] + 0.5 * rest).first) + g(at(ax).first));
  return x < 0 ? -sum : sum;
}

Mat2 equivariant_frame(const EquivariantProfile& prof, cplx w, cplx lambda) {
  if (lambda.real() < 0.0) {
    const Mat2 s = sigma3();
    return s * equivariant_frame(prof, w, -lambda) * s;
  }
  const double a = prof.a(), b = prof.b();
  const double x = w.real();
  const auto [v, vp] = prof.at(x);
  const cplx l = lambda;
  const cplx t = std::sqrt((a * l + b / l) * (a / l + b * l));
  const cplx T = t * w - t * prof.f_integral(x, l);
  const cplx r = std::sqrt(4.0 * a * b * l * l + v * v);
  const cplx s1 = std::sqrt(a * l * l + b), s2 = std::sqrt(a + b * l * l);
  const double sv = std::sqrt(2.0 * v);
  const cplx ch = std::cosh(T), sh = std::sinh(T);
  Mat2 m;
  m << r / (sv * s1) * ch, l * vp * ch / (sv * s1 * r) + sv * s2 / r * sh,
       r / (sv * s2) * sh, l * vp * sh / (sv * s2 * r) + sv * s1 / r * ch;
  return m;
}

ClosingReport cylinder_closing(double a, double b, double c, cplx lambda0) {
  ClosingReport r;
  r.mu1 = 2.0 * std::sqrt(c * c + std::norm(lambda0 * a + b / lambda0));
  r.mu2 = 2.0 * std::sqrt(c * c + std::norm(lambda0 * a - b / lambda0));
  auto integral = [](double m) { return std::abs(m - std::round(m)) <= 1e-9; };
  r.closes_q2 = integral(r.mu1) && integral(r.mu2);
  r.closes_s3 = r.closes_q2 && (std::lround(r.mu1) - std::lround(r.mu2)) % 2 == 0;
  return r;
}

AdmissibilityReport trinoid_admissible(cplx lambda0, double v0, double v1, double vinf) {
  AdmissibilityReport r;
  auto h = [&](cplx l) { return (l - lambda0) * (l - 1.0 / lambda0) / l; };
  r.h_plus = h(1.0);
  r.h_minus = h(-1.0);
  const std::array<double, 3> v{v0, v1, vinf};
  for (int k = 0; k < 3; ++k) {
    const double rn = 1.0 + v[k] * r.h_minus.real() / 4.0;
    const double rm = 1.0 + v[k] * r.h_plus.real() / 4.0;
    if (rn < 0.0 || rm < 0.0) {
      r.precondition = false;
      r.violated.push_back("precondition_" + std::to_string(k));
      continue;
    }
    r.n[k] = 0.5 - 0.5 * std::sqrt(rn);
    r.m[k] = 0.5 - 0.5 * std::sqrt(rm);
  }
  if (!r.precondition) return r;
  const char* idx[3] = {"0", "1", "inf"};
  auto check = [&](const std::array<double, 3>& q, const std::string& name) {
    if (std::abs(q[0]) + std::abs(q[1]) + std::abs(q[2]) > 1.0) r.violated.push_back(name + "_sum");
    for (int i = 0; i < 3; ++i)
      if (std::abs(q[i]) > std::abs(q[(i + 1) % 3]) + std::abs(q[(i + 2) % 3]))
        r.violated.push_back(name + "_triangle_" + idx[i]);
  };
  check(r.n, "n");
  check(r.m, "m");
  r.admissible = r.violated.empty();
  return r;
}

TrinoidClosingReport trinoid_closing_check(const std::array<Mat2, 6>& hs, double tol) {
  TrinoidClosingReport r;
  const Mat2 id = Mat2::Identity();
  bool ok = true;
  for (int k = 0; k < 6; ++k) {
    const double dp = (hs[k] - id).norm(), dm = (hs[k] + id).norm();
    r.max_pm_distance = std::max(r.max_pm_distance, std::min(dp, dm));
    r.signs[k] = dp <= tol ? 1 : (dm <= tol ? -1 : 0);
    if (r.signs[k] == 0) ok = false;
  }
  for (int s = 0; s < 2; ++s)
    r.product_residual = std::max(r.product_residual, (hs[3 * s + 2] * hs[3 * s + 1] * hs[3 * s] - id).norm());
  r.closes_q2 = ok;
  return r;
}

}  // namespace mlq
