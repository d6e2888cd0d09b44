#include "mlq/frames.hpp"

#include <cmath>
#include <tuple>

namespace mlq {

namespace {

void require_su2(const Mat2& m, const char* name) {
  const double u = (m * m.adjoint() - Mat2::Identity()).norm();
  const double d = std::abs(m.determinant() - 1.0);
  if (!(u <= 1e-8 && d <= 1e-8))
    throw Error(ErrorKind::Validation, std::string("psi_so4: ") + name + " is not in SU(2)");
}

}  // namespace

cplx partner_lambda(cplx lambda0, bool twisted) { return twisted ? -kI * lambda0 : -lambda0; }

FramePointPair frame_pair(const LaurentLoop& F, cplx lambda0, bool twisted) {
  FramePointPair fp;
  fp.lambda0 = lambda0;
  fp.F1 = F.eval(lambda0);
  fp.F2 = F.eval(partner_lambda(lambda0, twisted));
  if (!twisted) {
    Mat2 cinv = Mat2::Zero();
    cinv(0, 0) = std::polar(1.0, kPi / 4);
    cinv(1, 1) = std::polar(1.0, -kPi / 4);
    fp.F2 = fp.F2 * cinv;
  }
  return fp;
}

Vec4 quaternion(const Mat2& p) { return Vec4(p(0, 0).real(), p(0, 0).imag(), p(0, 1).real(), p(0, 1).imag()); }

Mat2 from_quaternion(const Vec4& q) {
  Mat2 m;
  m << cplx(q(0), q(1)), cplx(q(2), q(3)), cplx(-q(2), q(3)), cplx(q(0), -q(1));
  return m;
}

Eigen::Matrix4d psi_so4(const Mat2& p, const Mat2& q) {
  require_su2(p, "p");
  require_su2(q, "q");
  const Vec4 a = quaternion(p), b = quaternion(q);
  Eigen::Matrix4d lp, rq;
  lp << a(0), -a(1), -a(2), -a(3),
        a(1), a(0), -a(3), a(2),
        a(2), a(3), a(0), -a(1),
        a(3), -a(2), a(1), a(0);
  rq << b(0), b(1), b(2), b(3),
        -b(1), b(0), -b(3), b(2),
        -b(2), b(3), b(0), -b(1),
        -b(3), -b(2), b(1), b(0);
  return lp * rq;
}

std::pair<Mat2, Mat2> xy_matrices(const FramePointPair& fp) {
  const Mat2 f2inv = fp.F2.inverse();
  return {fp.F1 * f2inv, kI * fp.F1 * sigma3() * f2inv};
}

Vec4c q2_lift(const Mat2& X, const Mat2& Y) {
  const Vec4 x = quaternion(X), y = quaternion(Y);
  Vec4c v;
  for (int k = 0; k < 4; ++k) v(k) = cplx(x(k), y(k)) / std::sqrt(2.0);
  return v;
}

Vec4c normalize_projective(const Vec4c& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw Error(ErrorKind::Degenerate, "zero vector has no projective class");
  Vec4c r = v / n;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(r(k)) <= 1e-12) continue;
    const double a = std::arg(r(k));
    if (a <= -kPi / 2 || a > kPi / 2) r = -r;
    break;
  }
  return r;
}

Vec4c q2_point(const Mat2& X, const Mat2& Y) { return normalize_projective(q2_lift(X, Y)); }

cplx bilinear(const Vec4c& a, const Vec4c& b) { return (a.array() * b.array()).sum(); }

double projective_distance(const Vec4c& a, const Vec4c& b) {
  const Vec4c an = a / a.norm(), bn = b / b.norm();
  const cplx ip = bn.dot(an);
  const cplx c = std::abs(ip) > 0.0 ? ip / std::abs(ip) : cplx(1.0);
  return (an - c * bn).norm();
}

double sign_distance(const Vec4c& a, const Vec4c& b) { return std::min((a - b).norm(), (a + b).norm()); }

std::pair<Vec4, Vec4> s3_pair(const FramePointPair& fp) {
  const auto [X, Y] = xy_matrices(fp);
  return {quaternion(X), quaternion(Y)};
}

Vec3 pauli_vector(const Mat2& h) {
  return Vec3(0.5 * (h(0, 1) + h(1, 0)).real(), 0.5 * (kI * h(0, 1) - kI * h(1, 0)).real(),
              0.5 * (h(0, 0) - h(1, 1)).real());
}

std::pair<Vec3, Vec3> sphere_pair(const FramePointPair& fp) {
  return {pauli_vector(fp.F1 * sigma3() * fp.F1.inverse()), pauli_vector(fp.F2 * sigma3() * fp.F2.inverse())};
}

std::pair<Vec3, Vec3> oriented_pair(const FramePointPair& fp) {
  const auto [a, b] = sphere_pair(fp);
  return {-b, a};
}

Vec4c invariant_lift(const FramePointPair& fp) {
  const auto [X, Y] = xy_matrices(fp);
  return kLiftPhase * q2_lift(X, Y);
}

PointData point_data(const FramePointPair& fp) {
  PointData d;
  d.f = invariant_lift(fp);
  std::tie(d.phi, d.psi) = oriented_pair(fp);
  return d;
}

SurfaceSample make_sample(cplx z, const FramePointPair& fp) {
  SurfaceSample s;
  s.z = z;
  const auto [X, Y] = xy_matrices(fp);
  s.q2 = q2_point(X, Y);
  s.fmin = quaternion(X);
  s.N = quaternion(Y);
  std::tie(s.phi, s.psi) = sphere_pair(fp);
  s.valid = true;
  return s;
}

}  // namespace mlq
