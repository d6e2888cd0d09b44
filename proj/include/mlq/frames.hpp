#pragma once

#include <string>
#include <utility>

#include "mlq/loop.hpp"

namespace mlq {

struct FramePointPair {
  Mat2 F1 = Mat2::Identity();
  Mat2 F2 = Mat2::Identity();
  cplx lambda0{1.0, 0.0};
};

// Twisted loops: F2 = F(-i lambda0). Untwisted loops use the partner -lambda0
// and absorb the constant diag(e^{-i pi/4}, e^{i pi/4}) that the twisted-to-untwisted
// isomorphism leaves between the two factors.
FramePointPair frame_pair(const LaurentLoop& F, cplx lambda0, bool twisted = true);
cplx partner_lambda(cplx lambda0, bool twisted);

// Quaternion (p0, p1, p2, p3) of p = [[p0 + i p1, p2 + i p3], [-p2 + i p3, p0 - i p1]].
Vec4 quaternion(const Mat2& p);
Mat2 from_quaternion(const Vec4& q);

Eigen::Matrix4d psi_so4(const Mat2& p, const Mat2& q);

std::pair<Mat2, Mat2> xy_matrices(const FramePointPair& fp);

// (x + i y) / sqrt 2 for the quaternion vectors x of X and y of Y; no phase fixing.
Vec4c q2_lift(const Mat2& X, const Mat2& Y);
// q2_lift with the sign chosen so the first nonzero coordinate has arg in (-pi/2, pi/2].
Vec4c q2_point(const Mat2& X, const Mat2& Y);
Vec4c normalize_projective(const Vec4c& v);

cplx bilinear(const Vec4c& a, const Vec4c& b);
// min over unit phases c of |a/|a| - c b/|b||.
double projective_distance(const Vec4c& a, const Vec4c& b);
// min over the signs +-1 of |a - (+-) b|.
double sign_distance(const Vec4c& a, const Vec4c& b);

std::pair<Vec4, Vec4> s3_pair(const FramePointPair& fp);

// Pauli components of a traceless Hermitian matrix.
Vec3 pauli_vector(const Mat2& h);
// (F1 s3 F1^{-1}, F2 s3 F2^{-1}) as unit 3-vectors.
std::pair<Vec3, Vec3> sphere_pair(const FramePointPair& fp);
// The same pair reordered and with the second factor composed with the antipodal map,
// (-F2 s3 F2^{-1}, F1 s3 F1^{-1}). In this orientation Jac(phi) = -Jac(psi) and
// <phi_z, phi_z> = 2 alpha for the lift used by the invariants.
std::pair<Vec3, Vec3> oriented_pair(const FramePointPair& fp);

// Lift rephased by e^{-i pi/4} so that beta comes out real and nonnegative.
inline const cplx kLiftPhase = std::polar(1.0, -kPi / 4);
Vec4c invariant_lift(const FramePointPair& fp);

// Everything the finite-difference checks need at one point.
struct PointData {
  Vec4c f = Vec4c::Zero();
  Vec3 phi = Vec3::Zero();
  Vec3 psi = Vec3::Zero();
};
PointData point_data(const FramePointPair& fp);

struct SurfaceSample {
  cplx z;
  Vec4c q2 = Vec4c::Zero();
  Vec4 fmin = Vec4::Zero();
  Vec4 N = Vec4::Zero();
  Vec3 phi = Vec3::Zero();
  Vec3 psi = Vec3::Zero();
  double tail = 0.0;
  bool valid = false;
  std::string error;
};

SurfaceSample make_sample(cplx z, const FramePointPair& fp);

}  // namespace mlq
