#include <doctest.h>

#include <random>

#include "mlq/frames.hpp"

using namespace mlq;

namespace {

Mat2 random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec4 q(g(rng), g(rng), g(rng), g(rng));
  return from_quaternion(q / q.norm());
}

Mat2 sphere_F(cplx z, cplx l) {
  Mat2 m;
  m << 1, z / l, -std::conj(z) * l, 1;
  return m / std::sqrt(1.0 + std::norm(z));
}

Mat2 torus_F(cplx z, cplx l) {
  const cplx x = z / l - std::conj(z) * l;
  Mat2 m;
  m << std::cosh(x), std::sinh(x), std::sinh(x), std::cosh(x);
  return m;
}

FramePointPair pair_of(Mat2 (*F)(cplx, cplx), cplx z, cplx l) {
  return FramePointPair{F(z, l), F(z, -kI * l), l};
}

Vec4c q2_of(const FramePointPair& fp) {
  const auto [X, Y] = xy_matrices(fp);
  return q2_point(X, Y);
}

}  // namespace

TEST_CASE("psi fixtures") {
  CHECK((psi_so4(Mat2::Identity(), Mat2::Identity()) - Eigen::Matrix4d::Identity()).norm() == 0.0);

  Mat2 p = Mat2::Zero();
  p(0, 0) = kI;
  p(1, 1) = -kI;
  Eigen::Matrix4d want;
  want << 0, -1, 0, 0, 1, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1, 0;
  CHECK((psi_so4(p, Mat2::Identity()) - want).norm() == 0.0);

  std::mt19937_64 rng(1);
  const Mat2 a = random_su2(rng), b = random_su2(rng);
  CHECK((psi_so4(-a, -b) - psi_so4(a, b)).norm() == 0.0);
}

TEST_CASE("psi is a homomorphism into SO(4) (property)") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const Mat2 p1 = random_su2(rng), q1 = random_su2(rng), p2 = random_su2(rng), q2 = random_su2(rng);
    const Eigen::Matrix4d m = psi_so4(p1, q1);
    CHECK((m * m.transpose() - Eigen::Matrix4d::Identity()).norm() < 1e-12);
    CHECK(m.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((psi_so4(p1 * p2, q1 * q2) - m * psi_so4(p2, q2)).norm() < 1e-12);
    // kernel: only (I, I) and (-I, -I)
    CHECK((psi_so4(-Mat2::Identity(), Mat2::Identity()) + Eigen::Matrix4d::Identity()).norm() == 0.0);
  }
}

TEST_CASE("psi rejects non-unitary input") {
  Mat2 m = Mat2::Identity();
  m(0, 1) = 0.5;
  try {
    psi_so4(m, Mat2::Identity());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Validation);
  }
}

TEST_CASE("quaternion reading is the inverse of the k-map") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec4 q(g(rng), g(rng), g(rng), g(rng));
    CHECK((quaternion(from_quaternion(q)) - q).norm() < 1e-15);
  }
  Mat2 m;
  m << cplx(1, 2), cplx(3, 4), cplx(-3, 4), cplx(1, -2);
  CHECK((quaternion(m) - Vec4(1, 2, 3, 4)).norm() == 0.0);
}

TEST_CASE("X and Y") {
  FramePointPair id;
  auto [X, Y] = xy_matrices(id);
  CHECK((X - Mat2::Identity()).norm() == 0.0);
  CHECK((Y - kI * sigma3()).norm() == 0.0);

  const double th = 0.37;
  FramePointPair r;
  r.F1 = std::cos(th) * Mat2::Identity() + kI * std::sin(th) * sigma1();
  std::tie(X, Y) = xy_matrices(r);
  CHECK((X - r.F1).norm() < 1e-15);
}

TEST_CASE("Q2 point") {
  const Vec4c v = q2_point(Mat2::Identity(), kI * sigma3());
  const Vec4c want = Vec4c(1, kI, 0, 0) / std::sqrt(2.0);
  CHECK((v - want).norm() < 1e-15);
  CHECK(std::abs(bilinear(v, v)) < 1e-15);

  SUBCASE("sphere family") {
    for (cplx z : {cplx(0.2, 0.1), cplx(-1.0, 0.7), cplx(0.0, -1.4)})
      for (cplx l : {cplx(1.0), std::polar(1.0, 0.9), cplx(-1.0)}) {
        const double r2 = std::norm(z);
        const Vec4c f(1.0 - kI * r2, -r2 + kI, z / l + kI * std::conj(z) * l, -std::conj(z) * l - kI * z / l);
        const Vec4c got = q2_of(pair_of(sphere_F, z, l));
        CHECK(projective_distance(got, f) < 1e-12);
        CHECK(std::abs(bilinear(got, got)) < 1e-12);
      }
  }

  SUBCASE("torus family") {
    for (cplx z : {cplx(0.2, 0.1), cplx(-0.6, 0.3)})
      for (cplx l : {cplx(1.0), std::polar(1.0, -0.4)}) {
        const cplx a = z / l + std::conj(z) * l, b = z / l - std::conj(z) * l;
        const cplx sp = a + kI * b, sm = a - kI * b;
        const Vec4c f(std::cos(sp), kI * std::cos(sm), kI * std::sin(sm), -std::sin(sp));
        CHECK(projective_distance(q2_of(pair_of(torus_F, z, l)), f) < 1e-12);
      }
  }

  SUBCASE("sign convention picks a representative of the projective class") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
      FramePointPair fp{random_su2(rng), random_su2(rng), 1.0};
      auto [X, Y] = xy_matrices(fp);
      const Vec4c a = q2_point(X, Y), b = q2_point(-X, -Y);
      CHECK((a - b).norm() < 1e-14);
      CHECK(a.norm() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("S3 pair (property)") {
  FramePointPair id;
  auto [fmin, N] = s3_pair(id);
  CHECK((fmin - Vec4(1, 0, 0, 0)).norm() == 0.0);
  CHECK((N - Vec4(0, 1, 0, 0)).norm() == 0.0);

  std::tie(fmin, N) = s3_pair(pair_of(sphere_F, 0.0, 1.0));
  CHECK((fmin - Vec4(1, 0, 0, 0)).norm() < 1e-15);

  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    FramePointPair fp{random_su2(rng), random_su2(rng), 1.0};
    std::tie(fmin, N) = s3_pair(fp);
    CHECK(std::abs(fmin.dot(N)) < 1e-14);
    CHECK(fmin.norm() == doctest::Approx(1.0));
    CHECK(N.norm() == doctest::Approx(1.0));
    auto [X, Y] = xy_matrices(fp);
    const Vec4c v = q2_lift(X, Y);
    CHECK((std::sqrt(2.0) * v.real() - fmin).norm() < 1e-14);
    CHECK((std::sqrt(2.0) * v.imag() - N).norm() < 1e-14);
    CHECK(std::abs(bilinear(v, v)) < 1e-14);
  }
}

TEST_CASE("sphere pair") {
  FramePointPair id;
  auto [phi, psi] = sphere_pair(id);
  CHECK((phi - Vec3(0, 0, 1)).norm() == 0.0);
  CHECK((psi - Vec3(0, 0, 1)).norm() == 0.0);

  FramePointPair r;
  r.F1 = std::cos(kPi / 4) * Mat2::Identity() + kI * std::sin(kPi / 4) * sigma2();
  std::tie(phi, psi) = sphere_pair(r);
  CHECK(std::abs(std::abs(phi(0)) - 1.0) < 1e-15);
  CHECK(std::abs(phi(2)) < 1e-15);

  SUBCASE("torus factors stay on great circles") {
    std::vector<Vec3> pts;
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) pts.push_back(sphere_pair(pair_of(torus_F, cplx(0.2 * i - 0.4, 0.2 * j - 0.4), 1.0)).first);
    // Fit the plane through the origin: smallest singular value of the point cloud.
    Eigen::MatrixXd m(pts.size(), 3);
    for (size_t k = 0; k < pts.size(); ++k) m.row(k) = pts[k].transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    CHECK(svd.singularValues()(2) < 1e-12);
  }

  SUBCASE("gauge invariance under the diagonal torus (property)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int trial = 0; trial < 50; ++trial) {
      FramePointPair fp{random_su2(rng), random_su2(rng), 1.0};
      FramePointPair g = fp;
      Mat2 d = Mat2::Zero();
      d(0, 0) = std::polar(1.0, u(rng));
      d(1, 1) = std::conj(d(0, 0));
      g.F1 = fp.F1 * d;
      CHECK((sphere_pair(g).first - sphere_pair(fp).first).norm() < 1e-14);
      CHECK(sphere_pair(fp).first.norm() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("frame pairs from a loop") {
  LaurentLoop F = LaurentLoop::identity(Window{-1, 1});
  F.at(-1)(0, 1) = 0.3;
  F.at(1)(1, 0) = -0.3;
  const cplx l0 = std::polar(1.0, 0.4);
  const FramePointPair tw = frame_pair(F, l0, true);
  CHECK((tw.F2 - F.eval(-kI * l0)).norm() < 1e-15);
  const FramePointPair un = frame_pair(F, l0, false);
  CHECK(std::abs(un.F2(0, 0) - F.eval(-l0)(0, 0) * std::polar(1.0, kPi / 4)) < 1e-15);
  CHECK(partner_lambda(kI, true) == cplx(1.0));
  CHECK(partner_lambda(kI, false) == -kI);
}

TEST_CASE("projective helpers") {
  const Vec4c a(1, kI, 0, 0);
  CHECK(projective_distance(a, std::polar(3.0, 0.7) * a) < 1e-15);
  CHECK(projective_distance(a, Vec4c(0, 0, 1, kI)) > 1.0);
  CHECK(sign_distance(a, -a) == 0.0);
  CHECK_THROWS_AS(normalize_projective(Vec4c::Zero()), Error);
}
