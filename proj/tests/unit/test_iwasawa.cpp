#include <doctest.h>

#include <random>

#include <Eigen/QR>

#include "mlq/iwasawa.hpp"

using namespace mlq;

namespace {

LaurentLoop from_fn(const std::function<Mat2(cplx)>& f, Window w, int samples = 64) {
  std::vector<Mat2> vals;
  for (cplx l : circle_samples(samples, 0.5)) vals.push_back(f(l));
  return loop_from_samples(vals, w, 0.5);
}

Mat2 random_sl2(std::mt19937_64& rng, double spread) {
  std::normal_distribution<double> g;
  Mat2 m;
  m << cplx(1 + spread * g(rng), spread * g(rng)), cplx(spread * g(rng), spread * g(rng)),
      cplx(spread * g(rng), spread * g(rng)), cplx(1 + spread * g(rng), spread * g(rng));
  return m / std::sqrt(m.determinant());
}

void check_split(const LaurentLoop& phi, const IwasawaResult& r, double tol) {
  CHECK(r.unitarity_error < tol);
  CHECK(r.residual < tol);
  CHECK(r.B.kmin() >= 0);
  const Mat2 b0 = r.B[0];
  CHECK(std::abs(b0(1, 0)) == 0.0);
  CHECK(std::abs(b0(0, 0).imag()) < tol);
  CHECK(std::abs(b0(1, 1).imag()) < tol);
  CHECK(b0(0, 0).real() > 0.0);
  CHECK(b0(1, 1).real() > 0.0);
  for (cplx l : circle_samples(16, 0.1)) CHECK((r.F.eval(l) * r.B.eval(l) - phi.eval(l)).norm() < tol);
}

}  // namespace

TEST_CASE("spectral factor of simple weights") {
  const LaurentLoop b = spectral_factor_plus(LaurentLoop::identity(), 0, IwasawaOptions{});
  CHECK((b[0] - Mat2::Identity()).norm() < 1e-14);

  Mat2 d = Mat2::Zero();
  d(0, 0) = 4.0;
  d(1, 1) = 0.25;
  const LaurentLoop bd = spectral_factor_plus(LaurentLoop::constant(d), 0, IwasawaOptions{});
  CHECK(std::abs(bd[0](0, 0) - 2.0) < 1e-13);
  CHECK(std::abs(bd[0](1, 1) - 0.5) < 1e-13);

  SUBCASE("sphere weight at z = 1") {
    LaurentLoop phi = LaurentLoop::identity(Window{-1, 0});
    phi.at(-1)(0, 1) = 1.0;
    const LaurentLoop P = loop_mul(loop_star(phi), phi, Window{-1, 1});
    const LaurentLoop B = spectral_factor_plus(P, 1, IwasawaOptions{});
    Mat2 b0, b1;
    b0 << 1, 0, 0, 2;
    b1 << 0, 0, 1, 0;
    CHECK((B[0] - b0 / std::sqrt(2.0)).norm() < 1e-9);
    CHECK((B[1] - b1 / std::sqrt(2.0)).norm() < 1e-9);
    for (cplx l : circle_samples(8)) CHECK((B.eval(l).adjoint() * B.eval(l) - P.eval(l)).norm() < 1e-9);
  }

  SUBCASE("indefinite weight is rejected") {
    Mat2 m = Mat2::Identity();
    m(1, 1) = -1.0;
    try {
      spectral_factor_plus(LaurentLoop::constant(m), 0, IwasawaOptions{});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Factorization);
      CHECK(std::string(e.what()).find("lambda") != std::string::npos);
    }
  }
}

TEST_CASE("sphere loop factorizes in closed form") {
  for (cplx z : {cplx(1.0), cplx(0.3, -0.7), cplx(-1.2, 0.4)}) {
    LaurentLoop phi = LaurentLoop::identity(Window{-1, 0});
    phi.at(-1)(0, 1) = z;
    const IwasawaResult r = iwasawa(phi);
    const double s = 1.0 / std::sqrt(1.0 + std::norm(z));
    for (cplx l : circle_samples(8)) {
      Mat2 want;
      want << 1, z / l, -std::conj(z) * l, 1;
      CHECK((r.F.eval(l) - s * want).norm() < 1e-9);
    }
    check_split(phi, r, 1e-9);
  }
}

TEST_CASE("unitary loops are their own frame") {
  const cplx z(0.4, 0.25);
  const LaurentLoop phi = from_fn(
      [&](cplx l) {
        const cplx x = z / l - std::conj(z) * l;
        Mat2 m;
        m << std::cosh(x), std::sinh(x), std::sinh(x), std::cosh(x);
        return m;
      },
      Window::symmetric(20));
  const IwasawaResult r = iwasawa(phi);
  CHECK((r.B[0] - Mat2::Identity()).norm() < 1e-9);
  for (int k = 1; k <= r.B.kmax(); ++k) CHECK(r.B[k].norm() < 1e-9);
  CHECK(max_circle_distance(r.F, phi) < 1e-9);
}

TEST_CASE("constant loops reduce to QR (property)") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const Mat2 a = random_sl2(rng, 0.8);
    const IwasawaResult r = iwasawa(LaurentLoop::constant(a));
    // Dense oracle: Householder QR with the signs moved so that R has a positive diagonal.
    Eigen::HouseholderQR<Mat2> qr(a);
    Mat2 q = qr.householderQ();
    Mat2 rr = qr.matrixQR().triangularView<Eigen::Upper>();
    Mat2 ph = Mat2::Identity();
    for (int i = 0; i < 2; ++i) ph(i, i) = std::abs(rr(i, i)) / rr(i, i);
    q = q * ph.adjoint();
    rr = ph * rr;
    // det 1 fixes the remaining phase: scale R to positive real diagonal with det R = 1 / det Q.
    const cplx dq = q.determinant();
    Mat2 fix = Mat2::Identity();
    fix(1, 1) = std::conj(dq);
    q = q * fix;
    rr = fix.adjoint() * rr;
    CHECK((r.F[0] - q).norm() < 1e-10);
    CHECK((r.B[0] - rr).norm() < 1e-10);
  }
}

TEST_CASE("mixed-degree loops: unitary frame, normalized plus factor (property)") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  Mat2 e12, e21;
  e12 << 0, 1, 0, 0;
  e21 << 0, 0, 1, 0;
  for (int trial = 0; trial < 12; ++trial) {
    LaurentLoop phi = LaurentLoop::constant(random_sl2(rng, 0.4));
    for (int f = 0; f < 3; ++f) {
      const int d = (f + trial) % 2 ? 1 : -1;
      LaurentLoop u = LaurentLoop::identity(Window{std::min(d, 0), std::max(d, 0)});
      u.at(d) = cplx(0.5 * g(rng), 0.5 * g(rng)) * ((f % 2) ? e12 : e21);
      phi = loop_mul(phi, u, Window{phi.kmin() + std::min(d, 0), phi.kmax() + std::max(d, 0)});
    }
    // A constant non-diagonal conjugation makes the weight's degree-0 block non-diagonal.
    phi = loop_mul(LaurentLoop::constant(random_sl2(rng, 0.5)), phi, phi.window());
    const IwasawaResult r = iwasawa(phi);
    check_split(phi, r, 1e-9);
    CHECK(max_det_error(r.F) < 1e-9);
  }
}

TEST_CASE("fixed Toeplitz size gives the same factor once converged") {
  LaurentLoop phi = LaurentLoop::identity(Window{-1, 0});
  phi.at(-1)(0, 1) = cplx(0.5, 0.2);
  IwasawaOptions fixed;
  fixed.fixed_m = 64;
  const IwasawaResult a = iwasawa(phi), b = iwasawa(phi, fixed);
  CHECK(max_circle_distance(a.F, b.F) < 1e-10);
  CHECK(b.blocks == 64);
}
