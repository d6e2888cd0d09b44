#include "mlq/iwasawa.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>

namespace mlq {

namespace {

void check_positive(const LaurentLoop& P, int samples) {
  for (cplx l : circle_samples(samples)) {
    const Mat2 v = P.eval(l);
    const double tr = v.trace().real();
    const double det = v.determinant().real();
    if (!(tr > 0.0 && det > 1e-14 * tr * tr)) {
      std::ostringstream os;
      os << "spectral factorization: P is not positive definite at lambda = " << l.real() << (l.imag() < 0 ? "-" : "+")
         << std::abs(l.imag()) << "i";
      throw Error(ErrorKind::Factorization, os.str());
    }
  }
}

// Factor of the m-block section: B_k = (L(m-1, m-1-k))^H, k = 0..degree.
LaurentLoop bauer_step(const LaurentLoop& P, int m, int degree) {
  const int n = 2 * m;
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) t.block<2, 2>(2 * i, 2 * j) = P[j - i];
  Eigen::LLT<Eigen::MatrixXcd, Eigen::Lower> llt(t);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::Factorization, "block Toeplitz section is not positive definite");
  const Eigen::MatrixXcd& l = llt.matrixLLT();
  LaurentLoop b(Window{0, degree});
  for (int k = 0; k <= degree && k < m; ++k) b.at(k) = l.block<2, 2>(2 * (m - 1), 2 * (m - 1 - k)).adjoint();
  // The strictly upper part of matrixLLT() still holds the input; the diagonal block of L is lower triangular.
  b.at(0)(1, 0) = 0.0;
  return b;
}

double coeff_distance(const LaurentLoop& a, const LaurentLoop& b) {
  double d = 0.0;
  for (int k = std::min(a.kmin(), b.kmin()); k <= std::max(a.kmax(), b.kmax()); ++k)
    d = std::max(d, (a[k] - b[k]).norm());
  return d;
}

}  // namespace

LaurentLoop spectral_factor_plus(const LaurentLoop& P, int degree, const IwasawaOptions& opts, int* blocks_used) {
  check_positive(P, opts.pd_samples);
  const int n = std::max({1, -P.kmin(), P.kmax()});
  const int need = degree + 1;
  if (opts.fixed_m > 0) {
    if (blocks_used) *blocks_used = opts.fixed_m;
    return bauer_step(P, std::max(opts.fixed_m, need), degree);
  }
  int m = std::max(opts.m0 > 0 ? opts.m0 : std::max(4 * n, 16), need);
  const int step = opts.m_step > 0 ? opts.m_step : n;
  const int max_m = std::max(opts.max_m > 0 ? opts.max_m : std::max(16 * n, 256), m + step);
  LaurentLoop prev = bauer_step(P, m, degree);
  while (m < max_m) {
    m = std::min(max_m, m + std::max(step, m / 2));
    LaurentLoop next = bauer_step(P, m, degree);
    if (coeff_distance(prev, next) <= opts.tol) {
      if (blocks_used) *blocks_used = m;
      return next;
    }
    prev = std::move(next);
  }
  std::ostringstream os;
  os << "spectral factorization did not stabilize within " << max_m << " Toeplitz blocks";
  throw Error(ErrorKind::Convergence, os.str());
}

IwasawaResult iwasawa(const LaurentLoop& phi, const IwasawaOptions& opts) {
  const LaurentLoop phit = opts.trim > 0.0 ? phi.rewindowed(effective_window(phi, opts.trim)) : phi;
  const Window w = phit.window();
  const int degree = w.kmax - w.kmin;
  const LaurentLoop P = loop_mul(loop_star(phit), phit, Window{-degree, degree});
  IwasawaResult r;
  r.B = spectral_factor_plus(P, degree, opts, &r.blocks);
  r.B.add_tail(phit.tail_norm());
  // det Phi = 1 makes F = (Phi^*)^{-1} B^* as well, so F lives on [kmin, -kmin].
  const Window fw{w.kmin, std::max(w.kmax, -w.kmin)};
  const LaurentLoop binv = plus_inverse(r.B, Window{0, fw.kmax - w.kmin});
  r.F = loop_mul(phit, binv, fw);
  r.unitarity_error = max_unitarity_error(r.F, opts.pd_samples);
  for (cplx l : circle_samples(opts.pd_samples))
    r.residual = std::max(r.residual, (phi.eval(l) - r.F.eval(l) * r.B.eval(l)).norm());
  return r;
}

}  // namespace mlq
