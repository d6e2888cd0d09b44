#include "mlq/loop.hpp"

#include <algorithm>
#include <cmath>

namespace mlq {

LaurentLoop::LaurentLoop(Window w) : w_(w) {
  if (w.kmin > w.kmax) throw Error(ErrorKind::Validation, "loop window has kmin > kmax");
  c_.assign(static_cast<size_t>(w.size()), Mat2::Zero());
}

LaurentLoop LaurentLoop::constant(const Mat2& a, Window w) {
  if (!w.contains(0)) throw Error(ErrorKind::Validation, "constant loop window must contain degree 0");
  LaurentLoop l(w);
  l.at(0) = a;
  return l;
}

LaurentLoop LaurentLoop::monomial(int k, const Mat2& a) {
  LaurentLoop l(Window{std::min(k, 0), std::max(k, 0)});
  l.at(k) = a;
  return l;
}

Mat2 LaurentLoop::operator[](int k) const {
  if (!w_.contains(k)) return Mat2::Zero();
  return c_[static_cast<size_t>(k - w_.kmin)];
}

Mat2& LaurentLoop::at(int k) {
  if (!w_.contains(k)) throw Error(ErrorKind::Domain, "degree outside loop window");
  return c_[static_cast<size_t>(k - w_.kmin)];
}

const Mat2& LaurentLoop::at(int k) const {
  if (!w_.contains(k)) throw Error(ErrorKind::Domain, "degree outside loop window");
  return c_[static_cast<size_t>(k - w_.kmin)];
}

bool LaurentLoop::is_plus(double tol) const {
  for (int k = w_.kmin; k < 0; ++k)
    if (at(k).norm() > tol) return false;
  return true;
}

double LaurentLoop::max_coeff_norm() const {
  double m = 0.0;
  for (const auto& c : c_) m = std::max(m, c.norm());
  return m;
}

LaurentLoop LaurentLoop::rewindowed(Window w) const {
  LaurentLoop r(w);
  r.tail_ = tail_;
  for (int k = w_.kmin; k <= w_.kmax; ++k) {
    if (w.contains(k))
      r.at(k) = at(k);
    else
      r.tail_ += at(k).norm();
  }
  return r;
}

Mat2 LaurentLoop::eval(cplx lambda) const {
  if (lambda == cplx(0.0) && w_.kmin < 0)
    throw Error(ErrorKind::Domain, "loop evaluated at lambda = 0 has negative degrees");
  Mat2 acc = Mat2::Zero();
  for (int k = w_.kmax; k >= w_.kmin; --k) acc = acc * lambda + at(k);
  if (w_.kmin != 0) acc *= std::pow(lambda, w_.kmin);
  return acc;
}

LaurentLoop loop_mul(const LaurentLoop& a, const LaurentLoop& b, Window w) {
  LaurentLoop r(w);
  double dropped = 0.0;
  for (int i = a.kmin(); i <= a.kmax(); ++i) {
    const Mat2& ai = a.at(i);
    if (ai.isZero(0.0)) continue;
    for (int j = b.kmin(); j <= b.kmax(); ++j) {
      const Mat2& bj = b.at(j);
      if (bj.isZero(0.0)) continue;
      if (w.contains(i + j))
        r.at(i + j).noalias() += ai * bj;
      else
        dropped += (ai * bj).norm();
    }
  }
  r.add_tail(dropped + a.tail_norm() + b.tail_norm());
  return r;
}

namespace {
Window hull(Window a, Window b) { return {std::min(a.kmin, b.kmin), std::max(a.kmax, b.kmax)}; }
}  // namespace

LaurentLoop loop_add(const LaurentLoop& a, const LaurentLoop& b) {
  LaurentLoop r = a.rewindowed(hull(a.window(), b.window()));
  for (int k = b.kmin(); k <= b.kmax(); ++k) r.at(k) += b.at(k);
  r.add_tail(b.tail_norm());
  return r;
}

LaurentLoop loop_sub(const LaurentLoop& a, const LaurentLoop& b) { return loop_add(a, loop_scale(b, -1.0)); }

LaurentLoop loop_scale(const LaurentLoop& a, cplx s) {
  LaurentLoop r(a.window());
  for (int k = a.kmin(); k <= a.kmax(); ++k) r.at(k) = s * a.at(k);
  r.add_tail(std::abs(s) * a.tail_norm());
  return r;
}

Mat2 loop_eval(const LaurentLoop& a, cplx lambda) { return a.eval(lambda); }

LaurentLoop loop_star(const LaurentLoop& a) {
  LaurentLoop r(Window{-a.kmax(), -a.kmin()});
  for (int k = a.kmin(); k <= a.kmax(); ++k) r.at(-k) = a.at(k).adjoint();
  r.add_tail(a.tail_norm());
  return r;
}

LaurentLoop plus_inverse(const LaurentLoop& b, Window w) {
  if (w.kmin != 0) throw Error(ErrorKind::Validation, "plus_inverse needs a window starting at degree 0");
  if (!b.is_plus()) throw Error(ErrorKind::Factorization, "plus_inverse: argument is not a plus-loop");
  const Mat2 b0 = b[0];
  if (std::abs(b0.determinant()) < 1e-300 * std::max(1.0, b0.squaredNorm()))
    throw Error(ErrorKind::Factorization, "plus_inverse: constant term is singular");
  const Mat2 b0inv = b0.inverse();
  LaurentLoop r(w);
  r.at(0) = b0inv;
  for (int k = 1; k <= w.kmax; ++k) {
    Mat2 s = Mat2::Zero();
    for (int j = 1; j <= std::min(k, b.kmax()); ++j) s.noalias() += b.at(j) * r.at(k - j);
    r.at(k) = -b0inv * s;
  }
  r.add_tail(b.tail_norm());
  return r;
}

ParityReport twist_check(const LaurentLoop& a) {
  ParityReport p;
  for (int k = a.kmin(); k <= a.kmax(); ++k) {
    const Mat2& c = a.at(k);
    const bool even = (k % 2) == 0;
    if (even)
      p.max_even_offdiag = std::max({p.max_even_offdiag, std::abs(c(0, 1)), std::abs(c(1, 0))});
    else
      p.max_odd_diag = std::max({p.max_odd_diag, std::abs(c(0, 0)), std::abs(c(1, 1))});
  }
  return p;
}

std::vector<cplx> circle_samples(int m, double offset) {
  std::vector<cplx> s(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) s[static_cast<size_t>(j)] = std::polar(1.0, 2.0 * kPi * (j + offset) / m);
  return s;
}

LaurentLoop loop_from_samples(const std::vector<Mat2>& values, Window w, double offset) {
  const int m = static_cast<int>(values.size());
  if (m < w.size()) throw Error(ErrorKind::Validation, "too few circle samples for the requested window");
  const auto pts = circle_samples(m, offset);
  LaurentLoop r(w);
  for (int k = w.kmin; k <= w.kmax; ++k) {
    Mat2 acc = Mat2::Zero();
    for (int j = 0; j < m; ++j) acc += values[static_cast<size_t>(j)] * std::pow(pts[static_cast<size_t>(j)], -k);
    r.at(k) = acc / static_cast<double>(m);
  }
  return r;
}

LaurentLoop normalize_det(const LaurentLoop& a) {
  const int m = 4 * a.window().size();
  const auto pts = circle_samples(m, 0.5);
  std::vector<Mat2> vals(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    Mat2 v = a.eval(pts[static_cast<size_t>(j)]);
    const cplx d = v.determinant();
    if (d == cplx(0.0)) throw Error(ErrorKind::Integration, "frame is singular on the unit circle");
    vals[static_cast<size_t>(j)] = v / std::sqrt(d);
  }
  LaurentLoop r = loop_from_samples(vals, a.window(), 0.5);
  r.add_tail(a.tail_norm());
  return r;
}

double max_unitarity_error(const LaurentLoop& a, int samples) {
  double e = 0.0;
  for (cplx l : circle_samples(samples)) {
    const Mat2 v = a.eval(l);
    e = std::max(e, (v * v.adjoint() - Mat2::Identity()).norm());
  }
  return e;
}

double max_det_error(const LaurentLoop& a, int samples) {
  double e = 0.0;
  for (cplx l : circle_samples(samples)) e = std::max(e, std::abs(a.eval(l).determinant() - 1.0));
  return e;
}

double max_circle_distance(const LaurentLoop& a, const LaurentLoop& b, int samples) {
  double e = 0.0;
  for (cplx l : circle_samples(samples)) e = std::max(e, (a.eval(l) - b.eval(l)).norm());
  return e;
}

}  // namespace mlq

namespace mlq {

Window effective_window(const LaurentLoop& a, double rel) {
  const double cut = rel * a.max_coeff_norm();
  Window w{0, 0};
  for (int k = a.kmin(); k <= a.kmax(); ++k) {
    if (a.at(k).norm() <= cut) continue;
    w.kmin = std::min(w.kmin, k);
    w.kmax = std::max(w.kmax, k);
  }
  return w;
}

}  // namespace mlq
