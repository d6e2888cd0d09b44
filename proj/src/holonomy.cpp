#include "mlq/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace mlq {

namespace {

double segment_distance(cplx a, cplx b, cplx p) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

bool segment_clear(const Potential& p, cplx a, cplx b, double eps) {
  for (cplx s : p.singular_points())
    if (segment_distance(a, b, s) < eps) return false;
  return true;
}

std::string where(cplx z) {
  std::ostringstream os;
  os.precision(12);
  os << "z = " << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

using Vec = Eigen::VectorXcd;
using Vec4s = Eigen::Matrix<cplx, 4, 1>;

}  // namespace

DomainPath straight_path(cplx from, cplx to) { return DomainPath{{from, to}, from == to}; }

DomainPath polygon_loop(cplx base, cplx center, double radius, int sides, bool clockwise) {
  DomainPath path;
  const double theta0 = base == center ? 0.0 : std::arg(base - center);
  const double dir = clockwise ? -1.0 : 1.0;
  path.vertices.push_back(base);
  for (int k = 0; k <= sides; ++k) {
    const cplx v = center + std::polar(radius, theta0 + dir * 2.0 * kPi * k / sides);
    if (std::abs(v - path.vertices.back()) > 1e-15) path.vertices.push_back(v);
  }
  if (std::abs(path.vertices.back() - base) > 1e-15) path.vertices.push_back(base);
  path.vertices.back() = base;
  path.closed = true;
  return path;
}

DomainPath concat(const DomainPath& a, const DomainPath& b) {
  DomainPath r = a;
  for (size_t i = 0; i < b.vertices.size(); ++i) {
    if (i == 0 && !r.vertices.empty() && r.vertices.back() == b.vertices[0]) continue;
    r.vertices.push_back(b.vertices[i]);
  }
  r.closed = !r.vertices.empty() && r.vertices.front() == r.vertices.back();
  return r;
}

void validate_path(const Potential& p, const DomainPath& path, double eps_pole) {
  for (size_t i = 0; i < path.vertices.size(); ++i) {
    if (p.distance_to_poles(path.vertices[i]) < eps_pole)
      throw Error(ErrorKind::Domain, "path vertex within eps_pole of a singular point at " + where(path.vertices[i]));
    if (i + 1 < path.vertices.size()) {
      if (path.vertices[i] == path.vertices[i + 1])
        throw Error(ErrorKind::Domain, "path has repeated consecutive vertices");
      if (!segment_clear(p, path.vertices[i], path.vertices[i + 1], eps_pole))
        throw Error(ErrorKind::Domain, "path segment passes within eps_pole of a singular point near " +
                                           where(path.vertices[i]));
    }
  }
}

DomainPath plan_path(const Potential& p, cplx from, cplx to, double eps_pole) {
  if (p.distance_to_poles(to) < eps_pole)
    throw Error(ErrorKind::Domain, "grid intersects singular set at " + where(to));
  if (from == to) return DomainPath{{from}, false};
  if (segment_clear(p, from, to, eps_pole)) return straight_path(from, to);
  const cplx mid = 0.5 * (from + to);
  const cplx dir = (to - from) / std::abs(to - from);
  const cplx normal = kI * dir;
  const double len = std::max(std::abs(to - from), 0.1);
  for (double scale : {0.25, 0.5, 1.0, 2.0}) {
    for (double side : {1.0, -1.0}) {
      const cplx w = mid + side * scale * len * normal;
      if (p.distance_to_poles(w) >= eps_pole && segment_clear(p, from, w, eps_pole) &&
          segment_clear(p, w, to, eps_pole))
        return DomainPath{{from, w, to}, false};
    }
  }
  throw Error(ErrorKind::Domain, "no pole-free path to " + where(to));
}

LaurentLoop integrate_frame(const Potential& p, const DomainPath& path, const LaurentLoop& phi0,
                            const OdeOptions& opts, Window w, double eps_pole) {
  LaurentLoop phi = phi0.rewindowed(w);
  if (path.vertices.size() < 2) return phi;
  validate_path(p, path, eps_pole);
  const int nk = w.size();
  std::vector<std::pair<int, Mat2>> ts;
  ts.reserve(8);

  for (size_t s = 0; s + 1 < path.vertices.size(); ++s) {
    const cplx z0 = path.vertices[s], z1 = path.vertices[s + 1];
    const cplx dz = z1 - z0;
    auto rhs = [&](double t, const Vec& y, Vec& dy) {
      p.terms(z0 + t * dz, ts);
      dy.setZero();
      for (int j = 0; j < nk; ++j) {
        Eigen::Map<const Mat2> pj(y.data() + 4 * j);
        for (const auto& [d, m] : ts) {
          const int k = j + d;
          if (k < 0 || k >= nk) continue;
          Eigen::Map<Mat2> out(dy.data() + 4 * k);
          out.noalias() += pj * (m * dz);
        }
      }
    };
    Vec y(4 * nk);
    for (int j = 0; j < nk; ++j) Eigen::Map<Mat2>(y.data() + 4 * j) = phi.at(w.kmin + j);
    try {
      if (opts.method == OdeOptions::Method::RK45)
        y = integrate_rk45(rhs, y, opts.tol, opts.max_steps);
      else
        y = integrate_rk4(rhs, y, std::max(1, static_cast<int>(std::ceil(opts.rk4_steps * std::abs(dz)))));
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " on segment starting at " + where(z0));
    }
    LaurentLoop next(w);
    next.add_tail(phi.tail_norm());
    for (int j = 0; j < nk; ++j) next.at(w.kmin + j) = Eigen::Map<const Mat2>(y.data() + 4 * j);
    // Truncation loss estimate: the part of Phi * xi pushed outside the window at z1.
    p.terms(z1, ts);
    double dropped = 0.0;
    for (int j = 0; j < nk; ++j)
      for (const auto& [d, m] : ts)
        if (j + d < 0 || j + d >= nk) dropped += (next.at(w.kmin + j) * m).norm();
    next.add_tail(dropped * std::abs(dz));
    phi = opts.det_renormalize ? normalize_det(next) : next;
  }
  return phi;
}

Mat2 integrate_at_lambda(const Potential& p, const DomainPath& path, const Mat2& phi0, cplx lambda,
                         const OdeOptions& opts, double eps_pole) {
  Mat2 phi = phi0;
  if (path.vertices.size() < 2) return phi;
  validate_path(p, path, eps_pole);
  std::vector<std::pair<int, Mat2>> ts;
  for (size_t s = 0; s + 1 < path.vertices.size(); ++s) {
    const cplx z0 = path.vertices[s], z1 = path.vertices[s + 1];
    const cplx dz = z1 - z0;
    auto rhs = [&](double t, const Vec4s& y, Vec4s& dy) {
      p.terms(z0 + t * dz, ts);
      Mat2 xi = Mat2::Zero();
      for (const auto& [d, m] : ts) xi += m * std::pow(lambda, d);
      Eigen::Map<Mat2>(dy.data()) = Eigen::Map<const Mat2>(y.data()) * (xi * dz);
    };
    Vec4s y;
    Eigen::Map<Mat2>(y.data()) = phi;
    try {
      if (opts.method == OdeOptions::Method::RK45)
        y = integrate_rk45(rhs, y, opts.tol, opts.max_steps);
      else
        y = integrate_rk4(rhs, y, std::max(1, static_cast<int>(std::ceil(opts.rk4_steps * std::abs(dz)))));
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(e.what()) + " on segment starting at " + where(z0));
    }
    phi = Eigen::Map<const Mat2>(y.data());
    if (opts.det_renormalize) phi /= std::sqrt(phi.determinant());
  }
  return phi;
}

Mat2 monodromy(const Potential& p, const DomainPath& loop, cplx lambda, const OdeOptions& opts, const Mat2& phi0) {
  if (loop.vertices.size() < 2 || loop.vertices.front() != loop.vertices.back())
    throw Error(ErrorKind::Domain, "monodromy needs a closed path");
  const Mat2 after = integrate_at_lambda(p, loop, phi0, lambda, opts);
  return after * phi0.inverse();
}

MonodromyLoops default_monodromy_loops(const Potential& p, cplx base, int sides) {
  MonodromyLoops out;
  out.base = base;
  const auto& poles = p.singular_points();
  if (p.distance_to_poles(base) < kEpsPole) throw Error(ErrorKind::Domain, "base point is a singular point");
  for (size_t i = 0; i < poles.size(); ++i) {
    double r = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < poles.size(); ++j)
      if (j != i) r = std::min(r, 0.5 * std::abs(poles[i] - poles[j]));
    if (!std::isfinite(r) || r >= std::abs(base - poles[i])) r = std::abs(base - poles[i]);
    DomainPath loop = polygon_loop(base, poles[i], r, sides, false);
    validate_path(p, loop);
    out.loops.push_back(loop);
    std::ostringstream os;
    os << poles[i].real();
    if (poles[i].imag() != 0.0) os << (poles[i].imag() < 0 ? "-" : "+") << std::abs(poles[i].imag()) << "i";
    out.labels.push_back(os.str());
  }
  if (p.pole_at_infinity() && !poles.empty()) {
    cplx c = 0.0;
    for (cplx s : poles) c += s;
    c /= static_cast<double>(poles.size());
    double rmax = 0.0;
    for (cplx s : poles) rmax = std::max(rmax, std::abs(s - c));
    const double r = std::max({2.0 * rmax, rmax + 0.5, std::abs(base - c)});
    DomainPath loop = polygon_loop(base, c, r, sides, true);
    validate_path(p, loop);
    out.loops.push_back(loop);
    out.labels.push_back("inf");
  }
  return out;
}

Mat2 unitarizer(const std::vector<Mat2>& hs, double* residual) {
  bool trivial = true;
  for (const Mat2& h : hs)
    if ((h - Mat2::Identity()).norm() > 1e-12 && (h + Mat2::Identity()).norm() > 1e-12) trivial = false;
  if (trivial) {
    if (residual) *residual = 0.0;
    return Mat2::Identity();
  }
  Mat2 basis[4];
  basis[0] << 1, 0, 0, 0;
  basis[1] << 0, 0, 0, 1;
  basis[2] << 0, 1, 1, 0;
  basis[3] << 0, cplx(0, 1), cplx(0, -1), 0;
  Eigen::MatrixXd a(4 * static_cast<int>(hs.size()), 4);
  for (int b = 0; b < 4; ++b) {
    for (size_t i = 0; i < hs.size(); ++i) {
      const Mat2 r = hs[i].adjoint() * basis[b] * hs[i] - basis[b];
      const int row = 4 * static_cast<int>(i);
      a(row + 0, b) = r(0, 0).real();
      a(row + 1, b) = r(1, 1).real();
      a(row + 2, b) = r(0, 1).real();
      a(row + 3, b) = r(0, 1).imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::Vector4d k = svd.matrixV().col(3);
  if (residual) *residual = svd.singularValues()(3) / std::max(svd.singularValues()(0), 1e-300);
  Mat2 form = Mat2::Zero();
  for (int b = 0; b < 4; ++b) form += k(b) * basis[b];
  if (form.trace().real() < 0.0) form = -form;
  Eigen::SelfAdjointEigenSolver<Mat2> es(form);
  const Eigen::Vector2d ev = es.eigenvalues();
  if (ev(0) <= 0.0) throw Error(ErrorKind::Factorization, "monodromy admits no positive invariant Hermitian form");
  const double scale = 1.0 / std::sqrt(std::sqrt(ev(0) * ev(1)));
  return es.eigenvectors() * (ev.cwiseSqrt() * scale).asDiagonal() * es.eigenvectors().adjoint();
}

LaurentLoop unitarizing_initial_loop(const Potential& p, const MonodromyLoops& loops, Window w,
                                     const OdeOptions& opts, int samples) {
  samples = std::max(samples, w.size());
  const auto pts = circle_samples(samples, 0.5);
  std::vector<Mat2> vals;
  vals.reserve(pts.size());
  for (cplx l : pts) {
    std::vector<Mat2> hs;
    for (const auto& loop : loops.loops) hs.push_back(monodromy(p, loop, l, opts));
    vals.push_back(unitarizer(hs));
  }
  return loop_from_samples(vals, w, 0.5);
}

}  // namespace mlq
