#include "mlq/verify.hpp"

#include <algorithm>
#include <cmath>

namespace mlq {

namespace {

constexpr int kReach = 2;

int slot(int i, int j) { return (i + kReach) * (2 * kReach + 1) + (j + kReach); }

template <class V>
struct Deriv {
  V x, y;
};

// Centered first differences at node (i, j).
template <class Get>
auto first(Get g, int i, int j, double h) {
  using V = decltype(g(0, 0));
  return Deriv<V>{(g(i + 1, j) - g(i - 1, j)) / (2 * h), (g(i, j + 1) - g(i, j - 1)) / (2 * h)};
}

// Five-point first differences at the center.
template <class Get>
auto first4(Get g, double h) {
  using V = decltype(g(0, 0));
  return Deriv<V>{(g(-2, 0) - 8.0 * g(-1, 0) + 8.0 * g(1, 0) - g(2, 0)) / (12 * h),
                  (g(0, -2) - 8.0 * g(0, -1) + 8.0 * g(0, 1) - g(0, 2)) / (12 * h)};
}

template <class Get>
auto laplacian(Get g, double h) {
  using V = decltype(g(0, 0));
  return V((g(1, 0) + g(-1, 0) + g(0, 1) + g(0, -1) - 4.0 * g(0, 0)) / (h * h));
}

template <class V>
V dz(const Deriv<V>& d) {
  return 0.5 * (d.x - kI * d.y);
}
template <class V>
V dzbar(const Deriv<V>& d) {
  return 0.5 * (d.x + kI * d.y);
}

using Vec3c = Eigen::Vector3cd;

// Lift invariants from derivatives at one node.
struct Local {
  double eu;
  cplx alpha, beta;
  Deriv<Vec4c> df;
};

Local local(const Stencil& st, int i, int j, bool high) {
  auto g = [&](int a, int b) { return st.at(a, b).f; };
  Local l;
  l.df = high ? first4(g, st.h()) : first(g, i, j, st.h());
  const Vec4c fz = dz(l.df), fzb = dzbar(l.df);
  l.eu = fz.squaredNorm();
  l.alpha = bilinear(fz, fz);
  l.beta = bilinear(fz, fzb);
  return l;
}

void require_immersed(double eu) {
  if (!(eu > 1e-12)) throw Error(ErrorKind::Degenerate, "degenerate immersion: e^u below 1e-12");
}

double u_hat_of(double eu, cplx alpha) {
  const double disc = eu * eu - std::norm(alpha);
  if (disc < -1e-8 * eu * eu)
    throw Error(ErrorKind::Degenerate, "e^{2u} - |alpha|^2 is negative: the relation e^{2u} = |alpha|^2 + |beta|^2 fails");
  return std::log(eu + std::sqrt(std::max(0.0, disc)));
}

double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return a.dot(b.cross(c)); }

}  // namespace

Sampler pointwise_sampler(std::function<FramePointPair(cplx)> pair_at) {
  return [pair_at = std::move(pair_at)](cplx center, const std::vector<cplx>& offsets) {
    std::vector<PointData> out;
    out.reserve(offsets.size());
    for (cplx d : offsets) out.push_back(point_data(pair_at(center + d)));
    return out;
  };
}

std::vector<cplx> stencil_offsets(double h) {
  std::vector<cplx> offs;
  for (int i = -kReach; i <= kReach; ++i)
    for (int j = -kReach; j <= kReach; ++j)
      if (std::abs(i) + std::abs(j) <= kReach) offs.emplace_back(i * h, j * h);
  return offs;
}

Stencil::Stencil(const Sampler& s, cplx z, double h) : Stencil(z, h, s(z, stencil_offsets(h))) {}

Stencil::Stencil(cplx z, double h, const std::vector<PointData>& data) : z_(z), h_(h) {
  const auto offs = stencil_offsets(h);
  if (data.size() != offs.size()) throw Error(ErrorKind::Validation, "sampler returned the wrong number of points");
  d_.resize((2 * kReach + 1) * (2 * kReach + 1));
  size_t k = 0;
  for (int i = -kReach; i <= kReach; ++i)
    for (int j = -kReach; j <= kReach; ++j)
      if (std::abs(i) + std::abs(j) <= kReach) d_[static_cast<size_t>(slot(i, j))] = data[k++];
}

const PointData& Stencil::at(int i, int j) const {
  if (std::abs(i) + std::abs(j) > kReach) throw Error(ErrorKind::Validation, "stencil index out of range");
  return d_[static_cast<size_t>(slot(i, j))];
}

double InvariantReport::r() const { return std::sqrt(0.5 * std::exp(u_hat)); }
cplx InvariantReport::p() const { return -0.5 * alpha / r(); }

InvariantReport invariants_report(const Stencil& st, const VerifyOptions& o) {
  const double h = st.h();
  const Local c = local(st, 0, 0, o.order >= 4);
  require_immersed(c.eu);
  InvariantReport r;
  r.u = std::log(c.eu);
  r.alpha = c.alpha;
  r.beta = c.beta;
  const Vec4c f = st.at(0, 0).f;
  const Vec4c fz = dz(c.df), fzb = dzbar(c.df);
  const Vec4c fzzb = 0.25 * laplacian([&](int a, int b) { return st.at(a, b).f; }, h);
  r.phi_inv = std::exp(-r.u) * fzb.dot(fzzb);  // sum fzzb_i conj(fzb_i)
  r.u_hat = u_hat_of(c.eu, c.alpha);

  // Nested quantities from the four neighbours; the center value must use the same
  // differences as the neighbours or the second differences pick up the mismatch.
  const Local c2 = o.order >= 4 ? local(st, 0, 0, false) : c;
  double uh_n[3][3] = {};
  cplx a_n[3][3];
  uh_n[1][1] = u_hat_of(c2.eu, c2.alpha);
  a_n[1][1] = c2.alpha;
  for (auto [i, j] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
    const Local l = local(st, i, j, false);
    require_immersed(l.eu);
    uh_n[i + 1][j + 1] = u_hat_of(l.eu, l.alpha);
    a_n[i + 1][j + 1] = l.alpha;
  }
  auto ga = [&](int a, int b) { return a_n[a + 1][b + 1]; };
  auto guh = [&](int a, int b) { return uh_n[a + 1][b + 1]; };
  const cplx alpha_zb = dzbar(first(ga, 0, 0, h));

  const double eu_hat = std::exp(r.u_hat);
  const double eu_hat2 = std::exp(uh_n[1][1]);
  const double sg = 0.25 * laplacian(guh, h) + eu_hat2 - std::norm(c2.alpha) / eu_hat2;

  // Fubini-Study metric density; the subtracted terms vanish for a horizontal lift.
  const cplx hx = f.dot(c.df.x), hy = f.dot(c.df.y);
  const double g0 = 0.5 * (c.df.x.squaredNorm() + c.df.y.squaredNorm() - std::norm(hx) - std::norm(hy));

  r.residuals["alpha_holomorphy"] = std::abs(alpha_zb);
  r.residuals["beta_phase"] = std::abs(r.beta.imag()) + std::max(0.0, -r.beta.real());
  r.residuals["phi_norm"] = std::abs(r.phi_inv);
  r.residuals["quadric"] = std::abs(bilinear(f, f));
  r.residuals["horizontality"] = std::max(std::abs(bilinear(fz, f.conjugate())), std::abs(bilinear(fzb, f.conjugate())));
  r.residuals["sinh_gordon"] = std::abs(sg);
  r.residuals["metric_identity"] = std::abs(g0 - (eu_hat + std::norm(r.alpha) / eu_hat));
  r.residuals["relation_e2u"] = std::abs(c.eu * c.eu - std::norm(r.beta) - std::norm(r.alpha));
  return r;
}

double sinh_gordon_residual(const Stencil& st) { return invariants_report(st).residuals.at("sinh_gordon"); }

PointGeometryReport geometry_report(const Stencil& st, const VerifyOptions& o) {
  const double h = st.h();
  const Local c = local(st, 0, 0, o.order >= 4);
  require_immersed(c.eu);
  auto gphi = [&](int a, int b) { return st.at(a, b).phi; };
  auto gpsi = [&](int a, int b) { return st.at(a, b).psi; };
  const auto dphi = o.order >= 4 ? first4(gphi, h) : first(gphi, 0, 0, h);
  const auto dpsi = o.order >= 4 ? first4(gpsi, h) : first(gpsi, 0, 0, h);
  const Vec3c phz = 0.5 * (dphi.x.cast<cplx>() - kI * dphi.y.cast<cplx>());
  const Vec3c psz = 0.5 * (dpsi.x.cast<cplx>() - kI * dpsi.y.cast<cplx>());
  const Vec3& phi = st.at(0, 0).phi;
  const Vec3& psi = st.at(0, 0).psi;
  const double nphi = phz.squaredNorm(), npsi = psz.squaredNorm();

  PointGeometryReport g;
  g.conformal_residual = std::abs(nphi - npsi) + std::abs(phz.cwiseProduct(phz).sum() + psz.cwiseProduct(psz).sum());
  const double jphi = det3(phi, dphi.x, dphi.y), jpsi = det3(psi, dpsi.x, dpsi.y);
  g.lagrangian_residual = std::abs(jphi + jpsi);
  g.harmonic_residual = (0.25 * laplacian(gphi, h) + nphi * phi).norm() + (0.25 * laplacian(gpsi, h) + npsi * psi).norm();
  g.jacobian_sum = std::abs(jphi + jpsi) / (8.0 * c.eu);
  return g;
}

CUReport cu_report(const Stencil& st, const VerifyOptions& o) {
  const double h = st.h();
  const Local c = local(st, 0, 0, o.order >= 4);
  require_immersed(c.eu);
  CUReport r;
  r.C = 0.5 * std::abs(c.beta) / c.eu;

  auto gphi = [&](int a, int b) { return st.at(a, b).phi; };
  const auto dphi = o.order >= 4 ? first4(gphi, h) : first(gphi, 0, 0, h);
  const Vec3c phz = 0.5 * (dphi.x.cast<cplx>() - kI * dphi.y.cast<cplx>());
  r.Theta = phz.cwiseProduct(phz).sum();
  r.theta_residual = std::abs(r.Theta - 2.0 * c.alpha);
  r.jacobian_match = std::abs(det3(st.at(0, 0).phi, dphi.x, dphi.y) / (8.0 * c.eu) - r.C);

  double u_n[3][3] = {}, c_n[3][3] = {};
  const Local c2 = o.order >= 4 ? local(st, 0, 0, false) : c;
  u_n[1][1] = std::log(c2.eu);
  c_n[1][1] = 0.5 * std::abs(c2.beta) / c2.eu;
  for (auto [i, j] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
    const Local l = local(st, i, j, false);
    require_immersed(l.eu);
    u_n[i + 1][j + 1] = std::log(l.eu);
    c_n[i + 1][j + 1] = 0.5 * std::abs(l.beta) / l.eu;
  }
  auto gu = [&](int a, int b) { return u_n[a + 1][b + 1]; };
  auto gc = [&](int a, int b) { return c_n[a + 1][b + 1]; };
  const double uzzb = 0.25 * laplacian(gu, h);
  r.K = -uzzb / c.eu;
  const double gap = 1.0 - 4.0 * r.C * r.C;
  if (gap <= o.gauss_skip) {
    r.gauss_skipped = true;
  } else {
    const cplx cz = dz(Deriv<cplx>{first(gc, 0, 0, h).x, first(gc, 0, 0, h).y});
    r.gauss_residual = std::abs(uzzb + 8.0 * c.eu * r.C * r.C - 4.0 * std::norm(cz) / gap);
  }
  return r;
}

NodeReport verify_node(const Sampler& s, cplx z, const VerifyOptions& o) {
  const Stencil st(s, z, o.h);
  return NodeReport{invariants_report(st, o), geometry_report(st, o), cu_report(st, o)};
}

double rotation_symmetry_residual(const std::function<Vec4c(cplx)>& lift, const std::vector<cplx>& zs,
                                  double theta) {
  Eigen::Matrix4cd A = Eigen::Matrix4cd::Identity();
  A(2, 2) = std::cos(theta);
  A(2, 3) = -std::sin(theta);
  A(3, 2) = std::sin(theta);
  A(3, 3) = std::cos(theta);
  double worst = 0.0;
  for (cplx z : zs) worst = std::max(worst, projective_distance(lift(std::polar(1.0, theta) * z), A * lift(z)));
  return worst;
}

double projective_residual(const std::vector<Vec4c>& a, const std::vector<Vec4c>& b) {
  double worst = 0.0;
  for (size_t i = 0; i < std::min(a.size(), b.size()); ++i) worst = std::max(worst, projective_distance(a[i], b[i]));
  return worst;
}

}  // namespace mlq
