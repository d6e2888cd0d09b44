#include "mlq/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace mlq {

namespace {

cplx horner(const std::vector<cplx>& p, cplx z) {
  cplx acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * z + *it;
  return acc;
}

bool is_zero_poly(const std::vector<cplx>& p) {
  return std::all_of(p.begin(), p.end(), [](cplx c) { return c == cplx(0.0); });
}

std::vector<cplx> poly_roots(std::vector<cplx> p) {
  while (!p.empty() && p.back() == cplx(0.0)) p.pop_back();
  const int deg = static_cast<int>(p.size()) - 1;
  if (deg <= 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -p[static_cast<size_t>(i)] / p.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + deg);
  return r;
}

Mat2 m2(cplx a, cplx b, cplx c, cplx d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

void validate(const PotentialSpec& spec) {
  auto bad = [](const std::string& msg) { throw Error(ErrorKind::Validation, msg); };
  if (const auto* e = std::get_if<EquivariantSpec>(&spec)) {
    if (!std::isfinite(e->a) || !std::isfinite(e->b) || !std::isfinite(e->c))
      bad("equivariant: a, b, c must be finite reals");
    if (e->a == 0.0 && e->b == 0.0 && e->c == 0.0) bad("equivariant: a, b, c must not all vanish");
  } else if (const auto* r = std::get_if<RadialSpec>(&spec)) {
    if (r->k < 1) bad("radial: k must be >= 1");
    if (std::abs(r->c) == 0.0) bad("radial: c must be nonzero");
    if (std::abs(std::abs(r->c) - 1.0) < 1e-12) bad("radial: c must not lie on the unit circle");
  } else if (const auto* t = std::get_if<TrinoidSpec>(&spec)) {
    if (std::abs(t->lambda0 - kI) > 1e-12 && std::abs(t->lambda0 + kI) > 1e-12)
      bad("trinoid: lambda0 must be +i or -i");
    if (t->v0 == 0.0 || t->v1 == 0.0 || t->vinf == 0.0) bad("trinoid: v0, v1, vinf must be nonzero");
    if (!std::isfinite(t->v0) || !std::isfinite(t->v1) || !std::isfinite(t->vinf))
      bad("trinoid: v0, v1, vinf must be finite");
  } else if (const auto* c = std::get_if<CustomSpec>(&spec)) {
    if (!c->base_point) bad("custom: base_point is required");
    for (const auto& term : c->terms) {
      for (const RationalFn* f : {&term.a, &term.b, &term.c}) {
        if (f->den.empty() || is_zero_poly(f->den)) bad("custom: zero denominator");
        for (cplx root : poly_roots(f->den)) {
          const bool declared = std::any_of(c->poles.begin(), c->poles.end(),
                                            [&](cplx p) { return std::abs(p - root) < 1e-8; });
          if (!declared) bad("custom: denominator root is not a declared pole");
        }
      }
    }
    for (cplx p : c->poles)
      if (std::abs(p - *c->base_point) < 1e-12) bad("custom: base_point coincides with a pole");
  }
}

}  // namespace

cplx RationalFn::eval(cplx z) const { return horner(num, z) / horner(den, z); }

cplx trinoid_h(cplx lambda0, cplx lambda) { return (lambda - lambda0) * (lambda - 1.0 / lambda0) / lambda; }

cplx trinoid_q(const TrinoidSpec& s, cplx z) {
  const cplx num = s.vinf * z * z + (s.v1 - s.v0 - s.vinf) * z + s.v0;
  return num / (16.0 * z * z * (z - 1.0) * (z - 1.0));
}

Potential::Potential(PotentialSpec spec) : spec_(std::move(spec)) {
  validate(spec_);
  span_ = {-1, 1};
  if (std::holds_alternative<SphereSpec>(spec_) || std::holds_alternative<TorusSpec>(spec_) ||
      std::holds_alternative<RadialSpec>(spec_)) {
    span_ = {-1, -1};
  } else if (std::holds_alternative<EquivariantSpec>(spec_)) {
    poles_ = {cplx(0.0)};
  } else if (std::holds_alternative<TrinoidSpec>(spec_)) {
    poles_ = {cplx(0.0), cplx(1.0)};
    span_ = {-1, 2};
    twisted_ = false;
  } else if (const auto* c = std::get_if<CustomSpec>(&spec_)) {
    poles_ = c->poles;
    span_ = {0, 0};
    if (!c->terms.empty()) {
      span_ = {c->terms.front().degree, c->terms.front().degree};
      for (const auto& t : c->terms) {
        span_.kmin = std::min(span_.kmin, t.degree);
        span_.kmax = std::max(span_.kmax, t.degree);
        const bool even = (t.degree % 2) == 0;
        if (even && (!is_zero_poly(t.b.num) || !is_zero_poly(t.c.num))) twisted_ = false;
        if (!even && !is_zero_poly(t.a.num)) twisted_ = false;
      }
    }
    span_.kmin = std::min(span_.kmin, 0);
    span_.kmax = std::max(span_.kmax, 0);
  }
}

std::string Potential::family() const {
  switch (spec_.index()) {
    case 0: return "sphere";
    case 1: return "torus";
    case 2: return "equivariant";
    case 3: return "radial";
    case 4: return "trinoid";
    default: return "custom";
  }
}

bool Potential::pole_at_infinity() const { return std::holds_alternative<TrinoidSpec>(spec_); }

cplx Potential::default_base() const {
  if (std::holds_alternative<EquivariantSpec>(spec_)) return 1.0;
  if (std::holds_alternative<TrinoidSpec>(spec_)) return cplx(0.5, -0.5);
  if (const auto* c = std::get_if<CustomSpec>(&spec_)) return *c->base_point;
  return 0.0;
}

double Potential::distance_to_poles(cplx z) const {
  double d = std::numeric_limits<double>::infinity();
  for (cplx p : poles_) d = std::min(d, std::abs(z - p));
  return d;
}

void Potential::terms(cplx z, std::vector<std::pair<int, Mat2>>& out) const {
  out.clear();
  if (!poles_.empty() && distance_to_poles(z) == 0.0)
    throw Error(ErrorKind::Pole, "potential evaluated at a singular point");
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SphereSpec>) {
          out.emplace_back(-1, m2(0, 1, 0, 0));
        } else if constexpr (std::is_same_v<T, TorusSpec>) {
          out.emplace_back(-1, m2(0, 1, 1, 0));
        } else if constexpr (std::is_same_v<T, EquivariantSpec>) {
          const cplx iz = 1.0 / z;
          out.emplace_back(-1, m2(0, s.a * iz, s.b * iz, 0));
          if (s.c != 0.0) out.emplace_back(0, m2(s.c * iz, 0, 0, -s.c * iz));
          out.emplace_back(1, m2(0, s.b * iz, s.a * iz, 0));
        } else if constexpr (std::is_same_v<T, RadialSpec>) {
          out.emplace_back(-1, m2(0, 1, s.c * std::pow(z, s.k), 0));
        } else if constexpr (std::is_same_v<T, TrinoidSpec>) {
          // lambda h(lambda) = lambda^2 - (lambda0 + 1/lambda0) lambda + 1
          const cplx q = trinoid_q(s, z);
          const cplx mid = -(s.lambda0 + 1.0 / s.lambda0);
          out.emplace_back(-1, m2(0, 1, 0, 0));
          out.emplace_back(0, m2(0, 0, q, 0));
          if (mid != cplx(0.0)) out.emplace_back(1, m2(0, 0, mid * q, 0));
          out.emplace_back(2, m2(0, 0, q, 0));
        } else {
          for (const auto& t : s.terms) {
            const cplx a = t.a.eval(z);
            out.emplace_back(t.degree, m2(a, t.b.eval(z), t.c.eval(z), -a));
          }
        }
      },
      spec_);
  for (const auto& [k, m] : out)
    if (!m.allFinite()) throw Error(ErrorKind::Pole, "potential is not finite at the requested point");
}

LaurentLoop Potential::eval_xi(cplx z) const {
  std::vector<std::pair<int, Mat2>> ts;
  terms(z, ts);
  LaurentLoop l(span_);
  for (const auto& [k, m] : ts) l.at(k) += m;
  return l;
}

Mat2 Potential::eval_at(cplx z, cplx lambda) const {
  std::vector<std::pair<int, Mat2>> ts;
  terms(z, ts);
  Mat2 r = Mat2::Zero();
  for (const auto& [k, m] : ts) r += m * std::pow(lambda, k);
  return r;
}

Potential make_potential(const PotentialSpec& spec) { return Potential(spec); }

}  // namespace mlq
