#include <doctest.h>

#include <random>

#include "mlq/potential.hpp"

using namespace mlq;

namespace {

bool has_pole(const Potential& p, cplx z) {
  for (cplx q : p.singular_points())
    if (std::abs(q - z) < 1e-14) return true;
  return false;
}

ErrorKind kind_of(const PotentialSpec& s) {
  try {
    make_potential(s);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Config;
}

}  // namespace

TEST_CASE("singular sets") {
  CHECK(make_potential(SphereSpec{}).singular_points().empty());
  CHECK(make_potential(TorusSpec{}).singular_points().empty());
  const Potential eq = make_potential(EquivariantSpec{0.75, 0.25, 0.0});
  CHECK(eq.singular_points().size() == 1);
  CHECK(has_pole(eq, 0.0));
  const Potential tr = make_potential(TrinoidSpec{});
  CHECK(has_pole(tr, 0.0));
  CHECK(has_pole(tr, 1.0));
  CHECK(tr.pole_at_infinity());
  CHECK_FALSE(tr.twisted());
  CHECK(eq.twisted());
}

TEST_CASE("coefficient values") {
  SUBCASE("sphere is constant") {
    const Potential p = make_potential(SphereSpec{});
    for (cplx z : {cplx(0.0), cplx(1.3, -0.2)}) {
      const LaurentLoop xi = p.eval_xi(z);
      Mat2 e;
      e << 0, 1, 0, 0;
      CHECK((xi[-1] - e).norm() == 0.0);
      CHECK(xi[0].norm() == 0.0);
      CHECK(xi[1].norm() == 0.0);
    }
  }

  SUBCASE("equivariant at z = 1") {
    const Potential p = make_potential(EquivariantSpec{0.75, 0.25, 0.0});
    for (cplx l : circle_samples(5, 0.1)) {
      const Mat2 m = p.eval_at(1.0, l);
      CHECK(std::abs(m(0, 0)) < 1e-15);
      CHECK(std::abs(m(1, 1)) < 1e-15);
      CHECK(std::abs(m(0, 1) - (0.75 / l + 0.25 * l)) < 1e-15);
      CHECK(std::abs(m(1, 0) - (0.75 * l + 0.25 / l)) < 1e-15);
    }
  }

  SUBCASE("trinoid at z = 2") {
    const Potential p = make_potential(TrinoidSpec{});
    for (cplx l : circle_samples(6, 0.2)) {
      const Mat2 m = p.eval_at(2.0, l);
      CHECK(std::abs(m(1, 0) - (l * l + 1.0) * 3.0 / 64.0) < 1e-15);
      CHECK(std::abs(m(0, 1) - 1.0 / l) < 1e-15);
    }
    CHECK(std::abs(trinoid_h(kI, 1.0) - 2.0) < 1e-15);
    CHECK(std::abs(trinoid_h(kI, -1.0) + 2.0) < 1e-15);
  }

  SUBCASE("trinoid loops are untwisted") {
    const ParityReport r = twist_check(make_potential(TrinoidSpec{}).eval_xi(cplx(0.3, 0.4)));
    CHECK(r.max_even_offdiag > 1e-3);
  }

  SUBCASE("radial") {
    const Potential p = make_potential(RadialSpec{cplx(0.5), 2});
    const cplx z(0.3, 0.7);
    const Mat2 m = p.eval_at(z, kI);
    CHECK(std::abs(m(1, 0) - 0.5 * z * z / kI) < 1e-15);
  }
}

TEST_CASE("equivariant residue: z xi(z) tends to a constant loop") {
  const Potential p = make_potential(EquivariantSpec{0.6, 0.3, 0.2});
  const cplx l = std::polar(1.0, 0.4);
  const Mat2 d0 = 1e-6 * p.eval_at(1e-6, l);
  const Mat2 d1 = cplx(0, 1e-9) * p.eval_at(cplx(0, 1e-9), l);
  CHECK((d0 - d1).norm() < 1e-14);
  CHECK(std::abs(d0(0, 0) - 0.2) < 1e-14);
}

TEST_CASE("traceless coefficients (property)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<Potential> ps{make_potential(SphereSpec{}), make_potential(TorusSpec{}),
                                  make_potential(EquivariantSpec{0.7, 0.2, 0.4}),
                                  make_potential(RadialSpec{cplx(0.3, 0.1), 3}), make_potential(TrinoidSpec{})};
  for (int trial = 0; trial < 200; ++trial) {
    const cplx z(u(rng), u(rng));
    const cplx l = std::polar(1.0, u(rng) * kPi);
    for (const auto& p : ps) {
      if (p.distance_to_poles(z) < 1e-3) continue;
      CHECK(std::abs(p.eval_at(z, l).trace()) < 1e-12);
    }
  }
}

TEST_CASE("evaluation at a pole") {
  try {
    make_potential(EquivariantSpec{}).eval_xi(0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Pole);
  }
}

TEST_CASE("parameter validation names the constraint") {
  CHECK(kind_of(TrinoidSpec{cplx(1.0, 0.0)}) == ErrorKind::Validation);
  CHECK(kind_of(RadialSpec{cplx(0.6, 0.8), 1}) == ErrorKind::Validation);
  CHECK(kind_of(RadialSpec{cplx(0.5), 0}) == ErrorKind::Validation);
  CHECK(kind_of(EquivariantSpec{0.0, 0.0, 0.0}) == ErrorKind::Validation);
  CHECK(kind_of(CustomSpec{}) == ErrorKind::Validation);
  try {
    make_potential(TrinoidSpec{cplx(0.5)});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("lambda0") != std::string::npos);
  }
}

TEST_CASE("custom potential matches the built-in sphere") {
  CustomSpec c;
  CustomTerm t;
  t.degree = -1;
  t.b.num = {cplx(1.0)};
  c.terms.push_back(t);
  c.base_point = cplx(0.0);
  const Potential p = make_potential(c);
  const Potential s = make_potential(SphereSpec{});
  CHECK(p.twisted());
  for (cplx l : circle_samples(4)) CHECK((p.eval_at(cplx(0.2, 0.1), l) - s.eval_at(cplx(0.2, 0.1), l)).norm() < 1e-15);

  CustomSpec bad = c;
  bad.terms[0].b.den = {cplx(-1.0), cplx(1.0)};  // pole at z = 1 not declared
  CHECK(kind_of(bad) == ErrorKind::Validation);
  bad.poles = {cplx(1.0)};
  CHECK_NOTHROW(make_potential(bad));
}
