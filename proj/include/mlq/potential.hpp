#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mlq/loop.hpp"

namespace mlq {

// Polynomial coefficients in ascending powers of z.
struct RationalFn {
  std::vector<cplx> num{cplx(0.0)};
  std::vector<cplx> den{cplx(1.0)};
  cplx eval(cplx z) const;
};

// One lambda-degree of a custom potential: the matrix [[a, b], [c, -a]].
struct CustomTerm {
  int degree = 0;
  RationalFn a, b, c;
};

struct SphereSpec {};
struct TorusSpec {};
struct EquivariantSpec {
  double a = 0.75, b = 0.25, c = 0.0;
};
struct RadialSpec {
  cplx c{0.5, 0.0};
  int k = 1;
};
struct TrinoidSpec {
  cplx lambda0{0.0, 1.0};
  double v0 = 1.0, v1 = 1.0, vinf = 1.0;
};
struct CustomSpec {
  std::vector<CustomTerm> terms;
  std::vector<cplx> poles;
  std::optional<cplx> base_point;
};

using PotentialSpec = std::variant<SphereSpec, TorusSpec, EquivariantSpec, RadialSpec, TrinoidSpec, CustomSpec>;

class Potential {
 public:
  explicit Potential(PotentialSpec spec);

  const PotentialSpec& spec() const { return spec_; }
  std::string family() const;
  const std::vector<cplx>& singular_points() const { return poles_; }
  bool pole_at_infinity() const;
  bool twisted() const { return twisted_; }
  // Lambda-degrees spanned by the coefficient.
  Window degree_span() const { return span_; }
  // Default base point for integration paths.
  cplx default_base() const;

  // Coefficient of dz at z as a sparse list (degree, matrix).
  void terms(cplx z, std::vector<std::pair<int, Mat2>>& out) const;
  LaurentLoop eval_xi(cplx z) const;
  Mat2 eval_at(cplx z, cplx lambda) const;

  double distance_to_poles(cplx z) const;

 private:
  PotentialSpec spec_;
  std::vector<cplx> poles_;
  Window span_;
  bool twisted_ = true;
};

Potential make_potential(const PotentialSpec& spec);

// h(lambda) = lambda^{-1} (lambda - lambda0)(lambda - 1/lambda0).
cplx trinoid_h(cplx lambda0, cplx lambda);
// q(z) = (vinf z^2 + (v1 - v0 - vinf) z + v0) / (16 z^2 (z - 1)^2).
cplx trinoid_q(const TrinoidSpec& s, cplx z);

}  // namespace mlq
