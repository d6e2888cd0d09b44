#pragma once

#include <string>
#include <vector>

#include "mlq/loop.hpp"
#include "mlq/ode.hpp"
#include "mlq/potential.hpp"

namespace mlq {

inline constexpr double kEpsPole = 1e-3;

struct DomainPath {
  std::vector<cplx> vertices;
  bool closed = false;
};

DomainPath straight_path(cplx from, cplx to);
// base -> circle start (nearest to base), `sides`-gon around center, -> base.
DomainPath polygon_loop(cplx base, cplx center, double radius, int sides = 64, bool clockwise = false);
DomainPath concat(const DomainPath& a, const DomainPath& b);

void validate_path(const Potential& p, const DomainPath& path, double eps_pole = kEpsPole);
// Straight segment when it clears the poles, otherwise a two-segment detour.
DomainPath plan_path(const Potential& p, cplx from, cplx to, double eps_pole = kEpsPole);

LaurentLoop integrate_frame(const Potential& p, const DomainPath& path, const LaurentLoop& phi0,
                            const OdeOptions& opts, Window w, double eps_pole = kEpsPole);
Mat2 integrate_at_lambda(const Potential& p, const DomainPath& path, const Mat2& phi0, cplx lambda,
                         const OdeOptions& opts, double eps_pole = kEpsPole);

// H with Phi_after = H * Phi_before.
Mat2 monodromy(const Potential& p, const DomainPath& loop, cplx lambda, const OdeOptions& opts,
               const Mat2& phi0 = Mat2::Identity());

struct MonodromyLoops {
  cplx base;
  std::vector<DomainPath> loops;
  std::vector<std::string> labels;  // "0", "1", ..., "inf"
};

// Circles of radius half the distance to the nearest other pole; for a single
// finite pole the circle passes through the base point. A clockwise loop around
// all finite poles is appended when the potential has a pole at infinity.
MonodromyLoops default_monodromy_loops(const Potential& p, cplx base, int sides = 64);

// Hermitian sqrt C of the det-1 invariant Hermitian form of the H's, so that
// C H C^{-1} is unitary. `residual` gets the smallest singular value of the
// invariance system relative to the largest.
Mat2 unitarizer(const std::vector<Mat2>& hs, double* residual = nullptr);

// Initial value Phi0(lambda) = unitarizer of the monodromy at each circle sample.
LaurentLoop unitarizing_initial_loop(const Potential& p, const MonodromyLoops& loops, Window w,
                                     const OdeOptions& opts, int samples = 64);

}  // namespace mlq
