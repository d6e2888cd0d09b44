#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mlq/frames.hpp"

namespace mlq {

// Returns point data at center + offsets[k]; must be safe to call concurrently.
using Sampler = std::function<std::vector<PointData>(cplx center, const std::vector<cplx>& offsets)>;

// Sampler from a pointwise frame-pair evaluator.
Sampler pointwise_sampler(std::function<FramePointPair(cplx)> pair_at);

struct VerifyOptions {
  double h = 1e-3;
  // 2: centered differences throughout. 4: first derivatives at the center use the
  // five-point formula (second derivatives stay second order).
  int order = 2;
  double gauss_skip = 1e-6;  // skip the Gauss residual when 1 - 4C^2 falls below this
};

// The 13 offsets (i + j i) h with |i| + |j| <= 2, in the order Stencil expects.
std::vector<cplx> stencil_offsets(double h);

// Point data on the 13 stencil nodes.
class Stencil {
 public:
  Stencil(const Sampler& s, cplx z, double h);
  Stencil(cplx z, double h, const std::vector<PointData>& data);
  cplx z() const { return z_; }
  double h() const { return h_; }
  const PointData& at(int i, int j) const;

 private:
  cplx z_;
  double h_;
  std::vector<PointData> d_;
};

struct InvariantReport {
  double u = 0.0;
  cplx alpha, beta, phi_inv;
  double u_hat = 0.0;
  std::map<std::string, double> residuals;

  // p r = -alpha / 2 and |r|^2 = e^{u_hat} / 2 with r real and positive.
  double r() const;
  cplx p() const;
};

struct PointGeometryReport {
  double conformal_residual = 0.0;
  double lagrangian_residual = 0.0;
  double harmonic_residual = 0.0;
  double jacobian_sum = 0.0;
};

struct CUReport {
  double C = 0.0;
  cplx Theta;
  double theta_residual = 0.0;  // |Theta - 2 alpha|
  double jacobian_match = 0.0;  // |Jac(phi) - C|
  double gauss_residual = 0.0;
  bool gauss_skipped = false;
  double K = 0.0;  // -e^{-u} u_{z zbar}
};

InvariantReport invariants_report(const Stencil& st, const VerifyOptions& o = {});
PointGeometryReport geometry_report(const Stencil& st, const VerifyOptions& o = {});
CUReport cu_report(const Stencil& st, const VerifyOptions& o = {});
double sinh_gordon_residual(const Stencil& st);

struct NodeReport {
  InvariantReport inv;
  PointGeometryReport geo;
  CUReport cu;
};
NodeReport verify_node(const Sampler& s, cplx z, const VerifyOptions& o = {});

// f(e^{i theta} z) against A f(z), A = blockdiag(I, rotation(theta)), projectively.
double rotation_symmetry_residual(const std::function<Vec4c(cplx)>& lift, const std::vector<cplx>& zs,
                                  double theta);
// Projective distance between pairs of lifts of the same points.
double projective_residual(const std::vector<Vec4c>& a, const std::vector<Vec4c>& b);

}  // namespace mlq
