#pragma once

#include "mlq/loop.hpp"

namespace mlq {

struct IwasawaOptions {
  double tol = 1e-9;
  int m0 = 0;       // initial Toeplitz block count; 0 means max(4N, 16)
  int m_step = 0;   // minimum increment; 0 means N (sections also grow by half each round)
  int max_m = 0;    // 0 means max(16N, 256)
  int fixed_m = 0;  // skip the stabilization loop and use exactly this many blocks
  int pd_samples = 32;
  // Coefficients of Phi below trim * max are dropped before factorizing; 0 keeps the window.
  double trim = 1e-17;
};

struct IwasawaResult {
  LaurentLoop F;
  LaurentLoop B;
  double unitarity_error = 0.0;
  double residual = 0.0;
  int blocks = 0;
};

// Plus-loop B on [0, degree] with B* B = P and B_0 upper triangular, positive diagonal.
LaurentLoop spectral_factor_plus(const LaurentLoop& P, int degree, const IwasawaOptions& opts,
                                 int* blocks_used = nullptr);

IwasawaResult iwasawa(const LaurentLoop& phi, const IwasawaOptions& opts = {});

}  // namespace mlq
