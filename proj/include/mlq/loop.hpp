#pragma once

#include <vector>

#include "mlq/types.hpp"

namespace mlq {

struct Window {
  int kmin = 0;
  int kmax = 0;
  int size() const { return kmax - kmin + 1; }
  bool contains(int k) const { return k >= kmin && k <= kmax; }
  static Window symmetric(int n) { return {-n, n}; }
};

// 2x2 matrix Laurent series in lambda, stored densely over [kmin, kmax].
class LaurentLoop {
 public:
  LaurentLoop() : LaurentLoop(Window{0, 0}) {}
  explicit LaurentLoop(Window w);

  static LaurentLoop constant(const Mat2& a, Window w = {0, 0});
  static LaurentLoop identity(Window w = {0, 0}) { return constant(Mat2::Identity(), w); }
  static LaurentLoop monomial(int k, const Mat2& a);

  Window window() const { return w_; }
  int kmin() const { return w_.kmin; }
  int kmax() const { return w_.kmax; }

  // Zero outside the window.
  Mat2 operator[](int k) const;
  Mat2& at(int k);
  const Mat2& at(int k) const;

  // Accumulated Frobenius norm of coefficients dropped by truncation.
  double tail_norm() const { return tail_; }
  void add_tail(double t) { tail_ += t; }

  bool is_plus(double tol = 0.0) const;
  double max_coeff_norm() const;

  // Re-window: coefficients falling outside are dropped into the tail.
  LaurentLoop rewindowed(Window w) const;

  Mat2 eval(cplx lambda) const;

  const std::vector<Mat2>& coeffs() const { return c_; }

 private:
  Window w_;
  std::vector<Mat2> c_;
  double tail_ = 0.0;
};

struct ParityReport {
  double max_even_offdiag = 0.0;
  double max_odd_diag = 0.0;
};

LaurentLoop loop_mul(const LaurentLoop& a, const LaurentLoop& b, Window w);
LaurentLoop loop_add(const LaurentLoop& a, const LaurentLoop& b);
LaurentLoop loop_sub(const LaurentLoop& a, const LaurentLoop& b);
LaurentLoop loop_scale(const LaurentLoop& a, cplx s);
Mat2 loop_eval(const LaurentLoop& a, cplx lambda);
LaurentLoop loop_star(const LaurentLoop& a);
LaurentLoop plus_inverse(const LaurentLoop& b, Window w);
ParityReport twist_check(const LaurentLoop& a);

// e^{2 pi i (j + offset) / m}, j = 0..m-1.
std::vector<cplx> circle_samples(int m, double offset = 0.0);

// Coefficients on window w from values at circle_samples(values.size(), offset).
LaurentLoop loop_from_samples(const std::vector<Mat2>& values, Window w, double offset = 0.0);

// Divide by the principal square root of det at circle samples.
LaurentLoop normalize_det(const LaurentLoop& a);

// Smallest window containing every coefficient above rel * max_coeff_norm (and degree 0).
Window effective_window(const LaurentLoop& a, double rel = 1e-17);

double max_unitarity_error(const LaurentLoop& a, int samples = 32);
double max_det_error(const LaurentLoop& a, int samples = 32);
double max_circle_distance(const LaurentLoop& a, const LaurentLoop& b, int samples = 32);

}  // namespace mlq
