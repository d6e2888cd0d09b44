#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mlq {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec4c = Eigen::Vector4cd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

enum class ErrorKind {
  Validation,
  Config,
  Io,
  Domain,
  Pole,
  Integration,
  Factorization,
  Convergence,
  Degenerate,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Config-level problems map to exit code 2, numerical ones to 3.
inline bool is_numerical(ErrorKind k) {
  return k != ErrorKind::Validation && k != ErrorKind::Config && k != ErrorKind::Io;
}

inline Mat2 sigma1() { Mat2 m; m << 0, 1, 1, 0; return m; }
inline Mat2 sigma2() { Mat2 m; m << 0, cplx(0, -1), cplx(0, 1), 0; return m; }
inline Mat2 sigma3() { Mat2 m; m << 1, 0, 0, -1; return m; }

}  // namespace mlq
