#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace evodich {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealMat = Eigen::MatrixXd;
using RealVec = Eigen::VectorXd;

// Mirrors the status codes of the C API.
enum class ErrorCode {
  invalid_argument,
  parse,
  range,
  numeric,
  size,
  io,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

// Operator-2 norm. All report-level norms in this project are spectral
// norms. BDCSVD is avoided: Eigen 3.4 miscomputes singular vectors of
// complex matrices with clustered singular values (as every projection
// matrix here has). Beyond the Jacobi range the top singular value comes
// from the Hermitian eigenproblem of M* M, which is accurate for the
// largest eigenvalue.
inline double spectral_norm(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.rows() <= 256 && m.cols() <= 256) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
  }
  Mat gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  double top = es.eigenvalues().maxCoeff();
  return top > 0 ? std::sqrt(top) : 0.0;
}

inline double smallest_singular_value(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.rows() <= 512 && m.cols() <= 512) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
  }
  Mat gram = m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  double bottom = es.eigenvalues().minCoeff();
  return bottom > 0 ? std::sqrt(bottom) : 0.0;
}

inline bool is_effectively_real(const Mat& m, double tol = 0.0) {
  return m.imag().cwiseAbs().maxCoeff() <= tol;
}

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 6.28318530717958647692;

// Default knobs shared by the pipelines and the CLI.
struct RunOptions {
  int grid_size = 32;            // cells per period / window
  double step = 0.0;             // 0 = derive from period or window
  double p_exponent = 2.0;
  double tol = 1e-10;            // integrator tolerance
  std::uint64_t seed = 0x5EED;
  int threads = 0;               // 0 = auto (EVODICH_THREADS or hardware)
  double degenerate_margin = 1e-6;
  int riesz_quadrature = 256;    // initial contour nodes
  int riesz_quadrature_max = 4096;
  int max_operator_dim = 4000;   // dense eigensolver cap on N*d
};

} // namespace evodich
