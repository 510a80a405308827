#pragma once

#include "core/system_spec.hpp"
#include "core/types.hpp"

#include <memory>
#include <vector>

namespace evodich {

// e^{tM} by scaling-and-squaring with a diagonal Pade approximant.
// Relative accuracy ~1e-12 for ||tM|| <= 50; non-finite results are
// reported as a range error.
Mat expm(const Mat& m, double t = 1.0);

// Propagator U(t, s) of U' = A(tau) U, U(s, s) = I, for t >= s inside the
// spec's validity span. Constant systems delegate to expm; the others use
// adaptive Dormand-Prince 5(4) stepping with local error <= tol per unit
// time (absolute, Frobenius).
Mat evolve(const SystemSpec& spec, double s, double t, double tol = 1e-10);

// Propagator slices on a uniform grid x_j = x0 + j*h together with fitted
// growth-bound constants ||U(x_j, x_i)|| <= C e^{beta (x_j - x_i)}.
class EvolutionFamily {
public:
  EvolutionFamily(std::shared_ptr<const SystemSpec> spec, double x0, double h,
                  std::vector<Mat> slices, double tol);

  const SystemSpec& spec() const { return *spec_; }
  std::shared_ptr<const SystemSpec> spec_ptr() const { return spec_; }
  int steps() const { return static_cast<int>(slices_.size()); }
  double x0() const { return x0_; }
  double h() const { return h_; }
  double x(int j) const { return x0_ + j * h_; }
  double tol() const { return tol_; }

  // S_j = U(x_j, x_{j-1}), 1-based j per the grid labels.
  const Mat& slice(int j) const;
  const std::vector<Mat>& slices() const { return slices_; }

  // U(x_j, x_i) as the ordered slice product over (i, j]; i == j gives I.
  Mat propagate(int i, int j) const;

  double growth_c() const { return growth_c_; }
  double growth_beta() const { return growth_beta_; }

private:
  void fit_growth_bound();

  std::shared_ptr<const SystemSpec> spec_;
  double x0_ = 0.0;
  double h_ = 0.0;
  double tol_ = 0.0;
  std::vector<Mat> slices_;
  double growth_c_ = 1.0;
  double growth_beta_ = 0.0;
};

// Integrates the N slices (in parallel) and fits the growth bound.
EvolutionFamily build_family(std::shared_ptr<const SystemSpec> spec, double x0, double h, int n,
                             double tol = 1e-10, int threads = 0);

} // namespace evodich
