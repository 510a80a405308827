#pragma once

#include "core/propagator.hpp"
#include "core/spectrum.hpp"
#include "core/types.hpp"

#include <vector>

namespace evodich {

// Block vector f = (f_1 .. f_N) sampled on a uniform grid of step h, with
// the discrete L_p norm ||f||_p = (h * sum ||f_j||^p)^{1/p}.
struct GridFunction {
  std::vector<Vec> values;
  double h = 0.0;
  double p = 2.0;

  double norm() const;
};

// One-step weighted translation on a block grid: (Tf)_j = W_j f_{j-1}.
// The cyclic boundary identifies cell 0 with cell N (periodic functions);
// the zero boundary pads with 0 (a truncated line window) and is nilpotent,
// so it is never used for spectral verdicts.
class BlockShiftOperator {
public:
  enum class Boundary { cyclic, zero };

  BlockShiftOperator(std::vector<Mat> weights, Boundary boundary, double h);

  int cells() const { return static_cast<int>(weights_.size()); }
  int block_dim() const { return static_cast<int>(weights_.front().rows()); }
  int dim() const { return cells() * block_dim(); }
  double step() const { return h_; }
  Boundary boundary() const { return boundary_; }
  bool periodized() const { return periodized_; }
  void mark_periodized() { periodized_ = true; }

  // W_j, 1-based per the cell labels f_1..f_N.
  const Mat& weight(int j) const;
  const std::vector<Mat>& weights() const { return weights_; }

  GridFunction apply(const GridFunction& f) const;
  Mat dense() const;

  // Monodromy W_N ... W_1 (the block of T^N at cell N).
  Mat monodromy() const;

private:
  std::vector<Mat> weights_;
  Boundary boundary_ = Boundary::cyclic;
  double h_ = 0.0;
  bool periodized_ = false;
};

// Discretized e^{tB} with autonomous weights on [0, 2*pi): h = 2*pi/N and
// every weight equals e^{hA}.
BlockShiftOperator assemble_periodic(const Mat& a, int n);

// Discretized e^{tD} with t = h: the weights are the family's propagator
// slices. A cyclic boundary requires the underlying system to repeat with
// period N*h; `periodize` opts into wrapping a non-repeating window, which
// is recorded on the operator and surfaces in report metadata.
BlockShiftOperator assemble_line(const EvolutionFamily& fam,
                                 BlockShiftOperator::Boundary boundary,
                                 bool periodize = false);

// Dense spectrum of a cyclic operator plus the unit-circle gap and the
// rotation-invariance diagnostic (sigma(T) vs e^{2 pi i / N} sigma(T)).
// Refuses zero boundaries and operators above the dense-eigensolver cap.
SpectrumReport semigroup_spectrum(const BlockShiftOperator& op, int max_dim = 4000);

struct WitnessFunction {
  GridFunction f;
  double norm_f = 0.0;
  double residual_bf = 0.0; // ||Bf||_p with B = -D_x + A, central differences
};

// The constructive near-eigenfunction for the point 1 of e^{2 pi B}:
//   f(x) = (1 - rho(x)) e^{(2 pi + x) A} y + rho(x) e^{x A} y
// with the piecewise-linear cutoff rho (breakpoints 2*pi/3 and 4*pi/3),
// sampled on an N-point grid. y is normalized on entry.
WitnessFunction approximate_eigenfunction(const Mat& a, Vec y, int n, double p);

// Two-variable block sample h(s_i, x_j) on a doubly periodic n x n grid.
struct Grid2Function {
  int n = 0;
  double h = 0.0;
  std::vector<std::vector<Vec>> values; // [s][x]
};

// Max blockwise discrepancy of J e^{tB} - (I (x) e^{tD}) J applied to the
// sample, t = t_steps grid steps. The identity is algebraic, so anything
// beyond rounding indicates an assembly bug.
double change_of_variables_check(const EvolutionFamily& fam, const Grid2Function& sample,
                                 int t_steps);

} // namespace evodich
