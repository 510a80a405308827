#pragma once

#include "core/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace evodich {

// All d eigenvalues (with multiplicity) of a dense matrix, sorted
// lexicographically by (re, im) for reproducible output.
std::vector<Complex> eigenvalues(const Mat& m);

// Min-cost assignment between two equal-size complex multisets with cost
// |a_i - b_j|; returns the permutation sigma minimizing the total cost.
std::vector<int> optimal_pairing(const std::vector<Complex>& a, const std::vector<Complex>& b);

// Max |a_i - b_sigma(i)| under the optimal pairing.
double pairing_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

struct SpectrumReport {
  std::vector<Complex> eigenvalue_list;
  double unit_circle_gap = 0.0;  // min |1 - |lambda||
  double axis_gap = 0.0;         // min |Re lambda|
  std::vector<std::pair<int, int>> matched_pairs;
  double pairing_distance = 0.0;
};

SpectrumReport make_spectrum_report(const std::vector<Complex>& eigs);

// sigma(e^{tA}) against exp(t * sigma(A)): in finite dimensions the two
// multisets coincide, so the reported pairing distance must vanish up to
// eigensolver accuracy.
SpectrumReport spectral_mapping_check(const Mat& a, double t);

struct ResolventPoint {
  double xi = 0.0;
  double norm = 0.0;   // ||(A - i xi I)^{-1}||, valid when !singular
  bool singular = false;
};

// ||(A - i xi I)^{-1}|| for each xi. Points where i*xi hits the spectrum
// are flagged and the remaining entries are still computed.
std::vector<ResolventPoint> resolvent_norm_on_axis(const Mat& a,
                                                   const std::vector<double>& xi_values);

struct GreinerEstimate {
  double max_ratio = 0.0;       // max over trials, a lower estimate of C
  int trials = 0;
  int cutoff = 0;               // frequencies |k| <= cutoff
  double p = 2.0;
  double single_mode_bound = 0.0; // max_k ||(A - ik)^{-1}||
  double sum_bound = 0.0;         // sum_k ||(A - ik)^{-1}||
};

// Monte-Carlo lower estimate of the best constant C in
//   || sum_k (A - ik)^{-1} y_k e^{-ikx} ||_p <= C || sum_k y_k e^{-ikx} ||_p
// over random finite sequences {y_k}, |k| <= cutoff. L_p norms on [0, 2*pi)
// use composite trapezoid quadrature on `grid` points.
GreinerEstimate greiner_inequality_check(const Mat& a, int trials, int cutoff, double p, int grid,
                                         std::uint64_t seed);

enum class GeneratorVerdict { stable, hyperbolic, on_axis };

struct GeneratorVerdictReport {
  GeneratorVerdict verdict = GeneratorVerdict::on_axis;
  double axis_gap = 0.0;
};

// stable: Re sigma(A) < 0; on_axis: some |Re lambda| <= 1e-10 * max(1, ||A||);
// otherwise hyperbolic.
GeneratorVerdictReport hyperbolicity_verdict(const Mat& a);

const char* to_string(GeneratorVerdict v);

} // namespace evodich
