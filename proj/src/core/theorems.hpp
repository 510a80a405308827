#pragma once

#include "core/analyze.hpp"
#include "core/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace evodich {

struct ConditionResult {
  std::string label;
  bool holds = false;
  double margin = 0.0;  // distance to the boundary of the condition
};

// One equivalence theorem instance: every condition must come out the same
// way. Near-zero margins cannot be trusted either way, so such tables are
// flagged degenerate and carry no pass/fail.
struct EquivalenceTable {
  std::string theorem;
  std::string system;
  std::vector<ConditionResult> conditions;
  std::vector<std::pair<std::string, double>> diagnostics;
  double degenerate_margin = 1e-6;
  bool degenerate = false;
  bool consistent = false;
  std::optional<bool> pass;

  void finalize();
};

// inf over xi in [-window, window] of the smallest singular value of
// A - i xi I (coarse scan plus local refinement; the function is
// 1-Lipschitz in xi), capped with the Neumann tail bound window - ||A||.
// Rejects window < ||A|| + 1.
double min_axis_resolvent_margin(const Mat& a, double xi_window);

// 1 in rho(e^{2 pi A})  <=>  0 in rho(B) on the 2 pi circle  <=>
// 1 in rho(e^{2 pi B}), with the middle condition reduced to the Fourier
// blocks A - ik, |k| <= ceil(||A||) + 1.
EquivalenceTable run_theorem1_check(const Mat& a, int n, double degenerate_margin = 1e-6);

// Greiner-variant cross-check: 1 in rho(e^{2 pi A}) against i Z in rho(A),
// with the Monte-Carlo constant estimate attached as a diagnostic.
EquivalenceTable run_theorem2_check(const Mat& a, const RunOptions& options);

// sigma(e^{tA}) misses the unit circle  <=>  0 in rho(B) on the line  <=>
// sigma(e^{tB}) misses the unit circle (cyclic discretization commensurate
// with t).
EquivalenceTable run_theorem3_check(const Mat& a, double t, int n, double xi_window = 0.0,
                                    double degenerate_margin = 1e-6);

// Floquet surrogate of 0 in rho(D) against the unit-circle gap of the
// cyclic e^{hD}; also runs the rotation-invariance and change-of-variables
// diagnostics.
EquivalenceTable run_theorem4_check(std::shared_ptr<const SystemSpec> spec,
                                    const RunOptions& options);

// Spectral hyperbolicity (projection pipeline + dichotomy fit) against the
// unit-circle gap of the cyclic e^{hD}.
EquivalenceTable run_theorem5_check(std::shared_ptr<const SystemSpec> spec,
                                    const RunOptions& options);

// All tables that apply to the given system kind.
std::vector<EquivalenceTable> run_applicable_checks(std::shared_ptr<const SystemSpec> spec,
                                                    const RunOptions& options);

} // namespace evodich
