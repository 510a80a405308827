#pragma once

#include "core/analyze.hpp"
#include "core/theorems.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace evodich {

// A quantity of a gallery system with a known value and an independent
// recipe that recomputes it at desk scale (closed-form substitution,
// Liouville trace integral, or a small brute-force eigensolve).
struct KnownFact {
  enum class Kind {
    largest_multiplier_modulus,
    smallest_multiplier_modulus,
    multiplier_product_modulus,  // |det U(T, 0)|, pinned by Liouville's formula
    expansion_exponent,          // growth rate on the kernel bundle, per unit time
    decay_exponent,              // decay rate on the range bundle, per unit time
    pointwise_abscissa,          // max over t of max Re sigma(A(t))
  };
  Kind kind;
  std::string description;
  std::function<double()> oracle;  // recomputes the expected value
  double tolerance = 1e-6;         // |measured - oracle| <= tolerance * max(1, |oracle|)
};

struct GallerySystem {
  std::string name;
  std::shared_ptr<const SystemSpec> spec;
  std::string expected_verdict;  // of the dichotomy pipeline
  std::vector<KnownFact> facts;
  bool pointwise_spectrum_misleading = false;  // stable pointwise spectra, unstable system
};

// The rotating Vinograd-type system
//   A(t) = [[-1 + a cos^2 t, 1 - a sin t cos t], [-1 - a sin t cos t, -1 + a sin^2 t]]
// carried exactly as trigonometric coefficients with period 2 pi. Its
// solution e^{(a-1) t} (cos t, -sin t) makes the pointwise spectrum
// misleading for a in (1, 2).
SystemSpec make_vinograd(double a);

// Mathieu oscillator y'' + (alpha - 2 q cos 2t) y = 0 in companion form,
// period pi.
SystemSpec make_mathieu(double alpha, double q);

const std::vector<GallerySystem>& builtin_gallery();

struct FactOutcome {
  std::string description;
  double measured = 0.0;
  double oracle_value = 0.0;
  bool ok = false;
};

struct GalleryOutcome {
  std::string name;
  std::string expected_verdict;
  std::string verdict;
  bool verdict_matches = false;
  double unit_circle_gap = 0.0;
  double lambda = 0.0;
  double m_constant = 1.0;
  int rank = 0;
  std::vector<EquivalenceTable> tables;
  std::vector<FactOutcome> facts;
  std::optional<double> pointwise_abscissa;
  bool pointwise_spectrum_misleading = false;
  bool failed = false;
  std::string error_message;
};

// Runs every gallery system through the dichotomy pipeline and the
// applicable theorem checks. Individual failures are recorded and the run
// continues.
std::vector<GalleryOutcome> run_gallery(const RunOptions& options);

} // namespace evodich
