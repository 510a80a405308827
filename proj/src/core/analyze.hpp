#pragma once

#include "core/dichotomy.hpp"
#include "core/propagator.hpp"
#include "core/semigroup.hpp"
#include "core/system_spec.hpp"
#include "core/types.hpp"

#include <memory>
#include <optional>

namespace evodich {

// Everything the end-to-end dichotomy analysis produces for one system:
// the propagator family over one analysis window, the cyclic one-step
// evolution operator, its spectrum, the contour projection with its
// pointwise extraction, and the fitted dichotomy report.
struct AnalyzeOutcome {
  std::shared_ptr<const SystemSpec> spec;
  double window = 0.0;
  int cells = 0;
  bool periodized = false;  // finite window wrapped to a circle

  std::optional<EvolutionFamily> family;
  std::optional<BlockShiftOperator> op;
  SpectrumReport spectrum;

  bool projection_built = false;
  RieszResult riesz;
  ExtractedProjections projections;
  DichotomyReport dichotomy;
  std::optional<Theorem6Report> theorem6;

  int exit_class = 0;  // 0 = definite verdict, 2 = degenerate / on-axis
};

// Picks the analysis window: the declared period for periodic systems, the
// sample span for sampled ones (wrapped, and marked as such), 2*pi for
// constants unless a step is given.
AnalyzeOutcome analyze_system(std::shared_ptr<const SystemSpec> spec, const RunOptions& options);

} // namespace evodich
