#include "core/analyze.hpp"

#include <cmath>

namespace evodich {

AnalyzeOutcome analyze_system(std::shared_ptr<const SystemSpec> spec, const RunOptions& options) {
  if (!spec) throw Error(ErrorCode::invalid_argument, "analyze_system: null spec");
  const int n = options.grid_size;
  if (n < 2) throw Error(ErrorCode::invalid_argument, "analyze_system: grid size must be >= 2");
  if (!(options.tol > 0)) throw Error(ErrorCode::invalid_argument, "analyze_system: tol must be > 0");

  AnalyzeOutcome out;
  out.spec = spec;
  out.cells = n;

  double x0 = 0.0;
  double h;
  switch (spec->kind()) {
    case SystemSpec::Kind::periodic:
      h = options.step > 0 ? options.step : spec->period() / n;
      if (!spec->repeats_with_period(n * h))
        throw Error(ErrorCode::invalid_argument,
                    "analyze_system: N * step must be a multiple of the period");
      break;
    case SystemSpec::Kind::constant:
      h = options.step > 0 ? options.step : kTwoPi / n;
      break;
    case SystemSpec::Kind::sampled: {
      auto [lo, hi] = spec->span();
      x0 = lo;
      h = (hi - lo) / n;
      out.periodized = true;
      break;
    }
    default:
      throw Error(ErrorCode::invalid_argument, "analyze_system: unknown system kind");
  }
  out.window = n * h;

  if (static_cast<long>(n) * spec->dimension() > options.max_operator_dim)
    throw Error(ErrorCode::size,
                "analyze_system: N*d exceeds the dense operator cap " +
                    std::to_string(options.max_operator_dim));

  out.family = build_family(spec, x0, h, n, options.tol, options.threads);
  out.op = assemble_line(*out.family, BlockShiftOperator::Boundary::cyclic, out.periodized);
  Mat dense = out.op->dense();
  out.spectrum = make_spectrum_report(eigenvalues(dense));
  {
    // Rotation-invariance diagnostic, as in semigroup_spectrum.
    if (dense.rows() <= 1024) {
      Complex rot = std::polar(1.0, kTwoPi / n);
      std::vector<Complex> rotated(out.spectrum.eigenvalue_list.size());
      for (size_t i = 0; i < rotated.size(); ++i)
        rotated[i] = rot * out.spectrum.eigenvalue_list[i];
      out.spectrum.pairing_distance = pairing_distance(rotated, out.spectrum.eigenvalue_list);
    }
  }

  const int d = spec->dimension();
  if (out.spectrum.unit_circle_gap <= options.degenerate_margin) {
    out.dichotomy.verdict = DichotomyVerdict::none;
    out.dichotomy.degenerate = true;
    out.dichotomy.provenance = "riesz";
    out.dichotomy.detail = "unit-circle gap " + std::to_string(out.spectrum.unit_circle_gap) +
                           " below the degenerate margin; no spectral splitting exists";
    out.exit_class = 2;
    return out;
  }

  out.riesz = riesz_projection_adaptive(dense, options.riesz_quadrature,
                                        options.riesz_quadrature_max, 1e-8);
  if (!(out.riesz.idempotency_residual <= 1e-6)) {
    out.dichotomy.verdict = DichotomyVerdict::none;
    out.dichotomy.degenerate = true;
    out.dichotomy.provenance = "riesz";
    out.dichotomy.detail = "contour projection failed to converge (||P^2 - P|| = " +
                           std::to_string(out.riesz.idempotency_residual) + ")";
    out.exit_class = 2;
    return out;
  }
  out.projection_built = true;
  out.projections = extract_pointwise_projections(out.riesz.projection, n, d, x0, h);
  out.dichotomy = verify_dichotomy(*out.family, out.projections.family, 1e-6);
  out.dichotomy.provenance = "riesz";
  out.theorem6 = check_theorem6_conditions(dense, out.riesz.projection, 1, 1e-8, -1, d);
  out.exit_class = out.dichotomy.verdict == DichotomyVerdict::none ? 2 : 0;
  return out;
}

} // namespace evodich
