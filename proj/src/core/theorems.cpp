#include "core/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace evodich {

void EquivalenceTable::finalize() {
  degenerate = false;
  for (const auto& c : conditions)
    if (std::abs(c.margin) <= degenerate_margin) degenerate = true;
  consistent = true;
  for (const auto& c : conditions)
    if (c.holds != conditions.front().holds) consistent = false;
  pass = degenerate ? std::optional<bool>() : std::optional<bool>(consistent);
}

namespace {

double gap_to_point(const std::vector<Complex>& eigs, Complex point) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& ev : eigs) gap = std::min(gap, std::abs(ev - point));
  return gap;
}

double unit_circle_gap_of(const std::vector<Complex>& eigs) {
  double gap = std::numeric_limits<double>::infinity();
  for (const auto& ev : eigs) gap = std::min(gap, std::abs(1.0 - std::abs(ev)));
  return gap;
}

double smin_at(const Mat& a, double xi) {
  return smallest_singular_value(a - Complex(0.0, xi) * Mat::Identity(a.rows(), a.cols()));
}

} // namespace

double min_axis_resolvent_margin(const Mat& a, double xi_window) {
  double a_norm = spectral_norm(a);
  if (xi_window < a_norm + 1.0)
    throw Error(ErrorCode::invalid_argument,
                "min_axis_resolvent_margin: window must be >= ||A|| + 1 for the tail bound");
  const int coarse = 512;
  double best = xi_window - a_norm;  // Neumann tail
  std::vector<double> values(coarse + 1);
  double step = 2.0 * xi_window / coarse;
  for (int i = 0; i <= coarse; ++i) values[i] = smin_at(a, -xi_window + i * step);

  auto refine = [&](double lo, double hi) {
    // Golden-section refinement of a local minimum of a 1-Lipschitz map.
    const double phi = 0.6180339887498949;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = smin_at(a, x1), f2 = smin_at(a, x2);
    for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, xi_window); ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = smin_at(a, x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = smin_at(a, x2);
      }
    }
    return std::min(f1, f2);
  };

  for (int i = 0; i <= coarse; ++i) {
    bool local_min = (i == 0 || values[i] <= values[i - 1]) &&
                     (i == coarse || values[i] <= values[i + 1]);
    if (!local_min) continue;
    double lo = -xi_window + std::max(0, i - 1) * step;
    double hi = -xi_window + std::min(coarse, i + 1) * step;
    best = std::min(best, refine(lo, hi));
  }
  return best;
}

EquivalenceTable run_theorem1_check(const Mat& a, int n, double degenerate_margin) {
  if (n < 8) throw Error(ErrorCode::invalid_argument, "run_theorem1_check: N must be >= 8");
  EquivalenceTable table;
  table.theorem = "theorem1";
  table.degenerate_margin = degenerate_margin;

  // (1) 1 in rho(e^{2 pi A})
  double margin1 = gap_to_point(eigenvalues(expm(a, kTwoPi)), Complex(1.0, 0.0));

  // (2) 0 in rho(B): the Fourier blocks A - ik must all be invertible;
  // |k| > ceil(||A||) + 1 is covered by the Neumann bound.
  double a_norm = spectral_norm(a);
  int cutoff = static_cast<int>(std::ceil(a_norm)) + 1;
  double margin2 = cutoff + 1.0 - a_norm;
  for (int k = -cutoff; k <= cutoff; ++k) margin2 = std::min(margin2, smin_at(a, k));

  // (3) 1 in rho(e^{2 pi B}) through the cyclic discretization: e^{2 pi B}
  // is the N-th power of the weighted shift, so its eigenvalues are the
  //N-th powers of sigma(T).
  BlockShiftOperator shift = assemble_periodic(a, n);
  double margin3 = std::numeric_limits<double>::infinity();
  for (const auto& lambda : eigenvalues(shift.dense()))
    margin3 = std::min(margin3, std::abs(std::pow(lambda, n) - 1.0));

  table.conditions.push_back({"1 in rho(e^{2 pi A})", margin1 > degenerate_margin, margin1});
  table.conditions.push_back({"0 in rho(B) via Fourier blocks", margin2 > degenerate_margin, margin2});
  table.conditions.push_back({"1 in rho(e^{2 pi B})", margin3 > degenerate_margin, margin3});
  table.finalize();
  return table;
}

EquivalenceTable run_theorem2_check(const Mat& a, const RunOptions& options) {
  EquivalenceTable table;
  table.theorem = "theorem2";
  table.degenerate_margin = options.degenerate_margin;

  double margin_semigroup = gap_to_point(eigenvalues(expm(a, kTwoPi)), Complex(1.0, 0.0));
  double a_norm = spectral_norm(a);
  int cutoff = static_cast<int>(std::ceil(a_norm)) + 1;
  double margin_axis = cutoff + 1.0 - a_norm;
  for (int k = -cutoff; k <= cutoff; ++k) margin_axis = std::min(margin_axis, smin_at(a, k));

  table.conditions.push_back(
      {"1 in rho(e^{2 pi A})", margin_semigroup > options.degenerate_margin, margin_semigroup});
  table.conditions.push_back(
      {"i Z subset rho(A)", margin_axis > options.degenerate_margin, margin_axis});

  if (margin_axis > options.degenerate_margin) {
    GreinerEstimate est = greiner_inequality_check(a, 50, cutoff, options.p_exponent, 1024,
                                                   options.seed);
    table.diagnostics.emplace_back("constant_estimate", est.max_ratio);
    table.diagnostics.emplace_back("single_mode_bound", est.single_mode_bound);
    table.diagnostics.emplace_back("sum_bound", est.sum_bound);
  }
  table.finalize();
  return table;
}

EquivalenceTable run_theorem3_check(const Mat& a, double t, int n, double xi_window,
                                    double degenerate_margin) {
  if (!(t > 0)) throw Error(ErrorCode::invalid_argument, "run_theorem3_check: t must be > 0");
  if (n < 4) throw Error(ErrorCode::invalid_argument, "run_theorem3_check: N must be >= 4");
  EquivalenceTable table;
  table.theorem = "theorem3";
  table.degenerate_margin = degenerate_margin;

  double a_norm = spectral_norm(a);
  if (xi_window == 0.0) xi_window = a_norm + 2.0;

  double margin1 = unit_circle_gap_of(eigenvalues(expm(a, t)));
  double margin2 = min_axis_resolvent_margin(a, xi_window);

  // Cyclic discretization with grid step exactly t: the one-cell shift is
  // e^{tB} itself on the N*t circle.
  std::vector<Mat> weights(n, expm(a, t));
  BlockShiftOperator shift(std::move(weights), BlockShiftOperator::Boundary::cyclic, t);
  double margin3 = unit_circle_gap_of(eigenvalues(shift.dense()));

  table.conditions.push_back(
      {"sigma(e^{tA}) misses the unit circle", margin1 > degenerate_margin, margin1});
  table.conditions.push_back({"0 in rho(B) on the line", margin2 > degenerate_margin, margin2});
  table.conditions.push_back(
      {"sigma(e^{tB}) misses the unit circle", margin3 > degenerate_margin, margin3});
  table.finalize();
  return table;
}

namespace {

// Deterministic two-variable sample for the change-of-variables diagnostic.
Grid2Function sample_grid2(int n, int d, double h, std::uint64_t seed) {
  Grid2Function g;
  g.n = n;
  g.h = h;
  g.values.assign(n, std::vector<Vec>(n));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec v(d);
      for (int c = 0; c < d; ++c) v(c) = Complex(gauss(rng), gauss(rng));
      g.values[i][j] = v;
    }
  return g;
}

} // namespace

EquivalenceTable run_theorem4_check(std::shared_ptr<const SystemSpec> spec,
                                    const RunOptions& options) {
  if (!spec) throw Error(ErrorCode::invalid_argument, "run_theorem4_check: null spec");
  if (spec->kind() == SystemSpec::Kind::sampled)
    throw Error(ErrorCode::invalid_argument,
                "run_theorem4_check: needs a periodic (or constant) system");
  EquivalenceTable table;
  table.theorem = "theorem4";
  table.system = spec->name();
  table.degenerate_margin = options.degenerate_margin;

  const int n = options.grid_size;
  double period = spec->kind() == SystemSpec::Kind::periodic ? spec->period() : kTwoPi;
  double h = period / n;
  EvolutionFamily fam = build_family(spec, 0.0, h, n, options.tol, options.threads);
  BlockShiftOperator op = assemble_line(fam, BlockShiftOperator::Boundary::cyclic);
  SpectrumReport srep = semigroup_spectrum(op, options.max_operator_dim);

  // (1) 0 in rho(D), Floquet surrogate: no multiplier on the unit circle.
  Monodromy mono = monodromy(fam, n);
  double margin1 = unit_circle_gap_of(mono.multipliers);
  // (2) sigma(e^{hD}) misses the unit circle.
  double margin2 = srep.unit_circle_gap;

  table.conditions.push_back(
      {"0 in rho(D) (Floquet surrogate)", margin1 > options.degenerate_margin, margin1});
  table.conditions.push_back(
      {"sigma(e^{tD}) misses the unit circle", margin2 > options.degenerate_margin, margin2});

  table.diagnostics.emplace_back("rotation_invariance_distance", srep.pairing_distance);
  double cov = change_of_variables_check(
      fam, sample_grid2(n, spec->dimension(), h, options.seed), 1);
  table.diagnostics.emplace_back("change_of_variables_discrepancy", cov);
  table.finalize();
  return table;
}

EquivalenceTable run_theorem5_check(std::shared_ptr<const SystemSpec> spec,
                                    const RunOptions& options) {
  if (!spec) throw Error(ErrorCode::invalid_argument, "run_theorem5_check: null spec");
  if (spec->kind() == SystemSpec::Kind::sampled)
    throw Error(ErrorCode::invalid_argument,
                "run_theorem5_check: needs a periodic (or constant) system");
  EquivalenceTable table;
  table.theorem = "theorem5";
  table.system = spec->name();
  table.degenerate_margin = options.degenerate_margin;

  AnalyzeOutcome outcome = analyze_system(spec, options);

  double margin_right = outcome.spectrum.unit_circle_gap;
  bool left_holds = false;
  double margin_left = 0.0;
  if (outcome.projection_built) {
    bool spectrally = outcome.dichotomy.verdict == DichotomyVerdict::spectrally_hyperbolic ||
                      outcome.dichotomy.verdict == DichotomyVerdict::uniformly_stable;
    margin_left = spectrally ? outcome.dichotomy.lambda : 0.0;
    left_holds = spectrally && margin_left > options.degenerate_margin;
    table.diagnostics.emplace_back("projection_rank", outcome.dichotomy.rank);
    table.diagnostics.emplace_back("fitted_lambda", outcome.dichotomy.lambda);
    table.diagnostics.emplace_back("fitted_M", outcome.dichotomy.m_constant);
  }
  table.conditions.push_back({"spectrally hyperbolic", left_holds, margin_left});
  table.conditions.push_back(
      {"0 in rho(D) via unit-circle gap", margin_right > options.degenerate_margin, margin_right});
  table.finalize();
  return table;
}

std::vector<EquivalenceTable> run_applicable_checks(std::shared_ptr<const SystemSpec> spec,
                                                    const RunOptions& options) {
  if (!spec) throw Error(ErrorCode::invalid_argument, "run_applicable_checks: null spec");
  std::vector<EquivalenceTable> tables;
  if (spec->kind() == SystemSpec::Kind::constant) {
    const Mat& a = spec->constant_matrix();
    tables.push_back(run_theorem1_check(a, std::max(8, options.grid_size),
                                        options.degenerate_margin));
    tables.push_back(run_theorem2_check(a, options));
    tables.push_back(run_theorem3_check(a, 1.0, std::max(4, options.grid_size), 0.0,
                                        options.degenerate_margin));
  }
  if (spec->kind() != SystemSpec::Kind::sampled) {
    tables.push_back(run_theorem4_check(spec, options));
    tables.push_back(run_theorem5_check(spec, options));
  }
  for (auto& t : tables)
    if (t.system.empty()) t.system = spec->name();
  return tables;
}

} // namespace evodich
