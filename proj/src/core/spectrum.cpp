#include "core/spectrum.hpp"

#include "core/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace evodich {

std::vector<Complex> eigenvalues(const Mat& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::invalid_argument, "eigenvalues: matrix must be square");
  if (!m.allFinite())
    throw Error(ErrorCode::invalid_argument, "eigenvalues: non-finite entries");
  Eigen::ComplexEigenSolver<Mat> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw Error(ErrorCode::numeric, "eigenvalues: QR iteration did not converge");
  std::vector<Complex> out(m.rows());
  for (int i = 0; i < m.rows(); ++i) out[i] = solver.eigenvalues()(i);
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

namespace {

// Min-cost assignment via shortest augmenting paths with potentials.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) match[p[j] - 1] = j - 1;
  return match;
}

} // namespace

std::vector<int> optimal_pairing(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::invalid_argument, "optimal_pairing: multisets differ in size");
  if (a.empty()) return {};
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost[i][j] = std::abs(a[i] - b[j]);
  return hungarian(cost);
}

double pairing_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  auto match = optimal_pairing(a, b);
  double worst = 0.0;
  for (size_t i = 0; i < match.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[match[i]]));
  return worst;
}

SpectrumReport make_spectrum_report(const std::vector<Complex>& eigs) {
  SpectrumReport r;
  r.eigenvalue_list = eigs;
  double circle = std::numeric_limits<double>::infinity();
  double axis = std::numeric_limits<double>::infinity();
  for (const auto& ev : eigs) {
    circle = std::min(circle, std::abs(1.0 - std::abs(ev)));
    axis = std::min(axis, std::abs(ev.real()));
  }
  r.unit_circle_gap = eigs.empty() ? 0.0 : circle;
  r.axis_gap = eigs.empty() ? 0.0 : axis;
  return r;
}

SpectrumReport spectral_mapping_check(const Mat& a, double t) {
  if (t == 0.0) throw Error(ErrorCode::invalid_argument, "spectral_mapping_check: t must be != 0");
  auto semigroup_side = eigenvalues(expm(a, t));
  auto generator_side = eigenvalues(a);
  std::vector<Complex> exp_side(generator_side.size());
  for (size_t i = 0; i < generator_side.size(); ++i)
    exp_side[i] = std::exp(t * generator_side[i]);

  SpectrumReport r = make_spectrum_report(semigroup_side);
  auto match = optimal_pairing(exp_side, semigroup_side);
  double worst = 0.0;
  for (size_t i = 0; i < match.size(); ++i) {
    r.matched_pairs.emplace_back(static_cast<int>(i), match[i]);
    worst = std::max(worst, std::abs(exp_side[i] - semigroup_side[match[i]]));
  }
  r.pairing_distance = worst;
  return r;
}

std::vector<ResolventPoint> resolvent_norm_on_axis(const Mat& a,
                                                   const std::vector<double>& xi_values) {
  if (a.rows() != a.cols())
    throw Error(ErrorCode::invalid_argument, "resolvent_norm_on_axis: matrix must be square");
  const int d = static_cast<int>(a.rows());
  double scale = std::max(1.0, spectral_norm(a));
  std::vector<ResolventPoint> out;
  out.reserve(xi_values.size());
  for (double xi : xi_values) {
    Mat shifted = a - Complex(0.0, xi) * Mat::Identity(d, d);
    double smin = smallest_singular_value(shifted);
    ResolventPoint pt;
    pt.xi = xi;
    if (smin <= 1e-12 * scale) {
      pt.singular = true;
    } else {
      pt.norm = 1.0 / smin;
    }
    out.push_back(pt);
  }
  return out;
}

GreinerEstimate greiner_inequality_check(const Mat& a, int trials, int cutoff, double p, int grid,
                                         std::uint64_t seed) {
  if (trials < 1 || cutoff < 0 || grid < 8)
    throw Error(ErrorCode::invalid_argument, "greiner_inequality_check: bad trials/cutoff/grid");
  if (!(p >= 1.0))
    throw Error(ErrorCode::invalid_argument, "greiner_inequality_check: p must be >= 1");
  const int d = static_cast<int>(a.rows());
  const int modes = 2 * cutoff + 1;
  double scale = std::max(1.0, spectral_norm(a));

  // Precondition: i k must avoid sigma(A) for every |k| <= cutoff.
  std::vector<Mat> resolvents(modes);
  GreinerEstimate est;
  est.trials = trials;
  est.cutoff = cutoff;
  est.p = p;
  for (int k = -cutoff; k <= cutoff; ++k) {
    Mat shifted = a - Complex(0.0, k) * Mat::Identity(d, d);
    double smin = smallest_singular_value(shifted);
    if (smin <= 1e-10 * scale)
      throw Error(ErrorCode::invalid_argument,
                  "greiner_inequality_check: i*k is in the spectrum for k = " + std::to_string(k));
    resolvents[k + cutoff] = shifted.partialPivLu().solve(Mat::Identity(d, d));
    double rnorm = 1.0 / smin;
    est.single_mode_bound = std::max(est.single_mode_bound, rnorm);
    est.sum_bound += rnorm;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double h = kTwoPi / grid;

  // Phase table e^{-ik x_g} for one pass over the quadrature grid.
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<Vec> coeff(modes), mapped(modes);
    for (int m = 0; m < modes; ++m) {
      Vec y(d);
      for (int i = 0; i < d; ++i) y(i) = Complex(gauss(rng), gauss(rng));
      coeff[m] = y;
      mapped[m] = resolvents[m] * y;
    }
    double num = 0.0, den = 0.0;
    for (int g = 0; g < grid; ++g) {
      double x = h * g;
      Vec fx = Vec::Zero(d), gx = Vec::Zero(d);
      for (int k = -cutoff; k <= cutoff; ++k) {
        Complex phase = std::polar(1.0, -k * x);
        gx += coeff[k + cutoff] * phase;
        fx += mapped[k + cutoff] * phase;
      }
      num += std::pow(fx.norm(), p);
      den += std::pow(gx.norm(), p);
    }
    num = std::pow(h * num, 1.0 / p);
    den = std::pow(h * den, 1.0 / p);
    if (den > 0) est.max_ratio = std::max(est.max_ratio, num / den);
  }
  return est;
}

GeneratorVerdictReport hyperbolicity_verdict(const Mat& a) {
  auto eigs = eigenvalues(a);
  GeneratorVerdictReport r;
  double axis = std::numeric_limits<double>::infinity();
  double max_re = -std::numeric_limits<double>::infinity();
  for (const auto& ev : eigs) {
    axis = std::min(axis, std::abs(ev.real()));
    max_re = std::max(max_re, ev.real());
  }
  r.axis_gap = axis;
  double threshold = 1e-10 * std::max(1.0, spectral_norm(a));
  if (axis <= threshold)
    r.verdict = GeneratorVerdict::on_axis;
  else if (max_re < 0)
    r.verdict = GeneratorVerdict::stable;
  else
    r.verdict = GeneratorVerdict::hyperbolic;
  return r;
}

const char* to_string(GeneratorVerdict v) {
  switch (v) {
    case GeneratorVerdict::stable: return "stable";
    case GeneratorVerdict::hyperbolic: return "hyperbolic";
    case GeneratorVerdict::on_axis: return "on-axis";
  }
  return "unknown";
}

} // namespace evodich
