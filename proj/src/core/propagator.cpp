#include "core/propagator.hpp"

#include "core/parallel.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <mutex>

namespace evodich {

Mat expm(const Mat& m, double t) {
  if (!m.allFinite() || !std::isfinite(t))
    throw Error(ErrorCode::invalid_argument, "expm: non-finite input");
  if (m.rows() != m.cols())
    throw Error(ErrorCode::invalid_argument, "expm: matrix must be square");
  Mat scaled = t * m;
  Mat result = scaled.exp();
  if (!result.allFinite())
    throw Error(ErrorCode::range, "expm: overflow, ||tM|| = " + std::to_string(scaled.norm()));
  return result;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,     0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,         7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

// Accepted local error per step of size h: kSafety * tol * h (absolute).
// The tight absolute budget keeps re-integrated products within the
// 10*tol*(t-s) cocycle envelope at desk scale.
constexpr double kSafety = 0.15;

Mat integrate(const SystemSpec& spec, double s, double t, double tol) {
  const int d = spec.dimension();
  Mat u = Mat::Identity(d, d);
  if (t == s) return u;

  double span = t - s;
  double a_scale = spec.evaluate(s).norm();
  double h = std::min(span, 0.1 / (1.0 + a_scale));
  double tau = s;
  Mat k[7];

  const double h_min = span * 1e-14;
  int rejected_in_a_row = 0;
  while (tau < t) {
    if (h < h_min)
      throw Error(ErrorCode::numeric,
                  "evolve: step size underflow at t = " + std::to_string(tau) +
                      " (system too stiff for the tolerance budget)");
    if (tau + h > t) h = t - tau;

    k[0] = spec.evaluate(tau) * u;
    for (int stage = 1; stage < 7; ++stage) {
      Mat y = u;
      for (int j = 0; j < stage; ++j)
        if (kA[stage][j] != 0.0) y += (h * kA[stage][j]) * k[j];
      k[stage] = spec.evaluate(tau + kC[stage] * h) * y;
    }

    Mat u5 = u;
    for (int j = 0; j < 7; ++j)
      if (kB5[j] != 0.0) u5 += (h * kB5[j]) * k[j];
    Mat err = Mat::Zero(d, d);
    for (int j = 0; j < 7; ++j) {
      double w = kB5[j] - kB4[j];
      if (w != 0.0) err += (h * w) * k[j];
    }

    double err_norm = err.norm();
    double accept = kSafety * tol * h;
    if (err_norm <= accept || h <= h_min * 2) {
      tau += h;
      u = std::move(u5);
      rejected_in_a_row = 0;
    } else if (++rejected_in_a_row > 60) {
      throw Error(ErrorCode::numeric, "evolve: step controller failed to converge");
    }
    double grow = err_norm > 0 ? 0.9 * std::pow(accept / err_norm, 0.2) : 5.0;
    h *= std::clamp(grow, 0.2, 5.0);
    h = std::min(h, span);
  }
  if (!u.allFinite()) throw Error(ErrorCode::range, "evolve: propagator overflow");
  return u;
}

} // namespace

Mat evolve(const SystemSpec& spec, double s, double t, double tol) {
  if (!(tol > 0)) throw Error(ErrorCode::invalid_argument, "evolve: tol must be > 0");
  if (t < s) throw Error(ErrorCode::invalid_argument, "evolve: t must be >= s");
  auto [lo, hi] = spec.span();
  if (s < lo || t > hi)
    throw Error(ErrorCode::range, "evolve: [s, t] outside the system's validity span");
  if (spec.kind() == SystemSpec::Kind::constant)
    return expm(spec.constant_matrix(), t - s);
  return integrate(spec, s, t, tol);
}

EvolutionFamily::EvolutionFamily(std::shared_ptr<const SystemSpec> spec, double x0, double h,
                                 std::vector<Mat> slices, double tol)
    : spec_(std::move(spec)), x0_(x0), h_(h), tol_(tol), slices_(std::move(slices)) {
  if (slices_.empty()) throw Error(ErrorCode::invalid_argument, "family needs >= 1 slice");
  if (!(h_ > 0)) throw Error(ErrorCode::invalid_argument, "family step must be > 0");
  fit_growth_bound();
}

const Mat& EvolutionFamily::slice(int j) const {
  if (j < 1 || j > steps())
    throw Error(ErrorCode::invalid_argument, "slice index out of range");
  return slices_[j - 1];
}

Mat EvolutionFamily::propagate(int i, int j) const {
  if (i > j || i < 0 || j > steps())
    throw Error(ErrorCode::invalid_argument, "propagate: need 0 <= i <= j <= N");
  int d = spec_->dimension();
  Mat u = Mat::Identity(d, d);
  for (int m = i + 1; m <= j; ++m) u = slices_[m - 1] * u;
  return u;
}

void EvolutionFamily::fit_growth_bound() {
  const int n = steps();
  // log ||U(x_j, x_i)|| against x_j - x_i over all grid pairs, least squares
  // for the rate, intercept lifted so the bound actually covers every pair.
  double sxx = 0, sxy = 0, sx = 0, sy = 0;
  long count = 0;
  std::vector<double> dts, logs;
  dts.reserve(static_cast<size_t>(n) * (n + 1) / 2 + n + 1);
  logs.reserve(dts.capacity());
  for (int i = 0; i <= n; ++i) {
    Mat u = Mat::Identity(spec_->dimension(), spec_->dimension());
    dts.push_back(0.0);
    logs.push_back(0.0); // ||U(x_i, x_i)|| = 1
    for (int j = i + 1; j <= n; ++j) {
      u = slices_[j - 1] * u;
      double nrm = spectral_norm(u);
      if (!(nrm > 0) || !std::isfinite(nrm)) continue;
      dts.push_back((j - i) * h_);
      logs.push_back(std::log(nrm));
    }
  }
  for (size_t k = 0; k < dts.size(); ++k) {
    sx += dts[k];
    sy += logs[k];
    sxx += dts[k] * dts[k];
    sxy += dts[k] * logs[k];
    ++count;
  }
  double denom = count * sxx - sx * sx;
  double beta = denom > 0 ? (count * sxy - sx * sy) / denom : 0.0;
  double log_c = 0.0;
  for (size_t k = 0; k < dts.size(); ++k)
    log_c = std::max(log_c, logs[k] - beta * dts[k]);
  growth_beta_ = beta;
  growth_c_ = std::exp(log_c); // >= 1 because the (i, i) pairs pin log_c >= 0
}

EvolutionFamily build_family(std::shared_ptr<const SystemSpec> spec, double x0, double h, int n,
                             double tol, int threads) {
  if (!spec) throw Error(ErrorCode::invalid_argument, "build_family: null spec");
  if (n < 1) throw Error(ErrorCode::invalid_argument, "build_family: N must be >= 1");
  if (!(h > 0)) throw Error(ErrorCode::invalid_argument, "build_family: h must be > 0");
  std::vector<Mat> slices(n);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  parallel_for(
      n,
      [&](int j) {
        try {
          slices[j] = evolve(*spec, x0 + j * h, x0 + (j + 1) * h, tol);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      },
      threads);
  if (failure) std::rethrow_exception(failure);
  return EvolutionFamily(std::move(spec), x0, h, std::move(slices), tol);
}

} // namespace evodich
