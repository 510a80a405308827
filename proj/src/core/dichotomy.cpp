#include "core/dichotomy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace evodich {

namespace {

double spectral_radius(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  double r = 0.0;
  for (const auto& ev : eigenvalues(m)) r = std::max(r, std::abs(ev));
  return r;
}

// Orthonormal basis of the column space via a rank-revealing pivoted QR;
// |R_ii| are non-increasing, so the rank is the count above `threshold`.
Mat column_space_basis(const Mat& m, double threshold) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  int rank = 0;
  int diag = static_cast<int>(std::min(m.rows(), m.cols()));
  for (int i = 0; i < diag; ++i)
    if (std::abs(qr.matrixQR()(i, i)) > threshold) ++rank;
  return qr.householderQ() * Mat::Identity(m.rows(), rank);
}

// Basis of the range of a (near-)projection. Nonzero singular values of an
// idempotent matrix are >= 1, so 0.5 separates signal from rounding noise.
Mat projection_range_basis(const Mat& p) { return column_space_basis(p, 0.5); }

} // namespace

Monodromy monodromy(const EvolutionFamily& fam, int period_steps) {
  if (period_steps < 1 || period_steps > fam.steps())
    throw Error(ErrorCode::invalid_argument, "monodromy: period_steps must be in 1..N");
  if (!fam.spec().repeats_with_period(period_steps * fam.h()))
    throw Error(ErrorCode::invalid_argument,
                "monodromy: system does not repeat with period period_steps * h");
  Monodromy m;
  m.matrix = fam.propagate(0, period_steps);
  m.multipliers = eigenvalues(m.matrix);
  return m;
}

Mat moore_penrose_left_inverse(const Mat& t, double rank_tol) {
  const int rows = static_cast<int>(t.rows());
  const int cols = static_cast<int>(t.cols());
  if (cols == 0 || rows < cols)
    throw Error(ErrorCode::invalid_argument,
                "moore_penrose_left_inverse: need rows >= cols >= 1");
  Eigen::ColPivHouseholderQR<Mat> qr(t);
  const double threshold = rank_tol * std::max(t.norm(), 1e-300);
  const Mat& r_full = qr.matrixQR();
  int rank = 0;
  for (int i = 0; i < cols; ++i)
    if (std::abs(r_full(i, i)) > threshold) ++rank;
  if (rank < cols) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "moore_penrose_left_inverse: column rank %d < %d at threshold %.3e "
                  "(rank_tol %.1e * ||T||)",
                  rank, cols, threshold, rank_tol);
    throw Error(ErrorCode::numeric, buf);
  }
  Mat r1 = r_full.topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  Mat q1 = qr.householderQ() * Mat::Identity(rows, cols);
  Mat solved = r1.triangularView<Eigen::Upper>().solve(q1.adjoint());
  return qr.colsPermutation() * solved;
}

Mat riesz_projection(const Mat& t, int q_nodes) {
  const int n = static_cast<int>(t.rows());
  if (t.rows() != t.cols())
    throw Error(ErrorCode::invalid_argument, "riesz_projection: matrix must be square");
  if (q_nodes < 8)
    throw Error(ErrorCode::invalid_argument, "riesz_projection: need >= 8 quadrature nodes");

  Mat identity = Mat::Identity(n, n);
  auto node_term = [&](int q) -> Mat {
    Complex z = std::polar(1.0, kTwoPi * q / q_nodes);
    try {
      return z * moore_penrose_left_inverse(z * identity - t);
    } catch (const Error&) {
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "riesz_projection: zI - T is not left invertible at contour node z = "
                    "%.12g%+.12gi",
                    z.real(), z.imag());
      throw Error(ErrorCode::numeric, buf);
    }
  };

  Mat acc = Mat::Zero(n, n);
  if (is_effectively_real(t)) {
    // Conjugate nodes give conjugate terms; fold the lower half-circle.
    acc += node_term(0);
    if (q_nodes % 2 == 0) acc += node_term(q_nodes / 2);
    for (int q = 1; q <= (q_nodes - 1) / 2; ++q) {
      Mat term = node_term(q);
      acc += term + term.conjugate();
    }
  } else {
    for (int q = 0; q < q_nodes; ++q) acc += node_term(q);
  }
  return acc / static_cast<double>(q_nodes);
}

RieszResult riesz_projection_adaptive(const Mat& t, int q0, int q_max, double target) {
  RieszResult best;
  best.idempotency_residual = std::numeric_limits<double>::infinity();
  for (int q = q0; q <= q_max; q *= 2) {
    Mat p = riesz_projection(t, q);
    double res = spectral_norm(p * p - p);
    if (res < best.idempotency_residual) {
      best.projection = std::move(p);
      best.q_used = q;
      best.idempotency_residual = res;
    }
    if (best.idempotency_residual <= target) break;
  }
  return best;
}

ExtractedProjections extract_pointwise_projections(const Mat& projection, int n, int d, double x0,
                                                   double h) {
  if (n < 1 || d < 1 || projection.rows() != n * d || projection.cols() != n * d)
    throw Error(ErrorCode::invalid_argument,
                "extract_pointwise_projections: projection must be (N*d) x (N*d)");
  ExtractedProjections out;
  out.family.grid.resize(n);
  out.family.blocks.resize(n);
  Mat block_diag = Mat::Zero(n * d, n * d);
  for (int j = 0; j < n; ++j) {
    out.family.grid[j] = x0 + j * h;
    Mat pj = projection.block(j * d, j * d, d, d);
    block_diag.block(j * d, j * d, d, d) = pj;
    out.family.idempotency_residual =
        std::max(out.family.idempotency_residual, spectral_norm(pj * pj - pj));
    out.family.max_norm = std::max(out.family.max_norm, spectral_norm(pj));
    out.family.ranks.push_back(static_cast<int>(projection_range_basis(pj).cols()));
    out.family.blocks[j] = std::move(pj);
  }
  for (int j = 0; j < n; ++j) {
    const Mat& a = out.family.blocks[j];
    const Mat& b = out.family.blocks[(j + 1) % n];
    out.family.continuity_modulus =
        std::max(out.family.continuity_modulus, spectral_norm(b - a));
  }
  out.off_block_mass = spectral_norm(projection - block_diag);
  return out;
}

const char* to_string(DichotomyVerdict v) {
  switch (v) {
    case DichotomyVerdict::uniformly_stable: return "uniformly_stable";
    case DichotomyVerdict::hyperbolic: return "hyperbolic";
    case DichotomyVerdict::spectrally_hyperbolic: return "spectrally_hyperbolic";
    case DichotomyVerdict::none: return "none";
  }
  return "unknown";
}

DichotomyReport verify_dichotomy(const EvolutionFamily& fam, const ProjectionFamily& p,
                                 double tol) {
  const int n = static_cast<int>(p.blocks.size());
  const int d = fam.spec().dimension();
  if (n < 2 || n > fam.steps())
    throw Error(ErrorCode::invalid_argument, "verify_dichotomy: projection grid does not match "
                                             "the family grid");
  for (int j = 0; j < n; ++j) {
    if (p.blocks[j].rows() != d || p.blocks[j].cols() != d)
      throw Error(ErrorCode::invalid_argument, "verify_dichotomy: projection block size mismatch");
    if (!p.grid.empty() && std::abs(p.grid[j] - fam.x(j)) > 1e-9 * std::max(1.0, fam.h() * n))
      throw Error(ErrorCode::invalid_argument, "verify_dichotomy: grid mismatch");
  }

  DichotomyReport rep;

  // Bases of the range and kernel bundles; ranks must be constant.
  std::vector<Mat> range_bases(n), kernel_bases(n);
  int rank = -1;
  for (int j = 0; j < n; ++j) {
    range_bases[j] = projection_range_basis(p.blocks[j]);
    kernel_bases[j] = projection_range_basis(Mat::Identity(d, d) - p.blocks[j]);
    int rj = static_cast<int>(range_bases[j].cols());
    if (static_cast<int>(kernel_bases[j].cols()) != d - rj)
      throw Error(ErrorCode::numeric, "verify_dichotomy: projection block is too far from "
                                      "idempotent to split the space");
    if (rank < 0) rank = rj;
    if (rj != rank) {
      rep.rank_constant = false;
      throw Error(ErrorCode::invalid_argument,
                  "verify_dichotomy: rank jump in the projection family (" +
                      std::to_string(rank) + " -> " + std::to_string(rj) + " at cell " +
                      std::to_string(j) + ")");
    }
  }
  rep.rank = rank;
  const int kernel_dim = d - rank;

  // Sweep all grid pairs i <= j once, accumulating the commutation residual
  // and the per-pair extremal singular values on both bundles.
  struct Sample {
    double dt;
    double log_value;
  };
  std::vector<Sample> decay, growth;
  double scale_u = 1.0;
  double min_kernel_sv = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    Mat u = Mat::Identity(d, d);
    for (int j = i; j < n; ++j) {
      if (j > i) u = fam.slice(j) * u; // U(x_j, x_i)
      scale_u = std::max(scale_u, u.norm());
      rep.commutation_residual =
          std::max(rep.commutation_residual, spectral_norm(p.blocks[j] * u - u * p.blocks[i]));
      double dt = (j - i) * fam.h();
      if (rank > 0) {
        Eigen::JacobiSVD<Mat> svd(u * range_bases[i]);
        decay.push_back({dt, std::log(svd.singularValues()(0))});
      }
      if (kernel_dim > 0) {
        Mat restricted = u * kernel_bases[i];
        Eigen::JacobiSVD<Mat> svd(restricted);
        double smin = svd.singularValues()(svd.singularValues().size() - 1);
        growth.push_back({dt, std::log(std::max(smin, 1e-300))});
        // Condition (3): invertibility of U : Ker P(x_i) -> Ker P(x_j).
        Mat cross = kernel_bases[j].adjoint() * restricted;
        min_kernel_sv = std::min(min_kernel_sv, smallest_singular_value(cross));
      }
    }
  }

  auto fit_slope = [](const std::vector<Sample>& data, double& slope, double& intercept,
                      double& residual) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& s : data) {
      sx += s.dt;
      sy += s.log_value;
      sxx += s.dt * s.dt;
      sxy += s.dt * s.log_value;
    }
    double m = static_cast<double>(data.size());
    double denom = m * sxx - sx * sx;
    slope = denom > 0 ? (m * sxy - sx * sy) / denom : 0.0;
    intercept = m > 0 ? (sy - slope * sx) / m : 0.0;
    residual = 0.0;
    for (const auto& s : data)
      residual = std::max(residual, std::abs(s.log_value - slope * s.dt - intercept));
  };

  double decay_slope = 0, decay_icpt = 0, decay_res = 0;
  double growth_slope = 0, growth_icpt = 0, growth_res = 0;
  if (!decay.empty()) fit_slope(decay, decay_slope, decay_icpt, decay_res);
  if (!growth.empty()) fit_slope(growth, growth_slope, growth_icpt, growth_res);
  rep.decay_rate = rank > 0 ? -decay_slope : 0.0;
  rep.growth_rate = kernel_dim > 0 ? growth_slope : 0.0;
  rep.fit_residual = std::max(decay_res, growth_res);

  // The most conservative single rate, with M lifted so both exponential
  // estimates hold on every pair.
  double lambda;
  if (rank > 0 && kernel_dim > 0)
    lambda = std::min(rep.decay_rate, rep.growth_rate);
  else if (rank > 0)
    lambda = rep.decay_rate;
  else
    lambda = rep.growth_rate;
  rep.lambda = lambda;

  double log_m = 0.0;
  for (const auto& s : decay) log_m = std::max(log_m, s.log_value + lambda * s.dt);
  for (const auto& s : growth) log_m = std::max(log_m, lambda * s.dt - s.log_value);
  rep.m_constant = std::exp(log_m);
  rep.kernel_invertibility =
      kernel_dim > 0 ? min_kernel_sv : std::numeric_limits<double>::infinity();

  bool commutation_ok = rep.commutation_residual <= tol * scale_u;
  bool rates_ok = lambda > 0;
  rep.degenerate = std::abs(lambda) <= 1e-6;
  double invertibility_threshold = 1e-8 * scale_u;

  if (!commutation_ok || !rates_ok) {
    rep.verdict = DichotomyVerdict::none;
  } else if (rank == d) {
    rep.verdict = DichotomyVerdict::uniformly_stable;
  } else if (kernel_dim == 0 || rep.kernel_invertibility > invertibility_threshold) {
    rep.verdict = DichotomyVerdict::spectrally_hyperbolic;
  } else {
    rep.verdict = DichotomyVerdict::hyperbolic;
  }
  return rep;
}

Theorem6Report check_theorem6_conditions(const Mat& t, const Mat& projection, int t_steps,
                                         double tol, int n_max, int block_dim) {
  const int n = static_cast<int>(t.rows());
  if (t.rows() != t.cols() || projection.rows() != n || projection.cols() != n)
    throw Error(ErrorCode::invalid_argument, "check_theorem6_conditions: dimension mismatch");
  if (t_steps < 1)
    throw Error(ErrorCode::invalid_argument, "check_theorem6_conditions: t_steps must be >= 1");
  if (block_dim < 1 || n % block_dim != 0)
    throw Error(ErrorCode::invalid_argument,
                "check_theorem6_conditions: block_dim must divide the dimension");

  Theorem6Report rep;
  rep.idempotency = spectral_norm(projection * projection - projection);
  double p_scale = std::max(1.0, spectral_norm(projection));
  if (rep.idempotency > 1e-4 * p_scale)
    throw Error(ErrorCode::invalid_argument,
                "check_theorem6_conditions: matrix is not a projection (||P^2 - P|| = " +
                    std::to_string(rep.idempotency) + ")");

  Mat t_eff = t;
  for (int s = 1; s < t_steps; ++s) t_eff = t_eff * t;
  double t_scale = std::max(1.0, spectral_norm(t_eff));

  // (1) commutation
  rep.commutation = spectral_norm(t_eff * projection - projection * t_eff);
  rep.condition1 = rep.commutation <= 1e-6 * t_scale;

  // (2) spectral radius on Im P
  Mat range = projection_range_basis(projection);
  if (range.cols() > 0) {
    rep.stable_radius = spectral_radius(range.adjoint() * t_eff * range);
  }
  rep.condition2 = rep.stable_radius < 1.0;

  // (3) left invertibility of T on Ker P and the dagger's spectrum
  Mat kernel = projection_range_basis(Mat::Identity(n, n) - projection);
  rep.kernel_dim = static_cast<int>(kernel.cols());
  if (rep.kernel_dim == 0) {
    rep.kernel_margin = std::numeric_limits<double>::infinity();
    rep.dagger_radius = 0.0;
    rep.condition3 = true;
  } else {
    Mat restricted = t_eff * kernel;
    rep.kernel_margin = smallest_singular_value(restricted);
    if (rep.kernel_margin > tol * t_scale) {
      Mat dagger = moore_penrose_left_inverse(restricted);
      rep.dagger_radius = spectral_radius(dagger * kernel);
      rep.condition3 = rep.dagger_radius < 1.0;
    } else {
      rep.dagger_radius = std::numeric_limits<double>::infinity();
      rep.condition3 = false;
    }
  }

  // (4) invariance of Ker P minus the stable image chain under diagonal
  // block multiplications. The chain ranks are non-increasing integers, so
  // it is declared stable when two consecutive ranks agree.
  if (n_max < 0) n_max = 2 * (n / block_dim);
  Mat chain = kernel;
  int prev_rank = rep.kernel_dim;
  rep.intersection_steps = 0;
  for (int it = 1; it <= n_max; ++it) {
    Mat next = column_space_basis(t_eff * chain, 1e-8 * t_scale);
    rep.intersection_steps = it;
    if (static_cast<int>(next.cols()) == prev_rank) {
      chain = std::move(next);
      break;
    }
    prev_rank = static_cast<int>(next.cols());
    chain = std::move(next);
  }

  // Complement of the chain inside Ker P.
  Mat residual = kernel;
  if (chain.cols() > 0) residual -= chain * (chain.adjoint() * kernel);
  Mat complement = column_space_basis(residual, 1e-7);
  rep.complement_dim = static_cast<int>(complement.cols());

  if (rep.complement_dim == 0) {
    rep.multiplication_leakage = 0.0;
  } else {
    const int cells = n / block_dim;
    double leak = 0.0;
    for (int c = 0; c < cells; ++c) {
      Mat scaled = Mat::Zero(n, complement.cols());
      scaled.middleRows(c * block_dim, block_dim) =
          complement.middleRows(c * block_dim, block_dim);
      Mat outside = scaled - complement * (complement.adjoint() * scaled);
      leak = std::max(leak, spectral_norm(outside));
    }
    rep.multiplication_leakage = leak;
  }
  rep.condition4 = rep.multiplication_leakage <= 1e-6;
  return rep;
}

} // namespace evodich
