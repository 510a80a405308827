#include "core/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace evodich {

double GridFunction::norm() const {
  double acc = 0.0;
  for (const auto& v : values) acc += std::pow(v.norm(), p);
  return std::pow(h * acc, 1.0 / p);
}

BlockShiftOperator::BlockShiftOperator(std::vector<Mat> weights, Boundary boundary, double h)
    : weights_(std::move(weights)), boundary_(boundary), h_(h) {
  if (weights_.size() < 2)
    throw Error(ErrorCode::invalid_argument, "block shift needs N >= 2 cells");
  if (!(h_ > 0)) throw Error(ErrorCode::invalid_argument, "block shift needs step h > 0");
  const int d = static_cast<int>(weights_.front().rows());
  for (const auto& w : weights_)
    if (w.rows() != d || w.cols() != d)
      throw Error(ErrorCode::invalid_argument, "block shift weights must all be d x d");
}

const Mat& BlockShiftOperator::weight(int j) const {
  if (j < 1 || j > cells())
    throw Error(ErrorCode::invalid_argument, "weight index out of range");
  return weights_[j - 1];
}

GridFunction BlockShiftOperator::apply(const GridFunction& f) const {
  const int n = cells();
  if (static_cast<int>(f.values.size()) != n)
    throw Error(ErrorCode::invalid_argument, "apply: grid size mismatch");
  GridFunction out;
  out.h = f.h;
  out.p = f.p;
  out.values.resize(n);
  for (int j = 0; j < n; ++j) {
    if (j == 0 && boundary_ == Boundary::zero)
      out.values[j] = Vec::Zero(block_dim());
    else
      out.values[j] = weights_[j] * f.values[(j - 1 + n) % n];
  }
  return out;
}

Mat BlockShiftOperator::dense() const {
  const int n = cells(), d = block_dim();
  Mat t = Mat::Zero(n * d, n * d);
  for (int j = 0; j < n; ++j) {
    if (j == 0 && boundary_ == Boundary::zero) continue;
    int src = (j - 1 + n) % n;
    t.block(j * d, src * d, d, d) = weights_[j];
  }
  return t;
}

Mat BlockShiftOperator::monodromy() const {
  const int d = block_dim();
  Mat pi = Mat::Identity(d, d);
  for (const auto& w : weights_) pi = w * pi;
  return pi;
}

BlockShiftOperator assemble_periodic(const Mat& a, int n) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "assemble_periodic: N must be >= 2");
  double h = kTwoPi / n;
  std::vector<Mat> ws(n, expm(a, h));
  return BlockShiftOperator(std::move(ws), BlockShiftOperator::Boundary::cyclic, h);
}

BlockShiftOperator assemble_line(const EvolutionFamily& fam,
                                 BlockShiftOperator::Boundary boundary, bool periodize) {
  bool wrapped = false;
  if (boundary == BlockShiftOperator::Boundary::cyclic) {
    double window = fam.steps() * fam.h();
    if (!fam.spec().repeats_with_period(window)) {
      if (!periodize)
        throw Error(ErrorCode::invalid_argument,
                    "assemble_line: cyclic boundary requires a system that repeats with period "
                    "N*h (pass periodize to wrap a finite window explicitly)");
      wrapped = true;
    }
  }
  BlockShiftOperator op(fam.slices(), boundary, fam.h());
  if (wrapped) op.mark_periodized();
  return op;
}

SpectrumReport semigroup_spectrum(const BlockShiftOperator& op, int max_dim) {
  if (op.boundary() != BlockShiftOperator::Boundary::cyclic)
    throw Error(ErrorCode::invalid_argument,
                "semigroup_spectrum: spectral verdicts need the cyclic boundary (the zero-padded "
                "truncation is nilpotent)");
  if (op.dim() > max_dim)
    throw Error(ErrorCode::size, "semigroup_spectrum: N*d = " + std::to_string(op.dim()) +
                                     " exceeds the dense cap " + std::to_string(max_dim));
  SpectrumReport r = make_spectrum_report(eigenvalues(op.dense()));
  // Rotation invariance: the spectrum is closed under multiplication by the
  // N-th root of unity. Report the pairing distance as a diagnostic.
  if (op.dim() <= 1024) {
    Complex rot = std::polar(1.0, kTwoPi / op.cells());
    std::vector<Complex> rotated(r.eigenvalue_list.size());
    for (size_t i = 0; i < rotated.size(); ++i) rotated[i] = rot * r.eigenvalue_list[i];
    r.pairing_distance = pairing_distance(rotated, r.eigenvalue_list);
  } else {
    r.pairing_distance = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

namespace {

// Piecewise-linear cutoff: 0 on [0, 2pi/3), ramps to 1 on [2pi/3, 4pi/3),
// 1 on [4pi/3, 2pi).
double cutoff_rho(double x) {
  const double lo = kTwoPi / 3.0, hi = 2.0 * kTwoPi / 3.0;
  if (x < lo) return 0.0;
  if (x >= hi) return 1.0;
  return 3.0 / kTwoPi * x - 1.0;
}

} // namespace

WitnessFunction approximate_eigenfunction(const Mat& a, Vec y, int n, double p) {
  if (n < 8) throw Error(ErrorCode::invalid_argument, "approximate_eigenfunction: N must be >= 8");
  if (!(p >= 1.0))
    throw Error(ErrorCode::invalid_argument, "approximate_eigenfunction: p must be >= 1");
  if (y.size() != a.rows())
    throw Error(ErrorCode::invalid_argument, "approximate_eigenfunction: dimension mismatch");
  double ynorm = y.norm();
  if (!(ynorm > 0))
    throw Error(ErrorCode::invalid_argument, "approximate_eigenfunction: y must be nonzero");
  y /= ynorm;

  const double h = kTwoPi / n;
  Mat full_turn = expm(a, kTwoPi);

  WitnessFunction w;
  w.f.h = h;
  w.f.p = p;
  w.f.values.resize(n);
  for (int j = 0; j < n; ++j) {
    double x = j * h;
    double rho = cutoff_rho(x);
    Mat exa = expm(a, x);
    w.f.values[j] = (1.0 - rho) * (exa * (full_turn * y)) + rho * (exa * y);
  }
  w.norm_f = w.f.norm();

  // B = -d/dx + A with periodic wrap, central differences.
  GridFunction bf;
  bf.h = h;
  bf.p = p;
  bf.values.resize(n);
  for (int j = 0; j < n; ++j) {
    const Vec& fwd = w.f.values[(j + 1) % n];
    const Vec& bwd = w.f.values[(j - 1 + n) % n];
    bf.values[j] = -(fwd - bwd) / (2.0 * h) + a * w.f.values[j];
  }
  w.residual_bf = bf.norm();
  return w;
}

double change_of_variables_check(const EvolutionFamily& fam, const Grid2Function& sample,
                                 int t_steps) {
  const int n = sample.n;
  if (n < 2 || static_cast<int>(sample.values.size()) != n)
    throw Error(ErrorCode::invalid_argument, "change_of_variables_check: bad sample grid");
  for (const auto& row : sample.values)
    if (static_cast<int>(row.size()) != n)
      throw Error(ErrorCode::invalid_argument, "change_of_variables_check: ragged sample grid");
  if (fam.steps() != n)
    throw Error(ErrorCode::invalid_argument,
                "change_of_variables_check: family grid and sample grid must match");
  if (t_steps < 0 || t_steps > n)
    throw Error(ErrorCode::invalid_argument, "change_of_variables_check: t must be 0..N steps");
  if (!fam.spec().repeats_with_period(n * fam.h()))
    throw Error(ErrorCode::invalid_argument,
                "change_of_variables_check: the doubly periodic grid needs a system repeating "
                "with period N*h");

  const int d = fam.spec().dimension();
  const int k = t_steps;
  auto wrap = [n](int i) { return ((i % n) + n) % n; };

  // Left route: apply the two-variable semigroup
  //   (e^{tB} h)(s, x) = U(x, x - t) h(s - t, x - t)
  // with U(x_j, x_j - t) accumulated as one slice product (cyclic indices,
  // U(x + T, s + T) = U(x, s)), then the change of variables
  //   (J g)(s, x) = g(s + x, x).
  std::vector<Mat> u_back(n);
  for (int j = 0; j < n; ++j) {
    Mat u = Mat::Identity(d, d);
    for (int m = 0; m < k; ++m) u = u * fam.slices()[wrap(j - m)];
    u_back[j] = u;
  }
  std::vector<std::vector<Vec>> trans(n, std::vector<Vec>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      trans[a][b] = u_back[b] * sample.values[wrap(a - k)][wrap(b - k)];
  std::vector<std::vector<Vec>> left(n, std::vector<Vec>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) left[i][j] = trans[wrap(i + j)][j];

  // Right route: change variables first, then run the one-variable operator
  // e^{tD} (the actual block shift, applied step by step) on each s-row.
  BlockShiftOperator shift = assemble_line(fam, BlockShiftOperator::Boundary::cyclic);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    GridFunction row;
    row.h = fam.h();
    row.p = 2.0;
    row.values.resize(n);
    for (int j = 0; j < n; ++j) row.values[j] = sample.values[wrap(i + j)][j];
    for (int step = 0; step < k; ++step) row = shift.apply(row);
    for (int j = 0; j < n; ++j) worst = std::max(worst, (left[i][j] - row.values[j]).norm());
  }
  return worst;
}

} // namespace evodich
