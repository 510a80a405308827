#pragma once

#include "core/propagator.hpp"
#include "core/semigroup.hpp"
#include "core/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace evodich {

struct Monodromy {
  Mat matrix;                        // U over one period
  std::vector<Complex> multipliers;  // Floquet multipliers
};

// Slice product over one period (period_steps * h must be a period of the
// underlying system) and its eigenvalues.
Monodromy monodromy(const EvolutionFamily& fam, int period_steps);

// T-dagger of a left-invertible (full column rank) matrix: T†T = I and
// T†u = 0 for u orthogonal to Im T. Rank decided by a rank-revealing
// column-pivoted QR with threshold rank_tol * ||T||.
Mat moore_penrose_left_inverse(const Mat& t, double rank_tol = 1e-8);

// Contour quadrature of (1 / 2 pi i) * integral over |z| = 1 of
// (zI - T)† dz with q equispaced trapezoid nodes. With a positive
// unit-circle gap this is the Riesz projection onto the part of sigma(T)
// inside the open disc. A node where zI - T loses left invertibility is an
// error naming z.
Mat riesz_projection(const Mat& t, int q_nodes);

struct RieszResult {
  Mat projection;
  int q_used = 0;
  double idempotency_residual = 0.0;
};

// Doubles the node count from q0 until ||P^2 - P|| <= target or q_max.
RieszResult riesz_projection_adaptive(const Mat& t, int q0 = 256, int q_max = 4096,
                                      double target = 1e-8);

// Pointwise projections P(x_j) with their diagnostics.
struct ProjectionFamily {
  std::vector<double> grid;   // x_j
  std::vector<Mat> blocks;    // P_j
  double idempotency_residual = 0.0;  // max_j ||P_j^2 - P_j||
  double max_norm = 0.0;              // max_j ||P_j||
  std::vector<int> ranks;
  double continuity_modulus = 0.0;    // max_j ||P_{j+1} - P_j|| (cyclic)
};

struct ExtractedProjections {
  ProjectionFamily family;
  double off_block_mass = 0.0;  // ||P_full - blockdiag(P_j)||
};

// Splits an Nd x Nd projection into its diagonal d x d blocks. When the
// projection commutes with the weighted shift and has the multiplication
// form, the off-block mass is at rounding level; a large value is a
// diagnostic, not an error.
ExtractedProjections extract_pointwise_projections(const Mat& projection, int n, int d,
                                                   double x0 = 0.0, double h = 1.0);

enum class DichotomyVerdict { uniformly_stable, hyperbolic, spectrally_hyperbolic, none };

const char* to_string(DichotomyVerdict v);

struct DichotomyReport {
  DichotomyVerdict verdict = DichotomyVerdict::none;
  double m_constant = 1.0;   // M >= 1
  double lambda = 0.0;       // rate per unit time
  double decay_rate = 0.0;   // fitted rate on Im P
  double growth_rate = 0.0;  // fitted rate on Ker P
  double commutation_residual = 0.0;
  double fit_residual = 0.0;           // worst log deviation from the fitted model
  double kernel_invertibility = 0.0;   // min singular value of U restricted Ker->Ker
  int rank = 0;
  bool rank_constant = true;
  bool degenerate = false;
  std::string provenance = "user-supplied";
  std::string detail;
};

// Checks the dichotomy conditions for a given projection family on the
// family's grid: commutation P(x)U(x,s) = U(x,s)P(s), the two exponential
// estimates with a single fitted (M, lambda), and (in finite dimensions)
// invertibility of U restricted to the kernel bundle.
DichotomyReport verify_dichotomy(const EvolutionFamily& fam, const ProjectionFamily& p,
                                 double tol = 1e-6);

struct Theorem6Report {
  double idempotency = 0.0;           // ||P^2 - P||
  double commutation = 0.0;           // (1) ||TP - PT||
  double stable_radius = 0.0;         // (2) spectral radius of T on Im P
  double kernel_margin = 0.0;         // (3) smallest singular value of T on Ker P
  double dagger_radius = 0.0;         // (3) spectral radius of (T on Ker P)†
  double multiplication_leakage = 0.0;  // (4)
  int intersection_steps = 0;         // n at which the image chain stabilized
  int kernel_dim = 0;
  int complement_dim = 0;             // dim(Ker P minus the stable image chain)
  bool condition1 = false, condition2 = false, condition3 = false, condition4 = false;
};

// Residual report for the four projection conditions, with T raised to
// t_steps. Condition (4) multiplies cell-wise: block_dim is the size of one
// grid cell (d for an operator on d-vector-valued grid functions). n_max < 0
// derives the image-chain cap from the cell count.
Theorem6Report check_theorem6_conditions(const Mat& t, const Mat& projection, int t_steps = 1,
                                         double tol = 1e-8, int n_max = -1, int block_dim = 1);

} // namespace evodich
