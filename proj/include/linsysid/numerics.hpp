#pragma once

#include <Eigen/Dense>

namespace linsysid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Throws NonFiniteValue on NaN/Inf entries and DimensionMismatch on an empty matrix.
void require_finite(const Matrix& m, const char* what);

/// Symmetry tolerance used by every symmetric routine: 1e-10 * ||G||_F.
bool is_symmetric(const Matrix& g);

/// Solves G * S = rhs for symmetric positive-definite G.
///
/// Uses a Cholesky factorization with no pivoting and no fallback. A
/// non-positive pivot raises NotPositiveDefinite; the caller decides whether
/// to regularize and retry.
Matrix spd_solve(const Matrix& g, const Matrix& rhs);

/// Largest singular value. Zero for the zero matrix.
double spectral_norm(const Matrix& m);

struct EigenExtremes {
  double min = 0.0;
  double max = 0.0;
};

/// Smallest and largest eigenvalue of a symmetric matrix. Throws NotSymmetric.
EigenExtremes sym_eig_extremes(const Matrix& g);

}  // namespace linsysid
