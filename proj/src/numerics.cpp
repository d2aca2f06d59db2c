#include "linsysid/numerics.hpp"

#include <string>

#include "linsysid/errors.hpp"

namespace linsysid {

void require_finite(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.cols() == 0) {
    throw DimensionMismatch(std::string(what) + ": empty matrix");
  }
  if (!m.allFinite()) {
    throw NonFiniteValue(std::string(what) + ": non-finite entry");
  }
}

bool is_symmetric(const Matrix& g) {
  if (g.rows() != g.cols()) return false;
  const double tol = 1e-10 * g.norm();
  return (g - g.transpose()).cwiseAbs().maxCoeff() <= tol;
}

Matrix spd_solve(const Matrix& g, const Matrix& rhs) {
  require_finite(g, "spd_solve");
  require_finite(rhs, "spd_solve");
  if (g.rows() != g.cols() || g.rows() != rhs.rows()) {
    throw DimensionMismatch("spd_solve: incompatible shapes");
  }
  if (!is_symmetric(g)) {
    throw NotSymmetric("spd_solve: matrix is not symmetric");
  }
  Eigen::LLT<Matrix> llt(g);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("spd_solve: non-positive pivot in Cholesky factorization");
  }
  return llt.solve(rhs);
}

double spectral_norm(const Matrix& m) {
  require_finite(m, "spectral_norm");
  if (m.isZero(0.0)) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

EigenExtremes sym_eig_extremes(const Matrix& g) {
  require_finite(g, "sym_eig_extremes");
  if (!is_symmetric(g)) {
    throw NotSymmetric("sym_eig_extremes: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(g, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

}  // namespace linsysid
