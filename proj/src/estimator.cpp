#include "linsysid/estimator.hpp"

#include <cmath>

#include "linsysid/errors.hpp"
#include "linsysid/kvtext.hpp"

namespace linsysid {

RegressionProblem assemble(const Dataset& ds) {
  if (ds.samples.empty()) throw EmptyDataset("assemble: data set has no samples");
  const int n = ds.n;
  const int p = ds.p;
  const auto count = static_cast<Eigen::Index>(ds.samples.size());
  RegressionProblem prob{Matrix(n, count), Matrix(n + p + 1, count)};
  for (Eigen::Index i = 0; i < count; ++i) {
    const Sample& s = ds.samples[static_cast<std::size_t>(i)];
    if (s.x1.size() != n || s.x0.size() != n || s.u0.size() != p) {
      throw DimensionMismatch("assemble: sample dimensions disagree with the data set");
    }
    prob.X.col(i) = s.x1;
    prob.Z.col(i) << s.x0, s.u0, 1.0;
  }
  return prob;
}

GramAccumulator::GramAccumulator(int n, int p)
    : n_(n),
      p_(p),
      xz_(Matrix::Zero(n, n + p + 1)),
      zz_(Matrix::Zero(n + p + 1, n + p + 1)),
      zhat_(n + p + 1) {
  if (n < 1 || p < 1) throw DimensionMismatch("GramAccumulator: n and p must be positive");
}

void GramAccumulator::add(const Vector& x1, const Vector& z0) {
  if (x1.size() != n_ || z0.size() != n_ + p_) {
    throw DimensionMismatch("GramAccumulator::add: sample has wrong dimensions");
  }
  zhat_.head(n_ + p_) = z0;
  zhat_(n_ + p_) = 1.0;
  xz_.noalias() += x1 * zhat_.transpose();
  zz_.noalias() += zhat_ * zhat_.transpose();
  ++count_;
}

void GramAccumulator::add(const Sample& s) {
  Vector z0(n_ + p_);
  z0 << s.x0, s.u0;
  add(s.x1, z0);
}

namespace {

Theta solve_ridge(const Matrix& xz, const Matrix& zz, double lambda, int n, int p) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw PreconditionViolated("fit: lambda must be finite and >= 0");
  }
  const Eigen::Index d = zz.rows();
  if (lambda == 0.0) {
    const EigenExtremes ext = sym_eig_extremes(zz);
    if (!(ext.min > 1e-10 * ext.max)) {
      throw SingularGram("fit: regressor Gram is singular and lambda = 0");
    }
  }
  const Matrix gram = zz + lambda * Matrix::Identity(d, d);
  Matrix y;
  try {
    y = spd_solve(gram, xz.transpose());
  } catch (const NotPositiveDefinite&) {
    throw SingularGram("fit: regularized Gram is not positive definite");
  }
  return Theta::from_assembled(y.transpose(), n, p);
}

}  // namespace

Theta fit(const GramAccumulator& acc, double lambda) {
  if (acc.count() == 0) throw EmptyDataset("fit: no samples accumulated");
  return solve_ridge(acc.xz(), acc.zz(), lambda, acc.n(), acc.p());
}

Theta fit(const RegressionProblem& prob, double lambda) {
  if (prob.samples() == 0) throw EmptyDataset("fit: no samples");
  if (prob.Z.cols() != prob.X.cols() || prob.p() < 1) {
    throw DimensionMismatch("fit: X and Z are inconsistent");
  }
  return solve_ridge(prob.X * prob.Z.transpose(), prob.Z * prob.Z.transpose(), lambda,
                     prob.n(), prob.p());
}

double estimation_error(const Theta& theta_hat, const Theta& theta_true) {
  if (theta_hat.n() != theta_true.n() || theta_hat.p() != theta_true.p()) {
    throw DimensionMismatch("estimation_error: Theta shapes differ");
  }
  return spectral_norm(theta_hat.assembled() - theta_true.assembled());
}

EstimateReport estimate(const Dataset& ds, double lambda, const std::optional<Theta>& theta_true) {
  if (ds.samples.empty()) throw EmptyDataset("estimate: data set has no samples");
  GramAccumulator acc(ds.n, ds.p);
  for (const auto& s : ds.samples) acc.add(s);
  EstimateReport report;
  report.theta_hat = fit(acc, lambda);
  report.lambda = lambda;
  report.gram_min_eig = sym_eig_extremes(acc.zz()).min;
  if (theta_true) report.error_vs_truth = estimation_error(report.theta_hat, *theta_true);
  return report;
}

void write_estimate_report(const EstimateReport& report, std::ostream& out) {
  const Matrix m = report.theta_hat.assembled();
  out << "n = " << report.theta_hat.n() << "\n";
  out << "p = " << report.theta_hat.p() << "\n";
  out << "theta_hat = ";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i + j > 0) out << ", ";
      out << format_real(m(i, j));
    }
  }
  out << "\n";
  out << "lambda = " << format_real(report.lambda) << "\n";
  out << "gram_min_eig = " << format_real(report.gram_min_eig) << "\n";
  if (report.error_vs_truth) {
    out << "error_vs_truth = " << format_real(*report.error_vs_truth) << "\n";
  }
}

ErrorDecomposition error_decomposition(const RegressionProblem& prob, double lambda,
                                       const Theta& theta_true, const Matrix& W,
                                       const Matrix& R) {
  const Eigen::Index count = prob.Z.cols();
  if (W.rows() != prob.n() || R.rows() != prob.n() || W.cols() != count || R.cols() != count ||
      theta_true.n() != prob.n() || theta_true.p() != prob.p()) {
    throw DimensionMismatch("error_decomposition: shapes disagree with the problem");
  }
  const Eigen::Index d = prob.Z.rows();
  const Matrix gram = prob.Z * prob.Z.transpose() + lambda * Matrix::Identity(d, d);
  // A G^-1 = (G^-1 A')' since G is symmetric.
  auto right_solve = [&](const Matrix& a) -> Matrix {
    return spd_solve(gram, a.transpose()).transpose();
  };
  const Matrix reg = right_solve(-lambda * theta_true.assembled());
  const Matrix noise = right_solve(W * prob.Z.transpose());
  const Matrix nonlin = right_solve(R * prob.Z.transpose());
  return {spectral_norm(reg), spectral_norm(noise), spectral_norm(nonlin),
          spectral_norm(reg + noise + nonlin)};
}

}  // namespace linsysid
