#pragma once

#include <cstddef>
#include <optional>
#include <ostream>

#include "linsysid/acquisition.hpp"
#include "linsysid/dynamics.hpp"
#include "linsysid/numerics.hpp"

namespace linsysid {

/// Batch matrices: X holds successors, Z holds regressors (x0, u0, 1), one
/// column per sample.
struct RegressionProblem {
  Matrix X;
  Matrix Z;

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(Z.rows() - X.rows() - 1); }
  std::size_t samples() const { return static_cast<std::size_t>(X.cols()); }
};

RegressionProblem assemble(const Dataset& ds);

/// Streaming sums of X Z' and Z Z'. Memory is O((n+p+1)^2) regardless of N.
class GramAccumulator {
 public:
  GramAccumulator(int n, int p);

  /// Adds one sample; z0 is (x0, u0) without the trailing one.
  void add(const Vector& x1, const Vector& z0);
  void add(const Sample& s);

  const Matrix& xz() const { return xz_; }
  const Matrix& zz() const { return zz_; }
  std::size_t count() const { return count_; }
  int n() const { return n_; }
  int p() const { return p_; }

 private:
  int n_;
  int p_;
  Matrix xz_;
  Matrix zz_;
  Vector zhat_;
  std::size_t count_ = 0;
};

/// Ridge estimate from accumulated sums: solves (ZZ' + lambda I) Y = Z X' and
/// returns Y'. With lambda = 0 the Gram must satisfy
/// lambda_min > 1e-10 * lambda_max, otherwise SingularGram is thrown.
Theta fit(const GramAccumulator& acc, double lambda);
Theta fit(const RegressionProblem& prob, double lambda);

/// ||theta_hat - theta_true|| in spectral norm over the assembled [A B o].
double estimation_error(const Theta& theta_hat, const Theta& theta_true);

struct EstimateReport {
  Theta theta_hat;
  double lambda = 0.0;
  double gram_min_eig = 0.0;
  std::optional<double> error_vs_truth;
};

EstimateReport estimate(const Dataset& ds, double lambda,
                        const std::optional<Theta>& theta_true = std::nullopt);

/// key = value text; theta_hat is written row-major.
void write_estimate_report(const EstimateReport& report, std::ostream& out);

/// Spectral norms of the three addends of theta_hat - theta:
///   -lambda Theta G^-1,  W Z' G^-1,  R Z' G^-1,  with G = ZZ' + lambda I,
/// and of their sum.
struct ErrorDecomposition {
  double reg_term = 0.0;
  double noise_term = 0.0;
  double nonlin_term = 0.0;
  double total = 0.0;
};

ErrorDecomposition error_decomposition(const RegressionProblem& prob, double lambda,
                                       const Theta& theta_true, const Matrix& W,
                                       const Matrix& R);

}  // namespace linsysid
