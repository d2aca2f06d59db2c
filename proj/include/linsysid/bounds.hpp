#pragma once

#include <cstddef>

namespace linsysid {

/// Inputs to the finite-sample error bound for the multi-trajectory design.
struct BoundInputs {
  int n = 0;
  int p = 0;
  std::size_t N = 0;
  double q = 0.0;
  double lambda = 0.0;
  double delta = 0.1;
  double sigma_w = 0.0;
  double beta = 0.0;
  double c = 0.0;
  double theta_norm = 0.0;

  bool enough_samples() const;    // N >= 4(n+p)
  bool q_within_sqrt_d() const;   // q <= sqrt(n+p)
  bool q_inside_ball() const;     // q < c
  bool valid() const { return enough_samples() && q_within_sqrt_d() && q_inside_ball(); }
};

struct BoundReport {
  double noise_term = 0.0;
  double nonlin_term = 0.0;
  double reg_term = 0.0;
  double total = 0.0;
  double zeta = 0.0;   // 4 lambda (n+p) / N
  double gamma = 0.0;  // lambda (n+p) / (N q^2)
  bool valid = false;
};

struct GramBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Eigenvalue bounds on ZZ' for the multi-trajectory design:
///   lambda_min >= N min{q^2 / (2(n+p)), 1/2},  lambda_max <= N max{2 q^2 / (n+p), 2}.
/// Throws PreconditionViolated when N < 4(n+p).
GramBounds gram_eig_bounds(int n, int p, std::size_t N, double q);

/// High-probability bound on ||W Z' (ZZ' + lambda I)^{-1/2}||:
///   3 sigma_w sqrt(log(9^n / delta) + (n+p+1) log(1 + 4(n+p) / (q^2 + zeta))).
double noise_bound_lemma3(int n, int p, std::size_t N, double q, double lambda, double delta,
                          double sigma_w);

/// Bound on ||R Z' (ZZ' + lambda I)^{-1}|| given |r_i| <= beta ||z||_1^2:
///   sqrt(2 beta^2 (n^2 + np) / (1 + gamma)) q + 2(n+p) sqrt(lambda N n beta^2 q^4) / (N q^2 + 2 lambda (n+p)).
/// The caller is responsible for q < c.
double nonlin_bound_lemma4(int n, int p, std::size_t N, double q, double lambda, double beta);

/// Three-term bound on ||theta_hat - theta|| holding with probability 1 - delta.
///
/// Never throws on violated preconditions; `valid` records whether
/// N >= 4(n+p), q <= sqrt(n+p) and q < c all hold. Dimension and domain errors
/// (non-positive q, delta outside (0, 1), negative parameters) still throw.
BoundReport theorem1_bound(const BoundInputs& in);

}  // namespace linsysid
