#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "linsysid/numerics.hpp"

namespace linsysid {

/// Linear model [A B o] of a system around z = 0.
struct Theta {
  Matrix A;
  Matrix B;
  Vector o;

  int n() const { return static_cast<int>(A.rows()); }
  int p() const { return static_cast<int>(B.cols()); }

  /// The n x (n+p+1) block matrix [A B o].
  Matrix assembled() const;
  static Theta from_assembled(const Matrix& m, int n, int p);
};

/// Noiseless successor map z = (x, u) -> x_next.
using DynamicsFn = std::function<Vector(const Vector& z)>;

/// Discrete-time nonlinear system with a known linearization at the origin.
///
/// The remainder is always f(z) - (A x + B u + o), so it cannot disagree with
/// theta_true. `remainder_radius` and `remainder_coeff` certify
/// |r_i(z)| <= beta * ||z||_1^2 on the open l1 ball of that radius; the radius
/// may be +inf for exactly linear systems.
class SystemModel {
 public:
  SystemModel(std::string name, int n, int p, DynamicsFn f, Theta theta_true,
              double remainder_radius, std::optional<double> remainder_coeff);

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  int p() const { return p_; }
  int z_dim() const { return n_ + p_; }
  const Theta& theta_true() const { return theta_; }
  double remainder_radius() const { return radius_; }
  const std::optional<double>& remainder_coeff() const { return beta_; }

  /// f(z) without noise.
  Vector evaluate(const Vector& z) const;
  Vector evaluate(const Vector& x, const Vector& u) const;

  /// f(x, u) + w.
  Vector step(const Vector& x, const Vector& u, const Vector& w) const;

  /// Higher-order residual f(z) - (A x + B u + o).
  Vector remainder(const Vector& z) const;

 private:
  std::string name_;
  int n_;
  int p_;
  DynamicsFn f_;
  Theta theta_;
  double radius_;
  std::optional<double> beta_;
};

/// Sampled lower estimate of the remainder coefficient on the l1 ball of radius c.
///
/// Evaluates max_i |r_i(z)| / ||z||_1^2 on l1 shells at radii c/10, ..., c(1-1e-9)
/// crossed with signed coordinate and quasi-random directions, plus `samples`
/// Halton interior points. Deterministic.
double estimate_beta(const SystemModel& sys, double c, int samples = 10000);

/// Euler-discretized pendulum (m = l = 1, dt = 0.05), certified c = 1, beta = 0.49/6.
SystemModel builtin_pendulum();

/// Cubic/quintic benchmark with offset [1; 1], certified c = 0.5, beta = 0.625.
SystemModel builtin_strong();

/// Random linear system, A scaled to the given spectral radius, o = 0, beta = 0.
SystemModel random_linear(int n, int p, double spectral_radius_cap, std::uint64_t seed);

/// Linear system with explicit matrices and zero offset.
SystemModel linear_system(std::string name, Matrix A, Matrix B);

}  // namespace linsysid
