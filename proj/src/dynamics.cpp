#include "linsysid/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

#include "linsysid/errors.hpp"

namespace linsysid {

Matrix Theta::assembled() const {
  Matrix m(n(), n() + p() + 1);
  m << A, B, o;
  return m;
}

Theta Theta::from_assembled(const Matrix& m, int n, int p) {
  if (m.rows() != n || m.cols() != n + p + 1) {
    throw DimensionMismatch("Theta::from_assembled: expected n x (n+p+1)");
  }
  return {m.leftCols(n), m.middleCols(n, p), m.col(n + p)};
}

SystemModel::SystemModel(std::string name, int n, int p, DynamicsFn f, Theta theta_true,
                         double remainder_radius, std::optional<double> remainder_coeff)
    : name_(std::move(name)),
      n_(n),
      p_(p),
      f_(std::move(f)),
      theta_(std::move(theta_true)),
      radius_(remainder_radius),
      beta_(remainder_coeff) {
  if (n_ < 1 || p_ < 1) {
    throw DimensionMismatch("SystemModel: n and p must be positive");
  }
  if (theta_.A.rows() != n_ || theta_.A.cols() != n_ || theta_.B.rows() != n_ ||
      theta_.B.cols() != p_ || theta_.o.size() != n_) {
    throw DimensionMismatch("SystemModel: theta_true does not match (n, p)");
  }
  require_finite(theta_.assembled(), "SystemModel theta_true");
  if (!(radius_ > 0.0)) {
    throw PreconditionViolated("SystemModel: remainder radius must be positive");
  }
  if (beta_ && !(*beta_ >= 0.0)) {
    throw PreconditionViolated("SystemModel: remainder coefficient must be nonnegative");
  }
  const Vector f0 = evaluate(Vector::Zero(z_dim()));
  if ((f0 - theta_.o).cwiseAbs().maxCoeff() > 1e-12) {
    throw PreconditionViolated("SystemModel: f(0) differs from the offset column o");
  }
}

Vector SystemModel::evaluate(const Vector& z) const {
  if (z.size() != z_dim()) {
    throw DimensionMismatch("SystemModel::evaluate: z has wrong dimension");
  }
  Vector next = f_(z);
  if (next.size() != n_) {
    throw DimensionMismatch("SystemModel::evaluate: dynamics returned wrong dimension");
  }
  return next;
}

Vector SystemModel::evaluate(const Vector& x, const Vector& u) const {
  if (x.size() != n_ || u.size() != p_) {
    throw DimensionMismatch("SystemModel::evaluate: x or u has wrong dimension");
  }
  Vector z(z_dim());
  z << x, u;
  return evaluate(z);
}

Vector SystemModel::step(const Vector& x, const Vector& u, const Vector& w) const {
  if (w.size() != n_) {
    throw DimensionMismatch("SystemModel::step: w has wrong dimension");
  }
  return evaluate(x, u) + w;
}

Vector SystemModel::remainder(const Vector& z) const {
  const Vector fz = evaluate(z);
  const auto x = z.head(n_);
  const auto u = z.tail(p_);
  return fz - (theta_.A * x + theta_.B * u + theta_.o);
}

namespace {

double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double result = 0.0;
  double scale = 1.0 / static_cast<double>(base);
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale /= static_cast<double>(base);
  }
  return result;
}

constexpr std::array<std::uint64_t, 16> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                                   23, 29, 31, 37, 41, 43, 47, 53};

// Point of the Halton sequence mapped to the cube [-1, 1]^d.
Vector halton_cube_point(std::uint64_t index, int dim) {
  Vector h(dim);
  for (int k = 0; k < dim; ++k) {
    const std::uint64_t base = kPrimes[static_cast<std::size_t>(k) % kPrimes.size()];
    // Dimensions beyond the prime table reuse a base with a shifted index.
    const std::uint64_t shift = 7919 * (static_cast<std::size_t>(k) / kPrimes.size());
    h(k) = 2.0 * radical_inverse(index + shift, base) - 1.0;
  }
  return h;
}

double remainder_ratio(const SystemModel& sys, const Vector& z) {
  const double l1 = z.lpNorm<1>();
  if (l1 == 0.0) return 0.0;
  return sys.remainder(z).cwiseAbs().maxCoeff() / (l1 * l1);
}

}  // namespace

double estimate_beta(const SystemModel& sys, double c, int samples) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw PreconditionViolated("estimate_beta: c must be positive and finite");
  }
  if (samples < 1000) {
    throw PreconditionViolated("estimate_beta: at least 1000 samples required");
  }
  const int d = sys.z_dim();

  std::vector<Vector> directions;
  for (int k = 0; k < d; ++k) {
    for (double sign : {1.0, -1.0}) {
      Vector e = Vector::Zero(d);
      e(k) = sign;
      directions.push_back(std::move(e));
    }
  }
  constexpr int kShellDirections = 2000;
  for (int k = 1; k <= kShellDirections; ++k) {
    Vector h = halton_cube_point(static_cast<std::uint64_t>(k), d);
    const double l1 = h.lpNorm<1>();
    if (l1 > 0.0) directions.push_back(h / l1);
  }

  std::vector<double> radii;
  for (int k = 1; k <= 9; ++k) radii.push_back(c * k / 10.0);
  radii.push_back(c * (1.0 - 1e-9));

  double best = 0.0;
  for (double r : radii) {
    for (const auto& dir : directions) {
      best = std::max(best, remainder_ratio(sys, r * dir));
    }
  }
  int accepted = 0;
  for (std::uint64_t k = kShellDirections + 1; accepted < samples; ++k) {
    const Vector h = halton_cube_point(k, d);
    if (h.lpNorm<1>() >= 1.0) continue;
    ++accepted;
    best = std::max(best, remainder_ratio(sys, c * h));
  }
  return best;
}

SystemModel builtin_pendulum() {
  // Euler step dt = 0.05 and gravity term dt * g / l = 0.49.
  constexpr double dt = 0.05;
  constexpr double gravity = 0.49;
  Theta theta;
  theta.A.resize(2, 2);
  theta.A << 1.0, dt, -gravity, 1.0;
  theta.B.resize(2, 1);
  theta.B << 0.0, dt;
  theta.o = Vector::Zero(2);
  auto f = [](const Vector& z) {
    Vector next(2);
    next(0) = z(0) + dt * z(1);
    next(1) = -gravity * std::sin(z(0)) + z(1) + dt * z(2);
    return next;
  };
  // |sin x - x| <= |x|^3 / 6 <= ||z||_1^2 / 6 for ||z||_1 < 1.
  return SystemModel("pendulum", 2, 1, f, std::move(theta), 1.0, gravity / 6.0);
}

SystemModel builtin_strong() {
  Theta theta;
  theta.A.resize(2, 2);
  theta.A << 0.9, 0.5, 0.0, 0.8;
  theta.B.resize(2, 1);
  theta.B << 1.0, 1.0;
  theta.o = Vector::Ones(2);
  auto f = [](const Vector& z) {
    const double x1 = z(0);
    const double x2 = z(1);
    const double u = z(2);
    Vector next(2);
    next(0) = 0.9 * x1 + 0.5 * x2 + u + x1 * x1 * x1 + std::pow(x2, 5) + 1.0;
    next(1) = 0.8 * x2 + u + x1 * x2 + 1.0;
    return next;
  };
  // On ||z||_1 < 0.5: |x1^3| <= c||z||^2, |x2^5| <= c^3||z||^2, |x1 x2| <= ||z||^2/4.
  return SystemModel("strong", 2, 1, f, std::move(theta), 0.5, 0.5 + 0.125);
}

SystemModel linear_system(std::string name, Matrix A, Matrix B) {
  const int n = static_cast<int>(A.rows());
  const int p = static_cast<int>(B.cols());
  Theta theta{A, B, Vector::Zero(n)};
  auto f = [A = std::move(A), B = std::move(B), n](const Vector& z) -> Vector {
    return A * z.head(n) + B * z.tail(z.size() - n);
  };
  return SystemModel(std::move(name), n, p, f, std::move(theta),
                     std::numeric_limits<double>::infinity(), 0.0);
}

SystemModel random_linear(int n, int p, double spectral_radius_cap, std::uint64_t seed) {
  if (n < 1 || p < 1) {
    throw DimensionMismatch("random_linear: n and p must be positive");
  }
  if (!(spectral_radius_cap > 0.0)) {
    throw PreconditionViolated("random_linear: spectral radius cap must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix A(n, n);
  Matrix B(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = normal(rng);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) B(i, j) = normal(rng);
  }
  const double rho = Eigen::EigenSolver<Matrix>(A, false).eigenvalues().cwiseAbs().maxCoeff();
  if (rho > 0.0) A *= spectral_radius_cap / rho;
  return linear_system("linear", std::move(A), std::move(B));
}

}  // namespace linsysid
