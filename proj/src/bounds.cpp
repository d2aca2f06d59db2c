#include "linsysid/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "linsysid/errors.hpp"

namespace linsysid {

namespace {

double dim(int n, int p) { return static_cast<double>(n + p); }

void check_domain(int n, int p, std::size_t N, double q) {
  if (n < 1 || p < 1) throw DimensionMismatch("bound: n and p must be positive");
  if (N < 1) throw PreconditionViolated("bound: N must be positive");
  if (!(q > 0.0) || !std::isfinite(q)) throw PreconditionViolated("bound: q must be positive");
}

void check_nonnegative(double value, const char* what) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw PreconditionViolated(std::string("bound: ") + what + " must be finite and >= 0");
  }
}

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionViolated("bound: delta must be in (0, 1)");
}

void check_theory_regime(int n, int p, std::size_t N, double q) {
  if (N < 4 * static_cast<std::size_t>(n + p)) {
    throw PreconditionViolated("bound: requires N >= 4(n+p)");
  }
  if (q > std::sqrt(dim(n, p))) throw PreconditionViolated("bound: requires q <= sqrt(n+p)");
}

// log(9^n / delta), computed without forming 9^n.
double confidence_log(int n, double delta) { return n * std::log(9.0) - std::log(delta); }

}  // namespace

bool BoundInputs::enough_samples() const { return N >= 4 * static_cast<std::size_t>(n + p); }
bool BoundInputs::q_within_sqrt_d() const { return q <= std::sqrt(dim(n, p)); }
bool BoundInputs::q_inside_ball() const { return q < c; }

GramBounds gram_eig_bounds(int n, int p, std::size_t N, double q) {
  check_domain(n, p, N, q);
  if (N < 4 * static_cast<std::size_t>(n + p)) {
    throw PreconditionViolated("gram_eig_bounds: requires N >= 4(n+p)");
  }
  const double d = dim(n, p);
  const double big_n = static_cast<double>(N);
  return {big_n * std::min(q * q / (2.0 * d), 0.5), big_n * std::max(2.0 * q * q / d, 2.0)};
}

double noise_bound_lemma3(int n, int p, std::size_t N, double q, double lambda, double delta,
                          double sigma_w) {
  check_domain(n, p, N, q);
  check_theory_regime(n, p, N, q);
  check_delta(delta);
  check_nonnegative(lambda, "lambda");
  check_nonnegative(sigma_w, "sigma_w");
  const double d = dim(n, p);
  const double zeta = 4.0 * lambda * d / static_cast<double>(N);
  return 3.0 * sigma_w *
         std::sqrt(confidence_log(n, delta) + (d + 1.0) * std::log1p(4.0 * d / (q * q + zeta)));
}

double nonlin_bound_lemma4(int n, int p, std::size_t N, double q, double lambda, double beta) {
  check_domain(n, p, N, q);
  check_theory_regime(n, p, N, q);
  check_nonnegative(lambda, "lambda");
  check_nonnegative(beta, "beta");
  const double d = dim(n, p);
  const double big_n = static_cast<double>(N);
  const double nn = static_cast<double>(n);
  const double gamma = lambda * d / (big_n * q * q);
  const double first = std::sqrt(2.0 * beta * beta * (nn * nn + nn * p) / (1.0 + gamma)) * q;
  const double second = 2.0 * d * std::sqrt(lambda * big_n * nn * beta * beta * std::pow(q, 4)) /
                        (big_n * q * q + 2.0 * lambda * d);
  return first + second;
}

BoundReport theorem1_bound(const BoundInputs& in) {
  check_domain(in.n, in.p, in.N, in.q);
  check_delta(in.delta);
  check_nonnegative(in.lambda, "lambda");
  check_nonnegative(in.sigma_w, "sigma_w");
  check_nonnegative(in.beta, "beta");
  check_nonnegative(in.theta_norm, "theta_norm");
  if (!(in.c > 0.0)) throw PreconditionViolated("bound: c must be positive");

  const double d = dim(in.n, in.p);
  const double big_n = static_cast<double>(in.N);
  const double nn = static_cast<double>(in.n);
  const double q2 = in.q * in.q;

  BoundReport r;
  r.zeta = 4.0 * in.lambda * d / big_n;
  r.gamma = in.lambda * d / (big_n * q2);
  r.valid = in.valid();

  r.noise_term = 5.0 * in.sigma_w *
                 std::sqrt(confidence_log(in.n, in.delta) + (d + 1.0) * std::log1p(4.0 * d / q2)) /
                 std::sqrt(big_n * q2 / d + in.lambda);
  r.nonlin_term = std::sqrt(2.0 * (nn * nn + nn * in.p) / (1.0 + r.gamma)) * in.beta * in.q;
  r.reg_term = 2.0 * d *
               (in.lambda * in.theta_norm +
                std::sqrt(in.lambda * big_n * nn * in.beta * in.beta * q2 * q2)) /
               (2.0 * in.lambda * d + big_n * q2);
  r.total = r.noise_term + r.nonlin_term + r.reg_term;
  return r;
}

}  // namespace linsysid
