#pragma once

#include <complex>

namespace xyzbethe {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Truncation policy of the theta series. A series is cut once a rigorous
// bound on the remaining tail drops below tol times the largest of 1, the
// partial sum and the terms summed so far.
struct SeriesPolicy {
  double tol = 1e-14;
  int max_terms = 64;
};

// Nome stored through its logarithm so that q^((n+1/2)^2) is computed as
// exp((n+1/2)^2 * log_q) without choosing a branch of the root.
class Nome {
 public:
  static Nome from_log(cplx log_q);
  // Principal branch of log(q). Throws NonConvergentNome if |q| >= 1.
  static Nome from_value(cplx q);

  cplx log() const noexcept { return log_q_; }
  cplx value() const { return std::exp(log_q_); }
  double modulus() const { return std::exp(log_q_.real()); }
  bool is_zero() const noexcept { return zero_; }

 private:
  Nome(cplx log_q, bool zero) : log_q_(log_q), zero_(zero) {}
  cplx log_q_;
  bool zero_;
};

struct ThetaResult {
  cplx value;
  double tail_bound = 0.0;  // bound on |exact - value|
  int terms = 0;
  bool converged = false;
};

// Raw series evaluation, never throws on truncation: the caller inspects
// `converged` and `tail_bound`. alpha in 1..4.
ThetaResult theta_series(int alpha, cplx u, const Nome& q, const SeriesPolicy& policy = {});
ThetaResult theta1_prime_series(cplx u, const Nome& q, const SeriesPolicy& policy = {});

// Jacobi theta functions with the Watson normalisation
//   theta_1(u,q) = 2 sum_n (-1)^n q^((n+1/2)^2) sin((2n+1)u), ...
// Throws TruncationFailure if the policy is exhausted before the tolerance.
cplx theta(int alpha, cplx u, const Nome& q, const SeriesPolicy& policy = {});
cplx theta(int alpha, cplx u, cplx q, const SeriesPolicy& policy = {});

// d/du theta_1(u, q), term-wise.
cplx theta1_prime(cplx u, const Nome& q, const SeriesPolicy& policy = {});
cplx theta1_prime(cplx u, cplx q, const SeriesPolicy& policy = {});

// Modular parameter tau together with the two nomes used by the model:
// q_single = exp(i pi tau) for ell_alpha, q_double = exp(2 i pi tau) for
// bar_ell_alpha. Immutable once built.
class EllipticContext {
 public:
  // Throws InvalidParameters if Im tau <= 0 or |q_single| > max_nome.
  explicit EllipticContext(cplx tau, SeriesPolicy policy = {}, double max_nome = 0.95);

  cplx tau() const noexcept { return tau_; }
  const Nome& q_single() const noexcept { return q_single_; }
  const Nome& q_double() const noexcept { return q_double_; }
  const SeriesPolicy& policy() const noexcept { return policy_; }

 private:
  cplx tau_;
  Nome q_single_;
  Nome q_double_;
  SeriesPolicy policy_;
};

// ell_alpha(u) = theta_alpha(pi u, e^{i pi tau})
cplx ell(int alpha, cplx u, const EllipticContext& ctx);
// bar_ell_alpha(u) = theta_alpha(pi u, e^{2 i pi tau})
cplx bar_ell(int alpha, cplx u, const EllipticContext& ctx);
// d/du ell_1(u) = pi * theta_1'(pi u, e^{i pi tau})
cplx ell1_prime(cplx u, const EllipticContext& ctx);

// ell_1 and its u-derivative from one pass over the series.
struct Ell1Pair {
  cplx value;
  cplx derivative;
};
Ell1Pair ell1_with_derivative(cplx u, const EllipticContext& ctx);

}  // namespace xyzbethe
