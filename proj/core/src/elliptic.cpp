#include "xyzbethe/elliptic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "xyzbethe/errors.hpp"

namespace xyzbethe {

namespace {

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(int alpha) {
  if (alpha < 1 || alpha > 4) {
    throw InvalidParameters("theta index must be in 1..4");
  }
}

// Shared driver. term(n) returns the n-th summand, log_bound(n) a bound on
// log|term(n)| that is concave in n, so once consecutive bounds shrink by a
// factor two they keep doing so and the tail is at most twice the next one.
template <class Term, class LogBound>
ThetaResult sum_series(cplx head, int first, Term term, LogBound log_bound,
                       const SeriesPolicy& policy) {
  ThetaResult out;
  cplx sum = head;
  // Rounding already limits the sum to eps * largest term, so the tail is
  // measured against that too.
  double scale = std::max(1.0, std::abs(head));
  int n = first;
  for (int used = 0; used < policy.max_terms; ++used, ++n) {
    const cplx t = term(n);
    sum += t;
    scale = std::max(scale, std::abs(t));
    out.terms = used + 1;
    const double next = log_bound(n + 1);
    const double ratio = next - log_bound(n);
    if (ratio <= -kLn2) {
      const double tail = 2.0 * std::exp(next);
      out.tail_bound = tail;
      if (tail <= policy.tol * scale) {
        out.converged = true;
        break;
      }
    } else {
      out.tail_bound = kInf;
    }
  }
  out.value = sum;
  return out;
}

}  // namespace

Nome Nome::from_log(cplx log_q) {
  if (!(log_q.real() < 0.0)) {
    throw NonConvergentNome("nome modulus must be < 1");
  }
  return Nome(log_q, false);
}

Nome Nome::from_value(cplx q) {
  const double r = std::abs(q);
  if (!(r < 1.0)) {
    throw NonConvergentNome("nome modulus must be < 1");
  }
  if (r == 0.0) {
    return Nome(cplx(-kInf, 0.0), true);
  }
  return Nome(std::log(q), false);
}

ThetaResult theta_series(int alpha, cplx u, const Nome& q, const SeriesPolicy& policy) {
  check_alpha(alpha);
  if (q.is_zero()) {
    ThetaResult r;
    r.value = (alpha <= 2) ? cplx(0.0) : cplx(1.0);
    r.terms = 1;
    r.converged = true;
    return r;
  }
  const cplx lq = q.log();
  const double rho = lq.real();
  const double y = std::abs(u.imag());

  if (alpha == 1 || alpha == 2) {
    auto log_bound = [&](int n) {
      const double h = n + 0.5;
      return kLn2 + h * h * rho + (2.0 * n + 1.0) * y;
    };
    if (alpha == 1) {
      // 2 (-1)^n q^{h^2} sin((2n+1)u) = -i (-1)^n (e^{A+iw} - e^{A-iw})
      auto term = [&](int n) {
        const double h = n + 0.5;
        const cplx a = h * h * lq;
        const cplx w = (2.0 * n + 1.0) * kI * u;
        const cplx s = std::exp(a + w) - std::exp(a - w);
        return ((n % 2) ? 1.0 : -1.0) * kI * s;
      };
      return sum_series(cplx(0.0), 0, term, log_bound, policy);
    }
    auto term = [&](int n) {
      const double h = n + 0.5;
      const cplx a = h * h * lq;
      const cplx w = (2.0 * n + 1.0) * kI * u;
      return std::exp(a + w) + std::exp(a - w);
    };
    return sum_series(cplx(0.0), 0, term, log_bound, policy);
  }

  auto log_bound = [&](int n) {
    const double dn = n;
    return kLn2 + dn * dn * rho + 2.0 * dn * y;
  };
  const double sign = (alpha == 4) ? -1.0 : 1.0;
  auto term = [&](int n) {
    const double dn = n;
    const cplx a = dn * dn * lq;
    const cplx w = 2.0 * dn * kI * u;
    const double s = (n % 2) ? sign : 1.0;
    return s * (std::exp(a + w) + std::exp(a - w));
  };
  return sum_series(cplx(1.0), 1, term, log_bound, policy);
}

ThetaResult theta1_prime_series(cplx u, const Nome& q, const SeriesPolicy& policy) {
  if (q.is_zero()) {
    ThetaResult r;
    r.value = 0.0;
    r.terms = 1;
    r.converged = true;
    return r;
  }
  const cplx lq = q.log();
  const double rho = lq.real();
  const double y = std::abs(u.imag());
  auto log_bound = [&](int n) {
    const double h = n + 0.5;
    return kLn2 + std::log(2.0 * n + 1.0) + h * h * rho + (2.0 * n + 1.0) * y;
  };
  auto term = [&](int n) {
    const double h = n + 0.5;
    const double k = 2.0 * n + 1.0;
    const cplx a = h * h * lq;
    const cplx w = k * kI * u;
    const cplx c = std::exp(a + w) + std::exp(a - w);
    return ((n % 2) ? -k : k) * c;
  };
  return sum_series(cplx(0.0), 0, term, log_bound, policy);
}

namespace {

cplx checked(const ThetaResult& r, const char* name) {
  if (!r.converged) {
    std::ostringstream os;
    os << name << ": series not converged after " << r.terms
       << " terms (tail bound " << r.tail_bound << ")";
    throw TruncationFailure(os.str(), r.tail_bound);
  }
  return r.value;
}

}  // namespace

cplx theta(int alpha, cplx u, const Nome& q, const SeriesPolicy& policy) {
  return checked(theta_series(alpha, u, q, policy), "theta");
}

cplx theta(int alpha, cplx u, cplx q, const SeriesPolicy& policy) {
  return theta(alpha, u, Nome::from_value(q), policy);
}

cplx theta1_prime(cplx u, const Nome& q, const SeriesPolicy& policy) {
  return checked(theta1_prime_series(u, q, policy), "theta1_prime");
}

cplx theta1_prime(cplx u, cplx q, const SeriesPolicy& policy) {
  return theta1_prime(u, Nome::from_value(q), policy);
}

EllipticContext::EllipticContext(cplx tau, SeriesPolicy policy, double max_nome)
    : tau_(tau),
      q_single_(Nome::from_log(kI * kPi * (tau.imag() > 0.0 ? tau : cplx(0.0, 1.0)))),
      q_double_(Nome::from_log(2.0 * kI * kPi * (tau.imag() > 0.0 ? tau : cplx(0.0, 1.0)))),
      policy_(policy) {
  if (!(tau.imag() > 0.0)) {
    throw InvalidParameters("Im tau must be positive");
  }
  if (q_single_.modulus() > max_nome) {
    throw InvalidParameters("|exp(i pi tau)| exceeds the supported nome bound");
  }
  if (policy.max_terms < 1 || !(policy.tol > 0.0)) {
    throw InvalidParameters("series policy needs max_terms >= 1 and tol > 0");
  }
}

cplx ell(int alpha, cplx u, const EllipticContext& ctx) {
  return theta(alpha, kPi * u, ctx.q_single(), ctx.policy());
}

cplx bar_ell(int alpha, cplx u, const EllipticContext& ctx) {
  return theta(alpha, kPi * u, ctx.q_double(), ctx.policy());
}

cplx ell1_prime(cplx u, const EllipticContext& ctx) {
  return kPi * theta1_prime(kPi * u, ctx.q_single(), ctx.policy());
}

Ell1Pair ell1_with_derivative(cplx u, const EllipticContext& ctx) {
  // Both series share the exponentials; fuse them for the hot Newton loop.
  const Nome& q = ctx.q_single();
  const SeriesPolicy& policy = ctx.policy();
  const cplx lq = q.log();
  const cplx z = kPi * u;
  const double rho = lq.real();
  const double y = std::abs(z.imag());
  cplx value = 0.0;
  cplx deriv = 0.0;
  bool converged = false;
  double tail = kInf;
  double scale = 1.0;
  for (int n = 0; n < policy.max_terms; ++n) {
    const double h = n + 0.5;
    const double k = 2.0 * n + 1.0;
    const cplx a = h * h * lq;
    const cplx w = k * kI * z;
    const cplx ep = std::exp(a + w);
    const cplx em = std::exp(a - w);
    const double s = (n % 2) ? -1.0 : 1.0;
    value += -s * kI * (ep - em);
    deriv += s * k * (ep + em);
    scale = std::max(scale, std::abs(ep) + std::abs(em));
    const double hn = h + 1.0;
    const double next = kLn2 + std::log(k + 2.0) + hn * hn * rho + (k + 2.0) * y;
    const double cur = kLn2 + std::log(k) + h * h * rho + k * y;
    if (next - cur <= -kLn2) {
      tail = 2.0 * std::exp(next);
      if (tail <= policy.tol * scale) {
        converged = true;
        break;
      }
    }
  }
  if (!converged) {
    throw TruncationFailure("ell1: series not converged", tail);
  }
  return {value, kPi * deriv};
}

}  // namespace xyzbethe
