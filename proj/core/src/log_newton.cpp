#include "log_newton.hpp"

#include <cmath>

#include "xyzbethe/errors.hpp"

namespace xyzbethe::detail {

cplx reduce_log(cplx z) { return {z.real(), std::remainder(z.imag(), 2.0 * kPi)}; }

namespace {

struct LogTerm {
  cplx log_f;
  cplx dlog_f;
};

LogTerm log_term(const LogSystem& sys, cplx z, double pole_tol) {
  const KernelValue kv = sys.kernel(z);
  if (!(std::abs(kv.f) >= pole_tol * sys.pole_scale)) {
    throw PoleProximity("Bethe equation factor vanishes");
  }
  return {std::log(kv.f), kv.df / kv.f};
}

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (cplx z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

SystemEval evaluate(const LogSystem& sys, std::span<const cplx> x, double pole_tol, bool with_jacobian) {
  const std::size_t m = x.size();
  SystemEval out;
  out.residual.assign(m, sys.twist);
  if (with_jacobian) out.jacobian = ComplexMatrix(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    cplx r = sys.twist;
    cplx diag = 0.0;
    for (const auto& s : sys.site_terms) {
      const LogTerm t = log_term(sys, x[j] + s.shift, pole_tol);
      r += s.coeff * t.log_f;
      diag += s.coeff * t.dlog_f;
    }
    for (std::size_t k = 0; k < m; ++k) {
      if (k == j) continue;
      const cplx d = x[j] - x[k];
      const LogTerm a = log_term(sys, d - sys.pair_shift, pole_tol);
      const LogTerm b = log_term(sys, d + sys.pair_shift, pole_tol);
      r += a.log_f - b.log_f;
      const cplx phi = a.dlog_f - b.dlog_f;
      diag += phi;
      if (with_jacobian) out.jacobian(j, k) = -phi;
    }
    if (with_jacobian) out.jacobian(j, j) = diag;
    out.residual[j] = reduce_log(r);
  }
  out.norm = max_abs(out.residual);
  if (!std::isfinite(out.norm)) throw PoleProximity("non-finite Bethe residual");
  return out;
}

NewtonRun newton(const LogSystem& sys, std::vector<cplx> x, const NewtonSettings& settings) {
  NewtonRun run;
  auto wrap_all = [&](std::vector<cplx>& v) {
    if (sys.wrap)
      for (auto& z : v) z = sys.wrap(z);
  };
  auto bounded = [&](const std::vector<cplx>& v) {
    if (!sys.in_bounds) return true;
    for (cplx z : v)
      if (!sys.in_bounds(z)) return false;
    return true;
  };
  wrap_all(x);
  if (x.empty()) {
    run.x = std::move(x);
    return run;
  }

  SystemEval ev;
  try {
    ev = evaluate(sys, x, settings.pole_tol, true);
  } catch (const PoleProximity&) {
    run.x = std::move(x);
    run.failure = NewtonFailure::PoleProximity;
    return run;
  } catch (const Error&) {
    // Series failure far outside the fundamental region.
    run.x = std::move(x);
    run.failure = NewtonFailure::Diverged;
    return run;
  }

  for (int it = 0;; ++it) {
    run.iterations = it;
    run.norm = ev.norm;
    if (ev.norm < settings.tol) {
      run.x = std::move(x);
      return run;
    }
    if (it >= settings.max_iters) break;

    std::vector<cplx> delta(ev.residual.size());
    for (std::size_t j = 0; j < delta.size(); ++j) delta[j] = -ev.residual[j];
    if (!solve_small(ev.jacobian, delta, 1e-13)) {
      run.x = std::move(x);
      run.failure = NewtonFailure::JacobianSingular;
      return run;
    }
    const double step = max_abs(delta);
    if (!std::isfinite(step)) {
      run.x = std::move(x);
      run.failure = NewtonFailure::JacobianSingular;
      return run;
    }
    if (step > settings.max_step) {
      for (auto& d : delta) d *= settings.max_step / step;
    }

    bool accepted = false;
    bool pole_hit = false;
    double t = 1.0;
    for (int ls = 0; ls < 12; ++ls, t *= 0.5) {
      std::vector<cplx> trial(x.size());
      for (std::size_t j = 0; j < x.size(); ++j) trial[j] = x[j] + t * delta[j];
      wrap_all(trial);
      if (!bounded(trial)) continue;
      try {
        SystemEval tev = evaluate(sys, trial, settings.pole_tol, true);
        if (tev.norm < (1.0 - 1e-4 * t) * ev.norm) {
          x = std::move(trial);
          ev = std::move(tev);
          accepted = true;
          break;
        }
      } catch (const PoleProximity&) {
        pole_hit = true;
      } catch (const Error&) {
      }
    }
    if (!accepted) {
      run.x = std::move(x);
      run.failure = pole_hit ? NewtonFailure::PoleProximity
                             : (bounded(run.x) ? NewtonFailure::MaxIters : NewtonFailure::Diverged);
      return run;
    }
  }
  run.x = std::move(x);
  run.failure = NewtonFailure::MaxIters;
  return run;
}

}  // namespace xyzbethe::detail
