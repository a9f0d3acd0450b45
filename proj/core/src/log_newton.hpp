#pragma once

#include <atomic>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "xyzbethe/bae_solver.hpp"
#include "xyzbethe/linalg.hpp"

namespace xyzbethe::detail {

struct KernelValue {
  cplx f;
  cplx df;
};

// Bethe equations in the common shape
//   twist + sum_s c_s log f(x_j + a_s) + sum_{k != j} [log f(x_j - x_k - d) - log f(x_j - x_k + d)] = 0 mod 2 pi i
// with f = ell_1 (elliptic) or sinh (trigonometric).
struct LogSystem {
  std::function<KernelValue(cplx)> kernel;
  double pole_scale = 1.0;  // |f(z)| < pole_tol * pole_scale counts as a pole
  struct SiteTerm {
    double coeff;
    cplx shift;
  };
  std::vector<SiteTerm> site_terms;
  cplx pair_shift{0.0, 0.0};
  cplx twist{0.0, 0.0};
  // Maps x to an equivalent point (period of f); may be empty.
  std::function<cplx(cplx)> wrap;
  // False when x has run away from any sensible region.
  std::function<bool(cplx)> in_bounds;
};

cplx reduce_log(cplx z);

// Elliptic Bethe equations at twist beta; the singular variant is the system
// for the nu roots after the pair +-eta/2 has been factored out.
LogSystem elliptic_system(const XyzModel& model, int beta, bool singular);

struct SystemEval {
  std::vector<cplx> residual;
  ComplexMatrix jacobian;
  double norm = 0.0;  // max |residual_j|
};

// Throws PoleProximity.
SystemEval evaluate(const LogSystem& sys, std::span<const cplx> x, double pole_tol, bool with_jacobian);

struct NewtonSettings {
  double tol = 1e-12;
  int max_iters = 80;
  double max_step = 0.2;
  double pole_tol = 1e-9;
};

struct NewtonRun {
  std::vector<cplx> x;
  NewtonFailure failure = NewtonFailure::None;
  int iterations = 0;
  double norm = 0.0;
  bool converged() const noexcept { return failure == NewtonFailure::None; }
};

// Damped Newton with backtracking on max|residual|.
NewtonRun newton(const LogSystem& sys, std::vector<cplx> x, const NewtonSettings& settings);

// Runs fn(i) for i in [0, n) on up to `threads` workers.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace xyzbethe::detail
