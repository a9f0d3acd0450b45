#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xyzbethe/lattice_model.hpp"

namespace xyzbethe {

enum class SolutionKind { Regular, Singular };

std::string to_string(SolutionKind kind);

// One solution of the elliptic Bethe equations. For singular solutions the
// first two roots are the bound pair (eta/2, -eta/2) and nu_roots holds the
// remaining M-2 roots.
struct BetheSolution {
  std::vector<cplx> roots;
  int beta = 0;
  int k = 0;
  int p = 0;
  double residual_norm = 0.0;
  double sum_defect = 0.0;  // |sin(pi (2 sum(lambda) - beta tau))|
  SolutionKind kind = SolutionKind::Regular;
  std::vector<cplx> nu_roots;
  cplx energy{0.0, 0.0};
};

struct SolverConfig {
  double newton_tol = 1e-12;
  int max_newton_iters = 80;
  int n_starts = 0;     // per beta; 0 picks a default from M
  int beta_range = -1;  // scan beta in [-beta_range, beta_range]; < 0 means M
  double dedup_tol = 1e-7;
  double sum_rule_tol = 1e-8;
  double pole_tol = 1e-9;
  double collision_tol = 1e-6;
  double max_step = 0.2;
  int symmetry_rounds = 3;  // re-seed from images of the solutions found so far
  std::uint64_t rng_seed = 20240601;
  int threads = 1;

  void validate(int num_roots) const;
  int effective_beta_range(int num_roots) const { return beta_range < 0 ? num_roots : beta_range; }
  int effective_starts(int num_unknowns) const;
};

// Log-form residuals of e^{2 beta gamma} [l1(x+eta/2)/l1(x-eta/2)]^N prod ... = 1,
// reduced to Im in (-pi, pi]. Throws PoleProximity.
std::vector<cplx> bae_residual(std::span<const cplx> roots, int beta, const XyzModel& model,
                               double pole_tol = 1e-9);
std::vector<cplx> bae_residual(std::span<const cplx> roots, int beta, const ModelParams& params,
                               double pole_tol = 1e-9);
// Reduced equations for the roots accompanying a bound pair.
std::vector<cplx> singular_bae_residual(std::span<const cplx> nu_roots, int beta, const XyzModel& model,
                                        double pole_tol = 1e-9);

// Both sides of the product form of the Bethe equations, row by row.
struct ProductFormRow {
  cplx lhs;
  cplx rhs;
};
std::vector<ProductFormRow> bae_product_form(std::span<const cplx> roots, int beta, const XyzModel& model);

struct SumRuleResult {
  double lattice_distance = 0.0;  // |2 sum - k - p tau|
  double sin_defect = 0.0;        // |sin(pi (2 sum - beta tau))|
  int k = 0;
  int p = 0;
};
SumRuleResult sum_rule(std::span<const cplx> roots, int beta, cplx tau);

enum class NewtonFailure { None, MaxIters, JacobianSingular, PoleProximity, SingularApproach, Collision, Diverged };
std::string to_string(NewtonFailure f);

struct NewtonOutcome {
  std::optional<BetheSolution> solution;
  NewtonFailure failure = NewtonFailure::None;
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged() const noexcept { return solution.has_value(); }
};

NewtonOutcome newton_solve(std::span<const cplx> seed_roots, int beta, const XyzModel& model,
                           const SolverConfig& config);
NewtonOutcome newton_solve(std::span<const cplx> seed_roots, int beta, const ModelParams& params,
                           const SolverConfig& config);
NewtonOutcome newton_solve_singular(std::span<const cplx> seed_nu, int beta, const XyzModel& model,
                                    const SolverConfig& config);

struct SolveStats {
  long seeds = 0;
  long converged = 0;
  long rejected_sum_rule = 0;
  long rejected_collision = 0;
  long other_failures = 0;
  long beta_mismatches = 0;  // lattice sum rule holds but p != beta
  long duplicates = 0;
};

struct SolveResult {
  std::vector<BetheSolution> solutions;
  SolveStats stats;
};

// Every solution (regular and singular) reachable from the seeding strategy,
// canonicalised, deduplicated and sorted by energy.
SolveResult multi_start_solve(const ModelParams& params, const SolverConfig& config);
// Bound-pair solutions only. Requires N >= 4.
SolveResult singular_solve(const ModelParams& params, const SolverConfig& config);

cplx energy(std::span<const cplx> roots, const XyzModel& model);
cplx energy(std::span<const cplx> roots, const ModelParams& params);
cplx energy_singular(std::span<const cplx> nu_roots, const XyzModel& model);

// Lattice reduction of a single root: lambda = a + b tau with a in [0,1) and
// b in (-1/2, 1/2]; returns the number of tau-shifts removed.
struct ReducedRoot {
  cplx root;
  int tau_shifts;
};
ReducedRoot reduce_root(cplx root, cplx tau);

// Shifts every root into the fundamental cell (beta changes by 2 per tau
// shift) and sorts. Idempotent. Singular solutions keep the bound pair in
// front and canonicalise only nu_roots.
BetheSolution canonicalize(BetheSolution solution, const XyzModel& model);

// Same solution up to lattice shifts (with the matching beta bookkeeping) and
// root order.
bool equivalent(const BetheSolution& a, const BetheSolution& b, cplx tau, double tol);

}  // namespace xyzbethe
