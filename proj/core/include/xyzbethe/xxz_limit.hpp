#pragma once

#include <span>
#include <string>
#include <vector>

#include "xyzbethe/bae_solver.hpp"
#include "xyzbethe/lattice_model.hpp"
#include "xyzbethe/tq_verify.hpp"

namespace xyzbethe {

// Trigonometric chain H = sum sx sx + sy sy + cosh(gamma) sz sz.
struct XXZParams {
  int n_sites = 4;
  cplx gamma{0.0, 0.0};

  int num_roots() const noexcept { return n_sites / 2; }
  // N even >= 2; sinh(gamma) != 0 (DegenerateGamma).
  void validate() const;
};

// Image of an elliptic parameter set as Im tau -> infinity.
XXZParams xxz_limit_of(const ModelParams& params);

// Which way the real parts of the phantom roots run off.
enum class PhantomSide { None, PlusInfinity, MinusInfinity };
std::string to_string(PhantomSide side);

struct XXZSolution {
  // Finite roots, Im in [0, pi). Singular solutions start with gamma/2, -gamma/2.
  std::vector<cplx> regular_roots;
  int phantom_count = 0;
  PhantomSide phantom_side = PhantomSide::None;
  double phantom_phase = 0.0;  // c in v_j = +-inf + i (pi j + c) / m
  int beta = 0;
  bool singular = false;
  std::vector<cplx> nu_roots;  // regular roots other than the pair
  int l = 0;                   // 2 sum u = i pi l when m = 0
  double sum_defect = 0.0;
  double residual_norm = 0.0;
  cplx energy{0.0, 0.0};
};

// sinh(u+g)/sinh g on |00>,|11>; sinh u/sinh g on |01>,|10>; 1 on the swap.
ComplexMatrix xxz_r_matrix(cplx u, cplx gamma);
ComplexMatrix xxz_transfer_matrix(cplx u, const XXZParams& params, int max_sites = kDefaultMaxSites);
ComplexMatrix xxz_hamiltonian(const XXZParams& params, int max_sites = kDefaultMaxSites);
std::vector<SpectrumEntry> xxz_exact_spectrum(const XXZParams& params, std::span<const cplx> u_samples,
                                              const SpectrumOptions& opts = {});

// Log form of e^{2 beta g} [sinh(mu+g/2)/sinh(mu-g/2)]^N prod sinh(mu_j-mu_k-g)/sinh(mu_j-mu_k+g) = 1.
// Throws PoleProximity.
std::vector<cplx> xxz_bae_residual(std::span<const cplx> mu_roots, int beta, const XXZParams& params,
                                   double pole_tol = 1e-9);
// Equations for the nu roots of a solution containing the pair +-gamma/2.
std::vector<cplx> xxz_singular_residual(std::span<const cplx> nu_roots, const XXZParams& params,
                                        double pole_tol = 1e-9);

// sum 4 sinh^2 g / (cosh 2u - cosh g) + N cosh g.
cplx xxz_energy(std::span<const cplx> regular_roots, const XXZParams& params);
cplx xxz_energy(const XXZSolution& solution, const XXZParams& params);

// Reduced T-Q eigenvalue with the phantom factor e^{(beta +- m) g}.
cplx xxz_lambda(cplx u, const XXZSolution& solution, const XXZParams& params);

struct XXZSolveOptions {
  int m_min = 0;
  int m_max = -1;  // < 0 means M
};

struct XXZSolveResult {
  std::vector<XXZSolution> solutions;
  SolveStats stats;
};

XXZSolveResult xxz_solve(const XXZParams& params, const SolverConfig& config, const XXZSolveOptions& opts = {});

// Distinct up to u -> u + i pi and permutations.
bool xxz_equivalent(const XXZSolution& a, const XXZSolution& b, double tol);

struct PhantomString {
  int m = 0;
  PhantomSide side = PhantomSide::PlusInfinity;
  double c = 0.0;
  std::vector<double> imag_parts;  // (pi j + c)/m reduced to [0, pi), j = 1..m
  std::vector<std::string> labels;  // "+inf+0.785398i" style
};
// Throws InvalidParameters for m < 1 or side None.
PhantomString phantom_string(int m, PhantomSide side, double c = 0.0);
// prod_{k=1}^{m-1} sinh(i pi k/m - g) / sinh(i pi k/m + g)
cplx phantom_telescoping_product(int m, cplx gamma);

struct AsymptoticFit {
  cplx coefficient;  // lim Lambda(u) (2 sinh g)^N e^{-N u}
  int m_prime = -1;  // -1 when no integer fits
  double fit_error = 0.0;
  bool consistent = false;  // m' in {n, N - n} with n the number of finite roots
};
// Fits the leading large-u coefficient of the reduced T-Q at u = 8 and 10.
// Throws FitFailure when the two samples disagree.
AsymptoticFit asymptotic_fit(const XXZSolution& solution, const XXZParams& params);
bool asymptotic_beta_check(const XXZSolution& solution, const XXZParams& params);

MatchReport xxz_match_spectrum(std::span<const XXZSolution> solutions, std::span<const SpectrumEntry> spectrum,
                               const XXZParams& params, const MatchOptions& opts = {});

// "+inf", "-inf+1.570796i", ... for every phantom root.
std::vector<std::string> phantom_labels(const XXZSolution& solution);

}  // namespace xyzbethe
