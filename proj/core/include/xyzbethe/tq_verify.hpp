#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "xyzbethe/bae_solver.hpp"
#include "xyzbethe/lattice_model.hpp"

namespace xyzbethe {

// Transfer-matrix eigenvalue from the homogeneous T-Q relation; singular
// solutions use the deformed form built from nu_roots. Throws PoleProximity
// when u sits on a zero of Q.
cplx lambda_tq(cplx u, const BetheSolution& solution, const XyzModel& model, double pole_tol = 1e-12);
cplx lambda_tq(cplx u, const BetheSolution& solution, const ModelParams& params, double pole_tol = 1e-12);

// Largest pole coefficient of Lambda(u) at the zeros of Q, estimated from
// four samples on a circle of the given radius and measured relative to
// 1 + the pole coefficient of the first T-Q term alone.
double entireness_check(const BetheSolution& solution, const XyzModel& model, double radius = 1e-4);

// 2 ell_1(eta)/ell_1'(0) * Lambda'(0)/Lambda(0) - N ell_1'(eta)/ell_1'(0), with
// Lambda'(0) from a Richardson-extrapolated central difference.
cplx energy_from_lambda(const BetheSolution& solution, const XyzModel& model, double step = 1e-4);

struct MatchPair {
  std::size_t solution;
  std::size_t spectrum;
  double energy_gap;
  double lambda_gap;  // max over samples of |dLambda| / (1 + |Lambda_ED|)
};

struct MatchReport {
  std::vector<MatchPair> pairs;
  std::vector<std::size_t> unmatched_solutions;
  std::vector<std::size_t> unmatched_spectrum;
  bool complete = false;
  double energy_tol = 0.0;
  double lambda_tol = 0.0;
  double max_energy_gap = 0.0;
  double max_lambda_gap = 0.0;
};

struct MatchOptions {
  double energy_tol = 1e-6;
  double lambda_tol = 1e-6;
};

// Anything with an energy and Lambda values at the spectrum's sample points.
struct MatchCandidate {
  cplx energy;
  std::vector<cplx> lambda;  // empty when Lambda could not be evaluated
};

// Optimal assignment (Hungarian) on the combined energy and Lambda-sample
// gaps. Pairs above tolerance are demoted to unmatched on both sides.
MatchReport match_candidates(std::span<const MatchCandidate> candidates, std::span<const SpectrumEntry> spectrum,
                             const MatchOptions& opts = {});
MatchReport match_spectrum(std::span<const BetheSolution> solutions, std::span<const SpectrumEntry> spectrum,
                           const XyzModel& model, const MatchOptions& opts = {});

// Minimum-cost assignment of rows to columns; cost is rows x cols with
// rows <= cols. Returns the column of each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost);

}  // namespace xyzbethe
