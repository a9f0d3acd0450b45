#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "xyzbethe/bae_solver.hpp"
#include "xyzbethe/xxz_limit.hpp"

namespace xyzbethe {

struct HomotopyOptions {
  double target_im_tau = 12.0;
  int steps = 0;               // > 0 fixes a geometric schedule with this many steps
  double step_factor = 1.15;   // Im tau multiplier per step when steps == 0
  // A corrector move above max(jump_tol, step / 2) counts as a jump and halves the step.
  double jump_tol = 1e-4;
  int max_halvings = 24;
  double root_tol = 1e-3;      // |i pi lambda - mu| accepted when pairing
  SolverConfig newton;         // tolerances of the corrector
};

struct PathPoint {
  double im_tau;
  cplx energy;
  double residual;
  int halvings;
  std::vector<cplx> roots;  // unwrapped along the path; nu roots for singular starts
};

struct PathWarning {
  std::size_t path;
  double im_tau;
  std::string message;
};

struct RootImage {
  cplx lambda;           // elliptic root at the end of the path
  bool phantom = false;  // |Im lambda / Im tau| > 1/4
  cplx mu;               // i pi lambda, reduced mod i pi (regular roots only)
};

struct HomotopyPath {
  std::size_t start_index = 0;
  BetheSolution start;
  // End of the continuation with every phantom moved onto the +tau/2 line
  // (lambda -> lambda + tau, beta -> beta + 2); otherwise not re-canonicalised.
  BetheSolution end;
  std::vector<PathPoint> points;
  bool lost = false;
  std::vector<RootImage> images;
  int phantom_count = 0;
  // MinusInfinity whenever there are phantoms, from the representation of
  // `end`. Shifting all of them by -tau (beta - 2m) gives the PlusInfinity one.
  PhantomSide side = PhantomSide::None;
  bool mixed_sides = false;  // phantoms sat on both +-tau/2 lines before the move
  double string_defect = 0.0;  // distance of the phantom real parts from a 1/m spacing
  double phantom_phase = 0.0;  // fitted c of the phantom string
};

struct CorrespondencePair {
  std::size_t path;
  std::size_t xxz;
  PhantomSide side;
  int beta;  // elliptic beta in the representation that was paired
  double root_gap;
  cplx energy_gap;
};

struct CorrespondenceReport {
  std::vector<HomotopyPath> paths;
  std::vector<XXZSolution> xxz;
  std::vector<CorrespondencePair> pairs;
  std::vector<std::size_t> unmatched_paths;
  std::vector<std::size_t> unmatched_xxz;
  std::vector<PathWarning> warnings;
  // Target equal to the start: pairs map path i to start i and xxz is empty.
  bool trivial = false;
  bool complete = false;
};

// Continues one solution from params.tau to Im tau = target with Re tau fixed.
HomotopyPath continue_solution(const ModelParams& params, const BetheSolution& start, const HomotopyOptions& opts,
                               std::vector<PathWarning>* warnings = nullptr, std::size_t path_id = 0);

// Continues every start solution and pairs the end points with `xxz`.
CorrespondenceReport homotopy_correspondence(const ModelParams& params, const std::vector<BetheSolution>& starts,
                                             const std::vector<XXZSolution>& xxz, const HomotopyOptions& opts = {});
// Solves both ends itself.
CorrespondenceReport homotopy_correspondence(const ModelParams& params, double target_im_tau, int steps,
                                             const SolverConfig& config = {});

}  // namespace xyzbethe
