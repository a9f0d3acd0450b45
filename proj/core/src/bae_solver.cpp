#include "xyzbethe/bae_solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "log_newton.hpp"
#include "xyzbethe/errors.hpp"

namespace xyzbethe {

std::string to_string(SolutionKind kind) { return kind == SolutionKind::Regular ? "regular" : "singular"; }

std::string to_string(NewtonFailure f) {
  switch (f) {
    case NewtonFailure::None: return "none";
    case NewtonFailure::MaxIters: return "max_iters";
    case NewtonFailure::JacobianSingular: return "jacobian_singular";
    case NewtonFailure::PoleProximity: return "pole_proximity";
    case NewtonFailure::SingularApproach: return "singular_approach";
    case NewtonFailure::Collision: return "collision";
    case NewtonFailure::Diverged: return "diverged";
  }
  return "unknown";
}

void SolverConfig::validate(int num_roots) const {
  if (!(newton_tol > 0 && dedup_tol > 0 && sum_rule_tol > 0 && pole_tol > 0 && collision_tol > 0 && max_step > 0))
    throw InvalidParameters("solver tolerances must be positive");
  if (max_newton_iters < 1) throw InvalidParameters("max_newton_iters must be >= 1");
  if (n_starts < 0) throw InvalidParameters("n_starts must be >= 0");
  if (beta_range >= 0 && beta_range < num_roots) throw InvalidParameters("beta_range must be >= M");
  if (threads < 1) throw InvalidParameters("threads must be >= 1");
}

int SolverConfig::effective_starts(int num_unknowns) const {
  if (n_starts > 0) return n_starts;
  return 64 + 112 * num_unknowns * num_unknowns;
}

namespace {

struct LatticeOffset {
  cplx remainder;
  int n1;    // multiples of 1
  int ntau;  // multiples of tau
};

// z = remainder + n1 + ntau * tau with the remainder nearest to 0.
LatticeOffset nearest_lattice(cplx z, cplx tau) {
  const int ntau = static_cast<int>(std::lround(z.imag() / tau.imag()));
  cplx r = z - static_cast<double>(ntau) * tau;
  const int n1 = static_cast<int>(std::lround(r.real()));
  r -= static_cast<double>(n1);
  return {r, n1, ntau};
}

double lattice_distance(cplx a, cplx b, cplx tau) { return std::abs(nearest_lattice(a - b, tau).remainder); }

}  // namespace

detail::LogSystem detail::elliptic_system(const XyzModel& model, int beta, bool singular) {
  detail::LogSystem sys;
  const EllipticContext* ctx = &model.context();
  sys.kernel = [ctx](cplx z) {
    const Ell1Pair p = ell1_with_derivative(z, *ctx);
    return detail::KernelValue{p.value, p.derivative};
  };
  sys.pole_scale = std::abs(model.ell1_prime_zero());
  const double n = model.n_sites();
  const cplx eta = model.eta();
  if (singular) {
    sys.site_terms = {{n - 1, 0.5 * eta}, {-(n - 1), -0.5 * eta}, {1.0, -1.5 * eta}, {-1.0, 1.5 * eta}};
  } else {
    sys.site_terms = {{n, 0.5 * eta}, {-n, -0.5 * eta}};
  }
  sys.pair_shift = eta;
  sys.twist = 2.0 * static_cast<double>(beta) * model.gamma();
  const cplx tau = model.tau();
  sys.wrap = [tau](cplx z) {
    const double a = z.real() - z.imag() / tau.imag() * tau.real();
    return z - std::floor(a);
  };
  const double bound = 2.5 * tau.imag() + 1.0;
  sys.in_bounds = [bound](cplx z) { return std::abs(z.imag()) < bound; };
  return sys;
}

namespace {

detail::LogSystem make_system(const XyzModel& model, int beta, bool singular) {
  return detail::elliptic_system(model, beta, singular);
}

detail::NewtonSettings settings_from(const SolverConfig& c) {
  return {c.newton_tol, c.max_newton_iters, c.max_step, c.pole_tol};
}

bool near_pair_point(cplx z, const XyzModel& model, double tol) {
  return lattice_distance(z, 0.5 * model.eta(), model.tau()) < tol ||
         lattice_distance(z, -0.5 * model.eta(), model.tau()) < tol;
}

bool has_collision(std::span<const cplx> x, cplx tau, double tol) {
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (lattice_distance(x[i], x[j], tau) < tol) return true;
  return false;
}

BetheSolution assemble(std::vector<cplx> roots, std::vector<cplx> nu, int beta, SolutionKind kind, double norm,
                       const XyzModel& model) {
  BetheSolution s;
  s.roots = std::move(roots);
  s.nu_roots = std::move(nu);
  s.beta = beta;
  s.kind = kind;
  s.residual_norm = norm;
  const auto& sum_set = kind == SolutionKind::Singular ? s.nu_roots : s.roots;
  const SumRuleResult sr = sum_rule(sum_set, beta, model.tau());
  s.k = sr.k;
  s.p = sr.p;
  s.sum_defect = sr.sin_defect;
  s.energy = kind == SolutionKind::Singular ? energy_singular(s.nu_roots, model) : energy(s.roots, model);
  return s;
}

}  // namespace

std::vector<cplx> bae_residual(std::span<const cplx> roots, int beta, const XyzModel& model, double pole_tol) {
  return detail::evaluate(make_system(model, beta, false), roots, pole_tol, false).residual;
}

std::vector<cplx> bae_residual(std::span<const cplx> roots, int beta, const ModelParams& params, double pole_tol) {
  return bae_residual(roots, beta, XyzModel(params), pole_tol);
}

std::vector<cplx> singular_bae_residual(std::span<const cplx> nu_roots, int beta, const XyzModel& model,
                                        double pole_tol) {
  return detail::evaluate(make_system(model, beta, true), nu_roots, pole_tol, false).residual;
}

std::vector<ProductFormRow> bae_product_form(std::span<const cplx> roots, int beta, const XyzModel& model) {
  const int n = model.n_sites();
  const cplx eta = model.eta();
  const cplx twist = std::exp(2.0 * static_cast<double>(beta) * model.gamma());
  std::vector<ProductFormRow> rows;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    cplx lhs = twist * std::pow(model.ell1(roots[j] + 0.5 * eta), n);
    cplx rhs = std::pow(model.ell1(roots[j] - 0.5 * eta), n);
    for (std::size_t k = 0; k < roots.size(); ++k) {
      if (k == j) continue;
      lhs *= model.ell1(roots[j] - roots[k] - eta);
      rhs *= model.ell1(roots[j] - roots[k] + eta);
    }
    rows.push_back({lhs, rhs});
  }
  return rows;
}

SumRuleResult sum_rule(std::span<const cplx> roots, int beta, cplx tau) {
  cplx s = 0.0;
  for (cplx r : roots) s += r;
  s *= 2.0;
  const LatticeOffset lo = nearest_lattice(s, tau);
  SumRuleResult out;
  out.k = lo.n1;
  out.p = lo.ntau;
  out.lattice_distance = std::abs(lo.remainder);
  out.sin_defect = std::abs(std::sin(kPi * (s - static_cast<double>(beta) * tau)));
  return out;
}

cplx energy(std::span<const cplx> roots, const XyzModel& model) {
  const cplx half = 0.5 * model.eta();
  cplx e = static_cast<double>(model.n_sites()) * model.ell1_prime_eta() / model.ell1_prime_zero();
  for (cplx r : roots) e += 2.0 * (model.g(r - half) - model.g(r + half));
  return e;
}

cplx energy(std::span<const cplx> roots, const ModelParams& params) { return energy(roots, XyzModel(params)); }

cplx energy_singular(std::span<const cplx> nu_roots, const XyzModel& model) {
  const cplx half = 0.5 * model.eta();
  cplx e = static_cast<double>(model.n_sites() - 4) * model.ell1_prime_eta() / model.ell1_prime_zero();
  for (cplx r : nu_roots) e += 2.0 * (model.g(r - half) - model.g(r + half));
  return e;
}

ReducedRoot reduce_root(cplx root, cplx tau) {
  constexpr double snap = 1e-9;
  const double b = root.imag() / tau.imag();
  const int nb = static_cast<int>(std::ceil(b - 0.5 - snap));
  cplx z = root - static_cast<double>(nb) * tau;
  const double a = z.real() - z.imag() / tau.imag() * tau.real();
  z -= std::floor(a + snap);
  return {z, nb};
}

namespace {

bool root_less(cplx a, cplx b) {
  const double ra = std::round(a.real() * 1e8);
  const double rb = std::round(b.real() * 1e8);
  if (ra != rb) return ra < rb;
  return a.imag() < b.imag();
}

void canonical_set(std::vector<cplx>& roots, int& beta, cplx tau) {
  for (auto& r : roots) {
    const ReducedRoot rr = reduce_root(r, tau);
    r = rr.root;
    beta -= 2 * rr.tau_shifts;
  }
  std::sort(roots.begin(), roots.end(), root_less);
}

// Matches b onto a up to the lattice; returns the total number of tau shifts
// used, or nullopt.
std::optional<int> match_sets(std::span<const cplx> a, std::span<const cplx> b, cplx tau, double tol) {
  const std::size_t m = a.size();
  if (b.size() != m) return std::nullopt;
  std::vector<char> used(m, 0);
  std::optional<int> found;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int shifts) {
    if (found) return;
    if (i == m) {
      found = shifts;
      return;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (used[j]) continue;
      const LatticeOffset lo = nearest_lattice(a[i] - b[j], tau);
      if (std::abs(lo.remainder) >= tol) continue;
      used[j] = 1;
      rec(i + 1, shifts + lo.ntau);
      used[j] = 0;
    }
  };
  rec(0, 0);
  return found;
}

}  // namespace

BetheSolution canonicalize(BetheSolution s, const XyzModel& model) {
  const cplx tau = model.tau();
  if (s.kind == SolutionKind::Singular) {
    canonical_set(s.nu_roots, s.beta, tau);
    s.roots.assign({0.5 * model.eta(), -0.5 * model.eta()});
    s.roots.insert(s.roots.end(), s.nu_roots.begin(), s.nu_roots.end());
  } else {
    canonical_set(s.roots, s.beta, tau);
  }
  const auto& sum_set = s.kind == SolutionKind::Singular ? s.nu_roots : s.roots;
  const SumRuleResult sr = sum_rule(sum_set, s.beta, tau);
  s.k = sr.k;
  s.p = sr.p;
  s.sum_defect = sr.sin_defect;
  return s;
}

bool equivalent(const BetheSolution& a, const BetheSolution& b, cplx tau, double tol) {
  if (a.kind != b.kind) return false;
  const auto& sa = a.kind == SolutionKind::Singular ? a.nu_roots : a.roots;
  const auto& sb = b.kind == SolutionKind::Singular ? b.nu_roots : b.roots;
  const auto shifts = match_sets(sa, sb, tau, tol);
  return shifts && a.beta == b.beta + 2 * *shifts;
}

namespace {

NewtonOutcome finish(detail::NewtonRun run, int beta, const XyzModel& model, const SolverConfig& config,
                     bool singular) {
  NewtonOutcome out;
  out.iterations = run.iterations;
  out.residual_norm = run.norm;
  if (!run.converged()) {
    out.failure = run.failure;
    if (!singular && run.failure == NewtonFailure::PoleProximity) {
      for (cplx z : run.x)
        if (near_pair_point(z, model, 1e-3)) out.failure = NewtonFailure::SingularApproach;
    }
    return out;
  }
  if (has_collision(run.x, model.tau(), config.collision_tol)) {
    out.failure = NewtonFailure::Collision;
    return out;
  }
  try {
    BetheSolution s;
    if (singular) {
      std::vector<cplx> roots{0.5 * model.eta(), -0.5 * model.eta()};
      roots.insert(roots.end(), run.x.begin(), run.x.end());
      s = assemble(std::move(roots), run.x, beta, SolutionKind::Singular, run.norm, model);
    } else {
      s = assemble(run.x, {}, beta, SolutionKind::Regular, run.norm, model);
    }
    out.solution = canonicalize(std::move(s), model);
  } catch (const PoleProximity&) {
    out.failure = NewtonFailure::PoleProximity;
  }
  return out;
}

}  // namespace

NewtonOutcome newton_solve(std::span<const cplx> seed_roots, int beta, const XyzModel& model,
                           const SolverConfig& config) {
  for (cplx z : seed_roots)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidParameters("seed must be finite");
  auto run = detail::newton(make_system(model, beta, false), {seed_roots.begin(), seed_roots.end()},
                            settings_from(config));
  return finish(std::move(run), beta, model, config, false);
}

NewtonOutcome newton_solve(std::span<const cplx> seed_roots, int beta, const ModelParams& params,
                           const SolverConfig& config) {
  return newton_solve(seed_roots, beta, XyzModel(params), config);
}

NewtonOutcome newton_solve_singular(std::span<const cplx> seed_nu, int beta, const XyzModel& model,
                                    const SolverConfig& config) {
  for (cplx z : seed_nu)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidParameters("seed must be finite");
  auto run =
      detail::newton(make_system(model, beta, true), {seed_nu.begin(), seed_nu.end()}, settings_from(config));
  return finish(std::move(run), beta, model, config, true);
}

namespace {

struct Task {
  int beta;
  std::vector<cplx> seed;
};

class SeedRng {
 public:
  SeedRng(std::uint64_t seed, std::int64_t stream, std::uint64_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream + 1000), static_cast<std::uint32_t>(tag)};
    gen_.seed(seq);
  }
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

void multisets(int pool, int size, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == size) {
    out.push_back(cur);
    return;
  }
  const int start = cur.empty() ? 0 : cur.back();
  for (int i = start; i < pool; ++i) {
    cur.push_back(i);
    multisets(pool, size, cur, out);
    cur.pop_back();
  }
}

// Stratified random seeds in the fundamental cell plus half-period and
// bound-pair multisets with perturbations.
std::vector<Task> initial_tasks(const XyzModel& model, int m, int beta_range, const SolverConfig& config) {
  std::vector<Task> tasks;
  if (m == 0) {
    tasks.push_back({0, {}});
    return tasks;
  }
  const cplx tau = model.tau();
  const cplx eta = model.eta();
  const int n_starts = config.effective_starts(m);
  const int n_random = (6 * n_starts + 9) / 10;
  const std::vector<cplx> pool{0.0, 0.5, 0.5 * tau, 0.5 + 0.5 * tau, 0.5 * eta, -0.5 * eta};
  std::vector<std::vector<int>> sets;
  std::vector<int> cur;
  multisets(static_cast<int>(pool.size()), m, cur, sets);
  const int per_set = std::max(1, (n_starts - n_random) / static_cast<int>(sets.size()));

  for (int beta = -beta_range; beta <= beta_range; ++beta) {
    SeedRng rng(config.rng_seed, beta, static_cast<std::uint64_t>(m));
    // Latin hypercube in the lattice coordinates (a, b), a in [0,1), b in [-1/2,1/2).
    std::vector<std::vector<int>> perm_a(m), perm_b(m);
    for (int j = 0; j < m; ++j) {
      for (auto* perm : {&perm_a[j], &perm_b[j]}) {
        perm->resize(n_random);
        for (int s = 0; s < n_random; ++s) (*perm)[s] = s;
        for (int s = n_random - 1; s > 0; --s) {
          const int r = static_cast<int>(rng.uniform() * (s + 1));
          std::swap((*perm)[s], (*perm)[std::min(r, s)]);
        }
      }
    }
    for (int s = 0; s < n_random; ++s) {
      Task t{beta, {}};
      for (int j = 0; j < m; ++j) {
        const double a = (perm_a[j][s] + rng.uniform()) / n_random;
        const double b = (perm_b[j][s] + rng.uniform()) / n_random - 0.5;
        t.seed.push_back(a + b * tau);
      }
      tasks.push_back(std::move(t));
    }
    for (const auto& set : sets) {
      const bool touches_pole = std::any_of(set.begin(), set.end(), [](int i) { return i >= 4; });
      if (!touches_pole) {
        Task t{beta, {}};
        for (int i : set) t.seed.push_back(pool[i]);
        tasks.push_back(std::move(t));
      }
      for (int c = 0; c < per_set; ++c) {
        Task t{beta, {}};
        for (int i : set) {
          const double r = 0.02 + 0.1 * rng.uniform();
          const double phi = 2.0 * kPi * rng.uniform();
          t.seed.push_back(pool[i] + r * std::polar(1.0, phi));
        }
        tasks.push_back(std::move(t));
      }
    }
    // Strings c + (j - (L-1)/2) eta around a half period, the other roots at
    // half periods. Their basins are narrow, so the perturbations are small.
    for (int len = 2; len <= m; ++len) {
      std::vector<std::vector<int>> rest;
      std::vector<int> rcur;
      multisets(4, m - len, rcur, rest);
      for (int centre = 0; centre < 4; ++centre) {
        for (const auto& others : rest) {
          for (int c = 0; c < per_set; ++c) {
            Task t{beta, {}};
            const cplx mid = pool[centre] + cplx(0.0, 0.4 * (rng.uniform() - 0.5) * tau.imag());
            for (int j = 0; j < len; ++j) {
              const double r = 0.002 + 0.03 * rng.uniform();
              t.seed.push_back(mid + (j - 0.5 * (len - 1)) * eta + r * std::polar(1.0, 2.0 * kPi * rng.uniform()));
            }
            for (int i : others) {
              const double r = 0.01 + 0.05 * rng.uniform();
              t.seed.push_back(pool[i] + r * std::polar(1.0, 2.0 * kPi * rng.uniform()));
            }
            tasks.push_back(std::move(t));
          }
        }
      }
    }
  }
  // Copies moved onto the nearest sum-rule hyperplane 2 sum = k + beta tau.
  const std::size_t n_plain = tasks.size();
  for (std::size_t i = 0; i < n_plain; ++i) {
    Task t = tasks[i];
    cplx s = 0.0;
    for (cplx z : t.seed) s += 2.0 * z;
    const cplx target_shift = s - static_cast<double>(t.beta) * tau;
    const double k = std::round(target_shift.real() - target_shift.imag() / tau.imag() * tau.real());
    const cplx delta = (static_cast<double>(t.beta) * tau + k - s) / (2.0 * m);
    for (auto& z : t.seed) z += delta;
    tasks.push_back(std::move(t));
  }
  return tasks;
}

std::vector<Task> image_tasks(const std::vector<BetheSolution>& found, int beta_range, bool singular) {
  std::vector<Task> tasks;
  auto add = [&](int beta, std::vector<cplx> seed) {
    if (std::abs(beta) <= beta_range) tasks.push_back({beta, std::move(seed)});
  };
  for (const auto& s : found) {
    const auto& x = singular ? s.nu_roots : s.roots;
    if (x.empty()) continue;
    std::vector<cplx> neg, cj, ncj, half;
    for (cplx z : x) {
      neg.push_back(-z);
      cj.push_back(std::conj(z));
      ncj.push_back(-std::conj(z));
      half.push_back(z + 0.5);
    }
    add(-s.beta, std::move(neg));
    add(-s.beta, std::move(cj));
    add(s.beta, std::move(ncj));
    add(s.beta, std::move(half));
  }
  return tasks;
}

struct Merger {
  const XyzModel& model;
  const SolverConfig& config;
  SolveResult& result;

  // True if the solution is new.
  bool add(BetheSolution s) {
    const auto& sum_set = s.kind == SolutionKind::Singular ? s.nu_roots : s.roots;
    const SumRuleResult sr = sum_rule(sum_set, s.beta, model.tau());
    if (sr.lattice_distance >= config.sum_rule_tol) {
      ++result.stats.rejected_sum_rule;
      return false;
    }
    for (const auto& t : result.solutions) {
      if (std::abs(t.energy - s.energy) > 1e-6 * (1.0 + std::abs(s.energy))) continue;
      if (equivalent(t, s, model.tau(), config.dedup_tol)) {
        ++result.stats.duplicates;
        return false;
      }
    }
    if (sr.p != s.beta) ++result.stats.beta_mismatches;
    result.solutions.push_back(std::move(s));
    return true;
  }
};

void run_tasks(const std::vector<Task>& tasks, const XyzModel& model, const SolverConfig& config, bool singular,
               Merger& merger, std::vector<BetheSolution>& fresh) {
  std::vector<NewtonOutcome> outcomes(tasks.size());
  detail::parallel_for(tasks.size(), config.threads, [&](std::size_t i) {
    try {
      outcomes[i] = singular ? newton_solve_singular(tasks[i].seed, tasks[i].beta, model, config)
                             : newton_solve(tasks[i].seed, tasks[i].beta, model, config);
    } catch (const Error&) {
      outcomes[i].failure = NewtonFailure::PoleProximity;
    }
  });
  auto& st = merger.result.stats;
  for (auto& o : outcomes) {
    ++st.seeds;
    if (o.solution) {
      ++st.converged;
      BetheSolution copy = *o.solution;
      if (merger.add(std::move(*o.solution))) fresh.push_back(std::move(copy));
    } else if (o.failure == NewtonFailure::Collision) {
      ++st.rejected_collision;
    } else {
      ++st.other_failures;
    }
  }
}

void sort_solutions(std::vector<BetheSolution>& sols) {
  std::stable_sort(sols.begin(), sols.end(), [](const BetheSolution& a, const BetheSolution& b) {
    const double ea = std::round(a.energy.real() * 1e9), eb = std::round(b.energy.real() * 1e9);
    if (ea != eb) return ea < eb;
    const double ia = std::round(a.energy.imag() * 1e9), ib = std::round(b.energy.imag() * 1e9);
    if (ia != ib) return ia < ib;
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.beta != b.beta) return a.beta < b.beta;
    return std::lexicographical_compare(a.roots.begin(), a.roots.end(), b.roots.begin(), b.roots.end(), root_less);
  });
}

void solve_branch(const XyzModel& model, const SolverConfig& config, bool singular, SolveResult& result) {
  const int m = model.num_roots() - (singular ? 2 : 0);
  const int beta_range = config.effective_beta_range(model.num_roots());
  Merger merger{model, config, result};
  std::vector<BetheSolution> fresh;
  run_tasks(initial_tasks(model, m, beta_range, config), model, config, singular, merger, fresh);
  for (int round = 0; round < config.symmetry_rounds && !fresh.empty(); ++round) {
    std::vector<BetheSolution> next;
    run_tasks(image_tasks(fresh, beta_range, singular), model, config, singular, merger, next);
    fresh = std::move(next);
  }
}

}  // namespace

SolveResult singular_solve(const ModelParams& params, const SolverConfig& config) {
  params.validate();
  if (params.n_sites < 4) throw InvalidParameters("singular solutions need N >= 4");
  config.validate(params.num_roots());
  const XyzModel model(params);
  SolveResult result;
  solve_branch(model, config, true, result);
  sort_solutions(result.solutions);
  return result;
}

SolveResult multi_start_solve(const ModelParams& params, const SolverConfig& config) {
  params.validate();
  config.validate(params.num_roots());
  const XyzModel model(params);
  SolveResult result;
  solve_branch(model, config, false, result);
  if (params.n_sites >= 4) solve_branch(model, config, true, result);
  sort_solutions(result.solutions);
  return result;
}

}  // namespace xyzbethe
