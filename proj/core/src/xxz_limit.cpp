#include "xyzbethe/xxz_limit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>

#include "log_newton.hpp"
#include "xyzbethe/errors.hpp"

namespace xyzbethe {

void XXZParams::validate() const {
  if (n_sites < 2 || n_sites % 2 != 0) throw InvalidParameters("N must be even and >= 2");
  if (!std::isfinite(gamma.real()) || !std::isfinite(gamma.imag()))
    throw InvalidParameters("gamma must be finite");
  if (std::abs(std::sinh(gamma)) < 1e-12) throw DegenerateGamma("sinh(gamma) vanishes");
}

XXZParams xxz_limit_of(const ModelParams& params) { return {params.n_sites, params.gamma()}; }

std::string to_string(PhantomSide side) {
  switch (side) {
    case PhantomSide::None: return "none";
    case PhantomSide::PlusInfinity: return "+inf";
    case PhantomSide::MinusInfinity: return "-inf";
  }
  return "unknown";
}

ComplexMatrix xxz_r_matrix(cplx u, cplx gamma) {
  const cplx sg = std::sinh(gamma);
  if (std::abs(sg) < 1e-12) throw DegenerateGamma("sinh(gamma) vanishes");
  ComplexMatrix r(4, 4);
  r(0, 0) = r(3, 3) = std::sinh(u + gamma) / sg;
  r(1, 1) = r(2, 2) = std::sinh(u) / sg;
  r(1, 2) = r(2, 1) = 1.0;
  return r;
}

ComplexMatrix xxz_transfer_matrix(cplx u, const XXZParams& params, int max_sites) {
  return transfer_from_r(xxz_r_matrix(u, params.gamma), params.n_sites, max_sites);
}

ComplexMatrix xxz_hamiltonian(const XXZParams& params, int max_sites) {
  params.validate();
  return heisenberg_hamiltonian(params.n_sites, {1.0, 1.0, std::cosh(params.gamma)}, max_sites);
}

std::vector<SpectrumEntry> xxz_exact_spectrum(const XXZParams& params, std::span<const cplx> u_samples,
                                              const SpectrumOptions& opts) {
  const ComplexMatrix h = xxz_hamiltonian(params, opts.max_sites);
  return spectrum_from_transfer([&](cplx u) { return xxz_transfer_matrix(u, params, opts.max_sites); }, h,
                                u_samples, opts);
}

namespace {

// Period of sinh ratios: u ~ u + i pi.
cplx reduce_strip(cplx z) {
  constexpr double snap = 1e-9;
  const double k = std::floor(z.imag() / kPi + snap);
  return z - cplx(0.0, k * kPi);
}

double strip_distance(cplx a, cplx b) {
  cplx d = a - b;
  d -= cplx(0.0, kPi * std::round(d.imag() / kPi));
  return std::abs(d);
}

detail::LogSystem xxz_system(const XXZParams& params, int beta, bool singular) {
  detail::LogSystem sys;
  sys.kernel = [](cplx z) { return detail::KernelValue{std::sinh(z), std::cosh(z)}; };
  sys.pole_scale = 1.0;
  const double n = params.n_sites;
  const cplx g = params.gamma;
  if (singular) {
    sys.site_terms = {{n - 1, 0.5 * g}, {-(n - 1), -0.5 * g}, {1.0, -1.5 * g}, {-1.0, 1.5 * g}};
  } else {
    sys.site_terms = {{n, 0.5 * g}, {-n, -0.5 * g}};
  }
  sys.pair_shift = g;
  sys.twist = 2.0 * static_cast<double>(beta) * g;
  sys.wrap = reduce_strip;
  sys.in_bounds = [](cplx z) { return std::abs(z.real()) < 15.0; };
  return sys;
}

bool root_less(cplx a, cplx b) {
  const double ra = std::round(a.real() * 1e8);
  const double rb = std::round(b.real() * 1e8);
  if (ra != rb) return ra < rb;
  return a.imag() < b.imag();
}

bool match_strip(std::span<const cplx> a, std::span<const cplx> b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<char> used(b.size(), 0);
  std::function<bool(std::size_t)> rec = [&](std::size_t i) {
    if (i == a.size()) return true;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j] || strip_distance(a[i], b[j]) >= tol) continue;
      used[j] = 1;
      if (rec(i + 1)) return true;
      used[j] = 0;
    }
    return false;
  };
  return rec(0);
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

int phantom_exponent(const XXZSolution& s) {
  switch (s.phantom_side) {
    case PhantomSide::PlusInfinity: return s.beta + s.phantom_count;
    case PhantomSide::MinusInfinity: return s.beta - s.phantom_count;
    case PhantomSide::None: return s.beta;
  }
  return s.beta;
}

}  // namespace

std::vector<cplx> xxz_bae_residual(std::span<const cplx> mu, int beta, const XXZParams& params, double pole_tol) {
  params.validate();
  return detail::evaluate(xxz_system(params, beta, false), mu, pole_tol, false).residual;
}

std::vector<cplx> xxz_singular_residual(std::span<const cplx> nu, const XXZParams& params, double pole_tol) {
  params.validate();
  return detail::evaluate(xxz_system(params, 0, true), nu, pole_tol, false).residual;
}

cplx xxz_energy(std::span<const cplx> roots, const XXZParams& params) {
  const cplx g = params.gamma;
  const cplx ch = std::cosh(g);
  const cplx num = 4.0 * std::sinh(g) * std::sinh(g);
  cplx e = static_cast<double>(params.n_sites) * ch;
  for (cplx u : roots) e += num / (std::cosh(2.0 * u) - ch);
  return e;
}

cplx xxz_energy(const XXZSolution& s, const XXZParams& params) {
  if (!s.singular) return xxz_energy(s.regular_roots, params);
  // The pair contributes -4 cosh(gamma).
  return xxz_energy(s.nu_roots, params) - 4.0 * std::cosh(params.gamma);
}

cplx xxz_lambda(cplx u, const XXZSolution& s, const XXZParams& params) {
  const int n = params.n_sites;
  const cplx g = params.gamma;
  const cplx tw = std::exp(static_cast<double>(phantom_exponent(s)) * g);
  const cplx norm = ipow(std::sinh(g), n);
  cplx p1 = 1.0, p2 = 1.0;
  const auto& zeros = s.singular ? s.nu_roots : s.regular_roots;
  for (cplx mu : zeros) {
    const cplx den = std::sinh(u - mu + 0.5 * g);
    if (std::abs(den) < 1e-12) throw PoleProximity("u is on a zero of Q");
    p1 *= std::sinh(u - mu - 0.5 * g) / den;
    p2 *= std::sinh(u - mu + 1.5 * g) / den;
  }
  if (s.singular) {
    return tw * ipow(std::sinh(u + g), n - 1) * std::sinh(u - g) / norm * p1 +
           ipow(std::sinh(u), n - 1) * std::sinh(u + 2.0 * g) / (tw * norm) * p2;
  }
  return tw * ipow(std::sinh(u + g), n) / norm * p1 + ipow(std::sinh(u), n) / (tw * norm) * p2;
}

bool xxz_equivalent(const XXZSolution& a, const XXZSolution& b, double tol) {
  return a.singular == b.singular && a.phantom_count == b.phantom_count && a.phantom_side == b.phantom_side &&
         a.beta == b.beta && match_strip(a.regular_roots, b.regular_roots, tol);
}

namespace {

struct XTask {
  bool singular;
  std::vector<cplx> seed;
};

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), 0x7e57u};
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

std::vector<XTask> sector_tasks(const XXZParams& params, int n, bool singular, const SolverConfig& config) {
  std::vector<XTask> tasks;
  if (n == 0) {
    tasks.push_back({singular, {}});
    return tasks;
  }
  const cplx g = params.gamma;
  const cplx ihalf(0.0, 0.5 * kPi);
  const int n_starts = config.effective_starts(n);
  const int n_random = (6 * n_starts + 9) / 10;
  const std::vector<cplx> pool{0.0, ihalf, 0.4, -0.4, 0.4 + ihalf, -0.4 + ihalf, 0.5 * g, -0.5 * g};
  std::vector<std::vector<int>> sets;
  std::vector<int> cur;
  multisets(static_cast<int>(pool.size()), n, cur, sets);
  const int per_set = std::max(1, (n_starts - n_random) / static_cast<int>(sets.size()));
  Rng rng(config.rng_seed, static_cast<std::uint64_t>(n) * 2 + (singular ? 1 : 0));

  std::vector<std::vector<int>> perm_a(n), perm_b(n);
  for (int j = 0; j < n; ++j) {
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
    XTask t{singular, {}};
    for (int j = 0; j < n; ++j) {
      const double a = (perm_a[j][s] + rng.uniform()) / n_random;
      const double b = (perm_b[j][s] + rng.uniform()) / n_random;
      t.seed.emplace_back(2.4 * (2.0 * a - 1.0), kPi * b);
    }
    tasks.push_back(std::move(t));
  }
  for (const auto& set : sets) {
    const bool touches_pole = std::any_of(set.begin(), set.end(), [](int i) { return i >= 6; });
    if (!touches_pole) {
      XTask t{singular, {}};
      for (int i : set) t.seed.push_back(pool[i]);
      tasks.push_back(std::move(t));
    }
    for (int c = 0; c < per_set; ++c) {
      XTask t{singular, {}};
      for (int i : set) t.seed.push_back(pool[i] + (0.02 + 0.1 * rng.uniform()) * std::polar(1.0, 2.0 * kPi * rng.uniform()));
      tasks.push_back(std::move(t));
    }
  }
  for (int len = 2; len <= n; ++len) {
    std::vector<std::vector<int>> rest;
    std::vector<int> rcur;
    multisets(6, n - len, rcur, rest);
    for (int centre = 0; centre < 6; ++centre) {
      for (const auto& others : rest) {
        for (int c = 0; c < per_set; ++c) {
          XTask t{singular, {}};
          const cplx mid = pool[centre] + 0.6 * (rng.uniform() - 0.5);
          for (int j = 0; j < len; ++j) {
            const double r = 0.002 + 0.03 * rng.uniform();
            t.seed.push_back(mid + (j - 0.5 * (len - 1)) * g + r * std::polar(1.0, 2.0 * kPi * rng.uniform()));
          }
          for (int i : others)
            t.seed.push_back(pool[i] + (0.01 + 0.05 * rng.uniform()) * std::polar(1.0, 2.0 * kPi * rng.uniform()));
          tasks.push_back(std::move(t));
        }
      }
    }
  }
  return tasks;
}

std::vector<XTask> image_tasks(const std::vector<std::vector<cplx>>& found, bool singular) {
  std::vector<XTask> tasks;
  for (const auto& x : found) {
    if (x.empty()) continue;
    std::vector<cplx> neg, cj, ncj;
    for (cplx z : x) {
      neg.push_back(-z);
      cj.push_back(std::conj(z));
      ncj.push_back(-std::conj(z));
    }
    tasks.push_back({singular, std::move(neg)});
    tasks.push_back({singular, std::move(cj)});
    tasks.push_back({singular, std::move(ncj)});
  }
  return tasks;
}

bool collides(std::span<const cplx> x, double tol) {
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (strip_distance(x[i], x[j]) < tol) return true;
  return false;
}

bool hits_pair(std::span<const cplx> x, cplx g, double tol) {
  for (cplx z : x)
    if (strip_distance(z, 0.5 * g) < tol || strip_distance(z, -0.5 * g) < tol) return true;
  return false;
}

void solve_sector(const XXZParams& params, const SolverConfig& config, int n, bool singular,
                  std::vector<std::vector<cplx>>& sets, std::vector<double>& norms, SolveStats& stats) {
  const int unknowns = n - (singular ? 2 : 0);
  const detail::LogSystem sys = xxz_system(params, 0, singular);
  const detail::NewtonSettings settings{config.newton_tol, config.max_newton_iters, config.max_step,
                                        config.pole_tol};
  auto run = [&](const std::vector<XTask>& tasks, std::vector<std::vector<cplx>>& fresh) {
    std::vector<detail::NewtonRun> runs(tasks.size());
    detail::parallel_for(tasks.size(), config.threads,
                         [&](std::size_t i) { runs[i] = detail::newton(sys, tasks[i].seed, settings); });
    for (auto& r : runs) {
      ++stats.seeds;
      if (!r.converged()) {
        ++stats.other_failures;
        continue;
      }
      if (collides(r.x, config.collision_tol) || (!singular && hits_pair(r.x, params.gamma, 1e-6))) {
        ++stats.rejected_collision;
        continue;
      }
      ++stats.converged;
      for (auto& z : r.x) z = reduce_strip(z);
      std::sort(r.x.begin(), r.x.end(), root_less);
      const bool dup = std::any_of(sets.begin(), sets.end(),
                                   [&](const auto& s) { return match_strip(s, r.x, config.dedup_tol); });
      if (dup) {
        ++stats.duplicates;
        continue;
      }
      sets.push_back(r.x);
      norms.push_back(r.norm);
      fresh.push_back(r.x);
    }
  };
  std::vector<std::vector<cplx>> fresh;
  run(sector_tasks(params, unknowns, singular, config), fresh);
  for (int round = 0; round < config.symmetry_rounds && !fresh.empty(); ++round) {
    std::vector<std::vector<cplx>> next;
    run(image_tasks(fresh, singular), next);
    fresh = std::move(next);
  }
}

// 2 sum u = i pi l.
std::pair<int, double> strip_sum_rule(std::span<const cplx> roots) {
  cplx s = 0.0;
  for (cplx u : roots) s += 2.0 * u;
  const int l = static_cast<int>(std::lround(s.imag() / kPi));
  return {l, std::abs(s - cplx(0.0, kPi * l))};
}

// The pair +-gamma/2 is an eigenstate only if
// (-prod sinh(nu - g/2)/sinh(nu + g/2))^N = 1.
bool singular_is_physical(std::span<const cplx> nu, const XXZParams& params, double tol) {
  const cplx g = params.gamma;
  cplx prod = -1.0;
  for (cplx z : nu) prod *= std::sinh(z - 0.5 * g) / std::sinh(z + 0.5 * g);
  return std::abs(ipow(prod, params.n_sites) - 1.0) < tol;
}

}  // namespace

XXZSolveResult xxz_solve(const XXZParams& params, const SolverConfig& config, const XXZSolveOptions& opts) {
  params.validate();
  const int big_m = params.num_roots();
  config.validate(big_m);
  const int m_lo = std::max(0, opts.m_min);
  const int m_hi = opts.m_max < 0 ? big_m : std::min(big_m, opts.m_max);
  XXZSolveResult result;
  const cplx g = params.gamma;

  for (int m = m_lo; m <= m_hi; ++m) {
    const int n = big_m - m;
    std::vector<std::vector<cplx>> sets, nus;
    std::vector<double> norms, nu_norms;
    solve_sector(params, config, n, false, sets, norms, result.stats);
    if (n >= 2) solve_sector(params, config, n, true, nus, nu_norms, result.stats);

    std::vector<XXZSolution> found;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      XXZSolution s;
      s.regular_roots = sets[i];
      s.residual_norm = norms[i];
      s.energy = xxz_energy(s.regular_roots, params);
      found.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < nus.size(); ++i) {
      XXZSolution s;
      s.singular = true;
      s.nu_roots = nus[i];
      s.regular_roots = {0.5 * g, -0.5 * g};
      s.regular_roots.insert(s.regular_roots.end(), nus[i].begin(), nus[i].end());
      s.residual_norm = nu_norms[i];
      s.energy = xxz_energy(s, params);
      found.push_back(std::move(s));
    }
    for (auto& s : found) {
      if (s.singular && !singular_is_physical(s.nu_roots, params, 1e-8)) {
        ++result.stats.rejected_sum_rule;
        continue;
      }
      if (m == 0) {
        const auto [l, defect] = strip_sum_rule(s.singular ? s.nu_roots : s.regular_roots);
        s.l = l;
        s.sum_defect = defect;
        if (defect >= config.sum_rule_tol) {
          ++result.stats.rejected_sum_rule;
          continue;
        }
        result.solutions.push_back(s);
      } else {
        s.phantom_count = m;
        s.phantom_side = PhantomSide::PlusInfinity;
        s.beta = -m;
        result.solutions.push_back(s);
        s.phantom_side = PhantomSide::MinusInfinity;
        s.beta = m;
        result.solutions.push_back(s);
      }
    }
  }
  std::stable_sort(result.solutions.begin(), result.solutions.end(), [](const XXZSolution& a, const XXZSolution& b) {
    const double ea = std::round(a.energy.real() * 1e9), eb = std::round(b.energy.real() * 1e9);
    if (ea != eb) return ea < eb;
    const double ia = std::round(a.energy.imag() * 1e9), ib = std::round(b.energy.imag() * 1e9);
    if (ia != ib) return ia < ib;
    if (a.phantom_count != b.phantom_count) return a.phantom_count < b.phantom_count;
    if (a.phantom_side != b.phantom_side) return a.phantom_side < b.phantom_side;
    if (a.singular != b.singular) return a.singular < b.singular;
    return std::lexicographical_compare(a.regular_roots.begin(), a.regular_roots.end(), b.regular_roots.begin(),
                                        b.regular_roots.end(), root_less);
  });
  return result;
}

PhantomString phantom_string(int m, PhantomSide side, double c) {
  if (m < 1) throw InvalidParameters("a phantom string needs m >= 1");
  if (side == PhantomSide::None) throw InvalidParameters("a phantom string needs a side");
  PhantomString ps;
  ps.m = m;
  ps.side = side;
  ps.c = c;
  for (int j = 1; j <= m; ++j) {
    double y = std::fmod((kPi * j + c) / m, kPi);
    if (y < 0) y += kPi;
    if (kPi - y < 1e-12) y = 0.0;
    ps.imag_parts.push_back(y);
    std::string label = to_string(side);
    if (y != 0.0) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "+%.6fi", y);
      label += buf;
    }
    ps.labels.push_back(std::move(label));
  }
  return ps;
}

std::vector<std::string> phantom_labels(const XXZSolution& s) {
  if (s.phantom_count == 0) return {};
  return phantom_string(s.phantom_count, s.phantom_side, s.phantom_phase).labels;
}

cplx phantom_telescoping_product(int m, cplx gamma) {
  cplx p = 1.0;
  for (int k = 1; k < m; ++k) {
    const cplx w(0.0, kPi * k / m);
    p *= std::sinh(w - gamma) / std::sinh(w + gamma);
  }
  return p;
}

namespace {

// Lambda(u) (2 sinh g)^N e^{-N u} without forming e^{N u}.
cplx scaled_lambda(double u, const XXZSolution& s, const XXZParams& params) {
  const int n = params.n_sites;
  const cplx g = params.gamma;
  const cplx tw = std::exp(static_cast<double>(phantom_exponent(s)) * g);
  const cplx e2u = std::exp(-2.0 * u);
  // 2 sinh(u + a) e^{-u}
  auto s2 = [&](cplx a) { return std::exp(a) - e2u * std::exp(-a); };
  cplx p1 = 1.0, p2 = 1.0;
  for (cplx mu : s.singular ? s.nu_roots : s.regular_roots) {
    const cplx den = s2(-mu + 0.5 * g);
    p1 *= s2(-mu - 0.5 * g) / den;
    p2 *= s2(-mu + 1.5 * g) / den;
  }
  if (s.singular) return tw * ipow(s2(g), n - 1) * s2(-g) * p1 + ipow(s2(0.0), n - 1) * s2(2.0 * g) / tw * p2;
  return tw * ipow(s2(g), n) * p1 + ipow(s2(0.0), n) / tw * p2;
}

}  // namespace

AsymptoticFit asymptotic_fit(const XXZSolution& s, const XXZParams& params) {
  params.validate();
  const cplx c8 = scaled_lambda(8.0, s, params);
  const cplx c10 = scaled_lambda(10.0, s, params);
  if (!std::isfinite(std::abs(c10)) || std::abs(c8 - c10) > 1e-5 * (1.0 + std::abs(c10)))
    throw FitFailure("leading coefficient has not settled by u = 10");
  AsymptoticFit fit;
  fit.coefficient = c10;
  const int n = params.n_sites;
  const cplx g = params.gamma;
  double best = std::numeric_limits<double>::infinity();
  int best_m = -1;
  for (int mp = 0; mp <= n; ++mp) {
    const cplx form = std::exp(static_cast<double>(n - mp) * g) + std::exp(static_cast<double>(mp) * g);
    const double err = std::abs(c10 - form) / (1.0 + std::abs(form));
    if (err < best) {
      best = err;
      best_m = mp;
    }
  }
  fit.fit_error = best;
  if (best < 1e-7) fit.m_prime = best_m;
  const int finite = static_cast<int>(s.regular_roots.size());
  fit.consistent = fit.m_prime >= 0 && (fit.m_prime == finite || fit.m_prime == n - finite);
  return fit;
}

bool asymptotic_beta_check(const XXZSolution& s, const XXZParams& params) {
  return asymptotic_fit(s, params).consistent;
}

MatchReport xxz_match_spectrum(std::span<const XXZSolution> solutions, std::span<const SpectrumEntry> spectrum,
                               const XXZParams& params, const MatchOptions& opts) {
  std::vector<MatchCandidate> cands(solutions.size());
  const std::vector<LambdaSample> none;
  const auto& samples = spectrum.empty() ? none : spectrum[0].lambda_samples;
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    cands[i].energy = solutions[i].energy;
    try {
      for (const auto& smp : samples) cands[i].lambda.push_back(xxz_lambda(smp.u, solutions[i], params));
    } catch (const PoleProximity&) {
      cands[i].lambda.clear();
    }
  }
  return match_candidates(cands, spectrum, opts);
}

}  // namespace xyzbethe
