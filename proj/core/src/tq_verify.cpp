#include "xyzbethe/tq_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xyzbethe/errors.hpp"

namespace xyzbethe {

namespace {

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

struct TqTerms {
  cplx a;
  cplx d;
};

TqTerms tq_terms(cplx u, const BetheSolution& s, const XyzModel& model, double pole_tol) {
  const int n = model.n_sites();
  const cplx eta = model.eta();
  const cplx tw = std::exp(static_cast<double>(s.beta) * model.gamma());
  const cplx norm = ipow(model.ell1_eta(), n);
  const double scale = std::abs(model.ell1_prime_zero());
  auto guarded = [&](cplx z) {
    const cplx v = model.ell1(z);
    if (!(std::abs(v) >= pole_tol * scale)) throw PoleProximity("u is on a zero of Q");
    return v;
  };
  if (s.kind == SolutionKind::Singular) {
    cplx p1 = 1.0, p2 = 1.0;
    for (cplx nu : s.nu_roots) {
      const cplx den = guarded(u - nu + 0.5 * eta);
      p1 *= model.ell1(u - nu - 0.5 * eta) / den;
      p2 *= model.ell1(u - nu + 1.5 * eta) / den;
    }
    return {tw * ipow(model.ell1(u + eta), n - 1) * model.ell1(u - eta) / norm * p1,
            ipow(model.ell1(u), n - 1) * model.ell1(u + 2.0 * eta) / (tw * norm) * p2};
  }
  cplx qm = 1.0, qp = 1.0;
  for (cplx lam : s.roots) {
    const cplx q0 = guarded(u - lam + 0.5 * eta);
    qm *= model.ell1(u - lam - 0.5 * eta) / q0;
    qp *= model.ell1(u - lam + 1.5 * eta) / q0;
  }
  return {tw * ipow(model.ell1(u + eta), n) / norm * qm, ipow(model.ell1(u), n) / (tw * norm) * qp};
}

}  // namespace

cplx lambda_tq(cplx u, const BetheSolution& s, const XyzModel& model, double pole_tol) {
  const TqTerms t = tq_terms(u, s, model, pole_tol);
  return t.a + t.d;
}

cplx lambda_tq(cplx u, const BetheSolution& solution, const ModelParams& params, double pole_tol) {
  return lambda_tq(u, solution, XyzModel(params), pole_tol);
}

double entireness_check(const BetheSolution& s, const XyzModel& model, double radius) {
  const auto& zeros_of = s.kind == SolutionKind::Singular ? s.nu_roots : s.roots;
  double worst = 0.0;
  for (cplx lam : zeros_of) {
    const cplx centre = lam - 0.5 * model.eta();
    cplx residue = 0.0;
    cplx residue_a = 0.0;
    for (int k = 0; k < 4; ++k) {
      const cplx w = radius * std::polar(1.0, 0.5 * kPi * k);
      const TqTerms t = tq_terms(centre + w, s, model, 0.0);
      residue += (t.a + t.d) * w;
      residue_a += t.a * w;
    }
    // Relative to the pole strength of a single term, which the two terms
    // must cancel.
    worst = std::max(worst, std::abs(residue) / std::max(std::abs(residue_a), 1e-300));
  }
  return worst;
}

cplx energy_from_lambda(const BetheSolution& s, const XyzModel& model, double step) {
  auto d = [&](double h) { return (lambda_tq(h, s, model) - lambda_tq(-h, s, model)) / (2.0 * h); };
  const cplx deriv = (4.0 * d(0.5 * step) - d(step)) / 3.0;
  const cplx l0 = lambda_tq(0.0, s, model);
  const cplx p0 = model.ell1_prime_zero();
  return 2.0 * model.ell1_eta() / p0 * deriv / l0 - static_cast<double>(model.n_sites()) * model.ell1_prime_eta() / p0;
}

std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  if (n == 0) return {};
  const std::size_t m = cost[0].size();
  if (m < n) throw InvalidParameters("hungarian: more rows than columns");
  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials formulation.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n, 0);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  return assignment;
}

MatchReport match_candidates(std::span<const MatchCandidate> cands, std::span<const SpectrumEntry> spectrum,
                             const MatchOptions& opts) {
  MatchReport report;
  report.energy_tol = opts.energy_tol;
  report.lambda_tol = opts.lambda_tol;
  const std::size_t ns = cands.size();
  const std::size_t ne = spectrum.size();
  if (ns == 0 || ne == 0) {
    for (std::size_t i = 0; i < ns; ++i) report.unmatched_solutions.push_back(i);
    for (std::size_t j = 0; j < ne; ++j) report.unmatched_spectrum.push_back(j);
    return report;
  }
  constexpr double big = 1e6;
  auto gaps = [&](std::size_t i, std::size_t j) {
    const double eg = std::abs(cands[i].energy - spectrum[j].energy);
    const auto& ed = spectrum[j].lambda_samples;
    double lg = cands[i].lambda.size() == ed.size() ? 0.0 : big;
    if (lg == 0.0) {
      for (std::size_t k = 0; k < ed.size(); ++k)
        lg = std::max(lg, std::abs(cands[i].lambda[k] - ed[k].value) / (1.0 + std::abs(ed[k].value)));
    }
    return std::pair<double, double>{eg, lg};
  };

  const bool rows_are_cands = ns <= ne;
  const std::size_t rows = rows_are_cands ? ns : ne;
  const std::size_t cols = rows_are_cands ? ne : ns;
  std::vector<std::vector<double>> cost(rows, std::vector<double>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = rows_are_cands ? r : c;
      const std::size_t j = rows_are_cands ? c : r;
      const auto [eg, lg] = gaps(i, j);
      cost[r][c] = std::min(big, eg / (1.0 + std::abs(spectrum[j].energy)) + lg);
    }
  }
  const auto assign = hungarian(cost);

  std::vector<char> cand_used(ns, 0), spec_used(ne, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t i = rows_are_cands ? r : assign[r];
    const std::size_t j = rows_are_cands ? assign[r] : r;
    const auto [eg, lg] = gaps(i, j);
    if (eg <= opts.energy_tol && lg <= opts.lambda_tol) {
      report.pairs.push_back({i, j, eg, lg});
      cand_used[i] = 1;
      spec_used[j] = 1;
      report.max_energy_gap = std::max(report.max_energy_gap, eg);
      report.max_lambda_gap = std::max(report.max_lambda_gap, lg);
    }
  }
  std::sort(report.pairs.begin(), report.pairs.end(),
            [](const MatchPair& a, const MatchPair& b) { return a.spectrum < b.spectrum; });
  for (std::size_t i = 0; i < ns; ++i)
    if (!cand_used[i]) report.unmatched_solutions.push_back(i);
  for (std::size_t j = 0; j < ne; ++j)
    if (!spec_used[j]) report.unmatched_spectrum.push_back(j);
  report.complete = report.unmatched_solutions.empty() && report.unmatched_spectrum.empty();
  return report;
}

MatchReport match_spectrum(std::span<const BetheSolution> solutions, std::span<const SpectrumEntry> spectrum,
                           const XyzModel& model, const MatchOptions& opts) {
  std::vector<MatchCandidate> cands(solutions.size());
  const std::vector<LambdaSample> none;
  const auto& samples = spectrum.empty() ? none : spectrum[0].lambda_samples;
  for (std::size_t i = 0; i < solutions.size(); ++i) {
    cands[i].energy = solutions[i].energy;
    try {
      for (const auto& smp : samples) cands[i].lambda.push_back(lambda_tq(smp.u, solutions[i], model));
    } catch (const PoleProximity&) {
      cands[i].lambda.clear();
    }
  }
  return match_candidates(cands, spectrum, opts);
}

}  // namespace xyzbethe
