#include "xyzbethe/homotopy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "log_newton.hpp"
#include "xyzbethe/errors.hpp"

namespace xyzbethe {

namespace {

bool is_trivial(double y0, double target) { return std::abs(target - y0) <= 1e-12 * y0; }

double lattice_a(cplx z, cplx tau) { return z.real() - z.imag() / tau.imag() * tau.real(); }

// Integer shifts of z along the real period towards ref.
cplx unwrap_towards(cplx z, cplx ref, cplx tau) { return z + std::round(lattice_a(ref - z, tau)); }

cplx reduce_strip(cplx z) {
  const double k = std::floor(z.imag() / kPi + 1e-9);
  return z - cplx(0.0, k * kPi);
}

double strip_distance(cplx a, cplx b) {
  cplx d = a - b;
  d -= cplx(0.0, kPi * std::round(d.imag() / kPi));
  return std::abs(d);
}

// Largest pairwise gap of the best permutation, or infinity.
double strip_match_gap(std::span<const cplx> a, std::span<const cplx> b, double tol) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<char> used(b.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, double)> rec = [&](std::size_t i, double worst) {
    if (worst >= best) return;
    if (i == a.size()) {
      best = worst;
      return;
    }
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = strip_distance(a[i], b[j]);
      if (d >= tol) continue;
      used[j] = 1;
      rec(i + 1, std::max(worst, d));
      used[j] = 0;
    }
  };
  rec(0, 0.0);
  return best;
}

// min |J d + r|^2 + mu^2 |d|^2 through Householder QR of [J; mu I].
std::vector<cplx> regularized_step(const ComplexMatrix& j, std::span<const cplx> r, double mu) {
  const std::size_t m = r.size();
  const std::size_t rows = 2 * m;
  std::vector<std::vector<cplx>> a(rows, std::vector<cplx>(m, 0.0));
  std::vector<cplx> b(rows, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) a[i][k] = j(i, k);
    a[m + i][i] = mu;
    b[i] = -r[i];
  }
  for (std::size_t k = 0; k < m; ++k) {
    double norm = 0.0;
    for (std::size_t i = k; i < rows; ++i) norm += std::norm(a[i][k]);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const cplx phase = std::abs(a[k][k]) > 0 ? a[k][k] / std::abs(a[k][k]) : cplx(1.0);
    std::vector<cplx> v(rows, 0.0);
    for (std::size_t i = k; i < rows; ++i) v[i] = a[i][k];
    v[k] += phase * norm;
    double vn = 0.0;
    for (std::size_t i = k; i < rows; ++i) vn += std::norm(v[i]);
    if (vn == 0.0) continue;
    auto reflect = [&](auto&& get) {
      cplx d = 0.0;
      for (std::size_t i = k; i < rows; ++i) d += std::conj(v[i]) * get(i);
      return 2.0 * d / vn;
    };
    for (std::size_t c = k; c < m; ++c) {
      const cplx f = reflect([&](std::size_t i) { return a[i][c]; });
      for (std::size_t i = k; i < rows; ++i) a[i][c] -= f * v[i];
    }
    const cplx f = reflect([&](std::size_t i) { return b[i]; });
    for (std::size_t i = k; i < rows; ++i) b[i] -= f * v[i];
  }
  std::vector<cplx> d(m, 0.0);
  for (std::size_t k = m; k-- > 0;) {
    cplx acc = b[k];
    for (std::size_t c = k + 1; c < m; ++c) acc -= a[k][c] * d[c];
    d[k] = acc / a[k][k];
  }
  return d;
}

struct Corrected {
  std::vector<cplx> x;
  double norm = std::numeric_limits<double>::infinity();
  bool ok = false;
  std::string why;
};

// Damped Gauss-Newton with a small Tikhonov term. At large Im tau the
// quasi-string positions barely enter the equations; the regularisation
// leaves them where the predictor put them.
Corrected correct(const detail::LogSystem& sys, std::vector<cplx> x, const detail::NewtonSettings& st) {
  Corrected out;
  detail::SystemEval ev;
  try {
    ev = detail::evaluate(sys, x, st.pole_tol, true);
  } catch (const Error& e) {
    out.x = std::move(x);
    out.why = e.what();
    return out;
  }
  for (int it = 0; it <= st.max_iters; ++it) {
    if (ev.norm < st.tol) {
      out.x = std::move(x);
      out.norm = ev.norm;
      out.ok = true;
      return out;
    }
    if (it == st.max_iters) break;
    const double mu = 1e-10 * std::max(1.0, ev.jacobian.max_abs());
    std::vector<cplx> d = regularized_step(ev.jacobian, ev.residual, mu);
    double size = 0.0;
    for (cplx z : d) size = std::max(size, std::abs(z));
    if (!std::isfinite(size)) break;
    if (size > st.max_step)
      for (auto& z : d) z *= st.max_step / size;
    bool accepted = false;
    double t = 1.0;
    for (int ls = 0; ls < 12 && !accepted; ++ls, t *= 0.5) {
      std::vector<cplx> trial(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) trial[k] = x[k] + t * d[k];
      try {
        auto tev = detail::evaluate(sys, trial, st.pole_tol, true);
        if (tev.norm < (1.0 - 1e-4 * t) * ev.norm) {
          x = std::move(trial);
          ev = std::move(tev);
          accepted = true;
        }
      } catch (const Error&) {
      }
    }
    if (!accepted) break;
  }
  out.x = std::move(x);
  out.norm = ev.norm;
  char buf[96];
  std::snprintf(buf, sizeof buf, "corrector stalled at residual %.3g", ev.norm);
  out.why = buf;
  return out;
}

ModelParams at_height(const ModelParams& p, double im_tau) {
  ModelParams q = p;
  q.tau = cplx(p.tau.real(), im_tau);
  return q;
}

cplx path_energy(std::span<const cplx> x, bool singular, const XyzModel& model) {
  return singular ? energy_singular(x, model) : energy(x, model);
}

void classify(HomotopyPath& path, const XyzModel& model) {
  const cplx tau = model.tau();
  std::vector<double> phantom_a;
  bool plus = false, minus = false;
  auto& roots = path.end.kind == SolutionKind::Singular ? path.end.nu_roots : path.end.roots;
  for (cplx& lam : roots) {
    const double b = lam.imag() / tau.imag();
    if (b < -0.25) {
      // Same solution with the root on the upper quasi-string line.
      lam += tau;
      path.end.beta += 2;
      plus = true;
    } else if (b > 0.25) {
      minus = true;
    }
  }
  if (path.end.kind == SolutionKind::Singular) {
    path.end.roots = {0.5 * model.eta(), -0.5 * model.eta()};
    path.end.roots.insert(path.end.roots.end(), roots.begin(), roots.end());
  }
  for (cplx lam : path.end.roots) {
    RootImage img;
    img.lambda = lam;
    img.phantom = std::abs(lam.imag() / tau.imag()) > 0.25;
    if (img.phantom) {
      phantom_a.push_back(lattice_a(lam, tau));
    } else {
      img.mu = reduce_strip(kI * kPi * lam);
    }
    path.images.push_back(img);
  }
  const int m = static_cast<int>(phantom_a.size());
  path.phantom_count = m;
  path.mixed_sides = plus && minus;
  path.side = m == 0 ? PhantomSide::None : PhantomSide::MinusInfinity;
  if (m > 0) {
    // m a_j should agree mod 1.
    const double ref = m * phantom_a[0];
    double defect = 0.0;
    for (double a : phantom_a) {
      const double d = m * a - ref;
      defect = std::max(defect, std::abs(d - std::round(d)) / m);
    }
    path.string_defect = defect;
    double c = std::fmod(m * kPi * phantom_a[0], kPi);
    if (c < 0) c += kPi;
    if (kPi - c < 1e-9) c = 0.0;
    path.phantom_phase = c;
  }
}

}  // namespace

HomotopyPath continue_solution(const ModelParams& params, const BetheSolution& start, const HomotopyOptions& opts,
                               std::vector<PathWarning>* warnings, std::size_t path_id) {
  const double y0 = params.tau.imag();
  const double target = opts.target_im_tau;
  if (opts.steps < 0 || !(opts.step_factor > 1.0)) throw InvalidParameters("bad homotopy schedule");
  if (is_trivial(y0, target)) {
    HomotopyPath path;
    path.start_index = path_id;
    path.start = start;
    path.end = start;
    path.points.push_back(
        {y0, start.energy, start.residual_norm, 0, start.kind == SolutionKind::Singular ? start.nu_roots : start.roots});
    return path;
  }
  if (!(target > y0)) throw InvalidParameters("target Im tau must not be below the starting Im tau");
  const bool singular = start.kind == SolutionKind::Singular;
  const double h_nom = opts.steps > 0 ? std::log(target / y0) / opts.steps : std::log(opts.step_factor);
  const detail::NewtonSettings settings{opts.newton.newton_tol, opts.newton.max_newton_iters, opts.newton.max_step,
                                        opts.newton.pole_tol};

  HomotopyPath path;
  path.start_index = path_id;
  path.start = start;
  std::vector<cplx> x = singular ? start.nu_roots : start.roots;
  std::vector<cplx> x_prev;
  double y = y0, y_prev = y0;
  double h = h_nom;
  {
    const XyzModel model(params);
    path.points.push_back({y0, path_energy(x, singular, model), start.residual_norm, 0, x});
  }
  auto warn = [&](double at, std::string msg) {
    if (warnings) warnings->push_back({path_id, at, std::move(msg)});
  };

  int halvings = 0;
  int total_halvings = 0;
  while (y < target * (1.0 - 1e-14) && !path.lost) {
    const double step = std::min(h, std::log(target / y));
    const double y_new = std::min(target, y * std::exp(step));
    const XyzModel model_new(at_height(params, y_new));
    const detail::LogSystem sys = detail::elliptic_system(model_new, start.beta, singular);

    std::vector<cplx> pred = x;
    if (!x_prev.empty()) {
      const double r = (y_new - y) / (y - y_prev);
      for (std::size_t j = 0; j < x.size(); ++j) pred[j] = x[j] + (x[j] - x_prev[j]) * r;
    } else if (!x.empty()) {
      // Tangent from a forward difference in Im tau.
      try {
        const XyzModel m0(at_height(params, y));
        const double dy = 1e-6 * y;
        const XyzModel m1(at_height(params, y + dy));
        const auto e0 = detail::evaluate(detail::elliptic_system(m0, start.beta, singular), x, 0.0, true);
        const auto e1 = detail::evaluate(detail::elliptic_system(m1, start.beta, singular), x, 0.0, false);
        std::vector<cplx> dx(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) dx[j] = -detail::reduce_log(e1.residual[j] - e0.residual[j]) / dy;
        if (solve_small(e0.jacobian, dx, 1e-13))
          for (std::size_t j = 0; j < x.size(); ++j) pred[j] = x[j] + dx[j] * (y_new - y);
      } catch (const Error&) {
      }
    }

    bool ok = true;
    std::string why;
    Corrected run;
    if (!x.empty()) {
      run = correct(sys, pred, settings);
      if (!run.ok) {
        ok = false;
        why = run.why;
      } else {
        // The corrector should only polish the prediction; a correction
        // comparable to the step itself means another solution was hit.
        double move = 0.0, corr = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
          const cplx z = unwrap_towards(run.x[j], pred[j], model_new.tau());
          move = std::max(move, std::abs(pred[j] - x[j]));
          corr = std::max(corr, std::abs(z - pred[j]));
        }
        if (corr > std::max(opts.jump_tol, 0.5 * move)) {
          ok = false;
          char buf[128];
          std::snprintf(buf, sizeof buf, "correction %.3g against a step of %.3g", corr, move);
          why = buf;
        }
      }
    }
    if (!ok) {
      ++halvings;
      ++total_halvings;
      if (halvings > opts.max_halvings || total_halvings > 8 * opts.max_halvings) {
        path.lost = true;
        warn(y_new, "PathJumping: giving up (" + why + ")");
        break;
      }
      warn(y_new, "PathJumping: " + why + "; halving the step");
      h = 0.5 * step;
      continue;
    }
    std::vector<cplx> next = x.empty() ? x : run.x;
    for (std::size_t j = 0; j < next.size(); ++j) next[j] = unwrap_towards(next[j], pred[j], model_new.tau());
    x_prev = std::move(x);
    x = std::move(next);
    y_prev = y;
    y = y_new;
    path.points.push_back({y, path_energy(x, singular, model_new), x.empty() ? 0.0 : run.norm, halvings, x});
    halvings = 0;
    h = std::min(h_nom, 2.0 * step);
  }

  const XyzModel end_model(at_height(params, y));
  path.end = start;
  path.end.residual_norm = path.points.back().residual;
  path.end.energy = path.points.back().energy;
  if (singular) {
    path.end.nu_roots = x;
    path.end.roots = {0.5 * params.eta, -0.5 * params.eta};
    path.end.roots.insert(path.end.roots.end(), x.begin(), x.end());
  } else {
    path.end.roots = x;
  }
  classify(path, end_model);
  return path;
}

CorrespondenceReport homotopy_correspondence(const ModelParams& params, const std::vector<BetheSolution>& starts,
                                             const std::vector<XXZSolution>& xxz, const HomotopyOptions& opts) {
  CorrespondenceReport report;
  report.xxz = xxz;
  report.paths.resize(starts.size());
  std::vector<std::vector<PathWarning>> warns(starts.size());
  detail::parallel_for(starts.size(), opts.newton.threads, [&](std::size_t i) {
    try {
      report.paths[i] = continue_solution(params, starts[i], opts, &warns[i], i);
    } catch (const Error& e) {
      HomotopyPath lost;
      lost.start_index = i;
      lost.start = starts[i];
      lost.end = starts[i];
      lost.lost = true;
      report.paths[i] = std::move(lost);
      warns[i].push_back({i, params.tau.imag(), std::string("PathJumping: ") + e.what()});
    }
  });
  for (auto& w : warns) report.warnings.insert(report.warnings.end(), w.begin(), w.end());

  if (is_trivial(params.tau.imag(), opts.target_im_tau)) {
    // Nothing moves: every start pairs with itself.
    report.trivial = true;
    report.xxz.clear();
    for (std::size_t i = 0; i < report.paths.size(); ++i) {
      const HomotopyPath& p = report.paths[i];
      if (p.lost || !equivalent(p.start, p.end, params.tau, opts.root_tol)) {
        report.unmatched_paths.push_back(i);
        continue;
      }
      report.pairs.push_back({i, i, PhantomSide::None, p.end.beta, 0.0, p.end.energy - p.start.energy});
    }
    report.complete = report.unmatched_paths.empty();
    return report;
  }

  // A path may pair with an XXZ solution on either side, provided beta
  // follows the representation.
  const std::size_t np = report.paths.size(), nx = xxz.size();
  struct Edge {
    std::size_t x;
    PhantomSide side;
    int beta;
    double gap;
  };
  std::vector<std::vector<Edge>> edges(np);
  for (std::size_t i = 0; i < np; ++i) {
    const HomotopyPath& p = report.paths[i];
    if (p.lost) continue;
    std::vector<cplx> mus;
    for (const auto& img : p.images)
      if (!img.phantom) mus.push_back(img.mu);
    const bool singular = p.start.kind == SolutionKind::Singular;
    for (std::size_t j = 0; j < nx; ++j) {
      const XXZSolution& s = xxz[j];
      if (s.phantom_count != p.phantom_count || s.singular != singular) continue;
      int beta = p.end.beta;
      if (s.phantom_side != p.side) {
        if (p.side == PhantomSide::None) continue;
        beta += (p.side == PhantomSide::MinusInfinity ? -2 : 2) * p.phantom_count;
      }
      if (beta != s.beta) continue;
      const double gap = strip_match_gap(mus, s.regular_roots, opts.root_tol);
      if (gap < opts.root_tol) edges[i].push_back({j, s.phantom_side, beta, gap});
    }
    std::sort(edges[i].begin(), edges[i].end(), [](const Edge& a, const Edge& b) { return a.gap < b.gap; });
  }
  // Augmenting paths (Kuhn).
  std::vector<std::ptrdiff_t> owner(nx, -1);
  std::vector<std::ptrdiff_t> chosen(np, -1);
  std::function<bool(std::size_t, std::vector<char>&)> augment = [&](std::size_t i, std::vector<char>& seen) {
    for (std::size_t e = 0; e < edges[i].size(); ++e) {
      const std::size_t j = edges[i][e].x;
      if (seen[j]) continue;
      seen[j] = 1;
      if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), seen)) {
        owner[j] = static_cast<std::ptrdiff_t>(i);
        chosen[i] = static_cast<std::ptrdiff_t>(e);
        return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < np; ++i) {
    std::vector<char> seen(nx, 0);
    augment(i, seen);
  }
  std::vector<char> x_used(nx, 0);
  for (std::size_t i = 0; i < np; ++i) {
    if (chosen[i] < 0) {
      report.unmatched_paths.push_back(i);
      continue;
    }
    const Edge& e = edges[i][static_cast<std::size_t>(chosen[i])];
    x_used[e.x] = 1;
    report.pairs.push_back({i, e.x, e.side, e.beta, e.gap, report.paths[i].end.energy - xxz[e.x].energy});
  }
  for (std::size_t j = 0; j < nx; ++j)
    if (!x_used[j]) report.unmatched_xxz.push_back(j);
  report.complete = report.unmatched_paths.empty() && report.unmatched_xxz.empty();
  return report;
}

CorrespondenceReport homotopy_correspondence(const ModelParams& params, double target_im_tau, int steps,
                                             const SolverConfig& config) {
  HomotopyOptions opts;
  opts.target_im_tau = target_im_tau;
  opts.steps = steps;
  opts.newton = config;
  const SolveResult start = multi_start_solve(params, config);
  if (is_trivial(params.tau.imag(), target_im_tau)) return homotopy_correspondence(params, start.solutions, {}, opts);
  const XXZSolveResult limit = xxz_solve(xxz_limit_of(params), config);
  return homotopy_correspondence(params, start.solutions, limit.solutions, opts);
}

}  // namespace xyzbethe
