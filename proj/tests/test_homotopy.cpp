#include <algorithm>

#include "doctest.h"
#include "xyzbethe/errors.hpp"
#include "xyzbethe/homotopy.hpp"

using namespace xyzbethe;

namespace {

ModelParams start_params() {
  ModelParams p;
  p.n_sites = 4;
  p.tau = {0.0, 1.8};
  p.eta = kPi / 10.0;
  return p;
}

const CorrespondenceReport& full_scan() {
  static const CorrespondenceReport rep = homotopy_correspondence(start_params(), 12.0, 0);
  return rep;
}

double strip_gap(cplx a, cplx b) {
  cplx d = a - b;
  d -= cplx(0.0, kPi * std::round(d.imag() / kPi));
  return std::abs(d);
}

const CorrespondencePair* pair_of(const CorrespondenceReport& rep, std::size_t path) {
  for (const auto& p : rep.pairs)
    if (p.path == path) return &p;
  return nullptr;
}

}  // namespace

TEST_CASE("every elliptic solution reaches its XXZ partner") {
  const auto& rep = full_scan();
  CHECK(rep.paths.size() == 16);
  CHECK(rep.xxz.size() == 16);
  CHECK(rep.complete);
  CHECK(rep.pairs.size() == 16);
  CHECK(rep.unmatched_paths.empty());
  CHECK(rep.unmatched_xxz.empty());
  CHECK_FALSE(rep.trivial);
  for (const auto& p : rep.pairs) {
    CHECK(p.root_gap < 1e-3);
    const auto& path = rep.paths[p.path];
    const auto& x = rep.xxz[p.xxz];
    CHECK_FALSE(path.lost);
    CHECK(path.phantom_count == x.phantom_count);
    CHECK(p.side == x.phantom_side);
    CHECK(p.beta == x.beta);
    for (const auto& img : path.images) {
      if (img.phantom) continue;
      double best = 1e300;
      for (cplx mu : x.regular_roots) best = std::min(best, strip_gap(img.mu, mu));
      CHECK(best < 1e-3);
    }
  }
}

TEST_CASE("ground state limit") {
  const auto& rep = full_scan();
  std::size_t gs = 0;
  for (std::size_t i = 1; i < rep.paths.size(); ++i)
    if (rep.paths[i].start.energy.real() < rep.paths[gs].start.energy.real()) gs = i;
  const auto& path = rep.paths[gs];
  REQUIRE(path.images.size() == 2);
  std::vector<double> re;
  for (const auto& img : path.images) {
    CHECK_FALSE(img.phantom);
    CHECK(std::abs(img.mu.imag()) < 1e-3);
    re.push_back(img.mu.real());
  }
  std::sort(re.begin(), re.end());
  CHECK(std::abs(re[0] + 0.2836) < 1e-3);
  CHECK(std::abs(re[1] - 0.2836) < 1e-3);
}

TEST_CASE("the (0, tau/2) row grows one phantom root") {
  const auto& rep = full_scan();
  const cplx tau = start_params().tau;
  bool found = false;
  for (std::size_t i = 0; i < rep.paths.size(); ++i) {
    const auto& s = rep.paths[i].start;
    if (s.kind != SolutionKind::Regular || s.beta != 1) continue;
    const bool zero = std::abs(s.roots[0]) < 1e-8 || std::abs(s.roots[1]) < 1e-8;
    const bool half = std::abs(s.roots[0] - 0.5 * tau) < 1e-8 || std::abs(s.roots[1] - 0.5 * tau) < 1e-8;
    if (!zero || !half) continue;
    found = true;
    const auto& path = rep.paths[i];
    CHECK(path.phantom_count == 1);
    const CorrespondencePair* p = pair_of(rep, i);
    REQUIRE(p != nullptr);
    const auto& x = rep.xxz[p->xxz];
    CHECK(x.phantom_count == 1);
    REQUIRE(x.regular_roots.size() == 1);
    CHECK(strip_gap(x.regular_roots[0], 0.0) < 1e-3);
    // Quasi-string selection rule: phantom at +-tau/2 + kappa, and
    // 2 (lambda_regular + kappa) is an integer.
    const double half_tau = 0.5 * path.points.back().im_tau;
    cplx twice = 0.0;
    for (const auto& img : path.images) {
      if (!img.phantom) {
        twice += 2.0 * img.lambda;
        continue;
      }
      CHECK(std::abs((kI * kPi * img.lambda).real()) > 5.0);
      const cplx kappa = img.lambda - cplx(0.0, img.lambda.imag() > 0.0 ? half_tau : -half_tau);
      CHECK(std::abs(kappa.imag()) < 1e-2);
      twice += 2.0 * kappa;
    }
    CHECK(std::abs(twice - std::round(twice.real())) < 1e-2);
  }
  CHECK(found);
}

TEST_CASE("energy gaps shrink beyond Im tau = 4") {
  const auto& rep = full_scan();
  for (const auto& p : rep.pairs) {
    const auto& path = rep.paths[p.path];
    const cplx target = rep.xxz[p.xxz].energy;
    double prev = 1e300;
    for (const auto& pt : path.points) {
      if (pt.im_tau <= 4.0) continue;
      const double gap = std::abs(pt.energy - target);
      CHECK(gap <= prev + 1e-12);
      prev = gap;
    }
    CHECK(prev < 1e-6);
  }
}

TEST_CASE("path log is consistent") {
  const auto& rep = full_scan();
  for (const auto& path : rep.paths) {
    REQUIRE(path.points.size() >= 2);
    CHECK(path.points.front().im_tau == doctest::Approx(1.8));
    CHECK(path.points.back().im_tau == doctest::Approx(12.0));
    for (std::size_t k = 1; k < path.points.size(); ++k)
      CHECK(path.points[k].im_tau > path.points[k - 1].im_tau);
    for (const auto& pt : path.points) CHECK(pt.residual < 1e-8);
  }
}

TEST_CASE("a coarse schedule forces step halving") {
  const CorrespondenceReport rep = homotopy_correspondence(start_params(), 12.0, 3);
  CHECK(rep.warnings.size() > 0);
  for (const auto& w : rep.warnings) CHECK(w.message.rfind("PathJumping", 0) == 0);
  int halvings = 0;
  for (const auto& path : rep.paths)
    for (const auto& pt : path.points) halvings += pt.halvings;
  CHECK(halvings > 0);
}

TEST_CASE("start equal to target is the identity") {
  const CorrespondenceReport rep = homotopy_correspondence(start_params(), 1.8, 0);
  CHECK(rep.trivial);
  CHECK(rep.complete);
  CHECK(rep.xxz.empty());
  CHECK(rep.pairs.size() == rep.paths.size());
  for (const auto& p : rep.pairs) CHECK(p.path == p.xxz);
  for (const auto& path : rep.paths) {
    CHECK(path.points.size() == 1);
    CHECK(path.end.roots == path.start.roots);
    CHECK(path.end.beta == path.start.beta);
  }
}

TEST_CASE("continuation rejects a target below the start") {
  const ModelParams p = start_params();
  BetheSolution s;
  s.roots = {0.0, 0.5};
  HomotopyOptions opts;
  opts.target_im_tau = 1.0;
  CHECK_THROWS_AS(continue_solution(p, s, opts), InvalidParameters);
}

TEST_CASE("correspondence is deterministic") {
  const CorrespondenceReport a = homotopy_correspondence(start_params(), 6.0, 0);
  const CorrespondenceReport b = homotopy_correspondence(start_params(), 6.0, 0);
  REQUIRE(a.pairs.size() == b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    CHECK(a.pairs[i].path == b.pairs[i].path);
    CHECK(a.pairs[i].xxz == b.pairs[i].xxz);
  }
  for (std::size_t i = 0; i < a.paths.size(); ++i) CHECK(a.paths[i].end.roots == b.paths[i].end.roots);
}
