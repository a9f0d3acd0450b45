#include "xyzbethe/lattice_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "xyzbethe/errors.hpp"

namespace xyzbethe {

void ModelParams::validate_basic() const {
  if (n_sites < 2 || n_sites % 2 != 0) {
    throw InvalidParameters("the chain length N must be even and >= 2");
  }
  if (!(tau.imag() > 0.0)) {
    throw InvalidParameters("Im tau must be positive");
  }
  if (!std::isfinite(eta.real()) || !std::isfinite(eta.imag())) {
    throw InvalidParameters("eta must be finite");
  }
}

bool ModelParams::is_generic() const {
  for (int p = 1; p <= max_denominator; ++p) {
    const cplx z = 0.5 * static_cast<double>(p) * eta;
    const double b = z.imag() / tau.imag();
    const double a = z.real() - b * tau.real();
    if (std::abs(a - std::round(a)) < genericity_guard &&
        std::abs(b - std::round(b)) < genericity_guard) {
      return false;
    }
  }
  return true;
}

void ModelParams::validate() const {
  validate_basic();
  if (!is_generic()) {
    throw InvalidParameters("eta is (numerically) a root of unity: P eta = 2K + 2L tau");
  }
}

XyzModel::XyzModel(const ModelParams& params, SeriesPolicy policy)
    : params_(params), ctx_((params.validate_basic(), params.tau), policy) {
  ell1_eta_ = ell(1, params_.eta, ctx_);
  ell1_prime_zero_ = xyzbethe::ell1_prime(0.0, ctx_);
  ell1_prime_eta_ = xyzbethe::ell1_prime(params_.eta, ctx_);
}

cplx XyzModel::ell1_log_derivative(cplx u) const {
  const auto p = ell1_with_derivative(u, ctx_);
  return p.derivative / p.value;
}

cplx XyzModel::g(cplx u) const {
  const auto p = ell1_with_derivative(u, ctx_);
  if (std::abs(p.value) == 0.0) throw PoleProximity("g(u) evaluated on a zero of ell_1");
  return ell1_eta_ * p.derivative / (ell1_prime_zero_ * p.value);
}

Couplings XyzModel::couplings() const {
  const cplx e = params_.eta;
  return {ell(4, e, ctx_) / ell(4, 0.0, ctx_), ell(3, e, ctx_) / ell(3, 0.0, ctx_),
          ell(2, e, ctx_) / ell(2, 0.0, ctx_)};
}

Couplings couplings(const ModelParams& params) { return XyzModel(params).couplings(); }

std::array<cplx, 4> r_matrix_weights(cplx u, const XyzModel& model) {
  const auto& ctx = model.context();
  const cplx eta = model.eta();
  const cplx b1_eta = bar_ell(1, eta, ctx);
  const cplx b4_eta = bar_ell(4, eta, ctx);
  const cplx b4_0 = bar_ell(4, 0.0, ctx);
  if (std::abs(b1_eta) == 0.0 || std::abs(b4_eta) == 0.0 || std::abs(b4_0) == 0.0) {
    throw DegenerateEta("R-matrix normalisation vanishes (bar_ell_1(eta) or bar_ell_4(eta) is zero)");
  }
  const cplx b1_u = bar_ell(1, u, ctx);
  const cplx b4_u = bar_ell(4, u, ctx);
  const cplx b1_ue = bar_ell(1, u + eta, ctx);
  const cplx b4_ue = bar_ell(4, u + eta, ctx);
  return {b4_u * b1_ue / (b4_0 * b1_eta), b1_u * b4_ue / (b4_0 * b1_eta),
          b4_u * b4_ue / (b4_0 * b4_eta), b1_u * b1_ue / (b4_0 * b4_eta)};
}

ComplexMatrix r_matrix(cplx u, const XyzModel& model) {
  const auto [a1, a2, a3, a4] = r_matrix_weights(u, model);
  ComplexMatrix r(4, 4);
  r(0, 0) = a1;
  r(0, 3) = a4;
  r(1, 1) = a2;
  r(1, 2) = a3;
  r(2, 1) = a3;
  r(2, 2) = a2;
  r(3, 0) = a4;
  r(3, 3) = a1;
  return r;
}

ComplexMatrix r_matrix(cplx u, const ModelParams& params) { return r_matrix(u, XyzModel(params)); }

namespace {

void check_size(int n_sites, int max_sites) {
  if (n_sites < 1) throw InvalidParameters("chain needs at least one site");
  if (n_sites > max_sites) {
    std::ostringstream os;
    os << "N = " << n_sites << " exceeds the dense limit N_max = " << max_sites;
    throw DimensionTooLarge(os.str());
  }
}

}  // namespace

ComplexMatrix transfer_from_r(const ComplexMatrix& r, int n_sites, int max_sites) {
  check_size(n_sites, max_sites);
  // Operator-valued auxiliary blocks: (r_ab)_{st} = R(2a+s, 2b+t).
  std::array<ComplexMatrix, 4> site_block;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      ComplexMatrix m(2, 2);
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) m(s, t) = r(2 * a + s, 2 * b + t);
      site_block[2 * a + b] = m;
    }
  // Monodromy blocks T_ab on sites 1..n, built as T_ab = sum_c r_ac[n] T_cb.
  std::array<ComplexMatrix, 4> mono = site_block;
  for (int n = 2; n <= n_sites; ++n) {
    std::array<ComplexMatrix, 4> next;
    const std::size_t dim = std::size_t{1} << n;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        ComplexMatrix acc(dim, dim);
        for (int c = 0; c < 2; ++c) {
          const ComplexMatrix& prev = mono[2 * c + b];
          const ComplexMatrix& loc = site_block[2 * a + c];
          const std::size_t pd = prev.rows();
          for (std::size_t i = 0; i < pd; ++i)
            for (std::size_t j = 0; j < pd; ++j) {
              const cplx pij = prev(i, j);
              if (pij == cplx(0.0)) continue;
              for (int s = 0; s < 2; ++s)
                for (int t = 0; t < 2; ++t) {
                  const cplx l = loc(s, t);
                  if (l != cplx(0.0)) acc(2 * i + s, 2 * j + t) += pij * l;
                }
            }
        }
        next[2 * a + b] = std::move(acc);
      }
    mono = std::move(next);
  }
  return mono[0] + mono[3];
}

ComplexMatrix transfer_matrix(cplx u, const XyzModel& model, int max_sites) {
  check_size(model.n_sites(), max_sites);
  return transfer_from_r(r_matrix(u, model), model.n_sites(), max_sites);
}

ComplexMatrix transfer_matrix(cplx u, const ModelParams& params, int max_sites) {
  return transfer_matrix(u, XyzModel(params), max_sites);
}

ComplexMatrix heisenberg_hamiltonian(int n_sites, const Couplings& j, int max_sites) {
  check_size(n_sites, max_sites);
  const std::size_t dim = std::size_t{1} << n_sites;
  ComplexMatrix h(dim, dim);
  for (std::size_t state = 0; state < dim; ++state) {
    for (int n = 0; n < n_sites; ++n) {
      const int m = (n + 1) % n_sites;
      // site k (0-based) lives in bit (N-1-k)
      const std::size_t bn = std::size_t{1} << (n_sites - 1 - n);
      const std::size_t bm = std::size_t{1} << (n_sites - 1 - m);
      const bool sn = state & bn;
      const bool sm = state & bm;
      const bool same = (sn == sm);
      const std::size_t flipped = state ^ bn ^ bm;
      h(flipped, state) += j.jx + (same ? -1.0 : 1.0) * j.jy;
      h(state, state) += same ? j.jz : -j.jz;
    }
  }
  return h;
}

ComplexMatrix hamiltonian(const ModelParams& params, int max_sites) {
  return heisenberg_hamiltonian(params.n_sites, couplings(params), max_sites);
}

ComplexMatrix hamiltonian_from_transfer(const std::function<ComplexMatrix(cplx)>& transfer,
                                        cplx prefactor, cplx shift, double step) {
  const ComplexMatrix t0 = transfer(0.0);
  LuDecomposition lu(t0);
  if (lu.pivot_ratio() < 1e-12) throw SingularInverse("t(0) is not invertible");
  auto central = [&](double h) { return (transfer(h) - transfer(-h)) * cplx(1.0 / (2.0 * h)); };
  const ComplexMatrix d1 = central(step);
  const ComplexMatrix d2 = central(0.5 * step);
  const ComplexMatrix deriv = (d2 * cplx(4.0) - d1) * cplx(1.0 / 3.0);
  ComplexMatrix h = (deriv * lu.inverse()) * prefactor;
  for (std::size_t i = 0; i < h.rows(); ++i) h(i, i) -= shift;
  return h;
}

ComplexMatrix hamiltonian_from_transfer(const ModelParams& params, int max_sites) {
  const XyzModel model(params);
  check_size(params.n_sites, max_sites);
  const cplx pref = 2.0 * model.ell1_eta() / model.ell1_prime_zero();
  const cplx shift = static_cast<double>(params.n_sites) * model.ell1_prime_eta() / model.ell1_prime_zero();
  return hamiltonian_from_transfer([&](cplx u) { return transfer_matrix(u, model, max_sites); }, pref,
                                   shift);
}

std::vector<cplx> default_lambda_probes() {
  return {{0.2371, 0.0193}, {0.3139, -0.0271}, {-0.1618, 0.0841}, {0.4423, 0.1307}, {0.0719, -0.1153}};
}

namespace {

// Groups eigenvalues closer than tol * max(1, |lambda|); returns a cluster id
// per eigenvalue, 0 for isolated ones.
std::vector<int> cluster_ids(const std::vector<cplx>& values, double tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double scale = std::max(1.0, std::max(std::abs(values[i]), std::abs(values[j])));
      if (std::abs(values[i] - values[j]) < tol * scale) parent[find(i)] = find(j);
    }
  std::vector<int> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++count[find(i)];
  std::vector<int> id(n, 0);
  std::vector<int> label(n, 0);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    if (count[r] < 2) continue;
    if (label[r] == 0) label[r] = ++next;
    id[i] = label[r];
  }
  return id;
}

}  // namespace

std::vector<SpectrumEntry> spectrum_from_transfer(const std::function<ComplexMatrix(cplx)>& transfer,
                                                  const ComplexMatrix& hamiltonian,
                                                  std::span<const cplx> u_samples,
                                                  const SpectrumOptions& opts) {
  ComplexMatrix probe = transfer(opts.probe0);
  EigenDecomposition dec = eigen_decompose(probe, opts.eigen);
  std::vector<int> clusters = cluster_ids(dec.values, opts.cluster_tol);
  if (std::any_of(clusters.begin(), clusters.end(), [](int c) { return c != 0; })) {
    // Second probe: a generic combination splits whatever t(probe1) splits.
    const cplx mix{0.6180339887, 0.3141592654};
    probe += transfer(opts.probe1) * mix;
    dec = eigen_decompose(probe, opts.eigen);
    clusters = cluster_ids(dec.values, opts.cluster_tol);
    if (opts.strict && std::any_of(clusters.begin(), clusters.end(), [](int c) { return c != 0; })) {
      throw DegeneracyUnresolved("transfer-matrix eigenvalues stay degenerate at both probes");
    }
  }
  const std::size_t dim = dec.values.size();
  std::vector<ComplexMatrix> sample_mats;
  sample_mats.reserve(u_samples.size());
  for (cplx u : u_samples) sample_mats.push_back(transfer(u));

  std::vector<SpectrumEntry> out(dim);
  std::vector<cplx> v(dim);
  for (std::size_t e = 0; e < dim; ++e) {
    for (std::size_t i = 0; i < dim; ++i) v[i] = dec.vectors(i, e);
    const double vv = std::pow(norm2(v), 2);
    const auto hv = hamiltonian * std::span<const cplx>(v);
    SpectrumEntry& entry = out[e];
    entry.energy = dot_conj(v, hv) / vv;
    double res = 0.0;
    for (std::size_t i = 0; i < dim; ++i) res += std::norm(hv[i] - entry.energy * v[i]);
    entry.eigen_residual = std::sqrt(res / vv);
    entry.degeneracy_tag = clusters[e];
    for (std::size_t s = 0; s < u_samples.size(); ++s) {
      const auto tv = sample_mats[s] * std::span<const cplx>(v);
      entry.lambda_samples.push_back({u_samples[s], dot_conj(v, tv) / vv});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    if (a.energy.real() != b.energy.real()) return a.energy.real() < b.energy.real();
    return a.energy.imag() < b.energy.imag();
  });
  return out;
}

std::vector<SpectrumEntry> exact_spectrum(const ModelParams& params, std::span<const cplx> u_samples,
                                          const SpectrumOptions& opts) {
  const XyzModel model(params);
  check_size(params.n_sites, opts.max_sites);
  const ComplexMatrix h = heisenberg_hamiltonian(params.n_sites, model.couplings(), opts.max_sites);
  return spectrum_from_transfer([&](cplx u) { return transfer_matrix(u, model, opts.max_sites); }, h,
                                u_samples, opts);
}

}  // namespace xyzbethe
