#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "xyzbethe/elliptic.hpp"
#include "xyzbethe/linalg.hpp"

namespace xyzbethe {

inline constexpr int kDefaultMaxSites = 10;

// Full problem definition of the periodic XYZ chain.
struct ModelParams {
  int n_sites = 4;
  cplx tau{0.0, 0.6};
  cplx eta{0.0, 0.0};
  double genericity_guard = 1e-8;
  int max_denominator = 12;  // P_max of the root-of-unity exclusion

  int num_roots() const noexcept { return n_sites / 2; }
  cplx gamma() const noexcept { return kI * kPi * eta; }

  // N even >= 2 and Im tau > 0. Throws InvalidParameters.
  void validate_basic() const;
  // Additionally rejects eta = (2K + 2L tau) / P for P <= max_denominator.
  void validate() const;
  bool is_generic() const;
};

struct Couplings {
  cplx jx;
  cplx jy;
  cplx jz;
};

// Cached elliptic data of one parameter set: the theta normalisations used
// by the R-matrix, the energy kernel g(u) and the transfer-matrix Hamiltonian.
class XyzModel {
 public:
  explicit XyzModel(const ModelParams& params, SeriesPolicy policy = {});

  const ModelParams& params() const noexcept { return params_; }
  const EllipticContext& context() const noexcept { return ctx_; }
  int n_sites() const noexcept { return params_.n_sites; }
  int num_roots() const noexcept { return params_.num_roots(); }
  cplx eta() const noexcept { return params_.eta; }
  cplx tau() const noexcept { return params_.tau; }
  cplx gamma() const noexcept { return params_.gamma(); }

  cplx ell1(cplx u) const { return ell(1, u, ctx_); }
  cplx ell1_prime(cplx u) const { return xyzbethe::ell1_prime(u, ctx_); }
  // ell_1'(u) / ell_1(u)
  cplx ell1_log_derivative(cplx u) const;

  cplx ell1_eta() const noexcept { return ell1_eta_; }
  cplx ell1_prime_zero() const noexcept { return ell1_prime_zero_; }
  cplx ell1_prime_eta() const noexcept { return ell1_prime_eta_; }

  // g(u) = ell_1(eta) ell_1'(u) / (ell_1'(0) ell_1(u))
  cplx g(cplx u) const;

  Couplings couplings() const;

 private:
  ModelParams params_;
  EllipticContext ctx_;
  cplx ell1_eta_;
  cplx ell1_prime_zero_;
  cplx ell1_prime_eta_;
};

Couplings couplings(const ModelParams& params);

// Entries alpha_1..alpha_4 of the eight-vertex R-matrix.
std::array<cplx, 4> r_matrix_weights(cplx u, const XyzModel& model);
// 4x4 matrix on V_aux (x) V_site, basis |00>,|01>,|10>,|11>.
ComplexMatrix r_matrix(cplx u, const XyzModel& model);
ComplexMatrix r_matrix(cplx u, const ModelParams& params);

// t = tr_0 R_{0N} ... R_{01} for an arbitrary 4x4 R acting on (aux, site).
// Site 1 is the most significant bit of the basis index.
ComplexMatrix transfer_from_r(const ComplexMatrix& r, int n_sites, int max_sites = kDefaultMaxSites);
ComplexMatrix transfer_matrix(cplx u, const XyzModel& model, int max_sites = kDefaultMaxSites);
ComplexMatrix transfer_matrix(cplx u, const ModelParams& params, int max_sites = kDefaultMaxSites);

// Sum over bonds of Jx sx sx + Jy sy sy + Jz sz sz, periodic.
ComplexMatrix heisenberg_hamiltonian(int n_sites, const Couplings& j, int max_sites = kDefaultMaxSites);
ComplexMatrix hamiltonian(const ModelParams& params, int max_sites = kDefaultMaxSites);

// H = prefactor * t'(0) t(0)^{-1} - shift * 1, with t'(0) from Richardson-
// extrapolated central differences. Throws SingularInverse.
ComplexMatrix hamiltonian_from_transfer(const std::function<ComplexMatrix(cplx)>& transfer,
                                        cplx prefactor, cplx shift, double step = 1e-3);
ComplexMatrix hamiltonian_from_transfer(const ModelParams& params, int max_sites = kDefaultMaxSites);

struct LambdaSample {
  cplx u;
  cplx value;
};

struct SpectrumEntry {
  cplx energy;
  std::vector<LambdaSample> lambda_samples;
  int degeneracy_tag = 0;  // 0: simple; k > 0: k-th unresolved cluster
  double eigen_residual = 0.0;
};

struct SpectrumOptions {
  cplx probe0{0.2371, 0.0193};
  cplx probe1{0.3139, -0.0271};
  double cluster_tol = 1e-8;
  bool strict = false;  // throw DegeneracyUnresolved instead of tagging
  int max_sites = kDefaultMaxSites;
  EigenOptions eigen;
};

// Default probe grid for Lambda(u) comparisons.
std::vector<cplx> default_lambda_probes();

// Diagonalises t(probe0) (and t(probe0) + c t(probe1) when clusters remain),
// then evaluates energies and Lambda(u) by Rayleigh quotients on the common
// eigenvectors. Sorted by (Re E, Im E).
std::vector<SpectrumEntry> spectrum_from_transfer(const std::function<ComplexMatrix(cplx)>& transfer,
                                                  const ComplexMatrix& hamiltonian,
                                                  std::span<const cplx> u_samples,
                                                  const SpectrumOptions& opts = {});
std::vector<SpectrumEntry> exact_spectrum(const ModelParams& params, std::span<const cplx> u_samples,
                                          const SpectrumOptions& opts = {});

}  // namespace xyzbethe
