#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "reference_tables.hpp"
#include "xyzbethe/errors.hpp"
#include "xyzbethe/expr.hpp"
#include "xyzbethe/lattice_model.hpp"

using namespace xyzbethe;

namespace {

ModelParams make(int n, cplx tau, cplx eta) {
  ModelParams p;
  p.n_sites = n;
  p.tau = tau;
  p.eta = eta;
  return p;
}

const cplx kEtaLeft = kPi / 10.0;
const cplx kEtaRight = kI * kPi / 10.0;
const cplx kEtaNonHerm = 1.0 / std::exp(1.0) + kI * kPi / 10.0;

ModelParams table1_left(int n = 4) { return make(n, {0.0, 0.6}, kEtaLeft); }
ModelParams table1_right(int n = 4) { return make(n, {0.0, 0.6}, kEtaRight); }
ModelParams table1_1(int n = 4) { return make(n, {0.4, 0.6}, kEtaNonHerm); }

template <std::size_t K>
std::vector<cplx> energies_of(const std::array<reftables::Row, K>& rows) {
  std::vector<cplx> out;
  for (const auto& r : rows) out.emplace_back(r.re, r.im);
  return out;
}

std::vector<cplx> ed_energies(const ModelParams& p) {
  std::vector<cplx> out;
  for (const auto& e : exact_spectrum(p, {})) out.push_back(e.energy);
  return out;
}

oracle::Dense to_dense(const ComplexMatrix& m) {
  oracle::Dense d(m.rows(), std::vector<cplx>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  return d;
}

}  // namespace

TEST_CASE("couplings") {
  const Couplings iso = couplings(make(4, {0.0, 0.6}, 0.0));
  CHECK(std::abs(iso.jx - 1.0) < 1e-14);
  CHECK(std::abs(iso.jy - 1.0) < 1e-14);
  CHECK(std::abs(iso.jz - 1.0) < 1e-14);

  const ModelParams p = table1_left();
  const Couplings j = couplings(p);
  const cplx jx = oracle::ell(4, p.eta, p.tau) / oracle::ell(4, 0.0, p.tau);
  const cplx jy = oracle::ell(3, p.eta, p.tau) / oracle::ell(3, 0.0, p.tau);
  const cplx jz = oracle::ell(2, p.eta, p.tau) / oracle::ell(2, 0.0, p.tau);
  CHECK(std::abs(j.jz / j.jx - jz / jx) < 1e-13);
  CHECK(std::abs(j.jy - jy) < 1e-13);

  for (const ModelParams& q : {table1_left(), table1_right(), make(6, {0.0, 1.8}, kPi / (5.0 * std::exp(1.0)))}) {
    const Couplings c = couplings(q);
    CHECK(std::abs(c.jx.imag()) < 1e-15);
    CHECK(std::abs(c.jy.imag()) < 1e-15);
    CHECK(std::abs(c.jz.imag()) < 1e-15);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(make(3, {0.0, 0.6}, kEtaLeft).validate(), InvalidParameters);
  CHECK_THROWS_AS(make(0, {0.0, 0.6}, kEtaLeft).validate(), InvalidParameters);
  CHECK_THROWS_AS(make(4, {0.0, -0.6}, kEtaLeft).validate(), InvalidParameters);
  CHECK_THROWS_AS(make(4, {0.0, 0.6}, 0.5).validate(), InvalidParameters);
  CHECK_THROWS_AS(make(4, {0.0, 0.6}, cplx(0.0, 0.6) / 3.0).validate(), InvalidParameters);
  CHECK_NOTHROW(table1_left().validate());
  CHECK_NOTHROW(table1_1().validate());
  CHECK_FALSE(make(4, {0.0, 0.6}, 0.25).is_generic());
}

TEST_CASE("R-matrix at u = 0 is the permutation") {
  for (const ModelParams& p : {table1_left(), table1_right(), table1_1()}) {
    const XyzModel model(p);
    const auto w = r_matrix_weights(0.0, model);
    CHECK(std::abs(w[0] - 1.0) < 1e-14);
    CHECK(std::abs(w[1]) < 1e-14);
    CHECK(std::abs(w[2] - 1.0) < 1e-14);
    CHECK(std::abs(w[3]) < 1e-14);
    const ComplexMatrix r = r_matrix(0.0, model);
    ComplexMatrix perm(4, 4);
    perm(0, 0) = perm(3, 3) = perm(1, 2) = perm(2, 1) = 1.0;
    CHECK(max_abs_diff(r, perm) < 1e-14);
  }
}

TEST_CASE("R-matrix weights under u -> u + 1") {
  const XyzModel model(table1_1());
  std::mt19937_64 rng(21);
  for (int k = 0; k < 10; ++k) {
    const cplx u = oracle::random_in_box(rng, 1.0, 0.2);
    const auto a = r_matrix_weights(u, model);
    const auto b = r_matrix_weights(u + 1.0, model);
    CHECK(std::abs(b[0] + a[0]) < 1e-12 * std::abs(a[0]) + 1e-14);
    CHECK(std::abs(b[1] + a[1]) < 1e-12 * std::abs(a[1]) + 1e-14);
    CHECK(std::abs(b[2] - a[2]) < 1e-12 * std::abs(a[2]) + 1e-14);
    CHECK(std::abs(b[3] - a[3]) < 1e-12 * std::abs(a[3]) + 1e-14);
    const cplx ca = a[0] * a[1] - a[2] * a[3];
    const cplx cb = b[0] * b[1] - b[2] * b[3];
    CHECK(std::abs(ca - cb) < 1e-12 * std::max(1.0, std::abs(ca)));
  }
}

TEST_CASE("Yang-Baxter equation, elliptic") {
  for (const ModelParams& p : {table1_left(), table1_right(), table1_1()}) {
    const XyzModel model(p);
    auto r = [&](cplx u) { return r_matrix(u, model); };
    CHECK(oracle::ybe_residual(r, 0.13, cplx(0.41, 0.2), -0.29) < 1e-10);
    std::mt19937_64 rng(23);
    for (int k = 0; k < 20; ++k) {
      const cplx u = oracle::random_in_box(rng, 0.5, 0.2);
      const cplx v = oracle::random_in_box(rng, 0.5, 0.2);
      const cplx w = oracle::random_in_box(rng, 0.5, 0.2);
      CHECK(oracle::ybe_residual(r, u, v, w) < 1e-10);
    }
  }
}

TEST_CASE("transfer matrices commute") {
  std::mt19937_64 rng(29);
  for (int n : {2, 4}) {
    for (const ModelParams& p : {table1_left(n), table1_1(n)}) {
      const XyzModel model(p);
      for (int k = 0; k < 10; ++k) {
        const cplx u = oracle::random_in_box(rng, 0.5, 0.2);
        const cplx v = oracle::random_in_box(rng, 0.5, 0.2);
        const ComplexMatrix tu = transfer_matrix(u, model);
        const ComplexMatrix tv = transfer_matrix(v, model);
        CHECK(commutator(tu, tv).max_abs() < 1e-9);
      }
    }
  }
}

TEST_CASE("t(0) is a cyclic shift") {
  const int n = 4;
  const ComplexMatrix t0 = transfer_matrix(0.0, table1_1(n));
  const std::size_t dim = std::size_t{1} << n;
  auto rotate_left = [&](std::size_t s) { return ((s << 1) | (s >> (n - 1))) & (dim - 1); };
  auto rotate_right = [&](std::size_t s) { return ((s >> 1) | ((s & 1u) << (n - 1))) & (dim - 1); };
  int left_ok = 0, right_ok = 0;
  for (std::size_t s = 0; s < dim; ++s) {
    auto only_at = [&](std::size_t target) {
      for (std::size_t r = 0; r < dim; ++r) {
        const double v = std::abs(t0(r, s));
        if (r == target ? v < 1e-12 : v > 1e-12) return false;
      }
      return true;
    };
    left_ok += only_at(rotate_left(s));
    right_ok += only_at(rotate_right(s));
  }
  CHECK(std::max(left_ok, right_ok) == static_cast<int>(dim));
}

TEST_CASE("trace of t(u) is the sum of its eigenvalues") {
  std::mt19937_64 rng(31);
  for (const ModelParams& p : {table1_left(2), table1_1(2)}) {
    for (int k = 0; k < 5; ++k) {
      const cplx u = oracle::random_in_box(rng, 0.5, 0.2);
      const cplx tr = transfer_matrix(u, p).trace();
      const std::vector<cplx> us{u};
      cplx sum = 0.0;
      for (const auto& e : exact_spectrum(p, us)) sum += e.lambda_samples.at(0).value;
      CHECK(std::abs(tr - sum) < 1e-10 * std::max(1.0, std::abs(tr)));
    }
  }
}

TEST_CASE("Hamiltonian structure") {
  for (const ModelParams& p : {table1_left(), table1_right(), make(6, {0.0, 1.8}, kPi / (5.0 * std::exp(1.0)))}) {
    const ComplexMatrix h = hamiltonian(p);
    CHECK(max_abs_diff(h, h.adjoint()) < 1e-12);
    CHECK(std::abs(h.trace()) < 1e-12);
  }
  const ComplexMatrix h11 = hamiltonian(table1_1());
  CHECK(max_abs_diff(h11, h11.adjoint()) > 1e-3);
  CHECK(std::abs(h11.trace()) < 1e-12);
}

TEST_CASE("Hamiltonian against the Pauli-string oracle") {
  for (int n : {2, 4, 6}) {
    for (const ModelParams& p : {table1_left(n), table1_1(n)}) {
      const Couplings j = couplings(p);
      const oracle::Dense ref = oracle::pauli_hamiltonian(n, j.jx, j.jy, j.jz);
      CHECK(oracle::max_diff(to_dense(hamiltonian(p)), ref) < 1e-13);
    }
  }
}

TEST_CASE("N = 2 spectrum in closed form") {
  for (const ModelParams& p : {table1_left(2), table1_right(2), table1_1(2)}) {
    const Couplings j = couplings(p);
    const std::vector<cplx> ref{2.0 * (j.jx - j.jy + j.jz), 2.0 * (-j.jx + j.jy + j.jz),
                                2.0 * (j.jx + j.jy - j.jz), -2.0 * (j.jx + j.jy + j.jz)};
    CHECK(oracle::unmatched(ed_energies(p), ref, 1e-10, 1e-10) == 0);
  }
}

TEST_CASE("Hamiltonian from the transfer matrix") {
  for (const ModelParams& p : {table1_left(), table1_1(), table1_right()}) {
    const ComplexMatrix direct = hamiltonian(p);
    const ComplexMatrix derived = hamiltonian_from_transfer(p);
    CHECK(max_abs_diff(direct, derived) < 1e-6);
    std::mt19937_64 rng(37);
    for (int k = 0; k < 3; ++k) {
      const cplx u = oracle::random_in_box(rng, 0.5, 0.2);
      CHECK(commutator(derived, transfer_matrix(u, p)).max_abs() < 1e-9);
      CHECK(commutator(direct, transfer_matrix(u, p)).max_abs() < 1e-9);
    }
  }
}

TEST_CASE("exact spectrum reproduces the tabulated energies") {
  CHECK(oracle::unmatched(ed_energies(table1_left()), energies_of(reftables::table1_left), 2e-4, 2e-4) == 0);
  CHECK(oracle::unmatched(ed_energies(table1_right()), energies_of(reftables::table1_right), 2e-4, 2e-4) == 0);
  CHECK(oracle::unmatched(ed_energies(table1_1()), energies_of(reftables::table1_1), 2e-3, 2e-3) == 0);

  const auto left = ed_energies(table1_left());
  const auto zeros = std::count_if(left.begin(), left.end(), [](cplx e) { return std::abs(e) < 1e-8; });
  CHECK(zeros == 7);
  const auto right = ed_energies(table1_right());
  CHECK(std::any_of(right.begin(), right.end(), [](cplx e) { return std::abs(e + 9.2437) < 2e-4; }));
  CHECK(std::any_of(right.begin(), right.end(), [](cplx e) { return std::abs(e - 9.7400) < 2e-4; }));

  std::vector<cplx> t3 = energies_of(reftables::table3_first);
  for (cplx e : energies_of(reftables::table3_second)) t3.push_back(e);
  CHECK(oracle::unmatched(ed_energies(make(6, {0.0, 1.8}, parse_complex("pi/(5e)"))), t3, 2e-4, 2e-4) == 0);

  std::vector<cplx> t4 = energies_of(reftables::table4a);
  for (cplx e : energies_of(reftables::table4b)) t4.push_back(e);
  CHECK(oracle::unmatched(ed_energies(table1_1(6)), t4, 2e-3, 2e-3) == 0);
}

TEST_CASE("spectrum sums and characteristic polynomial") {
  for (const ModelParams& p : {table1_left(), table1_1()}) {
    const auto spec = exact_spectrum(p, {});
    REQUIRE(spec.size() == 16);
    cplx sum = 0.0;
    for (const auto& e : spec) sum += e.energy;
    CHECK(std::abs(sum) < 1e-8);

    const ComplexMatrix h = hamiltonian(p);
    for (cplx shift : {cplx(0.37, 0.11), cplx(-1.3, 0.4), cplx(2.9, -0.7)}) {
      ComplexMatrix m = h;
      for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= shift;
      const cplx det = LuDecomposition(m).determinant();
      cplx prod = 1.0;
      for (const auto& e : spec) prod *= e.energy - shift;
      CHECK(std::abs(prod - det) < 1e-6 * std::abs(det));
    }
  }
}

TEST_CASE("Lambda samples are eigenvalues of t(u)") {
  const ModelParams p = table1_1();
  const auto probes = default_lambda_probes();
  const auto spec = exact_spectrum(p, probes);
  for (std::size_t k = 0; k < probes.size(); ++k) {
    std::vector<cplx> lam;
    for (const auto& e : spec) lam.push_back(e.lambda_samples.at(k).value);
    const auto ref = eigenvalues(transfer_matrix(probes[k], p));
    CHECK(oracle::unmatched(lam, ref, 1e-8, 1e-8) == 0);
  }
  for (const auto& e : spec) CHECK(e.eigen_residual < 1e-8);
}

TEST_CASE("dimension limit") {
  CHECK_THROWS_AS(transfer_matrix(0.1, table1_left(12)), DimensionTooLarge);
  CHECK_THROWS_AS(hamiltonian(table1_left(12)), DimensionTooLarge);
  CHECK_THROWS_AS(exact_spectrum(table1_left(12), {}), DimensionTooLarge);
  CHECK_NOTHROW(heisenberg_hamiltonian(12, couplings(table1_left()), 12));
}
