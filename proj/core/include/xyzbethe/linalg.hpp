#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace xyzbethe {

using cplx = std::complex<double>;

// Dense row-major complex matrix. Small and boring on purpose: the largest
// object in this project is a 1024 x 1024 transfer matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols, cplx fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<const cplx> data() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, cplx s);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> x);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
// max_ij |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b);  // sum conj(a_i) b_i
double norm2(std::span<const cplx> a);

// LU factorisation with partial pivoting.
class LuDecomposition {
 public:
  explicit LuDecomposition(ComplexMatrix a);

  // Smallest |pivot| / max|a_ij|; zero for an exactly singular matrix.
  double pivot_ratio() const noexcept { return pivot_ratio_; }
  cplx determinant() const;
  std::vector<cplx> solve(std::span<const cplx> b) const;
  ComplexMatrix inverse() const;

 private:
  ComplexMatrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  double pivot_ratio_ = 0.0;
};

// Solves the small dense system a x = b; returns false if a pivot vanishes
// below rel_tol * max|a|.
bool solve_small(ComplexMatrix a, std::vector<cplx>& b, double rel_tol = 1e-14);

struct EigenOptions {
  int max_iterations_per_eigenvalue = 60;
  int inverse_iteration_steps = 3;
  std::uint64_t seed = 0x5eed;
  bool balance = true;
};

struct EigenDecomposition {
  std::vector<cplx> values;
  ComplexMatrix vectors;  // column j is the unit right eigenvector of values[j]
};

// General complex eigenproblem: balancing, Householder reduction to upper
// Hessenberg form, shifted QR on the Hessenberg matrix. Eigenvectors come from
// inverse iteration on the Hessenberg form, mapped back through the
// reduction and the balancing scale. Throws QRNonConvergence.
std::vector<cplx> eigenvalues(const ComplexMatrix& a, const EigenOptions& opts = {});
EigenDecomposition eigen_decompose(const ComplexMatrix& a, const EigenOptions& opts = {});

}  // namespace xyzbethe
