#include "xyzbethe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "xyzbethe/errors.hpp"

namespace xyzbethe {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& v : data_) v *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx(0.0)) continue;
      auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> x) {
  std::vector<cplx> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    auto ai = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0.0)) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return k;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double m = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i) m = std::max(m, std::abs(da[i] - db[i]));
  return m;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b - b * a;
}

cplx dot_conj(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(std::span<const cplx> a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

// ---------------------------------------------------------------- LU

LuDecomposition::LuDecomposition(ComplexMatrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
  const std::size_t n = lu_.rows();
  if (n != lu_.cols()) throw InvalidParameters("LU needs a square matrix");
  const double scale = std::max(lu_.max_abs(), std::numeric_limits<double>::min());
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;
  double min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    min_pivot = std::min(min_pivot, best);
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
      sign_ = -sign_;
    }
    const cplx piv = lu_(k, k);
    if (piv == cplx(0.0)) continue;
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = lu_(i, k) / piv;
      lu_(i, k) = f;
      if (f == cplx(0.0)) continue;
      auto ri = lu_.row(i);
      auto rk = lu_.row(k);
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
    }
  }
  pivot_ratio_ = n ? min_pivot / scale : 1.0;
}

cplx LuDecomposition::determinant() const {
  cplx d = static_cast<double>(sign_);
  for (std::size_t i = 0; i < lu_.rows(); ++i) d *= lu_(i, i);
  return d;
}

std::vector<cplx> LuDecomposition::solve(std::span<const cplx> b) const {
  const std::size_t n = lu_.rows();
  if (pivot_ratio_ == 0.0) throw SingularInverse("LU solve with a singular matrix");
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    cplx s = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= lu_(ii, j) * x[j];
    x[ii] = s / lu_(ii, ii);
  }
  return x;
}

ComplexMatrix LuDecomposition::inverse() const {
  const std::size_t n = lu_.rows();
  ComplexMatrix inv(n, n);
  std::vector<cplx> e(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(e.begin(), e.end(), cplx(0.0));
    e[c] = 1.0;
    auto col = solve(e);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

bool solve_small(ComplexMatrix a, std::vector<cplx>& b, double rel_tol) {
  const std::size_t n = a.rows();
  const double scale = a.max_abs();
  if (!(scale > 0.0) || !std::isfinite(scale)) return false;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
    if (std::abs(a(p, k)) <= rel_tol * scale) return false;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(b[k], b[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const cplx f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  for (std::size_t ii = n; ii-- > 0;) {
    cplx s = b[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= a(ii, j) * b[j];
    b[ii] = s / a(ii, ii);
  }
  return true;
}

// ---------------------------------------------------------------- eigen

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Diagonal similarity D^{-1} A D with powers of two; returns D.
std::vector<double> balance(ComplexMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> d(n, 1.0);
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += abs1(a(j, i));
        r += abs1(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        d[i] *= f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) /= f;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
  return d;
}

// In-place Householder reduction a -> Q^H a Q (upper Hessenberg); returns Q.
ComplexMatrix hessenberg(ComplexMatrix& a, bool want_q) {
  const std::size_t n = a.rows();
  ComplexMatrix q = want_q ? ComplexMatrix::identity(n) : ComplexMatrix();
  std::vector<cplx> v(n);
  std::vector<cplx> w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(a(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const cplx x0 = a(k + 1, k);
    const cplx phase = (std::abs(x0) > 0.0) ? x0 / std::abs(x0) : cplx(1.0);
    const cplx alpha = -phase * xnorm;
    std::fill(v.begin(), v.end(), cplx(0.0));
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
    vnorm = std::sqrt(vnorm);
    if (vnorm == 0.0) continue;
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;

    // a <- (I - 2 v v^H) a
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * a(i, j);
      s *= 2.0;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= v[i] * s;
    }
    // a <- a (I - 2 v v^H)
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0.0;
      auto ai = a.row(i);
      for (std::size_t j = k + 1; j < n; ++j) s += ai[j] * v[j];
      s *= 2.0;
      for (std::size_t j = k + 1; j < n; ++j) ai[j] -= s * std::conj(v[j]);
    }
    if (want_q) {
      for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        auto qi = q.row(i);
        for (std::size_t j = k + 1; j < n; ++j) s += qi[j] * v[j];
        s *= 2.0;
        for (std::size_t j = k + 1; j < n; ++j) qi[j] -= s * std::conj(v[j]);
      }
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
  return q;
}

// Eigenvalues of an upper Hessenberg matrix (destroyed).
std::vector<cplx> hessenberg_qr(ComplexMatrix h, const EigenOptions& opts) {
  const std::size_t n = h.rows();
  std::vector<cplx> eig(n);
  if (n == 0) return eig;
  const double norm = std::max(h.max_abs(), std::numeric_limits<double>::min());
  long hi = static_cast<long>(n) - 1;
  int iter = 0;
  int total = 0;
  const int max_total = opts.max_iterations_per_eigenvalue * static_cast<int>(n);
  while (hi >= 0) {
    long l = hi;
    while (l > 0) {
      double s = abs1(h(l - 1, l - 1)) + abs1(h(l, l));
      if (s == 0.0) s = norm;
      if (abs1(h(l, l - 1)) <= kEps * s) {
        h(l, l - 1) = 0.0;
        break;
      }
      --l;
    }
    if (l == hi) {
      eig[hi] = h(hi, hi);
      --hi;
      iter = 0;
      continue;
    }
    ++iter;
    ++total;
    if (iter > opts.max_iterations_per_eigenvalue || total > max_total) {
      std::ostringstream os;
      os << "QR iteration did not converge (active block " << l << ".." << hi << ")";
      throw QRNonConvergence(os.str());
    }
    cplx shift;
    if (iter % 10 == 0) {
      // exceptional shift to break cycles
      shift = h(hi, hi) + cplx(0.75, 0.4375) * abs1(h(hi, hi - 1));
    } else {
      const cplx a = h(hi - 1, hi - 1);
      const cplx b = h(hi - 1, hi);
      const cplx c = h(hi, hi - 1);
      const cplx d = h(hi, hi);
      const cplx half = 0.5 * (a - d);
      const cplx disc = std::sqrt(half * half + b * c);
      const cplx m1 = 0.5 * (a + d) + disc;
      const cplx m2 = 0.5 * (a + d) - disc;
      shift = (std::abs(m1 - d) < std::abs(m2 - d)) ? m1 : m2;
    }
    cplx x = h(l, l) - shift;
    cplx y = h(l + 1, l);
    for (long k = l; k < hi; ++k) {
      if (k > l) {
        x = h(k, k - 1);
        y = h(k + 1, k - 1);
      }
      const double ax = std::abs(x);
      const double rho = std::hypot(ax, std::abs(y));
      if (rho == 0.0) continue;
      double c;
      cplx s;
      if (ax == 0.0) {
        c = 0.0;
        s = std::conj(y) / std::abs(y);
      } else {
        c = ax / rho;
        s = (x / ax) * std::conj(y) / rho;
      }
      const long jstart = (k > l) ? k - 1 : l;
      for (long j = jstart; j <= hi; ++j) {
        const cplx t1 = h(k, j);
        const cplx t2 = h(k + 1, j);
        h(k, j) = c * t1 + s * t2;
        h(k + 1, j) = -std::conj(s) * t1 + c * t2;
      }
      const long iend = std::min(k + 2, hi);
      for (long i = l; i <= iend; ++i) {
        const cplx t1 = h(i, k);
        const cplx t2 = h(i, k + 1);
        h(i, k) = t1 * c + t2 * std::conj(s);
        h(i, k + 1) = -t1 * s + t2 * c;
      }
      if (k > l) h(k + 1, k - 1) = 0.0;
    }
  }
  return eig;
}

// Solves (h - lambda) x = b for upper Hessenberg h via LU with adjacent-row
// pivoting; zero pivots are replaced by tiny so the solve always succeeds.
class HessenbergShiftedSolver {
 public:
  HessenbergShiftedSolver(const ComplexMatrix& h, cplx lambda, double tiny)
      : u_(h), mult_(h.rows(), 0.0), swapped_(h.rows(), false) {
    const std::size_t n = h.rows();
    for (std::size_t i = 0; i < n; ++i) u_(i, i) -= lambda;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (std::abs(u_(k + 1, k)) > std::abs(u_(k, k))) {
        for (std::size_t j = k; j < n; ++j) std::swap(u_(k, j), u_(k + 1, j));
        swapped_[k] = true;
      }
      if (u_(k, k) == cplx(0.0)) u_(k, k) = tiny;
      const cplx f = u_(k + 1, k) / u_(k, k);
      mult_[k] = f;
      if (f != cplx(0.0)) {
        auto rk = u_.row(k);
        auto rk1 = u_.row(k + 1);
        for (std::size_t j = k + 1; j < n; ++j) rk1[j] -= f * rk[j];
      }
      u_(k + 1, k) = 0.0;
    }
    if (n && u_(n - 1, n - 1) == cplx(0.0)) u_(n - 1, n - 1) = tiny;
  }

  void solve(std::vector<cplx>& b) const {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (swapped_[k]) std::swap(b[k], b[k + 1]);
      b[k + 1] -= mult_[k] * b[k];
    }
    for (std::size_t ii = n; ii-- > 0;) {
      cplx s = b[ii];
      auto ri = u_.row(ii);
      for (std::size_t j = ii + 1; j < n; ++j) s -= ri[j] * b[j];
      b[ii] = s / ri[ii];
    }
  }

 private:
  ComplexMatrix u_;
  std::vector<cplx> mult_;
  std::vector<bool> swapped_;
};

void normalise(std::vector<cplx>& v) {
  const double nv = norm2(v);
  if (nv > 0.0 && std::isfinite(nv)) {
    for (auto& x : v) x /= nv;
  }
}

}  // namespace

std::vector<cplx> eigenvalues(const ComplexMatrix& a, const EigenOptions& opts) {
  if (a.rows() != a.cols()) throw InvalidParameters("eigenvalues need a square matrix");
  ComplexMatrix w = a;
  if (opts.balance) balance(w);
  hessenberg(w, false);
  return hessenberg_qr(std::move(w), opts);
}

EigenDecomposition eigen_decompose(const ComplexMatrix& a, const EigenOptions& opts) {
  const std::size_t n = a.rows();
  if (n != a.cols()) throw InvalidParameters("eigen_decompose needs a square matrix");
  ComplexMatrix h = a;
  std::vector<double> scale(n, 1.0);
  if (opts.balance) scale = balance(h);
  const ComplexMatrix q = hessenberg(h, true);

  EigenDecomposition out;
  out.values = hessenberg_qr(h, opts);
  out.vectors = ComplexMatrix(n, n);

  const double hnorm = std::max(h.max_abs(), std::numeric_limits<double>::min());
  const double anorm = std::max(a.max_abs(), std::numeric_limits<double>::min());
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::vector<cplx> x(n);
  std::vector<cplx> v(n);
  for (std::size_t e = 0; e < n; ++e) {
    const cplx lambda = out.values[e];
    double best_res = std::numeric_limits<double>::infinity();
    std::vector<cplx> best;
    for (int attempt = 0; attempt < 3 && best_res > 1e-10; ++attempt) {
      const cplx shifted = lambda + cplx(1.0, 0.5) * (kEps * hnorm * (attempt + 1));
      HessenbergShiftedSolver solver(h, shifted, kEps * hnorm);
      for (auto& xi : x) xi = cplx(uni(rng), uni(rng));
      normalise(x);
      for (int it = 0; it < opts.inverse_iteration_steps; ++it) {
        solver.solve(x);
        normalise(x);
      }
      // back to the original basis: v = D Q x
      for (std::size_t i = 0; i < n; ++i) {
        cplx s = 0.0;
        auto qi = q.row(i);
        for (std::size_t j = 0; j < n; ++j) s += qi[j] * x[j];
        v[i] = scale[i] * s;
      }
      normalise(v);
      auto av = a * std::span<const cplx>(v);
      double res = 0.0;
      for (std::size_t i = 0; i < n; ++i) res += std::norm(av[i] - lambda * v[i]);
      res = std::sqrt(res) / anorm;
      if (res < best_res) {
        best_res = res;
        best = v;
      }
    }
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, e) = best[i];
  }
  return out;
}

}  // namespace xyzbethe
