#pragma once

// Reference implementations, written independently of the library code they
// cross-check: Taylor-series exponentials instead of eigendecomposition,
// explicit bra/ket contraction instead of index arithmetic, row reduction
// instead of SVD rank, and brute-force enumeration for counting arguments.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "eac/linalg.hpp"

namespace oracle {

using eac::ComplexMatrix;
using eac::ComplexVector;

inline ComplexMatrix kron_loops(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i1 = 0; i1 < a.rows(); ++i1)
    for (Eigen::Index j1 = 0; j1 < a.cols(); ++j1)
      for (Eigen::Index i2 = 0; i2 < b.rows(); ++i2)
        for (Eigen::Index j2 = 0; j2 < b.cols(); ++j2)
          out(i1 * b.rows() + i2, j1 * b.cols() + j2) = a(i1, j1) * b(i2, j2);
  return out;
}

// e^M by scaling and squaring with a Taylor series to order 30.
inline ComplexMatrix expm_taylor(const ComplexMatrix& m) {
  int squarings = 0;
  double scale = m.norm();
  while (scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const ComplexMatrix a = m / std::pow(2.0, squarings);
  ComplexMatrix sum = ComplexMatrix::Identity(m.rows(), m.cols());
  ComplexMatrix term = sum;
  for (int k = 1; k <= 30; ++k) {
    term = (term * a / double(k)).eval();
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = (sum * sum).eval();
  return sum;
}

inline ComplexMatrix propagator_taylor(const ComplexMatrix& h, double t) {
  return expm_taylor(std::complex<double>(0.0, -t) * h);
}

// tr_E via explicit (I ⊗ <k|) M (I ⊗ |k>) contractions.
inline ComplexMatrix ptrace_env(const ComplexMatrix& m, Eigen::Index d_s,
                                Eigen::Index d_e) {
  ComplexMatrix out = ComplexMatrix::Zero(d_s, d_s);
  const ComplexMatrix id_s = ComplexMatrix::Identity(d_s, d_s);
  for (Eigen::Index k = 0; k < d_e; ++k) {
    ComplexMatrix bra_k = ComplexMatrix::Zero(1, d_e);
    bra_k(0, k) = 1.0;
    const ComplexMatrix contract = kron_loops(id_s, bra_k);
    out += contract * m * contract.adjoint();
  }
  return out;
}

// Rank by Gaussian elimination with partial pivoting.
inline Eigen::Index rref_rank(ComplexMatrix m, double tol) {
  const double threshold = tol * std::max(1.0, m.cwiseAbs().maxCoeff());
  Eigen::Index rank = 0;
  for (Eigen::Index col = 0; col < m.cols() && rank < m.rows(); ++col) {
    Eigen::Index pivot = rank;
    for (Eigen::Index r = rank + 1; r < m.rows(); ++r) {
      if (std::abs(m(r, col)) > std::abs(m(pivot, col))) pivot = r;
    }
    if (std::abs(m(pivot, col)) <= threshold) continue;
    m.row(rank).swap(m.row(pivot));
    m.row(rank) /= m(rank, col);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      if (r != rank) m.row(r) -= m(r, col) * m.row(rank);
    }
    ++rank;
  }
  return rank;
}

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long out = 1;
  for (int i = 1; i <= k; ++i) {
    out = out * (n - k + i) / i;
  }
  return out;
}

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << std::complex<double>(0, 0), std::complex<double>(0, -1),
      std::complex<double>(0, 1), std::complex<double>(0, 0);
  return m;
}

inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline ComplexMatrix random_complex(std::mt19937_64& eng, Eigen::Index rows,
                                    Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal(eng);
      const double im = normal(eng);
      m(i, j) = std::complex<double>(re, im);
    }
  }
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& eng, Eigen::Index dim) {
  const ComplexMatrix g = random_complex(eng, dim, dim);
  return 0.5 * (g + g.adjoint());
}

inline ComplexMatrix random_unitary(std::mt19937_64& eng, Eigen::Index dim) {
  const ComplexMatrix g = random_complex(eng, dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, dim);
  return q;
}

inline ComplexMatrix random_density(std::mt19937_64& eng, Eigen::Index dim,
                                    Eigen::Index rank) {
  const ComplexMatrix g = random_complex(eng, dim, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

// Entries are multiples of 1/16: products and sums of a few of them are
// exact in double precision, which pins down "exact" algebraic identities.
inline ComplexMatrix dyadic_matrix(std::mt19937_64& eng, Eigen::Index rows,
                                   Eigen::Index cols) {
  std::uniform_int_distribution<int> pick(-8, 8);
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = std::complex<double>(pick(eng) / 16.0, pick(eng) / 16.0);
    }
  }
  return m;
}

// Diagonal of the n-fold coproduct of sigma_z by counting bits: each set
// bit contributes -1, each clear bit +1, independent of bit order.
inline std::vector<double> coproduct_z_diagonal(int n) {
  std::vector<double> diag;
  for (int b = 0; b < (1 << n); ++b) {
    int ones = 0;
    for (int k = 0; k < n; ++k) ones += (b >> k) & 1;
    diag.push_back(double(n - 2 * ones));
  }
  return diag;
}

// Permutation of tensor indices on n factors of dimension d; perm maps
// factor position -> new position, factor 0 slow.
inline ComplexMatrix factor_permutation(const std::vector<int>& perm,
                                        Eigen::Index d) {
  const int n = int(perm.size());
  Eigen::Index dim = 1;
  for (int i = 0; i < n; ++i) dim *= d;
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  std::vector<Eigen::Index> digits(n);
  for (Eigen::Index b = 0; b < dim; ++b) {
    Eigen::Index rem = b;
    for (int i = n - 1; i >= 0; --i) {
      digits[i] = rem % d;
      rem /= d;
    }
    Eigen::Index target = 0;
    for (int i = 0; i < n; ++i) {
      // factor i moves to slot perm[i]
      Eigen::Index power = 1;
      for (int j = perm[i] + 1; j < n; ++j) power *= d;
      target += digits[i] * power;
    }
    p(target, b) = 1.0;
  }
  return p;
}

// Antisymmetrizer over the 3! permutations of three d-dimensional factors.
inline ComplexMatrix antisymmetrizer3(Eigen::Index d) {
  const std::vector<std::pair<std::vector<int>, double>> s3 = {
      {{0, 1, 2}, 1.0},  {{1, 0, 2}, -1.0}, {{0, 2, 1}, -1.0},
      {{2, 1, 0}, -1.0}, {{1, 2, 0}, 1.0},  {{2, 0, 1}, 1.0}};
  ComplexMatrix a = ComplexMatrix::Zero(d * d * d, d * d * d);
  for (const auto& [perm, sign] : s3) {
    a += sign * factor_permutation(perm, d);
  }
  return a / 6.0;
}

}  // namespace oracle
