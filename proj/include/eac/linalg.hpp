#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eac/errors.hpp"

namespace eac {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kHermitianTol = 1e-10;

/// Relative Frobenius deviation from the adjoint,
/// ||m - m^dag||_F / max(1, ||m||_F).
double hermiticity_deviation(const ComplexMatrix& m);

bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

/// Throws NotHermitian (naming `label`) if the deviation exceeds `tol`.
void require_hermitian(const ComplexMatrix& m, double tol, const char* label);

/// Hilbert-Schmidt inner product tr(a^dag b).
std::complex<double> hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

double hs_norm(const ComplexMatrix& a);

/// A linear subspace of C^ambient_dim, stored as an isometry whose columns
/// form an orthonormal basis.  Zero columns encode the zero subspace.
struct Subspace {
  Eigen::Index ambient_dim = 0;
  ComplexMatrix basis;

  Subspace() = default;
  Subspace(Eigen::Index ambient, ComplexMatrix basis_in);

  Eigen::Index dim() const { return basis.cols(); }
  ComplexMatrix projector() const { return basis * basis.adjoint(); }

  static Subspace full(Eigen::Index ambient);
  static Subspace zero(Eigen::Index ambient);
};

/// Tensor (Kronecker) product; the left factor carries the slow index.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// exp(-i t h) for Hermitian h, via eigendecomposition.
ComplexMatrix hermitian_propagator(const ComplexMatrix& h, double t);

/// Trace over the environment factor of a (d_s*d_e)-dimensional operator;
/// the system is the slow (leftmost) tensor index.
ComplexMatrix partial_trace_env(const ComplexMatrix& m, Eigen::Index d_s,
                                Eigen::Index d_e);

/// Orthonormal basis of the right kernel.  Singular values at or below
/// tol * sigma_max (or tol itself for the zero matrix) count as zero.
Subspace nullspace(const ComplexMatrix& m, double tol);

/// Joint eigenspaces of a commuting Hermitian family, with the eigenvalue
/// tuple of each space.  Eigenvalues closer than tol * max(1, spectral
/// radius) are merged, so the spaces are maximal.
std::vector<std::pair<std::vector<double>, Subspace>> simultaneous_eigenspaces(
    const std::vector<ComplexMatrix>& family, double tol);

/// Intersection of subspaces via the kernel of stacked complement
/// projectors.  An empty list yields the full space of dimension
/// `ambient_if_empty` (which must then be positive).
Subspace intersect(const std::vector<Subspace>& spaces,
                   double tol = kDefaultTol, Eigen::Index ambient_if_empty = -1);

/// Gram-Schmidt under the Hilbert-Schmidt inner product; vectors whose
/// residual norm is at most `tol` are dropped.
std::vector<ComplexMatrix> hs_orthonormalize(const std::vector<ComplexMatrix>& ms,
                                             double tol);

}  // namespace eac
