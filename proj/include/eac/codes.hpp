#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eac/linalg.hpp"
#include "eac/open_system.hpp"

namespace eac {

/// System Hamiltonian plus the system-side error generators S_l.  Code
/// construction never needs the environment factors.
struct ErrorModel {
  ComplexMatrix h_s;
  std::vector<ComplexMatrix> generators;

  Eigen::Index dim() const { return h_s.rows(); }
  void validate() const;
};

/// Hilbert-Schmidt-orthonormal basis of (the Lie closure of) a set of
/// Hermitian operators.
struct OperatorAlgebra {
  Eigen::Index ambient_dim = 0;
  std::vector<ComplexMatrix> basis;
  bool closed = false;
  bool abelian = false;
};

enum class Route {
  CommonEigenspace,
  SingletSector,
  WeightSpace,
  RegisterSinglet,
  UserSupplied,
};

enum class Verdict { EAC, NotEAC, Inconclusive };

std::string to_string(Route route);
std::string to_string(Verdict verdict);

/// Verification outcome for one candidate code.
struct CodeReport {
  Subspace code;
  Route route = Route::UserSupplied;
  double lemma31_residual = 0.0;
  double hs_invariance_residual = 0.0;
  /// Scalar action of each generator on the code, sigma_l = tr(V^dag S_l V)/d_C.
  std::vector<double> sigma;
  std::optional<std::pair<Eigen::Index, Eigen::Index>> induced_env_op_shape;
  std::optional<double> dynamical_min_fidelity;
  Verdict verdict = Verdict::Inconclusive;
};

/// Membership test for the invariance algebra A(C) = {X : X C in C}.
/// residual = ||(I - V V^dag) X V||_F / max(1, ||X||_F).
// True when every pair commutes within tol * ||A|| * ||B||.
bool commuting_family(const std::vector<ComplexMatrix>& ops, double tol);

std::pair<bool, double> check_invariant_subspace(const ComplexMatrix& x,
                                                 const Subspace& c, double tol);

/// Static noiselessness check: every generator must restrict to a scalar on
/// the code and must not leak out of it, and H_S must leave the code
/// invariant.  Records the scalars sigma_l.
CodeReport check_lemma31(const ErrorModel& model, const Subspace& c, double tol);

/// Joint eigenspaces of a commuting generator family, each verified and
/// reported as a code.
std::vector<CodeReport> common_eigenspace_codes(const ErrorModel& model,
                                                double tol);

/// Smallest commutator-closed operator space containing the generators,
/// using the Hermiticity-preserving bracket i[A, B].
OperatorAlgebra lie_closure(const std::vector<ComplexMatrix>& generators,
                            std::size_t max_dim, double tol);

/// Joint kernel of the whole algebra: the span of its one-dimensional
/// submodules when all scalars vanish (semisimple case).
Subspace singlet_sector(const OperatorAlgebra& algebra, double tol);

/// Weight spaces of an abelian generator family, reported as codes.
std::vector<CodeReport> weight_space_codes(const ErrorModel& model, double tol);

/// Invariance of x under the permutation action of S_n on n factors of
/// dimension d, probed on the adjacent transpositions that generate S_n.
std::pair<bool, double> check_sn_invariance(const ComplexMatrix& x,
                                            Eigen::Index n, Eigen::Index d,
                                            double tol);

/// Symmetrized register operator sum_i I x ... x s x ... x I.
ComplexMatrix coproduct(const ComplexMatrix& s, Eigen::Index n);

/// Register of n cells symmetrically coupled to one environment: the
/// effective system generators are the coproducts of the cell generators.
ErrorModel build_register_model(const std::vector<ComplexMatrix>& cell_generators,
                                Eigen::Index n,
                                const std::optional<ComplexMatrix>& h_r);

/// Hermitian generating set of sl(d, C): symmetric pairs (row-major), then
/// antisymmetric pairs, then the d-1 diagonal traceless generators.
std::vector<ComplexMatrix> gell_mann_basis(Eigen::Index d);

/// Singlet-sector code of the n-cell register over d-dimensional cells,
/// verified statically against the register model.
CodeReport register_singlet_code(Eigen::Index d, Eigen::Index n, double tol,
                                 Eigen::Index ambient_cap = 4096);

/// Randomized dynamical quantification of noiselessness: random environment
/// couplings, environment Hamiltonians, code states, and environment
/// preparations, evolved exactly; records the worst fidelity seen.
CodeReport verify_code_dynamically(const ErrorModel& model, const Subspace& code,
                                   Eigen::Index env_dim, int trials,
                                   const std::vector<double>& times,
                                   std::int64_t seed, double tol,
                                   double dynamical_tol = 1e-7);

}  // namespace eac
