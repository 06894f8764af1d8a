#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "eac/linalg.hpp"

namespace eac {

/// Closed system+environment model H_SE = H_S (x) I + I (x) H_E + sum_l S_l (x) E_l.
struct HamiltonianModel {
  ComplexMatrix h_s;
  ComplexMatrix h_e;
  std::vector<std::pair<ComplexMatrix, ComplexMatrix>> couplings;

  Eigen::Index system_dim() const { return h_s.rows(); }
  Eigen::Index env_dim() const { return h_e.rows(); }

  void validate() const;
};

/// Trace-one non-negative Hermitian operator; validated on construction.
struct DensityState {
  ComplexMatrix rho;

  explicit DensityState(ComplexMatrix rho_in);

  Eigen::Index dim() const { return rho.rows(); }
};

/// One point of a decoherence diagnostic run.
struct EvolutionSample {
  double time;
  DensityState marginal;
  double purity;
  double fidelity_vs_ideal;
};

ComplexMatrix assemble_joint(const HamiltonianModel& model);

/// Exact marginal dynamics: joint unitary evolution of rho_s (x) rho_e
/// followed by the partial trace over the environment.
DensityState evolve_marginal(const HamiltonianModel& model,
                             const DensityState& rho_s,
                             const DensityState& rho_e, double t);

/// Conjugation by exp(-i t h_s); the decoherence-free reference dynamics.
DensityState ideal_evolution(const ComplexMatrix& h_s, const DensityState& rho,
                             double t);

double purity(const DensityState& rho);

/// <psi| rho |psi> for a unit column vector psi.
double fidelity_pure(const ComplexMatrix& psi, const DensityState& rho);

/// Deterministic Haar-induced random state rho = G G^dag / tr(G G^dag) with
/// G a dim x rank matrix of independent complex Gaussians.
DensityState sample_state(Eigen::Index dim, Eigen::Index rank,
                          std::int64_t seed);

/// Engine-level variants used where one stream drives several draws.
DensityState sample_state_with(std::mt19937_64& eng, Eigen::Index dim,
                               Eigen::Index rank);
ComplexMatrix gaussian_complex_matrix(std::mt19937_64& eng, Eigen::Index rows,
                                      Eigen::Index cols);
ComplexMatrix sample_hermitian(std::mt19937_64& eng, Eigen::Index dim);

/// Marginal evolution at each requested time, with purity and fidelity
/// against the ideal (decoupled) dynamics of the same initial state.
std::vector<EvolutionSample> decoherence_trace(const HamiltonianModel& model,
                                               const DensityState& rho_s,
                                               const DensityState& rho_e,
                                               const std::vector<double>& times);

}  // namespace eac
