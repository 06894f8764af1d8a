#include "eac/open_system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace eac {

namespace {

constexpr double kStateTol = 1e-10;
// Purity this close to one marks a state as pure for fidelity purposes.
constexpr double kPurityPureTol = 1e-9;

}  // namespace

void HamiltonianModel::validate() const {
  require_hermitian(h_s, kHermitianTol, "H_S");
  require_hermitian(h_e, kHermitianTol, "H_E");
  for (std::size_t i = 0; i < couplings.size(); ++i) {
    const auto& [s, e] = couplings[i];
    require_hermitian(s, kHermitianTol, "coupling system operator");
    require_hermitian(e, kHermitianTol, "coupling environment operator");
    if (s.rows() != h_s.rows() || e.rows() != h_e.rows()) {
      std::ostringstream os;
      os << "coupling " << i << " has shape (" << s.rows() << ", " << e.rows()
         << "), model is (" << h_s.rows() << ", " << h_e.rows() << ")";
      throw DimensionMismatch(os.str());
    }
  }
}

DensityState::DensityState(ComplexMatrix rho_in) : rho(std::move(rho_in)) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw DimensionMismatch("density matrix must be square and nonempty");
  }
  if (hermiticity_deviation(rho) > kStateTol) {
    throw InvalidState("density matrix is not hermitian");
  }
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > kStateTol) {
    std::ostringstream os;
    os << "density matrix trace is " << tr << ", expected 1";
    throw InvalidState(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kStateTol) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << es.eigenvalues().minCoeff();
    throw InvalidState(os.str());
  }
}

ComplexMatrix assemble_joint(const HamiltonianModel& model) {
  model.validate();
  const Eigen::Index d_s = model.system_dim();
  const Eigen::Index d_e = model.env_dim();
  ComplexMatrix h = kron(model.h_s, ComplexMatrix::Identity(d_e, d_e));
  h += kron(ComplexMatrix::Identity(d_s, d_s), model.h_e);
  for (const auto& [s, e] : model.couplings) {
    h += kron(s, e);
  }
  return h;
}

DensityState evolve_marginal(const HamiltonianModel& model,
                             const DensityState& rho_s,
                             const DensityState& rho_e, double t) {
  if (rho_s.dim() != model.system_dim() || rho_e.dim() != model.env_dim()) {
    std::ostringstream os;
    os << "states of dimension (" << rho_s.dim() << ", " << rho_e.dim()
       << ") do not fit a (" << model.system_dim() << ", " << model.env_dim()
       << ") model";
    throw DimensionMismatch(os.str());
  }
  const ComplexMatrix h = assemble_joint(model);
  const ComplexMatrix u = hermitian_propagator(h, t);
  const ComplexMatrix joint = u * kron(rho_s.rho, rho_e.rho) * u.adjoint();
  ComplexMatrix marginal =
      partial_trace_env(joint, model.system_dim(), model.env_dim());
  marginal = 0.5 * (marginal + marginal.adjoint().eval());
  return DensityState(std::move(marginal));
}

DensityState ideal_evolution(const ComplexMatrix& h_s, const DensityState& rho,
                             double t) {
  const ComplexMatrix u = hermitian_propagator(h_s, t);
  ComplexMatrix out = u * rho.rho * u.adjoint();
  out = 0.5 * (out + out.adjoint().eval());
  return DensityState(std::move(out));
}

double purity(const DensityState& rho) {
  return (rho.rho * rho.rho).trace().real();
}

double fidelity_pure(const ComplexMatrix& psi, const DensityState& rho) {
  if (psi.cols() != 1 || psi.rows() != rho.dim()) {
    throw DimensionMismatch("state vector does not match the density matrix");
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10) {
    throw InvalidState("state vector is not normalized");
  }
  return (psi.adjoint() * rho.rho * psi)(0, 0).real();
}

ComplexMatrix gaussian_complex_matrix(std::mt19937_64& eng, Eigen::Index rows,
                                      Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double re = normal(eng);
      const double im = normal(eng);
      g(i, j) = std::complex<double>(re, im);
    }
  }
  return g;
}

ComplexMatrix sample_hermitian(std::mt19937_64& eng, Eigen::Index dim) {
  const ComplexMatrix g = gaussian_complex_matrix(eng, dim, dim);
  return 0.5 * (g + g.adjoint());
}

DensityState sample_state_with(std::mt19937_64& eng, Eigen::Index dim,
                               Eigen::Index rank) {
  if (rank < 1 || rank > dim) {
    std::ostringstream os;
    os << "rank " << rank << " is outside [1, " << dim << "]";
    throw InvalidRank(os.str());
  }
  const ComplexMatrix g = gaussian_complex_matrix(eng, dim, rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityState(std::move(rho));
}

DensityState sample_state(Eigen::Index dim, Eigen::Index rank,
                          std::int64_t seed) {
  std::mt19937_64 eng(static_cast<std::uint64_t>(seed));
  return sample_state_with(eng, dim, rank);
}

std::vector<EvolutionSample> decoherence_trace(const HamiltonianModel& model,
                                               const DensityState& rho_s,
                                               const DensityState& rho_e,
                                               const std::vector<double>& times) {
  if (times.empty()) throw InvalidArgument("times must be nonempty");
  for (double t : times) {
    if (!std::isfinite(t)) throw InvalidArgument("times must be finite");
  }

  const bool pure = std::abs(purity(rho_s) - 1.0) <= kPurityPureTol;
  ComplexMatrix psi;
  if (pure) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho_s.rho);
    psi = es.eigenvectors().col(rho_s.dim() - 1);  // eigenvalues ascending
  }

  std::vector<EvolutionSample> out;
  out.reserve(times.size());
  for (double t : times) {
    DensityState marginal = evolve_marginal(model, rho_s, rho_e, t);
    double fid;
    if (pure) {
      const ComplexMatrix psi_t = hermitian_propagator(model.h_s, t) * psi;
      fid = fidelity_pure(psi_t, marginal);
    } else {
      const DensityState ideal = ideal_evolution(model.h_s, rho_s, t);
      fid = 1.0 - 0.5 * (marginal.rho - ideal.rho).norm();
    }
    fid = std::clamp(fid, 0.0, 1.0);
    const double p = purity(marginal);
    out.push_back(EvolutionSample{t, std::move(marginal), p, fid});
  }
  return out;
}

}  // namespace eac
