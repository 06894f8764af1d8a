#include "eac/codes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace eac {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

// Hermiticity-preserving bracket.
ComplexMatrix bracket(const ComplexMatrix& a, const ComplexMatrix& b) {
  return kI * (a * b - b * a);
}

void check_commuting_with_hamiltonian(const std::vector<ComplexMatrix>& gens,
                                      const ComplexMatrix& h_s, double tol) {
  auto commutes = [tol](const ComplexMatrix& a, const ComplexMatrix& b,
                        double& norm) {
    norm = (a * b - b * a).norm();
    return norm <= tol * a.norm() * b.norm();
  };
  double norm = 0.0;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (!commutes(gens[i], gens[j], norm)) {
        std::ostringstream os;
        os << "generators " << i << " and " << j
           << " do not commute (commutator norm " << norm << ")";
        throw NonCommutingFamily(os.str(), i, j, norm);
      }
    }
    if (!commutes(gens[i], h_s, norm)) {
      std::ostringstream os;
      os << "generator " << i << " does not commute with H_S (commutator norm "
         << norm << ")";
      throw NonCommutingFamily(os.str(), i, gens.size(), norm);
    }
  }
}

// Index of the basis vector obtained by swapping factors k and k+1
// (0-based), with factor 0 the slow digit.
Eigen::Index swap_adjacent_index(Eigen::Index idx, Eigen::Index k,
                                 Eigen::Index d,
                                 const std::vector<Eigen::Index>& powers) {
  const Eigen::Index hi = (idx / powers[k + 1]) % d;
  const Eigen::Index lo = (idx / powers[k + 2]) % d;
  return idx + (lo - hi) * powers[k + 1] + (hi - lo) * powers[k + 2];
}

Eigen::Index checked_power(Eigen::Index d, Eigen::Index n, Eigen::Index cap) {
  Eigen::Index p = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (p > cap / d) {
      std::ostringstream os;
      os << "ambient dimension " << d << "^" << n << " exceeds the cap " << cap;
      throw AmbientCapExceeded(os.str());
    }
    p *= d;
  }
  return p;
}

}  // namespace

void ErrorModel::validate() const {
  if (generators.empty()) throw InvalidArgument("error model needs at least one generator");
  require_hermitian(h_s, kHermitianTol, "H_S");
  for (const ComplexMatrix& g : generators) {
    require_hermitian(g, kHermitianTol, "error generator");
    if (g.rows() != h_s.rows()) {
      throw DimensionMismatch("error generator dimension differs from H_S");
    }
  }
}

bool commuting_family(const std::vector<ComplexMatrix>& ops, double tol) {
  for (std::size_t i = 0; i < ops.size(); ++i) {
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      const double norm = (ops[i] * ops[j] - ops[j] * ops[i]).norm();
      if (norm > tol * ops[i].norm() * ops[j].norm()) return false;
    }
  }
  return true;
}

std::string to_string(Route route) {
  switch (route) {
    case Route::CommonEigenspace: return "CommonEigenspace";
    case Route::SingletSector: return "SingletSector";
    case Route::WeightSpace: return "WeightSpace";
    case Route::RegisterSinglet: return "RegisterSinglet";
    case Route::UserSupplied: return "UserSupplied";
  }
  return "UserSupplied";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::EAC: return "EAC";
    case Verdict::NotEAC: return "NotEAC";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::pair<bool, double> check_invariant_subspace(const ComplexMatrix& x,
                                                 const Subspace& c, double tol) {
  if (c.dim() < 1) throw EmptySubspace("invariance check needs a nonzero subspace");
  if (x.rows() != x.cols() || x.rows() != c.ambient_dim) {
    throw DimensionMismatch("operator does not act on the subspace's ambient space");
  }
  const ComplexMatrix& v = c.basis;
  const ComplexMatrix image = x * v;
  const double residual =
      (image - v * (v.adjoint() * image)).norm() / std::max(1.0, x.norm());
  return {residual <= tol, residual};
}

CodeReport check_lemma31(const ErrorModel& model, const Subspace& c, double tol) {
  model.validate();
  if (c.dim() < 1) throw EmptySubspace("lemma check needs a nonzero subspace");
  if (c.ambient_dim != model.dim()) {
    throw DimensionMismatch("code ambient dimension differs from the model");
  }
  const ComplexMatrix& v = c.basis;
  const Eigen::Index d_c = c.dim();
  const ComplexMatrix id_c = ComplexMatrix::Identity(d_c, d_c);

  CodeReport report;
  report.code = c;
  double worst = 0.0;
  for (const ComplexMatrix& s : model.generators) {
    const ComplexMatrix image = s * v;
    const ComplexMatrix restricted = v.adjoint() * image;
    const double sigma = restricted.trace().real() / double(d_c);
    const double deviation = (restricted - sigma * id_c).norm();
    const double leakage = (image - v * restricted).norm();
    worst = std::max(worst, std::max(deviation, leakage) / std::max(1.0, s.norm()));
    report.sigma.push_back(sigma);
  }
  report.lemma31_residual = worst;
  report.hs_invariance_residual =
      check_invariant_subspace(model.h_s, c, tol).second;
  report.verdict = (report.lemma31_residual <= tol &&
                    report.hs_invariance_residual <= tol)
                       ? Verdict::EAC
                       : Verdict::NotEAC;
  return report;
}

std::vector<CodeReport> common_eigenspace_codes(const ErrorModel& model,
                                                double tol) {
  model.validate();
  check_commuting_with_hamiltonian(model.generators, model.h_s, tol);
  std::vector<CodeReport> out;
  for (auto& [eigs, space] : simultaneous_eigenspaces(model.generators, tol)) {
    CodeReport report = check_lemma31(model, space, tol);
    report.route = Route::CommonEigenspace;
    out.push_back(std::move(report));
  }
  return out;
}

OperatorAlgebra lie_closure(const std::vector<ComplexMatrix>& generators,
                            std::size_t max_dim, double tol) {
  if (generators.empty()) throw InvalidArgument("lie_closure needs generators");
  const Eigen::Index n = generators.front().rows();
  for (const ComplexMatrix& g : generators) {
    if (g.rows() != g.cols() || g.rows() != n) {
      throw DimensionMismatch("generators must be square with equal dimensions");
    }
  }

  bool abelian = true;
  for (std::size_t i = 0; i < generators.size() && abelian; ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if ((generators[i] * generators[j] - generators[j] * generators[i]).norm() >
          1e-10) {
        abelian = false;
        break;
      }
    }
  }

  std::vector<ComplexMatrix> basis = hs_orthonormalize(generators, tol);
  // Pair every element with every earlier one exactly once; appended
  // elements get their turn when the outer index reaches them.
  for (std::size_t j = 1; j < basis.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      ComplexMatrix c = bracket(basis[i], basis[j]);
      for (int pass = 0; pass < 2; ++pass) {
        for (const ComplexMatrix& b : basis) {
          c -= hs_inner(b, c) * b;
        }
      }
      const double norm = hs_norm(c);
      if (norm > tol) {
        if (basis.size() + 1 > max_dim) {
          std::ostringstream os;
          os << "lie closure exceeded " << max_dim << " dimensions";
          throw ClosureDimensionExceeded(os.str(), basis);
        }
        basis.push_back(c / norm);
      }
    }
  }

  OperatorAlgebra algebra;
  algebra.ambient_dim = n;
  algebra.basis = std::move(basis);
  algebra.closed = true;
  algebra.abelian = abelian;
  return algebra;
}

Subspace singlet_sector(const OperatorAlgebra& algebra, double tol) {
  if (!algebra.closed) throw NotClosed("singlet sector needs a closed algebra");
  std::vector<Subspace> kernels;
  kernels.reserve(algebra.basis.size());
  for (const ComplexMatrix& b : algebra.basis) {
    kernels.push_back(nullspace(b, tol));
  }
  return intersect(kernels, tol, algebra.ambient_dim);
}

std::vector<CodeReport> weight_space_codes(const ErrorModel& model, double tol) {
  std::vector<CodeReport> out = common_eigenspace_codes(model, tol);
  for (CodeReport& report : out) {
    report.route = Route::WeightSpace;
  }
  return out;
}

std::pair<bool, double> check_sn_invariance(const ComplexMatrix& x,
                                            Eigen::Index n, Eigen::Index d,
                                            double tol) {
  if (n < 1 || d < 1) throw InvalidArgument("register shape must be positive");
  const Eigen::Index dim =
      checked_power(d, n, std::numeric_limits<Eigen::Index>::max());
  if (x.rows() != dim || x.cols() != dim) {
    std::ostringstream os;
    os << "operator is " << x.rows() << "x" << x.cols() << ", expected " << dim;
    throw DimensionMismatch(os.str());
  }
  // powers[i] = d^(n-i), so digit i of an index is (idx / powers[i+1]) % d.
  std::vector<Eigen::Index> powers(n + 1);
  powers[n] = 1;
  for (Eigen::Index i = n; i > 0; --i) powers[i - 1] = powers[i] * d;

  const double denom = std::max(1.0, x.norm());
  double worst = 0.0;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    std::vector<Eigen::Index> perm(dim);
    for (Eigen::Index b = 0; b < dim; ++b) {
      perm[b] = swap_adjacent_index(b, k, d, powers);
    }
    double dev2 = 0.0;
    for (Eigen::Index r = 0; r < dim; ++r) {
      for (Eigen::Index c = 0; c < dim; ++c) {
        dev2 += std::norm(x(perm[r], perm[c]) - x(r, c));
      }
    }
    worst = std::max(worst, std::sqrt(dev2) / denom);
  }
  return {worst <= tol, worst};
}

ComplexMatrix coproduct(const ComplexMatrix& s, Eigen::Index n) {
  if (s.rows() != s.cols()) throw DimensionMismatch("cell operator must be square");
  if (n < 1) throw InvalidArgument("register length must be positive");
  const Eigen::Index d = s.rows();
  Eigen::Index left = 1, right = 1;
  for (Eigen::Index j = 1; j < n; ++j) right *= d;
  ComplexMatrix out = kron(s, ComplexMatrix::Identity(right, right));
  for (Eigen::Index i = 1; i < n; ++i) {
    left *= d;
    right /= d;
    out += kron(kron(ComplexMatrix::Identity(left, left), s),
                ComplexMatrix::Identity(right, right));
  }
  return out;
}

ErrorModel build_register_model(const std::vector<ComplexMatrix>& cell_generators,
                                Eigen::Index n,
                                const std::optional<ComplexMatrix>& h_r) {
  if (cell_generators.empty()) {
    throw InvalidArgument("register model needs cell generators");
  }
  if (n < 1) throw InvalidArgument("register length must be positive");
  const Eigen::Index d = cell_generators.front().rows();
  for (const ComplexMatrix& s : cell_generators) {
    require_hermitian(s, kHermitianTol, "cell generator");
    if (s.rows() != d) {
      throw DimensionMismatch("cell generators have different dimensions");
    }
  }
  ErrorModel model;
  for (const ComplexMatrix& s : cell_generators) {
    model.generators.push_back(coproduct(s, n));
  }
  const Eigen::Index dim = model.generators.front().rows();
  if (h_r) {
    require_hermitian(*h_r, kHermitianTol, "register Hamiltonian");
    if (h_r->rows() != dim) {
      throw DimensionMismatch("register Hamiltonian does not match the register dimension");
    }
    model.h_s = *h_r;
  } else {
    model.h_s = ComplexMatrix::Zero(dim, dim);
  }
  return model;
}

std::vector<ComplexMatrix> gell_mann_basis(Eigen::Index d) {
  if (d < 2) throw InvalidArgument("gell_mann_basis needs dimension at least 2");
  std::vector<ComplexMatrix> out;
  out.reserve(std::size_t(d) * std::size_t(d) - 1);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = 1.0;
      m(k, j) = 1.0;
      out.push_back(std::move(m));
    }
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = j + 1; k < d; ++k) {
      ComplexMatrix m = ComplexMatrix::Zero(d, d);
      m(j, k) = -kI;
      m(k, j) = kI;
      out.push_back(std::move(m));
    }
  }
  for (Eigen::Index l = 1; l < d; ++l) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    const double scale = std::sqrt(2.0 / double(l * (l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) m(j, j) = scale;
    m(l, l) = -scale * double(l);
    out.push_back(std::move(m));
  }
  return out;
}

CodeReport register_singlet_code(Eigen::Index d, Eigen::Index n, double tol,
                                 Eigen::Index ambient_cap) {
  if (d < 2) throw InvalidArgument("cell dimension must be at least 2");
  if (n < 1) throw InvalidArgument("register length must be positive");
  const Eigen::Index dim = checked_power(d, n, ambient_cap);

  const ErrorModel model = build_register_model(gell_mann_basis(d), n, {});
  const OperatorAlgebra algebra =
      lie_closure(model.generators, std::size_t(dim) * std::size_t(dim), tol);
  const Subspace code = singlet_sector(algebra, tol);

  if (code.dim() == 0) {
    // No singlet sector; for a semisimple algebra this route is exhaustive.
    CodeReport report;
    report.code = code;
    report.route = Route::RegisterSinglet;
    report.verdict = Verdict::NotEAC;
    return report;
  }
  CodeReport report = check_lemma31(model, code, tol);
  report.route = Route::RegisterSinglet;
  return report;
}

CodeReport verify_code_dynamically(const ErrorModel& model, const Subspace& code,
                                   Eigen::Index env_dim, int trials,
                                   const std::vector<double>& times,
                                   std::int64_t seed, double tol,
                                   double dynamical_tol) {
  model.validate();
  if (code.dim() < 1) throw EmptySubspace("dynamical verification needs a nonzero code");
  if (env_dim < 1) throw InvalidArgument("environment dimension must be positive");
  if (trials < 1) throw InvalidArgument("at least one trial is required");

  CodeReport report = check_lemma31(model, code, tol);
  report.induced_env_op_shape = {env_dim, env_dim};

  double min_fid = 1.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::seed_seq sseq{static_cast<std::uint32_t>(seed),
                       static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(trial)};
    std::mt19937_64 eng(sseq);

    HamiltonianModel joint;
    joint.h_s = model.h_s;
    for (const ComplexMatrix& s : model.generators) {
      ComplexMatrix e = sample_hermitian(eng, env_dim);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(e, Eigen::EigenvaluesOnly);
      const double spectral = std::max(std::abs(es.eigenvalues().minCoeff()),
                                       std::abs(es.eigenvalues().maxCoeff()));
      if (spectral > 0.0) e /= spectral;
      joint.couplings.emplace_back(s, std::move(e));
    }
    joint.h_e = sample_hermitian(eng, env_dim);

    ComplexMatrix coeff = gaussian_complex_matrix(eng, code.dim(), 1);
    coeff /= coeff.norm();
    const ComplexMatrix psi = code.basis * coeff;
    const DensityState rho_s((psi * psi.adjoint()).eval());

    std::uniform_int_distribution<Eigen::Index> rank_dist(1, env_dim);
    const DensityState rho_e = sample_state_with(eng, env_dim, rank_dist(eng));

    for (const EvolutionSample& sample :
         decoherence_trace(joint, rho_s, rho_e, times)) {
      min_fid = std::min(min_fid, sample.fidelity_vs_ideal);
    }
  }

  report.dynamical_min_fidelity = min_fid;
  const bool static_ok = report.lemma31_residual <= tol &&
                         report.hs_invariance_residual <= tol;
  report.verdict = (static_ok && 1.0 - min_fid <= dynamical_tol)
                       ? Verdict::EAC
                       : Verdict::NotEAC;
  return report;
}

}  // namespace eac
