#include "eac/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace eac {

namespace {

void require_square(const ComplexMatrix& m, const char* label) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << label << " must be square, got " << m.rows() << "x" << m.cols();
    throw DimensionMismatch(os.str());
  }
}

}  // namespace

double hermiticity_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  const double dev = (m - m.adjoint()).norm();
  return dev / std::max(1.0, m.norm());
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_deviation(m) <= tol;
}

void require_hermitian(const ComplexMatrix& m, double tol, const char* label) {
  require_square(m, label);
  const double dev = hermiticity_deviation(m);
  if (dev > tol) {
    std::ostringstream os;
    os << label << " is not hermitian (relative deviation " << dev << ")";
    throw NotHermitian(os.str());
  }
}

std::complex<double> hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.adjoint() * b).trace();
}

double hs_norm(const ComplexMatrix& a) { return a.norm(); }

Subspace::Subspace(Eigen::Index ambient, ComplexMatrix basis_in)
    : ambient_dim(ambient), basis(std::move(basis_in)) {
  if (ambient_dim <= 0) throw InvalidArgument("subspace ambient dimension must be positive");
  if (basis.rows() != ambient_dim) {
    std::ostringstream os;
    os << "subspace basis has " << basis.rows() << " rows, ambient dimension is "
       << ambient_dim;
    throw DimensionMismatch(os.str());
  }
  if (basis.cols() > ambient_dim) {
    throw DimensionMismatch("subspace basis has more columns than the ambient dimension");
  }
  const Eigen::Index k = basis.cols();
  const double drift =
      (basis.adjoint() * basis - ComplexMatrix::Identity(k, k)).norm();
  if (drift > 1e-10) {
    std::ostringstream os;
    os << "subspace basis columns are not orthonormal (drift " << drift << ")";
    throw InvalidArgument(os.str());
  }
}

Subspace Subspace::full(Eigen::Index ambient) {
  return Subspace(ambient, ComplexMatrix::Identity(ambient, ambient));
}

Subspace Subspace::zero(Eigen::Index ambient) {
  return Subspace(ambient, ComplexMatrix(ambient, 0));
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b);
}

ComplexMatrix hermitian_propagator(const ComplexMatrix& h, double t) {
  require_hermitian(h, kHermitianTol, "propagator generator");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  const Eigen::VectorXd& evals = es.eigenvalues();
  ComplexVector phases(evals.size());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    phases(i) = std::exp(std::complex<double>(0.0, -t * evals(i)));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix partial_trace_env(const ComplexMatrix& m, Eigen::Index d_s,
                                Eigen::Index d_e) {
  if (d_s <= 0 || d_e <= 0) throw InvalidArgument("factor dimensions must be positive");
  if (m.rows() != d_s * d_e || m.cols() != d_s * d_e) {
    std::ostringstream os;
    os << "partial trace expects a " << d_s * d_e << "-dimensional operator, got "
       << m.rows() << "x" << m.cols();
    throw DimensionMismatch(os.str());
  }
  ComplexMatrix out = ComplexMatrix::Zero(d_s, d_s);
  for (Eigen::Index i = 0; i < d_s; ++i) {
    for (Eigen::Index j = 0; j < d_s; ++j) {
      std::complex<double> sum = 0.0;
      for (Eigen::Index k = 0; k < d_e; ++k) {
        sum += m(i * d_e + k, j * d_e + k);
      }
      out(i, j) = sum;
    }
  }
  return out;
}

Subspace nullspace(const ComplexMatrix& m, double tol) {
  if (tol <= 0.0) throw InvalidArgument("nullspace tolerance must be positive");
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double scale = (sv.size() > 0 && sv(0) > 0.0) ? sv(0) : 1.0;
  const double cut = tol * scale;
  // singular values are sorted descending; the kernel is a suffix of V
  Eigen::Index first_null = m.cols();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double s = j < sv.size() ? sv(j) : 0.0;
    if (s <= cut) {
      first_null = j;
      break;
    }
  }
  const Eigen::Index k = m.cols() - first_null;
  return Subspace(m.cols(), svd.matrixV().rightCols(k));
}

std::vector<std::pair<std::vector<double>, Subspace>> simultaneous_eigenspaces(
    const std::vector<ComplexMatrix>& family, double tol) {
  if (family.empty()) {
    throw InvalidArgument("simultaneous_eigenspaces needs a nonempty family");
  }
  const Eigen::Index n = family.front().rows();
  for (std::size_t i = 0; i < family.size(); ++i) {
    require_hermitian(family[i], tol, "family member");
    if (family[i].rows() != n) {
      throw DimensionMismatch("family members have different dimensions");
    }
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      const double c = (family[i] * family[j] - family[j] * family[i]).norm();
      if (c > tol * family[i].norm() * family[j].norm()) {
        std::ostringstream os;
        os << "family members " << i << " and " << j
           << " do not commute (commutator norm " << c << ")";
        throw NonCommutingFamily(os.str(), i, j, c);
      }
    }
  }

  struct Leaf {
    std::vector<double> eigs;
    ComplexMatrix isometry;
  };
  std::vector<Leaf> leaves;
  leaves.push_back({{}, ComplexMatrix::Identity(n, n)});

  for (const ComplexMatrix& op : family) {
    // Each leaf is invariant under `op` (it commutes with everything that
    // produced the leaf), so restrict, diagonalize, and split by clusters.
    struct Block {
      Eigen::VectorXd evals;
      ComplexMatrix evecs;
    };
    std::vector<Block> blocks(leaves.size());
    double radius = 0.0;
    for (std::size_t li = 0; li < leaves.size(); ++li) {
      const ComplexMatrix& v = leaves[li].isometry;
      ComplexMatrix restricted = v.adjoint() * op * v;
      restricted = 0.5 * (restricted + restricted.adjoint().eval());
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(restricted);
      blocks[li] = {es.eigenvalues(), es.eigenvectors()};
      if (es.eigenvalues().size() > 0) {
        radius = std::max({radius, std::abs(es.eigenvalues().minCoeff()),
                           std::abs(es.eigenvalues().maxCoeff())});
      }
    }
    const double gap = tol * std::max(1.0, radius);

    std::vector<Leaf> next;
    for (std::size_t li = 0; li < leaves.size(); ++li) {
      const Eigen::VectorXd& evals = blocks[li].evals;
      Eigen::Index begin = 0;
      while (begin < evals.size()) {
        Eigen::Index end = begin + 1;
        while (end < evals.size() && evals(end) - evals(end - 1) <= gap) ++end;
        const double mean =
            evals.segment(begin, end - begin).sum() / double(end - begin);
        Leaf child;
        child.eigs = leaves[li].eigs;
        child.eigs.push_back(mean);
        child.isometry =
            leaves[li].isometry * blocks[li].evecs.middleCols(begin, end - begin);
        next.push_back(std::move(child));
        begin = end;
      }
    }
    leaves = std::move(next);
  }

  std::vector<std::pair<std::vector<double>, Subspace>> out;
  out.reserve(leaves.size());
  for (Leaf& leaf : leaves) {
    out.emplace_back(std::move(leaf.eigs), Subspace(n, std::move(leaf.isometry)));
  }
  return out;
}

Subspace intersect(const std::vector<Subspace>& spaces, double tol,
                   Eigen::Index ambient_if_empty) {
  if (spaces.empty()) {
    if (ambient_if_empty <= 0) {
      throw InvalidArgument(
          "intersect of an empty list needs an explicit ambient dimension");
    }
    return Subspace::full(ambient_if_empty);
  }
  const Eigen::Index n = spaces.front().ambient_dim;
  for (const Subspace& s : spaces) {
    if (s.ambient_dim != n) {
      throw DimensionMismatch("subspaces live in different ambient dimensions");
    }
  }
  ComplexMatrix stacked(n * Eigen::Index(spaces.size()), n);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    stacked.middleRows(Eigen::Index(i) * n, n) = id - spaces[i].projector();
  }
  return nullspace(stacked, tol);
}

std::vector<ComplexMatrix> hs_orthonormalize(const std::vector<ComplexMatrix>& ms,
                                             double tol) {
  if (!ms.empty()) {
    const Eigen::Index n = ms.front().rows();
    for (const ComplexMatrix& m : ms) {
      require_square(m, "hs_orthonormalize input");
      if (m.rows() != n) {
        throw DimensionMismatch("hs_orthonormalize inputs have different shapes");
      }
    }
  }
  std::vector<ComplexMatrix> out;
  for (const ComplexMatrix& m : ms) {
    ComplexMatrix v = m;
    for (int pass = 0; pass < 2; ++pass) {
      for (const ComplexMatrix& b : out) {
        v -= hs_inner(b, v) * b;
      }
    }
    const double norm = hs_norm(v);
    if (norm > tol) {
      out.push_back(v / norm);
    }
  }
  return out;
}

}  // namespace eac
