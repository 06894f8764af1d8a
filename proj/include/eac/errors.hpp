#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace eac {

/// Base class of every error thrown by the toolkit.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class NotHermitian : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A density matrix or state vector violates its invariants.
class InvalidState : public Error {
public:
  using Error::Error;
};

class InvalidRank : public Error {
public:
  using Error::Error;
};

class EmptySubspace : public Error {
public:
  using Error::Error;
};

class NotClosed : public Error {
public:
  using Error::Error;
};

class AmbientCapExceeded : public Error {
public:
  using Error::Error;
};

/// Two members of a supposedly commuting family fail to commute.
/// Carries the offending pair (indices into the family as passed by the
/// caller) and the Frobenius norm of their commutator.
class NonCommutingFamily : public Error {
public:
  NonCommutingFamily(const std::string& what, std::size_t i, std::size_t j,
                     double norm)
      : Error(what), first(i), second(j), commutator_norm(norm) {}

  std::size_t first;
  std::size_t second;
  double commutator_norm;
};

/// Lie closure grew past the requested cap; carries the basis built so far.
class ClosureDimensionExceeded : public Error {
public:
  ClosureDimensionExceeded(const std::string& what,
                           std::vector<Eigen::MatrixXcd> basis)
      : Error(what), partial_basis(std::move(basis)) {}

  std::vector<Eigen::MatrixXcd> partial_basis;
};

}  // namespace eac
