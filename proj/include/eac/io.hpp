#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eac/codes.hpp"
#include "eac/errors.hpp"
#include "eac/linalg.hpp"
#include "eac/open_system.hpp"

namespace eac::io {

// File-format failure (unreadable path, bad syntax, duplicate entries).
struct ParseError : Error {
  using Error::Error;
};

// One named block from an operator file.  Operators and states are square
// (rows == cols == dim); a subspace block is an ambient x k basis matrix.
enum class RecordKind { Operator, State, SubspaceBasis };

struct Record {
  RecordKind kind = RecordKind::Operator;
  std::string name;
  ComplexMatrix matrix;
};

std::vector<Record> parse_records(std::istream& in, const std::string& source);
std::vector<Record> load_records(const std::string& path);

// Model file: the operator named H_S (optional, default zero) plus every
// other operator, in file order, as error generators.  Simulation accepts
// a bare Hamiltonian, so the generator requirement is relaxable.
ErrorModel load_error_model(const std::string& path,
                            bool require_generators = true);

// Code file: a single subspace block.  Columns with Gram drift up to
// drift_tol are re-orthonormalized; beyond that the file is rejected.
Subspace load_code(const std::string& path, double drift_tol = 1e-6);

DensityState load_state(const std::string& path);

// Environment file: optional operator H_E, optional state rho_E, and the
// remaining operators as coupling partners E_lambda in file order.
struct EnvironmentFile {
  std::optional<ComplexMatrix> h_e;
  std::vector<ComplexMatrix> ops;
  std::optional<ComplexMatrix> rho;
};

EnvironmentFile load_environment(const std::string& path);

void write_operator(std::ostream& out, const std::string& name,
                    const ComplexMatrix& m);
void write_subspace(std::ostream& out, const std::string& name,
                    const Subspace& s);

struct RunConfig {
  double tol = kDefaultTol;
  Eigen::Index env_dim = 4;
  int trials = 16;
  std::vector<double> times;  // empty means default_times()
  std::int64_t seed = 0;
  Eigen::Index ambient_cap = 4096;

  void validate() const;
  const std::vector<double>& effective_times() const;
};

// Eight points log-spaced over [0.1, 10].
const std::vector<double>& default_times();

// 17 significant digits (%.17g), enough to round-trip any double.
std::string format_double(double x);

// Streaming JSON emitter with deterministic layout: fixed key order comes
// from call order, no whitespace variation, doubles via format_double.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const char* v);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(int v) { return value(std::int64_t(v)); }
  JsonWriter& value(bool v);
  const std::string& str() const { return buf_; }

 private:
  void separate();
  std::string buf_;
  std::vector<bool> comma_stack_;
  bool pending_key_ = false;
};

struct RegisterRow {
  Eigen::Index d = 0;
  Eigen::Index n = 0;
  Eigen::Index ambient_dim = 0;
  CodeReport report;
};

std::string find_report(const std::string& route, const RunConfig& config,
                        const std::vector<CodeReport>& codes);
std::string verify_report(const RunConfig& config, const CodeReport& report);
std::string register_report(const RunConfig& config,
                            const std::vector<RegisterRow>& rows);
std::string series_csv(const std::vector<EvolutionSample>& samples);

}  // namespace eac::io
