#include "eac/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace eac::io {

namespace {

std::string where(const std::string& source, std::size_t line) {
  std::ostringstream os;
  os << source << ":" << line;
  return os.str();
}

[[noreturn]] void fail(const std::string& source, std::size_t line,
                       const std::string& message) {
  throw ParseError(where(source, line) + ": " + message);
}

bool parse_index(const std::string& token, Eigen::Index& out) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(token, &used);
    if (used != token.size() || v < 0) return false;
    out = Eigen::Index(v);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

bool parse_real(const std::string& token, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(token, &used);
    return used == token.size();
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream is(line.substr(0, line.find('#')));
  std::vector<std::string> tokens;
  std::string t;
  while (is >> t) tokens.push_back(t);
  return tokens;
}

}  // namespace

std::vector<Record> parse_records(std::istream& in, const std::string& source) {
  std::vector<Record> records;
  std::set<std::string> names;

  std::string line;
  std::size_t lineno = 0;
  bool in_block = false;
  Record current;
  Eigen::Index rows = 0, cols = 0;
  std::size_t block_line = 0;
  std::set<std::pair<Eigen::Index, Eigen::Index>> seen;

  while (std::getline(in, line)) {
    ++lineno;
    const std::vector<std::string> tokens = split_tokens(line);
    if (tokens.empty()) continue;

    if (!in_block) {
      const std::string& kind = tokens[0];
      if (kind == "operator" || kind == "state") {
        if (tokens.size() != 3) {
          fail(source, lineno, "expected '" + kind + " <name> <dim>'");
        }
        Eigen::Index dim = 0;
        if (!parse_index(tokens[2], dim) || dim < 1) {
          fail(source, lineno, "bad dimension '" + tokens[2] + "'");
        }
        current = Record{};
        current.kind =
            kind == "operator" ? RecordKind::Operator : RecordKind::State;
        current.name = tokens[1];
        rows = cols = dim;
      } else if (kind == "subspace") {
        if (tokens.size() != 4) {
          fail(source, lineno, "expected 'subspace <name> <ambient> <k>'");
        }
        Eigen::Index ambient = 0, k = 0;
        if (!parse_index(tokens[2], ambient) || ambient < 1 ||
            !parse_index(tokens[3], k) || k < 1) {
          fail(source, lineno, "bad subspace shape");
        }
        current = Record{};
        current.kind = RecordKind::SubspaceBasis;
        current.name = tokens[1];
        rows = ambient;
        cols = k;
      } else {
        fail(source, lineno, "unknown record kind '" + kind + "'");
      }
      if (!names.insert(current.name).second) {
        fail(source, lineno, "duplicate record name '" + current.name + "'");
      }
      current.matrix = ComplexMatrix::Zero(rows, cols);
      seen.clear();
      in_block = true;
      block_line = lineno;
      continue;
    }

    if (tokens[0] == "end") {
      if (tokens.size() != 1) fail(source, lineno, "unexpected tokens after 'end'");
      records.push_back(std::move(current));
      in_block = false;
      continue;
    }

    if (tokens.size() != 4) {
      fail(source, lineno, "expected '<row> <col> <re> <im>' or 'end'");
    }
    Eigen::Index r = 0, c = 0;
    double re = 0.0, im = 0.0;
    if (!parse_index(tokens[0], r) || !parse_index(tokens[1], c)) {
      fail(source, lineno, "bad entry indices");
    }
    if (!parse_real(tokens[2], re) || !parse_real(tokens[3], im)) {
      fail(source, lineno, "bad entry values");
    }
    if (r >= rows || c >= cols) {
      std::ostringstream os;
      os << "entry (" << r << ", " << c << ") outside " << rows << "x" << cols
         << " record '" << current.name << "'";
      fail(source, lineno, os.str());
    }
    if (!seen.insert({r, c}).second) {
      std::ostringstream os;
      os << "duplicate entry (" << r << ", " << c << ") in record '"
         << current.name << "'";
      fail(source, lineno, os.str());
    }
    current.matrix(r, c) = std::complex<double>(re, im);
  }

  if (in_block) {
    fail(source, block_line, "record '" + current.name + "' is missing 'end'");
  }
  return records;
}

std::vector<Record> load_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_records(in, path);
}

ErrorModel load_error_model(const std::string& path, bool require_generators) {
  const std::vector<Record> records = load_records(path);
  ErrorModel model;
  Eigen::Index dim = 0;
  std::string first_name;
  for (const Record& r : records) {
    if (r.kind != RecordKind::Operator) {
      throw ParseError(path + ": model files may only contain operators, found a non-operator record '" +
                       r.name + "'");
    }
    require_hermitian(r.matrix, kHermitianTol, r.name.c_str());
    if (dim == 0) {
      dim = r.matrix.rows();
      first_name = r.name;
    } else if (r.matrix.rows() != dim) {
      std::ostringstream os;
      os << path << ": operator '" << r.name << "' is " << r.matrix.rows()
         << "-dimensional but '" << first_name << "' is " << dim;
      throw DimensionMismatch(os.str());
    }
    if (r.name == "H_S") {
      model.h_s = r.matrix;
    } else {
      model.generators.push_back(r.matrix);
    }
  }
  if (model.generators.empty() && require_generators) {
    throw ParseError(path + ": model file has no error generators");
  }
  if (dim == 0) throw ParseError(path + ": model file has no operators");
  if (model.h_s.size() == 0) {
    model.h_s = ComplexMatrix::Zero(dim, dim);
  }
  return model;
}

Subspace load_code(const std::string& path, double drift_tol) {
  const std::vector<Record> records = load_records(path);
  const Record* block = nullptr;
  for (const Record& r : records) {
    if (r.kind != RecordKind::SubspaceBasis) continue;
    if (block) throw ParseError(path + ": more than one subspace record");
    block = &r;
  }
  if (!block) throw ParseError(path + ": no subspace record found");

  const ComplexMatrix& v = block->matrix;
  const ComplexMatrix gram = v.adjoint() * v;
  const double drift =
      (gram - ComplexMatrix::Identity(v.cols(), v.cols())).norm();
  if (drift > drift_tol) {
    std::ostringstream os;
    os << path << ": basis '" << block->name << "' is not orthonormal (drift "
       << drift << " > " << drift_tol << ")";
    throw InvalidArgument(os.str());
  }
  // Gram-Schmidt on the columns; directions are preserved, so a file that
  // was orthonormal to begin with reads back unchanged.
  ComplexMatrix basis(v.rows(), v.cols());
  for (Eigen::Index j = 0; j < v.cols(); ++j) {
    ComplexVector w = v.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        w -= basis.col(i) * (basis.col(i).adjoint() * w);
      }
    }
    const double norm = w.norm();
    if (norm <= 1e-12) {
      throw InvalidArgument(path + ": basis '" + block->name +
                            "' has linearly dependent columns");
    }
    basis.col(j) = w / norm;
  }
  return Subspace(v.rows(), std::move(basis));
}

DensityState load_state(const std::string& path) {
  const std::vector<Record> records = load_records(path);
  const Record* block = nullptr;
  for (const Record& r : records) {
    if (r.kind != RecordKind::State) continue;
    if (block) throw ParseError(path + ": more than one state record");
    block = &r;
  }
  if (!block) throw ParseError(path + ": no state record found");
  return DensityState(block->matrix);
}

EnvironmentFile load_environment(const std::string& path) {
  const std::vector<Record> records = load_records(path);
  EnvironmentFile env;
  for (const Record& r : records) {
    if (r.kind == RecordKind::State) {
      if (r.name != "rho_E") {
        throw ParseError(path + ": unexpected state record '" + r.name +
                         "' (only rho_E is meaningful here)");
      }
      if (env.rho) throw ParseError(path + ": more than one rho_E record");
      env.rho = r.matrix;
    } else if (r.kind == RecordKind::Operator) {
      require_hermitian(r.matrix, kHermitianTol, r.name.c_str());
      if (r.name == "H_E") {
        env.h_e = r.matrix;
      } else {
        env.ops.push_back(r.matrix);
      }
    } else {
      throw ParseError(path + ": subspace records do not belong in an environment file");
    }
  }
  return env;
}

void write_operator(std::ostream& out, const std::string& name,
                    const ComplexMatrix& m) {
  out << "operator " << name << " " << m.rows() << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const std::complex<double> z = m(r, c);
      if (z == std::complex<double>(0.0, 0.0)) continue;
      out << r << " " << c << " " << format_double(z.real()) << " "
          << format_double(z.imag()) << "\n";
    }
  }
  out << "end\n";
}

void write_subspace(std::ostream& out, const std::string& name,
                    const Subspace& s) {
  out << "subspace " << name << " " << s.ambient_dim << " " << s.dim() << "\n";
  for (Eigen::Index r = 0; r < s.basis.rows(); ++r) {
    for (Eigen::Index c = 0; c < s.basis.cols(); ++c) {
      const std::complex<double> z = s.basis(r, c);
      if (z == std::complex<double>(0.0, 0.0)) continue;
      out << r << " " << c << " " << format_double(z.real()) << " "
          << format_double(z.imag()) << "\n";
    }
  }
  out << "end\n";
}

void RunConfig::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw InvalidArgument("tolerance must be positive and finite");
  }
  if (env_dim < 1) throw InvalidArgument("environment dimension must be positive");
  if (trials < 1) throw InvalidArgument("trial count must be positive");
  if (ambient_cap < 1) throw InvalidArgument("ambient cap must be positive");
  for (double t : effective_times()) {
    if (!std::isfinite(t)) throw InvalidArgument("times must be finite");
  }
  if (effective_times().empty()) throw InvalidArgument("times must be nonempty");
}

const std::vector<double>& RunConfig::effective_times() const {
  return times.empty() ? default_times() : times;
}

const std::vector<double>& default_times() {
  static const std::vector<double> ts = [] {
    std::vector<double> out;
    for (int i = 0; i < 8; ++i) {
      out.push_back(std::pow(10.0, -1.0 + 2.0 * double(i) / 7.0));
    }
    return out;
  }();
  return ts;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

JsonWriter& JsonWriter::begin_object() {
  separate();
  buf_ += '{';
  comma_stack_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  buf_ += '}';
  comma_stack_.pop_back();
  if (!comma_stack_.empty()) comma_stack_.back() = true;
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separate();
  buf_ += '[';
  comma_stack_.push_back(false);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  buf_ += ']';
  comma_stack_.pop_back();
  if (!comma_stack_.empty()) comma_stack_.back() = true;
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  separate();
  buf_ += '"';
  buf_ += k;
  buf_ += "\":";
  pending_key_ = true;
  return *this;
}

void JsonWriter::separate() {
  if (pending_key_) {
    pending_key_ = false;  // the value completing a key:value pair
    return;
  }
  if (!comma_stack_.empty() && comma_stack_.back()) buf_ += ',';
  if (!comma_stack_.empty()) comma_stack_.back() = true;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separate();
  buf_ += '"';
  for (char ch : v) {
    switch (ch) {
      case '"': buf_ += "\\\""; break;
      case '\\': buf_ += "\\\\"; break;
      case '\n': buf_ += "\\n"; break;
      case '\t': buf_ += "\\t"; break;
      default: buf_ += ch;
    }
  }
  buf_ += '"';
  return *this;
}

JsonWriter& JsonWriter::value(const char* v) { return value(std::string(v)); }

JsonWriter& JsonWriter::value(double v) {
  separate();
  buf_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
  separate();
  buf_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separate();
  buf_ += v ? "true" : "false";
  return *this;
}

namespace {

void emit_config(JsonWriter& w, const RunConfig& config) {
  w.key("config").begin_object();
  w.key("tol").value(config.tol);
  w.key("env_dim").value(config.env_dim);
  w.key("trials").value(config.trials);
  w.key("seed").value(config.seed);
  w.key("ambient_cap").value(config.ambient_cap);
  w.key("times").begin_array();
  for (double t : config.effective_times()) w.value(t);
  w.end_array();
  w.end_object();
}

void emit_code_report(JsonWriter& w, const CodeReport& report) {
  w.begin_object();
  w.key("route").value(to_string(report.route));
  w.key("ambient_dim").value(report.code.ambient_dim);
  w.key("code_dim").value(report.code.dim());
  w.key("sigma").begin_array();
  for (double s : report.sigma) w.value(s);
  w.end_array();
  w.key("lemma31_residual").value(report.lemma31_residual);
  w.key("hs_invariance_residual").value(report.hs_invariance_residual);
  if (report.dynamical_min_fidelity) {
    w.key("dynamical_min_fidelity").value(*report.dynamical_min_fidelity);
  }
  if (report.induced_env_op_shape) {
    w.key("induced_env_op_shape").begin_array();
    w.value(report.induced_env_op_shape->first);
    w.value(report.induced_env_op_shape->second);
    w.end_array();
  }
  w.key("verdict").value(to_string(report.verdict));
  w.key("basis").begin_array();
  for (Eigen::Index c = 0; c < report.code.basis.cols(); ++c) {
    w.begin_array();
    for (Eigen::Index r = 0; r < report.code.basis.rows(); ++r) {
      w.begin_array();
      w.value(report.code.basis(r, c).real());
      w.value(report.code.basis(r, c).imag());
      w.end_array();
    }
    w.end_array();
  }
  w.end_array();
  w.end_object();
}

}  // namespace

std::string find_report(const std::string& route, const RunConfig& config,
                        const std::vector<CodeReport>& codes) {
  JsonWriter w;
  w.begin_object();
  w.key("schema").value("eac-report/1");
  w.key("command").value("find");
  w.key("route").value(route);
  emit_config(w, config);
  w.key("codes").begin_array();
  for (const CodeReport& report : codes) emit_code_report(w, report);
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

std::string verify_report(const RunConfig& config, const CodeReport& report) {
  JsonWriter w;
  w.begin_object();
  w.key("schema").value("eac-report/1");
  w.key("command").value("verify");
  emit_config(w, config);
  w.key("report");
  emit_code_report(w, report);
  w.end_object();
  return w.str() + "\n";
}

std::string register_report(const RunConfig& config,
                            const std::vector<RegisterRow>& rows) {
  JsonWriter w;
  w.begin_object();
  w.key("schema").value("eac-report/1");
  w.key("command").value("register");
  emit_config(w, config);
  w.key("rows").begin_array();
  for (const RegisterRow& row : rows) {
    w.begin_object();
    w.key("d").value(row.d);
    w.key("n").value(row.n);
    w.key("ambient_dim").value(row.ambient_dim);
    w.key("code_dim").value(row.report.code.dim());
    w.key("lemma31_residual").value(row.report.lemma31_residual);
    if (row.report.dynamical_min_fidelity) {
      w.key("dynamical_min_fidelity").value(*row.report.dynamical_min_fidelity);
    }
    w.key("verdict").value(to_string(row.report.verdict));
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

std::string series_csv(const std::vector<EvolutionSample>& samples) {
  std::string out = "t,purity,fidelity\n";
  for (const EvolutionSample& s : samples) {
    out += format_double(s.time);
    out += ',';
    out += format_double(s.purity);
    out += ',';
    out += format_double(s.fidelity_vs_ideal);
    out += '\n';
  }
  return out;
}

}  // namespace eac::io
