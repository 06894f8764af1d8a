// eac: build error-avoiding codes from interaction structure and check them,
// statically (factorization condition) and dynamically (joint evolution).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "eac/codes.hpp"
#include "eac/io.hpp"
#include "eac/open_system.hpp"

namespace {

using namespace eac;

struct Options {
  io::RunConfig config;
  std::string out;
  std::string route = "auto";
  std::string model_path;
  std::string code_path;
  std::string state_path;
  std::string envops_path;
  Eigen::Index cell_dim = 2;
  std::string cells = "2";
};

void add_config_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("--tol", opt.config.tol, "residual tolerance");
  cmd->add_option("--env-dim", opt.config.env_dim,
                  "sampled environment dimension");
  cmd->add_option("--trials", opt.config.trials, "random trials per check");
  cmd->add_option("--seed", opt.config.seed,
                  "RNG seed (EAC_SEED overrides when set)");
  cmd->add_option("--times", opt.config.times, "evolution times")
      ->delimiter(',');
  cmd->add_option("--out", opt.out, "write the output here instead of stdout");
  cmd->add_option("--cap", opt.config.ambient_cap,
                  "largest ambient dimension a register may reach");
}

void apply_seed_env(io::RunConfig& config) {
  const char* raw = std::getenv("EAC_SEED");
  if (!raw) return;
  try {
    std::size_t used = 0;
    config.seed = std::stoll(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument(raw);
  } catch (const std::exception&) {
    throw InvalidArgument(std::string("EAC_SEED is not an integer: '") + raw +
                          "'");
  }
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw InvalidArgument("cannot open output file '" + out_path + "'");
  f << payload;
  f.flush();
  if (!f.good()) throw InvalidArgument("failed writing '" + out_path + "'");
}

bool any_nonzero_code(const std::vector<CodeReport>& codes) {
  for (const CodeReport& r : codes) {
    if (r.code.dim() >= 1) return true;
  }
  return false;
}

int cmd_find(const Options& opt) {
  const ErrorModel model = io::load_error_model(opt.model_path);
  const double tol = opt.config.tol;

  std::string route = opt.route;
  if (route == "auto") {
    std::vector<ComplexMatrix> family = model.generators;
    family.push_back(model.h_s);
    route = commuting_family(family, tol) ? "eigenspace" : "singlet";
  }

  std::vector<CodeReport> codes;
  if (route == "eigenspace") {
    codes = common_eigenspace_codes(model, tol);
  } else if (route == "weight") {
    codes = weight_space_codes(model, tol);
  } else {
    const OperatorAlgebra algebra = lie_closure(
        model.generators, std::size_t(model.dim()) * std::size_t(model.dim()),
        tol);
    std::vector<ComplexMatrix> family = model.generators;
    family.push_back(model.h_s);
    if (algebra.abelian && commuting_family(family, tol)) {
      // Abelian dynamical algebra: every weight space is a candidate code.
      codes = weight_space_codes(model, tol);
      route = "weight";
    } else {
      const Subspace sector = singlet_sector(algebra, tol);
      if (sector.dim() >= 1) {
        CodeReport report = check_lemma31(model, sector, tol);
        report.route = Route::SingletSector;
        codes.push_back(std::move(report));
      } else {
        // Nonzero common eigenvalues could still admit codes in the
        // non-semisimple case; that route has no construction here.
        CodeReport report;
        report.code = sector;
        report.route = Route::SingletSector;
        report.verdict = Verdict::Inconclusive;
        codes.push_back(std::move(report));
      }
    }
  }

  emit(io::find_report(route, opt.config, codes), opt.out);
  return any_nonzero_code(codes) ? 0 : 3;
}

int cmd_verify(const Options& opt) {
  const ErrorModel model = io::load_error_model(opt.model_path);
  const Subspace code = io::load_code(opt.code_path);
  const CodeReport report = verify_code_dynamically(
      model, code, opt.config.env_dim, opt.config.trials,
      opt.config.effective_times(), opt.config.seed, opt.config.tol);
  emit(io::verify_report(opt.config, report), opt.out);
  return report.verdict == Verdict::EAC ? 0 : 3;
}

std::pair<Eigen::Index, Eigen::Index> parse_cell_range(const std::string& s) {
  const auto parse_one = [&s](const std::string& part) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(part, &used);
      if (used != part.size() || v < 1) throw std::invalid_argument(part);
      return Eigen::Index(v);
    } catch (const std::exception&) {
      throw InvalidArgument("bad cell count '" + s + "'");
    }
  };
  const std::size_t dots = s.find("..");
  if (dots == std::string::npos) {
    const Eigen::Index n = parse_one(s);
    return {n, n};
  }
  const Eigen::Index lo = parse_one(s.substr(0, dots));
  const Eigen::Index hi = parse_one(s.substr(dots + 2));
  if (lo > hi) throw InvalidArgument("bad cell range '" + s + "'");
  return {lo, hi};
}

int cmd_register(const Options& opt) {
  const auto [n_lo, n_hi] = parse_cell_range(opt.cells);
  std::vector<io::RegisterRow> rows;
  for (Eigen::Index n = n_lo; n <= n_hi; ++n) {
    io::RegisterRow row;
    row.d = opt.cell_dim;
    row.n = n;
    row.report = register_singlet_code(opt.cell_dim, n, opt.config.tol,
                                       opt.config.ambient_cap);
    row.ambient_dim = row.report.code.ambient_dim;
    if (row.report.code.dim() >= 1) {
      const ErrorModel model =
          build_register_model(gell_mann_basis(opt.cell_dim), n, {});
      row.report = verify_code_dynamically(
          model, row.report.code, opt.config.env_dim, opt.config.trials,
          opt.config.effective_times(), opt.config.seed, opt.config.tol);
      row.report.route = Route::RegisterSinglet;
    }
    rows.push_back(std::move(row));
  }
  emit(io::register_report(opt.config, rows), opt.out);
  for (const io::RegisterRow& row : rows) {
    if (row.report.code.dim() >= 1) return 0;
  }
  return 3;
}

int cmd_simulate(const Options& opt) {
  const ErrorModel sys =
      io::load_error_model(opt.model_path, /*require_generators=*/false);
  const DensityState rho_s = io::load_state(opt.state_path);
  const io::EnvironmentFile env = io::load_environment(opt.envops_path);

  if (env.ops.size() != sys.generators.size()) {
    std::ostringstream os;
    os << "model has " << sys.generators.size()
       << " error generators but the environment file provides "
       << env.ops.size() << " coupling operators";
    throw DimensionMismatch(os.str());
  }

  Eigen::Index d_e = opt.config.env_dim;
  if (!env.ops.empty()) {
    d_e = env.ops.front().rows();
  } else if (env.h_e) {
    d_e = env.h_e->rows();
  } else if (env.rho) {
    d_e = env.rho->rows();
  }

  HamiltonianModel model;
  model.h_s = sys.h_s;
  model.h_e = env.h_e ? *env.h_e : ComplexMatrix::Zero(d_e, d_e);
  for (std::size_t i = 0; i < env.ops.size(); ++i) {
    model.couplings.emplace_back(sys.generators[i], env.ops[i]);
  }

  const DensityState rho_e = env.rho
                                 ? DensityState(*env.rho)
                                 : sample_state(d_e, d_e, opt.config.seed);
  const std::vector<EvolutionSample> samples =
      decoherence_trace(model, rho_s, rho_e, opt.config.effective_times());
  emit(io::series_csv(samples), opt.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "error-avoiding code toolkit: find codes from error generators, check "
      "the factorization condition, and exercise codes under joint "
      "system-environment evolution"};
  app.require_subcommand(1);

  Options opt;

  CLI::App* find = app.add_subcommand(
      "find", "construct candidate codes from a model file");
  find->add_option("model", opt.model_path, "operator file with H_S and S_lambda")
      ->required();
  find->add_option("--route", opt.route, "construction route")
      ->check(CLI::IsMember({"auto", "eigenspace", "singlet", "weight"}));
  add_config_options(find, opt);

  CLI::App* verify = app.add_subcommand(
      "verify", "check a code file against a model, statically and dynamically");
  verify->add_option("model", opt.model_path, "operator file with H_S and S_lambda")
      ->required();
  verify->add_option("code", opt.code_path, "subspace file with the code basis")
      ->required();
  add_config_options(verify, opt);

  CLI::App* reg = app.add_subcommand(
      "register", "singlet codes of symmetric cell registers");
  reg->add_option("-d,--cell-dim", opt.cell_dim, "cell dimension")
      ->check(CLI::PositiveNumber);
  reg->add_option("-n,--cells", opt.cells, "cell count, a single N or a range lo..hi");
  add_config_options(reg, opt);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "trace out the environment along a time grid");
  simulate->add_option("model", opt.model_path, "operator file with H_S and S_lambda")
      ->required();
  simulate->add_option("state", opt.state_path, "initial system state file")
      ->required();
  simulate
      ->add_option("envops", opt.envops_path,
                   "environment file with E_lambda, optional H_E and rho_E")
      ->required();
  add_config_options(simulate, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    apply_seed_env(opt.config);
    opt.config.validate();
    if (find->parsed()) return cmd_find(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (reg->parsed()) return cmd_register(opt);
    return cmd_simulate(opt);
  } catch (const io::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
