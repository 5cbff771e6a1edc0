// cntspin: coupling curve, state transfer and error sweeps from a YAML config.
//
//   cntspin coupling --config coupling.yaml --out g.csv
//   cntspin transfer --config transfer.yaml --out transfer.csv --fock-levels 20
//   cntspin sweep    --config sweep_gamma_s.yaml --out eps.csv
//
// Exit codes: 0 success, 2 config error, 3 numerical/integration error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "cntspin/config.hpp"
#include "cntspin/csv.hpp"
#include "cntspin/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<int> fock_levels;
  std::optional<double> dt;
  std::optional<std::string> model;
  bool quiet = false;
};

void apply_overrides(cntspin::TransferSpec& spec, const Options& opt) {
  if (opt.fock_levels) {
    if (*opt.fock_levels < 2) throw cntspin::ConfigError("--fock-levels", 0, "must be >= 2");
    spec.fock_levels = *opt.fock_levels;
  }
  if (opt.dt) {
    if (!(*opt.dt > 0.0)) throw cntspin::ConfigError("--dt", 0, "must be > 0");
    spec.dt = *opt.dt;
  }
  if (opt.model) spec.model = *opt.model == "full" ? cntspin::ModelKind::full : cntspin::ModelKind::jc;
}

void write(const cntspin::CsvTable& table, const Options& opt) {
  if (opt.out.empty() || opt.out == "-") {
    cntspin::write_csv(table, std::cout);
  } else {
    cntspin::emit_csv(table, opt.out);
  }
}

template <class T>
T expect(cntspin::ExperimentConfig cfg, const char* command) {
  if (auto* spec = std::get_if<T>(&cfg)) return std::move(*spec);
  throw cntspin::ConfigError("experiment", 0, std::string("config does not describe a '") + command + "' run");
}

int run_coupling(const Options& opt) {
  const auto spec = expect<cntspin::CouplingCurveSpec>(cntspin::load_config(opt.config), "coupling");
  if (opt.fock_levels || opt.dt || opt.model) {
    std::cerr << "warning: --fock-levels/--dt/--model do not apply to the coupling curve\n";
  }
  const cntspin::CouplingCurve curve = cntspin::run_coupling_curve(spec);
  write(cntspin::coupling_table(spec, curve), opt);
  if (!opt.quiet) {
    for (const auto& w : curve.warnings) std::cerr << "warning: " << w << '\n';
    std::fprintf(stderr, "max |g|/h = %.6f MHz at z'_c/l = %.4f\n", curve.max_abs_g_MHz, curve.argmax_over_l);
    try {
      std::fprintf(stderr, "B* = %.6f T\n", cntspin::sweet_spot_field(spec.params));
    } catch (const cntspin::DomainError& e) {
      std::cerr << "B* undefined: " << e.what() << '\n';
    }
  }
  return 0;
}

int run_transfer(const Options& opt) {
  auto spec = expect<cntspin::TransferSpec>(cntspin::load_config(opt.config), "transfer");
  apply_overrides(spec, opt);
  const cntspin::TransferResult r = cntspin::run_state_transfer(spec);
  write(cntspin::transfer_table(spec, r), opt);
  if (!opt.quiet) {
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    std::fprintf(stderr, "F = %.6f  (t_end = %.6g s, %zu RK4 steps, dt = %.4g s)\n", r.fidelity, r.t_end, r.steps,
                 r.dt_used);
  }
  return 0;
}

int run_sweep(const Options& opt) {
  auto spec = expect<cntspin::SweepSpec>(cntspin::load_config(opt.config), "sweep");
  apply_overrides(spec.base, opt);
  const cntspin::SweepResult r = cntspin::run_error_sweep(spec);
  write(cntspin::sweep_table(spec, r), opt);
  int failures = 0;
  for (const auto& p : r.points) failures += p.failure.has_value();
  if (!opt.quiet) {
    std::fprintf(stderr, "%zu points, %d failed\n", r.points.size(), failures);
  }
  return failures ? kExitNumerical : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin-phonon coupling and state-transfer simulator for a nanotube quantum dot"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "YAML experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "CSV output path (default: stdout)");
    sub->add_flag("--quiet", opt.quiet, "Suppress the summary on stderr");
  };
  auto add_sim = [&](CLI::App* sub) {
    sub->add_option("--fock-levels", opt.fock_levels, "Phonon Fock states kept (N+1)");
    sub->add_option("--dt", opt.dt, "RK4 step in seconds");
    sub->add_option("--model", opt.model, "Hamiltonian: jc (interaction picture) or full (lab frame)")
        ->check(CLI::IsMember({"jc", "full"}));
  };

  CLI::App* coupling = app.add_subcommand("coupling", "Coupling g/h versus effective dot center");
  add_common(coupling);
  add_sim(coupling);
  CLI::App* transfer = app.add_subcommand("transfer", "Spin -> phonon state transfer");
  add_common(transfer);
  add_sim(transfer);
  CLI::App* sweep = app.add_subcommand("sweep", "Transfer error versus a dissipation parameter");
  add_common(sweep);
  add_sim(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*coupling) return run_coupling(opt);
    if (*transfer) return run_transfer(opt);
    return run_sweep(opt);
  } catch (const cntspin::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const cntspin::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const cntspin::DomainError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
