// efpdet: command line front end for the determinant engine.
//
//   efpdet compute --psi -1.5708 --n 8
//   efpdet sweep --field 0.5 --n-min 0 --n-max 12 --format json --out sweep.json
//   efpdet verify --level full
//   efpdet psi --field 0.5

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "efpdet/errors.hpp"
#include "efpdet/fredholm.hpp"
#include "efpdet/harness.hpp"

namespace {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kInvalidInput = 2, kUntrusted = 3 };

struct CommonFlags {
  std::optional<double> psi;
  std::optional<double> field;
  int n = 0;
  int n_min = 0;
  int n_max = 12;
  std::size_t nodes = 128;
  std::size_t hl_nodes = 64;
  std::string phi;
  double gamma = 1.0;
  std::string format = "csv";
  std::string out = "stdout";
  std::string config;
};

void add_model_flags(CLI::App* cmd, CommonFlags& f) {
  auto* psi = cmd->add_option("--psi", f.psi, "field angle in (-pi, 0)");
  auto* field = cmd->add_option("--field", f.field, "magnetic field h in (0, 2)");
  psi->excludes(field);
  cmd->add_option("--nodes", f.nodes, "arc quadrature nodes")->capture_default_str();
  cmd->add_option("--hl-nodes", f.hl_nodes, "half-line quadrature nodes")->capture_default_str();
  cmd->add_option("--phi", f.phi, "comma-separated coefficients of phi(z), e.g. \"0,0.1+0.2i\"");
  cmd->add_option("--gamma", f.gamma, "coupling")->capture_default_str();
  cmd->add_option("--config", f.config, "JSON config file");
}

// Config file values first, explicit flags override them.
efpdet::RunConfig resolve(const CLI::App* cmd, const CommonFlags& f) {
  efpdet::RunConfig cfg;
  if (!f.config.empty()) {
    cfg = efpdet::load_config(f.config);
  }
  auto given = [&](const char* name) { return cmd->count(name) > 0; };
  if (f.psi) {
    cfg.psi = f.psi;
    cfg.field_h.reset();
  }
  if (f.field) {
    cfg.field_h = f.field;
    cfg.psi.reset();
  }
  if (given("--nodes") || f.config.empty()) cfg.m_nodes = f.nodes;
  if (given("--hl-nodes") || f.config.empty()) cfg.hl_nodes = f.hl_nodes;
  if (given("--phi")) cfg.phi_coeffs = efpdet::parse_complex_list(f.phi);
  if (given("--gamma") || f.config.empty()) cfg.gamma = f.gamma;
  if (cmd->get_option_no_throw("--n-min") && given("--n-min")) cfg.n_min = f.n_min;
  if (cmd->get_option_no_throw("--n-max") && given("--n-max")) cfg.n_max = f.n_max;
  if (cmd->get_option_no_throw("--out") && given("--out")) cfg.output = f.out;
  if (cmd->get_option_no_throw("--format") && given("--format")) cfg.format = f.format;
  if (!cfg.psi && !cfg.field_h) throw efpdet::DomainError("one of --psi or --field is required");
  return cfg;
}

int run_compute(const CLI::App* cmd, const CommonFlags& f, bool finite_rank) {
  const auto cfg = resolve(cmd, f);
  const int n = cmd->count("--n") > 0 || f.config.empty() ? f.n : cfg.n_min;
  const auto params = efpdet::ModelParams::make(n, cfg.resolved_psi(), cfg.phi_coeffs, cfg.gamma);

  efpdet::LogDet d;
  if (finite_rank) {
    params.validate();
    const auto aq = efpdet::build_arc<efpdet::ExtendedReal>(params.psi, cfg.m_nodes);
    const auto hq = efpdet::build_halfline<efpdet::ExtendedReal>(cfg.hl_nodes);
    d = efpdet::logdet(efpdet::assemble_finite_rank<efpdet::ExtendedReal>(params, aq, hq));
  } else {
    d = efpdet::fredholm_logdet(params, cfg.m_nodes);
  }

  const std::string format = cfg.format.value_or("text");
  if (format == "json") {
    nlohmann::json j{{"n", n},
                     {"psi", params.psi},
                     {"log_abs", d.log_abs},
                     {"arg", d.arg},
                     {"min_pivot", d.min_pivot},
                     {"converged", d.converged},
                     {"diagnostic", d.diagnostic}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::printf("n          %d\npsi        %.17g\nlog_abs    %.17g\narg        %.17g\n"
                "min_pivot  %.17g\nconverged  %s\n",
                n, params.psi, d.log_abs, d.arg, d.min_pivot, d.converged ? "true" : "false");
    if (!d.diagnostic.empty()) std::printf("diagnostic %s\n", d.diagnostic.c_str());
  }
  return d.trusted() ? kOk : kUntrusted;
}

int run_sweep_cmd(const CLI::App* cmd, const CommonFlags& f) {
  const auto cfg = resolve(cmd, f);
  efpdet::SweepConfig sc;
  sc.base = efpdet::ModelParams::make(0, cfg.resolved_psi(), cfg.phi_coeffs, cfg.gamma);
  sc.n_min = cfg.n_min;
  sc.n_max = cfg.n_max;
  sc.m_nodes = cfg.m_nodes;
  const auto format = efpdet::parse_format(cfg.format.value_or("csv"));
  const auto result = efpdet::run_sweep(sc);
  if (result.records.empty()) {
    std::cerr << "efpdet: every row failed the pivot guard\n";
    return kUntrusted;
  }
  efpdet::emit(result.records, format, cfg.output);
  return result.aborted.empty() ? kOk : kUntrusted;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fredholm determinant of the emptiness-formation kernel"};
  app.require_subcommand(1);

  CommonFlags compute_flags, sweep_flags;
  bool finite_rank = false;
  auto* compute = app.add_subcommand("compute", "log-determinant for one n");
  add_model_flags(compute, compute_flags);
  compute->add_option("--n", compute_flags.n, "string length")->capture_default_str();
  compute->add_option("--format", compute_flags.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  compute->add_flag("--finite-rank", finite_rank,
                    "assemble from the half-line (Laplace) representation, single resolution");

  auto* sweep = app.add_subcommand("sweep", "log-determinants over a range of n");
  add_model_flags(sweep, sweep_flags);
  sweep->add_option("--n-min", sweep_flags.n_min)->capture_default_str();
  sweep->add_option("--n-max", sweep_flags.n_max)->capture_default_str();
  sweep->add_option("--format", sweep_flags.format)->check(CLI::IsMember({"csv", "json"}));
  sweep->add_option("--out", sweep_flags.out, "output path or stdout")->capture_default_str();

  std::string level = "quick";
  double verify_gamma = 1.0;
  bool beta_fault = false;
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--level", level)->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
  verify->add_option("--gamma", verify_gamma)->capture_default_str();
  verify->add_flag("--inject-beta-fault", beta_fault, "multiply beta by i (negative control)");

  double field_h = 0;
  auto* psi = app.add_subcommand("psi", "field angle from the magnetic field h");
  psi->add_option("--field", field_h, "h in (0, 2)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidInput;
  }

  try {
    if (*compute) return run_compute(compute, compute_flags, finite_rank);
    if (*sweep) return run_sweep_cmd(sweep, sweep_flags);
    if (*verify) {
      efpdet::VerifyOptions opts;
      opts.level = level == "full" ? efpdet::VerifyLevel::full : efpdet::VerifyLevel::quick;
      opts.gamma = verify_gamma;
      if (beta_fault) opts.beta_fault = {0, 1};
      const auto report = efpdet::run_verify(opts);
      efpdet::print_report(report, std::cout);
      return report.overall ? kOk : kVerifyFailed;
    }
    if (*psi) {
      const auto angle = efpdet::psi_from_field(field_h);
      std::printf("%.17g\n", angle.psi);
      if (angle.wrapped) std::fprintf(stderr, "note: angle was wrapped into (-pi, 0)\n");
      return kOk;
    }
  } catch (const efpdet::NumericalError& e) {
    std::cerr << "efpdet: numerical failure: " << e.what() << '\n';
    return kUntrusted;
  } catch (const std::logic_error& e) {  // DomainError, SingularPointError
    std::cerr << "efpdet: invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {  // RangeError, I/O
    std::cerr << "efpdet: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}
