// gdaam: run experiments and presets, parameter sweeps, and verification suites.

#include "gdaam/tools/experiment.hpp"
#include "gdaam/tools/verify.hpp"

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <iostream>
#include <sstream>

namespace {

using namespace gdaam;
using namespace gdaam::tools;

constexpr int kExitInvalid = 1;
constexpr int kExitVerifyFailed = 2;

struct RunArgs {
  std::string preset;
  std::string problem = "bilinear";
  std::string game = "neg_quadratic_cross";
  long n = 100;
  double kappa = 0.0;
  bool no_rescale = false;
  std::vector<std::string> methods;
  int p = 10;
  double eta = 1.0;
  std::string mode = "restart";
  double tol = 1e-5;
  long max_iters = 10000;
  std::vector<std::uint64_t> seeds;
  long record_stride = 1;
  double momentum_eta_e = 1.0;
  double momentum_eta_u = 0.5;
  double momentum_beta = -0.3;
  std::string out;
  int jobs = 1;
  bool save_problem = false;
  bool no_time = false;
  std::string config;
  std::string section;
};

// Options shared by `run` and `sweep`.
void add_run_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--preset", a.preset, "fig1|fig4|fig5|fig6a|fig6c")
      ->check(CLI::IsMember(preset_names()));
  cmd->add_option("--problem", a.problem, "bilinear|bilinear_quadratic|scalar");
  cmd->add_option("--game", a.game, "scalar game name (with --problem scalar)");
  cmd->add_option("--n", a.n, "problem size")->check(CLI::PositiveNumber);
  cmd->add_option("--kappa", a.kappa, "target condition number of A (raw Gaussian if unset)");
  cmd->add_flag("--no-rescale", a.no_rescale, "keep A unscaled");
  cmd->add_option("--method", a.methods, "methods, comma separated or repeated")
      ->delimiter(',');
  cmd->add_option("--p", a.p, "Anderson table size");
  cmd->add_option("--eta", a.eta, "step size");
  cmd->add_option("--mode", a.mode, "restart|sliding")
      ->check(CLI::IsMember({"restart", "sliding"}));
  cmd->add_option("--tol", a.tol, "stop when dist_to_opt (or grad_norm) <= tol");
  cmd->add_option("--max-iters", a.max_iters, "iteration budget");
  cmd->add_option("--seed", a.seeds, "seeds, comma separated or repeated")->delimiter(',');
  cmd->add_option("--record-stride", a.record_stride, "keep every k-th trajectory record");
  cmd->add_option("--momentum-eta-e", a.momentum_eta_e, "eg-momentum extrapolation step");
  cmd->add_option("--momentum-eta-u", a.momentum_eta_u, "eg-momentum update step");
  cmd->add_option("--momentum-beta", a.momentum_beta, "eg-momentum coefficient");
  cmd->add_option("--out", a.out, "output directory for CSVs");
  cmd->add_option("--jobs", a.jobs, "concurrent (method, seed) runs")->check(CLI::PositiveNumber);
  cmd->add_flag("--save-problem", a.save_problem, "also write the problem instances");
  cmd->add_flag("--no-time", a.no_time, "write time columns as 0");
  cmd->add_option("--config", a.config, "INI file with one section per preset")
      ->check(CLI::ExistingFile);
  cmd->add_option("--section", a.section, "config section (default: the preset name or 'run')");
}

// Fills options not given on the command line from the config section.
void apply_config(CLI::App* cmd, const RunArgs& a) {
  if (a.config.empty()) return;
  const std::string section =
      !a.section.empty() ? a.section : (!a.preset.empty() ? a.preset : std::string("run"));
  const auto items = CLI::ConfigINI().from_file(a.config);
  bool found = false;
  for (const CLI::ConfigItem& item : items) {
    if (item.parents.size() != 1 || item.parents.front() != section) continue;
    if (item.name == "++" || item.name == "--") continue;
    found = true;
    CLI::Option* opt = cmd->get_option_no_throw("--" + item.name);
    if (opt == nullptr) throw CLI::ConversionError("unknown config key '" + item.name + "'");
    if (opt->count() > 0) continue;
    if (opt->get_type_size() == 0) {
      const std::string v = item.inputs.empty() ? "true" : item.inputs.front();
      if (v == "false" || v == "0" || v == "off") continue;
      opt->add_result(std::vector<std::string>{"true"});
    } else {
      opt->add_result(item.inputs);
    }
    opt->run_callback();
  }
  if (!found) throw CLI::ConversionError("config has no section [" + section + "]");
}

bool given(CLI::App* cmd, const char* name) { return cmd->get_option(name)->count() > 0; }

ExperimentSpec apply_overrides(ExperimentSpec s, CLI::App* cmd, const RunArgs& a) {
  if (given(cmd, "--problem")) {
    const auto kind = parse_problem_kind(a.problem);
    if (!kind) throw std::invalid_argument("unknown problem '" + a.problem + "'");
    s.problem = *kind;
  }
  if (given(cmd, "--game")) {
    const auto id = parse_scalar_game(a.game);
    if (!id) throw std::invalid_argument("unknown scalar game '" + a.game + "'");
    s.scalar_game = *id;
    s.problem = ProblemKind::kScalar;
  }
  if (given(cmd, "--n")) s.n = a.n;
  if (given(cmd, "--kappa")) s.kappa = a.kappa;
  if (given(cmd, "--no-rescale")) s.rescale = !a.no_rescale;
  if (given(cmd, "--method")) {
    s.methods.clear();
    for (const std::string& name : a.methods) {
      if (name == "all") {
        s.methods.assign(std::begin(kAllMethods), std::end(kAllMethods));
        continue;
      }
      const auto m = parse_method(name);
      if (!m) throw std::invalid_argument("unknown method '" + name + "'");
      s.methods.push_back(*m);
    }
  }
  if (given(cmd, "--p")) s.p = a.p;
  if (given(cmd, "--eta")) s.eta = a.eta;
  if (given(cmd, "--mode")) s.mode = a.mode == "sliding" ? MixerMode::kSliding : MixerMode::kRestart;
  if (given(cmd, "--tol")) s.tol = a.tol;
  if (given(cmd, "--max-iters")) s.max_iters = a.max_iters;
  if (given(cmd, "--seed")) s.seeds = a.seeds;
  if (given(cmd, "--record-stride")) s.record_stride = a.record_stride;
  if (given(cmd, "--momentum-eta-e")) s.momentum.extrapolation_eta = a.momentum_eta_e;
  if (given(cmd, "--momentum-eta-u")) s.momentum.update_eta = a.momentum_eta_u;
  if (given(cmd, "--momentum-beta")) s.momentum.beta = a.momentum_beta;
  return s;
}

std::vector<ExperimentSpec> build_specs(CLI::App* cmd, const RunArgs& a) {
  std::vector<ExperimentSpec> specs;
  if (!a.preset.empty()) {
    specs = *preset(a.preset);
  } else {
    ExperimentSpec s;
    s.methods = {Method::kSimGdaAm};
    specs.push_back(s);
  }
  for (ExperimentSpec& s : specs) {
    s = apply_overrides(std::move(s), cmd, a);
    s.validate();
  }
  return specs;
}

RunOptions run_options(const RunArgs& a) {
  RunOptions o;
  o.jobs = a.jobs;
  if (!a.out.empty()) o.out_dir = a.out;
  o.include_time = !a.no_time;
  o.save_problem = a.save_problem;
  return o;
}

void print_table(const ResultTable& table, bool include_time) {
  std::cout << "# " << table.spec.name << '\n';
  write_summary_csv(std::cout, table.summary(), include_time);
}

int cmd_run(CLI::App* cmd, const RunArgs& a) {
  const auto specs = build_specs(cmd, a);
  const RunOptions opts = run_options(a);
  for (const ExperimentSpec& s : specs) print_table(run_experiment(s, opts), opts.include_time);
  return 0;
}

std::vector<double> parse_values(const std::vector<std::string>& values) {
  std::vector<double> out;
  for (const std::string& v : values) out.push_back(parse_double(v));
  return out;
}

int cmd_sweep(CLI::App* cmd, const RunArgs& a, const std::string& param,
              const std::vector<std::string>& raw_values) {
  const auto base_specs = build_specs(cmd, a);
  const std::vector<double> values = parse_values(raw_values);
  const RunOptions opts = run_options(a);
  for (const ExperimentSpec& base : base_specs) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      ExperimentSpec s = base;
      const double v = values[i];
      if (param == "p") s.p = static_cast<int>(v);
      if (param == "eta") s.eta = v;
      if (param == "n") s.n = static_cast<Index>(v);
      if (param == "kappa") s.kappa = v;
      s.name = base.name + "_" + param + raw_values[i];
      s.validate();
      print_table(run_experiment(s, opts), opts.include_time);
    }
  }
  return 0;
}

int cmd_verify(const std::vector<std::string>& suites) {
  bool ok = true;
  for (const std::string& name : suites) {
    const auto report = run_suite(name);
    report->print(std::cout);
    ok = ok && report->passed();
  }
  return ok ? 0 : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anderson-mixing GDA for minimax problems: experiments and verification"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run = app.add_subcommand("run", "run an experiment or preset, emit CSVs");
  add_run_options(run, run_args);

  RunArgs sweep_args;
  std::string sweep_param;
  std::vector<std::string> sweep_values;
  CLI::App* sweep = app.add_subcommand("sweep", "repeat an experiment over one parameter");
  add_run_options(sweep, sweep_args);
  sweep->add_option("--param", sweep_param, "parameter to sweep")
      ->required()
      ->check(CLI::IsMember({"p", "eta", "n", "kappa"}));
  sweep->add_option("--values", sweep_values, "comma separated values")
      ->required()
      ->delimiter(',');

  std::vector<std::string> suites;
  CLI::App* verify = app.add_subcommand("verify", "run property suites");
  std::vector<std::string> names = suite_names();
  names.push_back("all");
  verify->add_option("--suite", suites, "suite name(s): " + [&] {
    std::string s;
    for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
    return s;
  }())->required()->delimiter(',')->check(CLI::IsMember(names));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (run->parsed()) {
      apply_config(run, run_args);
      return cmd_run(run, run_args);
    }
    if (sweep->parsed()) {
      apply_config(sweep, sweep_args);
      return cmd_sweep(sweep, sweep_args, sweep_param, sweep_values);
    }
    if (std::find(suites.begin(), suites.end(), "all") != suites.end()) suites = suite_names();
    return cmd_verify(suites);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}
