#include "gdaam/tools/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gdaam::tools {

namespace fs = std::filesystem;

namespace {

const char* kTimingNote =
    "wall-clock columns depend on the machine and are excluded from determinism checks";

std::vector<Method> all_methods() { return {std::begin(kAllMethods), std::end(kAllMethods)}; }

std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::string out;
  for (std::size_t i = 0; i < seeds.size(); ++i)
    out += (i ? "," : "") + std::to_string(seeds[i]);
  return out;
}

std::string trajectory_file(const RunResult& run) {
  return std::string(to_string(run.method)) + "_seed" + std::to_string(run.seed) + ".csv";
}

}  // namespace

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kBilinear: return "bilinear";
    case ProblemKind::kBilinearQuadratic: return "bilinear_quadratic";
    case ProblemKind::kScalar: return "scalar";
  }
  return "unknown";
}

std::optional<ProblemKind> parse_problem_kind(std::string_view name) {
  for (ProblemKind k :
       {ProblemKind::kBilinear, ProblemKind::kBilinearQuadratic, ProblemKind::kScalar})
    if (to_string(k) == name) return k;
  if (name == "bilinear-quadratic" || name == "quadratic") return ProblemKind::kBilinearQuadratic;
  return std::nullopt;
}

void ExperimentSpec::validate() const {
  if (methods.empty()) throw std::invalid_argument("experiment needs at least one method");
  if (seeds.empty()) throw std::invalid_argument("experiment needs at least one seed");
  if (problem != ProblemKind::kScalar && n < 1)
    throw std::invalid_argument("problem size n must be >= 1");
  if (kappa && !(*kappa >= 1.0)) throw std::invalid_argument("kappa must be >= 1");
  if (p < 1) throw std::invalid_argument("table size p must be >= 1");
  for (Method m : methods) solver_config(m, seeds.front()).validate();
}

SolverConfig ExperimentSpec::solver_config(Method method, std::uint64_t seed) const {
  SolverConfig c;
  c.method = method;
  c.eta = eta;
  c.momentum = momentum;
  if (is_anderson(method)) {
    MixerConfig mixer;
    mixer.table_size = p;
    mixer.mode = mode;
    c.mixer = mixer;
  }
  c.tol = tol;
  c.max_iters = max_iters;
  c.seed = seed;
  c.record_stride = record_stride;
  return c;
}

Instance make_instance(const ExperimentSpec& spec, std::uint64_t seed) {
  switch (spec.problem) {
    case ProblemKind::kBilinear: {
      BilinearGame game = make_random_bilinear(spec.n, seed, spec.kappa);
      if (spec.rescale) game = rescale_to_unit_norm(std::move(game));
      return {std::move(game), random_initial_point(spec.n, spec.n, seed)};
    }
    case ProblemKind::kBilinearQuadratic:
      return {make_random_bilinear_quadratic(spec.n, seed),
              random_initial_point(spec.n, spec.n, seed)};
    case ProblemKind::kScalar:
      return {ScalarGame{spec.scalar_game},
              JointIterate{Vector::Constant(1, 3.0), Vector::Constant(1, 3.0)}};
  }
  throw std::invalid_argument("unknown problem kind");
}

std::vector<SummaryRow> ResultTable::summary() const {
  std::vector<SummaryRow> rows;
  for (const RunResult& run : runs) {
    SummaryRow row;
    row.method = std::string(to_string(run.method));
    row.seed = run.seed;
    row.status = run.trajectory.status;
    row.iters = run.trajectory.iterations;
    row.final_dist = run.trajectory.final_dist();
    row.wall_ms = static_cast<double>(run.trajectory.wall_ns) * 1e-6;
    rows.push_back(row);
  }
  return rows;
}

const RunResult* ResultTable::find(Method method, std::uint64_t seed) const {
  for (const RunResult& run : runs)
    if (run.method == method && run.seed == seed) return &run;
  return nullptr;
}

ResultTable run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  spec.validate();
  std::map<std::uint64_t, Instance> instances;
  for (std::uint64_t seed : spec.seeds)
    if (!instances.count(seed)) instances.emplace(seed, make_instance(spec, seed));

  ResultTable table;
  table.spec = spec;
  for (Method m : spec.methods)
    for (std::uint64_t seed : spec.seeds) table.runs.push_back(RunResult{m, seed, {}});

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&]() {
    for (std::size_t i = next++; i < table.runs.size(); i = next++) {
      RunResult& run = table.runs[i];
      try {
        const Instance& inst = instances.at(run.seed);
        run.trajectory = gdaam::run(inst.problem, spec.solver_config(run.method, run.seed), inst.w0);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(options.jobs, static_cast<int>(table.runs.size())));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  std::sort(table.runs.begin(), table.runs.end(), [](const RunResult& a, const RunResult& b) {
    const auto an = to_string(a.method);
    const auto bn = to_string(b.method);
    return an != bn ? an < bn : a.seed < b.seed;
  });

  if (options.out_dir) {
    const fs::path dir = *options.out_dir / spec.name;
    write_results(table, dir, options.include_time);
    if (options.save_problem) {
      for (const auto& [seed, inst] : instances) {
        std::ofstream out(dir / ("problem_seed" + std::to_string(seed) + ".txt"));
        write_problem(out, inst.problem);
      }
    }
  }
  return table;
}

void write_results(const ResultTable& table, const fs::path& dir, bool include_time) {
  fs::create_directories(dir);
  for (const RunResult& run : table.runs) {
    std::ofstream out(dir / trajectory_file(run));
    if (!out) throw std::runtime_error("cannot write " + (dir / trajectory_file(run)).string());
    write_trajectory_csv(out, run.trajectory, include_time);
  }
  {
    std::ofstream out(dir / "summary.csv");
    write_summary_csv(out, table.summary(), include_time);
  }
  const ExperimentSpec& s = table.spec;
  std::ofstream meta(dir / "metadata.txt");
  meta << "name=" << s.name << '\n'
       << "problem=" << to_string(s.problem) << '\n';
  if (s.problem == ProblemKind::kScalar) {
    meta << "scalar_game=" << to_string(s.scalar_game) << '\n';
  } else {
    meta << "n=" << s.n << '\n'
         << "kappa=" << (s.kappa ? format_double(*s.kappa) : std::string("raw")) << '\n'
         << "rescaled=" << (s.rescale ? "true" : "false") << '\n';
  }
  meta << "methods=";
  for (std::size_t i = 0; i < s.methods.size(); ++i)
    meta << (i ? "," : "") << to_string(s.methods[i]);
  meta << '\n'
       << "eta=" << format_double(s.eta) << '\n'
       << "p=" << s.p << '\n'
       << "mode=" << (s.mode == MixerMode::kRestart ? "restart" : "sliding") << '\n'
       << "momentum=" << format_double(s.momentum.extrapolation_eta) << ','
       << format_double(s.momentum.update_eta) << ',' << format_double(s.momentum.beta) << '\n'
       << "tol=" << format_double(s.tol) << '\n'
       << "max_iters=" << s.max_iters << '\n'
       << "seeds=" << join_seeds(s.seeds) << '\n'
       << "record_stride=" << s.record_stride << '\n'
       << "timing=" << kTimingNote << '\n';
  for (const auto& [key, value] : s.notes) meta << key << '=' << value << '\n';
}

double scalar_game_eta(ScalarGameId id) {
  switch (id) {
    case ScalarGameId::kSaddleExpBump: return 0.5;
    case ScalarGameId::kQuarticExp: return 0.1;
    case ScalarGameId::kNegQuadraticCross: return 0.1;
    case ScalarGameId::kCubicMix: return 1.0;
    case ScalarGameId::kCubicAntisym: return 0.01;
    case ScalarGameId::kQuarticCubic: return 0.2;
  }
  return 0.1;
}

std::vector<std::string> preset_names() { return {"fig1", "fig4", "fig5", "fig6a", "fig6c"}; }

std::optional<std::vector<ExperimentSpec>> preset(std::string_view name) {
  std::vector<ExperimentSpec> specs;
  if (name == "fig1") {
    for (ScalarGameId id : kAllScalarGames) {
      ExperimentSpec s;
      s.name = "fig1_" + std::string(to_string(id));
      s.problem = ProblemKind::kScalar;
      s.scalar_game = id;
      s.methods = all_methods();
      s.eta = scalar_game_eta(id);
      s.p = 3;
      s.tol = 1e-4;
      s.max_iters = 100000;
      s.seeds = {0};
      s.notes["eta_rule"] =
          "fastest eta in {0.01,0.05,0.1,0.2,0.5,1} reaching a finite stationary point with "
          "sim-gda-am, p=3";
      specs.push_back(s);
    }
  } else if (name == "fig4" || name == "fig5") {
    const std::vector<Index> sizes =
        name == "fig4" ? std::vector<Index>{100, 500, 1000} : std::vector<Index>{100, 500};
    for (Index n : sizes) {
      ExperimentSpec s;
      s.name = std::string(name) + "_n" + std::to_string(n);
      s.n = n;
      s.methods = all_methods();
      s.eta = 1.0;
      s.p = 10;
      s.tol = 1e-5;
      s.max_iters = 10000;
      s.seeds = name == "fig4" ? std::vector<std::uint64_t>{1, 2, 3}
                               : std::vector<std::uint64_t>{1};
      s.record_stride = 10;
      specs.push_back(s);
    }
  } else if (name == "fig6a") {
    for (int p : {5, 10, 20, 50, 100}) {
      ExperimentSpec s;
      s.name = "fig6a_p" + std::to_string(p);
      s.n = 500;
      s.kappa = 10.0;
      s.methods = {Method::kSimGdaAm, Method::kAltGdaAm};
      s.p = p;
      s.max_iters = 100000;
      s.seeds = {1, 2, 3, 4, 5};
      s.record_stride = 10;
      specs.push_back(s);
    }
  } else if (name == "fig6c") {
    for (double eta : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      ExperimentSpec s;
      std::ostringstream label;
      label << "fig6c_eta" << eta;
      s.name = label.str();
      s.n = 500;
      s.kappa = 10.0;
      s.methods = {Method::kSimGdaAm, Method::kAltGdaAm};
      s.eta = eta;
      s.p = 10;
      s.max_iters = 20000;
      s.seeds = {1, 2};
      s.record_stride = 10;
      specs.push_back(s);
    }
  } else {
    return std::nullopt;
  }
  return specs;
}

std::string mask_time_columns(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) return csv;
  int column = -1;
  if (line == kTrajectoryHeader) column = 1;
  if (line == kSummaryHeader) column = 5;
  if (column < 0) return csv;

  std::string out = line + '\n';
  while (std::getline(in, line)) {
    std::string masked;
    int field = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string value =
          line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      masked += (field ? "," : "") + (field == column ? std::string("0") : value);
      if (comma == std::string::npos) break;
      start = comma + 1;
      ++field;
    }
    out += masked + '\n';
  }
  return out;
}

}  // namespace gdaam::tools
