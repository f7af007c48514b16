#pragma once

// Experiment descriptions, the paper-figure presets, and a runner that
// executes (method, seed) pairs on a small thread pool and writes CSVs.

#include "gdaam/io.hpp"
#include "gdaam/optimizers.hpp"
#include "gdaam/problems.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gdaam::tools {

enum class ProblemKind { kBilinear, kBilinearQuadratic, kScalar };

std::string_view to_string(ProblemKind kind);
std::optional<ProblemKind> parse_problem_kind(std::string_view name);

struct ExperimentSpec {
  /// Used as the output subdirectory.
  std::string name = "custom";
  ProblemKind problem = ProblemKind::kBilinear;
  Index n = 100;
  /// Target kappa(A); raw Gaussian when unset.
  std::optional<double> kappa;
  bool rescale = true;
  /// Scalar problems only.
  ScalarGameId scalar_game = ScalarGameId::kNegQuadraticCross;
  std::vector<Method> methods;
  double eta = 1.0;
  MomentumConfig momentum = MomentumConfig::negative();
  int p = 10;
  MixerMode mode = MixerMode::kRestart;
  double tol = 1e-5;
  long max_iters = 10000;
  std::vector<std::uint64_t> seeds = {1};
  long record_stride = 1;
  /// Extra key=value lines for metadata.txt.
  std::map<std::string, std::string> notes;

  /// Throws std::invalid_argument.
  void validate() const;
  SolverConfig solver_config(Method method, std::uint64_t seed) const;
};

/// Deterministic problem instance and starting point for one seed.
struct Instance {
  Problem problem;
  JointIterate w0;
};

Instance make_instance(const ExperimentSpec& spec, std::uint64_t seed);

struct RunResult {
  Method method = Method::kSimGda;
  std::uint64_t seed = 0;
  Trajectory trajectory;
};

struct ResultTable {
  ExperimentSpec spec;
  /// Sorted by (method name, seed).
  std::vector<RunResult> runs;

  std::vector<SummaryRow> summary() const;
  const RunResult* find(Method method, std::uint64_t seed) const;
};

struct RunOptions {
  int jobs = 1;
  /// Write CSVs and metadata under out_dir / spec.name when set.
  std::optional<std::filesystem::path> out_dir;
  bool include_time = true;
  bool save_problem = false;
};

ResultTable run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Writes <method>_seed<seed>.csv per run, summary.csv and metadata.txt.
void write_results(const ResultTable& table, const std::filesystem::path& dir,
                   bool include_time = true);

std::vector<std::string> preset_names();
/// A preset is one or more specs (e.g. one per problem size).
std::optional<std::vector<ExperimentSpec>> preset(std::string_view name);

/// Step size used for each scalar game in the fig1 preset.
double scalar_game_eta(ScalarGameId id);

/// Replaces the time columns of trajectory / summary CSV text with zeros.
std::string mask_time_columns(const std::string& csv);

}  // namespace gdaam::tools
