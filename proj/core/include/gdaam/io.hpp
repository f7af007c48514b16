#pragma once

// Text formats: trajectory and summary CSVs, complex point lists (re,im),
// and a flat whitespace-separated problem snapshot.

#include "gdaam/optimizers.hpp"
#include "gdaam/problems.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdaam {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kTrajectoryHeader = "iter,time_ns,dist_to_opt,grad_norm,residual_norm";
inline constexpr const char* kSummaryHeader = "method,seed,status,iters,final_dist,wall_ms";

/// Shortest round-trip text for a double (%.17g); "nan" / "inf" / "-inf" otherwise.
std::string format_double(double value);
double parse_double(const std::string& text);

/// Writes the header and one row per record. A missing dist_to_opt is an
/// empty field. With include_time = false the time column is written as 0.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory,
                          bool include_time = true);
std::vector<IterationRecord> read_trajectory_csv(std::istream& in);

struct SummaryRow {
  std::string method;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::kMaxIters;
  long iters = 0;
  std::optional<double> final_dist;
  double wall_ms = 0.0;
};

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows,
                       bool include_time = true);
std::vector<SummaryRow> read_summary_csv(std::istream& in);

void write_complex_csv(std::ostream& out, const std::vector<Complex>& points);
std::vector<Complex> read_complex_csv(std::istream& in);

/// Header line "<kind> <dims>", then the entries: A (row-major), B, C, b, c
/// for bilinear-quadratic; A, b, c for bilinear; the game name for scalar.
void write_problem(std::ostream& out, const Problem& problem);
Problem read_problem(std::istream& in);

}  // namespace gdaam
