#include "gdaam/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace gdaam;

TEST(FormatDouble, RoundTripsExactly) {
  for (double v : {0.0, -0.0, 1.0, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, -1.7976931348623157e308}) {
    EXPECT_EQ(parse_double(format_double(v)), v);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_TRUE(std::isnan(parse_double("nan")));
  EXPECT_THROW(parse_double("1.5x"), ParseError);
  EXPECT_THROW(parse_double(""), ParseError);
}

TEST(TrajectoryCsv, HeaderIsExact) {
  std::ostringstream out;
  write_trajectory_csv(out, Trajectory{});
  EXPECT_EQ(out.str(), std::string(kTrajectoryHeader) + "\n");
}

TEST(TrajectoryCsv, RoundTripsRealRun) {
  const BilinearGame g = rescale_to_unit_norm(make_random_bilinear(6, 1));
  SolverConfig c;
  c.method = Method::kAltGdaAm;
  c.mixer = MixerConfig{};
  c.max_iters = 50;
  const Trajectory t = run(Problem{g}, c, random_initial_point(6, 6, 1));
  std::stringstream io;
  write_trajectory_csv(io, t);
  const auto back = read_trajectory_csv(io);
  ASSERT_EQ(back.size(), t.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].iter, t.records[i].iter);
    EXPECT_EQ(back[i].time_ns, t.records[i].time_ns);
    EXPECT_EQ(back[i].dist_to_opt, t.records[i].dist_to_opt);
    EXPECT_EQ(back[i].grad_norm, t.records[i].grad_norm);
    EXPECT_EQ(back[i].residual_norm, t.records[i].residual_norm);
  }
}

TEST(TrajectoryCsv, MissingDistanceIsEmptyField) {
  Trajectory t;
  IterationRecord r;
  r.iter = 3;
  r.time_ns = 99;
  r.grad_norm = 0.25;
  r.residual_norm = std::numeric_limits<double>::infinity();
  t.records.push_back(r);
  std::stringstream io;
  write_trajectory_csv(io, t, false);
  EXPECT_NE(io.str().find("\n3,0,,0.25,inf\n"), std::string::npos);
  const auto back = read_trajectory_csv(io);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_FALSE(back[0].dist_to_opt.has_value());
  EXPECT_EQ(back[0].time_ns, 0);
  EXPECT_TRUE(std::isinf(back[0].residual_norm));
}

TEST(TrajectoryCsv, RejectsMalformedInput) {
  std::istringstream bad_header("iter,time,dist\n");
  EXPECT_THROW(read_trajectory_csv(bad_header), ParseError);
  std::istringstream short_row(std::string(kTrajectoryHeader) + "\n1,2,3\n");
  EXPECT_THROW(read_trajectory_csv(short_row), ParseError);
  std::istringstream bad_number(std::string(kTrajectoryHeader) + "\n1,2,x,4,5\n");
  EXPECT_THROW(read_trajectory_csv(bad_number), ParseError);
}

TEST(SummaryCsv, RoundTrip) {
  std::vector<SummaryRow> rows(3);
  rows[0] = {"sim-gda-am", 1, RunStatus::kConverged, 120, 9.5e-6, 1.25};
  rows[1] = {"eg", 2, RunStatus::kMaxIters, 10000, 0.5, 30.0};
  rows[2] = {"sim-gda", 3, RunStatus::kDiverged, 78, std::nullopt, 0.01};
  std::stringstream io;
  write_summary_csv(io, rows);
  EXPECT_EQ(io.str().substr(0, io.str().find('\n')), kSummaryHeader);
  const auto back = read_summary_csv(io);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].method, rows[i].method);
    EXPECT_EQ(back[i].seed, rows[i].seed);
    EXPECT_EQ(back[i].status, rows[i].status);
    EXPECT_EQ(back[i].iters, rows[i].iters);
    EXPECT_EQ(back[i].final_dist, rows[i].final_dist);
    EXPECT_EQ(back[i].wall_ms, rows[i].wall_ms);
  }
  std::istringstream bad_status(std::string(kSummaryHeader) + "\neg,1,done,3,0.1,1\n");
  EXPECT_THROW(read_summary_csv(bad_status), ParseError);
}

TEST(ComplexCsv, RoundTrip) {
  const std::vector<Complex> pts = {{0.5, 0.8660254037844386}, {0.5, -0.8660254037844386}, {-1e-300, 0}};
  std::stringstream io;
  write_complex_csv(io, pts);
  EXPECT_EQ(read_complex_csv(io), pts);
}

TEST(ProblemText, RoundTripsEveryKind) {
  const BilinearGame bg = make_random_bilinear(4, 2);
  const BilinearQuadraticGame qg = make_random_bilinear_quadratic(3, 2);
  const ScalarGame sg{ScalarGameId::kQuarticCubic};
  for (const Problem& p : {Problem{bg}, Problem{qg}, Problem{sg}}) {
    std::stringstream io;
    write_problem(io, p);
    const Problem back = read_problem(io);
    EXPECT_EQ(problem_kind(back), problem_kind(p));
    std::stringstream again;
    write_problem(again, back);
    std::stringstream first;
    write_problem(first, p);
    EXPECT_EQ(again.str(), first.str());
  }
  std::stringstream io;
  write_problem(io, Problem{bg});
  const BilinearGame back = std::get<BilinearGame>(read_problem(io));
  EXPECT_EQ(back.a, bg.a);
  EXPECT_EQ(back.b, bg.b);
  EXPECT_EQ(back.c, bg.c);
}

TEST(ProblemText, RejectsMalformedInput) {
  std::istringstream unknown("tensor 3\n");
  EXPECT_THROW(read_problem(unknown), ParseError);
  std::istringstream truncated("bilinear 2\n1 2 3\n");
  EXPECT_THROW(read_problem(truncated), ParseError);
  std::istringstream bad_game("scalar\nrosenbrock\n");
  EXPECT_THROW(read_problem(bad_game), ParseError);
}
