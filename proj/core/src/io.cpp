#include "gdaam/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace gdaam {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != header)
    throw ParseError("expected CSV header '" + header + "'");
}

long parse_long(const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || errno != 0)
    throw ParseError("not an integer: '" + text + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& text) {
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || text.front() == '-' || *end != '\0' || errno != 0)
    throw ParseError("not an unsigned integer: '" + text + "'");
  return static_cast<std::uint64_t>(v);
}

template <class T>
T read_token(std::istream& in, const char* what) {
  T value;
  if (!(in >> value)) throw ParseError(std::string("problem file: missing ") + what);
  return value;
}

double read_number(std::istream& in) {
  return parse_double(read_token<std::string>(in, "number"));
}

Matrix read_matrix(std::istream& in, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = read_number(in);
  return m;
}

Vector read_vector(std::istream& in, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = read_number(in);
  return v;
}

void write_matrix(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_double(m(i, j));
    out << '\n';
  }
}

void write_vector(std::ostream& out, const Vector& v) {
  for (Index i = 0; i < v.size(); ++i) out << (i ? " " : "") << format_double(v(i));
  out << '\n';
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

double parse_double(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw ParseError("not a number: '" + text + "'");
  return v;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, bool include_time) {
  out << kTrajectoryHeader << '\n';
  for (const IterationRecord& r : trajectory.records) {
    out << r.iter << ',' << (include_time ? r.time_ns : 0) << ','
        << (r.dist_to_opt ? format_double(*r.dist_to_opt) : std::string()) << ','
        << format_double(r.grad_norm) << ',' << format_double(r.residual_norm) << '\n';
  }
}

std::vector<IterationRecord> read_trajectory_csv(std::istream& in) {
  expect_header(in, kTrajectoryHeader);
  std::vector<IterationRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 5) throw ParseError("trajectory row needs 5 fields: '" + line + "'");
    IterationRecord r;
    r.iter = parse_long(f[0]);
    r.time_ns = parse_long(f[1]);
    if (!f[2].empty()) r.dist_to_opt = parse_double(f[2]);
    r.grad_norm = parse_double(f[3]);
    r.residual_norm = parse_double(f[4]);
    records.push_back(r);
  }
  return records;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows,
                       bool include_time) {
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : rows) {
    out << r.method << ',' << r.seed << ',' << to_string(r.status) << ',' << r.iters << ','
        << (r.final_dist ? format_double(*r.final_dist) : std::string()) << ','
        << format_double(include_time ? r.wall_ms : 0.0) << '\n';
  }
}

std::vector<SummaryRow> read_summary_csv(std::istream& in) {
  expect_header(in, kSummaryHeader);
  std::vector<SummaryRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) throw ParseError("summary row needs 6 fields: '" + line + "'");
    SummaryRow r;
    r.method = f[0];
    r.seed = parse_u64(f[1]);
    const auto status = parse_run_status(f[2]);
    if (!status) throw ParseError("unknown status '" + f[2] + "'");
    r.status = *status;
    r.iters = parse_long(f[3]);
    if (!f[4].empty()) r.final_dist = parse_double(f[4]);
    r.wall_ms = parse_double(f[5]);
    rows.push_back(r);
  }
  return rows;
}

void write_complex_csv(std::ostream& out, const std::vector<Complex>& points) {
  out << "re,im\n";
  for (const Complex& z : points)
    out << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
}

std::vector<Complex> read_complex_csv(std::istream& in) {
  expect_header(in, "re,im");
  std::vector<Complex> points;
  std::string line;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 2) throw ParseError("re,im row needs 2 fields: '" + line + "'");
    points.emplace_back(parse_double(f[0]), parse_double(f[1]));
  }
  return points;
}

void write_problem(std::ostream& out, const Problem& problem) {
  if (const auto* g = std::get_if<BilinearGame>(&problem)) {
    out << "bilinear " << g->a.rows() << '\n';
    write_matrix(out, g->a);
    write_vector(out, g->b);
    write_vector(out, g->c);
  } else if (const auto* q = std::get_if<BilinearQuadraticGame>(&problem)) {
    out << "bilinear_quadratic " << q->a.rows() << '\n';
    write_matrix(out, q->a);
    write_matrix(out, q->b_mat);
    write_matrix(out, q->c_mat);
    write_vector(out, q->b);
    write_vector(out, q->c);
  } else {
    out << "scalar " << std::get<ScalarGame>(problem).name() << '\n';
  }
}

Problem read_problem(std::istream& in) {
  const auto kind = read_token<std::string>(in, "kind");
  if (kind == "scalar") {
    const auto name = read_token<std::string>(in, "game name");
    const auto id = parse_scalar_game(name);
    if (!id) throw ParseError("unknown scalar game '" + name + "'");
    return ScalarGame{*id};
  }
  const long n = read_token<long>(in, "dimension");
  if (n < 1) throw ParseError("problem file: dimension must be >= 1");
  if (kind == "bilinear") {
    BilinearGame g;
    g.a = read_matrix(in, n, n);
    g.b = read_vector(in, n);
    g.c = read_vector(in, n);
    return g;
  }
  if (kind == "bilinear_quadratic") {
    BilinearQuadraticGame q;
    q.a = read_matrix(in, n, n);
    q.b_mat = read_matrix(in, n, n);
    q.c_mat = read_matrix(in, n, n);
    q.b = read_vector(in, n);
    q.c = read_vector(in, n);
    return q;
  }
  throw ParseError("unknown problem kind '" + kind + "'");
}

}  // namespace gdaam
