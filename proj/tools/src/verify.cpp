#include "gdaam/tools/verify.hpp"

#include "gdaam/analysis.hpp"
#include "gdaam/gmres.hpp"

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace gdaam::tools {

namespace fs = std::filesystem;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Matrix normal_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = nd(rng);
  return m;
}

Vector normal_vector(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

double iterations_needed(const Trajectory& t) {
  return t.status == RunStatus::kConverged ? static_cast<double>(t.iterations) : kInf;
}

std::string iters_text(double iters) {
  return std::isinf(iters) ? std::string("inf") : fmt("%.0f", iters);
}

}  // namespace

bool SuiteReport::passed() const { return failures() == 0; }

int SuiteReport::failures() const {
  return static_cast<int>(
      std::count_if(lines.begin(), lines.end(),
                    [](const CheckLine& l) { return l.gating && !l.pass; }));
}

void SuiteReport::add(std::string label, bool pass, std::string detail) {
  lines.push_back({std::move(label), pass, std::move(detail), true});
}

void SuiteReport::info(std::string label, std::string detail) {
  lines.push_back({std::move(label), true, std::move(detail), false});
}

void SuiteReport::print(std::ostream& out) const {
  int gating = 0;
  for (const CheckLine& l : lines) {
    gating += l.gating;
    out << (!l.gating ? "INFO " : l.pass ? "PASS " : "FAIL ") << suite << '/' << l.label
        << "  " << l.detail << '\n';
  }
  out << suite << ": " << (gating - failures()) << '/' << gating << " passed in "
      << fmt("%.2f", seconds) << " s\n";
}

std::vector<std::string> suite_names() {
  return {"equivalence", "sim_rate", "alt_rate", "quad_rate", "spectra", "scalar_games",
          "fig4",        "fig6a",    "determinism"};
}

std::optional<SuiteReport> run_suite(const std::string& name) {
  if (name == "equivalence") return verify_equivalence();
  if (name == "sim_rate") return verify_sim_rate();
  if (name == "alt_rate") return verify_alt_rate();
  if (name == "quad_rate") return verify_quad_rate();
  if (name == "spectra") return verify_spectra();
  if (name == "scalar_games") return verify_scalar_games();
  if (name == "fig4") return verify_fig4_scaled();
  if (name == "fig6a") return verify_fig6a_trend();
  if (name == "determinism") return verify_determinism();
  return std::nullopt;
}

// Random affine map w -> G w + b with G = N(0, 1/n); three restart cycles of
// the mixer against GMRES(p) on (I - G) x = b restarted from g(x_p).
SuiteReport verify_equivalence() {
  Stopwatch clock;
  SuiteReport report{"equivalence", {}, 0.0};
  constexpr int kInstances = 100;
  constexpr int kCycles = 3;
  constexpr double kTol = 1e-8;
  for (int inst = 0; inst < kInstances; ++inst) {
    std::mt19937_64 rng(1000 + inst);
    const Index n = 2 + inst % 19;
    const int p = 2 + inst % 7;
    const Matrix g = normal_matrix(n, n, rng) / std::sqrt(static_cast<double>(n));
    const Vector b = normal_vector(n, rng);
    Vector w = normal_vector(n, rng);
    const LinearOperator op = LinearOperator::from_matrix(Matrix::Identity(n, n) - g);

    MixerConfig mc;
    mc.table_size = p;
    mc.track_mixed_point = true;
    AndersonMixer mixer(mc);
    double worst_iterate = 0.0;
    double worst_mixed = 0.0;
    int compared = 0;
    for (int cycle = 0; cycle < kCycles; ++cycle) {
      GmresCycleOptions opts;
      opts.record_iterates = true;
      const GmresCycle gm = gmres_cycle(op, b, w, p, opts);
      const int steps = static_cast<int>(gm.iterates.size());
      for (int j = 0; j < steps; ++j) {
        const Vector next = mixer.extrapolate(w, g * w + b);
        const Vector expect = g * gm.iterates[j] + b;
        worst_iterate = std::max(worst_iterate, (next - expect).norm() / expect.norm());
        worst_mixed = std::max(worst_mixed, (mixer.last_mixed_point() - gm.iterates[j]).norm() /
                                                gm.iterates[j].norm());
        ++compared;
        w = next;
      }
      if (gm.breakdown || steps < p + 1) break;
    }
    const bool ok = worst_iterate <= kTol && worst_mixed <= kTol;
    report.add(fmt("map%03d", inst), ok,
               fmt("n=%ld p=%d iterates=%d max_rel_err=%.2e mixed_rel_err=%.2e tol=%.0e",
                   static_cast<long>(n), p, compared, worst_iterate, worst_mixed, kTol));
  }
  report.seconds = clock.seconds();
  return report;
}

SuiteReport verify_sim_rate() {
  Stopwatch clock;
  SuiteReport report{"sim_rate", {}, 0.0};
  const Index sizes[] = {20, 50, 100};
  const double kappas[] = {10.0, 100.0, 1000.0};
  const int tables[] = {5, 10, 20};
  constexpr int kInstances = 50;
  constexpr long kCycles = 30;
  for (int inst = 0; inst < kInstances; ++inst) {
    const Index n = sizes[inst % 3];
    const double kappa = kappas[(inst / 3) % 3];
    const int p = tables[(inst / 9) % 3];
    const std::uint64_t seed = 100 + inst;
    const Problem game = rescale_to_unit_norm(make_random_bilinear(n, seed, kappa));

    SolverConfig cfg;
    cfg.method = Method::kSimGdaAm;
    cfg.mixer = MixerConfig{};
    cfg.mixer->table_size = p;
    cfg.tol = 1e-14;
    cfg.max_iters = kCycles * (p + 1);
    const Trajectory t = run(game, cfg, random_initial_point(n, n, seed));

    const Vector sigma = singular_values(std::get<BilinearGame>(game).a);
    const double kappa_ata = std::pow(sigma(0) / sigma(sigma.size() - 1), 2);
    ContractionOptions opts;
    opts.cycle_length = p + 1;
    opts.relative_slack = 0.0;
    opts.absolute_slack = 1e-6;
    const ContractionReport rep = check_contraction(t, rate_bound_sim(kappa_ata, p), opts);
    report.add(fmt("game%02d", inst), rep.ok() && rep.checked > 0,
               fmt("n=%ld kappa(A)=%g p=%d %s", static_cast<long>(n), kappa, p,
                   rep.summary().c_str()));
  }
  report.seconds = clock.seconds();
  return report;
}

SuiteReport verify_alt_rate() {
  Stopwatch clock;
  SuiteReport report{"alt_rate", {}, 0.0};
  constexpr double kEta = 1.0;
  constexpr int kMaxP = 80;
  constexpr long kCycles = 20;
  int index = 0;
  for (double kappa : {1.5, 2.0, 3.0}) {
    for (Index n : {20, 40, 60}) {
      const std::uint64_t seed = 200 + index++;
      const BilinearGame game = rescale_to_unit_norm(make_random_bilinear(n, seed, kappa));
      int p = 1;
      while (p < kMaxP && alt_disk_bound(game, kEta, p).second.factor >= 1.0) ++p;
      const auto [disk, bound] = alt_disk_bound(game, kEta, p);
      const std::string label = fmt("kappa%g_n%ld", kappa, static_cast<long>(n));
      if (bound.factor >= 1.0) {
        report.add(label, false, fmt("no p <= %d gives a factor below 1", kMaxP));
        continue;
      }
      SolverConfig cfg;
      cfg.method = Method::kAltGdaAm;
      cfg.eta = kEta;
      cfg.mixer = MixerConfig{};
      cfg.mixer->table_size = p;
      cfg.tol = 1e-14;
      cfg.max_iters = kCycles * (p + 1);
      const Trajectory t = run(game, cfg, random_initial_point(n, n, seed));
      ContractionOptions opts;
      opts.cycle_length = p + 1;
      opts.relative_slack = 0.0;
      opts.absolute_slack = 1e-6;
      const ContractionReport rep = check_contraction(t, bound, opts);
      report.add(label, rep.ok() && rep.checked > 0,
                 fmt("p=%d c=%.4f r=%.4f %s", p, disk.c, disk.r, rep.summary().c_str()));
    }
  }
  report.seconds = clock.seconds();
  return report;
}

// Full GMRES on J = I - G of the simultaneous map; A is scaled by 1/sqrt(n)
// so the bound is not trivially close to one.
SuiteReport verify_quad_rate() {
  Stopwatch clock;
  SuiteReport report{"quad_rate", {}, 0.0};
  constexpr int kInstances = 50;
  constexpr double kEta = 0.5;
  constexpr double kFloor = 1e-12;
  for (int inst = 0; inst < kInstances; ++inst) {
    const Index n = 1 + inst % 50;
    const std::uint64_t seed = 300 + inst;
    BilinearQuadraticGame game = make_random_bilinear_quadratic(n, seed);
    game.a /= std::sqrt(static_cast<double>(n));
    const RateBound bound = rate_bound_quad(game, kEta);
    const auto fp = fixed_point_map(game, GdaScheme::kSimultaneous, kEta);
    const LinearOperator op = LinearOperator::from_matrix(quad_operator(game, kEta));
    const Vector x0 = random_initial_point(n, n, seed).stacked();
    const GmresCycle gm = gmres_cycle(op, fp.affine->offset, x0, static_cast<int>(2 * n));

    const auto& h = gm.residual_history;
    double worst = 0.0;
    bool ok = bound.factor < 1.0;
    for (std::size_t t = 0; t < h.size(); ++t) {
      const double limit = std::pow(bound.factor, static_cast<double>(t)) * h[0];
      worst = std::max(worst, h[t] / limit);
      if (h[t] > limit + kFloor * h[0]) ok = false;
    }
    report.add(fmt("game%02d", inst), ok,
               fmt("n=%ld factor=%.6f steps=%d max ||r_t||/(factor^t ||r_0||)=%.4f",
                   static_cast<long>(n), bound.factor, gm.steps, worst));
  }
  report.seconds = clock.seconds();
  return report;
}

SuiteReport verify_spectra() {
  Stopwatch clock;
  SuiteReport report{"spectra", {}, 0.0};
  constexpr double kTol = 1e-8;
  constexpr double kEta = 1.0;
  for (int inst = 0; inst < 20; ++inst) {
    const Index n = 5 * (inst + 1);
    const std::uint64_t seed = 400 + inst;
    const BilinearGame game = rescale_to_unit_norm(make_random_bilinear(n, seed));
    const Matrix identity = Matrix::Identity(2 * n, 2 * n);
    for (GdaScheme scheme : {GdaScheme::kSimultaneous, GdaScheme::kAlternating}) {
      const bool sim = scheme == GdaScheme::kSimultaneous;
      const Spectrum closed = sim ? sim_operator_spectrum(game, kEta)
                                  : alt_operator_spectrum(game, kEta);
      const auto fp = fixed_point_map(game, scheme, kEta);
      const Spectrum numeric = dense_eigenvalues(identity - fp.affine->g);
      const double mismatch = spectrum_mismatch(closed.eigenvalues, numeric.eigenvalues);
      const bool ok = mismatch <= kTol && closed.residual_bound <= kTol;
      report.add(fmt("%s_n%03ld", sim ? "sim" : "alt", static_cast<long>(n)), ok,
                 fmt("mismatch=%.2e closed_form_residual=%.2e tol=%.0e", mismatch,
                     closed.residual_bound, kTol));
    }
  }
  report.seconds = clock.seconds();
  return report;
}

SuiteReport verify_scalar_games() {
  Stopwatch clock;
  SuiteReport report{"scalar_games", {}, 0.0};
  constexpr double kGradTol = 1e-4;
  constexpr long kBudget = 100000;
  const JointIterate start{Vector::Constant(1, 3.0), Vector::Constant(1, 3.0)};
  auto config = [&](Method m, double eta) {
    SolverConfig c;
    c.method = m;
    c.eta = eta;
    if (is_anderson(m)) {
      c.mixer = MixerConfig{};
      c.mixer->table_size = 3;
    }
    c.tol = kGradTol;
    c.max_iters = kBudget;
    c.record_stride = kBudget;
    return c;
  };

  for (const ScalarGame& game : scalar_catalog()) {
    const double eta = scalar_game_eta(game.id);
    const Trajectory t = run(game, config(Method::kSimGdaAm, eta), start);
    const double x = t.final_iterate(0);
    const double y = t.final_iterate(1);
    const auto grad = game.gradient(x, y);
    const double gn = std::hypot(grad[0], grad[1]);
    std::string label_text = "unclassified";
    if (gn <= kGradTol) {
      ClassifyOptions co;
      co.gradient_tol = kGradTol;
      label_text = std::string(to_string(classify_stationary(game, x, y, co).label));
    }
    report.add(std::string("gda_am_") + std::string(game.name()),
               t.status == RunStatus::kConverged && gn < kGradTol,
               fmt("eta=%g status=%s iters=%ld point=(%.6f, %.6f) grad_norm=%.2e label=%s", eta,
                   std::string(to_string(t.status)).c_str(), t.iterations, x, y, gn,
                   label_text.c_str()));

    if (game.id == ScalarGameId::kNegQuadraticCross) {
      const Trajectory s = run(game, config(Method::kSimGda, eta), start);
      report.add("sim_gda_fails_neg_quadratic_cross", s.status != RunStatus::kConverged,
                 fmt("eta=%g status=%s iters=%ld", eta, std::string(to_string(s.status)).c_str(),
                     s.iterations));
    }
    if (game.id == ScalarGameId::kQuarticCubic) {
      const double target = 2.0 + std::sqrt(2.0);
      const double err = std::hypot(x + target, y - target);
      report.add("quartic_cubic_limit", err <= 1e-2,
                 fmt("limit=(%.6f, %.6f) target=(%.6f, %.6f) distance=%.2e", x, y, -target,
                     target, err));
    }
  }
  report.seconds = clock.seconds();
  return report;
}

SuiteReport verify_fig4_scaled() {
  Stopwatch clock;
  SuiteReport report{"fig4", {}, 0.0};
  constexpr Index kN = 100;
  constexpr double kEta = 1.0;
  constexpr long kAmBudget = 1000000;
  constexpr long kBaselineBudget = 100000;

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const BilinearGame game = rescale_to_unit_norm(make_random_bilinear(kN, seed));
    const JointIterate w0 = random_initial_point(kN, kN, seed);
    auto solve = [&](Method m, long budget) {
      SolverConfig c;
      c.method = m;
      c.eta = kEta;
      if (is_anderson(m)) {
        c.mixer = MixerConfig{};
        c.mixer->table_size = 10;
      }
      c.tol = 1e-5;
      c.max_iters = budget;
      c.record_stride = 1000;
      return run(game, c, w0);
    };
    const Trajectory eg = solve(Method::kEg, kBaselineBudget);
    const Trajectory sim_am = solve(Method::kSimGdaAm, kAmBudget);
    const Trajectory alt_am = solve(Method::kAltGdaAm, kAmBudget);
    const Trajectory sim = solve(Method::kSimGda, kBaselineBudget);

    // EG's linear part is I - eta M + eta^2 M^2 with M's eigenvalues +-i sigma,
    // so its modes are 1 - eta^2 sigma^2 -+ i eta sigma.
    const Vector sigma = singular_values(game.a);
    double radius = 0.0;
    for (Index i = 0; i < sigma.size(); ++i) {
      const double s = kEta * sigma(i);
      radius = std::max(radius, std::hypot(1.0 - s * s, s));
    }
    double eg_need = iterations_needed(eg);
    if (std::isinf(eg_need) && radius < 1.0 - 1e-12) eg_need = kBaselineBudget + 1.0;
    const double sim_need = iterations_needed(sim_am);
    const double alt_need = iterations_needed(alt_am);
    const double kappa = sigma(0) / sigma(sigma.size() - 1);

    auto within = [&](double need) { return !std::isinf(need) && need <= 0.1 * eg_need; };
    const bool sim_bad = sim.status != RunStatus::kConverged && sim.final_dist() &&
                         sim.initial_dist() && *sim.final_dist() >= *sim.initial_dist();
    const std::string common = fmt("kappa(A)=%.0f eg=%s (spectral radius %.12f)", kappa,
                                   iters_text(eg_need).c_str(), radius);
    report.add(fmt("seed%lu_sim_gda_am", static_cast<unsigned long>(seed)), within(sim_need),
               fmt("iters=%s %s", iters_text(sim_need).c_str(), common.c_str()));
    report.add(fmt("seed%lu_alt_gda_am", static_cast<unsigned long>(seed)), within(alt_need),
               fmt("iters=%s %s", iters_text(alt_need).c_str(), common.c_str()));
    report.add(fmt("seed%lu_sim_gda", static_cast<unsigned long>(seed)), sim_bad,
               fmt("status=%s iters=%ld initial_dist=%.4g final_dist=%.4g",
                   std::string(to_string(sim.status)).c_str(), sim.iterations,
                   sim.initial_dist().value_or(NAN), sim.final_dist().value_or(NAN)));
  }
  report.seconds = clock.seconds();
  return report;
}

SuiteReport verify_fig6a_trend() {
  Stopwatch clock;
  SuiteReport report{"fig6a", {}, 0.0};
  const std::vector<ExperimentSpec> specs = *preset("fig6a");
  // needs[method][p][seed]
  std::map<Method, std::map<int, std::map<std::uint64_t, double>>> needs;
  std::vector<int> tables;
  for (ExperimentSpec spec : specs) {
    if (spec.p > 50) continue;
    spec.record_stride = spec.max_iters;
    const ResultTable table = run_experiment(spec);
    tables.push_back(spec.p);
    for (const RunResult& r : table.runs)
      needs[r.method][spec.p][r.seed] = iterations_needed(r.trajectory);
  }
  std::sort(tables.begin(), tables.end());
  for (auto& [method, by_p] : needs) {
    const bool gating = method == Method::kAltGdaAm;
    const std::string name(to_string(method));
    for (int p : tables) {
      std::string counts;
      for (const auto& [seed, need] : by_p[p])
        counts += (counts.empty() ? "" : ",") + iters_text(need);
      report.info(fmt("%s_p%d", name.c_str(), p), "iterations per seed: " + counts);
    }
    for (std::size_t i = 0; i + 1 < tables.size(); ++i) {
      const int lo = tables[i];
      const int hi = tables[i + 1];
      int votes = 0;
      int total = 0;
      for (const auto& [seed, need_lo] : by_p[lo]) {
        votes += by_p[hi][seed] < need_lo;
        ++total;
      }
      const std::string label = fmt("%s_p%d_to_p%d", name.c_str(), lo, hi);
      const std::string detail =
          fmt("%d of %d seeds need strictly fewer iterations at p=%d", votes, total, hi);
      if (gating) {
        report.add(label, 2 * votes > total, detail);
      } else {
        report.info(label, detail);
      }
    }
  }
  report.seconds = clock.seconds();
  return report;
}

namespace {

std::map<std::string, std::string> read_tree(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    files[fs::relative(entry.path(), root).string()] = mask_time_columns(ss.str());
  }
  return files;
}

}  // namespace

SuiteReport verify_determinism(long max_iters_cap) {
  Stopwatch clock;
  SuiteReport report{"determinism", {}, 0.0};
  const fs::path base =
      fs::temp_directory_path() /
      fmt("gdaam_determinism_%lld",
          static_cast<long long>(std::chrono::steady_clock::now().time_since_epoch().count()));
  for (const std::string& name : preset_names()) {
    bool same = true;
    std::size_t files = 0;
    std::string first_diff;
    const std::vector<ExperimentSpec> specs = *preset(name);
    for (ExperimentSpec spec : specs) {
      spec.max_iters = std::min(spec.max_iters, max_iters_cap);
      std::map<std::string, std::string> outputs[2];
      for (int pass = 0; pass < 2; ++pass) {
        RunOptions opts;
        opts.jobs = pass + 1;
        opts.out_dir = base / fmt("pass%d", pass);
        run_experiment(spec, opts);
        outputs[pass] = read_tree(*opts.out_dir / spec.name);
      }
      files += outputs[0].size();
      if (outputs[0] != outputs[1]) {
        same = false;
        for (const auto& [file, text] : outputs[0]) {
          auto it = outputs[1].find(file);
          if (it == outputs[1].end() || it->second != text) {
            if (first_diff.empty()) first_diff = spec.name + "/" + file;
            break;
          }
        }
        if (first_diff.empty()) first_diff = spec.name + " (file set differs)";
      }
    }
    report.add(name, same,
               same ? fmt("%zu files identical, max_iters capped at %ld", files, max_iters_cap)
                    : "differs at " + first_diff);
  }
  std::error_code ec;
  fs::remove_all(base, ec);
  report.seconds = clock.seconds();
  return report;
}

}  // namespace gdaam::tools
