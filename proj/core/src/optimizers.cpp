#include "gdaam/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace gdaam {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t elapsed_ns(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start)
      .count();
}

void check_iterate(const Problem& problem, const Vector& w) {
  if (w.size() != x_dim(problem) + y_dim(problem))
    throw std::invalid_argument("iterate dimension does not match problem");
}

}  // namespace

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kSimGda: return "sim-gda";
    case Method::kAltGda: return "alt-gda";
    case Method::kEg: return "eg";
    case Method::kOg: return "og";
    case Method::kEgMomentum: return "eg-momentum";
    case Method::kSimGdaAm: return "sim-gda-am";
    case Method::kAltGdaAm: return "alt-gda-am";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  std::string normalized(name);
  for (char& ch : normalized)
    if (ch == '_') ch = '-';
  for (Method m : kAllMethods)
    if (to_string(m) == normalized) return m;
  return std::nullopt;
}

bool is_anderson(Method method) {
  return method == Method::kSimGdaAm || method == Method::kAltGdaAm;
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kConverged: return "converged";
    case RunStatus::kMaxIters: return "max_iters";
    case RunStatus::kDiverged: return "diverged";
  }
  return "unknown";
}

std::optional<RunStatus> parse_run_status(std::string_view name) {
  for (RunStatus s : {RunStatus::kConverged, RunStatus::kMaxIters, RunStatus::kDiverged})
    if (to_string(s) == name) return s;
  return std::nullopt;
}

void SolverConfig::validate() const {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw InvalidConfig("eta must be a positive number");
  if (!(tol > 0.0)) throw InvalidConfig("tol must be > 0");
  if (max_iters < 1) throw InvalidConfig("max_iters must be >= 1");
  if (record_stride < 1) throw InvalidConfig("record_stride must be >= 1");
  if (!(divergence_threshold > 0.0)) throw InvalidConfig("divergence_threshold must be > 0");
  if (is_anderson(method)) {
    if (!mixer) throw InvalidConfig("Anderson methods need a mixer configuration");
    try {
      mixer->validate();
    } catch (const std::invalid_argument& e) {
      throw InvalidConfig(e.what());
    }
  }
  if (method == Method::kEgMomentum) {
    if (!(momentum.extrapolation_eta > 0.0) || !(momentum.update_eta > 0.0))
      throw InvalidConfig("momentum step sizes must be > 0");
    if (!(momentum.beta > -1.0 && momentum.beta < 1.0))
      throw InvalidConfig("momentum beta must lie in (-1, 1)");
  }
}

std::optional<double> Trajectory::initial_dist() const {
  if (records.empty()) return std::nullopt;
  return records.front().dist_to_opt;
}

std::optional<double> Trajectory::final_dist() const {
  if (records.empty()) return std::nullopt;
  return records.back().dist_to_opt;
}

namespace stacked {

Vector sim_gda(const Problem& problem, const Vector& w, double eta) {
  return w - eta * grad_field(problem, w);
}

Vector alt_gda(const Problem& problem, const Vector& w, double eta) {
  const Index nx = x_dim(problem);
  const Index ny = w.size() - nx;
  Vector next(w.size());
  next.head(nx) = w.head(nx) - eta * field_x(problem, w.head(nx), w.tail(ny));
  next.tail(ny) = w.tail(ny) - eta * field_y(problem, next.head(nx), w.tail(ny));
  return next;
}

Vector eg(const Problem& problem, const Vector& w, double eta) {
  const Vector half = w - eta * grad_field(problem, w);
  return w - eta * grad_field(problem, half);
}

}  // namespace stacked

JointIterate step_sim_gda(const Problem& problem, const JointIterate& w, double eta) {
  return JointIterate::from_stacked(stacked::sim_gda(problem, w.stacked(), eta), w.x.size());
}

JointIterate step_alt_gda(const Problem& problem, const JointIterate& w, double eta) {
  return JointIterate::from_stacked(stacked::alt_gda(problem, w.stacked(), eta), w.x.size());
}

JointIterate step_eg(const Problem& problem, const JointIterate& w, double eta) {
  return JointIterate::from_stacked(stacked::eg(problem, w.stacked(), eta), w.x.size());
}

JointIterate step_og(const Problem& problem, const JointIterate& w,
                     const std::optional<JointIterate>& previous_field, double eta) {
  const Vector ws = w.stacked();
  Vector next = ws - eta * grad_field(problem, ws);
  if (previous_field) next += 0.5 * eta * previous_field->stacked();
  return JointIterate::from_stacked(next, w.x.size());
}

JointIterate step_eg_momentum(const Problem& problem, const JointIterate& w,
                              const JointIterate& w_previous,
                              const MomentumConfig& momentum) {
  const Vector ws = w.stacked();
  const Vector half = ws - momentum.extrapolation_eta * grad_field(problem, ws);
  const Vector next = ws - momentum.update_eta * grad_field(problem, half) +
                      momentum.beta * (ws - w_previous.stacked());
  return JointIterate::from_stacked(next, w.x.size());
}

Trajectory run(const Problem& problem, const SolverConfig& config, const JointIterate& w0) {
  config.validate();
  Vector w = w0.stacked();
  check_iterate(problem, w);
  if (w0.x.size() != x_dim(problem)) throw std::invalid_argument("run: x dimension mismatch");

  const std::optional<Vector> solution = exact_solution(problem);
  std::optional<AndersonMixer> mixer;
  if (is_anderson(config.method)) mixer.emplace(*config.mixer);

  Trajectory traj;
  const auto start = Clock::now();
  Vector previous_w = w;
  std::optional<Vector> previous_field;

  for (long t = 0;; ++t) {
    IterationRecord rec;
    rec.iter = t;
    rec.time_ns = elapsed_ns(start);

    const bool finite = w.allFinite();
    const Vector field = finite ? grad_field(problem, w) : Vector();
    Vector raw;
    if (finite) {
      switch (config.method) {
        case Method::kSimGda:
        case Method::kSimGdaAm:
          raw = w - config.eta * field;
          break;
        case Method::kAltGda:
        case Method::kAltGdaAm:
          raw = stacked::alt_gda(problem, w, config.eta);
          break;
        case Method::kEg:
          raw = w - config.eta * grad_field(problem, w - config.eta * field);
          break;
        case Method::kOg:
          raw = w - config.eta * field;
          if (previous_field) raw += 0.5 * config.eta * *previous_field;
          break;
        case Method::kEgMomentum: {
          const MomentumConfig& m = config.momentum;
          raw = w - m.update_eta * grad_field(problem, w - m.extrapolation_eta * field) +
                m.beta * (w - previous_w);
          break;
        }
      }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (solution) rec.dist_to_opt = finite ? (w - *solution).norm() : nan;
    rec.grad_norm = finite ? field.norm() : nan;
    rec.residual_norm = finite && raw.allFinite() ? (raw - w).norm() : nan;

    const double measure = solution ? *rec.dist_to_opt : rec.grad_norm;
    const bool diverged = !finite || !(w.norm() <= config.divergence_threshold);
    bool done = true;
    if (diverged) {
      traj.status = RunStatus::kDiverged;
    } else if (measure <= config.tol) {
      traj.status = RunStatus::kConverged;
    } else if (t >= config.max_iters) {
      traj.status = RunStatus::kMaxIters;
    } else {
      done = false;
    }

    if (done || t % config.record_stride == 0) traj.records.push_back(rec);
    if (done) {
      traj.iterations = t;
      traj.final_iterate = w;
      break;
    }

    previous_w = w;
    previous_field = field;
    w = mixer ? mixer->extrapolate(w, raw) : std::move(raw);
  }
  traj.wall_ns = elapsed_ns(start);
  return traj;
}

}  // namespace gdaam
