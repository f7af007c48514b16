#include "gdaam/anderson.hpp"

#include <stdexcept>

namespace gdaam {

void MixerConfig::validate() const {
  if (table_size < 1) throw std::invalid_argument("MixerConfig: table_size must be >= 1");
  if (!(drop_tol > 0.0)) throw std::invalid_argument("MixerConfig: drop_tol must be > 0");
  if (relative_regularization < 0.0)
    throw std::invalid_argument("MixerConfig: regularization must be >= 0");
}

AndersonMixer::AndersonMixer(MixerConfig config) : config_(config) {
  config_.validate();
}

void AndersonMixer::reset() {
  clear_table();
  restarts_ = 0;
  dependent_restarts_ = 0;
  last_weights_ = WeightVector{};
  last_residual_norm_ = 0.0;
  last_ill_conditioned_ = false;
  last_mixed_point_.resize(0);
}

void AndersonMixer::clear_table() {
  qr_.clear();
  has_entry_ = false;
  since_restart_ = 0;
}

void AndersonMixer::start_table(const Vector& w, const Vector& gw, const Vector& f) {
  const Index n = w.size();
  const Index p = config_.table_size;
  if (qr_.rows() != n) {
    qr_ = ThinQR(n, p);
    df_.resize(n, p);
    dg_.resize(n, p);
    dw_.resize(n, p);
  }
  qr_.clear();
  since_restart_ = 0;
  prev_w_ = w;
  prev_g_ = gw;
  prev_f_ = f;
  has_entry_ = true;

  last_weights_.beta = Vector::Ones(1);
  last_residual_norm_ = f.norm();
  last_ill_conditioned_ = false;
  if (config_.track_mixed_point) last_mixed_point_ = w;
}

void AndersonMixer::drop_oldest_column() {
  const Index k = qr_.cols();
  if (k == 0) return;
  const Index n = df_.rows();
  for (Index j = 1; j < k; ++j) {
    df_.col(j - 1) = df_.col(j);
    dg_.col(j - 1) = dg_.col(j);
    dw_.col(j - 1) = dw_.col(j);
  }
  qr_ = ThinQR(n, config_.table_size);
  for (Index j = 0; j + 1 < k; ++j) {
    if (qr_.append_column(df_.col(j), config_.drop_tol) !=
        ThinQR::AppendResult::kAppended) {
      // The shorter window lost rank; keep only the columns built so far.
      break;
    }
  }
}

Vector AndersonMixer::finish(const Vector& w, const Vector& gw, const Vector& f,
                             const Vector& gamma) {
  const Index k = qr_.cols();
  Vector next = gw;
  next.noalias() -= dg_.leftCols(k) * gamma;

  const Vector fitted = qr_.q() * (qr_.r() * gamma);
  last_residual_norm_ = (f - fitted).norm();
  last_weights_ = WeightVector::from_gamma(gamma);
  if (config_.track_mixed_point) {
    last_mixed_point_ = w;
    last_mixed_point_.noalias() -= dw_.leftCols(k) * gamma;
  }
  return next;
}

Vector AndersonMixer::extrapolate(const Vector& w, const Vector& gw) {
  if (w.size() != gw.size())
    throw std::invalid_argument("AndersonMixer::extrapolate: size mismatch");
  if (has_entry_ && w.size() != prev_w_.size())
    throw std::invalid_argument("AndersonMixer::extrapolate: dimension changed");

  const Vector f = gw - w;
  if (!has_entry_) {
    start_table(w, gw, f);
    return gw;
  }

  if (config_.mode == MixerMode::kSliding && qr_.cols() == config_.table_size)
    drop_oldest_column();

  const Vector df = f - prev_f_;
  const Index slot = qr_.cols();
  if (qr_.append_column(df, config_.drop_tol) != ThinQR::AppendResult::kAppended) {
    ++restarts_;
    ++dependent_restarts_;
    start_table(w, gw, f);
    return gw;
  }
  df_.col(slot) = df;
  dg_.col(slot) = gw - prev_g_;
  dw_.col(slot) = w - prev_w_;

  const Vector qtf = qr_.q().transpose() * f;
  last_ill_conditioned_ = triangular_ill_conditioned(qr_.r(), config_.condition_limit);
  const double delta = config_.relative_regularization * qr_.r().squaredNorm();
  const Vector gamma =
      solve_triangular_regularized(qr_.r(), qtf, last_ill_conditioned_, delta);
  if (!gamma.allFinite()) {
    ++restarts_;
    ++dependent_restarts_;
    start_table(w, gw, f);
    return gw;
  }

  Vector next = finish(w, gw, f, gamma);
  prev_w_ = w;
  prev_g_ = gw;
  prev_f_ = f;
  ++since_restart_;

  if (config_.mode == MixerMode::kRestart && since_restart_ >= config_.table_size) {
    ++restarts_;
    clear_table();
  }
  return next;
}

}  // namespace gdaam
