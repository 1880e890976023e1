#include "wdsmc/smcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "wdsmc/density.hpp"
#include "wdsmc/errors.hpp"
#include "wdsmc/transport.hpp"

namespace wdsmc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kBandwidthFloor = 1e-12;
constexpr int kInitAttempts = 100;

std::uint64_t id(std::uint64_t v) { return v; }

}  // namespace

double surrogate_density(double distance, double bandwidth) {
  return std::exp(log_kernel(distance, bandwidth));
}

double log_kernel(double distance, double bandwidth) {
  if (!(bandwidth > 0.0)) throw InvalidSpecError("bandwidth must be positive");
  if (!std::isfinite(distance)) return kNegInf;
  const double z = distance / bandwidth;
  return -0.5 * z * z - kLogSqrt2Pi - std::log(bandwidth);
}

BandwidthResult adaptive_bandwidth(std::vector<double> pool) {
  if (pool.empty()) throw EmptyInputError("bandwidth pool is empty");
  std::sort(pool.begin(), pool.end());
  const std::size_t n = pool.size();
  const double median =
      (n % 2 == 1) ? pool[n / 2] : 0.5 * (pool[n / 2 - 1] + pool[n / 2]);
  BandwidthResult out;
  out.floored = median < kBandwidthFloor;
  out.value = out.floored ? kBandwidthFloor : median;
  return out;
}

double acceptance_probability(double log_target_candidate, double log_target_current) {
  if (log_target_candidate == kNegInf) return 0.0;
  if (log_target_current == kNegInf) return 1.0;
  const double d = log_target_candidate - log_target_current;
  return d >= 0.0 ? 1.0 : std::exp(d);
}

Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& log_weights) {
  if (log_weights.size() == 0) throw EmptyInputError("no weights to normalize");
  const double shift = log_weights.maxCoeff();
  if (shift == kNegInf) throw ZeroMassError("all weights vanished");
  // Element-wise std::exp: vectorized exp clamps -inf to a denormal, which
  // would leave dead samples with nonzero weight.
  Eigen::VectorXd w(log_weights.size());
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w[i] = log_weights[i] == kNegInf ? 0.0 : std::exp(log_weights[i] - shift);
  return w / w.sum();
}

double effective_sample_size(const Eigen::VectorXd& weights) {
  if (weights.size() == 0) throw EmptyInputError("no weights");
  const double total = weights.sum();
  if (!(total > 0.0)) throw ZeroMassError("weights sum to zero");
  return total * total / weights.squaredNorm();
}

std::vector<int> systematic_resample_indices(const Eigen::VectorXd& weights, Rng& rng) {
  const int n = static_cast<int>(weights.size());
  if (n == 0) throw EmptyInputError("no weights");
  const double total = weights.sum();
  if (!(total > 0.0)) throw ZeroMassError("weights sum to zero");
  const double offset = rng.uniform() / n;
  std::vector<int> indices(n);
  int j = 0;
  double cum = weights[0] / total;
  for (int i = 0; i < n; ++i) {
    const double point = offset + static_cast<double>(i) / n;
    while (point > cum && j + 1 < n) {
      ++j;
      cum += weights[j] / total;
    }
    indices[i] = j;
  }
  return indices;
}

PriorBox::PriorBox(std::vector<std::string> names_in, Eigen::VectorXd low_in,
                   Eigen::VectorXd high_in)
    : names(std::move(names_in)), low(std::move(low_in)), high(std::move(high_in)) {
  if (low.size() == 0) throw InvalidSpecError("prior has no parameters");
  if (high.size() != low.size() ||
      static_cast<Eigen::Index>(names.size()) != low.size())
    throw InvalidSpecError("prior names and bounds disagree in length");
  for (Eigen::Index k = 0; k < low.size(); ++k)
    if (!(low[k] < high[k]))
      throw InvalidSpecError("prior interval for " + names[k] + " is empty");
}

bool PriorBox::contains(const Eigen::VectorXd& theta) const {
  if (theta.size() != low.size())
    throw DimensionMismatchError("parameter dimension mismatch");
  return (theta.array() >= low.array()).all() &&
         (theta.array() <= high.array()).all();
}

double PriorBox::log_density(const Eigen::VectorXd& theta) const {
  if (!contains(theta)) return kNegInf;
  return -(high - low).array().log().sum();
}

Eigen::VectorXd PriorBox::sample(Rng& rng) const {
  Eigen::VectorXd theta(low.size());
  for (Eigen::Index k = 0; k < low.size(); ++k) theta[k] = rng.uniform(low[k], high[k]);
  return theta;
}

double cumulative_log_target(const PriorBox& prior, const Eigen::VectorXd& theta,
                             const DistanceHistory& history,
                             const BandwidthSchedule& schedule, int t) {
  if (t < 0) throw InvalidSpecError("step index is negative");
  const double log_prior = prior.log_density(theta);
  if (log_prior == kNegInf) return kNegInf;
  if (history.degenerate() && history.degenerate_at <= t) return kNegInf;
  if (static_cast<int>(schedule.values.size()) < t ||
      static_cast<int>(history.distances.size()) < t)
    throw HistoryTooShortError("fewer recorded steps than requested");
  double acc = log_prior;
  for (int i = 0; i < t; ++i) acc += log_kernel(history.distances[i], schedule.values[i]);
  return acc;
}

Eigen::VectorXd gaussian_step(const Eigen::VectorXd& theta, const Eigen::VectorXd& step_std,
                              Rng& rng) {
  if (step_std.size() != theta.size())
    throw DimensionMismatchError("step width dimension mismatch");
  Eigen::VectorXd out(theta.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k)
    out[k] = theta[k] + step_std[k] * rng.normal();
  return out;
}

SmcsEngine::SmcsEngine(const ForwardModel* model, const ObservationSeries* observations,
                       PriorBox prior, SmcsConfig config)
    : model_(model), obs_(observations), prior_(std::move(prior)), config_(std::move(config)) {
  if (config_.n_samples < 1) throw InvalidSpecError("need at least one sample");
  if (config_.horizon < 1) throw InvalidSpecError("need at least one step");
  if (!exact_mode()) {
    if (model_ == nullptr) throw InvalidSpecError("no forward model");
    if (obs_ == nullptr) throw InvalidSpecError("no observations");
    if (obs_->horizon() < config_.horizon)
      throw InvalidSpecError("observations cover fewer steps than the horizon");
    const auto known = model_->parameter_names();
    for (const auto& name : prior_.names)
      if (std::find(known.begin(), known.end(), name) == known.end())
        throw InvalidSpecError("model has no parameter named " + name);
  }
  if (config_.proposal_std.size() == 0) {
    proposal_std_ = 0.05 * (prior_.high - prior_.low);
  } else {
    if (config_.proposal_std.size() != prior_.low.size())
      throw InvalidSpecError("proposal width dimension mismatch");
    if (!(config_.proposal_std.array() > 0.0).all())
      throw InvalidSpecError("proposal widths must be positive");
    proposal_std_ = config_.proposal_std;
  }
  ess_threshold_ =
      config_.ess_threshold < 0.0 ? config_.n_samples / 2.0 : config_.ess_threshold;
  if (ess_threshold_ > config_.n_samples)
    throw InvalidSpecError("resampling threshold exceeds the sample count");
}

void SmcsEngine::init_ensemble() {
  const int n = config_.n_samples;
  slots_.clear();
  slots_.reserve(n);
  for (int j = 0; j < n; ++j) {
    Slot slot;
    bool placed = false;
    for (int attempt = 0; attempt < kInitAttempts && !placed; ++attempt) {
      Rng rng = substream(config_.seed, {id(0), id(j), kStreamInit, id(attempt)});
      Eigen::VectorXd theta = prior_.sample(rng);
      if (exact_mode()) {
        slot.theta = std::move(theta);
        placed = true;
        break;
      }
      // Probe the first frame; parameters whose dynamics explode at once
      // are redrawn rather than seeded into the ensemble.
      const ParameterVector pv(prior_.names, theta);
      auto probe = model_->make_session(pv);
      const Eigen::MatrixXd frame = probe->advance();
      bool ok = frame.rows() > 0;
      if (ok)
        ok = validate_frame(frame, nullptr, 1, model_->speed_cap(),
                            model_->frame_spacing(), model_->bounds())
                 .ok;
      if (!ok) continue;
      slot.theta = std::move(theta);
      slot.session = model_->make_session(pv);
      placed = true;
    }
    if (!placed)
      throw PriorExhaustedError("no viable prior draw for sample " + std::to_string(j) +
                                " after " + std::to_string(kInitAttempts) + " attempts");
    slots_.push_back(std::move(slot));
  }
  log_weights_ = Eigen::VectorXd::Zero(n);
}

SmcsEngine::Candidate SmcsEngine::build_candidate(int t, int j) const {
  Candidate cand;
  Rng rng = substream(config_.seed, {id(t), id(j), kStreamPropose});
  cand.theta = gaussian_step(slots_[j].theta, proposal_std_, rng);
  cand.in_box = prior_.contains(cand.theta);
  if (!cand.in_box) return cand;

  if (exact_mode()) {
    const ParameterVector pv(prior_.names, cand.theta);
    cand.terms.reserve(t);
    bool dead = false;
    for (int i = 1; i <= t; ++i) {
      double v = config_.exact_log_likelihood(i, pv);
      if (!std::isfinite(v)) {
        v = kNegInf;
        dead = true;
      }
      cand.terms.push_back(v);
    }
    cand.viable = !dead;
    return cand;
  }

  // Fresh simulation from scratch: the proposal must replay the whole
  // assimilated window, scoring every step against the frozen schedule.
  cand.session = model_->make_session(ParameterVector(prior_.names, cand.theta));
  Eigen::MatrixXd prev;
  bool has_prev = false;
  for (int i = 1; i <= t; ++i) {
    Eigen::MatrixXd frame = cand.session->advance();
    bool ok = frame.rows() > 0;
    if (ok)
      ok = validate_frame(frame, has_prev ? &prev : nullptr, i, model_->speed_cap(),
                          model_->frame_spacing(), model_->bounds())
               .ok;
    if (!ok) {
      cand.history.degenerate_at = i;
      break;
    }
    cand.history.distances.push_back(
        wasserstein_distance(empirical(frame), obs_->observations[i - 1]));
    prev = std::move(frame);
    has_prev = true;
  }
  if (!cand.history.degenerate()) {
    cand.viable = true;
    cand.last_frame = std::move(prev);
  }
  return cand;
}

double SmcsEngine::target_of(const Eigen::VectorXd& theta, const DistanceHistory& history,
                             const std::vector<double>& terms, int t) const {
  if (exact_mode()) {
    double acc = prior_.log_density(theta);
    if (acc == kNegInf) return kNegInf;
    if (static_cast<int>(terms.size()) < t)
      throw HistoryTooShortError("fewer likelihood terms than steps");
    for (int i = 0; i < t; ++i) {
      if (terms[i] == kNegInf) return kNegInf;
      acc += terms[i];
    }
    return acc;
  }
  return cumulative_log_target(prior_, theta, history, schedule_, t);
}

SmcsEngine::Slot SmcsEngine::clone_slot(const Slot& s) const {
  Slot copy;
  copy.theta = s.theta;
  copy.session = s.session ? s.session->clone() : nullptr;
  copy.last_frame = s.last_frame;
  copy.has_frame = s.has_frame;
  copy.history = s.history;
  copy.terms = s.terms;
  return copy;
}

Eigen::MatrixXd SmcsEngine::ensemble_matrix() const {
  Eigen::MatrixXd thetas(config_.n_samples, prior_.dim());
  for (int j = 0; j < config_.n_samples; ++j) thetas.row(j) = slots_[j].theta.transpose();
  return thetas;
}

void SmcsEngine::step(int t) {
  const int n = config_.n_samples;

  // Extend retained samples by one step. Sessions carry their own state,
  // so only the new frame is simulated; proposals below replay from scratch.
  if (exact_mode()) {
    for (auto& slot : slots_) {
      double v = config_.exact_log_likelihood(t, ParameterVector(prior_.names, slot.theta));
      if (!std::isfinite(v)) v = kNegInf;
      slot.terms.push_back(v);
    }
  } else {
    for (auto& slot : slots_) {
      if (slot.history.degenerate()) continue;
      Eigen::MatrixXd frame = slot.session->advance();
      bool ok = frame.rows() > 0;
      if (ok)
        ok = validate_frame(frame, slot.has_frame ? &slot.last_frame : nullptr, t,
                            model_->speed_cap(), model_->frame_spacing(), model_->bounds())
                 .ok;
      if (!ok) {
        slot.history.degenerate_at = t;
        continue;
      }
      slot.history.distances.push_back(
          wasserstein_distance(empirical(frame), obs_->observations[t - 1]));
      slot.last_frame = std::move(frame);
      slot.has_frame = true;
    }
  }

  std::vector<Candidate> cands;
  cands.reserve(n);
  for (int j = 0; j < n; ++j) cands.push_back(build_candidate(t, j));

  // Freeze this step's bandwidth from every distance the step produced.
  double h = 0.0;
  if (!exact_mode()) {
    std::vector<double> pool;
    pool.reserve(2 * static_cast<std::size_t>(n));
    for (const auto& slot : slots_)
      if (!slot.history.degenerate()) pool.push_back(slot.history.distances[t - 1]);
    for (const auto& cand : cands)
      if (cand.viable) pool.push_back(cand.history.distances[t - 1]);
    if (pool.empty())
      throw TotalDegeneracyError("every sample and proposal degenerated at step " +
                                 std::to_string(t));
    h = adaptive_bandwidth(std::move(pool)).value;
  }
  schedule_.values.push_back(h);

  int accepted = 0;
  for (int j = 0; j < n; ++j) {
    Candidate& cand = cands[j];
    if (!cand.in_box || !cand.viable) continue;
    const double lc = target_of(cand.theta, cand.history, cand.terms, t);
    const double lt = target_of(slots_[j].theta, slots_[j].history, slots_[j].terms, t);
    const double a = acceptance_probability(lc, lt);
    Rng rng = substream(config_.seed, {id(t), id(j), kStreamAccept});
    if (rng.uniform() < a) {
      slots_[j].theta = std::move(cand.theta);
      slots_[j].session = std::move(cand.session);
      slots_[j].last_frame = std::move(cand.last_frame);
      slots_[j].has_frame = !exact_mode();
      slots_[j].history = std::move(cand.history);
      slots_[j].terms = std::move(cand.terms);
      ++accepted;
    }
  }

  // Reweight by the post-move step factor; a degenerate sample's weight is
  // exactly zero until resampling replaces it.
  for (int j = 0; j < n; ++j) {
    const Slot& slot = slots_[j];
    double inc;
    if (exact_mode())
      inc = slot.terms[t - 1];
    else if (slot.history.degenerate())
      inc = kNegInf;
    else
      inc = log_kernel(slot.history.distances[t - 1], h);
    log_weights_[j] += inc;
  }
  if ((log_weights_.array() == kNegInf).all())
    throw TotalDegeneracyError("all sample weights vanished at step " + std::to_string(t));

  Eigen::VectorXd weights = normalize_log_weights(log_weights_);
  const double ess = effective_sample_size(weights);

  StepRecord rec;
  rec.t = t;
  rec.bandwidth = h;
  rec.accept_rate = static_cast<double>(accepted) / n;
  rec.ess = ess;
  const Eigen::MatrixXd thetas = ensemble_matrix();
  rec.mean = thetas.transpose() * weights;
  const int dim = prior_.dim();
  Eigen::VectorXd var(dim);
  for (int k = 0; k < dim; ++k) {
    const Eigen::ArrayXd centered = thetas.col(k).array() - rec.mean[k];
    var[k] = (centered.square() * weights.array()).sum();
  }
  rec.std_dev = var.array().sqrt().matrix();
  rec.resampled = ess < ess_threshold_;

  if (rec.resampled) {
    Rng rng = substream(config_.seed, {id(t), id(0), kStreamResample});
    const std::vector<int> indices = systematic_resample_indices(weights, rng);
    std::vector<Slot> next;
    next.reserve(n);
    for (int i : indices) next.push_back(clone_slot(slots_[i]));
    slots_ = std::move(next);
    log_weights_.setZero();
    weights = Eigen::VectorXd::Constant(n, 1.0 / n);
  }

  trace_.push_back(rec);
  if (config_.on_step) config_.on_step(rec);
  if (config_.on_snapshot) config_.on_snapshot(t, ensemble_matrix(), weights);
}

SmcsResult SmcsEngine::run() {
  init_ensemble();
  schedule_.values.clear();
  trace_.clear();
  for (int t = 1; t <= config_.horizon; ++t) step(t);
  SmcsResult out;
  out.thetas = ensemble_matrix();
  out.weights = normalize_log_weights(log_weights_);
  out.trace = trace_;
  out.schedule = schedule_;
  return out;
}

}  // namespace wdsmc
