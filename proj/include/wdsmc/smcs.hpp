#pragma once

// Sequential Monte Carlo sampler over forward-model parameters, scored by
// the Wasserstein distance between simulated and observed point clouds.
// Each assimilation step tempers the ensemble with a Gaussian surrogate
// likelihood of the step's distance, moves samples with an MCMC kernel,
// reweights, and resamples when the effective sample size collapses.

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wdsmc/model.hpp"
#include "wdsmc/random.hpp"

namespace wdsmc {

// Gaussian surrogate for the likelihood of a distance D under bandwidth h:
// exp(-D^2 / 2h^2) / (sqrt(2 pi) h).
double surrogate_density(double distance, double bandwidth);

// Log of surrogate_density; -inf for non-finite distances. Throws
// InvalidSpecError unless bandwidth is positive.
double log_kernel(double distance, double bandwidth);

struct BandwidthResult {
  double value = 0.0;
  bool floored = false;
};

// Median of the pooled step distances, floored at 1e-12 so the kernel stays
// proper when every pooled distance vanishes. Throws EmptyInputError.
BandwidthResult adaptive_bandwidth(std::vector<double> pool);

// min(1, exp(lc - lt)), with a zero-density current always left and a
// zero-density candidate never entered.
double acceptance_probability(double log_target_candidate, double log_target_current);

// Shift-invariant normalization of log weights to linear weights summing
// to one. Throws ZeroMassError when every entry is -inf.
Eigen::VectorXd normalize_log_weights(const Eigen::VectorXd& log_weights);

// 1 / sum(w^2) for normalized weights; scale-invariant for unnormalized.
double effective_sample_size(const Eigen::VectorXd& weights);

// Systematic resampling: one uniform offset, n evenly spaced points walked
// through the cumulative weights. Copy counts never differ from n*w by
// more than one, and the returned indices are nondecreasing.
std::vector<int> systematic_resample_indices(const Eigen::VectorXd& weights, Rng& rng);

// Independent uniform prior over a box in parameter space.
struct PriorBox {
  std::vector<std::string> names;
  Eigen::VectorXd low;
  Eigen::VectorXd high;

  PriorBox() = default;
  PriorBox(std::vector<std::string> names_in, Eigen::VectorXd low_in, Eigen::VectorXd high_in);

  int dim() const { return static_cast<int>(low.size()); }
  bool contains(const Eigen::VectorXd& theta) const;
  double log_density(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd sample(Rng& rng) const;
};

// Per-sample record of step distances. A sample whose trajectory violates
// the physical screen at some step is degenerate from that step onward.
struct DistanceHistory {
  std::vector<double> distances;  // distances[i] belongs to step i + 1
  int degenerate_at = -1;         // first invalid step, 1-based; -1 if none

  bool degenerate() const { return degenerate_at >= 0; }
};

// Bandwidths frozen step by step; values[i] belongs to step i + 1.
struct BandwidthSchedule {
  std::vector<double> values;
};

// Log prior plus the first t surrogate log factors under the frozen
// schedule. -inf outside the prior or past a degenerate step; throws
// HistoryTooShortError when fewer than t entries are available.
double cumulative_log_target(const PriorBox& prior, const Eigen::VectorXd& theta,
                             const DistanceHistory& history,
                             const BandwidthSchedule& schedule, int t);

// Random-walk proposal: independent Gaussian step per coordinate.
Eigen::VectorXd gaussian_step(const Eigen::VectorXd& theta, const Eigen::VectorXd& step_std,
                              Rng& rng);

// Ensemble summary after a step's reweighting, before any resampling.
struct StepRecord {
  int t = 0;
  Eigen::VectorXd mean;
  Eigen::VectorXd std_dev;
  double ess = 0.0;
  double bandwidth = 0.0;
  double accept_rate = 0.0;
  bool resampled = false;
};

using PosteriorTrace = std::vector<StepRecord>;

struct SmcsConfig {
  int n_samples = 0;
  int horizon = 0;
  std::uint64_t seed = 0;
  double ess_threshold = -1.0;   // absolute; negative selects n_samples / 2
  Eigen::VectorXd proposal_std;  // empty selects 5% of each prior range

  // Test hook: when set, the step-t factor is exp(f(t, theta)) and no
  // forward simulation happens; the model and observations may be null.
  std::function<double(int, const ParameterVector&)> exact_log_likelihood;

  std::function<void(const StepRecord&)> on_step;
  std::function<void(int, const Eigen::MatrixXd&, const Eigen::VectorXd&)> on_snapshot;
};

struct SmcsResult {
  Eigen::MatrixXd thetas;    // n_samples x dim, ensemble after the final step
  Eigen::VectorXd weights;   // normalized
  PosteriorTrace trace;
  BandwidthSchedule schedule;
};

class SmcsEngine {
 public:
  // The model and observations are borrowed and must outlive the engine.
  SmcsEngine(const ForwardModel* model, const ObservationSeries* observations,
             PriorBox prior, SmcsConfig config);

  SmcsResult run();

 private:
  struct Slot {
    Eigen::VectorXd theta;
    std::unique_ptr<Session> session;
    Eigen::MatrixXd last_frame;
    bool has_frame = false;
    DistanceHistory history;
    std::vector<double> terms;  // exact-likelihood mode contributions
  };

  struct Candidate {
    Eigen::VectorXd theta;
    std::unique_ptr<Session> session;
    Eigen::MatrixXd last_frame;
    DistanceHistory history;
    std::vector<double> terms;
    bool in_box = false;
    bool viable = false;
  };

  bool exact_mode() const { return static_cast<bool>(config_.exact_log_likelihood); }
  void init_ensemble();
  void step(int t);
  Candidate build_candidate(int t, int j) const;
  double target_of(const Eigen::VectorXd& theta, const DistanceHistory& history,
                   const std::vector<double>& terms, int t) const;
  Slot clone_slot(const Slot& s) const;
  Eigen::MatrixXd ensemble_matrix() const;

  const ForwardModel* model_;
  const ObservationSeries* obs_;
  PriorBox prior_;
  SmcsConfig config_;
  Eigen::VectorXd proposal_std_;
  double ess_threshold_ = 0.0;
  std::vector<Slot> slots_;
  Eigen::VectorXd log_weights_;
  BandwidthSchedule schedule_;
  PosteriorTrace trace_;
};

}  // namespace wdsmc
