#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nashgym {

// Learning-rate schedule for weighted FTRL. Rounds are 1-based throughout
// (alpha[k] for k = 1..K; index 0 is unused), matching the recursions
//   alpha_k   = c_alpha ln K / (k - 1 + c_alpha ln K)
//   eta_{k+1} = sqrt(ln K / (alpha_k * horizon_scale)),  eta_1 = 0
//   hat_eta_1 = eta_2,  hat_eta_k = eta_k / (1 - alpha_k) for k > 1.
// Natural logarithms everywhere; K >= 2 is required since ln 1 = 0 would
// degenerate the rates.
struct WeightSchedule {
  std::int64_t rounds = 0;  // K
  double c_alpha = 24.0;
  double horizon_scale = 1.0;  // the H inside eta
  std::vector<double> alpha;
  std::vector<double> eta;      // defined through index K+1
  std::vector<double> hat_eta;

  explicit WeightSchedule(std::int64_t rounds, double c_alpha = 24.0,
                          double horizon_scale = 1.0);

  // Custom rates (1-based, index 0 ignored; eta must extend to K+1). Used by
  // experiments and tests that exercise non-canonical schedules.
  WeightSchedule(std::vector<double> alpha_in, std::vector<double> eta_in);

  // The decayed weights alpha_i^k = alpha_i * prod_{j=i+1..k} (1 - alpha_j),
  // returned for i = 1..k (0-based vector index i-1). They sum to 1.
  std::vector<double> alpha_weights(std::int64_t k) const;

  // Theorem preconditions behind regret_bound_rhs: alpha_1 in (0,1],
  // eta_1 = eta_2 (1 - alpha_1), and for k >= 2: alpha_k in (0,1) and
  // 0 < eta_{k+1}(1 - alpha_k) <= eta_k. Throws Error(kPrecondition).
  void check_regret_preconditions(std::int64_t n) const;
};

// alpha_1 = 1 by convention (the k = 1 formula is 0/0 at K = 1); the closed
// form above applies from k = 2 on.
std::vector<double> alpha_sequence(std::int64_t rounds, double c_alpha);
std::vector<double> alpha_weights_from(std::span<const double> alpha, std::int64_t k);

// Sequence of nonnegative loss vectors, rows 1-based like the schedule.
class LossSequence {
 public:
  explicit LossSequence(int num_actions);
  LossSequence(int num_actions, std::vector<double> values);

  void append(std::span<const double> row);
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()) / num_actions_; }
  int num_actions() const { return num_actions_; }
  std::span<const double> row(std::int64_t k) const {
    return {values_.data() + (k - 1) * num_actions_, static_cast<std::size_t>(num_actions_)};
  }

 private:
  int num_actions_;
  std::vector<double> values_;
};

class PredictionSequence {
 public:
  explicit PredictionSequence(int num_actions) : num_actions_(num_actions) {}

  void append(std::span<const double> row);
  std::int64_t size() const { return static_cast<std::int64_t>(values_.size()) / num_actions_; }
  int num_actions() const { return num_actions_; }
  std::span<const double> row(std::int64_t k) const {
    return {values_.data() + (k - 1) * num_actions_, static_cast<std::size_t>(num_actions_)};
  }

 private:
  int num_actions_;
  std::vector<double> values_;
};

// pi(a) proportional to exp(-eta * cumulative_loss(a)), computed with
// max-shift stabilization and exact normalization. Invariant under additive
// shifts of the input.
std::vector<double> exp_weights(std::span<const double> cumulative_loss, double eta);

// The auxiliary iterate pi^-_{k+1}: same formula with hat_eta_k in place of
// eta_{k+1}.
std::vector<double> pi_minus(std::span<const double> cumulative_loss, double hat_eta);

double expectation_under(std::span<const double> dist, std::span<const double> f);
double variance_under(std::span<const double> dist, std::span<const double> f);

// pi_1 uniform; pi_{k+1} = exp_weights(L_k, eta_{k+1}) where
// L_k = (1 - alpha_k) L_{k-1} + alpha_k loss_k. Returns pi_1..pi_n.
PredictionSequence run_ftrl(const LossSequence& losses, const WeightSchedule& schedule);

struct RegretReport {
  double regret = 0.0;               // max over actions
  std::vector<double> per_action;
};

// R_n(a) = sum_k alpha_k^n <pi_k, loss_k> - sum_k alpha_k^n loss_k(a).
RegretReport weighted_regret(const LossSequence& losses, const PredictionSequence& predictions,
                             const WeightSchedule& schedule, std::int64_t n);

struct RegretBound {
  double total = 0.0;
  double variance_term = 0.0;  // (5/3) sum_k alpha_k^n hat_eta_k alpha_k Var_{pi_k}(loss_k)
  double log_term = 0.0;       // ln A / eta_{n+1}
  double norm_term = 0.0;      // 3 sum_k alpha_k^n hat_eta_k^2 alpha_k^2 ||loss_k||_inf^3 1{...}
};

// Right-hand side of the deterministic variance-based regret bound; holds for
// every nonnegative loss sequence under the schedule preconditions.
RegretBound regret_bound_rhs(const LossSequence& losses, const PredictionSequence& predictions,
                             const WeightSchedule& schedule, std::int64_t n);

}  // namespace nashgym
