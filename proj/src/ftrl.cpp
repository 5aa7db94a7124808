#include "nashgym/ftrl.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nashgym/error.hpp"

namespace nashgym {

std::vector<double> alpha_sequence(std::int64_t rounds, double c_alpha) {
  require(rounds >= 1, ErrorCode::kInvalidArgument, "alpha_sequence: rounds must be >= 1");
  require(c_alpha > 0.0, ErrorCode::kInvalidArgument, "alpha_sequence: c_alpha must be > 0");
  std::vector<double> alpha(rounds + 1, 0.0);
  alpha[1] = 1.0;
  const double scaled_log = c_alpha * std::log(static_cast<double>(rounds));
  for (std::int64_t k = 2; k <= rounds; ++k) {
    alpha[k] = scaled_log / (static_cast<double>(k - 1) + scaled_log);
  }
  return alpha;
}

std::vector<double> alpha_weights_from(std::span<const double> alpha, std::int64_t k) {
  require(k >= 1 && k < static_cast<std::int64_t>(alpha.size()), ErrorCode::kInvalidArgument,
          "alpha_weights: round index out of range");
  std::vector<double> weights(k);
  double tail_product = 1.0;  // prod_{j=i+1..k} (1 - alpha_j)
  for (std::int64_t i = k; i >= 1; --i) {
    weights[i - 1] = alpha[i] * tail_product;
    tail_product *= 1.0 - alpha[i];
  }
  return weights;
}

WeightSchedule::WeightSchedule(std::int64_t rounds_in, double c_alpha_in, double horizon_scale_in)
    : rounds(rounds_in), c_alpha(c_alpha_in), horizon_scale(horizon_scale_in) {
  require(rounds >= 2, ErrorCode::kInvalidArgument, "WeightSchedule: rounds must be >= 2");
  require(horizon_scale > 0.0, ErrorCode::kInvalidArgument,
          "WeightSchedule: horizon_scale must be > 0");
  alpha = alpha_sequence(rounds, c_alpha);
  const double log_rounds = std::log(static_cast<double>(rounds));
  eta.assign(rounds + 2, 0.0);
  for (std::int64_t k = 1; k <= rounds; ++k) {
    eta[k + 1] = std::sqrt(log_rounds / (alpha[k] * horizon_scale));
  }
  hat_eta.assign(rounds + 1, 0.0);
  hat_eta[1] = eta[2];
  for (std::int64_t k = 2; k <= rounds; ++k) hat_eta[k] = eta[k] / (1.0 - alpha[k]);
  check_regret_preconditions(rounds);
}

WeightSchedule::WeightSchedule(std::vector<double> alpha_in, std::vector<double> eta_in)
    : rounds(static_cast<std::int64_t>(alpha_in.size()) - 1),
      c_alpha(0.0),
      horizon_scale(0.0),
      alpha(std::move(alpha_in)),
      eta(std::move(eta_in)) {
  require(rounds >= 1, ErrorCode::kInvalidArgument, "WeightSchedule: empty alpha sequence");
  require(static_cast<std::int64_t>(eta.size()) >= rounds + 2, ErrorCode::kDimensionMismatch,
          "WeightSchedule: eta must be defined through round K+1");
  hat_eta.assign(rounds + 1, 0.0);
  hat_eta[1] = eta[2];
  for (std::int64_t k = 2; k <= rounds; ++k) hat_eta[k] = eta[k] / (1.0 - alpha[k]);
}

std::vector<double> WeightSchedule::alpha_weights(std::int64_t k) const {
  require(k >= 1 && k <= rounds, ErrorCode::kInvalidArgument,
          "alpha_weights: round index out of range");
  return alpha_weights_from(alpha, k);
}

void WeightSchedule::check_regret_preconditions(std::int64_t n) const {
  require(n >= 1 && n <= rounds, ErrorCode::kInvalidArgument,
          "check_regret_preconditions: n out of range");
  require(alpha[1] > 0.0 && alpha[1] <= 1.0, ErrorCode::kPrecondition,
          "schedule precondition violated: alpha_1 must lie in (0, 1]");
  const double eta1_target = eta[2] * (1.0 - alpha[1]);
  require(std::abs(eta[1] - eta1_target) <= 1e-12 * std::max(1.0, std::abs(eta[2])),
          ErrorCode::kPrecondition,
          "schedule precondition violated: eta_1 != eta_2 * (1 - alpha_1)");
  for (std::int64_t k = 2; k <= n; ++k) {
    require(alpha[k] > 0.0 && alpha[k] < 1.0, ErrorCode::kPrecondition,
            "schedule precondition violated: alpha_" + std::to_string(k) + " outside (0, 1)");
    const double lhs = eta[k + 1] * (1.0 - alpha[k]);
    require(lhs > 0.0 && lhs <= eta[k] * (1.0 + 1e-12), ErrorCode::kPrecondition,
            "schedule precondition violated: eta_{k+1}(1 - alpha_k) > eta_k at k = " +
                std::to_string(k));
  }
}

LossSequence::LossSequence(int num_actions) : num_actions_(num_actions) {
  require(num_actions >= 1, ErrorCode::kInvalidArgument, "LossSequence: num_actions must be >= 1");
}

LossSequence::LossSequence(int num_actions, std::vector<double> values)
    : num_actions_(num_actions) {
  require(num_actions >= 1, ErrorCode::kInvalidArgument, "LossSequence: num_actions must be >= 1");
  require(values.size() % num_actions == 0, ErrorCode::kDimensionMismatch,
          "LossSequence: flat size not a multiple of num_actions");
  for (double x : values) {
    require(std::isfinite(x) && x >= 0.0, ErrorCode::kInvalidArgument,
            "LossSequence: losses must be finite and nonnegative");
  }
  values_ = std::move(values);
}

void LossSequence::append(std::span<const double> row) {
  require(row.size() == static_cast<std::size_t>(num_actions_), ErrorCode::kDimensionMismatch,
          "LossSequence: row size mismatch");
  for (double x : row) {
    require(std::isfinite(x) && x >= 0.0, ErrorCode::kInvalidArgument,
            "LossSequence: losses must be finite and nonnegative");
  }
  values_.insert(values_.end(), row.begin(), row.end());
}

void PredictionSequence::append(std::span<const double> row) {
  require(row.size() == static_cast<std::size_t>(num_actions_), ErrorCode::kDimensionMismatch,
          "PredictionSequence: row size mismatch");
  double sum = 0.0;
  for (double x : row) {
    require(x >= 0.0, ErrorCode::kValidation, "PredictionSequence: negative probability");
    sum += x;
  }
  require(std::abs(sum - 1.0) <= 1e-12, ErrorCode::kValidation,
          "PredictionSequence: row sums to " + std::to_string(sum));
  values_.insert(values_.end(), row.begin(), row.end());
}

std::vector<double> exp_weights(std::span<const double> cumulative_loss, double eta) {
  require(eta >= 0.0 && std::isfinite(eta), ErrorCode::kInvalidArgument,
          "exp_weights: eta must be finite and >= 0");
  double low = cumulative_loss[0];
  for (double x : cumulative_loss) {
    require(std::isfinite(x), ErrorCode::kInvalidArgument, "exp_weights: non-finite loss");
    low = std::min(low, x);
  }
  // exp(-eta (L - min L)) keeps every weight in (0, 1].
  std::vector<double> out(cumulative_loss.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = std::exp(-eta * (cumulative_loss[i] - low));
    sum += out[i];
  }
  for (double& x : out) x /= sum;
  return out;
}

std::vector<double> pi_minus(std::span<const double> cumulative_loss, double hat_eta) {
  return exp_weights(cumulative_loss, hat_eta);
}

double expectation_under(std::span<const double> dist, std::span<const double> f) {
  require(dist.size() == f.size(), ErrorCode::kDimensionMismatch,
          "expectation_under: size mismatch");
  double mean = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) mean += dist[i] * f[i];
  return mean;
}

double variance_under(std::span<const double> dist, std::span<const double> f) {
  const double mean = expectation_under(dist, f);
  double var = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double d = f[i] - mean;
    var += dist[i] * d * d;
  }
  return var;
}

PredictionSequence run_ftrl(const LossSequence& losses, const WeightSchedule& schedule) {
  const std::int64_t n = losses.size();
  require(n <= schedule.rounds, ErrorCode::kDimensionMismatch,
          "run_ftrl: more losses than schedule rounds");
  const int actions = losses.num_actions();
  PredictionSequence predictions(actions);
  std::vector<double> uniform(actions, 1.0 / actions);
  predictions.append(uniform);
  std::vector<double> weighted_loss(actions, 0.0);  // L_k
  for (std::int64_t k = 1; k < n; ++k) {
    const double a_k = schedule.alpha[k];
    std::span<const double> loss = losses.row(k);
    for (int i = 0; i < actions; ++i) {
      weighted_loss[i] = (1.0 - a_k) * weighted_loss[i] + a_k * loss[i];
    }
    predictions.append(exp_weights(weighted_loss, schedule.eta[k + 1]));
  }
  return predictions;
}

RegretReport weighted_regret(const LossSequence& losses, const PredictionSequence& predictions,
                             const WeightSchedule& schedule, std::int64_t n) {
  require(losses.num_actions() == predictions.num_actions(), ErrorCode::kDimensionMismatch,
          "weighted_regret: action counts differ");
  require(n >= 1 && n <= losses.size() && n <= predictions.size() && n <= schedule.rounds,
          ErrorCode::kDimensionMismatch, "weighted_regret: n out of range");
  const int actions = losses.num_actions();
  const std::vector<double> weights = schedule.alpha_weights(n);
  double learner_loss = 0.0;
  std::vector<double> action_loss(actions, 0.0);
  for (std::int64_t k = 1; k <= n; ++k) {
    const double w = weights[k - 1];
    std::span<const double> loss = losses.row(k);
    learner_loss += w * expectation_under(predictions.row(k), loss);
    for (int a = 0; a < actions; ++a) action_loss[a] += w * loss[a];
  }
  RegretReport report;
  report.per_action.resize(actions);
  for (int a = 0; a < actions; ++a) report.per_action[a] = learner_loss - action_loss[a];
  report.regret = *std::max_element(report.per_action.begin(), report.per_action.end());
  return report;
}

RegretBound regret_bound_rhs(const LossSequence& losses, const PredictionSequence& predictions,
                             const WeightSchedule& schedule, std::int64_t n) {
  require(losses.num_actions() == predictions.num_actions(), ErrorCode::kDimensionMismatch,
          "regret_bound_rhs: action counts differ");
  require(n >= 1 && n <= losses.size() && n <= predictions.size() && n <= schedule.rounds,
          ErrorCode::kDimensionMismatch, "regret_bound_rhs: n out of range");
  schedule.check_regret_preconditions(n);

  const int actions = losses.num_actions();
  const std::vector<double> weights = schedule.alpha_weights(n);
  RegretBound bound;
  for (std::int64_t k = 1; k <= n; ++k) {
    std::span<const double> loss = losses.row(k);
    const double w = weights[k - 1];
    const double he = schedule.hat_eta[k];
    const double a_k = schedule.alpha[k];
    bound.variance_term += w * he * a_k * variance_under(predictions.row(k), loss);
    const double sup = *std::max_element(loss.begin(), loss.end());
    if (he * a_k * sup > 1.0 / 3.0) {
      bound.norm_term += w * he * he * a_k * a_k * sup * sup * sup;
    }
  }
  bound.variance_term *= 5.0 / 3.0;
  bound.norm_term *= 3.0;
  bound.log_term = std::log(static_cast<double>(actions)) / schedule.eta[n + 1];
  bound.total = bound.variance_term + bound.log_term + bound.norm_term;
  return bound;
}

}  // namespace nashgym
