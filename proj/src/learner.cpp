#include "nashgym/learner.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nashgym/error.hpp"
#include "nashgym/ftrl.hpp"
#include "nashgym/simulator.hpp"

namespace nashgym {

namespace {

void check_config(const LearnerConfig& config) {
  require(config.rounds >= 2, ErrorCode::kInvalidArgument, "LearnerConfig: rounds must be >= 2");
  require(config.delta > 0.0 && config.delta < 1.0, ErrorCode::kInvalidArgument,
          "LearnerConfig: delta must lie in (0, 1)");
  require(config.c_bonus >= 0.0, ErrorCode::kInvalidArgument,
          "LearnerConfig: c_bonus must be >= 0");
  require(config.c_alpha > 0.0, ErrorCode::kInvalidArgument,
          "LearnerConfig: c_alpha must be > 0");
}

// X_k = (1 - alpha_k) X_{k-1} + alpha_k x_k over a span.
void blend(std::span<double> acc, std::span<const double> update, double alpha_k) {
  for (std::size_t i = 0; i < acc.size(); ++i) {
    acc[i] = (1.0 - alpha_k) * acc[i] + alpha_k * update[i];
  }
}

}  // namespace

double bonus_scale(const LearnerConfig& config, int num_states, int num_max_actions,
                   int num_min_actions, int horizon) {
  const double log_arg = std::log(static_cast<double>(config.rounds) * num_states *
                                  (num_max_actions + num_min_actions) / config.delta);
  return config.c_bonus *
         std::sqrt(log_arg * log_arg * log_arg /
                   (static_cast<double>(config.rounds) * horizon));
}

double bonus(double accumulated, const LearnerConfig& config, int num_states,
             int num_max_actions, int num_min_actions, int horizon) {
  return bonus_scale(config, num_states, num_max_actions, num_min_actions, horizon) * accumulated;
}

LearnerResult run_learner(const MarkovGame& game, const LearnerConfig& config) {
  check_config(config);
  const int S = game.num_states();
  const int A = game.num_max_actions();
  const int B = game.num_min_actions();
  const int H = game.horizon();
  const std::int64_t K = config.rounds;

  const WeightSchedule schedule(K, config.c_alpha, static_cast<double>(H));
  Simulator sim(game, config.seed);

  LearnerResult result{Policy(H, S, A), Policy(H, S, B), ValueTable(H, S), ValueTable(H, S),
                       0, config, std::nullopt};
  if (config.record_trace) {
    RunTrace trace;
    trace.num_states = S;
    trace.num_max_actions = A;
    trace.num_min_actions = B;
    trace.horizon = H;
    trace.rounds = K;
    trace.c_alpha = config.c_alpha;
    const std::size_t max_cells = static_cast<std::size_t>(H) * K * S * A;
    const std::size_t min_cells = static_cast<std::size_t>(H) * K * S * B;
    trace.reward_max.resize(max_cells);
    trace.next_max.resize(max_cells);
    trace.mu_rows.resize(max_cells);
    trace.reward_min.resize(min_cells);
    trace.next_min.resize(min_cells);
    trace.nu_rows.resize(min_cells);
    result.trace = std::move(trace);
  }

  const double scale = bonus_scale(config, S, A, B, H);

  std::vector<double> q_max(static_cast<std::size_t>(S) * A);
  std::vector<double> q_min(static_cast<std::size_t>(S) * B);
  std::vector<double> big_q_max(q_max.size());
  std::vector<double> big_q_min(q_min.size());
  std::vector<double> mu(q_max.size());
  std::vector<double> nu(q_min.size());
  std::vector<double> mix_mu(q_max.size());
  std::vector<double> mix_nu(q_min.size());
  std::vector<double> value_acc_max(S);
  std::vector<double> value_acc_min(S);
  std::vector<double> bonus_acc_max(S);
  std::vector<double> bonus_acc_min(S);
  std::vector<double> negated(std::max(A, B));

  for (int h = H - 1; h >= 0; --h) {
    std::fill(big_q_max.begin(), big_q_max.end(), 0.0);
    std::fill(big_q_min.begin(), big_q_min.end(), 0.0);
    std::fill(mu.begin(), mu.end(), 1.0 / A);
    std::fill(nu.begin(), nu.end(), 1.0 / B);
    std::fill(mix_mu.begin(), mix_mu.end(), 0.0);
    std::fill(mix_nu.begin(), mix_nu.end(), 0.0);
    std::fill(value_acc_max.begin(), value_acc_max.end(), 0.0);
    std::fill(value_acc_min.begin(), value_acc_min.end(), 0.0);
    std::fill(bonus_acc_max.begin(), bonus_acc_max.end(), 0.0);
    std::fill(bonus_acc_min.begin(), bonus_acc_min.end(), 0.0);

    std::span<const double> next_upper = result.value_upper.step_values(h + 1);
    std::span<const double> next_lower = result.value_lower.step_values(h + 1);

    for (std::int64_t k = 1; k <= K; ++k) {
      const RoundSample sample = sampling_round(sim, h, k, mu, nu);
      for (std::size_t i = 0; i < q_max.size(); ++i) {
        q_max[i] = sample.reward_max[i] + next_upper[sample.next_max[i]];
      }
      for (std::size_t i = 0; i < q_min.size(); ++i) {
        q_min[i] = sample.reward_min[i] + next_lower[sample.next_min[i]];
      }

      const double a_k = schedule.alpha[k];
      blend(big_q_max, q_max, a_k);
      blend(big_q_min, q_min, a_k);
      blend(mix_mu, mu, a_k);
      blend(mix_nu, nu, a_k);
      for (int s = 0; s < S; ++s) {
        std::span<const double> mu_row{mu.data() + static_cast<std::size_t>(s) * A,
                                       static_cast<std::size_t>(A)};
        std::span<const double> nu_row{nu.data() + static_cast<std::size_t>(s) * B,
                                       static_cast<std::size_t>(B)};
        std::span<const double> q_max_row{q_max.data() + static_cast<std::size_t>(s) * A,
                                          static_cast<std::size_t>(A)};
        std::span<const double> q_min_row{q_min.data() + static_cast<std::size_t>(s) * B,
                                          static_cast<std::size_t>(B)};
        value_acc_max[s] = (1.0 - a_k) * value_acc_max[s] +
                           a_k * expectation_under(mu_row, q_max_row);
        value_acc_min[s] = (1.0 - a_k) * value_acc_min[s] +
                           a_k * expectation_under(nu_row, q_min_row);
        bonus_acc_max[s] = (1.0 - a_k) * bonus_acc_max[s] +
                           a_k * (variance_under(mu_row, q_max_row) + H);
        bonus_acc_min[s] = (1.0 - a_k) * bonus_acc_min[s] +
                           a_k * (variance_under(nu_row, q_min_row) + H);
      }

      if (result.trace) {
        RunTrace& trace = *result.trace;
        const std::size_t max_base = trace.max_index(h, k - 1, 0, 0);
        const std::size_t min_base = trace.min_index(h, k - 1, 0, 0);
        std::copy(sample.reward_max.begin(), sample.reward_max.end(),
                  trace.reward_max.begin() + max_base);
        std::copy(sample.next_max.begin(), sample.next_max.end(),
                  trace.next_max.begin() + max_base);
        std::copy(mu.begin(), mu.end(), trace.mu_rows.begin() + max_base);
        std::copy(sample.reward_min.begin(), sample.reward_min.end(),
                  trace.reward_min.begin() + min_base);
        std::copy(sample.next_min.begin(), sample.next_min.end(),
                  trace.next_min.begin() + min_base);
        std::copy(nu.begin(), nu.end(), trace.nu_rows.begin() + min_base);
      }

      // Max player tilts toward high Q (losses are -Q), min player away from it.
      const double eta_next = schedule.eta[k + 1];
      for (int s = 0; s < S; ++s) {
        for (int a = 0; a < A; ++a) negated[a] = -big_q_max[static_cast<std::size_t>(s) * A + a];
        std::vector<double> mu_row = exp_weights({negated.data(), static_cast<std::size_t>(A)},
                                                 eta_next);
        std::copy(mu_row.begin(), mu_row.end(), mu.begin() + static_cast<std::size_t>(s) * A);
        std::vector<double> nu_row =
            exp_weights({big_q_min.data() + static_cast<std::size_t>(s) * B,
                         static_cast<std::size_t>(B)},
                        eta_next);
        std::copy(nu_row.begin(), nu_row.end(), nu.begin() + static_cast<std::size_t>(s) * B);
      }
    }

    const double cap = static_cast<double>(H - h);
    for (int s = 0; s < S; ++s) {
      result.value_upper.at(h, s) = std::min(value_acc_max[s] + scale * bonus_acc_max[s], cap);
      result.value_lower.at(h, s) = std::max(value_acc_min[s] - scale * bonus_acc_min[s], 0.0);
    }
    std::copy(mix_mu.begin(), mix_mu.end(), result.mu_hat.mutable_row(h, 0).data());
    std::copy(mix_nu.begin(), mix_nu.end(), result.nu_hat.mutable_row(h, 0).data());
  }

  result.sample_count = sim.call_count();
  return result;
}

ValueTable empirical_vstar_max(const RunTrace& trace) {
  const std::vector<double> weights =
      alpha_weights_from(alpha_sequence(trace.rounds, trace.c_alpha), trace.rounds);
  ValueTable table(trace.horizon, trace.num_states);
  for (int h = trace.horizon - 1; h >= 0; --h) {
    std::span<const double> next_values = table.step_values(h + 1);
    for (int s = 0; s < trace.num_states; ++s) {
      double best = 0.0;
      for (int a = 0; a < trace.num_max_actions; ++a) {
        double value = 0.0;
        for (std::int64_t k = 0; k < trace.rounds; ++k) {
          const std::size_t i = trace.max_index(h, k, s, a);
          value += weights[k] * (trace.reward_max[i] + next_values[trace.next_max[i]]);
        }
        if (a == 0 || value > best) best = value;
      }
      table.at(h, s) = best;
    }
  }
  return table;
}

ValueTable empirical_vstar_min(const RunTrace& trace) {
  const std::vector<double> weights =
      alpha_weights_from(alpha_sequence(trace.rounds, trace.c_alpha), trace.rounds);
  ValueTable table(trace.horizon, trace.num_states);
  for (int h = trace.horizon - 1; h >= 0; --h) {
    std::span<const double> next_values = table.step_values(h + 1);
    for (int s = 0; s < trace.num_states; ++s) {
      double best = 0.0;
      for (int b = 0; b < trace.num_min_actions; ++b) {
        double value = 0.0;
        for (std::int64_t k = 0; k < trace.rounds; ++k) {
          const std::size_t i = trace.min_index(h, k, s, b);
          value += weights[k] * (trace.reward_min[i] + next_values[trace.next_min[i]]);
        }
        if (b == 0 || value < best) best = value;
      }
      table.at(h, s) = best;
    }
  }
  return table;
}

JointMixturePolicy joint_mixture_from_trace(const RunTrace& trace) {
  const std::vector<double> weights =
      alpha_weights_from(alpha_sequence(trace.rounds, trace.c_alpha), trace.rounds);
  JointMixturePolicy mixture;
  mixture.horizon = trace.horizon;
  mixture.num_states = trace.num_states;
  mixture.num_max_actions = trace.num_max_actions;
  mixture.num_min_actions = trace.num_min_actions;
  mixture.steps.resize(trace.horizon);
  for (int h = 0; h < trace.horizon; ++h) {
    mixture.steps[h].reserve(trace.rounds);
    for (std::int64_t k = 0; k < trace.rounds; ++k) {
      MixtureComponent component;
      component.weight = weights[k];
      const std::size_t max_base = trace.max_index(h, k, 0, 0);
      const std::size_t min_base = trace.min_index(h, k, 0, 0);
      const std::size_t max_len = static_cast<std::size_t>(trace.num_states) * trace.num_max_actions;
      const std::size_t min_len = static_cast<std::size_t>(trace.num_states) * trace.num_min_actions;
      component.max_rows.assign(trace.mu_rows.begin() + max_base,
                                trace.mu_rows.begin() + max_base + max_len);
      component.min_rows.assign(trace.nu_rows.begin() + min_base,
                                trace.nu_rows.begin() + min_base + min_len);
      mixture.steps[h].push_back(std::move(component));
    }
  }
  return mixture;
}

}  // namespace nashgym
