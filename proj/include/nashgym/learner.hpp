#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nashgym/game.hpp"
#include "nashgym/policy.hpp"

namespace nashgym {

struct LearnerConfig {
  std::int64_t rounds = 0;   // K, required, >= 2
  double c_alpha = 24.0;
  double c_bonus = 0.5;
  double delta = 0.01;       // failure probability in (0,1)
  std::uint64_t seed = 0;
  bool record_trace = false;

  bool operator==(const LearnerConfig& other) const = default;
};

// Per-round log of one learner run: sampled rewards, sampled next states (the
// one-hot empirical kernels), and the policy iterates that generated them.
// Indexed [h][k][s][action] with k zero-based here (round k+1).
struct RunTrace {
  int num_states = 0;
  int num_max_actions = 0;
  int num_min_actions = 0;
  int horizon = 0;
  std::int64_t rounds = 0;
  double c_alpha = 24.0;
  std::vector<double> reward_max;
  std::vector<double> reward_min;
  std::vector<std::int32_t> next_max;
  std::vector<std::int32_t> next_min;
  std::vector<double> mu_rows;
  std::vector<double> nu_rows;

  std::size_t max_index(int h, std::int64_t k, int s, int a) const {
    return ((static_cast<std::size_t>(h) * rounds + k) * num_states + s) * num_max_actions + a;
  }
  std::size_t min_index(int h, std::int64_t k, int s, int b) const {
    return ((static_cast<std::size_t>(h) * rounds + k) * num_states + s) * num_min_actions + b;
  }
};

struct LearnerResult {
  MaxPolicy mu_hat;
  MinPolicy nu_hat;
  ValueTable value_upper;  // clipped optimistic estimate per (step, state)
  ValueTable value_lower;  // clipped pessimistic estimate
  std::int64_t sample_count = 0;
  LearnerConfig config;
  std::optional<RunTrace> trace;
};

// The Nash-Q-FTRL learner: for h = H-1 down to 0, runs K rounds of sampling,
// Q-learning updates at rate alpha_k, exponential-weights policy updates at
// rate eta_{k+1} (max player on +Q, min player on -Q), and accumulates the
// output mixtures and value/bonus accumulators with the shared recursion
// X_k = (1 - alpha_k) X_{k-1} + alpha_k x_k. Deterministic in (game, config);
// consumes exactly K*S*(A+B)*H generative-model calls.
LearnerResult run_learner(const MarkovGame& game, const LearnerConfig& config);

// c_b * sqrt(ln^3(K*S*(A+B)/delta) / (K*H)): the factor multiplying the
// accumulated sum of {Var + H} terms in the confidence bonus.
double bonus_scale(const LearnerConfig& config, int num_states, int num_max_actions,
                   int num_min_actions, int horizon);

// Bonus value for one state given its accumulated sum_k alpha_k^K {Var + H}.
double bonus(double accumulated, const LearnerConfig& config, int num_states,
             int num_max_actions, int num_min_actions, int horizon);

// Best empirical response against the logged run: backward recursion over the
// trace's one-hot kernels, max over a (resp. min over b) of the alpha_k^K
// weighted empirical returns. Compared against value_upper / value_lower to
// test optimism of the bonus choice.
ValueTable empirical_vstar_max(const RunTrace& trace);
ValueTable empirical_vstar_min(const RunTrace& trace);

// Per step h, the components (alpha_k^K, mu_h^k, nu_h^k) for k = 1..K.
JointMixturePolicy joint_mixture_from_trace(const RunTrace& trace);

}  // namespace nashgym
