#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace nashgym {

// Dense tabular non-stationary finite-horizon two-player zero-sum Markov
// game. Transitions are indexed [h][s][a][b][s'] and rewards [h][s][a][b],
// row-major, with the step h zero-based in code (h = 0..H-1). Instances are
// immutable after construction and safe to share across threads.
class MarkovGame {
 public:
  // Per-row absolute tolerance on transition stochasticity.
  static constexpr double kRowSumTolerance = 1e-9;

  MarkovGame(int num_states, int num_max_actions, int num_min_actions, int horizon,
             std::vector<double> transitions, std::vector<double> rewards);

  int num_states() const { return num_states_; }
  int num_max_actions() const { return num_max_actions_; }
  int num_min_actions() const { return num_min_actions_; }
  int horizon() const { return horizon_; }

  double reward(int h, int s, int a, int b) const { return rewards_[reward_index(h, s, a, b)]; }
  double transition(int h, int s, int a, int b, int next) const {
    return transitions_[transition_index(h, s, a, b, next)];
  }
  std::span<const double> transition_row(int h, int s, int a, int b) const {
    return {transitions_.data() + transition_index(h, s, a, b, 0),
            static_cast<std::size_t>(num_states_)};
  }

  const std::vector<double>& transitions() const { return transitions_; }
  const std::vector<double>& rewards() const { return rewards_; }

  std::size_t reward_index(int h, int s, int a, int b) const {
    return ((static_cast<std::size_t>(h) * num_states_ + s) * num_max_actions_ + a) *
               num_min_actions_ +
           b;
  }
  std::size_t transition_index(int h, int s, int a, int b, int next) const {
    return reward_index(h, s, a, b) * num_states_ + next;
  }

  bool operator==(const MarkovGame& other) const = default;

 private:
  int num_states_;
  int num_max_actions_;
  int num_min_actions_;
  int horizon_;
  std::vector<double> transitions_;
  std::vector<double> rewards_;
};

// Throws Error(kValidation) naming the first offending (h,s,a,b) cell and the
// violated constraint (transition row sum, negative probability, or reward
// range).
void validate_game(const MarkovGame& game);

// Deterministic function of its arguments: every transition row is built by
// normalizing independent uniform(0,1] draws, every reward is uniform [0,1).
MarkovGame random_game(int num_states, int num_max_actions, int num_min_actions, int horizon,
                       std::uint64_t seed);

// One-state one-shot game with r(a,b) = 1 if a == b else 0. Its unique Nash
// equilibrium is uniform play on both sides with value 1/2.
MarkovGame matching_pennies();

// Single-agent non-stationary MDP, used as the seed of the lower-bound game
// construction. Transitions are [h][s][a][s'], rewards [h][s][a].
struct SingleAgentMdp {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<double> transitions;
  std::vector<double> rewards;

  std::size_t reward_index(int h, int s, int a) const {
    return (static_cast<std::size_t>(h) * num_states + s) * num_actions + a;
  }
  std::size_t transition_index(int h, int s, int a, int next) const {
    return reward_index(h, s, a) * num_states + next;
  }
};

void validate_mdp(const SingleAgentMdp& mdp);

// Embeds the MDP into a zero-sum game by giving the min-player
// `num_min_actions` indistinguishable actions: rewards and transitions are
// copied for every b. The NE-gap of (mu, any nu) in the output equals the
// single-agent suboptimality of mu in the input.
MarkovGame lower_bound_game(const SingleAgentMdp& mdp, int num_min_actions);

}  // namespace nashgym
