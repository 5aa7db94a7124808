#pragma once

#include <span>
#include <vector>

namespace nashgym {

// Markov policy for one player: a distribution over that player's actions per
// (step, state), probs indexed [h][s][action].
class Policy {
 public:
  Policy(int horizon, int num_states, int num_actions);
  static Policy uniform(int horizon, int num_states, int num_actions);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }

  double prob(int h, int s, int a) const { return probs_[index(h, s, a)]; }
  double& prob(int h, int s, int a) { return probs_[index(h, s, a)]; }
  std::span<const double> row(int h, int s) const {
    return {probs_.data() + index(h, s, 0), static_cast<std::size_t>(num_actions_)};
  }
  std::span<double> mutable_row(int h, int s) {
    return {probs_.data() + index(h, s, 0), static_cast<std::size_t>(num_actions_)};
  }
  // All rows at one step, contiguous [s][action].
  std::span<const double> step_rows(int h) const {
    return {probs_.data() + index(h, 0, 0),
            static_cast<std::size_t>(num_states_) * num_actions_};
  }
  const std::vector<double>& probs() const { return probs_; }

  // Rows must be nonnegative and sum to 1 within 1e-9.
  void validate() const;

  bool operator==(const Policy& other) const = default;

 private:
  std::size_t index(int h, int s, int a) const {
    return (static_cast<std::size_t>(h) * num_states_ + s) * num_actions_ + a;
  }

  int horizon_;
  int num_states_;
  int num_actions_;
  std::vector<double> probs_;
};

using MaxPolicy = Policy;
using MinPolicy = Policy;

// Scalar value function per (step, state). Steps run 0..H inclusive; row H is
// the terminal row and stays zero.
class ValueTable {
 public:
  ValueTable(int horizon, int num_states)
      : horizon_(horizon), num_states_(num_states),
        values_(static_cast<std::size_t>(horizon + 1) * num_states, 0.0) {}

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }

  double at(int step, int s) const { return values_[static_cast<std::size_t>(step) * num_states_ + s]; }
  double& at(int step, int s) { return values_[static_cast<std::size_t>(step) * num_states_ + s]; }
  std::span<const double> step_values(int step) const {
    return {values_.data() + static_cast<std::size_t>(step) * num_states_,
            static_cast<std::size_t>(num_states_)};
  }
  const std::vector<double>& values() const { return values_; }

  bool operator==(const ValueTable& other) const = default;

 private:
  int horizon_;
  int num_states_;
  std::vector<double> values_;
};

// One weighted product-policy component of a joint mixture: per-state rows
// for both players at a single step.
struct MixtureComponent {
  double weight = 0.0;
  std::vector<double> max_rows;  // [s][a]
  std::vector<double> min_rows;  // [s][b]
};

// Per step h, a list of components whose weights sum to 1. Play draws one
// component per step and then both players act independently from its rows.
struct JointMixturePolicy {
  int horizon = 0;
  int num_states = 0;
  int num_max_actions = 0;
  int num_min_actions = 0;
  std::vector<std::vector<MixtureComponent>> steps;

  void validate() const;
};

}  // namespace nashgym
