#include "nashgym/game.hpp"

#include <cmath>
#include <string>

#include "nashgym/error.hpp"
#include "nashgym/rng.hpp"

namespace nashgym {

namespace {

std::string cell_name(int h, int s, int a, int b) {
  return "(h=" + std::to_string(h) + ",s=" + std::to_string(s) + ",a=" + std::to_string(a) +
         ",b=" + std::to_string(b) + ")";
}

}  // namespace

MarkovGame::MarkovGame(int num_states, int num_max_actions, int num_min_actions, int horizon,
                       std::vector<double> transitions, std::vector<double> rewards)
    : num_states_(num_states),
      num_max_actions_(num_max_actions),
      num_min_actions_(num_min_actions),
      horizon_(horizon),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)) {
  require(num_states_ >= 1 && num_max_actions_ >= 1 && num_min_actions_ >= 1 && horizon_ >= 1,
          ErrorCode::kInvalidArgument, "MarkovGame: all dimensions must be >= 1");
  const std::size_t cells = static_cast<std::size_t>(horizon_) * num_states_ *
                            num_max_actions_ * num_min_actions_;
  require(rewards_.size() == cells, ErrorCode::kDimensionMismatch,
          "MarkovGame: reward tensor has " + std::to_string(rewards_.size()) +
              " entries, expected " + std::to_string(cells));
  require(transitions_.size() == cells * num_states_, ErrorCode::kDimensionMismatch,
          "MarkovGame: transition tensor has " + std::to_string(transitions_.size()) +
              " entries, expected " + std::to_string(cells * num_states_));
}

void validate_game(const MarkovGame& game) {
  for (int h = 0; h < game.horizon(); ++h) {
    for (int s = 0; s < game.num_states(); ++s) {
      for (int a = 0; a < game.num_max_actions(); ++a) {
        for (int b = 0; b < game.num_min_actions(); ++b) {
          const double r = game.reward(h, s, a, b);
          if (!(r >= 0.0 && r <= 1.0)) {
            fail(ErrorCode::kValidation,
                 "reward out of [0,1] at " + cell_name(h, s, a, b) + ": " + std::to_string(r));
          }
          double sum = 0.0;
          for (int next = 0; next < game.num_states(); ++next) {
            const double p = game.transition(h, s, a, b, next);
            if (!(p >= 0.0)) {
              fail(ErrorCode::kValidation, "negative transition probability at " +
                                               cell_name(h, s, a, b) +
                                               " -> s'=" + std::to_string(next));
            }
            sum += p;
          }
          if (std::abs(sum - 1.0) > MarkovGame::kRowSumTolerance) {
            fail(ErrorCode::kValidation, "transition row sum " + std::to_string(sum) +
                                             " out of tolerance at " + cell_name(h, s, a, b));
          }
        }
      }
    }
  }
}

MarkovGame random_game(int num_states, int num_max_actions, int num_min_actions, int horizon,
                       std::uint64_t seed) {
  require(num_states >= 1 && num_max_actions >= 1 && num_min_actions >= 1 && horizon >= 1,
          ErrorCode::kInvalidArgument, "random_game: all dimensions must be >= 1");
  const std::size_t cells = static_cast<std::size_t>(horizon) * num_states * num_max_actions *
                            num_min_actions;
  std::vector<double> transitions(cells * num_states);
  std::vector<double> rewards(cells);

  std::size_t cell = 0;
  for (int h = 0; h < horizon; ++h) {
    for (int s = 0; s < num_states; ++s) {
      for (int a = 0; a < num_max_actions; ++a) {
        for (int b = 0; b < num_min_actions; ++b, ++cell) {
          DrawKey key{.phase = kPhaseGameTransition,
                      .step = static_cast<std::uint64_t>(h),
                      .state = static_cast<std::uint64_t>(s),
                      .action = static_cast<std::uint64_t>(a),
                      .side = static_cast<std::uint64_t>(b)};
          KeyedStream stream(seed, key);
          double sum = 0.0;
          double* row = transitions.data() + cell * num_states;
          for (int next = 0; next < num_states; ++next) {
            row[next] = 1.0 - stream.next_unit();  // uniform (0,1]
            sum += row[next];
          }
          for (int next = 0; next < num_states; ++next) row[next] /= sum;

          key.phase = kPhaseGameReward;
          rewards[cell] = KeyedStream(seed, key).next_unit();
        }
      }
    }
  }
  return MarkovGame(num_states, num_max_actions, num_min_actions, horizon,
                    std::move(transitions), std::move(rewards));
}

MarkovGame matching_pennies() {
  std::vector<double> transitions(4, 1.0);  // S=1: every row is [1.0]
  std::vector<double> rewards = {1.0, 0.0, 0.0, 1.0};
  return MarkovGame(1, 2, 2, 1, std::move(transitions), std::move(rewards));
}

void validate_mdp(const SingleAgentMdp& mdp) {
  require(mdp.num_states >= 1 && mdp.num_actions >= 1 && mdp.horizon >= 1,
          ErrorCode::kInvalidArgument, "SingleAgentMdp: all dimensions must be >= 1");
  const std::size_t cells =
      static_cast<std::size_t>(mdp.horizon) * mdp.num_states * mdp.num_actions;
  require(mdp.rewards.size() == cells && mdp.transitions.size() == cells * mdp.num_states,
          ErrorCode::kDimensionMismatch, "SingleAgentMdp: tensor sizes do not match dimensions");
  for (int h = 0; h < mdp.horizon; ++h) {
    for (int s = 0; s < mdp.num_states; ++s) {
      for (int a = 0; a < mdp.num_actions; ++a) {
        const double r = mdp.rewards[mdp.reward_index(h, s, a)];
        require(r >= 0.0 && r <= 1.0, ErrorCode::kValidation,
                "SingleAgentMdp: reward out of [0,1] at (h=" + std::to_string(h) +
                    ",s=" + std::to_string(s) + ",a=" + std::to_string(a) + ")");
        double sum = 0.0;
        for (int next = 0; next < mdp.num_states; ++next) {
          const double p = mdp.transitions[mdp.transition_index(h, s, a, next)];
          require(p >= 0.0, ErrorCode::kValidation, "SingleAgentMdp: negative probability");
          sum += p;
        }
        require(std::abs(sum - 1.0) <= MarkovGame::kRowSumTolerance, ErrorCode::kValidation,
                "SingleAgentMdp: transition row sum out of tolerance at (h=" +
                    std::to_string(h) + ",s=" + std::to_string(s) + ",a=" + std::to_string(a) +
                    ")");
      }
    }
  }
}

MarkovGame lower_bound_game(const SingleAgentMdp& mdp, int num_min_actions) {
  require(num_min_actions >= 1, ErrorCode::kInvalidArgument,
          "lower_bound_game: num_min_actions must be >= 1");
  validate_mdp(mdp);
  const int S = mdp.num_states;
  const int A = mdp.num_actions;
  const int H = mdp.horizon;
  std::vector<double> transitions(static_cast<std::size_t>(H) * S * A * num_min_actions * S);
  std::vector<double> rewards(static_cast<std::size_t>(H) * S * A * num_min_actions);
  MarkovGame shape(S, A, num_min_actions, H, transitions, rewards);  // index helper only
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < num_min_actions; ++b) {
          rewards[shape.reward_index(h, s, a, b)] = mdp.rewards[mdp.reward_index(h, s, a)];
          for (int next = 0; next < S; ++next) {
            transitions[shape.transition_index(h, s, a, b, next)] =
                mdp.transitions[mdp.transition_index(h, s, a, next)];
          }
        }
      }
    }
  }
  return MarkovGame(S, A, num_min_actions, H, std::move(transitions), std::move(rewards));
}

}  // namespace nashgym
