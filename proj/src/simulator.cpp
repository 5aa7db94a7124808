#include "nashgym/simulator.hpp"

#include "nashgym/error.hpp"

namespace nashgym {

std::pair<int, double> Simulator::sample_transition(int h, int s, int a, int b,
                                                    const DrawKey& key) {
  require(h >= 0 && h < game_->horizon() && s >= 0 && s < game_->num_states() && a >= 0 &&
              a < game_->num_max_actions() && b >= 0 && b < game_->num_min_actions(),
          ErrorCode::kInvalidArgument, "sample_transition: index out of range");
  KeyedStream stream(master_seed_, key);
  const int next = sample_index(game_->transition_row(h, s, a, b), stream.next_unit());
  calls_.fetch_add(1, std::memory_order_relaxed);
  return {next, game_->reward(h, s, a, b)};
}

RoundSample sampling_round(Simulator& sim, int h, std::int64_t round,
                           std::span<const double> mu_step, std::span<const double> nu_step) {
  const MarkovGame& game = sim.game();
  const int S = game.num_states();
  const int A = game.num_max_actions();
  const int B = game.num_min_actions();
  require(mu_step.size() == static_cast<std::size_t>(S) * A &&
              nu_step.size() == static_cast<std::size_t>(S) * B,
          ErrorCode::kDimensionMismatch, "sampling_round: policy row sizes do not match game");

  RoundSample out;
  out.num_states = S;
  out.num_max_actions = A;
  out.num_min_actions = B;
  out.reward_max.resize(static_cast<std::size_t>(S) * A);
  out.next_max.resize(static_cast<std::size_t>(S) * A);
  out.reward_min.resize(static_cast<std::size_t>(S) * B);
  out.next_min.resize(static_cast<std::size_t>(S) * B);

  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      DrawKey key{.phase = kPhaseSamplingRound,
                  .step = static_cast<std::uint64_t>(h),
                  .round = static_cast<std::uint64_t>(round),
                  .state = static_cast<std::uint64_t>(s),
                  .action = static_cast<std::uint64_t>(a),
                  .side = 0,
                  .draw = 0};
      KeyedStream opponent(sim.master_seed(), key);
      const int b = sample_index(nu_step.subspan(static_cast<std::size_t>(s) * B, B),
                                 opponent.next_unit());
      key.draw = 1;
      auto [next, reward] = sim.sample_transition(h, s, a, b, key);
      out.reward_max[static_cast<std::size_t>(s) * A + a] = reward;
      out.next_max[static_cast<std::size_t>(s) * A + a] = next;
    }
    for (int b = 0; b < B; ++b) {
      DrawKey key{.phase = kPhaseSamplingRound,
                  .step = static_cast<std::uint64_t>(h),
                  .round = static_cast<std::uint64_t>(round),
                  .state = static_cast<std::uint64_t>(s),
                  .action = static_cast<std::uint64_t>(b),
                  .side = 1,
                  .draw = 0};
      KeyedStream opponent(sim.master_seed(), key);
      const int a = sample_index(mu_step.subspan(static_cast<std::size_t>(s) * A, A),
                                 opponent.next_unit());
      key.draw = 1;
      auto [next, reward] = sim.sample_transition(h, s, a, b, key);
      out.reward_min[static_cast<std::size_t>(s) * B + b] = reward;
      out.next_min[static_cast<std::size_t>(s) * B + b] = next;
    }
  }
  return out;
}

}  // namespace nashgym
