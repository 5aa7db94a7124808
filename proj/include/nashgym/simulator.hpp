#pragma once

#include <atomic>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "nashgym/game.hpp"
#include "nashgym/rng.hpp"

namespace nashgym {

// One round of generative-model samples for a single step h. Per (s,a) the
// max-player side holds the sampled reward and next state (the one-hot row of
// its empirical model); per (s,b) the min-player side likewise. Opponent
// actions are drawn internally and never stored, so a learner consuming a
// RoundSample cannot observe them.
struct RoundSample {
  int num_states = 0;
  int num_max_actions = 0;
  int num_min_actions = 0;
  std::vector<double> reward_max;       // [s][a]
  std::vector<double> reward_min;       // [s][b]
  std::vector<std::int32_t> next_max;   // [s][a]
  std::vector<std::int32_t> next_min;   // [s][b]

  bool operator==(const RoundSample& other) const = default;
};

// Seeded generative model over a fixed game. Every draw is keyed by its
// position (DrawKey), so identical (seed, key) pairs always produce identical
// samples and the call order is irrelevant. call_count() counts
// sample_transition invocations exactly.
class Simulator {
 public:
  Simulator(const MarkovGame& game, std::uint64_t master_seed)
      : game_(&game), master_seed_(master_seed), calls_(0) {}

  // Draws s' ~ P_h(.|s,a,b) from the substream keyed by `key` and returns it
  // together with the (deterministic) reward r_h(s,a,b).
  std::pair<int, double> sample_transition(int h, int s, int a, int b, const DrawKey& key);

  std::int64_t call_count() const { return calls_.load(std::memory_order_relaxed); }
  const MarkovGame& game() const { return *game_; }
  std::uint64_t master_seed() const { return master_seed_; }

 private:
  const MarkovGame* game_;
  std::uint64_t master_seed_;
  std::atomic<std::int64_t> calls_;
};

// The per-round sampling subroutine: for each (s,a) draw b ~ nu_h(.|s) then a
// transition; for each (s,b) draw a ~ mu_h(.|s) then a transition. Consumes
// exactly S*(A+B) generative-model calls. `mu_step` / `nu_step` are the
// per-state rows at step h, laid out [s][action]. `round` enters every
// substream key.
RoundSample sampling_round(Simulator& sim, int h, std::int64_t round,
                           std::span<const double> mu_step, std::span<const double> nu_step);

}  // namespace nashgym
