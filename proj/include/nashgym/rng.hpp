#pragma once

#include <cstdint>
#include <span>

#include "nashgym/error.hpp"

namespace nashgym {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Identifies one random draw within a run. Streams derived from distinct keys
// are decorrelated and independent of the order in which they are consumed,
// so samplers may be reordered or parallelized without changing any output.
struct DrawKey {
  std::uint64_t phase = 0;
  std::uint64_t step = 0;   // h
  std::uint64_t round = 0;  // k
  std::uint64_t state = 0;
  std::uint64_t action = 0;
  std::uint64_t side = 0;  // 0 = max player, 1 = min player
  std::uint64_t draw = 0;  // sub-draw within one call
};

// Key phases used across the project; values are arbitrary but frozen, since
// they participate in every reproducible stream.
inline constexpr std::uint64_t kPhaseSamplingRound = 1;
inline constexpr std::uint64_t kPhaseGameTransition = 2;
inline constexpr std::uint64_t kPhaseGameReward = 3;

inline std::uint64_t derive_stream_state(std::uint64_t master_seed, const DrawKey& key) {
  std::uint64_t s = mix64(master_seed + kGolden);
  const std::uint64_t fields[] = {key.phase, key.step,   key.round, key.state,
                                  key.action, key.side,  key.draw};
  for (std::uint64_t f : fields) s = mix64(s ^ (f + kGolden));
  return s;
}

// Counter-based generator seeded from a (master seed, key) pair.
class KeyedStream {
 public:
  explicit KeyedStream(std::uint64_t state) : state_(state) {}
  KeyedStream(std::uint64_t master_seed, const DrawKey& key)
      : state_(derive_stream_state(master_seed, key)) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Inverse-CDF draw over `weights` in index order. The threshold is scaled by
// the row total, so the sampled law is the exactly renormalized row even when
// the stored weights sum to 1 only within tolerance.
inline int sample_index(std::span<const double> weights, double unit) {
  double total = 0.0;
  for (double w : weights) total += w;
  require(total > 0.0, ErrorCode::kInvalidArgument, "sample_index: nonpositive weight total");
  const double target = unit * total;
  double cumulative = 0.0;
  int last_positive = -1;
  for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
    if (weights[i] > 0.0) last_positive = i;
    cumulative += weights[i];
    if (target < cumulative && weights[i] > 0.0) return i;
  }
  return last_positive;
}

}  // namespace nashgym
