#pragma once

#include <vector>

#include "nashgym/game.hpp"
#include "nashgym/policy.hpp"

namespace nashgym {

// Exact first-step suboptimality of a policy pair. max_side measures how much
// the max-player could gain by deviating (V*^{,nu} - V^{mu,nu}), min_side the
// mirror image; gap = max over states of the larger of the two.
struct NeGapReport {
  double gap = 0.0;
  double max_side = 0.0;
  double min_side = 0.0;
  std::vector<double> per_state;
  std::vector<double> max_side_per_state;
  std::vector<double> min_side_per_state;
};

struct BestResponse {
  Policy policy;
  ValueTable values;
};

struct NashSolution {
  MaxPolicy mu;
  MinPolicy nu;
  ValueTable values;
};

// V[h][s] = E_{a~mu_h, b~nu_h}[ r_h(s,a,b) + <P_h(.|s,a,b), V[h+1]> ],
// backward from the zero terminal row.
ValueTable eval_product_policy(const MarkovGame& game, const MaxPolicy& mu, const MinPolicy& nu);

// Single-agent DP against the frozen opponent. The returned policy is
// deterministic with argmax/argmin ties broken toward the lowest action
// index.
BestResponse best_response_max(const MarkovGame& game, const MinPolicy& nu);
BestResponse best_response_min(const MarkovGame& game, const MaxPolicy& mu);

NeGapReport ne_gap(const MarkovGame& game, const MaxPolicy& mu, const MinPolicy& nu);

// Value of the per-step mixture of product policies.
ValueTable eval_joint_mixture(const MarkovGame& game, const JointMixturePolicy& mixture);

// Backward induction solving the A x B matrix game at every (h,s) by LP.
// ne_gap of the returned pair is <= 1e-6 at desk scale.
NashSolution solve_nash_exact(const MarkovGame& game);

}  // namespace nashgym
