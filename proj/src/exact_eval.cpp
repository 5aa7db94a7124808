#include "nashgym/exact_eval.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "nashgym/error.hpp"
#include "nashgym/matrix_game.hpp"

namespace nashgym {

namespace {

void check_max_policy(const MarkovGame& game, const Policy& mu) {
  require(mu.horizon() == game.horizon() && mu.num_states() == game.num_states() &&
              mu.num_actions() == game.num_max_actions(),
          ErrorCode::kDimensionMismatch, "max policy dimensions do not match game");
}

void check_min_policy(const MarkovGame& game, const Policy& nu) {
  require(nu.horizon() == game.horizon() && nu.num_states() == game.num_states() &&
              nu.num_actions() == game.num_min_actions(),
          ErrorCode::kDimensionMismatch, "min policy dimensions do not match game");
}

// r_h(s,a,b) + <P_h(.|s,a,b), next_values>
double cell_value(const MarkovGame& game, int h, int s, int a, int b,
                  std::span<const double> next_values) {
  double v = game.reward(h, s, a, b);
  std::span<const double> row = game.transition_row(h, s, a, b);
  for (int next = 0; next < game.num_states(); ++next) v += row[next] * next_values[next];
  return v;
}

}  // namespace

ValueTable eval_product_policy(const MarkovGame& game, const MaxPolicy& mu, const MinPolicy& nu) {
  check_max_policy(game, mu);
  check_min_policy(game, nu);
  ValueTable table(game.horizon(), game.num_states());
  for (int h = game.horizon() - 1; h >= 0; --h) {
    std::span<const double> next_values = table.step_values(h + 1);
    for (int s = 0; s < game.num_states(); ++s) {
      double v = 0.0;
      for (int a = 0; a < game.num_max_actions(); ++a) {
        const double pa = mu.prob(h, s, a);
        if (pa == 0.0) continue;
        for (int b = 0; b < game.num_min_actions(); ++b) {
          const double pb = nu.prob(h, s, b);
          if (pb == 0.0) continue;
          v += pa * pb * cell_value(game, h, s, a, b, next_values);
        }
      }
      table.at(h, s) = v;
    }
  }
  return table;
}

BestResponse best_response_max(const MarkovGame& game, const MinPolicy& nu) {
  check_min_policy(game, nu);
  BestResponse out{Policy(game.horizon(), game.num_states(), game.num_max_actions()),
                   ValueTable(game.horizon(), game.num_states())};
  for (int h = game.horizon() - 1; h >= 0; --h) {
    std::span<const double> next_values = out.values.step_values(h + 1);
    for (int s = 0; s < game.num_states(); ++s) {
      double best = 0.0;
      int best_action = 0;
      for (int a = 0; a < game.num_max_actions(); ++a) {
        double v = 0.0;
        for (int b = 0; b < game.num_min_actions(); ++b) {
          const double pb = nu.prob(h, s, b);
          if (pb == 0.0) continue;
          v += pb * cell_value(game, h, s, a, b, next_values);
        }
        if (a == 0 || v > best) {  // ties keep the lowest action index
          best = v;
          best_action = a;
        }
      }
      out.values.at(h, s) = best;
      out.policy.prob(h, s, best_action) = 1.0;
    }
  }
  return out;
}

BestResponse best_response_min(const MarkovGame& game, const MaxPolicy& mu) {
  check_max_policy(game, mu);
  BestResponse out{Policy(game.horizon(), game.num_states(), game.num_min_actions()),
                   ValueTable(game.horizon(), game.num_states())};
  for (int h = game.horizon() - 1; h >= 0; --h) {
    std::span<const double> next_values = out.values.step_values(h + 1);
    for (int s = 0; s < game.num_states(); ++s) {
      double best = 0.0;
      int best_action = 0;
      for (int b = 0; b < game.num_min_actions(); ++b) {
        double v = 0.0;
        for (int a = 0; a < game.num_max_actions(); ++a) {
          const double pa = mu.prob(h, s, a);
          if (pa == 0.0) continue;
          v += pa * cell_value(game, h, s, a, b, next_values);
        }
        if (b == 0 || v < best) {
          best = v;
          best_action = b;
        }
      }
      out.values.at(h, s) = best;
      out.policy.prob(h, s, best_action) = 1.0;
    }
  }
  return out;
}

NeGapReport ne_gap(const MarkovGame& game, const MaxPolicy& mu, const MinPolicy& nu) {
  const ValueTable joint = eval_product_policy(game, mu, nu);
  const ValueTable max_br = best_response_max(game, nu).values;
  const ValueTable min_br = best_response_min(game, mu).values;

  NeGapReport report;
  const int S = game.num_states();
  report.per_state.resize(S);
  report.max_side_per_state.resize(S);
  report.min_side_per_state.resize(S);
  for (int s = 0; s < S; ++s) {
    report.max_side_per_state[s] = max_br.at(0, s) - joint.at(0, s);
    report.min_side_per_state[s] = joint.at(0, s) - min_br.at(0, s);
    report.per_state[s] = std::max(report.max_side_per_state[s], report.min_side_per_state[s]);
  }
  report.max_side = *std::max_element(report.max_side_per_state.begin(),
                                      report.max_side_per_state.end());
  report.min_side = *std::max_element(report.min_side_per_state.begin(),
                                      report.min_side_per_state.end());
  report.gap = std::max(report.max_side, report.min_side);
  return report;
}

ValueTable eval_joint_mixture(const MarkovGame& game, const JointMixturePolicy& mixture) {
  require(mixture.horizon == game.horizon() && mixture.num_states == game.num_states() &&
              mixture.num_max_actions == game.num_max_actions() &&
              mixture.num_min_actions == game.num_min_actions(),
          ErrorCode::kDimensionMismatch, "mixture dimensions do not match game");
  mixture.validate();

  ValueTable table(game.horizon(), game.num_states());
  for (int h = game.horizon() - 1; h >= 0; --h) {
    std::span<const double> next_values = table.step_values(h + 1);
    for (int s = 0; s < game.num_states(); ++s) {
      double v = 0.0;
      for (const MixtureComponent& c : mixture.steps[h]) {
        if (c.weight == 0.0) continue;
        const double* mu_row = c.max_rows.data() + static_cast<std::size_t>(s) * game.num_max_actions();
        const double* nu_row = c.min_rows.data() + static_cast<std::size_t>(s) * game.num_min_actions();
        double component = 0.0;
        for (int a = 0; a < game.num_max_actions(); ++a) {
          if (mu_row[a] == 0.0) continue;
          for (int b = 0; b < game.num_min_actions(); ++b) {
            if (nu_row[b] == 0.0) continue;
            component += mu_row[a] * nu_row[b] * cell_value(game, h, s, a, b, next_values);
          }
        }
        v += c.weight * component;
      }
      table.at(h, s) = v;
    }
  }
  return table;
}

NashSolution solve_nash_exact(const MarkovGame& game) {
  const int A = game.num_max_actions();
  const int B = game.num_min_actions();
  NashSolution out{Policy(game.horizon(), game.num_states(), A),
                   Policy(game.horizon(), game.num_states(), B),
                   ValueTable(game.horizon(), game.num_states())};
  std::vector<double> payoff(static_cast<std::size_t>(A) * B);
  for (int h = game.horizon() - 1; h >= 0; --h) {
    std::span<const double> next_values = out.values.step_values(h + 1);
    for (int s = 0; s < game.num_states(); ++s) {
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) {
          payoff[static_cast<std::size_t>(a) * B + b] = cell_value(game, h, s, a, b, next_values);
        }
      }
      MatrixGameSolution solution = solve_matrix_game(payoff, A, B);
      out.values.at(h, s) = solution.value;
      std::copy(solution.row_strategy.begin(), solution.row_strategy.end(),
                out.mu.mutable_row(h, s).begin());
      std::copy(solution.col_strategy.begin(), solution.col_strategy.end(),
                out.nu.mutable_row(h, s).begin());
    }
  }
  return out;
}

}  // namespace nashgym
