// Acceptance suite: one check per release criterion, each printing a single
// PASS/FAIL line. Run everything with no arguments or a single criterion with
// --criterion N. Exits nonzero if any selected criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

#include "nashgym/exact_eval.hpp"
#include "nashgym/ftrl.hpp"
#include "nashgym/game.hpp"
#include "nashgym/learner.hpp"
#include "nashgym/rng.hpp"
#include "oracles.hpp"

using namespace nashgym;

namespace {

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::string&)> run;
};

double lower_median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values[(values.size() - 1) / 2];
}

// criterion 1: the deterministic FTRL regret bound over randomized instances
bool check_ftrl_bound(std::string& detail) {
  int violations = 0;
  double worst_margin = 1e300;
  for (int instance = 0; instance < 200; ++instance) {
    KeyedStream stream(mix64(instance + 0xACCE9Dull));
    const int actions = 2 + static_cast<int>(stream.next_u64() % 9);       // 2..10
    const std::int64_t n = 10 + static_cast<std::int64_t>(stream.next_u64() % 491);  // 10..500
    const double horizon = 1.0 + static_cast<double>(stream.next_u64() % 10);        // 1..10
    LossSequence losses(actions);
    std::vector<double> row(actions);
    for (std::int64_t k = 0; k < n; ++k) {
      for (double& x : row) x = horizon * stream.next_unit();
      losses.append(row);
    }
    const WeightSchedule schedule(n, 24.0, horizon);
    const PredictionSequence predictions = run_ftrl(losses, schedule);
    const double regret = weighted_regret(losses, predictions, schedule, n).regret;
    const double bound = regret_bound_rhs(losses, predictions, schedule, n).total;
    worst_margin = std::min(worst_margin, bound - regret);
    if (regret > bound + 1e-9) ++violations;
  }
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer),
                "200 instances, %d violations, smallest bound margin %.3g", violations,
                worst_margin);
  detail = buffer;
  return violations == 0;
}

// criterion 2: weight-sequence identities at K in {4, 64, 1024}
bool check_weight_identities(std::string& detail) {
  for (const std::int64_t rounds : {4, 64, 1024}) {
    const WeightSchedule schedule(rounds, 24.0, 1.0);
    const double log_rounds = std::log(static_cast<double>(rounds));
    for (std::int64_t k = 1; k <= rounds; ++k) {
      const std::vector<double> weights = schedule.alpha_weights(k);
      double sum = 0.0;
      double top = 0.0;
      for (double w : weights) {
        sum += w;
        top = std::max(top, w);
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        detail = "sum of alpha_i^k deviates from 1 at K=" + std::to_string(rounds) +
                 ", k=" + std::to_string(k);
        return false;
      }
      if (top > 2.0 * 24.0 * log_rounds / static_cast<double>(k) + 1e-12) {
        detail = "max alpha_i^k above 2 c_alpha ln K / k at K=" + std::to_string(rounds) +
                 ", k=" + std::to_string(k);
        return false;
      }
      if (static_cast<double>(k) >= 24.0 * log_rounds + 1.0) {
        const double tail_cap = std::pow(static_cast<double>(rounds), -6.0);
        for (std::int64_t i = 1; i <= k / 2; ++i) {
          if (weights[i - 1] > tail_cap) {
            detail = "early-weight tail bound fails at K=" + std::to_string(rounds) +
                     ", k=" + std::to_string(k) + ", i=" + std::to_string(i);
            return false;
          }
        }
      }
    }
  }
  detail = "K in {4, 64, 1024}, all identities hold";
  return true;
}

// criterion 3: best-response DP equals exhaustive deterministic-policy search
bool check_oracle_equivalence(std::string& detail) {
  double worst = 0.0;
  for (std::uint64_t instance = 0; instance < 50; ++instance) {
    KeyedStream stream(mix64(instance + 0x0AC1Eull));
    const int S = 1 + static_cast<int>(stream.next_u64() % 3);
    const int A = 1 + static_cast<int>(stream.next_u64() % 2);
    const int B = 1 + static_cast<int>(stream.next_u64() % 2);
    const int H = 1 + static_cast<int>(stream.next_u64() % 3);
    const MarkovGame game = random_game(S, A, B, H, instance * 31 + 5);
    const Policy nu = oracle::random_policy(H, S, B, instance * 7 + 1);
    const Policy mu = oracle::random_policy(H, S, A, instance * 7 + 2);

    const auto best_max = oracle::enumerate_best_max(game, nu);
    const ValueTable dp_max = best_response_max(game, nu).values;
    const auto best_min = oracle::enumerate_best_min(game, mu);
    const ValueTable dp_min = best_response_min(game, mu).values;
    for (int h = 0; h < H; ++h) {
      for (int s = 0; s < S; ++s) {
        worst = std::max(worst, std::abs(dp_max.at(h, s) - best_max[h][s]));
        worst = std::max(worst, std::abs(dp_min.at(h, s) - best_min[h][s]));
      }
    }
  }
  char buffer[120];
  std::snprintf(buffer, sizeof(buffer), "50 games, max |DP - enumeration| = %.3g", worst);
  detail = buffer;
  return worst <= 1e-10;
}

// criterion 4: exact solver on matching pennies and random games
bool check_exact_solver(std::string& detail) {
  const MarkovGame pennies = matching_pennies();
  const NashSolution solution = solve_nash_exact(pennies);
  if (std::abs(solution.values.at(0, 0) - 0.5) > 1e-6) {
    detail = "matching pennies value off";
    return false;
  }
  for (double p : {solution.mu.prob(0, 0, 0), solution.mu.prob(0, 0, 1),
                   solution.nu.prob(0, 0, 0), solution.nu.prob(0, 0, 1)}) {
    if (std::abs(p - 0.5) > 1e-4) {
      detail = "matching pennies marginals off uniform";
      return false;
    }
  }
  double worst_gap = 0.0;
  for (std::uint64_t instance = 0; instance < 20; ++instance) {
    KeyedStream stream(mix64(instance + 0x501FEull));
    const int S = 2 + static_cast<int>(stream.next_u64() % 3);
    const int A = 2 + static_cast<int>(stream.next_u64() % 4);
    const int B = 2 + static_cast<int>(stream.next_u64() % 4);
    const int H = 1 + static_cast<int>(stream.next_u64() % 3);
    const MarkovGame game = random_game(S, A, B, H, instance * 13 + 3);
    const NashSolution nash = solve_nash_exact(game);
    worst_gap = std::max(worst_gap, ne_gap(game, nash.mu, nash.nu).gap);
  }
  char buffer[120];
  std::snprintf(buffer, sizeof(buffer), "pennies exact, worst solver gap %.3g over 20 games",
                worst_gap);
  detail = buffer;
  return worst_gap <= 1e-6;
}

bool sample_count_ok(const MarkovGame& game, const LearnerResult& result,
                     std::int64_t rounds) {
  return result.sample_count ==
         rounds * game.num_states() *
             (game.num_max_actions() + game.num_min_actions()) * game.horizon();
}

// criterion 5: learner gap medians shrink with K (stand-in for the rate claim)
bool check_learner_convergence(std::string& detail) {
  const std::vector<std::int64_t> grid = {64, 256, 1024, 4096};
  bool accounting_ok = true;
  std::string failure;
  double pennies_final = 0.0;
  for (const auto& [name, game] :
       {std::pair<const char*, MarkovGame>{"matching-pennies", matching_pennies()},
        std::pair<const char*, MarkovGame>{"random-fixture", random_game(4, 3, 3, 3, 7)}}) {
    std::vector<double> medians;
    for (const std::int64_t rounds : grid) {
      std::vector<double> gaps;
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        LearnerConfig config;
        config.rounds = rounds;
        config.seed = seed;
        const LearnerResult result = run_learner(game, config);
        accounting_ok = accounting_ok && sample_count_ok(game, result, rounds);
        gaps.push_back(ne_gap(game, result.mu_hat, result.nu_hat).gap);
      }
      medians.push_back(lower_median(gaps));
    }
    for (std::size_t i = 1; i < medians.size(); ++i) {
      if (medians[i] > medians[i - 1]) {
        failure = std::string(name) + ": median gap increased from K=" +
                  std::to_string(grid[i - 1]);
      }
    }
    if (medians.back() > 0.5 * medians.front()) {
      failure = std::string(name) + ": gap at K=4096 above half the K=64 gap";
    }
    if (std::string(name) == "matching-pennies") pennies_final = medians.back();
    char buffer[160];
    std::snprintf(buffer, sizeof(buffer), "%s medians %.3f/%.3f/%.3f/%.3f  ", name, medians[0],
                  medians[1], medians[2], medians[3]);
    detail += buffer;
  }
  if (pennies_final > 0.1) failure = "matching pennies K=4096 median above 0.1";
  if (!accounting_ok) failure = "sample accounting mismatch";
  if (!failure.empty()) detail += "-- " + failure;
  return failure.empty();
}

// criterion 6: trace replay confirms optimism of the default bonus
bool check_optimism(std::string& detail) {
  const MarkovGame fixture = random_game(4, 3, 3, 3, 7);
  int holds = 0;
  bool accounting_ok = true;
  const int runs = 20;
  for (int seed = 0; seed < runs; ++seed) {
    LearnerConfig config;
    config.rounds = 1024;
    config.seed = static_cast<std::uint64_t>(seed);
    config.record_trace = true;
    const LearnerResult result = run_learner(fixture, config);
    accounting_ok = accounting_ok && sample_count_ok(fixture, result, config.rounds);
    const ValueTable replay = empirical_vstar_max(*result.trace);
    bool optimistic = true;
    for (int h = 0; h < fixture.horizon() && optimistic; ++h) {
      for (int s = 0; s < fixture.num_states(); ++s) {
        if (result.value_upper.at(h, s) < replay.at(h, s) - 1e-12) {
          optimistic = false;
          break;
        }
      }
    }
    holds += optimistic;
  }
  char buffer[120];
  std::snprintf(buffer, sizeof(buffer), "optimism held in %d/%d traced runs (need >= 19)", holds,
                runs);
  detail = buffer;
  return holds >= 19 && accounting_ok;
}

// criterion 7: exact generative-model call accounting across shapes
bool check_sample_accounting(std::string& detail) {
  struct Shape {
    int S, A, B, H;
    std::int64_t K;
  };
  for (const Shape& shape : std::vector<Shape>{{1, 2, 2, 1, 64},
                                               {4, 3, 3, 3, 32},
                                               {2, 1, 4, 2, 100},
                                               {3, 5, 2, 4, 16},
                                               {5, 2, 2, 2, 250}}) {
    const MarkovGame game = random_game(shape.S, shape.A, shape.B, shape.H,
                                        static_cast<std::uint64_t>(shape.K));
    LearnerConfig config;
    config.rounds = shape.K;
    config.seed = 9;
    const LearnerResult result = run_learner(game, config);
    if (!sample_count_ok(game, result, shape.K)) {
      detail = "mismatch at S=" + std::to_string(shape.S) + " A=" + std::to_string(shape.A) +
               " B=" + std::to_string(shape.B) + " H=" + std::to_string(shape.H);
      return false;
    }
  }
  detail = "every run consumed exactly K*S*(A+B)*H calls";
  return true;
}

// criterion 8: the augmented game's gap equals single-agent suboptimality
bool check_lower_bound_construction(std::string& detail) {
  const SingleAgentMdp mdp = oracle::random_mdp(3, 2, 2, 77);
  const MarkovGame game = lower_bound_game(mdp, 3);
  const auto optimal = oracle::mdp_optimal_values(mdp);
  double worst = 0.0;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const Policy mu = oracle::random_policy(2, 3, 2, trial + 500);
    const Policy nu = oracle::random_policy(2, 3, 3, trial + 900);
    const auto mu_value = oracle::mdp_policy_values(mdp, mu);
    double suboptimality = 0.0;
    for (int s = 0; s < 3; ++s) {
      suboptimality = std::max(suboptimality, optimal[0][s] - mu_value[0][s]);
    }
    const double gap = ne_gap(game, mu, nu).gap;
    worst = std::max(worst, std::abs(gap - suboptimality));
  }
  char buffer[120];
  std::snprintf(buffer, sizeof(buffer), "10 policies, max |gap - suboptimality| = %.3g", worst);
  detail = buffer;
  return worst <= 1e-10;
}

// criterion 9: entrywise lower bound on the auxiliary FTRL iterate
bool check_pi_minus_bound(std::string& detail) {
  int small_regime = 0;
  int large_regime = 0;
  double worst = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    KeyedStream stream(mix64(trial + 0x9174Dull));
    const int actions = 2 + static_cast<int>(stream.next_u64() % 7);
    const double alpha_k = 0.05 + 0.9 * stream.next_unit();
    const double eta_k = 0.02 + stream.next_unit();
    const double hat_eta = eta_k / (1.0 - alpha_k);
    const double sup = trial % 2 == 0 ? 0.25 / (hat_eta * alpha_k) : 2.0 / (hat_eta * alpha_k);
    std::vector<double> prev(actions);
    std::vector<double> loss(actions);
    for (double& x : prev) x = stream.next_unit();
    for (double& x : loss) x = sup * stream.next_unit();
    loss[0] = sup;  // pins the intended indicator regime

    const std::vector<double> pi_k = exp_weights(prev, eta_k);
    std::vector<double> cumulative(actions);
    for (int i = 0; i < actions; ++i) cumulative[i] = (1.0 - alpha_k) * prev[i] + alpha_k * loss[i];
    const std::vector<double> aux = pi_minus(cumulative, hat_eta);

    const double mean = expectation_under(pi_k, loss);
    const double var = variance_under(pi_k, loss);
    const bool big = hat_eta * alpha_k * sup > 1.0 / 3.0;
    (big ? large_regime : small_regime) += 1;
    for (int i = 0; i < actions; ++i) {
      const double floor =
          big ? (1.0 - hat_eta * alpha_k * loss[i]) * pi_k[i]
              : (1.0 - hat_eta * alpha_k * (loss[i] - mean) -
                 2.0 * hat_eta * hat_eta * alpha_k * alpha_k * var) *
                    pi_k[i];
      worst = std::min(worst, aux[i] - floor);
    }
  }
  char buffer[160];
  std::snprintf(buffer, sizeof(buffer),
                "100 instances (%d small / %d large regime), min slack %.3g", small_regime,
                large_regime, worst);
  detail = buffer;
  return worst >= -1e-9 && small_regime > 0 && large_regime > 0;
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[i + 1]);
      ++i;
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria = {
      {1, "FTRL deterministic regret bound", check_ftrl_bound},
      {2, "learning-rate weight identities", check_weight_identities},
      {3, "best-response DP vs exhaustive enumeration", check_oracle_equivalence},
      {4, "exact Nash solver", check_exact_solver},
      {5, "learner gap shrinks with K", check_learner_convergence},
      {6, "bonus keeps value estimates optimistic", check_optimism},
      {7, "generative-model sample accounting", check_sample_accounting},
      {8, "lower-bound game construction", check_lower_bound_construction},
      {9, "auxiliary-iterate entrywise lower bound", check_pi_minus_bound},
  };

  int failures = 0;
  int executed = 0;
  for (const Criterion& criterion : criteria) {
    if (selected != 0 && criterion.id != selected) continue;
    ++executed;
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.name, detail.c_str());
    std::fflush(stdout);
    failures += !ok;
  }
  if (executed == 0) {
    std::fprintf(stderr, "no criterion with id %d\n", selected);
    return 2;
  }
  if (selected == 0) {
    std::printf("acceptance: %d/%d criteria passed\n", executed - failures, executed);
  }
  return failures == 0 ? 0 : 1;
}
