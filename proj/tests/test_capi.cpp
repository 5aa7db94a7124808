#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "nashgym.h"

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("nashgym_capi_" + name)).string();
}

}  // namespace

TEST_CASE("status names and error reporting") {
  CHECK(std::string(nashgym_status_name(NASHGYM_OK)) == "ok");
  CHECK(std::string(nashgym_status_name(NASHGYM_ERR_VALIDATION)) == "validation");

  nashgym_game* game = nullptr;
  CHECK(nashgym_game_load("/definitely/missing/game.json", &game) == NASHGYM_ERR_IO);
  CHECK(std::string(nashgym_last_error()).find("game.json") != std::string::npos);
  CHECK(game == nullptr);

  CHECK(nashgym_game_matching_pennies(nullptr) == NASHGYM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("game lifecycle through the C surface") {
  nashgym_game* game = nullptr;
  REQUIRE(nashgym_game_random(3, 2, 2, 2, 42, &game) == NASHGYM_OK);
  CHECK(nashgym_game_validate(game) == NASHGYM_OK);

  int32_t S = 0, A = 0, B = 0, H = 0;
  nashgym_game_dims(game, &S, &A, &B, &H);
  CHECK(S == 3);
  CHECK(A == 2);
  CHECK(B == 2);
  CHECK(H == 2);

  const std::string path = temp_path("game.json");
  REQUIRE(nashgym_game_save(game, path.c_str()) == NASHGYM_OK);
  nashgym_game* loaded = nullptr;
  REQUIRE(nashgym_game_load(path.c_str(), &loaded) == NASHGYM_OK);
  for (int h = 0; h < H; ++h) {
    for (int s = 0; s < S; ++s) {
      CHECK(nashgym_game_reward(loaded, h, s, 0, 0) == nashgym_game_reward(game, h, s, 0, 0));
      CHECK(nashgym_game_transition(loaded, h, s, 1, 1, 0) ==
            nashgym_game_transition(game, h, s, 1, 1, 0));
    }
  }
  std::remove(path.c_str());
  nashgym_game_free(loaded);
  nashgym_game_free(game);
}

TEST_CASE("bad tensors are rejected with a validation status") {
  const double transitions[4] = {0.7, 0.2, 1.0, 0.0};  // first row sums to 0.9
  const double rewards[2] = {0.5, 0.5};
  nashgym_game* game = nullptr;
  REQUIRE(nashgym_game_create(2, 1, 1, 1, transitions, rewards, &game) == NASHGYM_OK);
  CHECK(nashgym_game_validate(game) == NASHGYM_ERR_VALIDATION);
  CHECK(std::string(nashgym_last_error()).find("row sum") != std::string::npos);
  nashgym_game_free(game);
}

TEST_CASE("exact solving and evaluation") {
  nashgym_game* game = nullptr;
  REQUIRE(nashgym_game_matching_pennies(&game) == NASHGYM_OK);

  nashgym_policy* mu = nullptr;
  nashgym_policy* nu = nullptr;
  double values[2] = {0.0, 0.0};
  REQUIRE(nashgym_solve_nash(game, &mu, &nu, values) == NASHGYM_OK);
  CHECK(std::abs(values[0] - 0.5) < 1e-6);
  CHECK(std::abs(nashgym_policy_prob(mu, 0, 0, 0) - 0.5) < 1e-4);

  double gap = 0.0, max_side = 0.0, min_side = 0.0, per_state = 0.0;
  REQUIRE(nashgym_ne_gap(game, mu, nu, &gap, &max_side, &min_side, &per_state) == NASHGYM_OK);
  CHECK(gap <= 1e-6);
  CHECK(per_state <= 1e-6);

  nashgym_policy* best = nullptr;
  double br_values[2] = {0.0, 0.0};
  REQUIRE(nashgym_best_response_max(game, nu, &best, br_values) == NASHGYM_OK);
  CHECK(std::abs(br_values[0] - 0.5) < 1e-6);

  double product_values[2] = {0.0, 0.0};
  REQUIRE(nashgym_eval_product(game, mu, nu, product_values) == NASHGYM_OK);
  CHECK(std::abs(product_values[0] - 0.5) < 1e-6);
  CHECK(product_values[1] == 0.0);

  nashgym_policy_free(best);
  nashgym_policy_free(mu);
  nashgym_policy_free(nu);
  nashgym_game_free(game);
}

TEST_CASE("policy creation validates rows") {
  const double bad[2] = {0.6, 0.6};
  nashgym_policy* policy = nullptr;
  CHECK(nashgym_policy_create(1, 1, 2, bad, &policy) == NASHGYM_ERR_VALIDATION);
  REQUIRE(nashgym_policy_create(1, 1, 2, nullptr, &policy) == NASHGYM_OK);
  CHECK(nashgym_policy_prob(policy, 0, 0, 1) == 0.5);
  double copied[2] = {0.0, 0.0};
  CHECK(nashgym_policy_copy_probs(policy, copied, 1) == NASHGYM_ERR_DIMENSION);
  CHECK(nashgym_policy_copy_probs(policy, copied, 2) == NASHGYM_OK);
  CHECK(copied[0] == 0.5);
  nashgym_policy_free(policy);
}

TEST_CASE("learner through the C surface") {
  nashgym_game* game = nullptr;
  REQUIRE(nashgym_game_random(2, 2, 2, 2, 5, &game) == NASHGYM_OK);

  nashgym_learner_config config;
  nashgym_learner_config_init(&config);
  CHECK(config.c_alpha == 24.0);
  CHECK(config.c_bonus == 0.5);
  CHECK(config.delta == 0.01);

  nashgym_learner_result* result = nullptr;
  CHECK(nashgym_learner_run(game, &config, &result) == NASHGYM_ERR_INVALID_ARGUMENT);  // K unset

  config.rounds = 128;
  config.seed = 3;
  REQUIRE(nashgym_learner_run(game, &config, &result) == NASHGYM_OK);
  CHECK(nashgym_result_sample_count(result) == 128 * 2 * 4 * 2);

  double values[6];
  REQUIRE(nashgym_result_value_upper(result, values) == NASHGYM_OK);
  CHECK(values[4] == 0.0);  // terminal row
  CHECK(values[5] == 0.0);

  // no trace was recorded, so replay is a precondition failure
  CHECK(nashgym_result_empirical_vstar_max(result, values) == NASHGYM_ERR_PRECONDITION);

  const std::string path = temp_path("result.json");
  REQUIRE(nashgym_result_save_json(result, path.c_str()) == NASHGYM_OK);
  nashgym_policy* mu = nullptr;
  nashgym_policy* nu = nullptr;
  REQUIRE(nashgym_load_policy_pair(path.c_str(), &mu, &nu) == NASHGYM_OK);
  CHECK(nashgym_policy_prob(mu, 0, 0, 0) ==
        nashgym_policy_prob(nashgym_result_mu(result), 0, 0, 0));
  std::remove(path.c_str());
  nashgym_policy_free(mu);
  nashgym_policy_free(nu);
  nashgym_result_free(result);

  config.record_trace = 1;
  REQUIRE(nashgym_learner_run(game, &config, &result) == NASHGYM_OK);
  REQUIRE(nashgym_result_empirical_vstar_max(result, values) == NASHGYM_OK);
  double lower[6];
  REQUIRE(nashgym_result_value_upper(result, lower) == NASHGYM_OK);
  nashgym_result_free(result);
  nashgym_game_free(game);
}

TEST_CASE("weighted FTRL through the C surface") {
  nashgym_schedule* schedule = nullptr;
  REQUIRE(nashgym_schedule_create(64, 24.0, 1.0, &schedule) == NASHGYM_OK);

  double alpha1 = 0.0;
  REQUIRE(nashgym_schedule_alpha(schedule, 1, &alpha1) == NASHGYM_OK);
  CHECK(alpha1 == 1.0);
  CHECK(nashgym_schedule_alpha(schedule, 65, &alpha1) == NASHGYM_ERR_INVALID_ARGUMENT);

  double eta1 = -1.0;
  REQUIRE(nashgym_schedule_eta(schedule, 1, &eta1) == NASHGYM_OK);
  CHECK(eta1 == 0.0);

  std::vector<double> weights(16);
  REQUIRE(nashgym_schedule_alpha_weights(schedule, 16, weights.data()) == NASHGYM_OK);
  double sum = 0.0;
  for (double w : weights) sum += w;
  CHECK(std::abs(sum - 1.0) < 1e-12);

  const int actions = 3;
  const int64_t n = 48;
  std::vector<double> losses(n * actions);
  for (std::size_t i = 0; i < losses.size(); ++i) losses[i] = 0.5 * ((i * 2654435761u) % 97) / 97.0;
  std::vector<double> predictions(n * actions);
  REQUIRE(nashgym_ftrl_run(schedule, losses.data(), n, actions, predictions.data()) ==
          NASHGYM_OK);
  for (int a = 0; a < actions; ++a) CHECK(predictions[a] == doctest::Approx(1.0 / 3));

  double regret = 0.0, total = 0.0, variance_term = 0.0, log_term = 0.0, norm_term = 0.0;
  REQUIRE(nashgym_ftrl_weighted_regret(schedule, losses.data(), predictions.data(), n, actions,
                                       &regret, nullptr) == NASHGYM_OK);
  REQUIRE(nashgym_ftrl_regret_bound(schedule, losses.data(), predictions.data(), n, actions,
                                    &total, &variance_term, &log_term, &norm_term) == NASHGYM_OK);
  CHECK(regret <= total + 1e-9);
  CHECK(total == doctest::Approx(variance_term + log_term + norm_term).epsilon(1e-12));

  // negative losses are rejected at the boundary
  losses[0] = -1.0;
  CHECK(nashgym_ftrl_run(schedule, losses.data(), n, actions, predictions.data()) ==
        NASHGYM_ERR_INVALID_ARGUMENT);

  double pi[3];
  const double cumulative[3] = {0.0, 1.0, 2.0};
  REQUIRE(nashgym_exp_weights(cumulative, 3, 0.0, pi) == NASHGYM_OK);
  CHECK(pi[0] == doctest::Approx(1.0 / 3));
  nashgym_schedule_free(schedule);

  CHECK(nashgym_schedule_create(1, 24.0, 1.0, &schedule) == NASHGYM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("lower bound construction through the C surface") {
  // two-state deterministic chain, rewards favoring action 1
  const double mdp_transitions[8] = {1, 0, 0, 1, 1, 0, 0, 1};  // [h=1][s=2][a=2][s'=2]
  const double mdp_rewards[4] = {0.2, 0.8, 0.1, 0.9};
  nashgym_game* game = nullptr;
  REQUIRE(nashgym_game_lower_bound(2, 2, 1, 3, mdp_transitions, mdp_rewards, &game) == NASHGYM_OK);
  int32_t B = 0;
  nashgym_game_dims(game, nullptr, nullptr, &B, nullptr);
  CHECK(B == 3);
  for (int b = 0; b < 3; ++b) {
    CHECK(nashgym_game_reward(game, 0, 0, 1, b) == 0.8);
    CHECK(nashgym_game_transition(game, 0, 1, 0, b, 0) == 1.0);
  }
  nashgym_game_free(game);
}
