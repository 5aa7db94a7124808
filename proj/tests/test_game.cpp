#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "nashgym/error.hpp"
#include "nashgym/game.hpp"
#include "nashgym/matrix_game.hpp"
#include "nashgym/serialization.hpp"
#include "oracles.hpp"

using namespace nashgym;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("nashgym_test_" + name)).string();
}

MarkovGame broken_row_game() {
  MarkovGame game = matching_pennies();
  std::vector<double> transitions = game.transitions();
  transitions[game.transition_index(0, 0, 1, 0, 0)] = 0.9;
  return MarkovGame(1, 2, 2, 1, std::move(transitions), game.rewards());
}

}  // namespace

TEST_CASE("matching pennies fixture") {
  MarkovGame game = matching_pennies();
  CHECK_NOTHROW(validate_game(game));
  CHECK(game.reward(0, 0, 0, 0) == 1.0);
  CHECK(game.reward(0, 0, 0, 1) == 0.0);
  CHECK(game.reward(0, 0, 1, 1) == 1.0);

  // 2x2 closed form: with payoff [[1,0],[0,1]] the mixed value is
  // (ad - bc) / (a + d - b - c) = 1/2 at uniform play.
  MatrixGameSolution solution = solve_matrix_game(game.rewards(), 2, 2);
  CHECK(solution.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(solution.row_strategy[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(solution.col_strategy[0] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("validate_game reports the first offending cell") {
  const MarkovGame bad_row = broken_row_game();
  try {
    validate_game(bad_row);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidation);
    CHECK(std::string(e.what()).find("row sum") != std::string::npos);
    CHECK(std::string(e.what()).find("(h=0,s=0,a=1,b=0)") != std::string::npos);
  }

  MarkovGame game = matching_pennies();
  std::vector<double> rewards = game.rewards();
  rewards[game.reward_index(0, 0, 0, 1)] = 1.5;
  const MarkovGame bad_reward(1, 2, 2, 1, game.transitions(), std::move(rewards));
  try {
    validate_game(bad_reward);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidation);
    CHECK(std::string(e.what()).find("reward") != std::string::npos);
    CHECK(std::string(e.what()).find("(h=0,s=0,a=0,b=1)") != std::string::npos);
  }
}

TEST_CASE("random_game determinism and degenerate sizes") {
  const MarkovGame tiny = random_game(1, 1, 1, 1, 0);
  CHECK(tiny.transition(0, 0, 0, 0, 0) == 1.0);  // single state forces a self loop

  const MarkovGame g1 = random_game(4, 3, 3, 3, 7);
  const MarkovGame g2 = random_game(4, 3, 3, 3, 7);
  CHECK(g1 == g2);
  CHECK_NOTHROW(validate_game(g1));
  CHECK(random_game(4, 3, 3, 3, 8).transitions() != g1.transitions());
}

TEST_CASE("generator outputs validate across many seeds") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CHECK_NOTHROW(validate_game(random_game(3, 2, 2, 2, seed)));
  }
  CHECK_NOTHROW(validate_game(matching_pennies()));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    CHECK_NOTHROW(validate_game(lower_bound_game(oracle::random_mdp(3, 2, 2, seed), 3)));
  }
}

TEST_CASE("lower_bound_game tiles the MDP across min actions") {
  const SingleAgentMdp mdp = oracle::random_mdp(3, 2, 2, 11);

  const MarkovGame embedded = lower_bound_game(mdp, 1);
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < 3; ++s) {
      for (int a = 0; a < 2; ++a) {
        CHECK(embedded.reward(h, s, a, 0) == mdp.rewards[mdp.reward_index(h, s, a)]);
        for (int next = 0; next < 3; ++next) {
          CHECK(embedded.transition(h, s, a, 0, next) ==
                mdp.transitions[mdp.transition_index(h, s, a, next)]);
        }
      }
    }
  }

  const MarkovGame wide = lower_bound_game(mdp, 3);
  for (int h = 0; h < 2; ++h) {
    for (int s = 0; s < 3; ++s) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 1; b < 3; ++b) {
          CHECK(wide.reward(h, s, a, b) == wide.reward(h, s, a, 0));
          for (int next = 0; next < 3; ++next) {
            CHECK(wide.transition(h, s, a, b, next) == wide.transition(h, s, a, 0, next));
          }
        }
      }
    }
  }
}

TEST_CASE("game serialization round trips exactly") {
  const MarkovGame game = random_game(2, 2, 2, 2, 1);
  const std::string path = temp_path("roundtrip.json");
  save_game(game, path);
  const MarkovGame loaded = load_game(path);
  CHECK(loaded == game);

  // file -> game -> file is byte identical for files we emitted
  const std::string path2 = temp_path("roundtrip2.json");
  save_game(loaded, path2);
  std::ifstream f1(path), f2(path2);
  std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
  std::remove(path.c_str());
  std::remove(path2.c_str());
}

TEST_CASE("load_game schema and validation failures") {
  const std::string path = temp_path("bad.json");

  std::ofstream(path) << "{\"S\":1,\"A\":1,\"B\":1,\"P\":[[[[[1.0]]]]],\"r\":[[[[0.0]]]]}";
  CHECK_THROWS_WITH_AS(load_game(path), doctest::Contains("missing field \"H\""), Error);

  std::ofstream(path) << "not json at all";
  CHECK_THROWS_AS(load_game(path), Error);

  std::ofstream(path)
      << "{\"S\":2,\"A\":1,\"B\":1,\"H\":1,\"P\":[[[[[0.5,0.4]]],[[[0.5,0.5]]]]],"
         "\"r\":[[[[0.0]],[[0.0]]]]}";
  try {
    load_game(path);
    FAIL("expected a validation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kValidation);
  }

  CHECK_THROWS_AS(load_game(temp_path("does_not_exist.json")), Error);
  std::remove(path.c_str());
}

TEST_CASE("load_game renormalizes rows that are off beyond rounding scale") {
  const std::string path = temp_path("renorm.json");
  std::ofstream(path) << "{\"S\":2,\"A\":1,\"B\":1,\"H\":1,"
                         "\"P\":[[[[[0.5,0.49999999989999999]]],[[[0.25,0.75]]]]],"
                         "\"r\":[[[[0.0]],[[0.0]]]]}";
  const MarkovGame game = load_game(path);
  const double sum = game.transition(0, 0, 0, 0, 0) + game.transition(0, 0, 0, 0, 1);
  CHECK(std::abs(sum - 1.0) < 1e-15);
  CHECK(game.transition(0, 0, 0, 0, 0) > 0.5);  // scaled up by the renormalization
  CHECK(game.transition(0, 1, 0, 0, 0) == 0.25);  // already-exact row untouched
  std::remove(path.c_str());
}

TEST_CASE("policy validation") {
  Policy uniform = Policy::uniform(2, 2, 3);
  CHECK_NOTHROW(uniform.validate());
  uniform.prob(1, 0, 0) = 0.9;
  CHECK_THROWS_AS(uniform.validate(), Error);
  Policy negative = Policy::uniform(1, 1, 2);
  negative.prob(0, 0, 0) = -0.5;
  negative.prob(0, 0, 1) = 1.5;
  CHECK_THROWS_AS(negative.validate(), Error);
}
