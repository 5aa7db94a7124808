#pragma once

#include <string>

#include "nashgym/game.hpp"
#include "nashgym/learner.hpp"
#include "nashgym/policy.hpp"

namespace nashgym {

// Shortest-width decimal with 17 significant digits; round-trips every finite
// double exactly. Used for all floats in game/result files and CSV output.
std::string format_double(double value);

// Game file schema (single line, field order fixed):
//   {"S":int,"A":int,"B":int,"H":int,"P":[h][s][a][b][s'],"r":[h][s][a][b]}
std::string game_to_json(const MarkovGame& game);
MarkovGame game_from_json(const std::string& text);
void save_game(const MarkovGame& game, const std::string& path);

// Validates, then renormalizes any transition row whose sum is within the
// stochasticity tolerance but measurably off 1 (beyond accumulated-rounding
// scale), so in-memory rows are exact distributions. Rows outside tolerance
// are a validation error.
MarkovGame load_game(const std::string& path);

std::string policy_to_json(const Policy& policy);
Policy policy_from_json_array(const std::string& text);

// Result schema:
//   {"muHat":[h][s][a],"nuHat":[h][s][b],"vBar":[h][s],"vUnder":[h][s],
//    "sampleCount":int,"config":{...}}
// where the value tables carry H+1 rows, the last being the zero terminal row.
std::string result_to_json(const LearnerResult& result);
void save_result(const LearnerResult& result, const std::string& path);

struct PolicyPair {
  MaxPolicy mu;
  MinPolicy nu;
};

// Reads {"muHat":..., "nuHat":...} from a result file or a hand-written
// policy-pair file.
PolicyPair load_policy_pair(const std::string& path);

}  // namespace nashgym
