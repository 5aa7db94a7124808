#include "nashgym/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "nashgym/error.hpp"

namespace nashgym {

namespace {

using nlohmann::json;

json parse(const std::string& text) {
  json parsed = json::parse(text, nullptr, false);
  require(!parsed.is_discarded(), ErrorCode::kSchema, "malformed JSON");
  return parsed;
}

const json& field(const json& object, const char* name) {
  require(object.is_object(), ErrorCode::kSchema, "expected a JSON object");
  auto it = object.find(name);
  require(it != object.end(), ErrorCode::kSchema, std::string("missing field \"") + name + "\"");
  return *it;
}

int int_field(const json& object, const char* name) {
  const json& v = field(object, name);
  require(v.is_number_integer(), ErrorCode::kSchema,
          std::string("field \"") + name + "\" must be an integer");
  return v.get<int>();
}

// Flattens an arbitrarily nested numeric array, checking the shape against
// `dims` level by level.
void flatten(const json& node, std::span<const int> dims, std::vector<double>& out,
             const char* name) {
  if (dims.empty()) {
    require(node.is_number(), ErrorCode::kSchema,
            std::string("field \"") + name + "\" has a non-numeric leaf");
    out.push_back(node.get<double>());
    return;
  }
  require(node.is_array() && static_cast<int>(node.size()) == dims[0], ErrorCode::kSchema,
          std::string("field \"") + name + "\" has wrong shape");
  for (const json& child : node) flatten(child, dims.subspan(1), out, name);
}

// Emits the flat tensor as nested JSON arrays with the given dimensions.
void emit_tensor(std::string& out, const double*& cursor, std::span<const int> dims) {
  if (dims.empty()) {
    out += format_double(*cursor++);
    return;
  }
  out += '[';
  for (int i = 0; i < dims[0]; ++i) {
    if (i > 0) out += ',';
    emit_tensor(out, cursor, dims.subspan(1));
  }
  out += ']';
}

std::string tensor_to_json(const std::vector<double>& values, std::span<const int> dims) {
  std::string out;
  const double* cursor = values.data();
  emit_tensor(out, cursor, dims);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::kIo, "cannot open " + path + " for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  require(!in.bad(), ErrorCode::kIo, "read failure on " + path);
  return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), ErrorCode::kIo, "cannot open " + path + " for writing");
  out << text;
  out.flush();
  require(out.good(), ErrorCode::kIo, "write failure on " + path);
}

Policy policy_from_json_node(const json& node, const char* name) {
  require(node.is_array() && !node.empty() && node[0].is_array() && !node[0].empty() &&
              node[0][0].is_array() && !node[0][0].empty(),
          ErrorCode::kSchema, std::string("field \"") + name + "\" must be [h][s][action]");
  const int horizon = static_cast<int>(node.size());
  const int states = static_cast<int>(node[0].size());
  const int actions = static_cast<int>(node[0][0].size());
  const int dims[] = {horizon, states, actions};
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(horizon) * states * actions);
  flatten(node, dims, flat, name);
  Policy policy(horizon, states, actions);
  std::copy(flat.begin(), flat.end(), policy.mutable_row(0, 0).data());
  policy.validate();
  return policy;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string game_to_json(const MarkovGame& game) {
  const int S = game.num_states();
  const int A = game.num_max_actions();
  const int B = game.num_min_actions();
  const int H = game.horizon();
  const int p_dims[] = {H, S, A, B, S};
  const int r_dims[] = {H, S, A, B};
  std::string out = "{\"S\":" + std::to_string(S) + ",\"A\":" + std::to_string(A) +
                    ",\"B\":" + std::to_string(B) + ",\"H\":" + std::to_string(H) + ",\"P\":";
  out += tensor_to_json(game.transitions(), p_dims);
  out += ",\"r\":";
  out += tensor_to_json(game.rewards(), r_dims);
  out += "}\n";
  return out;
}

MarkovGame game_from_json(const std::string& text) {
  const json parsed = parse(text);
  const int S = int_field(parsed, "S");
  const int A = int_field(parsed, "A");
  const int B = int_field(parsed, "B");
  const int H = int_field(parsed, "H");
  require(S >= 1 && A >= 1 && B >= 1 && H >= 1, ErrorCode::kSchema,
          "game dimensions must be >= 1");
  const int p_dims[] = {H, S, A, B, S};
  const int r_dims[] = {H, S, A, B};
  std::vector<double> transitions;
  std::vector<double> rewards;
  flatten(field(parsed, "P"), p_dims, transitions, "P");
  flatten(field(parsed, "r"), r_dims, rewards, "r");
  return MarkovGame(S, A, B, H, std::move(transitions), std::move(rewards));
}

void save_game(const MarkovGame& game, const std::string& path) {
  write_file(path, game_to_json(game));
}

MarkovGame load_game(const std::string& path) {
  MarkovGame game = game_from_json(read_file(path));
  validate_game(game);

  // Rows whose sum is inside the stochasticity tolerance but off 1 beyond
  // accumulated-rounding scale are renormalized, so samplers downstream see
  // exact distributions; rows already normalized are left untouched and the
  // save/load round trip stays bit-exact.
  constexpr double kRenormThreshold = 1e-13;
  std::vector<double> transitions = game.transitions();
  const int S = game.num_states();
  const std::size_t rows = transitions.size() / S;
  bool changed = false;
  for (std::size_t row = 0; row < rows; ++row) {
    double* begin = transitions.data() + row * S;
    double sum = 0.0;
    for (int i = 0; i < S; ++i) sum += begin[i];
    if (std::abs(sum - 1.0) > kRenormThreshold) {
      for (int i = 0; i < S; ++i) begin[i] /= sum;
      changed = true;
    }
  }
  if (!changed) return game;
  return MarkovGame(S, game.num_max_actions(), game.num_min_actions(), game.horizon(),
                    std::move(transitions), game.rewards());
}

std::string policy_to_json(const Policy& policy) {
  const int dims[] = {policy.horizon(), policy.num_states(), policy.num_actions()};
  return tensor_to_json(policy.probs(), dims);
}

Policy policy_from_json_array(const std::string& text) {
  return policy_from_json_node(parse(text), "policy");
}

std::string result_to_json(const LearnerResult& result) {
  const int S = result.mu_hat.num_states();
  const int H = result.mu_hat.horizon();
  const int v_dims[] = {H + 1, S};
  std::string out = "{\"muHat\":" + policy_to_json(result.mu_hat) +
                    ",\"nuHat\":" + policy_to_json(result.nu_hat) + ",\"vBar\":";
  out += tensor_to_json(result.value_upper.values(), v_dims);
  out += ",\"vUnder\":";
  out += tensor_to_json(result.value_lower.values(), v_dims);
  out += ",\"sampleCount\":" + std::to_string(result.sample_count);
  out += ",\"config\":{\"K\":" + std::to_string(result.config.rounds) +
         ",\"cAlpha\":" + format_double(result.config.c_alpha) +
         ",\"cB\":" + format_double(result.config.c_bonus) +
         ",\"delta\":" + format_double(result.config.delta) +
         ",\"seed\":" + std::to_string(result.config.seed) +
         ",\"recordTrace\":" + (result.config.record_trace ? "true" : "false") + "}}\n";
  return out;
}

void save_result(const LearnerResult& result, const std::string& path) {
  write_file(path, result_to_json(result));
}

PolicyPair load_policy_pair(const std::string& path) {
  const json parsed = parse(read_file(path));
  return PolicyPair{policy_from_json_node(field(parsed, "muHat"), "muHat"),
                    policy_from_json_node(field(parsed, "nuHat"), "nuHat")};
}

}  // namespace nashgym
