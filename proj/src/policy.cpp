#include "nashgym/policy.hpp"

#include <cmath>
#include <string>

#include "nashgym/error.hpp"

namespace nashgym {

namespace {
constexpr double kRowSumTolerance = 1e-9;

void check_distribution(std::span<const double> row, const std::string& what) {
  double sum = 0.0;
  for (double p : row) {
    require(p >= 0.0, ErrorCode::kValidation, what + ": negative probability");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= kRowSumTolerance, ErrorCode::kValidation,
          what + ": row sums to " + std::to_string(sum));
}
}  // namespace

Policy::Policy(int horizon, int num_states, int num_actions)
    : horizon_(horizon), num_states_(num_states), num_actions_(num_actions),
      probs_(static_cast<std::size_t>(horizon) * num_states * num_actions, 0.0) {
  require(horizon >= 1 && num_states >= 1 && num_actions >= 1, ErrorCode::kInvalidArgument,
          "Policy: all dimensions must be >= 1");
}

Policy Policy::uniform(int horizon, int num_states, int num_actions) {
  Policy p(horizon, num_states, num_actions);
  const double v = 1.0 / num_actions;
  for (double& x : p.probs_) x = v;
  return p;
}

void Policy::validate() const {
  for (int h = 0; h < horizon_; ++h) {
    for (int s = 0; s < num_states_; ++s) {
      check_distribution(row(h, s),
                         "policy row (h=" + std::to_string(h) + ",s=" + std::to_string(s) + ")");
    }
  }
}

void JointMixturePolicy::validate() const {
  require(static_cast<int>(steps.size()) == horizon, ErrorCode::kDimensionMismatch,
          "JointMixturePolicy: steps size does not match horizon");
  for (int h = 0; h < horizon; ++h) {
    double weight_sum = 0.0;
    for (const MixtureComponent& c : steps[h]) {
      require(c.weight >= 0.0, ErrorCode::kValidation, "JointMixturePolicy: negative weight");
      weight_sum += c.weight;
      require(c.max_rows.size() == static_cast<std::size_t>(num_states) * num_max_actions &&
                  c.min_rows.size() == static_cast<std::size_t>(num_states) * num_min_actions,
              ErrorCode::kDimensionMismatch, "JointMixturePolicy: component row sizes");
      for (int s = 0; s < num_states; ++s) {
        check_distribution({c.max_rows.data() + static_cast<std::size_t>(s) * num_max_actions,
                            static_cast<std::size_t>(num_max_actions)},
                           "mixture max row");
        check_distribution({c.min_rows.data() + static_cast<std::size_t>(s) * num_min_actions,
                            static_cast<std::size_t>(num_min_actions)},
                           "mixture min row");
      }
    }
    require(std::abs(weight_sum - 1.0) <= kRowSumTolerance, ErrorCode::kValidation,
            "JointMixturePolicy: weights at step " + std::to_string(h) + " sum to " +
                std::to_string(weight_sum));
  }
}

}  // namespace nashgym
