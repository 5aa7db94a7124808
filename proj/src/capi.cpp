#include "nashgym.h"

#include <cstring>
#include <string>
#include <vector>

#include "nashgym/error.hpp"
#include "nashgym/exact_eval.hpp"
#include "nashgym/ftrl.hpp"
#include "nashgym/game.hpp"
#include "nashgym/learner.hpp"
#include "nashgym/policy.hpp"
#include "nashgym/serialization.hpp"

struct nashgym_game {
  nashgym::MarkovGame game;
};

struct nashgym_policy {
  nashgym::Policy policy;
};

struct nashgym_learner_result {
  nashgym::LearnerResult result;
  nashgym_policy mu;
  nashgym_policy nu;
};

struct nashgym_schedule {
  nashgym::WeightSchedule schedule;
};

namespace {

thread_local std::string g_last_error;

nashgym_status status_of(nashgym::ErrorCode code) {
  using nashgym::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return NASHGYM_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDimensionMismatch: return NASHGYM_ERR_DIMENSION;
    case ErrorCode::kValidation: return NASHGYM_ERR_VALIDATION;
    case ErrorCode::kSchema: return NASHGYM_ERR_SCHEMA;
    case ErrorCode::kIo: return NASHGYM_ERR_IO;
    case ErrorCode::kPrecondition: return NASHGYM_ERR_PRECONDITION;
    case ErrorCode::kInternal: return NASHGYM_ERR_INTERNAL;
  }
  return NASHGYM_ERR_INTERNAL;
}

template <typename Fn>
nashgym_status guarded(Fn&& fn) {
  try {
    fn();
    return NASHGYM_OK;
  } catch (const nashgym::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NASHGYM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return NASHGYM_ERR_INTERNAL;
  }
}

void require_arg(bool ok, const char* message) {
  nashgym::require(ok, nashgym::ErrorCode::kInvalidArgument, message);
}

void copy_values(const nashgym::ValueTable& table, double* out) {
  require_arg(out != nullptr, "value output buffer is NULL");
  std::memcpy(out, table.values().data(), table.values().size() * sizeof(double));
}

void rebuild_sequences(const double* losses, const double* predictions, int64_t n,
                       int32_t actions, nashgym::LossSequence& loss_seq,
                       nashgym::PredictionSequence& pred_seq) {
  for (int64_t k = 0; k < n; ++k) {
    loss_seq.append({losses + static_cast<std::size_t>(k) * actions,
                     static_cast<std::size_t>(actions)});
    pred_seq.append({predictions + static_cast<std::size_t>(k) * actions,
                     static_cast<std::size_t>(actions)});
  }
}

}  // namespace

extern "C" {

const char* nashgym_status_name(nashgym_status status) {
  switch (status) {
    case NASHGYM_OK: return "ok";
    case NASHGYM_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case NASHGYM_ERR_DIMENSION: return "dimension-mismatch";
    case NASHGYM_ERR_VALIDATION: return "validation";
    case NASHGYM_ERR_SCHEMA: return "schema";
    case NASHGYM_ERR_IO: return "io";
    case NASHGYM_ERR_PRECONDITION: return "precondition";
    case NASHGYM_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* nashgym_last_error(void) { return g_last_error.c_str(); }

nashgym_status nashgym_game_create(int32_t num_states, int32_t num_max_actions,
                                   int32_t num_min_actions, int32_t horizon,
                                   const double* transitions, const double* rewards,
                                   nashgym_game** out) {
  return guarded([&] {
    require_arg(transitions != nullptr && rewards != nullptr && out != nullptr,
                "nashgym_game_create: NULL argument");
    const std::size_t cells = static_cast<std::size_t>(num_states) * num_max_actions *
                              num_min_actions * horizon;
    *out = new nashgym_game{nashgym::MarkovGame(
        num_states, num_max_actions, num_min_actions, horizon,
        std::vector<double>(transitions, transitions + cells * num_states),
        std::vector<double>(rewards, rewards + cells))};
  });
}

nashgym_status nashgym_game_matching_pennies(nashgym_game** out) {
  return guarded([&] {
    require_arg(out != nullptr, "nashgym_game_matching_pennies: NULL output");
    *out = new nashgym_game{nashgym::matching_pennies()};
  });
}

nashgym_status nashgym_game_random(int32_t num_states, int32_t num_max_actions,
                                   int32_t num_min_actions, int32_t horizon, uint64_t seed,
                                   nashgym_game** out) {
  return guarded([&] {
    require_arg(out != nullptr, "nashgym_game_random: NULL output");
    *out = new nashgym_game{
        nashgym::random_game(num_states, num_max_actions, num_min_actions, horizon, seed)};
  });
}

nashgym_status nashgym_game_lower_bound(int32_t num_states, int32_t num_actions, int32_t horizon,
                                        int32_t num_min_actions, const double* mdp_transitions,
                                        const double* mdp_rewards, nashgym_game** out) {
  return guarded([&] {
    require_arg(mdp_transitions != nullptr && mdp_rewards != nullptr && out != nullptr,
                "nashgym_game_lower_bound: NULL argument");
    const std::size_t cells = static_cast<std::size_t>(num_states) * num_actions * horizon;
    nashgym::SingleAgentMdp mdp{num_states, num_actions, horizon,
                                std::vector<double>(mdp_transitions,
                                                    mdp_transitions + cells * num_states),
                                std::vector<double>(mdp_rewards, mdp_rewards + cells)};
    *out = new nashgym_game{nashgym::lower_bound_game(mdp, num_min_actions)};
  });
}

nashgym_status nashgym_game_load(const char* path, nashgym_game** out) {
  return guarded([&] {
    require_arg(path != nullptr && out != nullptr, "nashgym_game_load: NULL argument");
    *out = new nashgym_game{nashgym::load_game(path)};
  });
}

nashgym_status nashgym_game_save(const nashgym_game* game, const char* path) {
  return guarded([&] {
    require_arg(game != nullptr && path != nullptr, "nashgym_game_save: NULL argument");
    nashgym::save_game(game->game, path);
  });
}

nashgym_status nashgym_game_validate(const nashgym_game* game) {
  return guarded([&] {
    require_arg(game != nullptr, "nashgym_game_validate: NULL game");
    nashgym::validate_game(game->game);
  });
}

void nashgym_game_dims(const nashgym_game* game, int32_t* num_states, int32_t* num_max_actions,
                       int32_t* num_min_actions, int32_t* horizon) {
  if (game == nullptr) return;
  if (num_states != nullptr) *num_states = game->game.num_states();
  if (num_max_actions != nullptr) *num_max_actions = game->game.num_max_actions();
  if (num_min_actions != nullptr) *num_min_actions = game->game.num_min_actions();
  if (horizon != nullptr) *horizon = game->game.horizon();
}

double nashgym_game_reward(const nashgym_game* game, int32_t h, int32_t s, int32_t a, int32_t b) {
  return game->game.reward(h, s, a, b);
}

double nashgym_game_transition(const nashgym_game* game, int32_t h, int32_t s, int32_t a,
                               int32_t b, int32_t next) {
  return game->game.transition(h, s, a, b, next);
}

void nashgym_game_free(nashgym_game* game) { delete game; }

nashgym_status nashgym_policy_create(int32_t horizon, int32_t num_states, int32_t num_actions,
                                     const double* probs, nashgym_policy** out) {
  return guarded([&] {
    require_arg(out != nullptr, "nashgym_policy_create: NULL output");
    if (probs == nullptr) {
      *out = new nashgym_policy{nashgym::Policy::uniform(horizon, num_states, num_actions)};
      return;
    }
    nashgym::Policy policy(horizon, num_states, num_actions);
    std::memcpy(policy.mutable_row(0, 0).data(), probs,
                static_cast<std::size_t>(horizon) * num_states * num_actions * sizeof(double));
    policy.validate();
    *out = new nashgym_policy{std::move(policy)};
  });
}

void nashgym_policy_dims(const nashgym_policy* policy, int32_t* horizon, int32_t* num_states,
                         int32_t* num_actions) {
  if (policy == nullptr) return;
  if (horizon != nullptr) *horizon = policy->policy.horizon();
  if (num_states != nullptr) *num_states = policy->policy.num_states();
  if (num_actions != nullptr) *num_actions = policy->policy.num_actions();
}

double nashgym_policy_prob(const nashgym_policy* policy, int32_t h, int32_t s, int32_t a) {
  return policy->policy.prob(h, s, a);
}

nashgym_status nashgym_policy_copy_probs(const nashgym_policy* policy, double* out,
                                         size_t capacity) {
  return guarded([&] {
    require_arg(policy != nullptr && out != nullptr, "nashgym_policy_copy_probs: NULL argument");
    const std::vector<double>& probs = policy->policy.probs();
    nashgym::require(capacity >= probs.size(), nashgym::ErrorCode::kDimensionMismatch,
                     "nashgym_policy_copy_probs: buffer too small");
    std::memcpy(out, probs.data(), probs.size() * sizeof(double));
  });
}

void nashgym_policy_free(nashgym_policy* policy) { delete policy; }

nashgym_status nashgym_load_policy_pair(const char* path, nashgym_policy** mu,
                                        nashgym_policy** nu) {
  return guarded([&] {
    require_arg(path != nullptr && mu != nullptr && nu != nullptr,
                "nashgym_load_policy_pair: NULL argument");
    nashgym::PolicyPair pair = nashgym::load_policy_pair(path);
    *mu = new nashgym_policy{std::move(pair.mu)};
    *nu = new nashgym_policy{std::move(pair.nu)};
  });
}

nashgym_status nashgym_eval_product(const nashgym_game* game, const nashgym_policy* mu,
                                    const nashgym_policy* nu, double* values) {
  return guarded([&] {
    require_arg(game != nullptr && mu != nullptr && nu != nullptr,
                "nashgym_eval_product: NULL argument");
    copy_values(nashgym::eval_product_policy(game->game, mu->policy, nu->policy), values);
  });
}

nashgym_status nashgym_best_response_max(const nashgym_game* game, const nashgym_policy* nu,
                                         nashgym_policy** best, double* values) {
  return guarded([&] {
    require_arg(game != nullptr && nu != nullptr && best != nullptr,
                "nashgym_best_response_max: NULL argument");
    nashgym::BestResponse response = nashgym::best_response_max(game->game, nu->policy);
    if (values != nullptr) copy_values(response.values, values);
    *best = new nashgym_policy{std::move(response.policy)};
  });
}

nashgym_status nashgym_best_response_min(const nashgym_game* game, const nashgym_policy* mu,
                                         nashgym_policy** best, double* values) {
  return guarded([&] {
    require_arg(game != nullptr && mu != nullptr && best != nullptr,
                "nashgym_best_response_min: NULL argument");
    nashgym::BestResponse response = nashgym::best_response_min(game->game, mu->policy);
    if (values != nullptr) copy_values(response.values, values);
    *best = new nashgym_policy{std::move(response.policy)};
  });
}

nashgym_status nashgym_ne_gap(const nashgym_game* game, const nashgym_policy* mu,
                              const nashgym_policy* nu, double* gap, double* max_side,
                              double* min_side, double* per_state) {
  return guarded([&] {
    require_arg(game != nullptr && mu != nullptr && nu != nullptr,
                "nashgym_ne_gap: NULL argument");
    nashgym::NeGapReport report = nashgym::ne_gap(game->game, mu->policy, nu->policy);
    if (gap != nullptr) *gap = report.gap;
    if (max_side != nullptr) *max_side = report.max_side;
    if (min_side != nullptr) *min_side = report.min_side;
    if (per_state != nullptr) {
      std::memcpy(per_state, report.per_state.data(), report.per_state.size() * sizeof(double));
    }
  });
}

nashgym_status nashgym_solve_nash(const nashgym_game* game, nashgym_policy** mu,
                                  nashgym_policy** nu, double* values) {
  return guarded([&] {
    require_arg(game != nullptr && mu != nullptr && nu != nullptr,
                "nashgym_solve_nash: NULL argument");
    nashgym::NashSolution solution = nashgym::solve_nash_exact(game->game);
    if (values != nullptr) copy_values(solution.values, values);
    *mu = new nashgym_policy{std::move(solution.mu)};
    *nu = new nashgym_policy{std::move(solution.nu)};
  });
}

void nashgym_learner_config_init(nashgym_learner_config* config) {
  if (config == nullptr) return;
  config->rounds = 0;
  config->c_alpha = 24.0;
  config->c_bonus = 0.5;
  config->delta = 0.01;
  config->seed = 0;
  config->record_trace = 0;
}

nashgym_status nashgym_learner_run(const nashgym_game* game,
                                   const nashgym_learner_config* config,
                                   nashgym_learner_result** out) {
  return guarded([&] {
    require_arg(game != nullptr && config != nullptr && out != nullptr,
                "nashgym_learner_run: NULL argument");
    nashgym::LearnerConfig cfg;
    cfg.rounds = config->rounds;
    cfg.c_alpha = config->c_alpha;
    cfg.c_bonus = config->c_bonus;
    cfg.delta = config->delta;
    cfg.seed = config->seed;
    cfg.record_trace = config->record_trace != 0;
    nashgym::LearnerResult result = nashgym::run_learner(game->game, cfg);
    nashgym_policy mu{result.mu_hat};
    nashgym_policy nu{result.nu_hat};
    *out = new nashgym_learner_result{std::move(result), std::move(mu), std::move(nu)};
  });
}

const nashgym_policy* nashgym_result_mu(const nashgym_learner_result* result) {
  return result == nullptr ? nullptr : &result->mu;
}

const nashgym_policy* nashgym_result_nu(const nashgym_learner_result* result) {
  return result == nullptr ? nullptr : &result->nu;
}

int64_t nashgym_result_sample_count(const nashgym_learner_result* result) {
  return result == nullptr ? 0 : result->result.sample_count;
}

nashgym_status nashgym_result_value_upper(const nashgym_learner_result* result, double* values) {
  return guarded([&] {
    require_arg(result != nullptr, "nashgym_result_value_upper: NULL result");
    copy_values(result->result.value_upper, values);
  });
}

nashgym_status nashgym_result_value_lower(const nashgym_learner_result* result, double* values) {
  return guarded([&] {
    require_arg(result != nullptr, "nashgym_result_value_lower: NULL result");
    copy_values(result->result.value_lower, values);
  });
}

nashgym_status nashgym_result_save_json(const nashgym_learner_result* result, const char* path) {
  return guarded([&] {
    require_arg(result != nullptr && path != nullptr, "nashgym_result_save_json: NULL argument");
    nashgym::save_result(result->result, path);
  });
}

nashgym_status nashgym_result_empirical_vstar_max(const nashgym_learner_result* result,
                                                  double* values) {
  return guarded([&] {
    require_arg(result != nullptr, "nashgym_result_empirical_vstar_max: NULL result");
    nashgym::require(result->result.trace.has_value(), nashgym::ErrorCode::kPrecondition,
                     "learner run kept no trace; set record_trace");
    copy_values(nashgym::empirical_vstar_max(*result->result.trace), values);
  });
}

nashgym_status nashgym_result_empirical_vstar_min(const nashgym_learner_result* result,
                                                  double* values) {
  return guarded([&] {
    require_arg(result != nullptr, "nashgym_result_empirical_vstar_min: NULL result");
    nashgym::require(result->result.trace.has_value(), nashgym::ErrorCode::kPrecondition,
                     "learner run kept no trace; set record_trace");
    copy_values(nashgym::empirical_vstar_min(*result->result.trace), values);
  });
}

void nashgym_result_free(nashgym_learner_result* result) { delete result; }

nashgym_status nashgym_schedule_create(int64_t rounds, double c_alpha, double horizon_scale,
                                       nashgym_schedule** out) {
  return guarded([&] {
    require_arg(out != nullptr, "nashgym_schedule_create: NULL output");
    *out = new nashgym_schedule{nashgym::WeightSchedule(rounds, c_alpha, horizon_scale)};
  });
}

nashgym_status nashgym_schedule_alpha(const nashgym_schedule* schedule, int64_t k, double* out) {
  return guarded([&] {
    require_arg(schedule != nullptr && out != nullptr, "nashgym_schedule_alpha: NULL argument");
    nashgym::require(k >= 1 && k <= schedule->schedule.rounds,
                     nashgym::ErrorCode::kInvalidArgument, "schedule alpha index out of range");
    *out = schedule->schedule.alpha[k];
  });
}

nashgym_status nashgym_schedule_eta(const nashgym_schedule* schedule, int64_t k, double* out) {
  return guarded([&] {
    require_arg(schedule != nullptr && out != nullptr, "nashgym_schedule_eta: NULL argument");
    nashgym::require(k >= 1 && k <= schedule->schedule.rounds + 1,
                     nashgym::ErrorCode::kInvalidArgument, "schedule eta index out of range");
    *out = schedule->schedule.eta[k];
  });
}

nashgym_status nashgym_schedule_alpha_weights(const nashgym_schedule* schedule, int64_t k,
                                              double* out) {
  return guarded([&] {
    require_arg(schedule != nullptr && out != nullptr,
                "nashgym_schedule_alpha_weights: NULL argument");
    std::vector<double> weights = schedule->schedule.alpha_weights(k);
    std::memcpy(out, weights.data(), weights.size() * sizeof(double));
  });
}

void nashgym_schedule_free(nashgym_schedule* schedule) { delete schedule; }

nashgym_status nashgym_ftrl_run(const nashgym_schedule* schedule, const double* losses,
                                int64_t n, int32_t actions, double* predictions) {
  return guarded([&] {
    require_arg(schedule != nullptr && losses != nullptr && predictions != nullptr,
                "nashgym_ftrl_run: NULL argument");
    require_arg(n >= 1 && actions >= 1, "nashgym_ftrl_run: n and actions must be >= 1");
    nashgym::LossSequence sequence(
        actions, std::vector<double>(losses, losses + static_cast<std::size_t>(n) * actions));
    nashgym::PredictionSequence result = nashgym::run_ftrl(sequence, schedule->schedule);
    std::memcpy(predictions, result.row(1).data(),
                static_cast<std::size_t>(n) * actions * sizeof(double));
  });
}

nashgym_status nashgym_ftrl_weighted_regret(const nashgym_schedule* schedule,
                                            const double* losses, const double* predictions,
                                            int64_t n, int32_t actions, double* regret,
                                            double* per_action) {
  return guarded([&] {
    require_arg(schedule != nullptr && losses != nullptr && predictions != nullptr &&
                    regret != nullptr,
                "nashgym_ftrl_weighted_regret: NULL argument");
    nashgym::LossSequence loss_seq(actions);
    nashgym::PredictionSequence pred_seq(actions);
    rebuild_sequences(losses, predictions, n, actions, loss_seq, pred_seq);
    nashgym::RegretReport report =
        nashgym::weighted_regret(loss_seq, pred_seq, schedule->schedule, n);
    *regret = report.regret;
    if (per_action != nullptr) {
      std::memcpy(per_action, report.per_action.data(),
                  report.per_action.size() * sizeof(double));
    }
  });
}

nashgym_status nashgym_ftrl_regret_bound(const nashgym_schedule* schedule, const double* losses,
                                         const double* predictions, int64_t n, int32_t actions,
                                         double* total, double* variance_term, double* log_term,
                                         double* norm_term) {
  return guarded([&] {
    require_arg(schedule != nullptr && losses != nullptr && predictions != nullptr &&
                    total != nullptr,
                "nashgym_ftrl_regret_bound: NULL argument");
    nashgym::LossSequence loss_seq(actions);
    nashgym::PredictionSequence pred_seq(actions);
    rebuild_sequences(losses, predictions, n, actions, loss_seq, pred_seq);
    nashgym::RegretBound bound =
        nashgym::regret_bound_rhs(loss_seq, pred_seq, schedule->schedule, n);
    *total = bound.total;
    if (variance_term != nullptr) *variance_term = bound.variance_term;
    if (log_term != nullptr) *log_term = bound.log_term;
    if (norm_term != nullptr) *norm_term = bound.norm_term;
  });
}

nashgym_status nashgym_exp_weights(const double* cumulative_loss, int32_t actions, double eta,
                                   double* out) {
  return guarded([&] {
    require_arg(cumulative_loss != nullptr && out != nullptr,
                "nashgym_exp_weights: NULL argument");
    require_arg(actions >= 1, "nashgym_exp_weights: actions must be >= 1");
    std::vector<double> pi = nashgym::exp_weights(
        {cumulative_loss, static_cast<std::size_t>(actions)}, eta);
    std::memcpy(out, pi.data(), pi.size() * sizeof(double));
  });
}

}  // extern "C"
