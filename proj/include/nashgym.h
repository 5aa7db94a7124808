/* C interface to the nashgym library: tabular zero-sum Markov games, exact
 * dynamic-programming oracles, a seeded generative-model learner, and
 * weighted-FTRL primitives.
 *
 * Conventions:
 *   - All functions returning nashgym_status leave outputs untouched on
 *     failure; nashgym_last_error() holds a thread-local detail message for
 *     the most recent failure on the calling thread.
 *   - Tensors are dense row-major doubles: transitions [h][s][a][b][s'],
 *     rewards [h][s][a][b], policies [h][s][action]. Steps are zero-based.
 *   - Value buffers hold (H+1)*S doubles laid out [step][state]; the final
 *     row is the zero terminal row.
 *   - Objects returned through ** out-parameters are owned by the caller and
 *     released with the matching _free function. Handles are independent, so
 *     distinct handles may be used concurrently from different threads.
 */
#ifndef NASHGYM_H
#define NASHGYM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NASHGYM_API __declspec(dllexport)
#else
#define NASHGYM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nashgym_status {
  NASHGYM_OK = 0,
  NASHGYM_ERR_INVALID_ARGUMENT = 1,
  NASHGYM_ERR_DIMENSION = 2,
  NASHGYM_ERR_VALIDATION = 3,
  NASHGYM_ERR_SCHEMA = 4,
  NASHGYM_ERR_IO = 5,
  NASHGYM_ERR_PRECONDITION = 6,
  NASHGYM_ERR_INTERNAL = 7
} nashgym_status;

typedef struct nashgym_game nashgym_game;
typedef struct nashgym_policy nashgym_policy;
typedef struct nashgym_learner_result nashgym_learner_result;
typedef struct nashgym_schedule nashgym_schedule;

NASHGYM_API const char* nashgym_status_name(nashgym_status status);
NASHGYM_API const char* nashgym_last_error(void);

/* ---- games ---------------------------------------------------------- */

NASHGYM_API nashgym_status nashgym_game_create(int32_t num_states, int32_t num_max_actions,
                                               int32_t num_min_actions, int32_t horizon,
                                               const double* transitions, const double* rewards,
                                               nashgym_game** out);
NASHGYM_API nashgym_status nashgym_game_matching_pennies(nashgym_game** out);
NASHGYM_API nashgym_status nashgym_game_random(int32_t num_states, int32_t num_max_actions,
                                               int32_t num_min_actions, int32_t horizon,
                                               uint64_t seed, nashgym_game** out);
/* Augments a single-agent MDP (transitions [h][s][a][s'], rewards [h][s][a])
 * with num_min_actions indistinguishable min-player actions. */
NASHGYM_API nashgym_status nashgym_game_lower_bound(int32_t num_states, int32_t num_actions,
                                                    int32_t horizon, int32_t num_min_actions,
                                                    const double* mdp_transitions,
                                                    const double* mdp_rewards,
                                                    nashgym_game** out);
NASHGYM_API nashgym_status nashgym_game_load(const char* path, nashgym_game** out);
NASHGYM_API nashgym_status nashgym_game_save(const nashgym_game* game, const char* path);
NASHGYM_API nashgym_status nashgym_game_validate(const nashgym_game* game);
NASHGYM_API void nashgym_game_dims(const nashgym_game* game, int32_t* num_states,
                                   int32_t* num_max_actions, int32_t* num_min_actions,
                                   int32_t* horizon);
NASHGYM_API double nashgym_game_reward(const nashgym_game* game, int32_t h, int32_t s, int32_t a,
                                       int32_t b);
NASHGYM_API double nashgym_game_transition(const nashgym_game* game, int32_t h, int32_t s,
                                           int32_t a, int32_t b, int32_t next);
NASHGYM_API void nashgym_game_free(nashgym_game* game);

/* ---- policies ------------------------------------------------------- */

/* probs may be NULL for the uniform policy. */
NASHGYM_API nashgym_status nashgym_policy_create(int32_t horizon, int32_t num_states,
                                                 int32_t num_actions, const double* probs,
                                                 nashgym_policy** out);
NASHGYM_API void nashgym_policy_dims(const nashgym_policy* policy, int32_t* horizon,
                                     int32_t* num_states, int32_t* num_actions);
NASHGYM_API double nashgym_policy_prob(const nashgym_policy* policy, int32_t h, int32_t s,
                                       int32_t a);
NASHGYM_API nashgym_status nashgym_policy_copy_probs(const nashgym_policy* policy, double* out,
                                                     size_t capacity);
NASHGYM_API void nashgym_policy_free(nashgym_policy* policy);

/* Reads {"muHat": [h][s][a], "nuHat": [h][s][b]} (the learner result schema
 * qualifies). */
NASHGYM_API nashgym_status nashgym_load_policy_pair(const char* path, nashgym_policy** mu,
                                                    nashgym_policy** nu);

/* ---- exact evaluation ------------------------------------------------ */

NASHGYM_API nashgym_status nashgym_eval_product(const nashgym_game* game,
                                                const nashgym_policy* mu,
                                                const nashgym_policy* nu, double* values);
NASHGYM_API nashgym_status nashgym_best_response_max(const nashgym_game* game,
                                                     const nashgym_policy* nu,
                                                     nashgym_policy** best, double* values);
NASHGYM_API nashgym_status nashgym_best_response_min(const nashgym_game* game,
                                                     const nashgym_policy* mu,
                                                     nashgym_policy** best, double* values);
/* per_state (S doubles) may be NULL. */
NASHGYM_API nashgym_status nashgym_ne_gap(const nashgym_game* game, const nashgym_policy* mu,
                                          const nashgym_policy* nu, double* gap,
                                          double* max_side, double* min_side, double* per_state);
/* values may be NULL. */
NASHGYM_API nashgym_status nashgym_solve_nash(const nashgym_game* game, nashgym_policy** mu,
                                              nashgym_policy** nu, double* values);

/* ---- learner ---------------------------------------------------------- */

typedef struct nashgym_learner_config {
  int64_t rounds;       /* K, required, >= 2 */
  double c_alpha;       /* default 24 */
  double c_bonus;       /* default 0.5 */
  double delta;         /* default 0.01 */
  uint64_t seed;        /* default 0 */
  int32_t record_trace; /* nonzero keeps the per-round trace for replay */
} nashgym_learner_config;

NASHGYM_API void nashgym_learner_config_init(nashgym_learner_config* config);
NASHGYM_API nashgym_status nashgym_learner_run(const nashgym_game* game,
                                               const nashgym_learner_config* config,
                                               nashgym_learner_result** out);
/* Borrowed references, valid while the result lives. */
NASHGYM_API const nashgym_policy* nashgym_result_mu(const nashgym_learner_result* result);
NASHGYM_API const nashgym_policy* nashgym_result_nu(const nashgym_learner_result* result);
NASHGYM_API int64_t nashgym_result_sample_count(const nashgym_learner_result* result);
NASHGYM_API nashgym_status nashgym_result_value_upper(const nashgym_learner_result* result,
                                                      double* values);
NASHGYM_API nashgym_status nashgym_result_value_lower(const nashgym_learner_result* result,
                                                      double* values);
NASHGYM_API nashgym_status nashgym_result_save_json(const nashgym_learner_result* result,
                                                    const char* path);
/* Empirical best-response replay over the recorded trace; fails with
 * NASHGYM_ERR_PRECONDITION when the run kept no trace. */
NASHGYM_API nashgym_status nashgym_result_empirical_vstar_max(
    const nashgym_learner_result* result, double* values);
NASHGYM_API nashgym_status nashgym_result_empirical_vstar_min(
    const nashgym_learner_result* result, double* values);
NASHGYM_API void nashgym_result_free(nashgym_learner_result* result);

/* ---- weighted FTRL ---------------------------------------------------- */

NASHGYM_API nashgym_status nashgym_schedule_create(int64_t rounds, double c_alpha,
                                                   double horizon_scale, nashgym_schedule** out);
NASHGYM_API nashgym_status nashgym_schedule_alpha(const nashgym_schedule* schedule, int64_t k,
                                                  double* out);
/* k runs 1..K+1. */
NASHGYM_API nashgym_status nashgym_schedule_eta(const nashgym_schedule* schedule, int64_t k,
                                                double* out);
/* out receives k doubles: alpha_i^k for i = 1..k. */
NASHGYM_API nashgym_status nashgym_schedule_alpha_weights(const nashgym_schedule* schedule,
                                                          int64_t k, double* out);
NASHGYM_API void nashgym_schedule_free(nashgym_schedule* schedule);

/* losses and predictions are n x actions row-major; rounds are rows 1..n. */
NASHGYM_API nashgym_status nashgym_ftrl_run(const nashgym_schedule* schedule,
                                            const double* losses, int64_t n, int32_t actions,
                                            double* predictions);
NASHGYM_API nashgym_status nashgym_ftrl_weighted_regret(const nashgym_schedule* schedule,
                                                        const double* losses,
                                                        const double* predictions, int64_t n,
                                                        int32_t actions, double* regret,
                                                        double* per_action);
/* Component outputs may be NULL. */
NASHGYM_API nashgym_status nashgym_ftrl_regret_bound(const nashgym_schedule* schedule,
                                                     const double* losses,
                                                     const double* predictions, int64_t n,
                                                     int32_t actions, double* total,
                                                     double* variance_term, double* log_term,
                                                     double* norm_term);
NASHGYM_API nashgym_status nashgym_exp_weights(const double* cumulative_loss, int32_t actions,
                                               double eta, double* out);

#ifdef __cplusplus
}
#endif

#endif /* NASHGYM_H */
