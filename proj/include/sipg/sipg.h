/* C interface to the infrastructure planning co-simulation library. */
#ifndef SIPG_SIPG_H
#define SIPG_SIPG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SIPG_API __declspec(dllexport)
#else
#define SIPG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sipg_status {
  SIPG_OK = 0,
  SIPG_ERR_INVALID_ARGUMENT = 1,
  SIPG_ERR_PARSE = 2,
  SIPG_ERR_SCHEMA = 3,
  SIPG_ERR_INVARIANT = 4,
  SIPG_ERR_IO = 5,
  SIPG_ERR_INFEASIBLE = 6,
  SIPG_ERR_UNBOUNDED = 7,
  SIPG_ERR_NEGATIVE_STOCK = 8,
  SIPG_ERR_MISSING_CONTRIBUTION = 9,
  SIPG_ERR_PROTOCOL = 10,
  SIPG_ERR_VERSION_MISMATCH = 11,
  SIPG_ERR_ROLE_CLAIMED = 12,
  SIPG_ERR_UNDECLARED_ATTRIBUTE = 13,
  SIPG_ERR_GATE_CLOSED = 14,
  SIPG_ERR_STALE_UPDATE = 15,
  SIPG_ERR_OUT_OF_ORDER = 16,
  SIPG_ERR_SESSION_CLOSED = 17,
  SIPG_ERR_TIME_REGRESSION = 18,
  SIPG_ERR_MALFORMED = 19,
  SIPG_ERR_STATE = 20,
  SIPG_ERR_INTERNAL = 99
} sipg_status;

typedef struct sipg_scenario sipg_scenario;
typedef struct sipg_run sipg_run;

/* Message describing the last failure on the calling thread; never NULL. */
SIPG_API const char* sipg_last_error(void);
SIPG_API const char* sipg_version(void);
/* Frees strings returned through char** out-parameters. */
SIPG_API void sipg_string_free(char* s);

SIPG_API sipg_status sipg_scenario_load_file(const char* path, sipg_scenario** out);
SIPG_API sipg_status sipg_scenario_load_default(sipg_scenario** out);
/* Text of the bundled default scenario document. */
SIPG_API sipg_status sipg_scenario_default_text(char** out);
/* Validates a scenario file. Writes a report with one "path: message" line
 * per finding and the number of findings. A file that cannot be read is an
 * error; findings are not. */
SIPG_API sipg_status sipg_scenario_validate_file(const char* path, char** report, size_t* findings);
SIPG_API void sipg_scenario_free(sipg_scenario* s);

/* Monolithic run of the scenario plus an optional plan file (NULL for none). */
SIPG_API sipg_status sipg_run_mono(const sipg_scenario* s, const char* plan_path, sipg_run** out);
/* Writes flows.csv, objectives.csv and capital_expenses.csv into out_dir. */
SIPG_API sipg_status sipg_run_write_outputs(const sipg_run* run, const char* out_dir);
/* Joint objective at the horizon end. */
SIPG_API sipg_status sipg_run_joint_objective(const sipg_run* run, double* out);
/* Copies up to capacity violation years into years and the total into count. */
SIPG_API sipg_status sipg_run_budget_violations(const sipg_run* run, int* years, size_t capacity,
                                                size_t* count);
SIPG_API void sipg_run_free(sipg_run* run);

/* Serves a federation on port (0 picks one; the chosen port is logged) until
 * `runs` synchronous runs complete, or forever when runs is 0. variant is
 * "1A", "1B" or "2". When out_dir is non-NULL each completed run's outputs
 * are written to out_dir/run-N. port_out, if non-NULL, receives the bound
 * port before serving starts (useful with port 0 from another thread). */
SIPG_API sipg_status sipg_coordinator_serve(const char* scenario_path, uint16_t port, const char* variant,
                                            int runs, const char* out_dir, volatile uint16_t* port_out);

/* Joins a federation as role ("agriculture", "water" or "energy") with an
 * optional plan file and participates until the run ends. */
SIPG_API sipg_status sipg_federate_run(const char* role, const char* host, uint16_t port, const char* plan_path);

/* Runs one role alone against imported flow files (NULL-terminated list, may
 * be NULL) and writes that role's flow export plus objectives.csv into
 * out_dir. */
SIPG_API sipg_status sipg_run_local(const sipg_scenario* s, const char* role, const char* plan_path,
                                    const char* const* import_paths, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif
