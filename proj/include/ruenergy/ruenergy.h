/* C interface to the ruenergy simulator and energy-efficiency optimizer. */
#ifndef RUENERGY_H
#define RUENERGY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RUENERGY_BUILDING)
#    define RUE_API __declspec(dllexport)
#  else
#    define RUE_API __declspec(dllimport)
#  endif
#else
#  define RUE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rue_status {
    RUE_OK = 0,
    RUE_ERR_INVALID_ARGUMENT = 1,
    RUE_ERR_CONFIG = 2,
    RUE_ERR_INFEASIBLE = 3,
    RUE_ERR_NONCONVERGENCE = 4,
    RUE_ERR_IO = 5,
    RUE_ERR_INTERNAL = 6
} rue_status;

typedef enum rue_waveform { RUE_CP_OFDM = 0, RUE_DFTS_OFDM = 1 } rue_waveform;
typedef enum rue_link_mode { RUE_SIMO_CP = 0, RUE_SIMO_DFT = 1, RUE_MIMO_CP = 2 } rue_link_mode;
typedef enum rue_tx_mode { RUE_FULL_MIMO = 0, RUE_SWITCH_CP = 1, RUE_SWITCH_DFT = 2 } rue_tx_mode;

typedef struct rue_scenario rue_scenario;
typedef struct rue_sweep rue_sweep;

RUE_API const char* rue_version(void);

/* Message of the last failed call on this thread; "" if none. */
RUE_API const char* rue_last_error(void);

/* Scenario handles. */
RUE_API rue_status rue_scenario_default(rue_scenario** out);
RUE_API rue_status rue_scenario_load(const char* path, rue_scenario** out);
RUE_API rue_status rue_scenario_parse(const char* text, rue_scenario** out);
/* Sets one "section.key"; the scenario is left unchanged if the result does not validate. */
RUE_API rue_status rue_scenario_set(rue_scenario* s, const char* key, const char* value);
/* Copies the value into buf (NUL-terminated, truncated to len). *needed gets the full length + 1. */
RUE_API rue_status rue_scenario_get(const rue_scenario* s, const char* key, char* buf, size_t len, size_t* needed);
RUE_API rue_status rue_scenario_save(const rue_scenario* s, const char* path);
RUE_API uint64_t rue_scenario_hash(const rue_scenario* s);
RUE_API void rue_scenario_free(rue_scenario* s);

/* PA model. */
RUE_API rue_status rue_rapp_gain(const rue_scenario* s, double re, double im, double* out_re, double* out_im);

/* Link-level simulation. */
RUE_API rue_status rue_measure_evm(const rue_scenario* s, rue_waveform w, double backoff_db, int trials,
                                   uint64_t seed, double* evm_db);
RUE_API rue_status rue_min_backoff(const rue_scenario* s, rue_waveform w, double evm_req_db, int trials,
                                   uint64_t seed, double* b_min_db);
/* PAPR (dB) exceeded with probability `prob`, at waveform.papr_oversample. */
RUE_API rue_status rue_papr_quantile(const rue_scenario* s, rue_waveform w, size_t symbols, uint64_t seed,
                                     double prob, double* papr_db);

/* Closed-form link budget. */
typedef struct rue_link_input {
    double gain;
    double noise_power;
    double lambda0;
    double lambda1;
    double lambda_eff;
    double bandwidth_hz;
} rue_link_input;

RUE_API rue_status rue_mimo_se(const rue_link_input* in, double p_total, double* se);
RUE_API rue_status rue_mimo_ptx(const rue_link_input* in, double se, double* p_total);
RUE_API rue_status rue_simo_se(const rue_link_input* in, double p_tx, double* se);
RUE_API rue_status rue_simo_ptx(const rue_link_input* in, double se, double* p_tx);
/* Fills `in` from the scenario and its configured channel statistics. */
RUE_API rue_status rue_link_input_from(const rue_scenario* s, rue_link_input* in);

/* Fractional program for one link mode. */
typedef struct rue_fp_problem {
    const double* gains;
    size_t num_gains;
    double eta;
    double p_circ;
    double alpha_oh;
    double bandwidth_hz;
    int pa_count;
    double p_min;
    double p_max;
} rue_fp_problem;

typedef struct rue_fp_result {
    double p_star;
    double y_star;
    double ee;
    double se;
    double p_ru;
    int iterations;
} rue_fp_result;

RUE_API rue_status rue_maximize_ee(const rue_fp_problem* prob, rue_fp_result* out);

typedef struct rue_ee_result {
    rue_tx_mode mode;
    rue_link_mode inner;
    double b_db;
    double p_star;
    double y_star;
    double ee;
    double se;
    double p_ru;
    int iterations;
} rue_ee_result;

/* EE optimum of a transmission mode with the given minimum backoffs. */
RUE_API rue_status rue_solve_mode(const rue_scenario* s, rue_tx_mode mode, double b_min_cp_db, double b_min_dft_db,
                                  rue_ee_result* out);

typedef struct rue_sweep_row {
    double se;
    rue_tx_mode mode;
    int has_inner;
    rue_link_mode inner;
    double b_db;
    double p_tx_w;
    double p_ru_w;
    double ee;
    int feasible;
} rue_sweep_row;

RUE_API rue_status rue_sweep_run(const rue_scenario* s, double b_min_cp_db, double b_min_dft_db, const double* se,
                                 size_t count, rue_sweep** out);
RUE_API size_t rue_sweep_size(const rue_sweep* sw);
RUE_API rue_status rue_sweep_row_at(const rue_sweep* sw, size_t index, rue_sweep_row* out);
RUE_API void rue_sweep_free(rue_sweep* sw);

/* Batch experiments. */
typedef struct rue_experiment {
    const char* command;
    const char* config_path;         /* NULL or "" for defaults */
    const char* const* overrides;    /* "section.key=value" */
    size_t num_overrides;
    const char* out_dir;
    int has_seed;
    uint64_t seed;
    int trials;                      /* <= 0 keeps the configured value */
    int plot;
} rue_experiment;

/* Runs an experiment and returns its process exit status:
   0 ok, 2 config, 3 infeasible, 4 nonconvergence, 1 other. */
RUE_API int rue_run_experiment(const rue_experiment* spec);

#ifdef __cplusplus
}
#endif

#endif
