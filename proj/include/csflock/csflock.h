/* C interface to the csflock confined flocking simulator.
 *
 * Objects are opaque handles created and released by the library. Every
 * function returns a csf_status; on anything but CSF_OK a description is
 * available from csf_last_error() on the calling thread until the next call.
 */
#ifndef CSFLOCK_H
#define CSFLOCK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CSF_API __declspec(dllexport)
#else
#define CSF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum csf_status {
  CSF_OK = 0,
  CSF_CLAIM_FAILED = 1,      /* verification ran and at least one claim failed */
  CSF_CONFIG_ERROR = 2,      /* invalid configuration text or value */
  CSF_INTEGRATION_ERROR = 3, /* the time integration could not finish */
  CSF_INVALID_ARGUMENT = 4,  /* null pointer, bad size, non-finite input */
  CSF_DOMAIN_ERROR = 5,      /* position at or behind a wall */
  CSF_IO_ERROR = 6,
  CSF_INTERNAL_ERROR = 7
} csf_status;

typedef struct csf_config csf_config;
typedef struct csf_sweep csf_sweep;
typedef struct csf_simulation csf_simulation;

enum { CSF_DIAGNOSTICS_COLUMNS = 16 };

CSF_API const char* csf_version(void);
CSF_API const char* csf_last_error(void);
CSF_API const char* csf_status_name(csf_status status);

/* ---- configuration ---------------------------------------------------- */

/* JSON text; an empty string gives every default. */
CSF_API csf_status csf_config_parse(const char* text, size_t length, csf_config** out);
CSF_API csf_status csf_config_load(const char* path, csf_config** out);
CSF_API void csf_config_free(csf_config* config);
CSF_API csf_status csf_config_set_seed(csf_config* config, uint64_t seed);
CSF_API csf_status csf_config_set_output_dir(csf_config* config, const char* directory);
/* Canonical JSON. Writes at most `capacity` bytes including the terminator
 * and stores the full size (without terminator) in *needed. */
CSF_API csf_status csf_config_serialize(const csf_config* config, char* buffer, size_t capacity, size_t* needed);

CSF_API csf_status csf_sweep_parse(const char* text, size_t length, csf_sweep** out);
CSF_API csf_status csf_sweep_load(const char* path, csf_sweep** out);
CSF_API void csf_sweep_free(csf_sweep* sweep);
CSF_API csf_status csf_sweep_run_count(const csf_sweep* sweep, size_t* count);

/* ---- subcommands ------------------------------------------------------ */
/* Each writes its artifacts under the configured output directory.
 * `out_dir` and `seed` are optional overrides (pass NULL to keep the config).
 * The returned status doubles as the process exit code for values 0..3. */

CSF_API csf_status csf_run_simulate(const csf_config* config, const char* out_dir, const uint64_t* seed, int quiet);
CSF_API csf_status csf_run_verify(const csf_config* config, const char* out_dir, const uint64_t* seed, int quiet);
CSF_API csf_status csf_run_plot_data(const csf_config* config, const char* out_dir, const uint64_t* seed, int quiet);
CSF_API csf_status csf_run_sweep(const csf_sweep* sweep, const char* out_dir, const uint64_t* seed, int quiet);

/* ---- stepwise simulation ---------------------------------------------- */

/* Draws the initial state from the config's ic block. */
CSF_API csf_status csf_simulation_create(const csf_config* config, csf_simulation** out);
/* Starts from explicit positions and velocities at t = 0. */
CSF_API csf_status csf_simulation_create_from_state(const csf_config* config, const double* x, const double* v,
                                                    size_t n, csf_simulation** out);
CSF_API void csf_simulation_free(csf_simulation* sim);
/* Integrates forward to time t_end > current time. */
CSF_API csf_status csf_simulation_advance(csf_simulation* sim, double t_end);
CSF_API csf_status csf_simulation_size(const csf_simulation* sim, size_t* n);
CSF_API csf_status csf_simulation_time(const csf_simulation* sim, double* t);
/* Copies the current state into caller arrays of length n. */
CSF_API csf_status csf_simulation_state(const csf_simulation* sim, double* x, double* v, size_t n);
/* The current diagnostics row, CSF_DIAGNOSTICS_COLUMNS values in CSV order. */
CSF_API csf_status csf_simulation_diagnostics(const csf_simulation* sim, double* row, size_t length);
CSF_API const char* csf_diagnostics_column_name(size_t index);

/* ---- pure evaluators -------------------------------------------------- */

/* family: 0 = power law H (1 + r^2)^(-beta), 1 = constant H. */
CSF_API csf_status csf_kernel_eval(int family, double H, double beta, double r, double* out);
CSF_API csf_status csf_kernel_primitive(int family, double H, double beta, double D, double* out);
/* U, F = -U' and U'' of one wall at distance x. */
CSF_API csf_status csf_wall_potential(double ell, double theta, double x, double* U, double* F, double* U2);

#ifdef __cplusplus
}
#endif

#endif /* CSFLOCK_H */
