#ifndef TOPSTEER_H
#define TOPSTEER_H

#include <stddef.h>
#include <stdint.h>

#if defined(TOPSTEER_BUILDING_LIBRARY)
#define TS_API __attribute__((visibility("default")))
#else
#define TS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ts_status {
  TS_OK = 0,
  TS_ERR_INVALID_ARGUMENT,
  TS_ERR_IO,
  TS_ERR_PARSE,
  TS_ERR_DEGENERATE_PROJECTION,
  TS_ERR_COMPLEXITY_LIMIT,
  TS_ERR_NUMERICAL_DEGENERACY,
  TS_ERR_INTEGRATION_BLOWUP,
  TS_ERR_INVALID_CONFIGURATION,
  TS_ERR_CALIBRATION_FAILURE,
  TS_ERR_STEERING_ABORT,
  TS_ERR_EMPTY_INPUT,
  TS_ERR_DEGENERATE_PARTITION,
  TS_ERR_INTERNAL
} ts_status;

/* Message of the last failing call on this thread ("" if none). */
TS_API const char* ts_last_error(void);
TS_API const char* ts_status_name(ts_status s);
/* Process exit code for a status: 0 ok, 2 usage/config/input errors, 1 otherwise. */
TS_API int ts_status_exit_code(ts_status s);
TS_API const char* ts_version(void);

/* Strings returned through char** out-parameters are owned by the caller. */
TS_API void ts_string_free(char* s);

TS_API ts_status ts_set_data_dir(const char* dir);
/* Writes the resolved data directory; free with ts_string_free. */
TS_API ts_status ts_get_data_dir(char** out);

/* Curves */
typedef struct ts_curve ts_curve;

TS_API ts_status ts_curve_create(const double* xyz, size_t n_vertices, ts_curve** out);
TS_API ts_status ts_curve_load(const char* path, ts_curve** out);
TS_API ts_status ts_curve_save(const ts_curve* c, const char* path);
TS_API void ts_curve_free(ts_curve* c);
TS_API size_t ts_curve_size(const ts_curve* c);
TS_API ts_status ts_curve_vertex(const ts_curve* c, size_t i, double out_xyz[3]);

/* Complexity over n_dirs seed-rotated Fibonacci directions. */
TS_API ts_status ts_aun(const ts_curve* c, size_t n_dirs, uint64_t seed, double* value, double* stderr_out);
TS_API ts_status ts_tun(const ts_curve* c, size_t stride, size_t n_dirs, uint64_t seed, double* value,
                        double* stderr_out);

/* Knotoid type of the projection along dir; name freed with ts_string_free. */
TS_API ts_status ts_classify_projection(const ts_curve* c, const double dir[3], char** name, int* unravelling);

/* Stochastic-closure knot type distribution as JSON. */
TS_API ts_status ts_knot_id(const ts_curve* c, size_t n_closures, uint64_t seed, char** json_out);

/* Pipelines: analyze, unknot, knot, grow, knot-id, ingest. */
typedef struct ts_config ts_config;

TS_API ts_status ts_config_create(const char* command, ts_config** out);
TS_API void ts_config_free(ts_config* cfg);
/* Rejects keys the command does not accept. */
TS_API ts_status ts_config_set(ts_config* cfg, const char* key, const char* value);
/* key=value lines, '#' comments. */
TS_API ts_status ts_config_load_file(ts_config* cfg, const char* path);
TS_API ts_status ts_config_resolved_json(const ts_config* cfg, char** json_out);
/* JSON array of {name, default, help} for a command. */
TS_API ts_status ts_command_keys_json(const char* command, char** json_out);

/* Runs the pipeline; writes tables and manifest.json under the configured
   output location and returns a JSON summary. */
TS_API ts_status ts_run(const ts_config* cfg, char** json_out);

#ifdef __cplusplus
}
#endif

#endif
