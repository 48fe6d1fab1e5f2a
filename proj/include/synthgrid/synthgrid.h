#ifndef SYNTHGRID_H
#define SYNTHGRID_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SYNTHGRID_BUILDING_LIBRARY)
#    define SG_API __declspec(dllexport)
#  else
#    define SG_API __declspec(dllimport)
#  endif
#else
#  define SG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every function returns one; details via sg_last_error(). */
typedef enum sg_status {
    SG_OK = 0,
    SG_ERR_IO,
    SG_ERR_PARSE,
    SG_ERR_INTEGRITY,
    SG_ERR_INVALID_ARGUMENT,
    SG_ERR_UNKNOWN_INTERCONNECTION,
    SG_ERR_NO_GENERATORS_FOR_TARGET,
    SG_ERR_ZERO_GROUP_CAPACITY,
    SG_ERR_ZERO_CURRENT_PRICE,
    SG_ERR_DOMAIN_MISMATCH,
    SG_ERR_EMPTY_PROFILE,
    SG_ERR_SPUR_TOPOLOGY,
    SG_ERR_ZERO_TOTAL_WEIGHT,
    SG_ERR_NO_DONOR_DATA,
    SG_ERR_TOO_SHORT,
    SG_ERR_NO_VALID_NEIGHBOR,
    SG_ERR_BAD_MIX,
    SG_ERR_INFEASIBLE_MONTH,
    SG_ERR_DIMENSION_MISMATCH,
    SG_ERR_UNBOUNDED_COST,
    SG_ERR_NUMERICAL_FAILURE,
    SG_ERR_NOT_OPTIMAL,
    SG_ERR_BAD_WINDOW_LENGTH,
    SG_ERR_RETRY_CAP_EXCEEDED,
    SG_ERR_MISSING_PROFILE,
    SG_ERR_EMPTY_LOG,
    SG_ERR_ITERATION_CAP_EXCEEDED,
    SG_ERR_UPGRADE_STALLED,
    SG_ERR_BAD_CAP,
    SG_ERR_INTERNAL
} sg_status;

/* Name of a status ("IoError", "MissingProfile", ...). Never NULL. */
SG_API const char* sg_status_name(sg_status status);

/* Message of the last failing call on this thread; "" after success. */
SG_API const char* sg_last_error(void);

SG_API const char* sg_version(void);

/* ---- network ---- */

typedef struct sg_network sg_network;

SG_API sg_status sg_network_load(const char* case_dir, sg_network** out);
SG_API void sg_network_free(sg_network* network);
SG_API sg_status sg_network_write(const sg_network* network, const char* case_dir);
SG_API sg_status sg_network_counts(const sg_network* network, size_t* buses, size_t* branches, size_t* dc_lines,
                                   size_t* generators);
/* Number of validation violations; each one is "entity id: rule". */
SG_API sg_status sg_network_validate(const sg_network* network, size_t* violation_count);
SG_API sg_status sg_network_violation(const sg_network* network, size_t index, char* buffer, size_t buffer_size);

/* ---- window planning ---- */

/* Writes up to `capacity` window lengths; *count receives the window count. */
SG_API sg_status sg_plan_windows(size_t total_hours, size_t window_hours, size_t* count, size_t* lengths,
                                 size_t capacity);

/* ---- run configuration ---- */

typedef struct sg_config sg_config;

SG_API sg_status sg_config_new(sg_config** out);
SG_API sg_status sg_config_load(const char* path, sg_config** out);
SG_API void sg_config_free(sg_config* config);
/* key is "section.key", e.g. "harness.window_hours". */
SG_API sg_status sg_config_set(sg_config* config, const char* key, const char* value);
/* Copies the value into buffer; SG_ERR_INVALID_ARGUMENT when unset. */
SG_API sg_status sg_config_get(const sg_config* config, const char* key, char* buffer, size_t buffer_size);
/* Applies <prefix>SECTION_KEY environment variables; NULL prefix means "SYNTHGRID_". */
SG_API sg_status sg_config_apply_env(sg_config* config, const char* prefix, size_t* applied);
SG_API sg_status sg_config_validate(const sg_config* config, const char* stage);

/* Number of known keys and the key at an index, for help output. */
SG_API size_t sg_config_key_count(void);
SG_API const char* sg_config_key(size_t index);

/* ---- pipeline ---- */

typedef enum sg_log_level { SG_LOG_INFO = 0, SG_LOG_WARNING = 1 } sg_log_level;
typedef void (*sg_log_fn)(void* user, sg_log_level level, const char* message);

/* stage: "build", "profiles", "simulate", "upgrade" or "report". */
SG_API sg_status sg_run_stage(const sg_config* config, const char* stage, sg_log_fn log, void* user);

#ifdef __cplusplus
}
#endif

#endif
