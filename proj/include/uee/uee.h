#ifndef UEE_UEE_H
#define UEE_UEE_H

/* C interface to the ultrafast extreme event toolkit.
 *
 * Every function returns a uee_status; on failure a message is available
 * from uee_last_error() on the calling thread until its next uee_ call.
 * Handles are opaque and owned by the caller once created. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define UEE_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define UEE_API __attribute__((visibility("default")))
#else
#  define UEE_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uee_status {
    UEE_OK = 0,
    UEE_INVALID_ARGUMENT = 1,
    UEE_IO = 2,
    UEE_PARSE = 3,
    UEE_INVARIANT = 4,
    UEE_EMPTY_INPUT = 5,
    UEE_INSUFFICIENT_QUOTES = 6,
    UEE_GENERATION = 7,
    UEE_OVERLAP = 8,
    UEE_INTERNAL = 9
} uee_status;

typedef enum uee_direction { UEE_CRASH = 0, UEE_SPIKE = 1 } uee_direction;
typedef enum uee_end_trigger { UEE_TREND_REVERSAL = 0, UEE_TRADING_PAUSE = 1, UEE_STREAM_END = 2 } uee_end_trigger;
typedef enum uee_regime {
    UEE_SINGLE_ORDER_DOMINANT = 0,
    UEE_SINGLE_ORDER_MAJOR = 1,
    UEE_INCREMENTAL = 2
} uee_regime;

UEE_API const char* uee_last_error(void);
UEE_API const char* uee_status_name(uee_status status);
UEE_API const char* uee_version(void);

/* Run configuration. Keys use the command-line spelling without dashes:
 * "trades", "quotes", "sectors", "events-file", "out", "format",
 * "quote-format", "criterion.change", "criterion.duration",
 * "criterion.trades", "criterion.pause", "recovery.n", "recovery.upper",
 * "recovery.lower", "mechanism.major", "mechanism.dominant", "histogram.bin",
 * "jobs", "seed",
 * "synth.symbols", "synth.venues", "synth.days", "synth.trades",
 * "synth.events", "synth.near-misses", "synth.post-trades",
 * "synth.first-day". */
typedef struct uee_config uee_config;

UEE_API uee_status uee_config_create(uee_config** out);
UEE_API void uee_config_destroy(uee_config* config);
UEE_API uee_status uee_config_set(uee_config* config, const char* key, const char* value);
/* JSON description of the effective configuration for `command`. The
 * string lives until the next call on this config. */
UEE_API uee_status uee_config_describe(const uee_config* config, const char* command, const char** json);

typedef struct uee_run_summary {
    size_t streams;
    size_t trades;
    size_t events;
    size_t rejected_rows;
    size_t files_written;
} uee_run_summary;

/* Runs "detect", "mechanism", "recover", "report" or "synth". */
UEE_API uee_status uee_run(const uee_config* config, const char* command, uee_run_summary* summary);
/* Process exit status for a failed run: 1 usage, 2 input/output, 3 internal. */
UEE_API int uee_exit_code(uee_status status);

/* Single stream of trades, in arrival order. */
typedef struct uee_trades uee_trades;

typedef struct uee_criterion {
    double min_relative_change;
    double max_duration;
    uint32_t min_trades;
    double pause_threshold;
} uee_criterion;

UEE_API void uee_criterion_default(uee_criterion* out);

UEE_API uee_status uee_trades_create(uee_trades** out);
UEE_API void uee_trades_destroy(uee_trades* trades);
/* Appends a trade; `second` is whole seconds since midnight, `price` a
 * decimal string with at most 8 fractional digits. */
UEE_API uee_status uee_trades_append(uee_trades* trades, int64_t second, const char* price, int64_t size);
/* Orders the stream and spreads trades of one second across it. */
UEE_API uee_status uee_trades_prepare(uee_trades* trades);
UEE_API size_t uee_trades_count(const uee_trades* trades);
UEE_API uee_status uee_trades_time(const uee_trades* trades, size_t index, double* t);

typedef struct uee_event {
    uee_direction direction;
    size_t start_index;
    size_t end_index;
    double t0_uee;
    double t0_rec;
    double size;
    uee_end_trigger end_trigger;
} uee_event;

typedef struct uee_events uee_events;

UEE_API uee_status uee_detect(const uee_trades* trades, const uee_criterion* criterion, uee_events** out);
UEE_API uee_status uee_detect_reference(const uee_trades* trades, const uee_criterion* criterion, uee_events** out);
UEE_API void uee_events_destroy(uee_events* events);
UEE_API size_t uee_events_count(const uee_events* events);
UEE_API uee_status uee_events_get(const uee_events* events, size_t index, uee_event* out);

/* eta_1..eta_horizon of event `index`; `*available` receives how many
 * entries were written (fewer near the end of the stream). */
UEE_API uee_status uee_recovery_profile(const uee_trades* trades, const uee_events* events, size_t index,
                                        size_t horizon, double* etas, size_t* available);

UEE_API uee_status uee_classify_jump(double max_jump, double major, double dominant, uee_regime* out);

#ifdef __cplusplus
}
#endif

#endif
