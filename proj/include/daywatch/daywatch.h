/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface of libdaywatch.
 *
 * Every object is an opaque handle created by a dw_*_create / dw_*_load /
 * dw_*_compute call and released with the matching dw_*_free. Functions that
 * can fail return a dw_status; on failure dw_last_error() describes the
 * problem for the calling thread until its next failing call. Output
 * parameters are left untouched on failure.
 */
#ifndef DAYWATCH_H
#define DAYWATCH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(DAYWATCH_BUILDING)
#    define DW_API __declspec(dllexport)
#  else
#    define DW_API __declspec(dllimport)
#  endif
#else
#  define DW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dw_status {
    DW_OK = 0,
    DW_ERR_INVALID_ARGUMENT = 1, /* null handle, bad value, invariant violation */
    DW_ERR_PARSE = 2,            /* malformed input text */
    DW_ERR_CONFIG = 3,           /* inconsistent configuration */
    DW_ERR_IO = 4,               /* unreadable or unwritable file */
    DW_ERR_UNDECIDABLE = 5,      /* e.g. a day without tracks */
    DW_ERR_DEGENERATE = 6,       /* numerically degenerate input */
    DW_ERR_INTERNAL = 7
} dw_status;

typedef struct dw_dataset dw_dataset;
typedef struct dw_heatmap dw_heatmap;
typedef struct dw_footmap dw_footmap;
typedef struct dw_clusters dw_clusters;
typedef struct dw_traj_report dw_traj_report;
typedef struct dw_ts_report dw_ts_report;

DW_API const char* dw_version(void);
DW_API const char* dw_last_error(void);
DW_API const char* dw_status_name(dw_status status);

/* ---- datasets ---------------------------------------------------------- */

typedef struct dw_load_info {
    uint64_t day_files;
    uint64_t dropped_tracks;       /* fewer than two points */
    uint64_t out_of_bounds_points; /* kept, only tallied */
} dw_load_info;

/* Loads `scene.toml` and every `YYYY-MM-DD.csv` of `directory`. When
 * `labels_path` is non-null that annotation file is applied. `info` may be
 * null. */
DW_API dw_status dw_dataset_load(const char* directory, const char* labels_path, dw_dataset** out,
                                 dw_load_info* info);

/* Synthetic archive. `spec_json` may be null for the built-in two-lane
 * scene; `days` overrides the spec's day count when non-zero. */
DW_API dw_status dw_dataset_synthesize(const char* spec_json, uint64_t seed, uint32_t days, dw_dataset** out);

/* Directory layout readable by dw_dataset_load, plus `labels.csv`. */
DW_API dw_status dw_dataset_save(const dw_dataset* dataset, const char* directory);

/* Applies an annotation file (`YYYY-MM-DD,label` lines). */
DW_API dw_status dw_dataset_apply_labels(dw_dataset* dataset, const char* labels_path);

/* Removes the dates listed (one per line) in `dates_path`. */
DW_API dw_status dw_dataset_exclude_file(dw_dataset* dataset, const char* dates_path);
DW_API dw_status dw_dataset_exclude(dw_dataset* dataset, const char* const* dates, size_t count);

DW_API size_t dw_dataset_day_count(const dw_dataset* dataset);
DW_API uint64_t dw_dataset_track_count(const dw_dataset* dataset);
DW_API uint64_t dw_dataset_point_count(const dw_dataset* dataset);
/* Writes `YYYY-MM-DD` and a terminating NUL into `buffer` (11 bytes). */
DW_API dw_status dw_dataset_day_date(const dw_dataset* dataset, size_t index, char buffer[11]);
/* -1 unlabeled, else 0 or 1. */
DW_API int dw_dataset_day_label(const dw_dataset* dataset, size_t index);
DW_API void dw_dataset_free(dw_dataset* dataset);

/* ---- heatmap / footmap ------------------------------------------------- */

DW_API dw_status dw_heatmap_compute(const dw_dataset* dataset, dw_heatmap** out);
DW_API uint32_t dw_heatmap_width(const dw_heatmap* heatmap);
DW_API uint32_t dw_heatmap_height(const dw_heatmap* heatmap);
DW_API uint64_t dw_heatmap_cell(const dw_heatmap* heatmap, uint32_t row, uint32_t col);
DW_API uint64_t dw_heatmap_total(const dw_heatmap* heatmap);
DW_API uint64_t dw_heatmap_out_of_bounds(const dw_heatmap* heatmap);
DW_API dw_status dw_heatmap_write_csv(const dw_heatmap* heatmap, const char* path);
DW_API dw_status dw_heatmap_write_ppm(const dw_heatmap* heatmap, const char* path);
DW_API void dw_heatmap_free(dw_heatmap* heatmap);

DW_API dw_status dw_footmap_compute(const dw_dataset* dataset, dw_footmap** out);
DW_API uint32_t dw_footmap_pools(const dw_footmap* footmap);
DW_API size_t dw_footmap_days(const dw_footmap* footmap);
DW_API uint64_t dw_footmap_value(const dw_footmap* footmap, uint32_t pool, size_t day);
DW_API uint64_t dw_footmap_total(const dw_footmap* footmap);
DW_API dw_status dw_footmap_write_csv(const dw_footmap* footmap, const char* path);
DW_API dw_status dw_footmap_write_ppm(const dw_footmap* footmap, const char* path);
DW_API dw_status dw_footmap_write_dates(const dw_footmap* footmap, const char* path);
DW_API void dw_footmap_free(dw_footmap* footmap);

/* ---- clustering -------------------------------------------------------- */

typedef struct dw_cluster_params {
    double eps;            /* pixels, > 0 */
    uint32_t min_lines;    /* >= 1 */
    int mdl_partition;     /* non-zero: MDL characteristic points */
    double gamma;          /* sweep spacing; negative means eps / 2 */
} dw_cluster_params;

DW_API void dw_cluster_params_default(dw_cluster_params* params);

/* Clusters every track of the listed days together. */
DW_API dw_status dw_clusters_compute(const dw_dataset* dataset, const char* const* dates, size_t count,
                                     const dw_cluster_params* params, dw_clusters** out);
DW_API size_t dw_clusters_count(const dw_clusters* clusters);
DW_API size_t dw_clusters_noise(const dw_clusters* clusters);
DW_API dw_status dw_clusters_write_representatives(const dw_clusters* clusters, const char* path);
DW_API dw_status dw_clusters_write_membership(const dw_clusters* clusters, const char* path);
DW_API void dw_clusters_free(dw_clusters* clusters);

/* ---- predictions ------------------------------------------------------- */

typedef struct dw_confusion {
    uint64_t tp, fp, fn, tn;
} dw_confusion;

typedef struct dw_metrics {
    double precision, recall, f1;
} dw_metrics;

typedef struct dw_traj_params {
    dw_cluster_params clustering;
    double delta;  /* distance guard, px^2 */
    double lambda; /* day threshold on the anomalous-track ratio */
    int32_t omega; /* window span, days */
    int32_t epsilon; /* stride, days */
} dw_traj_params;

DW_API void dw_traj_params_default(dw_traj_params* params);

typedef struct dw_traj_row {
    char date[11];
    uint64_t total_tracks;
    uint64_t anomalous_tracks;
    double psi;
    int predicted;
    int label;
    uint64_t clusters;
} dw_traj_row;

/* `keep_tracks` retains per-track diagnostics for dw_traj_report_write_tracks. */
DW_API dw_status dw_predict_trajectory(const dw_dataset* dataset, const dw_traj_params* params, int keep_tracks,
                                       dw_traj_report** out);
DW_API size_t dw_traj_report_rows(const dw_traj_report* report);
DW_API dw_status dw_traj_report_row(const dw_traj_report* report, size_t index, dw_traj_row* row);
DW_API size_t dw_traj_report_undecidable(const dw_traj_report* report);
DW_API dw_status dw_traj_report_write_csv(const dw_traj_report* report, const char* path);
DW_API dw_status dw_traj_report_write_tracks(const dw_traj_report* report, const char* path);
/* Over rows carrying a label. */
DW_API dw_status dw_traj_report_confusion(const dw_traj_report* report, dw_confusion* out);
DW_API void dw_traj_report_free(dw_traj_report* report);

typedef struct dw_ts_params {
    uint32_t theta;       /* seconds per interval */
    uint32_t k;           /* neighbors */
    uint32_t band_radius; /* Sakoe-Chiba radius */
    int prune;            /* LB_Keogh pruning */
} dw_ts_params;

DW_API void dw_ts_params_default(dw_ts_params* params);

typedef struct dw_ts_row {
    char date[11];
    int predicted;
    int label;
    char nn_date[11];
    double nn_distance;
} dw_ts_row;

DW_API dw_status dw_predict_timeseries(const dw_dataset* dataset, const dw_ts_params* params, dw_ts_report** out);
DW_API size_t dw_ts_report_rows(const dw_ts_report* report);
DW_API dw_status dw_ts_report_row(const dw_ts_report* report, size_t index, dw_ts_row* row);
DW_API size_t dw_ts_report_training_size(const dw_ts_report* report);
DW_API dw_status dw_ts_report_write_csv(const dw_ts_report* report, const char* path);
DW_API dw_status dw_ts_report_write_series(const dw_ts_report* report, const char* path);
DW_API dw_status dw_ts_report_confusion(const dw_ts_report* report, dw_confusion* out);
DW_API void dw_ts_report_free(dw_ts_report* report);

/* ---- evaluation -------------------------------------------------------- */

DW_API dw_status dw_metrics_compute(const dw_confusion* cm, dw_metrics* out);
DW_API double dw_round2(double value);

/* Confusion of a prediction CSV (`date,predicted[,label]` header) against
 * an annotation file. A null `truth_path` uses the prediction file's own
 * label column. */
DW_API dw_status dw_evaluate_files(const char* predictions_path, const char* truth_path, dw_confusion* out);

#ifdef __cplusplus
}
#endif

#endif /* DAYWATCH_H */
