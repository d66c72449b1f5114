// SPDX-License-Identifier: Apache-2.0
//
// extern "C" surface over the C++ core. Exceptions never cross this file:
// each entry point translates them into a dw_status and a thread-local
// message.
#include "daywatch/daywatch.h"

#include <cstring>
#include <map>
#include <memory>
#include <new>
#include <set>
#include <string>
#include <vector>

#include "daywatch/clustering.hpp"
#include "daywatch/core.hpp"
#include "daywatch/descriptive.hpp"
#include "daywatch/error.hpp"
#include "daywatch/evaluation.hpp"
#include "daywatch/io.hpp"
#include "daywatch/synthetic.hpp"
#include "daywatch/timeseries_predict.hpp"
#include "daywatch/trajectory_predict.hpp"

struct dw_dataset {
    daywatch::Dataset value;
};
struct dw_heatmap {
    daywatch::HeatmapGrid value;
};
struct dw_footmap {
    daywatch::Footmap value;
};
struct dw_clusters {
    daywatch::ClusteringResult value;
};
struct dw_traj_report {
    daywatch::TrajectoryReport value;
};
struct dw_ts_report {
    daywatch::TimeSeriesReport value;
};

namespace {

thread_local std::string last_error;

dw_status fail(dw_status status, const std::string& message) {
    last_error = message;
    return status;
}

dw_status to_status(daywatch::ErrorKind kind) {
    using daywatch::ErrorKind;
    switch (kind) {
        case ErrorKind::invalid_input: return DW_ERR_INVALID_ARGUMENT;
        case ErrorKind::parse: return DW_ERR_PARSE;
        case ErrorKind::config: return DW_ERR_CONFIG;
        case ErrorKind::io: return DW_ERR_IO;
        case ErrorKind::undecidable: return DW_ERR_UNDECIDABLE;
        case ErrorKind::degenerate: return DW_ERR_DEGENERATE;
    }
    return DW_ERR_INTERNAL;
}

template <typename F>
dw_status guarded(F&& body) noexcept {
    try {
        body();
        return DW_OK;
    } catch (const daywatch::Error& e) {
        return fail(to_status(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(DW_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(DW_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(DW_ERR_INTERNAL, "unknown error");
    }
}

void require(const void* p, const char* what) {
    if (!p) throw daywatch::InvalidInput(std::string(what) + " must not be null");
}

void copy_date(daywatch::Date d, char* out) {
    const auto s = d.to_string();
    std::memcpy(out, s.c_str(), 11);
}

daywatch::ClusterParams to_cpp(const dw_cluster_params& p) {
    daywatch::ClusterParams out;
    out.eps = p.eps;
    out.min_lines = p.min_lines;
    out.mdl_partition = p.mdl_partition != 0;
    out.smoothing_gamma = p.gamma < 0.0 ? p.eps / 2.0 : p.gamma;
    out.validate();
    return out;
}

daywatch::ConfusionMatrix labeled_confusion(const std::map<daywatch::Date, int>& predicted,
                                            const std::map<daywatch::Date, int>& truth) {
    return daywatch::confusion(predicted, truth);
}

void store(dw_confusion* out, const daywatch::ConfusionMatrix& cm) { *out = {cm.tp, cm.fp, cm.fn, cm.tn}; }

}  // namespace

extern "C" {

const char* dw_version(void) { return "1.0.0"; }

const char* dw_last_error(void) { return last_error.c_str(); }

const char* dw_status_name(dw_status status) {
    switch (status) {
        case DW_OK: return "ok";
        case DW_ERR_INVALID_ARGUMENT: return "invalid argument";
        case DW_ERR_PARSE: return "parse error";
        case DW_ERR_CONFIG: return "configuration error";
        case DW_ERR_IO: return "i/o error";
        case DW_ERR_UNDECIDABLE: return "undecidable";
        case DW_ERR_DEGENERATE: return "degenerate input";
        case DW_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

// ---- datasets ----

dw_status dw_dataset_load(const char* directory, const char* labels_path, dw_dataset** out, dw_load_info* info) {
    return guarded([&] {
        require(directory, "directory");
        require(out, "out");
        daywatch::LoadDiagnostics diag;
        auto ds = std::make_unique<dw_dataset>();
        ds->value = daywatch::load_dataset(directory, &diag);
        if (labels_path)
            daywatch::apply_labels(ds->value, daywatch::load_annotations(daywatch::io::read_file(labels_path)));
        if (info) *info = {diag.day_files, diag.totals.dropped_tracks, diag.totals.out_of_bounds_points};
        *out = ds.release();
    });
}

dw_status dw_dataset_synthesize(const char* spec_json, uint64_t seed, uint32_t days, dw_dataset** out) {
    return guarded([&] {
        require(out, "out");
        auto spec = spec_json ? daywatch::synthetic_spec_from_json(spec_json) : daywatch::two_lane_spec(28);
        if (days != 0) spec.days = days;
        auto ds = std::make_unique<dw_dataset>();
        ds->value = daywatch::generate_synthetic_dataset(spec, seed);
        *out = ds.release();
    });
}

dw_status dw_dataset_save(const dw_dataset* dataset, const char* directory) {
    return guarded([&] {
        require(dataset, "dataset");
        require(directory, "directory");
        daywatch::save_dataset(dataset->value, directory);
    });
}

dw_status dw_dataset_apply_labels(dw_dataset* dataset, const char* labels_path) {
    return guarded([&] {
        require(dataset, "dataset");
        require(labels_path, "labels_path");
        daywatch::apply_labels(dataset->value, daywatch::load_annotations(daywatch::io::read_file(labels_path)));
    });
}

dw_status dw_dataset_exclude_file(dw_dataset* dataset, const char* dates_path) {
    return guarded([&] {
        require(dataset, "dataset");
        require(dates_path, "dates_path");
        const auto dates = daywatch::parse_date_list(daywatch::io::read_file(dates_path));
        dataset->value = daywatch::filter_days(dataset->value, dates);
    });
}

dw_status dw_dataset_exclude(dw_dataset* dataset, const char* const* dates, size_t count) {
    return guarded([&] {
        require(dataset, "dataset");
        if (count) require(dates, "dates");
        std::set<daywatch::Date> exclusion;
        for (size_t i = 0; i < count; ++i) {
            require(dates[i], "date");
            exclusion.insert(daywatch::Date::parse(dates[i]));
        }
        dataset->value = daywatch::filter_days(dataset->value, exclusion);
    });
}

size_t dw_dataset_day_count(const dw_dataset* dataset) { return dataset ? dataset->value.days.size() : 0; }

uint64_t dw_dataset_track_count(const dw_dataset* dataset) {
    if (!dataset) return 0;
    uint64_t n = 0;
    for (const auto& d : dataset->value.days) n += d.tracks.size();
    return n;
}

uint64_t dw_dataset_point_count(const dw_dataset* dataset) {
    if (!dataset) return 0;
    uint64_t n = 0;
    for (const auto& d : dataset->value.days) n += d.point_count();
    return n;
}

dw_status dw_dataset_day_date(const dw_dataset* dataset, size_t index, char buffer[11]) {
    return guarded([&] {
        require(dataset, "dataset");
        require(buffer, "buffer");
        if (index >= dataset->value.days.size()) throw daywatch::InvalidInput("day index out of range");
        copy_date(dataset->value.days[index].date, buffer);
    });
}

int dw_dataset_day_label(const dw_dataset* dataset, size_t index) {
    if (!dataset || index >= dataset->value.days.size()) return -1;
    return dataset->value.days[index].label;
}

void dw_dataset_free(dw_dataset* dataset) { delete dataset; }

// ---- heatmap / footmap ----

dw_status dw_heatmap_compute(const dw_dataset* dataset, dw_heatmap** out) {
    return guarded([&] {
        require(dataset, "dataset");
        require(out, "out");
        *out = new dw_heatmap{daywatch::accumulate_heatmap(dataset->value)};
    });
}

uint32_t dw_heatmap_width(const dw_heatmap* h) { return h ? h->value.width : 0; }
uint32_t dw_heatmap_height(const dw_heatmap* h) { return h ? h->value.height : 0; }

uint64_t dw_heatmap_cell(const dw_heatmap* h, uint32_t row, uint32_t col) {
    if (!h || row >= h->value.height || col >= h->value.width) return 0;
    return h->value.counts.at(row, col);
}

uint64_t dw_heatmap_total(const dw_heatmap* h) { return h ? h->value.counts.total() : 0; }
uint64_t dw_heatmap_out_of_bounds(const dw_heatmap* h) { return h ? h->value.out_of_bounds : 0; }

dw_status dw_heatmap_write_csv(const dw_heatmap* h, const char* path) {
    return guarded([&] {
        require(h, "heatmap");
        require(path, "path");
        daywatch::io::write_file_atomic(path, daywatch::counts_to_csv(h->value.counts));
    });
}

dw_status dw_heatmap_write_ppm(const dw_heatmap* h, const char* path) {
    return guarded([&] {
        require(h, "heatmap");
        require(path, "path");
        daywatch::io::write_file_atomic(path, daywatch::encode_ppm(daywatch::render_heatmap_log(h->value)));
    });
}

void dw_heatmap_free(dw_heatmap* h) { delete h; }

dw_status dw_footmap_compute(const dw_dataset* dataset, dw_footmap** out) {
    return guarded([&] {
        require(dataset, "dataset");
        require(out, "out");
        *out = new dw_footmap{daywatch::compute_footmap(dataset->value)};
    });
}

uint32_t dw_footmap_pools(const dw_footmap* f) { return f ? f->value.pool_count : 0; }
size_t dw_footmap_days(const dw_footmap* f) { return f ? f->value.day_dates.size() : 0; }

uint64_t dw_footmap_value(const dw_footmap* f, uint32_t pool, size_t day) {
    if (!f || pool >= f->value.pool_count || day >= f->value.day_dates.size()) return 0;
    return f->value.values.at(pool, day);
}

uint64_t dw_footmap_total(const dw_footmap* f) { return f ? f->value.values.total() : 0; }

dw_status dw_footmap_write_csv(const dw_footmap* f, const char* path) {
    return guarded([&] {
        require(f, "footmap");
        require(path, "path");
        daywatch::io::write_file_atomic(path, daywatch::counts_to_csv(f->value.values));
    });
}

dw_status dw_footmap_write_ppm(const dw_footmap* f, const char* path) {
    return guarded([&] {
        require(f, "footmap");
        require(path, "path");
        daywatch::io::write_file_atomic(path, daywatch::encode_ppm(daywatch::render_footmap(f->value)));
    });
}

dw_status dw_footmap_write_dates(const dw_footmap* f, const char* path) {
    return guarded([&] {
        require(f, "footmap");
        require(path, "path");
        daywatch::io::write_file_atomic(path, daywatch::footmap_dates_csv(f->value));
    });
}

void dw_footmap_free(dw_footmap* f) { delete f; }

// ---- clustering ----

void dw_cluster_params_default(dw_cluster_params* params) {
    if (!params) return;
    const daywatch::ClusterParams d;
    *params = {d.eps, static_cast<uint32_t>(d.min_lines), d.mdl_partition ? 1 : 0, -1.0};
}

dw_status dw_clusters_compute(const dw_dataset* dataset, const char* const* dates, size_t count,
                              const dw_cluster_params* params, dw_clusters** out) {
    return guarded([&] {
        require(dataset, "dataset");
        require(params, "params");
        require(out, "out");
        if (count) require(dates, "dates");
        std::vector<daywatch::TrackRef> refs;
        for (size_t i = 0; i < count; ++i) {
            require(dates[i], "date");
            const auto date = daywatch::Date::parse(dates[i]);
            const auto* day = dataset->value.find(date);
            if (!day) throw daywatch::InvalidInput("day " + date.to_string() + " is not in the dataset");
            for (const auto& t : day->tracks) refs.push_back({date, &t});
        }
        *out = new dw_clusters{daywatch::cluster_tracks(std::span<const daywatch::TrackRef>(refs), to_cpp(*params))};
    });
}

size_t dw_clusters_count(const dw_clusters* c) { return c ? c->value.clusters.size() : 0; }
size_t dw_clusters_noise(const dw_clusters* c) { return c ? c->value.noise.size() : 0; }

dw_status dw_clusters_write_representatives(const dw_clusters* c, const char* path) {
    return guarded([&] {
        require(c, "clusters");
        require(path, "path");
        daywatch::io::write_file_atomic(path, daywatch::representatives_csv(c->value));
    });
}

dw_status dw_clusters_write_membership(const dw_clusters* c, const char* path) {
    return guarded([&] {
        require(c, "clusters");
        require(path, "path");
        daywatch::io::write_file_atomic(path, daywatch::membership_csv(c->value));
    });
}

void dw_clusters_free(dw_clusters* c) { delete c; }

// ---- trajectory prediction ----

void dw_traj_params_default(dw_traj_params* params) {
    if (!params) return;
    const daywatch::TrajectoryParams d;
    dw_cluster_params_default(&params->clustering);
    params->delta = d.delta;
    params->lambda = d.lambda;
    params->omega = d.omega;
    params->epsilon = d.epsilon;
}

dw_status dw_predict_trajectory(const dw_dataset* dataset, const dw_traj_params* params, int keep_tracks,
                                dw_traj_report** out) {
    return guarded([&] {
        require(dataset, "dataset");
        require(params, "params");
        require(out, "out");
        daywatch::TrajectoryParams p;
        p.clustering = to_cpp(params->clustering);
        p.delta = params->delta;
        p.lambda = params->lambda;
        p.omega = params->omega;
        p.epsilon = params->epsilon;
        if (!(p.delta >= 0.0)) throw daywatch::ConfigError("delta must be non-negative");
        if (!(p.lambda >= 0.0 && p.lambda <= 1.0)) throw daywatch::ConfigError("lambda must lie in [0, 1]");
        *out = new dw_traj_report{daywatch::run_trajectory_pipeline(dataset->value, p, keep_tracks != 0)};
    });
}

size_t dw_traj_report_rows(const dw_traj_report* r) { return r ? r->value.rows.size() : 0; }

dw_status dw_traj_report_row(const dw_traj_report* r, size_t index, dw_traj_row* row) {
    return guarded([&] {
        require(r, "report");
        require(row, "row");
        if (index >= r->value.rows.size()) throw daywatch::InvalidInput("row index out of range");
        const auto& src = r->value.rows[index];
        copy_date(src.prediction.date, row->date);
        row->total_tracks = src.prediction.total_tracks;
        row->anomalous_tracks = src.prediction.anomalous_tracks;
        row->psi = src.prediction.psi;
        row->predicted = src.prediction.predicted;
        row->label = src.label;
        row->clusters = src.clusters;
    });
}

size_t dw_traj_report_undecidable(const dw_traj_report* r) { return r ? r->value.undecidable.size() : 0; }

dw_status dw_traj_report_write_csv(const dw_traj_report* r, const char* path) {
    return guarded([&] {
        require(r, "report");
        require(path, "path");
        daywatch::io::write_file_atomic(path, daywatch::trajectory_report_csv(r->value));
    });
}

dw_status dw_traj_report_write_tracks(const dw_traj_report* r, const char* path) {
    return guarded([&] {
        require(r, "report");
        require(path, "path");
        daywatch::io::write_file_atomic(path, daywatch::trajectory_tracks_csv(r->value));
    });
}

dw_status dw_traj_report_confusion(const dw_traj_report* r, dw_confusion* out) {
    return guarded([&] {
        require(r, "report");
        require(out, "out");
        std::map<daywatch::Date, int> predicted, truth;
        for (const auto& row : r->value.rows) {
            predicted[row.prediction.date] = row.prediction.predicted;
            if (row.label >= 0) truth[row.prediction.date] = row.label;
        }
        store(out, labeled_confusion(predicted, truth));
    });
}

void dw_traj_report_free(dw_traj_report* r) { delete r; }

// ---- time-series prediction ----

void dw_ts_params_default(dw_ts_params* params) {
    if (!params) return;
    const daywatch::TimeSeriesParams d;
    *params = {d.theta, static_cast<uint32_t>(d.nn.k), static_cast<uint32_t>(d.nn.band_radius), d.nn.prune ? 1 : 0};
}

dw_status dw_predict_timeseries(const dw_dataset* dataset, const dw_ts_params* params, dw_ts_report** out) {
    return guarded([&] {
        require(dataset, "dataset");
        require(params, "params");
        require(out, "out");
        daywatch::TimeSeriesParams p;
        p.theta = params->theta;
        p.nn.k = params->k;
        p.nn.band_radius = params->band_radius;
        p.nn.prune = params->prune != 0;
        *out = new dw_ts_report{daywatch::run_timeseries_pipeline(dataset->value, p)};
    });
}

size_t dw_ts_report_rows(const dw_ts_report* r) { return r ? r->value.rows.size() : 0; }

dw_status dw_ts_report_row(const dw_ts_report* r, size_t index, dw_ts_row* row) {
    return guarded([&] {
        require(r, "report");
        require(row, "row");
        if (index >= r->value.rows.size()) throw daywatch::InvalidInput("row index out of range");
        const auto& src = r->value.rows[index];
        copy_date(src.date, row->date);
        row->predicted = src.predicted;
        row->label = src.label;
        copy_date(src.neighbor_date, row->nn_date);
        row->nn_distance = src.neighbor_distance;
    });
}

size_t dw_ts_report_training_size(const dw_ts_report* r) { return r ? r->value.training_size : 0; }

dw_status dw_ts_report_write_csv(const dw_ts_report* r, const char* path) {
    return guarded([&] {
        require(r, "report");
        require(path, "path");
        daywatch::io::write_file_atomic(path, daywatch::timeseries_report_csv(r->value));
    });
}

dw_status dw_ts_report_write_series(const dw_ts_report* r, const char* path) {
    return guarded([&] {
        require(r, "report");
        require(path, "path");
        daywatch::io::write_file_atomic(path, daywatch::count_series_csv(r->value.series));
    });
}

dw_status dw_ts_report_confusion(const dw_ts_report* r, dw_confusion* out) {
    return guarded([&] {
        require(r, "report");
        require(out, "out");
        std::map<daywatch::Date, int> predicted, truth;
        for (const auto& row : r->value.rows) {
            predicted[row.date] = row.predicted;
            if (row.label >= 0) truth[row.date] = row.label;
        }
        store(out, labeled_confusion(predicted, truth));
    });
}

void dw_ts_report_free(dw_ts_report* r) { delete r; }

// ---- evaluation ----

dw_status dw_metrics_compute(const dw_confusion* cm, dw_metrics* out) {
    return guarded([&] {
        require(cm, "confusion");
        require(out, "out");
        const auto m = daywatch::metrics({cm->tp, cm->fp, cm->fn, cm->tn});
        *out = {m.precision, m.recall, m.f1};
    });
}

double dw_round2(double value) { return daywatch::round2(value); }

dw_status dw_evaluate_files(const char* predictions_path, const char* truth_path, dw_confusion* out) {
    return guarded([&] {
        require(predictions_path, "predictions_path");
        require(out, "out");
        const auto table = daywatch::parse_prediction_csv(daywatch::io::read_file(predictions_path));
        const auto truth =
            truth_path ? daywatch::load_annotations(daywatch::io::read_file(truth_path)) : table.labels;
        store(out, daywatch::confusion(table.predicted, truth));
    });
}

}  // extern "C"
