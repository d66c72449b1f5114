// SPDX-License-Identifier: Apache-2.0
//
// Statistical track-level anomaly scoring against cluster representatives,
// lifted to a day-level decision, and the same-weekday sliding windows that
// pair three training days with one test day.
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "daywatch/clustering.hpp"
#include "daywatch/core.hpp"

namespace daywatch {

/// Rate used when every training member coincides with the representative.
inline constexpr double kEtaCap = 1e6;

struct ClusterStat {
    Track representative;
    double eta = 0.0;              // 1 / mean training distance, px^-2
    double gamma_threshold = 1.0;  // minimum training likelihood, in (0, 1]
    std::size_t training_count = 0;
};

/// Mean over points of `p` of the squared distance to the nearest point of
/// `q`. Not symmetric. Throws InvalidInput when either track is empty.
double track_distance(const Track& p, const Track& q);

/// exp(-eta * track_distance(track, representative)).
double likelihood(const Track& track, const ClusterStat& cluster);

/// Fits eta and the threshold from the member tracks of one cluster.
ClusterStat fit_cluster_stats(const Track& representative, std::span<const Track> members,
                              double eta_cap = kEtaCap);
ClusterStat fit_cluster_stats(const SegmentCluster& cluster, std::span<const Track> members,
                              double eta_cap = kEtaCap);

struct TrackVerdict {
    bool anomalous = false;
    std::size_t best_cluster = 0;  // argmax likelihood, smallest index on ties
    double likelihood = 0.0;
    double distance = 0.0;
};

/// Anomalous iff the best cluster's likelihood is below its threshold and
/// the distance to its representative exceeds `delta`.
TrackVerdict classify_track(const Track& track, std::span<const ClusterStat> model, double delta = 1000.0);

struct DayPrediction {
    Date date;
    std::size_t anomalous_tracks = 0;
    std::size_t total_tracks = 0;
    double psi = 0.0;
    int predicted = 0;
};

/// Day is anomalous iff the anomalous-track ratio reaches lambda (inclusive).
bool day_decision(double psi, double lambda);

/// Throws UndecidableError for a day without tracks, InvalidInput for an
/// empty model. `verdicts`, when given, receives one entry per track.
DayPrediction predict_day(const DayRecord& day, std::span<const ClusterStat> model, double delta = 1000.0,
                          double lambda = 0.01, std::vector<TrackVerdict>* verdicts = nullptr);

struct TimeScaleWindow {
    std::vector<Date> training_dates;  // oldest first; three for (28, 7)
    Date test_date;
};

/// For every day d with d-omega+epsilon, ..., d-epsilon all present, one
/// window training on those days and testing on d. Windows are ordered by
/// test date. omega must be a multiple of epsilon spanning at least two
/// strides; (28, 7) gives three previous same-weekday days. A missing day
/// suppresses the window instead of reaching further back.
std::vector<TimeScaleWindow> schedule_windows(const Dataset& dataset, int omega = 28, int epsilon = 7);

struct TrajectoryParams {
    ClusterParams clustering;
    double delta = 1000.0;
    double lambda = 0.01;
    double eta_cap = kEtaCap;
    int omega = 28;
    int epsilon = 7;
};

/// Model for one window: cluster the training tracks and fit every cluster
/// on the tracks contributing segments to it.
std::vector<ClusterStat> fit_window_model(const Dataset& dataset, const TimeScaleWindow& window,
                                          const TrajectoryParams& params);

struct TrackDiagnostic {
    Date date;
    std::string track_id;
    TrackVerdict verdict;
};

struct TrajectoryReport {
    struct Row {
        TimeScaleWindow window;
        DayPrediction prediction;
        std::size_t clusters = 0;
        int label = -1;
    };
    std::vector<Row> rows;
    std::vector<TrackDiagnostic> tracks;
    std::vector<Date> undecidable;  // test days without a model or without tracks
};

TrajectoryReport run_trajectory_pipeline(const Dataset& dataset, const TrajectoryParams& params,
                                         bool keep_track_diagnostics = false);

/// `date,weekday,n_total,n_ano,psi,predicted,label`
std::string trajectory_report_csv(const TrajectoryReport& report);
/// `date,track_id,cluster,distance,likelihood,anomalous`
std::string trajectory_tracks_csv(const TrajectoryReport& report);

}  // namespace daywatch
