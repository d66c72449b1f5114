// SPDX-License-Identifier: Apache-2.0
//
// Day-level prediction from per-interval counts of active tracks, using
// nearest neighbors under Sakoe-Chiba banded DTW with LB_Keogh pruning.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "daywatch/core.hpp"

namespace daywatch {

struct CountSeries {
    Date date;
    std::uint32_t theta = 15;  // seconds per interval
    std::vector<double> counts;
    int label = -1;
};

struct NNConfig {
    std::size_t k = 1;
    std::size_t band_radius = 2;
    bool prune = true;

    void validate() const;
};

struct CountSeriesDiagnostics {
    std::size_t points_past_end = 0;  // points at or beyond the nominal duration
};

/// counts[s] = number of distinct tracks with a point whose frame lies in
/// [theta*s*fps, theta*(s+1)*fps). Throws ConfigError unless theta divides
/// the duration in seconds and frame_rate > 0.
CountSeries count_series(const DayRecord& day, std::uint32_t theta, double frame_rate,
                         std::uint32_t duration_minutes, CountSeriesDiagnostics* diagnostics = nullptr);

/// Banded DTW with squared-difference cost and steps (1,1), (1,0), (0,1);
/// returns the square root of the optimal accumulated cost. Throws
/// InvalidInput on a length mismatch.
double dtw_distance(std::span<const double> a, std::span<const double> b, std::size_t radius);
double dtw_distance(const CountSeries& a, const CountSeries& b, std::size_t radius);

/// Upper and lower envelopes of `series` over windows [i-r, i+r].
struct Envelope {
    std::vector<double> upper;
    std::vector<double> lower;
};
Envelope envelope(std::span<const double> series, std::size_t radius);

/// Linear-time lower bound of dtw_distance(query, candidate, radius).
double lb_keogh(std::span<const double> query, const Envelope& candidate_envelope);
double lb_keogh(std::span<const double> query, std::span<const double> candidate, std::size_t radius);
double lb_keogh(const CountSeries& query, const CountSeries& candidate, std::size_t radius);

struct Neighbor {
    std::size_t index = 0;
    double distance = 0.0;
};

struct KnnResult {
    int label = 0;
    std::vector<Neighbor> neighbors;  // ascending distance, ties by index
    std::size_t dtw_evaluations = 0;
    std::size_t pruned = 0;
};

/// Majority label of the k nearest training series. Equal distances favor
/// the earlier training index; a tied vote goes to the label of the nearest
/// neighbor. Pruning never changes the result.
KnnResult knn_predict(const CountSeries& test, std::span<const CountSeries> training, const NNConfig& config);

/// First ceil(n/2) series train, the rest test. Throws InvalidInput for n < 2.
std::pair<std::vector<CountSeries>, std::vector<CountSeries>> split_half(std::span<const CountSeries> series);

struct TimeSeriesParams {
    std::uint32_t theta = 15;
    NNConfig nn;
};

struct TimeSeriesReport {
    struct Row {
        Date date;
        int predicted = 0;
        int label = -1;
        Date neighbor_date;
        double neighbor_distance = 0.0;
    };
    std::vector<CountSeries> series;  // every day, chronological
    std::size_t training_size = 0;
    std::size_t unlabeled_training = 0;  // dropped from the training half
    std::vector<Row> rows;
};

/// Count series for every day, chronological 50:50 split, then k-NN for
/// every test day against the labeled training days.
TimeSeriesReport run_timeseries_pipeline(const Dataset& dataset, const TimeSeriesParams& params);

/// `date,predicted,label,nn_date,nn_distance`
std::string timeseries_report_csv(const TimeSeriesReport& report);
/// `date,c_0,...,c_{S-1}`
std::string count_series_csv(std::span<const CountSeries> series);

}  // namespace daywatch
