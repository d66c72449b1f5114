// SPDX-License-Identifier: Apache-2.0
#include "daywatch/trajectory_predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "daywatch/error.hpp"

namespace daywatch {

double track_distance(const Track& p, const Track& q) {
    if (p.points.empty() || q.points.empty()) throw InvalidInput("track distance of an empty track");
    double total = 0.0;
    for (const auto& a : p.points) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& b : q.points) {
            const double dx = a.x - b.x, dy = a.y - b.y;
            best = std::min(best, dx * dx + dy * dy);
        }
        total += best;
    }
    return total / static_cast<double>(p.points.size());
}

double likelihood(const Track& track, const ClusterStat& cluster) {
    return std::exp(-cluster.eta * track_distance(track, cluster.representative));
}

ClusterStat fit_cluster_stats(const Track& representative, std::span<const Track> members, double eta_cap) {
    if (members.empty()) throw InvalidInput("cluster statistics need at least one member track");
    ClusterStat stat;
    stat.representative = representative;
    stat.training_count = members.size();

    std::vector<double> d;
    d.reserve(members.size());
    double sum = 0.0;
    for (const auto& m : members) {
        d.push_back(track_distance(m, representative));
        sum += d.back();
    }
    if (sum == 0.0) {
        stat.eta = eta_cap;
        stat.gamma_threshold = 1.0;
        return stat;
    }
    stat.eta = static_cast<double>(members.size()) / sum;
    double gamma = 1.0;
    for (double v : d) gamma = std::min(gamma, std::exp(-stat.eta * v));
    stat.gamma_threshold = gamma;
    return stat;
}

ClusterStat fit_cluster_stats(const SegmentCluster& cluster, std::span<const Track> members, double eta_cap) {
    return fit_cluster_stats(cluster.representative, members, eta_cap);
}

TrackVerdict classify_track(const Track& track, std::span<const ClusterStat> model, double delta) {
    if (model.empty()) throw InvalidInput("cannot classify a track against an empty model");
    TrackVerdict v;
    v.likelihood = -1.0;
    for (std::size_t j = 0; j < model.size(); ++j) {
        const double dist = track_distance(track, model[j].representative);
        const double lik = std::exp(-model[j].eta * dist);
        if (lik > v.likelihood) {
            v.likelihood = lik;
            v.distance = dist;
            v.best_cluster = j;
        }
    }
    v.anomalous = v.likelihood < model[v.best_cluster].gamma_threshold && v.distance > delta;
    return v;
}

bool day_decision(double psi, double lambda) { return psi >= lambda; }

DayPrediction predict_day(const DayRecord& day, std::span<const ClusterStat> model, double delta, double lambda,
                          std::vector<TrackVerdict>* verdicts) {
    if (day.tracks.empty()) throw UndecidableError("day " + day.date.to_string() + " has no tracks");
    if (model.empty()) throw InvalidInput("cannot predict day " + day.date.to_string() + " with an empty model");
    DayPrediction out;
    out.date = day.date;
    out.total_tracks = day.tracks.size();
    for (const auto& t : day.tracks) {
        const auto v = classify_track(t, model, delta);
        if (v.anomalous) ++out.anomalous_tracks;
        if (verdicts) verdicts->push_back(v);
    }
    out.psi = static_cast<double>(out.anomalous_tracks) / static_cast<double>(out.total_tracks);
    out.predicted = day_decision(out.psi, lambda) ? 1 : 0;
    return out;
}

std::vector<TimeScaleWindow> schedule_windows(const Dataset& dataset, int omega, int epsilon) {
    if (epsilon <= 0 || omega <= epsilon || omega % epsilon != 0)
        throw ConfigError("time scale needs omega a multiple of epsilon, at least two strides");
    const int training = omega / epsilon - 1;
    std::vector<TimeScaleWindow> out;
    for (const auto& day : dataset.days) {
        TimeScaleWindow w;
        w.test_date = day.date;
        bool complete = true;
        for (int k = training; k >= 1; --k) {
            const Date d = day.date.plus_days(-k * epsilon);
            if (!dataset.find(d)) {
                complete = false;
                break;
            }
            w.training_dates.push_back(d);
        }
        if (complete) out.push_back(std::move(w));
    }
    return out;
}

std::vector<ClusterStat> fit_window_model(const Dataset& dataset, const TimeScaleWindow& window,
                                          const TrajectoryParams& params) {
    std::vector<TrackRef> refs;
    std::map<std::pair<Date, std::string_view>, const Track*> by_id;
    for (const Date d : window.training_dates) {
        const DayRecord* day = dataset.find(d);
        if (!day) throw InvalidInput("training day " + d.to_string() + " is not in the dataset");
        for (const auto& t : day->tracks) {
            refs.push_back({d, &t});
            by_id[{d, t.id}] = &t;
        }
    }
    const auto clusters = cluster_tracks(std::span<const TrackRef>(refs), params.clustering);

    std::vector<ClusterStat> model;
    model.reserve(clusters.clusters.size());
    for (const auto& c : clusters.clusters) {
        std::vector<Track> members;
        for (const auto& [day, id] : c.member_tracks()) members.push_back(*by_id.at({day, id}));
        model.push_back(fit_cluster_stats(c, members, params.eta_cap));
    }
    return model;
}

TrajectoryReport run_trajectory_pipeline(const Dataset& dataset, const TrajectoryParams& params,
                                         bool keep_track_diagnostics) {
    params.clustering.validate();
    TrajectoryReport report;
    for (const auto& window : schedule_windows(dataset, params.omega, params.epsilon)) {
        const DayRecord& test = *dataset.find(window.test_date);
        const auto model = fit_window_model(dataset, window, params);
        if (model.empty() || test.tracks.empty()) {
            report.undecidable.push_back(window.test_date);
            continue;
        }
        std::vector<TrackVerdict> verdicts;
        TrajectoryReport::Row row;
        row.window = window;
        row.prediction = predict_day(test, model, params.delta, params.lambda,
                                     keep_track_diagnostics ? &verdicts : nullptr);
        row.clusters = model.size();
        row.label = test.label;
        report.rows.push_back(std::move(row));
        for (std::size_t i = 0; i < verdicts.size(); ++i)
            report.tracks.push_back({test.date, test.tracks[i].id, verdicts[i]});
    }
    return report;
}

std::string trajectory_report_csv(const TrajectoryReport& report) {
    std::string out = "date,weekday,n_total,n_ano,psi,predicted,label\n";
    for (const auto& row : report.rows) {
        const auto& p = row.prediction;
        out += p.date.to_string() + "," + std::string(weekday_name(p.date.weekday())) + "," +
               std::to_string(p.total_tracks) + "," + std::to_string(p.anomalous_tracks) + "," +
               format_real(p.psi) + "," + std::to_string(p.predicted) + "," +
               (row.label >= 0 ? std::to_string(row.label) : std::string()) + "\n";
    }
    return out;
}

std::string trajectory_tracks_csv(const TrajectoryReport& report) {
    std::string out = "date,track_id,cluster,distance,likelihood,anomalous\n";
    for (const auto& t : report.tracks)
        out += t.date.to_string() + "," + t.track_id + "," + std::to_string(t.verdict.best_cluster) + "," +
               format_real(t.verdict.distance) + "," + format_real(t.verdict.likelihood) + "," +
               (t.verdict.anomalous ? "1" : "0") + "\n";
    return out;
}

}  // namespace daywatch
