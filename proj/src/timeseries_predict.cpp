// SPDX-License-Identifier: Apache-2.0
#include "daywatch/timeseries_predict.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "daywatch/error.hpp"

namespace daywatch {

void NNConfig::validate() const {
    if (k < 1) throw ConfigError("k must be at least 1");
}

CountSeries count_series(const DayRecord& day, std::uint32_t theta, double frame_rate,
                         std::uint32_t duration_minutes, CountSeriesDiagnostics* diagnostics) {
    if (theta == 0) throw ConfigError("theta must be positive");
    if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) throw ConfigError("frame_rate must be positive");
    const std::uint64_t seconds = std::uint64_t{duration_minutes} * 60;
    if (seconds == 0 || seconds % theta != 0)
        throw ConfigError("theta " + std::to_string(theta) + " s does not divide the " +
                          std::to_string(duration_minutes) + "-minute duration");
    const auto intervals = static_cast<std::size_t>(seconds / theta);
    const double frames_per_interval = static_cast<double>(theta) * frame_rate;

    CountSeries out;
    out.date = day.date;
    out.theta = theta;
    out.label = day.label;
    out.counts.assign(intervals, 0.0);
    CountSeriesDiagnostics diag;
    for (const auto& track : day.tracks) {
        // Frames are increasing, so touched intervals come out non-decreasing.
        std::size_t last = std::numeric_limits<std::size_t>::max();
        for (const auto& p : track.points) {
            const auto s = static_cast<std::size_t>(std::floor(static_cast<double>(p.frame) / frames_per_interval));
            if (s >= intervals) {
                ++diag.points_past_end;
                continue;
            }
            if (s != last) {
                out.counts[s] += 1.0;
                last = s;
            }
        }
    }
    if (diagnostics) *diagnostics = diag;
    return out;
}

double dtw_distance(std::span<const double> a, std::span<const double> b, std::size_t radius) {
    if (a.size() != b.size())
        throw InvalidInput("DTW needs equal lengths, got " + std::to_string(a.size()) + " and " +
                           std::to_string(b.size()));
    const std::size_t n = a.size();
    if (n == 0) return 0.0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> prev(n, inf), curr(n, inf);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i > radius ? i - radius : 0;
        const std::size_t hi = std::min(n - 1, i + radius);
        std::fill(curr.begin(), curr.end(), inf);
        for (std::size_t j = lo; j <= hi; ++j) {
            const double diff = a[i] - b[j];
            const double cost = diff * diff;
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else {
                best = inf;
                if (i > 0) best = std::min(best, prev[j]);
                if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);
                if (j > 0) best = std::min(best, curr[j - 1]);
            }
            curr[j] = cost + best;
        }
        std::swap(prev, curr);
    }
    return std::sqrt(prev[n - 1]);
}

double dtw_distance(const CountSeries& a, const CountSeries& b, std::size_t radius) {
    return dtw_distance(a.counts, b.counts, radius);
}

Envelope envelope(std::span<const double> series, std::size_t radius) {
    const std::size_t n = series.size();
    Envelope env{std::vector<double>(n), std::vector<double>(n)};
    // Monotone deques give the sliding max/min in linear time.
    std::deque<std::size_t> maxq, minq;
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t hi = std::min(n - 1, i + radius);
        for (; next <= hi; ++next) {
            while (!maxq.empty() && series[maxq.back()] <= series[next]) maxq.pop_back();
            maxq.push_back(next);
            while (!minq.empty() && series[minq.back()] >= series[next]) minq.pop_back();
            minq.push_back(next);
        }
        const std::size_t lo = i > radius ? i - radius : 0;
        while (maxq.front() < lo) maxq.pop_front();
        while (minq.front() < lo) minq.pop_front();
        env.upper[i] = series[maxq.front()];
        env.lower[i] = series[minq.front()];
    }
    return env;
}

double lb_keogh(std::span<const double> query, const Envelope& env) {
    if (query.size() != env.upper.size())
        throw InvalidInput("LB_Keogh needs equal lengths, got " + std::to_string(query.size()) + " and " +
                           std::to_string(env.upper.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i < query.size(); ++i) {
        const double q = query[i];
        if (q > env.upper[i]) {
            const double d = q - env.upper[i];
            sum += d * d;
        } else if (q < env.lower[i]) {
            const double d = q - env.lower[i];
            sum += d * d;
        }
    }
    return std::sqrt(sum);
}

double lb_keogh(std::span<const double> query, std::span<const double> candidate, std::size_t radius) {
    if (query.size() != candidate.size())
        throw InvalidInput("LB_Keogh needs equal lengths, got " + std::to_string(query.size()) + " and " +
                           std::to_string(candidate.size()));
    return lb_keogh(query, envelope(candidate, radius));
}

double lb_keogh(const CountSeries& query, const CountSeries& candidate, std::size_t radius) {
    return lb_keogh(query.counts, candidate.counts, radius);
}

KnnResult knn_predict(const CountSeries& test, std::span<const CountSeries> training, const NNConfig& config) {
    config.validate();
    if (training.empty()) throw InvalidInput("k-NN needs a non-empty training set");
    for (const auto& t : training) {
        if (t.label < 0) throw InvalidInput("training series " + t.date.to_string() + " is unlabeled");
        if (t.counts.size() != test.counts.size())
            throw InvalidInput("training series " + t.date.to_string() + " has a different length");
    }

    KnnResult result;
    std::vector<Neighbor>& best = result.neighbors;  // sorted by (distance, index)
    const std::size_t k = std::min(config.k, training.size());
    for (std::size_t i = 0; i < training.size(); ++i) {
        if (config.prune && best.size() == k) {
            const double bound = lb_keogh(test.counts, training[i].counts, config.band_radius);
            if (bound > best.back().distance) {
                ++result.pruned;
                continue;
            }
        }
        const double d = dtw_distance(test.counts, training[i].counts, config.band_radius);
        ++result.dtw_evaluations;
        // Scanning in index order, a later candidate must be strictly closer.
        if (best.size() == k && !(d < best.back().distance)) continue;
        const auto pos = std::upper_bound(best.begin(), best.end(), d,
                                          [](double v, const Neighbor& n) { return v < n.distance; });
        best.insert(pos, Neighbor{i, d});
        if (best.size() > k) best.pop_back();
    }

    std::size_t ones = 0;
    for (const auto& n : best) ones += training[n.index].label == 1;
    const std::size_t zeros = best.size() - ones;
    if (ones != zeros)
        result.label = ones > zeros ? 1 : 0;
    else
        result.label = training[best.front().index].label;
    return result;
}

std::pair<std::vector<CountSeries>, std::vector<CountSeries>> split_half(std::span<const CountSeries> series) {
    if (series.size() < 2) throw InvalidInput("a 50:50 split needs at least two series");
    const std::size_t cut = (series.size() + 1) / 2;
    return {std::vector<CountSeries>(series.begin(), series.begin() + static_cast<std::ptrdiff_t>(cut)),
            std::vector<CountSeries>(series.begin() + static_cast<std::ptrdiff_t>(cut), series.end())};
}

TimeSeriesReport run_timeseries_pipeline(const Dataset& dataset, const TimeSeriesParams& params) {
    params.nn.validate();
    TimeSeriesReport report;
    for (const auto& day : dataset.days)
        report.series.push_back(count_series(day, params.theta, dataset.scene.frame_rate,
                                             dataset.scene.duration_minutes));
    auto [train, test] = split_half(report.series);
    report.training_size = train.size();

    std::vector<CountSeries> labeled;
    for (auto& s : train) {
        if (s.label >= 0)
            labeled.push_back(std::move(s));
        else
            ++report.unlabeled_training;
    }
    if (labeled.empty()) throw InvalidInput("no labeled day in the training half");

    for (const auto& s : test) {
        const auto r = knn_predict(s, labeled, params.nn);
        const auto& nn = r.neighbors.front();
        report.rows.push_back({s.date, r.label, s.label, labeled[nn.index].date, nn.distance});
    }
    return report;
}

std::string timeseries_report_csv(const TimeSeriesReport& report) {
    std::string out = "date,predicted,label,nn_date,nn_distance\n";
    for (const auto& r : report.rows)
        out += r.date.to_string() + "," + std::to_string(r.predicted) + "," +
               (r.label >= 0 ? std::to_string(r.label) : std::string()) + "," + r.neighbor_date.to_string() +
               "," + format_real(r.neighbor_distance) + "\n";
    return out;
}

std::string count_series_csv(std::span<const CountSeries> series) {
    std::string out = "date";
    const std::size_t width = series.empty() ? 0 : series.front().counts.size();
    for (std::size_t i = 0; i < width; ++i) out += ",c_" + std::to_string(i);
    out += '\n';
    for (const auto& s : series) {
        out += s.date.to_string();
        for (double c : s.counts) out += "," + format_real(c);
        out += '\n';
    }
    return out;
}

}  // namespace daywatch
