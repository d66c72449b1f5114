// SPDX-License-Identifier: Apache-2.0
#include "daywatch/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include <json.hpp>

#include "daywatch/error.hpp"

namespace daywatch {

namespace {

using json = nlohmann::json;

std::vector<Vec2> sample_positions(const LaneSpec& lane, std::vector<Vec2>& normals) {
    const double length = polyline_length(lane.centerline);
    std::vector<Vec2> out;
    normals.clear();
    const auto n = static_cast<std::size_t>(std::floor(length / lane.speed));
    for (std::size_t k = 0; k <= n; ++k) {
        Vec2 t;
        out.push_back(polyline_point(lane.centerline, static_cast<double>(k) * lane.speed, &t));
        normals.push_back({-t.y, t.x});
    }
    if (length - static_cast<double>(n) * lane.speed > 1e-9) {
        Vec2 t;
        out.push_back(polyline_point(lane.centerline, length, &t));
        normals.push_back({-t.y, t.x});
    }
    return out;
}

void validate_lane(const LaneSpec& lane, const char* what) {
    if (lane.centerline.size() < 2 || polyline_length(lane.centerline) <= 0.0)
        throw InvalidInput(std::string("invalid spec: ") + what + " needs a centerline of positive length");
    if (!(lane.speed > 0.0)) throw InvalidInput(std::string("invalid spec: ") + what + " speed must be positive");
    if (!(lane.sigma >= 0.0)) throw InvalidInput(std::string("invalid spec: ") + what + " sigma must be non-negative");
    if (!(lane.mean_count >= 0.0))
        throw InvalidInput(std::string("invalid spec: ") + what + " mean_count must be non-negative");
}

class TrackSampler {
public:
    TrackSampler(const LaneSpec& lane, std::uint64_t frames_per_day)
        : lane_(lane), frames_per_day_(frames_per_day) {
        positions_ = sample_positions(lane, normals_);
        if (positions_.size() > frames_per_day_)
            throw InvalidInput("invalid spec: lane traversal is longer than the video");
    }

    Track sample(std::string id, std::mt19937_64& rng) const {
        std::uniform_int_distribution<std::uint64_t> start_dist(0, frames_per_day_ - positions_.size());
        const std::uint64_t start = start_dist(rng);
        double offset = 0.0;
        if (lane_.sigma > 0.0) offset = std::normal_distribution<double>(0.0, lane_.sigma)(rng);
        std::normal_distribution<double> jitter(0.0, kJitterRatio * lane_.sigma);

        Track track{std::move(id), {}};
        track.points.reserve(positions_.size());
        for (std::size_t k = 0; k < positions_.size(); ++k) {
            const double lateral = lane_.sigma > 0.0 ? offset + jitter(rng) : 0.0;
            const Vec2 p = positions_[k] + lateral * normals_[k];
            track.points.push_back({start + k, p.x, p.y});
        }
        return track;
    }

private:
    const LaneSpec& lane_;
    std::uint64_t frames_per_day_;
    std::vector<Vec2> positions_;
    std::vector<Vec2> normals_;
};

std::uint64_t poisson(double mean, std::mt19937_64& rng) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<std::uint64_t>(mean)(rng);
}

}  // namespace

std::string_view anomaly_kind_name(AnomalyKind kind) {
    switch (kind) {
        case AnomalyKind::off_corridor: return "off_corridor";
        case AnomalyKind::surge: return "surge";
        case AnomalyKind::drop: return "drop";
    }
    return "?";
}

Dataset generate_synthetic_dataset(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.lanes.empty()) throw InvalidInput("invalid spec: no lanes");
    if (spec.days == 0) throw InvalidInput("invalid spec: zero days");
    spec.scene.validate();
    for (const auto& lane : spec.lanes) validate_lane(lane, "lane");
    const bool needs_corridor = std::any_of(spec.anomalies.begin(), spec.anomalies.end(), [](const auto& a) {
        return a.kind == AnomalyKind::off_corridor;
    });
    if (needs_corridor) validate_lane(spec.anomaly_corridor, "anomaly corridor");
    for (const auto& a : spec.anomalies) {
        if (a.day_index >= spec.days) throw InvalidInput("invalid spec: planted anomaly beyond the last day");
        if (!(a.magnitude >= 0.0)) throw InvalidInput("invalid spec: anomaly magnitude must be non-negative");
    }

    const auto frames_per_day = static_cast<std::uint64_t>(
        std::floor(spec.scene.duration_minutes * 60.0 * spec.scene.frame_rate));

    std::vector<TrackSampler> samplers;
    samplers.reserve(spec.lanes.size());
    for (const auto& lane : spec.lanes) samplers.emplace_back(lane, frames_per_day);
    std::optional<TrackSampler> corridor;
    if (needs_corridor) corridor.emplace(spec.anomaly_corridor, frames_per_day);

    Dataset dataset;
    dataset.scene = spec.scene;
    dataset.days.reserve(spec.days);
    std::mt19937_64 rng(seed);

    for (std::size_t d = 0; d < spec.days; ++d) {
        DayRecord day;
        day.date = spec.start.plus_days(static_cast<std::int32_t>(d));
        day.label = 0;

        double count_scale = 1.0;
        double extra_tracks = 0.0;
        for (const auto& a : spec.anomalies) {
            if (a.day_index != d) continue;
            day.label = 1;
            if (a.kind == AnomalyKind::off_corridor)
                extra_tracks += a.magnitude;
            else
                count_scale *= a.magnitude;
        }

        for (std::size_t l = 0; l < spec.lanes.size(); ++l) {
            const auto& lane = spec.lanes[l];
            if (!lane.active_on(day.weekday())) continue;
            const auto n = poisson(lane.mean_count * count_scale, rng);
            for (std::uint64_t i = 0; i < n; ++i)
                day.tracks.push_back(
                    samplers[l].sample("L" + std::to_string(l) + "-" + std::to_string(i), rng));
        }
        const auto extra = static_cast<std::uint64_t>(std::llround(extra_tracks));
        for (std::uint64_t i = 0; i < extra; ++i)
            day.tracks.push_back(corridor->sample("A-" + std::to_string(i), rng));

        dataset.days.push_back(std::move(day));
    }
    return dataset;
}

SyntheticSpec two_lane_spec(std::size_t days, std::vector<std::size_t> anomaly_days) {
    SyntheticSpec spec;
    spec.scene = SceneConfig::make(320, 240, 30, 80, 1.0);
    spec.start = Date::from_ymd(2012, 1, 2);  // a Monday
    spec.days = days;
    spec.lanes.push_back(LaneSpec{{{10, 135}, {310, 150}}, 30.0, 2.0, 4.0, 0x7F});
    spec.lanes.push_back(LaneSpec{{{310, 200}, {10, 226}}, 30.0, 2.0, 4.0, 0x7F});
    spec.anomaly_corridor = LaneSpec{{{20, 40}, {300, 70}}, 0.0, 2.0, 4.0, 0x7F};
    for (auto d : anomaly_days) spec.anomalies.push_back({d, AnomalyKind::off_corridor, 20.0});
    return spec;
}

SyntheticSpec four_lane_spec(std::size_t days) {
    SyntheticSpec spec;
    spec.scene = SceneConfig::make(320, 240, 30, 80, 1.0);
    spec.start = Date::from_ymd(2012, 1, 2);
    spec.days = days;
    spec.lanes.push_back(LaneSpec{{{10, 25}, {310, 40}}, 20.0, 2.0, 4.0, 0x7F});
    spec.lanes.push_back(LaneSpec{{{310, 85}, {10, 97}}, 20.0, 2.0, 4.0, 0x7F});
    spec.lanes.push_back(LaneSpec{{{10, 150}, {310, 140}}, 20.0, 2.0, 4.0, 0x7F});
    spec.lanes.push_back(LaneSpec{{{310, 215}, {10, 205}}, 20.0, 2.0, 4.0, 0x7F});
    spec.anomaly_corridor = LaneSpec{{{150, 10}, {170, 230}}, 0.0, 2.0, 4.0, 0x7F};
    return spec;
}

namespace {

json lane_to_json(const LaneSpec& lane) {
    json pts = json::array();
    for (const auto& p : lane.centerline) pts.push_back({p.x, p.y});
    json mask = json::array();
    for (int w = 0; w < 7; ++w)
        if (lane.active_on(static_cast<Weekday>(w))) mask.push_back(w);
    return {{"centerline", pts},
            {"mean_count", lane.mean_count},
            {"sigma", lane.sigma},
            {"speed", lane.speed},
            {"weekdays", mask}};
}

LaneSpec lane_from_json(const json& j, LaneSpec lane) {
    if (j.contains("centerline")) {
        lane.centerline.clear();
        for (const auto& p : j.at("centerline")) lane.centerline.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    lane.mean_count = j.value("mean_count", lane.mean_count);
    lane.sigma = j.value("sigma", lane.sigma);
    lane.speed = j.value("speed", lane.speed);
    if (j.contains("weekdays")) {
        lane.weekday_mask = 0;
        for (const auto& w : j.at("weekdays")) {
            const int v = w.get<int>();
            if (v < 0 || v > 6) throw InvalidInput("invalid spec: weekday index out of range");
            lane.weekday_mask |= static_cast<std::uint8_t>(1u << v);
        }
    }
    return lane;
}

AnomalyKind kind_from_string(const std::string& s) {
    if (s == "off_corridor") return AnomalyKind::off_corridor;
    if (s == "surge") return AnomalyKind::surge;
    if (s == "drop") return AnomalyKind::drop;
    throw InvalidInput("invalid spec: unknown anomaly kind '" + s + "'");
}

}  // namespace

SyntheticSpec synthetic_spec_from_json(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("synthetic spec: ") + e.what());
    }
    try {
        SyntheticSpec spec = two_lane_spec(j.value("days", std::size_t{28}));
        if (j.contains("scene")) {
            const auto& s = j.at("scene");
            spec.scene = SceneConfig::make(s.value("width", spec.scene.width), s.value("height", spec.scene.height),
                                           s.value("duration_minutes", spec.scene.duration_minutes),
                                           s.value("patch_size", spec.scene.patch_size),
                                           s.value("frame_rate", spec.scene.frame_rate));
        }
        if (j.contains("start")) spec.start = Date::parse(j.at("start").get<std::string>());
        if (j.contains("lanes")) {
            spec.lanes.clear();
            for (const auto& l : j.at("lanes")) spec.lanes.push_back(lane_from_json(l, LaneSpec{}));
        }
        if (j.contains("anomaly_corridor"))
            spec.anomaly_corridor = lane_from_json(j.at("anomaly_corridor"), spec.anomaly_corridor);
        if (j.contains("anomalies")) {
            for (const auto& a : j.at("anomalies")) {
                PlantedAnomaly p;
                p.day_index = a.at("day").get<std::size_t>();
                p.kind = kind_from_string(a.value("kind", std::string("off_corridor")));
                p.magnitude = a.value("magnitude", p.kind == AnomalyKind::off_corridor ? 20.0
                                                   : p.kind == AnomalyKind::surge     ? 2.0
                                                                                      : 0.5);
                spec.anomalies.push_back(p);
            }
        }
        return spec;
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("synthetic spec: ") + e.what());
    }
}

std::string synthetic_spec_to_json(const SyntheticSpec& spec) {
    json j;
    j["scene"] = {{"width", spec.scene.width},
                  {"height", spec.scene.height},
                  {"duration_minutes", spec.scene.duration_minutes},
                  {"patch_size", spec.scene.patch_size},
                  {"frame_rate", spec.scene.frame_rate}};
    j["start"] = spec.start.to_string();
    j["days"] = spec.days;
    j["lanes"] = json::array();
    for (const auto& l : spec.lanes) j["lanes"].push_back(lane_to_json(l));
    j["anomaly_corridor"] = lane_to_json(spec.anomaly_corridor);
    j["anomalies"] = json::array();
    for (const auto& a : spec.anomalies)
        j["anomalies"].push_back({{"day", a.day_index},
                                  {"kind", std::string(anomaly_kind_name(a.kind))},
                                  {"magnitude", a.magnitude}});
    return j.dump(2);
}

}  // namespace daywatch
