// SPDX-License-Identifier: Apache-2.0
//
// Seeded generator of labeled trajectory archives. Normal days draw tracks
// along fixed lane corridors; planted anomalous days either add tracks along
// an off-lane corridor or scale the lane traffic up or down.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "daywatch/core.hpp"
#include "daywatch/geometry.hpp"

namespace daywatch {

struct LaneSpec {
    std::vector<Vec2> centerline;
    double mean_count = 30.0;  // Poisson mean of tracks per active day
    double sigma = 2.0;        // lateral noise, pixels
    double speed = 4.0;        // pixels per frame
    std::uint8_t weekday_mask = 0x7F;  // bit i set = active on Weekday(i)

    bool active_on(Weekday w) const noexcept {
        return (weekday_mask >> static_cast<int>(w)) & 1u;
    }
};

enum class AnomalyKind { off_corridor, surge, drop };

struct PlantedAnomaly {
    std::size_t day_index = 0;  // offset from the first generated day
    AnomalyKind kind = AnomalyKind::off_corridor;
    /// off_corridor: number of extra off-lane tracks.
    /// surge / drop: multiplier applied to every lane's mean count.
    double magnitude = 20.0;
};

struct SyntheticSpec {
    SceneConfig scene;
    Date start;
    std::size_t days = 0;
    std::vector<LaneSpec> lanes;
    LaneSpec anomaly_corridor;
    std::vector<PlantedAnomaly> anomalies;
};

/// Each track's lateral displacement is a per-track offset N(0, sigma) plus
/// per-point jitter N(0, kJitterRatio * sigma). Sample positions along the
/// centerline are the same for every track of a lane.
inline constexpr double kJitterRatio = 0.25;

/// Pure function of (spec, seed). Throws InvalidInput for an empty lane set,
/// zero days, or a planted anomaly outside the day range.
Dataset generate_synthetic_dataset(const SyntheticSpec& spec, std::uint64_t seed);

/// Two one-way lanes across a 320x240 scene and an off-lane corridor
/// through the empty upper part of the scene.
SyntheticSpec two_lane_spec(std::size_t days, std::vector<std::size_t> anomaly_days = {});

/// Four non-crossing one-way lanes.
SyntheticSpec four_lane_spec(std::size_t days);

/// JSON description; every field is optional and defaults to two_lane_spec.
SyntheticSpec synthetic_spec_from_json(std::string_view json_text);
std::string synthetic_spec_to_json(const SyntheticSpec& spec);

std::string_view anomaly_kind_name(AnomalyKind kind);

}  // namespace daywatch
