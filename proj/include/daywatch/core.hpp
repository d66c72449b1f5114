// SPDX-License-Identifier: Apache-2.0
//
// Domain model for day-partitioned trajectory archives: tracks, days,
// scene geometry, plus the text formats they are read from and written to.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace daywatch {

enum class Weekday : std::uint8_t { monday, tuesday, wednesday, thursday, friday, saturday, sunday };

std::string_view weekday_name(Weekday w);

/// Calendar date stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;

    static Date from_ymd(int year, unsigned month, unsigned day);
    static constexpr Date from_serial(std::int32_t days) { return Date(days); }

    /// Strict `YYYY-MM-DD`; throws ParseError on anything else.
    static Date parse(std::string_view text);

    std::int32_t serial() const noexcept { return days_; }
    Weekday weekday() const noexcept;
    std::string to_string() const;

    Date plus_days(std::int32_t n) const noexcept { return Date(days_ + n); }

    friend constexpr auto operator<=>(Date, Date) = default;

private:
    constexpr explicit Date(std::int32_t days) : days_(days) {}
    std::int32_t days_ = 0;
};

struct TrackPoint {
    std::uint64_t frame = 0;
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const TrackPoint&, const TrackPoint&) = default;
};

/// One object's path within one day. Points are ordered by strictly
/// increasing frame.
struct Track {
    std::string id;
    std::vector<TrackPoint> points;

    friend bool operator==(const Track&, const Track&) = default;
};

/// Throws InvalidInput unless the track has at least two points, strictly
/// increasing frames and finite coordinates.
void validate_track(const Track& track);

struct SceneConfig {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::uint32_t duration_minutes = 30;
    std::uint32_t patch_size = 80;
    double frame_rate = 1.0;

    /// Checked construction: positive sizes, patch_size dividing both scene
    /// dimensions, positive frame rate. Throws ConfigError.
    static SceneConfig make(std::uint32_t width, std::uint32_t height,
                            std::uint32_t duration_minutes = 30,
                            std::uint32_t patch_size = 80, double frame_rate = 1.0);

    void validate() const;

    std::uint32_t pools_x() const noexcept { return width / patch_size; }
    std::uint32_t pools_y() const noexcept { return height / patch_size; }
    std::uint32_t pool_count() const noexcept { return pools_x() * pools_y(); }

    bool contains(double x, double y) const noexcept {
        return x >= 0.0 && y >= 0.0 && x < static_cast<double>(width) &&
               y < static_cast<double>(height);
    }

    friend bool operator==(const SceneConfig&, const SceneConfig&) = default;
};

struct DayRecord {
    Date date;
    std::vector<Track> tracks;
    /// -1 when unlabeled, otherwise 0 (typical) or 1 (anomalous).
    int label = -1;

    Weekday weekday() const noexcept { return date.weekday(); }
    bool labeled() const noexcept { return label >= 0; }
    std::size_t point_count() const noexcept;

    friend bool operator==(const DayRecord&, const DayRecord&) = default;
};

struct Dataset {
    SceneConfig scene;
    std::vector<DayRecord> days;  // ascending, unique dates

    /// Sorts days by date; throws InvalidInput on a duplicate date.
    void normalize();
    const DayRecord* find(Date date) const noexcept;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct ParseDiagnostics {
    std::size_t lines = 0;
    std::size_t dropped_tracks = 0;  // fewer than two points
    std::size_t out_of_bounds_points = 0;
};

struct ParsedDay {
    DayRecord day;
    ParseDiagnostics diagnostics;
};

/// Parses one `track_id,frame,x,y` day file. Blank lines are ignored.
ParsedDay parse_day_file(std::string_view text, Date date);

/// Same, and tallies points outside the scene.
ParsedDay parse_day_file(std::string_view text, Date date, const SceneConfig& scene);

/// Inverse of parse_day_file. Coordinates use the shortest decimal form that
/// round-trips exactly.
std::string serialize_day(const DayRecord& day);

using LabelMap = std::map<Date, int>;

/// `YYYY-MM-DD,label` per line, label in {0,1}.
LabelMap load_annotations(std::string_view text);
std::string serialize_annotations(const LabelMap& labels);

/// Sets the label of every day listed in `labels`; other days are untouched.
void apply_labels(Dataset& dataset, const LabelMap& labels);

/// One `YYYY-MM-DD` per line; `#` starts a comment.
std::set<Date> parse_date_list(std::string_view text);

Dataset filter_days(const Dataset& dataset, const std::set<Date>& exclusion);

/// `key = value` lines; recognises width, height, duration_minutes,
/// patch_size and frame_rate.
SceneConfig parse_scene_config(std::string_view text);
std::string serialize_scene_config(const SceneConfig& scene);

struct LoadDiagnostics {
    std::size_t day_files = 0;
    ParseDiagnostics totals;
};

/// Reads `scene.toml` and every `YYYY-MM-DD.csv` in `directory`. Throws
/// IoError when the directory holds no day file.
Dataset load_dataset(const std::string& directory, LoadDiagnostics* diagnostics = nullptr);

/// Writes `scene.toml`, one CSV per day and `labels.csv` when any day is
/// labeled.
void save_dataset(const Dataset& dataset, const std::string& directory);

/// Shortest round-trip decimal rendering.
std::string format_real(double value);

}  // namespace daywatch
