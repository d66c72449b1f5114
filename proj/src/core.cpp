// SPDX-License-Identifier: Apache-2.0
#include "daywatch/core.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <unordered_map>

#include "daywatch/error.hpp"
#include "daywatch/io.hpp"

namespace daywatch {

namespace {

namespace chr = std::chrono;

template <typename T>
bool parse_number(std::string_view text, T& out) {
    text = io::trim(text);
    if (text.empty()) return false;
    if constexpr (std::is_integral_v<T>) {
        if (text.front() == '+' || text.front() == '-') return false;
    } else {
        if (text.front() == '+') text.remove_prefix(1);
    }
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, out);
    return ec == std::errc() && ptr == end;
}

bool parse_real(std::string_view text, double& out) {
    return parse_number(text, out) && std::isfinite(out);
}

}  // namespace

std::string_view weekday_name(Weekday w) {
    static constexpr std::string_view names[] = {"Monday", "Tuesday",  "Wednesday", "Thursday",
                                                 "Friday", "Saturday", "Sunday"};
    return names[static_cast<int>(w)];
}

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
    if (!ymd.ok())
        throw InvalidInput("invalid calendar date " + std::to_string(year) + "-" +
                           std::to_string(month) + "-" + std::to_string(day));
    return Date(static_cast<std::int32_t>(chr::sys_days{ymd}.time_since_epoch().count()));
}

Date Date::parse(std::string_view text) {
    text = io::trim(text);
    const auto bad = [&] { return ParseError(0, "invalid date '" + std::string(text) + "'"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (text[i] < '0' || text[i] > '9') throw bad();
    int y = 0;
    unsigned m = 0, d = 0;
    std::from_chars(text.data(), text.data() + 4, y);
    std::from_chars(text.data() + 5, text.data() + 7, m);
    std::from_chars(text.data() + 8, text.data() + 10, d);
    const chr::year_month_day ymd{chr::year{y}, chr::month{m}, chr::day{d}};
    if (!ymd.ok()) throw bad();
    return Date(static_cast<std::int32_t>(chr::sys_days{ymd}.time_since_epoch().count()));
}

Weekday Date::weekday() const noexcept {
    const chr::weekday wd{chr::sys_days{chr::days{days_}}};
    return static_cast<Weekday>(wd.iso_encoding() - 1);
}

std::string Date::to_string() const {
    const chr::year_month_day ymd{chr::sys_days{chr::days{days_}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

std::string format_real(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void validate_track(const Track& track) {
    if (track.points.size() < 2)
        throw InvalidInput("track '" + track.id + "' has fewer than two points");
    for (std::size_t i = 0; i < track.points.size(); ++i) {
        const auto& p = track.points[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw InvalidInput("track '" + track.id + "' has a non-finite coordinate");
        if (i > 0 && track.points[i - 1].frame >= p.frame)
            throw InvalidInput("track '" + track.id + "' frames are not strictly increasing");
    }
}

SceneConfig SceneConfig::make(std::uint32_t width, std::uint32_t height,
                              std::uint32_t duration_minutes, std::uint32_t patch_size,
                              double frame_rate) {
    SceneConfig scene{width, height, duration_minutes, patch_size, frame_rate};
    scene.validate();
    return scene;
}

void SceneConfig::validate() const {
    if (width == 0 || height == 0) throw ConfigError("scene width and height must be positive");
    if (duration_minutes == 0) throw ConfigError("duration_minutes must be positive");
    if (patch_size == 0) throw ConfigError("patch_size must be positive");
    if (width % patch_size != 0 || height % patch_size != 0)
        throw ConfigError("patch_size " + std::to_string(patch_size) +
                          " does not divide scene " + std::to_string(width) + "x" +
                          std::to_string(height));
    if (!(frame_rate > 0.0) || !std::isfinite(frame_rate))
        throw ConfigError("frame_rate must be positive");
}

std::size_t DayRecord::point_count() const noexcept {
    std::size_t n = 0;
    for (const auto& t : tracks) n += t.points.size();
    return n;
}

void Dataset::normalize() {
    std::stable_sort(days.begin(), days.end(),
                     [](const DayRecord& a, const DayRecord& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < days.size(); ++i)
        if (days[i - 1].date == days[i].date)
            throw InvalidInput("duplicate day " + days[i].date.to_string());
}

const DayRecord* Dataset::find(Date date) const noexcept {
    const auto it = std::lower_bound(days.begin(), days.end(), date,
                                     [](const DayRecord& d, Date v) { return d.date < v; });
    return it != days.end() && it->date == date ? &*it : nullptr;
}

ParsedDay parse_day_file(std::string_view text, Date date) {
    ParsedDay out;
    out.day.date = date;

    std::unordered_map<std::string, std::size_t> index;
    std::vector<Track> tracks;
    std::vector<std::vector<std::size_t>> source_lines;

    std::size_t line_no = 0;
    for (auto line : io::lines(text)) {
        ++line_no;
        if (io::trim(line).empty()) continue;
        ++out.diagnostics.lines;
        const auto fields = io::split(line, ',');
        if (fields.size() != 4)
            throw ParseError(line_no, "expected 4 fields, found " + std::to_string(fields.size()));
        const auto id = io::trim(fields[0]);
        if (id.empty()) throw ParseError(line_no, "empty track id");
        TrackPoint p;
        if (!parse_number(fields[1], p.frame))
            throw ParseError(line_no, "frame '" + std::string(fields[1]) + "' is not a non-negative integer");
        if (!parse_real(fields[2], p.x))
            throw ParseError(line_no, "x '" + std::string(fields[2]) + "' is not a finite number");
        if (!parse_real(fields[3], p.y))
            throw ParseError(line_no, "y '" + std::string(fields[3]) + "' is not a finite number");

        auto [it, inserted] = index.try_emplace(std::string(id), tracks.size());
        if (inserted) {
            tracks.push_back(Track{std::string(id), {}});
            source_lines.emplace_back();
        }
        tracks[it->second].points.push_back(p);
        source_lines[it->second].push_back(line_no);
    }

    for (std::size_t t = 0; t < tracks.size(); ++t) {
        auto& pts = tracks[t].points;
        std::vector<std::size_t> order(pts.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return pts[a].frame < pts[b].frame; });
        std::vector<TrackPoint> sorted;
        sorted.reserve(pts.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i > 0 && pts[order[i]].frame == pts[order[i - 1]].frame)
                throw ParseError(source_lines[t][order[i]],
                                 "duplicate frame " + std::to_string(pts[order[i]].frame) +
                                     " for track '" + tracks[t].id + "'");
            sorted.push_back(pts[order[i]]);
        }
        pts = std::move(sorted);
        if (pts.size() < 2) {
            ++out.diagnostics.dropped_tracks;
            continue;
        }
        out.day.tracks.push_back(std::move(tracks[t]));
    }
    return out;
}

ParsedDay parse_day_file(std::string_view text, Date date, const SceneConfig& scene) {
    auto out = parse_day_file(text, date);
    for (const auto& t : out.day.tracks)
        for (const auto& p : t.points)
            if (!scene.contains(p.x, p.y)) ++out.diagnostics.out_of_bounds_points;
    return out;
}

std::string serialize_day(const DayRecord& day) {
    std::string out;
    for (const auto& t : day.tracks) {
        for (const auto& p : t.points) {
            out += t.id;
            out += ',';
            out += std::to_string(p.frame);
            out += ',';
            out += format_real(p.x);
            out += ',';
            out += format_real(p.y);
            out += '\n';
        }
    }
    return out;
}

LabelMap load_annotations(std::string_view text) {
    LabelMap labels;
    std::size_t line_no = 0;
    for (auto line : io::lines(text)) {
        ++line_no;
        if (io::trim(line).empty()) continue;
        const auto fields = io::split(line, ',');
        if (fields.size() != 2)
            throw ParseError(line_no, "expected 'YYYY-MM-DD,label'");
        Date date;
        try {
            date = Date::parse(fields[0]);
        } catch (const ParseError& e) {
            throw ParseError(line_no, e.what());
        }
        int label = -1;
        if (!parse_number(fields[1], label) || (label != 0 && label != 1))
            throw ParseError(line_no, "label '" + std::string(io::trim(fields[1])) + "' is not 0 or 1");
        labels[date] = label;
    }
    return labels;
}

std::string serialize_annotations(const LabelMap& labels) {
    std::string out;
    for (const auto& [date, label] : labels) out += date.to_string() + "," + std::to_string(label) + "\n";
    return out;
}

void apply_labels(Dataset& dataset, const LabelMap& labels) {
    for (auto& day : dataset.days)
        if (const auto it = labels.find(day.date); it != labels.end()) day.label = it->second;
}

std::set<Date> parse_date_list(std::string_view text) {
    std::set<Date> out;
    std::size_t line_no = 0;
    for (auto line : io::lines(text)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = io::trim(line);
        if (line.empty()) continue;
        try {
            out.insert(Date::parse(line));
        } catch (const ParseError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return out;
}

Dataset filter_days(const Dataset& dataset, const std::set<Date>& exclusion) {
    Dataset out;
    out.scene = dataset.scene;
    out.days.reserve(dataset.days.size());
    for (const auto& day : dataset.days)
        if (!exclusion.contains(day.date)) out.days.push_back(day);
    return out;
}

SceneConfig parse_scene_config(std::string_view text) {
    SceneConfig scene;
    bool have_width = false, have_height = false;
    std::size_t line_no = 0;
    for (auto line : io::lines(text)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = io::trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const auto key = io::trim(line.substr(0, eq));
        auto value = io::trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);

        const auto want_uint = [&](std::uint32_t& dst) {
            if (!parse_number(value, dst))
                throw ParseError(line_no, std::string(key) + " must be a non-negative integer");
        };
        if (key == "width") {
            want_uint(scene.width);
            have_width = true;
        } else if (key == "height") {
            want_uint(scene.height);
            have_height = true;
        } else if (key == "duration_minutes") {
            want_uint(scene.duration_minutes);
        } else if (key == "patch_size") {
            want_uint(scene.patch_size);
        } else if (key == "frame_rate") {
            if (!parse_real(value, scene.frame_rate))
                throw ParseError(line_no, "frame_rate must be a number");
        } else {
            throw ParseError(line_no, "unknown key '" + std::string(key) + "'");
        }
    }
    if (!have_width || !have_height) throw ConfigError("scene config requires width and height");
    scene.validate();
    return scene;
}

std::string serialize_scene_config(const SceneConfig& scene) {
    std::string out;
    out += "width = " + std::to_string(scene.width) + "\n";
    out += "height = " + std::to_string(scene.height) + "\n";
    out += "duration_minutes = " + std::to_string(scene.duration_minutes) + "\n";
    out += "patch_size = " + std::to_string(scene.patch_size) + "\n";
    out += "frame_rate = " + format_real(scene.frame_rate) + "\n";
    return out;
}

Dataset load_dataset(const std::string& directory, LoadDiagnostics* diagnostics) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(directory, ec)) throw IoError("'" + directory + "' is not a directory");

    std::vector<std::pair<Date, fs::path>> files;
    for (const auto& entry : fs::directory_iterator(directory)) {
        if (!entry.is_regular_file()) continue;
        const auto name = entry.path().filename().string();
        if (name.size() != 14 || entry.path().extension() != ".csv") continue;
        Date date;
        try {
            date = Date::parse(std::string_view(name).substr(0, 10));
        } catch (const ParseError&) {
            continue;
        }
        files.emplace_back(date, entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no day files found in '" + directory + "'");

    Dataset dataset;
    const auto scene_path = (fs::path(directory) / "scene.toml").string();
    try {
        dataset.scene = parse_scene_config(io::read_file(scene_path));
    } catch (const ParseError& e) {
        throw ParseError(0, scene_path + ": " + e.what());
    }

    LoadDiagnostics diag;
    for (const auto& [date, path] : files) {
        ParsedDay parsed;
        try {
            parsed = parse_day_file(io::read_file(path.string()), date, dataset.scene);
        } catch (const ParseError& e) {
            throw ParseError(0, path.string() + ": " + e.what());
        }
        ++diag.day_files;
        diag.totals.lines += parsed.diagnostics.lines;
        diag.totals.dropped_tracks += parsed.diagnostics.dropped_tracks;
        diag.totals.out_of_bounds_points += parsed.diagnostics.out_of_bounds_points;
        dataset.days.push_back(std::move(parsed.day));
    }
    if (diagnostics) *diagnostics = diag;
    return dataset;
}

void save_dataset(const Dataset& dataset, const std::string& directory) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(directory, ec);
    if (ec) throw IoError("cannot create '" + directory + "': " + ec.message());
    io::write_file_atomic((fs::path(directory) / "scene.toml").string(),
                          serialize_scene_config(dataset.scene));
    LabelMap labels;
    for (const auto& day : dataset.days) {
        io::write_file_atomic((fs::path(directory) / (day.date.to_string() + ".csv")).string(),
                              serialize_day(day));
        if (day.labeled()) labels[day.date] = day.label;
    }
    if (!labels.empty())
        io::write_file_atomic((fs::path(directory) / "labels.csv").string(),
                              serialize_annotations(labels));
}

}  // namespace daywatch
