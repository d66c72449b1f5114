// SPDX-License-Identifier: Apache-2.0
#include "daywatch/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "daywatch/error.hpp"

namespace daywatch {

namespace {

Vec2 at(const Track& t, std::size_t i) { return {t.points[i].x, t.points[i].y}; }

double code_length(double v) { return std::log2(std::max(1.0, v)); }

// Perpendicular and angular deviation of `seg` from the base segment `base`.
// `base` is not required to be the longer one (the partitioner compares
// every original segment against the chord spanning it).
std::pair<double, double> deviation(Vec2 bs, Vec2 be, Vec2 ss, Vec2 se) {
    const Vec2 bd = be - bs, sd = se - ss;
    const double blen2 = dot(bd, bd);
    const double slen = norm(sd);
    if (blen2 == 0.0) return {0.5 * (distance(bs, ss) + distance(bs, se)), slen};
    const double blen = std::sqrt(blen2);
    const double l1 = std::abs(cross(bd, ss - bs)) / blen;
    const double l2 = std::abs(cross(bd, se - bs)) / blen;
    const double perp = (l1 + l2) > 0.0 ? (l1 * l1 + l2 * l2) / (l1 + l2) : 0.0;
    double ang = 0.0;
    if (slen > 0.0) {
        if (dot(bd, sd) < 0.0)
            ang = slen;
        else
            ang = std::abs(cross(bd, sd)) / blen;  // = slen * sin(theta)
    }
    return {perp, ang};
}

// Canonical ordering for distance evaluation: longer first, ties broken by
// coordinates so that d(a, b) and d(b, a) run the identical computation.
bool goes_first(const Segment& a, const Segment& b) {
    const double la = dot(a.end - a.start, a.end - a.start);
    const double lb = dot(b.end - b.start, b.end - b.start);
    if (la != lb) return la > lb;
    return std::tie(a.start.x, a.start.y, a.end.x, a.end.y) <= std::tie(b.start.x, b.start.y, b.end.x, b.end.y);
}

struct DisjointSets {
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a), b = find(b);
        if (a == b) return;
        // Smaller index becomes the root so a component's root is its minimum.
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
    std::vector<std::size_t> parent;
};

}  // namespace

void ClusterParams::validate() const {
    if (!(eps > 0.0)) throw ConfigError("eps must be positive");
    if (min_lines < 1) throw ConfigError("min_lines must be at least 1");
    if (!(smoothing_gamma >= 0.0)) throw ConfigError("smoothing gamma must be non-negative");
    if (!(weights.perpendicular >= 0.0 && weights.parallel >= 0.0 && weights.angle >= 0.0))
        throw ConfigError("segment distance weights must be non-negative");
}

std::vector<std::pair<Date, std::string>> SegmentCluster::member_tracks() const {
    std::set<std::pair<Date, std::string>> ids;
    for (const auto& s : members) ids.emplace(s.owner.day, s.owner.track_id);
    return {ids.begin(), ids.end()};
}

MdlCost mdl_cost(const Track& track, std::size_t first, std::size_t last) {
    MdlCost cost;
    const Vec2 cs = at(track, first), ce = at(track, last);
    cost.partitioned = code_length(distance(cs, ce));
    for (std::size_t k = first; k < last; ++k) {
        const Vec2 ss = at(track, k), se = at(track, k + 1);
        const auto [perp, ang] = deviation(cs, ce, ss, se);
        cost.partitioned += code_length(perp) + code_length(ang);
        cost.unpartitioned += code_length(distance(ss, se));
    }
    return cost;
}

std::vector<Segment> partition_track(const Track& track, bool mdl, Date day) {
    const std::size_t n = track.points.size();
    std::vector<std::size_t> characteristic;
    if (n == 0) return {};
    characteristic.push_back(0);
    if (mdl) {
        std::size_t start = 0, length = 1;
        while (start + length < n) {
            const std::size_t curr = start + length;
            const auto cost = mdl_cost(track, start, curr);
            if (cost.partitioned > cost.unpartitioned) {
                characteristic.push_back(curr - 1);
                start = curr - 1;
                length = 1;
            } else {
                ++length;
            }
        }
    } else {
        for (std::size_t i = 1; i + 1 < n; ++i) characteristic.push_back(i);
    }
    if (characteristic.back() != n - 1) characteristic.push_back(n - 1);

    std::vector<Segment> out;
    for (std::size_t i = 1; i < characteristic.size(); ++i) {
        const Vec2 s = at(track, characteristic[i - 1]), e = at(track, characteristic[i]);
        if (s == e) continue;
        out.push_back(Segment{s, e, SegmentOwner{day, track.id, out.size()}});
    }
    return out;
}

SegmentDistanceParts segment_distance_parts(const Segment& a, const Segment& b) {
    if (a.start == a.end || b.start == b.end) throw InvalidInput("segment distance of a zero-length segment");
    const Segment& lng = goes_first(a, b) ? a : b;
    const Segment& sht = &lng == &a ? b : a;

    const Vec2 d = lng.end - lng.start;
    const double len2 = dot(d, d);
    const auto project = [&](Vec2 p) { return dot(p - lng.start, d) / len2; };
    const double u1 = project(sht.start), u2 = project(sht.end);
    const Vec2 p1 = lng.start + u1 * d, p2 = lng.start + u2 * d;

    SegmentDistanceParts parts;
    const double l1 = distance(sht.start, p1), l2 = distance(sht.end, p2);
    parts.perpendicular = (l1 + l2) > 0.0 ? (l1 * l1 + l2 * l2) / (l1 + l2) : 0.0;

    const auto overhang = [&](double u, Vec2 p) {
        return u < 0.5 ? distance(lng.start, p) : distance(lng.end, p);
    };
    parts.parallel = std::min(overhang(u1, p1), overhang(u2, p2));

    const Vec2 sd = sht.end - sht.start;
    const double slen = norm(sd);
    if (dot(d, sd) < 0.0)
        parts.angle = slen;
    else
        parts.angle = std::abs(cross(d, sd)) / std::sqrt(len2);
    return parts;
}

double segment_distance(const Segment& a, const Segment& b, const SegmentWeights& w) {
    const auto p = segment_distance_parts(a, b);
    return w.perpendicular * p.perpendicular + w.parallel * p.parallel + w.angle * p.angle;
}

ClusteringResult cluster_segments(std::vector<Segment> segments, const ClusterParams& params) {
    params.validate();
    std::sort(segments.begin(), segments.end(), [](const Segment& a, const Segment& b) {
        if (a.owner != b.owner) return a.owner < b.owner;
        return std::tie(a.start.x, a.start.y, a.end.x, a.end.y) < std::tie(b.start.x, b.start.y, b.end.x, b.end.y);
    });
    const std::size_t n = segments.size();

    // Neighborhoods include the segment itself.
    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i) neighbors[i].push_back(i);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (segment_distance(segments[i], segments[j], params.weights) <= params.eps) {
                neighbors[i].push_back(j);
                neighbors[j].push_back(i);
            }
        }
    }

    std::vector<char> core(n);
    for (std::size_t i = 0; i < n; ++i) core[i] = neighbors[i].size() >= params.min_lines;

    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i)
        if (core[i])
            for (auto j : neighbors[i])
                if (core[j]) sets.unite(i, j);

    // Root of every core is the smallest core index of its component.
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> component(n, none);
    for (std::size_t i = 0; i < n; ++i) {
        if (core[i]) {
            component[i] = sets.find(i);
            continue;
        }
        std::size_t best = none;
        for (auto j : neighbors[i])
            if (core[j] && j < best) best = j;
        if (best != none) component[i] = sets.find(best);
    }

    std::map<std::size_t, std::vector<std::size_t>> groups;
    ClusteringResult result;
    for (std::size_t i = 0; i < n; ++i) {
        if (component[i] == none)
            result.noise.push_back(segments[i]);
        else
            groups[component[i]].push_back(i);
    }

    std::vector<std::size_t> demoted;
    for (auto& [root, members] : groups) {
        std::set<std::pair<Date, std::string_view>> tracks;
        for (auto i : members) tracks.emplace(segments[i].owner.day, segments[i].owner.track_id);
        if (tracks.size() < params.min_lines) {
            demoted.insert(demoted.end(), members.begin(), members.end());
            continue;
        }
        SegmentCluster cluster;
        for (auto i : members) cluster.members.push_back(segments[i]);
        result.clusters.push_back(std::move(cluster));
    }
    if (!demoted.empty()) {
        for (auto i : demoted) result.noise.push_back(segments[i]);
        std::sort(result.noise.begin(), result.noise.end(),
                  [](const Segment& a, const Segment& b) { return a.owner < b.owner; });
    }
    return result;
}

Track representative_track(const SegmentCluster& cluster, double gamma, std::size_t min_lines) {
    if (cluster.members.empty()) throw InvalidInput("representative of an empty cluster");
    Vec2 direction;
    double scale = 0.0;
    for (const auto& s : cluster.members) {
        direction = direction + (s.end - s.start);
        scale += s.length();
    }
    const double dlen = norm(direction);
    if (!(dlen > 1e-12 * std::max(1.0, scale)))
        throw DegenerateError("cluster member directions cancel out; no sweep direction");
    const Vec2 u = (1.0 / dlen) * direction;
    const Vec2 v{-u.y, u.x};

    struct Rotated {
        double x0, y0, x1, y1;
    };
    std::vector<Rotated> rotated;
    rotated.reserve(cluster.members.size());
    double lo = INFINITY, hi = -INFINITY;
    std::vector<double> endpoints;
    for (const auto& s : cluster.members) {
        Rotated r{dot(s.start, u), dot(s.start, v), dot(s.end, u), dot(s.end, v)};
        if (r.x1 < r.x0) {
            std::swap(r.x0, r.x1);
            std::swap(r.y0, r.y1);
        }
        lo = std::min(lo, r.x0);
        hi = std::max(hi, r.x1);
        endpoints.push_back(r.x0);
        endpoints.push_back(r.x1);
        rotated.push_back(r);
    }

    const double tol = 1e-9 * std::max({1.0, std::abs(lo), std::abs(hi)});
    std::vector<double> positions;
    if (gamma > 0.0) {
        for (std::size_t k = 0;; ++k) {
            const double pos = lo + static_cast<double>(k) * gamma;
            if (pos >= hi - tol) break;
            positions.push_back(pos);
        }
        positions.push_back(hi);
    } else {
        std::sort(endpoints.begin(), endpoints.end());
        for (double e : endpoints)
            if (positions.empty() || e - positions.back() > tol) positions.push_back(e);
    }

    Track rep;
    rep.id = "representative";
    for (double pos : positions) {
        std::size_t hits = 0;
        double sum = 0.0;
        for (const auto& r : rotated) {
            if (pos < r.x0 - tol || pos > r.x1 + tol) continue;
            ++hits;
            const double span = r.x1 - r.x0;
            if (span <= tol) {
                sum += 0.5 * (r.y0 + r.y1);
            } else {
                const double t = std::clamp((pos - r.x0) / span, 0.0, 1.0);
                sum += r.y0 + t * (r.y1 - r.y0);
            }
        }
        if (hits < min_lines || hits == 0) continue;
        const Vec2 p = pos * u + (sum / static_cast<double>(hits)) * v;
        rep.points.push_back({static_cast<std::uint64_t>(rep.points.size()), p.x, p.y});
    }
    return rep;
}

ClusteringResult cluster_tracks(std::span<const TrackRef> tracks, const ClusterParams& params) {
    params.validate();
    std::vector<Segment> segments;
    for (const auto& ref : tracks) {
        auto parts = partition_track(*ref.track, params.mdl_partition, ref.day);
        segments.insert(segments.end(), std::make_move_iterator(parts.begin()), std::make_move_iterator(parts.end()));
    }
    auto grouped = cluster_segments(std::move(segments), params);

    ClusteringResult result;
    result.noise = std::move(grouped.noise);
    bool demoted = false;
    for (auto& cluster : grouped.clusters) {
        cluster.representative = representative_track(cluster, params.smoothing_gamma, params.min_lines);
        if (cluster.representative.points.size() < 2) {
            result.noise.insert(result.noise.end(), cluster.members.begin(), cluster.members.end());
            demoted = true;
            continue;
        }
        cluster.representative.id = "C" + std::to_string(result.clusters.size());
        result.clusters.push_back(std::move(cluster));
    }
    if (demoted)
        std::sort(result.noise.begin(), result.noise.end(),
                  [](const Segment& a, const Segment& b) { return a.owner < b.owner; });
    return result;
}

ClusteringResult cluster_tracks(std::span<const Track> tracks, const ClusterParams& params) {
    std::vector<TrackRef> refs;
    refs.reserve(tracks.size());
    for (const auto& t : tracks) refs.push_back({Date{}, &t});
    return cluster_tracks(std::span<const TrackRef>(refs), params);
}

std::string representatives_csv(const ClusteringResult& result) {
    std::string out = "cluster_id,seq,x,y\n";
    for (std::size_t c = 0; c < result.clusters.size(); ++c) {
        const auto& rep = result.clusters[c].representative;
        for (std::size_t i = 0; i < rep.points.size(); ++i)
            out += std::to_string(c) + "," + std::to_string(i) + "," + format_real(rep.points[i].x) + "," +
                   format_real(rep.points[i].y) + "\n";
    }
    return out;
}

std::string membership_csv(const ClusteringResult& result) {
    std::string out = "cluster_id,day,track_id\n";
    for (std::size_t c = 0; c < result.clusters.size(); ++c)
        for (const auto& [day, id] : result.clusters[c].member_tracks())
            out += std::to_string(c) + "," + day.to_string() + "," + id + "\n";
    return out;
}

}  // namespace daywatch
