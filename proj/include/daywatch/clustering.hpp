// SPDX-License-Identifier: Apache-2.0
//
// Partition-and-group trajectory clustering. Tracks are cut into line
// segments at characteristic points chosen by a minimum description length
// criterion, segments are grouped by density under a weighted
// perpendicular/parallel/angular distance, and every group is summarised by
// a representative track obtained with a sweep line along the group's mean
// direction.
#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "daywatch/core.hpp"
#include "daywatch/geometry.hpp"

namespace daywatch {

/// Identity of a segment: the day and track it was cut from and its position
/// along that track. Ordering is lexicographic (day, track id, index) and
/// decides every tie during clustering.
struct SegmentOwner {
    Date day;
    std::string track_id;
    std::size_t index = 0;

    friend auto operator<=>(const SegmentOwner&, const SegmentOwner&) = default;
    friend bool operator==(const SegmentOwner&, const SegmentOwner&) = default;
};

struct Segment {
    Vec2 start;
    Vec2 end;
    SegmentOwner owner;

    double length() const { return distance(start, end); }
    friend bool operator==(const Segment&, const Segment&) = default;
};

struct SegmentWeights {
    double perpendicular = 1.0;
    double parallel = 1.0;
    double angle = 1.0;
};

struct ClusterParams {
    double eps = 25.0;             // neighborhood radius, pixels
    std::size_t min_lines = 3;
    bool mdl_partition = true;
    double smoothing_gamma = 12.5;  // sweep spacing; 0 sweeps at segment endpoints
    SegmentWeights weights;

    /// Throws ConfigError unless eps > 0, min_lines >= 1, gamma >= 0.
    void validate() const;
};

struct SegmentCluster {
    std::vector<Segment> members;
    Track representative;

    /// Distinct (day, track id) pairs among the members, in ascending order.
    std::vector<std::pair<Date, std::string>> member_tracks() const;
};

struct ClusteringResult {
    std::vector<SegmentCluster> clusters;
    std::vector<Segment> noise;
};

/// Track tagged with the day it belongs to.
struct TrackRef {
    Date day;
    const Track* track = nullptr;
};

/// Cuts a track into segments between characteristic points. The first and
/// last points are always characteristic; with `mdl` false every consecutive
/// pair becomes a segment. Zero-length segments are dropped.
std::vector<Segment> partition_track(const Track& track, bool mdl, Date day = {});

/// Code lengths compared by the partitioner for the span [first, last] of
/// `track`: cost of replacing the span by one segment, and cost of keeping
/// every original segment.
struct MdlCost {
    double partitioned = 0.0;
    double unpartitioned = 0.0;
};
MdlCost mdl_cost(const Track& track, std::size_t first, std::size_t last);

struct SegmentDistanceParts {
    double perpendicular = 0.0;
    double parallel = 0.0;
    double angle = 0.0;
};

/// Components of the segment distance, computed by projecting the shorter
/// segment onto the longer one. Equal lengths are ordered by coordinates so
/// the result is exactly symmetric. Throws InvalidInput on a degenerate
/// segment.
SegmentDistanceParts segment_distance_parts(const Segment& a, const Segment& b);

double segment_distance(const Segment& a, const Segment& b, const SegmentWeights& weights = {});

/// Density-based grouping. Output does not depend on input order: segments
/// are canonically ordered by owner before clustering, and a border segment
/// joins the cluster of its smallest-owner core neighbor. Clusters drawn from
/// fewer than min_lines distinct tracks are moved to the noise set.
/// Representatives are left empty.
ClusteringResult cluster_segments(std::vector<Segment> segments, const ClusterParams& params);

/// Sweep-line representative. Points are emitted at spacing `gamma` from the
/// lowest to the highest projection on the mean direction (the highest
/// always included) wherever at least `min_lines` members cross the sweep
/// line. Throws DegenerateError when member directions cancel out.
Track representative_track(const SegmentCluster& cluster, double gamma, std::size_t min_lines);

/// Partition, pool, group and attach representatives. Clusters whose
/// representative would have fewer than two points are moved to noise.
ClusteringResult cluster_tracks(std::span<const TrackRef> tracks, const ClusterParams& params);
ClusteringResult cluster_tracks(std::span<const Track> tracks, const ClusterParams& params);

/// `cluster_id,seq,x,y`
std::string representatives_csv(const ClusteringResult& result);
/// `cluster_id,day,track_id`
std::string membership_csv(const ClusteringResult& result);

}  // namespace daywatch
