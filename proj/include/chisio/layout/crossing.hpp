#pragma once

#include <chisio/geometry.hpp>
#include <chisio/layout/lstructure.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace chisio::layout {

/// Sign of the turn a -> b -> c: +1 counter-clockwise, -1 clockwise, 0 collinear.
inline int orientation(Point a, Point b, Point c) {
    const double v = cross(b - a, c - a);
    return (v > 0.0) - (v < 0.0);
}

/// True when the segments cross at a single point interior to both. Touching,
/// collinear overlap and shared endpoints do not count.
inline bool properly_intersect(const Segment& s, const Segment& t) {
    const int o1 = orientation(s.a, s.b, t.a);
    const int o2 = orientation(s.a, s.b, t.b);
    const int o3 = orientation(t.a, t.b, s.a);
    const int o4 = orientation(t.a, t.b, s.b);
    return o1 * o2 < 0 && o3 * o4 < 0;
}

/// Number of properly intersecting pairs; brute force over all pairs.
inline std::size_t crossing_count(std::span<const Segment> segments) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < segments.size(); ++i)
        for (std::size_t j = i + 1; j < segments.size(); ++j)
            if (properly_intersect(segments[i], segments[j])) ++n;
    return n;
}

/// Straight-line segments between node centers for the given edges
/// (self-loops skipped).
inline std::vector<Segment> edge_segments(const LStructure& l, std::span<const Index> edge_indices) {
    std::vector<Segment> out;
    out.reserve(edge_indices.size());
    for (Index ei : edge_indices) {
        const LEdge& e = l.edges[ei];
        if (e.source == e.target) continue;
        out.push_back({l.nodes[e.source].center(), l.nodes[e.target].center()});
    }
    return out;
}

inline std::vector<Segment> edge_segments(const LStructure& l) {
    std::vector<Index> all(l.edges.size());
    for (Index i = 0; i < all.size(); ++i) all[i] = i;
    return edge_segments(l, all);
}

inline std::size_t crossing_count(const LStructure& l) {
    const auto segs = edge_segments(l);
    return crossing_count(segs);
}

}  // namespace chisio::layout
