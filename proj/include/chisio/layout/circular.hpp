#pragma once

#include <chisio/geometry.hpp>

#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace chisio::layout {

inline constexpr double kMinCircleRadius = 15.0;

namespace detail {

/// Chords (a,b) and (c,d) of a circle cross iff exactly one of c, d lies
/// strictly inside the arc a..b. Chords sharing an endpoint never cross.
inline bool chords_cross(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    if (a == c || a == d || b == c || b == d) return false;
    if (a > b) std::swap(a, b);
    const bool c_in = a < c && c < b;
    const bool d_in = a < d && d < b;
    return c_in != d_in;
}

struct LocalGraph {
    std::vector<std::set<std::size_t>> adj;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Crossings between chords incident to `a` or `b` and all other chords,
/// with each crossing pair counted once.
inline std::size_t incident_crossings(const LocalGraph& g, const std::vector<std::size_t>& pos, std::size_t a,
                                      std::size_t b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto [u, v] = g.edges[i];
        const bool inc_i = u == a || v == a || u == b || v == b;
        if (!inc_i) continue;
        for (std::size_t j = 0; j < g.edges.size(); ++j) {
            if (j == i) continue;
            const auto [x, y] = g.edges[j];
            const bool inc_j = x == a || y == a || x == b || y == b;
            if (inc_j && j < i) continue;
            if (chords_cross(pos[u], pos[v], pos[x], pos[y])) ++n;
        }
    }
    return n;
}

}  // namespace detail

/// Number of crossing chord pairs when `order` is placed around a circle.
template <class T>
std::size_t circular_crossings(std::span<const T> order, std::span<const std::pair<T, T>> edges) {
    std::map<T, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::vector<std::pair<std::size_t, std::size_t>> chords;
    for (const auto& [u, v] : edges) {
        auto a = pos.find(u);
        auto b = pos.find(v);
        if (a == pos.end() || b == pos.end() || a->second == b->second) continue;
        chords.emplace_back(a->second, b->second);
    }
    std::size_t n = 0;
    for (std::size_t i = 0; i < chords.size(); ++i)
        for (std::size_t j = i + 1; j < chords.size(); ++j)
            if (detail::chords_cross(chords[i].first, chords[i].second, chords[j].first, chords[j].second)) ++n;
    return n;
}

/// Orders nodes around a circle to keep chord crossings low.
///
/// A connectivity-driven walk starts at the highest-degree node. The next
/// node is an unplaced neighbour of the most recently placed node that still
/// has one, preferring the candidate with the most already-placed neighbours.
/// A new component restarts at its highest-degree node. Adjacent swaps that
/// strictly reduce the crossing count are then applied until none remains.
/// Ties resolve by input order, so the result is deterministic.
template <class T>
std::vector<T> circular_order(std::span<const T> nodes, std::span<const std::pair<T, T>> edges) {
    const std::size_t n = nodes.size();
    if (n <= 1) return {nodes.begin(), nodes.end()};

    std::map<T, std::size_t> local;
    for (std::size_t i = 0; i < n; ++i) local.emplace(nodes[i], i);
    detail::LocalGraph g;
    g.adj.resize(n);
    for (const auto& [u, v] : edges) {
        auto a = local.find(u);
        auto b = local.find(v);
        if (a == local.end() || b == local.end() || a->second == b->second) continue;
        g.adj[a->second].insert(b->second);
        g.adj[b->second].insert(a->second);
        g.edges.emplace_back(a->second, b->second);
    }

    std::vector<bool> placed(n, false);
    std::vector<std::size_t> placed_nbrs(n, 0);
    std::vector<std::size_t> seq;
    seq.reserve(n);
    auto place = [&](std::size_t v) {
        placed[v] = true;
        seq.push_back(v);
        for (std::size_t w : g.adj[v]) ++placed_nbrs[w];
    };
    auto highest_degree_unplaced = [&]() {
        std::size_t best = n;
        for (std::size_t v = 0; v < n; ++v)
            if (!placed[v] && (best == n || g.adj[v].size() > g.adj[best].size())) best = v;
        return best;
    };

    place(highest_degree_unplaced());
    while (seq.size() < n) {
        std::size_t next = n;
        for (std::size_t k = seq.size(); k-- > 0 && next == n;) {
            for (std::size_t w : g.adj[seq[k]]) {
                if (placed[w]) continue;
                if (next == n || placed_nbrs[w] > placed_nbrs[next] ||
                    (placed_nbrs[w] == placed_nbrs[next] && w < next))
                    next = w;
            }
        }
        if (next == n) next = highest_degree_unplaced();
        place(next);
    }

    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[seq[i]] = i;
    bool improved = true;
    for (std::size_t pass = 0; improved && pass < 4 * n; ++pass) {
        improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t a = seq[i];
            const std::size_t b = seq[(i + 1) % n];
            const std::size_t before = detail::incident_crossings(g, pos, a, b);
            std::swap(pos[a], pos[b]);
            const std::size_t after = detail::incident_crossings(g, pos, a, b);
            if (after < before) {
                std::swap(seq[i], seq[(i + 1) % n]);
                improved = true;
            } else {
                std::swap(pos[a], pos[b]);
            }
        }
    }

    std::vector<T> out;
    out.reserve(n);
    for (std::size_t v : seq) out.push_back(nodes[v]);
    return out;
}

/// Node k of n at angle 2*pi*k/n + rotation (y axis pointing down, so angles
/// run clockwise on screen).
inline std::vector<Point> place_on_circle(std::size_t count, Point center, double radius, double rotation = 0.0) {
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(count) + rotation;
        out.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    }
    return out;
}

/// Radius that fits every member (diagonal plus spacing) on the track,
/// never below kMinCircleRadius.
inline double radius_for(std::span<const double> diagonals, double spacing) {
    double perimeter = 0.0;
    for (double d : diagonals) perimeter += d + spacing;
    return std::max(kMinCircleRadius, perimeter / kTwoPi);
}

}  // namespace chisio::layout
