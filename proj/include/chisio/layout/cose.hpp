#pragma once

// Compound spring embedder (CoSE) and the plain spring embedder built on it.
//
// Forces, in px per iteration:
//   spring     k * (d - ideal) * weight, d = distance between the rectangle
//              boundaries along the center line (0 when they meet)
//   repulsion  c / d^2 between nodes of the same graph; overlapping nodes get
//              c / minside^2 + k * penetration instead
//   gravity    g * unit vector towards the owner graph's center
//
// A compound node and its nested graph move as one cart: the compound's
// force is its own plus the total force of its children, divided by the
// cart's node count, and its displacement is added to every descendant.

#include <chisio/geometry.hpp>
#include <chisio/layout/layout.hpp>
#include <chisio/layout/lstructure.hpp>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace chisio::layout {

struct ForceModel {
    double spring_constant = 0.45;
    double repulsion_constant = 4500.0;
    double gravity_strength = 0.4;
};

enum class GravityCenter {
    /// Mean of the node centers of each graph (CoSE, per nesting level).
    Barycenter,
    /// Middle of the bounding rectangle of each graph's nodes.
    BoundingBoxCenter,
};

struct ForcePair {
    Point on_source;
    Point on_target;
};

inline constexpr double kMinDistance = 1e-9;

/// Unit vector from `from` to `to`; a seeded random direction when they coincide.
inline Point direction(Point from, Point to, Rng& rng) {
    const Point d = to - from;
    const double len = d.norm();
    if (len >= kMinDistance) return d / len;
    const double a = rng.uniform(0.0, kTwoPi);
    return {std::cos(a), std::sin(a)};
}

/// Distance from the node's center to its boundary along unit direction `dir`.
inline double boundary_extent(const LNode& n, Point dir) {
    if (n.round) return n.rect.min_side() / 2.0;
    return clip_extent(n.rect, dir);
}

/// Gap between the two node boundaries measured along the center line.
inline double boundary_distance(const LNode& a, const LNode& b, Point dir) {
    const double centers = distance(a.center(), b.center());
    return centers - boundary_extent(a, dir) - boundary_extent(b, -dir);
}

/// Depth of interpenetration of two node shapes; 0 when they do not overlap.
inline double penetration(const LNode& a, const LNode& b) {
    if (a.round && b.round) {
        const double r = a.rect.min_side() / 2.0 + b.rect.min_side() / 2.0;
        return std::max(0.0, r - distance(a.center(), b.center()));
    }
    if (a.round || b.round) {
        const LNode& disk = a.round ? a : b;
        const LNode& box = a.round ? b : a;
        const double r = disk.rect.min_side() / 2.0;
        return std::max(0.0, r - distance_to_rect(disk.center(), box.rect));
    }
    if (!overlaps(a.rect, b.rect)) return 0.0;
    const double ox = std::min(a.rect.right(), b.rect.right()) - std::max(a.rect.x, b.rect.x);
    const double oy = std::min(a.rect.bottom(), b.rect.bottom()) - std::max(a.rect.y, b.rect.y);
    return std::min(ox, oy);
}

/// Linear spring along the center line. Positive `d - ideal` pulls the
/// endpoints together.
inline ForcePair spring_force(const LNode& s, const LNode& t, double ideal, const ForceModel& fm, Rng& rng,
                              double weight = 1.0) {
    const Point u = direction(s.center(), t.center(), rng);
    const double d = std::max(0.0, boundary_distance(s, t, u));
    const double f = fm.spring_constant * (d - ideal) * weight;
    return {u * f, u * -f};
}

inline ForcePair repulsion_force(const LNode& a, const LNode& b, const ForceModel& fm, Rng& rng) {
    const Point u = direction(a.center(), b.center(), rng);
    const double pen = penetration(a, b);
    double magnitude;
    if (pen > 0.0) {
        const double side = std::max(1.0, std::min(a.rect.min_side(), b.rect.min_side()));
        // c/side on top of the fixed c/side^2 keeps large overlapping boxes
        // (compounds, cluster wrappers) from settling into each other.
        magnitude = fm.repulsion_constant / (side * side) + fm.repulsion_constant / side + fm.spring_constant * pen;
    } else {
        const double d = std::max(1.0, boundary_distance(a, b, u));
        magnitude = fm.repulsion_constant / (d * d);
    }
    return {u * -magnitude, u * magnitude};
}

inline Point gravity_force(Point node_center, Point gravity_center, double strength) {
    const Point d = gravity_center - node_center;
    const double len = d.norm();
    if (len < kMinDistance) return {};
    return d * (strength / len);
}

struct CoseSettings {
    ForceModel forces;
    GravityCenter gravity_center = GravityCenter::Barycenter;
};

inline ForceModel force_model_from(const LayoutOptions& opts) {
    ForceModel fm;
    fm.spring_constant = opts.get("springConstant", fm.spring_constant);
    fm.repulsion_constant = opts.get("repulsionConstant", fm.repulsion_constant);
    fm.gravity_strength = opts.gravity_strength;
    return fm;
}

/// Rest length of each edge: the base length, stretched for inter-graph edges
/// by 0.3 per level of depth difference and 0.3 per hop to the lowest common
/// ancestor graph.
inline void assign_ideal_lengths(LStructure& l, double base) {
    for (LEdge& e : l.edges) {
        e.ideal_length = base;
        if (!e.inter_graph) continue;
        const int ds = l.depth(e.source);
        const int dt = l.depth(e.target);
        const int dc = l.graph_depth(l.common_graph(e.source, e.target));
        const int hops = (ds - dc) + (dt - dc);
        e.ideal_length = base * (1.0 + 0.3 * std::abs(ds - dt) + 0.3 * hops);
    }
}

namespace detail {

/// Two nodes stacked on each other: same center, or same top-left corner
/// (nodes created without a position all sit at the default corner).
inline bool stacked(const Rect& a, const Rect& b) {
    return (a.x == b.x && a.y == b.y) || (a.center().x == b.center().x && a.center().y == b.center().y);
}

/// Scatters nodes stacked on another node of the same
/// graph over a square of side sqrt(n) * ideal around the graph's anchor
/// (the origin for the root, the compound's center otherwise).
inline void scatter_graph(LStructure& l, Index g, Point anchor, double ideal, Rng& rng) {
    const auto& members = l.graphs[g].nodes;
    std::vector<bool> unplaced(members.size(), false);
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (stacked(l.nodes[members[i]].rect, l.nodes[members[j]].rect))
                unplaced[i] = unplaced[j] = true;
    const double side = std::sqrt(static_cast<double>(members.size())) * ideal;
    for (std::size_t i = 0; i < members.size(); ++i) {
        const Index v = members[i];
        if (unplaced[i] && !l.nodes[v].pinned) {
            if (l.nodes[v].child) l.nodes[v].rect = l.tight_rect(v);
            const Point target{anchor.x + rng.uniform(-side / 2.0, side / 2.0),
                               anchor.y + rng.uniform(-side / 2.0, side / 2.0)};
            l.translate_subtree(v, target - l.nodes[v].center());
        }
        if (l.nodes[v].child) {
            const Index cg = *l.nodes[v].child;
            if (!l.graphs[cg].nodes.empty()) {
                l.nodes[v].rect = l.tight_rect(v);
                scatter_graph(l, cg, l.nodes[v].center(), ideal, rng);
            }
        }
    }
}

inline Point graph_center(const LStructure& l, Index g, GravityCenter mode) {
    const auto& members = l.graphs[g].nodes;
    if (members.empty()) return {};
    if (mode == GravityCenter::Barycenter) {
        Point s;
        for (Index v : members) s += l.nodes[v].center();
        return s / static_cast<double>(members.size());
    }
    Rect u = l.nodes[members.front()].rect;
    for (Index v : members) u = unite(u, l.nodes[v].rect);
    return u.center();
}

}  // namespace detail

inline void scatter_unplaced(LStructure& l, double ideal, Rng& rng) {
    l.tighten_all();
    detail::scatter_graph(l, l.root(), {0.0, 0.0}, ideal, rng);
    l.tighten_all();
}

/// The CoSE iteration loop. Edge rest lengths are taken from the l-structure.
inline LayoutReport cose_run(LStructure& l, const LayoutOptions& opts, LayoutContext& ctx,
                             const CoseSettings& settings) {
    LayoutReport report;
    const std::size_t n = l.nodes.size();
    if (n == 0) return report;
    const ForceModel& fm = settings.forces;

    scatter_unplaced(l, opts.ideal_edge_length, ctx.rng);

    // Springs between a compound and its own descendant cannot be satisfied.
    std::vector<Index> active_edges;
    for (Index i = 0; i < l.edges.size(); ++i) {
        const LEdge& e = l.edges[i];
        if (e.source == e.target) continue;
        if (l.is_ancestor(e.source, e.target) || l.is_ancestor(e.target, e.source)) continue;
        active_edges.push_back(i);
    }

    std::vector<double> mass(n, 1.0);
    std::vector<bool> leaf(n, false);
    std::size_t leaves = 0;
    for (Index v = 0; v < n; ++v) {
        mass[v] = 1.0 + static_cast<double>(l.descendant_count(v));
        leaf[v] = !l.nodes[v].child || l.graphs[*l.nodes[v].child].nodes.empty();
        if (leaf[v]) ++leaves;
    }

    std::vector<Point> force(n), total(n), own(n), translation(n), centers(l.graphs.size());

    for (int iter = 0; iter < opts.iterations; ++iter) {
        const double cooling =
            opts.cooling_initial * (1.0 - static_cast<double>(iter) / static_cast<double>(opts.iterations));
        const double max_step = 100.0 * cooling;

        for (Index g = 0; g < l.graphs.size(); ++g) centers[g] = detail::graph_center(l, g, settings.gravity_center);
        std::fill(force.begin(), force.end(), Point{});
        for (auto& node : l.nodes) node.displacement = {};

        for (const LGraph& g : l.graphs) {
            for (std::size_t i = 0; i < g.nodes.size(); ++i) {
                for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
                    const Index a = g.nodes[i];
                    const Index b = g.nodes[j];
                    const ForcePair f = repulsion_force(l.nodes[a], l.nodes[b], fm, ctx.rng);
                    force[a] += f.on_source;
                    force[b] += f.on_target;
                }
            }
        }
        for (Index ei : active_edges) {
            const LEdge& e = l.edges[ei];
            const ForcePair f =
                spring_force(l.nodes[e.source], l.nodes[e.target], e.ideal_length, fm, ctx.rng, e.weight);
            force[e.source] += f.on_source;
            force[e.target] += f.on_target;
        }
        for (Index v = 0; v < n; ++v)
            force[v] += gravity_force(l.nodes[v].center(), centers[l.nodes[v].owner], fm.gravity_strength);

        // Cart forces, deepest first (pre-order reversed).
        for (Index v = n; v-- > 0;) {
            total[v] = force[v];
            if (l.nodes[v].child)
                for (Index c : l.graphs[*l.nodes[v].child].nodes) total[v] += total[c];
        }
        for (Index v = 0; v < n; ++v) {
            if (l.nodes[v].pinned) {
                own[v] = {};
                continue;
            }
            Point d = total[v] * (cooling / mass[v]);
            const double len = d.norm();
            if (len > max_step) d = d * (max_step / len);
            own[v] = d;
        }

        // Cart motion propagates downwards (pre-order).
        for (Index v = 0; v < n; ++v) {
            const auto parent = l.parent_node(v);
            translation[v] = own[v] + (parent ? translation[*parent] : Point{});
            if (l.nodes[v].pinned) translation[v] = {};
            l.nodes[v].displacement = own[v];
        }

        double moved = 0.0;
        for (Index v = 0; v < n; ++v) {
            if (!leaf[v]) continue;
            l.nodes[v].rect = l.nodes[v].rect.translated(translation[v].x, translation[v].y);
            moved += translation[v].norm();
        }
        l.tighten_all();

        report.iterations_used = iter + 1;
        report.final_total_displacement = moved;
        if (ctx.on_iteration) ctx.on_iteration(IterationTrace{iter, &l, own, translation});
        if (leaves == 0 || moved / static_cast<double>(leaves) < opts.convergence_eps) break;
    }
    return report;
}

/// Spring embedder on a flattened copy: compounds are dissolved, their
/// children promoted, and edges touching a dissolved compound are dropped.
/// Empty compounds stay as ordinary nodes.
inline LayoutReport spring_embedder_run(LStructure& l, const LayoutOptions& opts, LayoutContext& ctx,
                                        const CoseSettings& settings) {
    LStructure flat;
    std::vector<std::optional<Index>> to_flat(l.nodes.size());
    for (Index v = 0; v < l.nodes.size(); ++v) {
        const LNode& src = l.nodes[v];
        if (src.child && !l.graphs[*src.child].nodes.empty()) continue;
        const Index f = flat.add_node(flat.root(), src.rect, src.id);
        flat.nodes[f].pinned = src.pinned;
        flat.nodes[f].round = src.round;
        flat.nodes[f].cluster = src.cluster;
        to_flat[v] = f;
    }
    for (const LEdge& e : l.edges) {
        if (!to_flat[e.source] || !to_flat[e.target]) continue;
        const Index fe = flat.add_edge(*to_flat[e.source], *to_flat[e.target], opts.ideal_edge_length, e.id);
        flat.edges[fe].weight = e.weight;
    }
    const LayoutReport report = cose_run(flat, opts, ctx, settings);
    for (Index v = 0; v < l.nodes.size(); ++v)
        if (to_flat[v]) l.nodes[v].rect = flat.nodes[*to_flat[v]].rect;
    l.tighten_all();
    return report;
}

class CoseLayout : public LayoutAlgorithm {
public:
    std::string name() const override { return "cose"; }

    std::vector<OptionSpec> options() const override {
        auto o = common_options();
        o.push_back({"springConstant", 0.45, "spring stiffness"});
        o.push_back({"repulsionConstant", 4500.0, "repulsion constant (px^3/iteration)"});
        return o;
    }

    void initialize(LStructure& l, const LayoutOptions& opts, LayoutContext&) override {
        assign_ideal_lengths(l, opts.ideal_edge_length);
    }

    LayoutReport run(LStructure& l, const LayoutOptions& opts, LayoutContext& ctx) override {
        return cose_run(l, opts, ctx, CoseSettings{force_model_from(opts), GravityCenter::Barycenter});
    }
};

class SpringLayout : public LayoutAlgorithm {
public:
    std::string name() const override { return "spring"; }

    std::vector<OptionSpec> options() const override { return CoseLayout{}.options(); }

    LayoutReport run(LStructure& l, const LayoutOptions& opts, LayoutContext& ctx) override {
        return spring_embedder_run(l, opts, ctx, CoseSettings{force_model_from(opts), GravityCenter::Barycenter});
    }
};

}  // namespace chisio::layout
