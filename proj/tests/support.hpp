#pragma once

// Generators and oracles shared by the unit tests and the acceptance run.
// The oracles are written independently of the library code they check.

#include <chisio/chisio.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace chisio::testing {

inline double uniform(Rng& rng, double lo, double hi) { return rng.uniform(lo, hi); }

inline NodeSpec random_spec(Rng& rng) {
    NodeSpec s;
    s.bounds = {std::round(uniform(rng, -300, 300)), std::round(uniform(rng, -300, 300)),
                std::round(uniform(rng, 10, 60)), std::round(uniform(rng, 10, 60))};
    s.shape = static_cast<NodeShape>(rng.below(3));
    s.label = "v" + std::to_string(rng.below(1000));
    s.style.fill_color = {static_cast<std::uint8_t>(rng.below(256)), static_cast<std::uint8_t>(rng.below(256)),
                          static_cast<std::uint8_t>(rng.below(256))};
    s.style.width = 1.0 + static_cast<double>(rng.below(3));
    s.style.line_style = rng.below(2) ? LineStyle::Dashed : LineStyle::Solid;
    return s;
}

/// Flat graph: `n` nodes of default geometry (all at the origin, so force
/// layouts scatter them) and about `edge_factor * n` random edges.
inline GraphModel random_flat_graph(Rng& rng, int n, double edge_factor = 1.5, bool self_loops = false) {
    GraphModel m;
    std::vector<NodeId> v;
    for (int i = 0; i < n; ++i) {
        NodeSpec s;
        s.label = "n" + std::to_string(i);
        s.bounds = {0, 0, std::round(uniform(rng, 20, 50)), std::round(uniform(rng, 20, 50))};
        v.push_back(m.add_node(m.root(), s));
    }
    if (n < 2) return m;
    const int edges = static_cast<int>(edge_factor * n);
    for (int i = 0; i < edges; ++i) {
        const NodeId a = v[rng.below(v.size())];
        const NodeId b = v[rng.below(v.size())];
        if (a == b && !self_loops) continue;
        m.add_edge(a, b);
    }
    return m;
}

/// Random cluster ids on a flat graph: `clusters` clusters, some nodes left
/// unclustered with probability `unclustered`.
inline void assign_random_clusters(GraphModel& m, Rng& rng, int clusters, double unclustered) {
    for (auto& [id, n] : m.unchecked().nodes) {
        if (rng.uniform() < unclustered) n.cluster.reset();
        else n.cluster = "c" + std::to_string(rng.below(static_cast<std::uint64_t>(clusters)));
    }
}

/// Compound graph with up to `max_nodes` objects nested at most `levels`
/// deep (root-level nodes are level 1).
inline GraphModel random_compound_graph(Rng& rng, int max_nodes, int levels, bool random_geometry = false) {
    GraphModel m;
    std::vector<std::pair<GraphId, int>> graphs{{m.root(), 1}};
    std::vector<NodeId> all;
    const int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(std::max(1, max_nodes - 1))));
    for (int i = 0; i < n; ++i) {
        const auto [g, level] = graphs[rng.below(graphs.size())];
        NodeSpec s = random_geometry ? random_spec(rng) : NodeSpec{};
        if (!random_geometry) s.bounds = {0, 0, std::round(uniform(rng, 20, 50)), std::round(uniform(rng, 20, 50))};
        const NodeId id = m.add_node(g, s);
        all.push_back(id);
        if (level < levels && rng.uniform() < 0.25) {
            const NodeId c = m.make_compound(g, {id});
            // The wrapped node now sits one level deeper.
            graphs.emplace_back(*m.node(c).child, level + 1);
            all.push_back(c);
        }
    }
    std::vector<NodeId> nodes;
    for (const auto& [id, node] : m.nodes()) nodes.push_back(id);
    const int edges = static_cast<int>(nodes.size());
    for (int i = 0; i < edges; ++i) {
        const NodeId a = nodes[rng.below(nodes.size())];
        const NodeId b = nodes[rng.below(nodes.size())];
        if (a == b) continue;
        m.add_edge(a, b);
    }
    return m;
}

/// Depth of the nesting below node `id` (0 for a leaf, 1 for a compound of
/// leaves...).
inline int subtree_height(const GraphModel& m, NodeId id) {
    const Node& n = m.node(id);
    if (!n.child) return 0;
    int h = 1;
    for (NodeId c : m.graph(*n.child).nodes) h = std::max(h, 1 + subtree_height(m, c));
    return h;
}

/// Levels used by the deepest node (root-level node = 1).
inline int nesting_levels(const GraphModel& m) {
    int d = 0;
    for (const auto& [id, n] : m.nodes()) d = std::max(d, m.depth(id) + 1);
    return d;
}

/// Recomputes a compound's bounds from leaf geometry alone, recursively.
inline Rect oracle_bounds(const GraphModel& m, NodeId id) {
    const Node& n = m.node(id);
    if (!n.child) return n.bounds;
    const Graph& g = m.graph(*n.child);
    if (g.nodes.empty()) return {n.bounds.x, n.bounds.y, 40.0, 40.0 + g.label_strip};
    double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
    for (NodeId c : g.nodes) {
        const Rect r = oracle_bounds(m, c);
        x0 = std::min(x0, r.x);
        y0 = std::min(y0, r.y);
        x1 = std::max(x1, r.x + r.w);
        y1 = std::max(y1, r.y + r.h);
    }
    return {x0 - g.margin, y0 - g.margin, (x1 - x0) + 2 * g.margin, (y1 - y0) + 2 * g.margin + g.label_strip};
}

/// True when every compound's stored bounds equal the oracle exactly.
inline bool tight_everywhere(const GraphModel& m, std::string* why = nullptr) {
    for (const auto& [id, n] : m.nodes()) {
        if (!n.child) continue;
        const Rect want = oracle_bounds(m, id);
        if (!(n.bounds == want)) {
            if (why) {
                std::ostringstream s;
                s << "compound " << id.value << " bounds (" << n.bounds.x << "," << n.bounds.y << "," << n.bounds.w
                  << "," << n.bounds.h << ") expected (" << want.x << "," << want.y << "," << want.w << ","
                  << want.h << ")";
                *why = s.str();
            }
            return false;
        }
    }
    return true;
}

/// Structural equality: same ids, nesting, labels, styles, clusters,
/// attributes, direction; geometry within `tol`. Edge fill colour and node
/// arrow are not part of the persisted style and are ignored.
inline bool structural_equal(const GraphModel& a, const GraphModel& b, double tol, std::string* why = nullptr) {
    auto fail = [why](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    auto near = [tol](double x, double y) { return std::abs(x - y) <= tol; };
    auto rect_near = [&](const Rect& x, const Rect& y) {
        return near(x.x, y.x) && near(x.y, y.y) && near(x.w, y.w) && near(x.h, y.h);
    };
    if (a.root() != b.root()) return fail("root differs");
    if (a.graphs().size() != b.graphs().size()) return fail("graph count differs");
    if (a.nodes().size() != b.nodes().size()) return fail("node count differs");
    if (a.edges().size() != b.edges().size()) return fail("edge count differs");
    for (const auto& [id, g] : a.graphs()) {
        if (!b.contains(id)) return fail("graph " + std::to_string(id.value) + " missing");
        const Graph& h = b.graph(id);
        if (g.parent != h.parent || g.nodes != h.nodes) return fail("graph " + std::to_string(id.value) + " nesting");
        if (!near(g.margin, h.margin) || !near(g.label_strip, h.label_strip) || g.attributes != h.attributes)
            return fail("graph " + std::to_string(id.value) + " properties");
    }
    for (const auto& [id, n] : a.nodes()) {
        if (!b.contains(id)) return fail("node " + std::to_string(id.value) + " missing");
        const Node& o = b.node(id);
        const std::string tag = "node " + std::to_string(id.value);
        if (n.owner != o.owner || n.child != o.child) return fail(tag + " nesting");
        if (n.label != o.label || n.shape != o.shape || n.cluster != o.cluster || n.attributes != o.attributes)
            return fail(tag + " properties");
        if (!(n.style.fill_color == o.style.fill_color) || !(n.style.border_color == o.style.border_color) ||
            n.style.line_style != o.style.line_style || !near(n.style.width, o.style.width))
            return fail(tag + " style");
        if (!rect_near(n.bounds, o.bounds)) return fail(tag + " geometry");
    }
    for (const auto& [id, e] : a.edges()) {
        if (!b.contains(id)) return fail("edge " + std::to_string(id.value) + " missing");
        const Edge& o = b.edge(id);
        const std::string tag = "edge " + std::to_string(id.value);
        if (e.source != o.source || e.target != o.target || e.directed != o.directed) return fail(tag + " endpoints");
        if (e.label != o.label || e.attributes != o.attributes) return fail(tag + " properties");
        if (!(e.style.border_color == o.style.border_color) || e.style.line_style != o.style.line_style ||
            e.style.arrow != o.style.arrow || !near(e.style.width, o.style.width))
            return fail(tag + " style");
    }
    return true;
}

/// Model with every persisted property exercised, built through the public
/// operations only.
inline GraphModel random_rich_model(Rng& rng, int max_nodes) {
    GraphModel m = random_compound_graph(rng, max_nodes, 4, true);
    for (const auto& [id, g] : m.graphs())
        if (rng.below(2)) m.set_margins(id, std::round(uniform(rng, 0, 20) * 8) / 8, std::round(uniform(rng, 0, 20)));
    std::vector<NodeId> nodes;
    for (const auto& [id, n] : m.nodes()) nodes.push_back(id);
    for (NodeId id : nodes) {
        Node& n = m.unchecked().nodes.at(id);
        if (rng.below(3) == 0) n.cluster = "k" + std::to_string(rng.below(4));
        if (rng.below(4) == 0) n.attributes["note"] = "a<b & \"c\"";
        if (rng.below(5) == 0) n.label = "line1\nline2\ttab";
        if (!n.child && rng.below(2)) m.set_bounds(id, {uniform(rng, -1000, 1000), uniform(rng, -1000, 1000),
                                                        uniform(rng, 1, 90), uniform(rng, 1, 90)});
    }
    for (auto& [id, e] : m.unchecked().edges) {
        e.style.arrow = static_cast<Arrow>(rng.below(4));
        e.style.line_style = rng.below(2) ? LineStyle::Dashed : LineStyle::Solid;
        e.style.border_color = {static_cast<std::uint8_t>(rng.below(256)), 0, static_cast<std::uint8_t>(rng.below(256))};
        e.style.width = uniform(rng, 0.5, 4);
        e.directed = rng.below(3) != 0;
        if (rng.below(3) == 0) e.label = "w=" + std::to_string(rng.below(100));
        if (rng.below(5) == 0) e.attributes["weight"] = std::to_string(rng.below(9));
    }
    if (rng.below(3) == 0) m.unchecked().graphs.at(m.root()).attributes["title"] = "t" + std::to_string(rng.below(9));
    return m;
}

/// Applies one random public operation (add, edge, group, translate,
/// resize, margins, remove) keeping at most `max_nodes` nodes and at most
/// `max_levels` nesting levels. Returns a short description.
inline std::string random_op(GraphModel& m, Rng& rng, std::size_t max_nodes = 200, int max_levels = 5) {
    std::vector<NodeId> nodes;
    for (const auto& [id, n] : m.nodes()) nodes.push_back(id);
    std::vector<GraphId> graphs;
    for (const auto& [id, g] : m.graphs()) graphs.push_back(id);
    auto level_of_graph = [&](GraphId g) {
        const auto& gr = m.graph(g);
        return gr.parent ? m.depth(*gr.parent) + 2 : 1;
    };
    const auto pick = rng.below(100);
    if (nodes.empty() || (pick < 35 && nodes.size() < max_nodes)) {
        const GraphId g = graphs[rng.below(graphs.size())];
        const NodeId id = m.add_node(g, random_spec(rng));
        return "add_node " + std::to_string(id.value) + " to " + std::to_string(g.value);
    }
    if (pick < 50) {
        const NodeId a = nodes[rng.below(nodes.size())];
        const NodeId b = nodes[rng.below(nodes.size())];
        m.add_edge(a, b);
        return "add_edge " + std::to_string(a.value) + "->" + std::to_string(b.value);
    }
    if (pick < 62) {
        const GraphId g = graphs[rng.below(graphs.size())];
        const auto& members_all = m.graph(g).nodes;
        if (members_all.empty() || nodes.size() >= max_nodes) return "skip group";
        std::set<NodeId> members;
        for (NodeId id : members_all)
            if (rng.below(3) == 0) members.insert(id);
        if (members.empty()) members.insert(*members_all.begin());
        int height = 0;
        for (NodeId id : members) height = std::max(height, subtree_height(m, id));
        // New compound sits at level_of_graph(g); members move one deeper.
        if (level_of_graph(g) + 1 + height > max_levels) return "skip group";
        const NodeId c = m.make_compound(g, members);
        return "make_compound " + std::to_string(c.value) + " in " + std::to_string(g.value);
    }
    if (pick < 80) {
        const NodeId id = nodes[rng.below(nodes.size())];
        const double dx = std::round(uniform(rng, -100, 100) * 4) / 4;
        const double dy = uniform(rng, -100, 100);
        m.translate(id, dx, dy);
        return "translate " + std::to_string(id.value);
    }
    if (pick < 86) {
        const NodeId id = nodes[rng.below(nodes.size())];
        if (m.node(id).child) return "skip resize";
        m.set_bounds(id, random_spec(rng).bounds);
        return "set_bounds " + std::to_string(id.value);
    }
    if (pick < 89) {
        const GraphId g = graphs[rng.below(graphs.size())];
        m.set_margins(g, uniform(rng, 0, 15), std::round(uniform(rng, 0, 15)));
        return "set_margins " + std::to_string(g.value);
    }
    if (pick < 94 && !m.edges().empty()) {
        auto it = m.edges().begin();
        std::advance(it, static_cast<long>(rng.below(m.edges().size())));
        const EdgeId id = it->first;
        m.remove_object(id.value);
        return "remove edge " + std::to_string(id.value);
    }
    const NodeId id = nodes[rng.below(nodes.size())];
    m.remove_object(id.value);
    return "remove node " + std::to_string(id.value);
}

// -- crossing oracle -------------------------------------------------------

struct ISeg {
    std::int64_t x1, y1, x2, y2;
};

/// Parametric test with exact integer arithmetic: segments p + t r and
/// q + u s cross properly iff they are not parallel and 0 < t, u < 1.
inline bool exact_proper_crossing(const ISeg& a, const ISeg& b) {
    const std::int64_t rx = a.x2 - a.x1, ry = a.y2 - a.y1;
    const std::int64_t sx = b.x2 - b.x1, sy = b.y2 - b.y1;
    std::int64_t den = rx * sy - ry * sx;
    if (den == 0) return false;
    const std::int64_t qpx = b.x1 - a.x1, qpy = b.y1 - a.y1;
    std::int64_t tn = qpx * sy - qpy * sx;
    std::int64_t un = qpx * ry - qpy * rx;
    if (den < 0) {
        den = -den;
        tn = -tn;
        un = -un;
    }
    return tn > 0 && tn < den && un > 0 && un < den;
}

inline std::size_t exact_crossings(const std::vector<ISeg>& s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (exact_proper_crossing(s[i], s[j])) ++n;
    return n;
}

/// Crossings among straight edges of a model, through the exact oracle
/// after snapping centres to a 1/1024 px grid.
inline std::size_t model_crossings(const GraphModel& m) {
    std::vector<ISeg> segs;
    for (const auto& [id, e] : m.edges()) {
        if (e.source == e.target) continue;
        const Point a = m.node(e.source).bounds.center();
        const Point b = m.node(e.target).bounds.center();
        auto q = [](double v) { return static_cast<std::int64_t>(std::llround(v * 1024.0)); };
        segs.push_back({q(a.x), q(a.y), q(b.x), q(b.y)});
    }
    return exact_crossings(segs);
}

inline std::size_t model_crossings_of(const layout::LStructure& l) {
    std::vector<ISeg> segs;
    auto q = [](double v) { return static_cast<std::int64_t>(std::llround(v * 1024.0)); };
    for (const auto& e : l.edges) {
        if (e.source == e.target) continue;
        const Point a = l.nodes[e.source].center();
        const Point b = l.nodes[e.target].center();
        segs.push_back({q(a.x), q(a.y), q(b.x), q(b.y)});
    }
    return exact_crossings(segs);
}

// -- convex hulls ----------------------------------------------------------

inline std::vector<Point> convex_hull(std::vector<Point> p) {
    std::sort(p.begin(), p.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    p.erase(std::unique(p.begin(), p.end(), [](Point a, Point b) { return a.x == b.x && a.y == b.y; }), p.end());
    if (p.size() < 3) return p;
    std::vector<Point> h(2 * p.size());
    std::size_t k = 0;
    auto turn = [](Point o, Point a, Point b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && turn(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && turn(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

/// Separating-axis test on convex polygons (given as hull point lists).
/// Polygons that only touch count as intersecting.
inline bool hulls_intersect(const std::vector<Point>& a, const std::vector<Point>& b) {
    std::vector<Point> axes;
    auto add_axes = [&axes](const std::vector<Point>& h) {
        for (std::size_t i = 0; i < h.size(); ++i) {
            const Point e = h[(i + 1) % h.size()] - h[i];
            if (e.norm() > 0) {
                axes.push_back({-e.y, e.x});
                axes.push_back(e);
            }
        }
    };
    add_axes(a);
    add_axes(b);
    if (axes.empty()) axes.push_back({1, 0});
    for (Point ax : axes) {
        double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
        for (Point p : a) {
            amin = std::min(amin, dot(p, ax));
            amax = std::max(amax, dot(p, ax));
        }
        for (Point p : b) {
            bmin = std::min(bmin, dot(p, ax));
            bmax = std::max(bmax, dot(p, ax));
        }
        if (amax < bmin || bmax < amin) return false;
    }
    return true;
}

/// Hull of the rectangle corners of the given nodes.
inline std::vector<Point> node_hull(const GraphModel& m, const std::vector<NodeId>& ids) {
    std::vector<Point> pts;
    for (NodeId id : ids) {
        const Rect r = m.node(id).bounds;
        pts.push_back({r.x, r.y});
        pts.push_back({r.right(), r.y});
        pts.push_back({r.x, r.bottom()});
        pts.push_back({r.right(), r.bottom()});
    }
    return convex_hull(pts);
}

// -- digraph oracles -------------------------------------------------------

/// Kahn's algorithm; true when the arcs (self-loops ignored) form a DAG.
inline bool is_acyclic(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& arcs) {
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<std::size_t>> out(n);
    for (auto [s, t] : arcs) {
        if (s == t) continue;
        out[s].push_back(t);
        ++indeg[t];
    }
    std::vector<std::size_t> q;
    for (std::size_t v = 0; v < n; ++v)
        if (indeg[v] == 0) q.push_back(v);
    std::size_t seen = 0;
    while (!q.empty()) {
        const std::size_t v = q.back();
        q.pop_back();
        ++seen;
        for (std::size_t w : out[v])
            if (--indeg[w] == 0) q.push_back(w);
    }
    return seen == n;
}

/// Three clusters of 5..10 nodes (each a cycle plus a chord), five
/// unclustered nodes, and inter-cluster edges forming a cycle of clusters.
inline GraphModel cise_fixture(std::uint64_t seed) {
    GraphModel m;
    Rng r(seed * 77);
    std::vector<std::vector<NodeId>> cl(3);
    for (int c = 0; c < 3; ++c) {
        const int n = 5 + static_cast<int>(r.below(6));
        for (int i = 0; i < n; ++i) {
            NodeSpec s;
            s.cluster = "c" + std::to_string(c);
            s.bounds.w = std::round(r.uniform(20, 45));
            s.bounds.h = std::round(r.uniform(20, 45));
            cl[c].push_back(m.add_node(m.root(), s));
        }
        for (int i = 0; i < n; ++i) m.add_edge(cl[c][i], cl[c][(i + 1) % n]);
        m.add_edge(cl[c][0], cl[c][n / 2]);
    }
    std::vector<NodeId> un;
    for (int i = 0; i < 5; ++i) un.push_back(m.add_node(m.root()));
    for (int c = 0; c < 3; ++c) {
        m.add_edge(cl[c][1], cl[(c + 1) % 3][2]);
        m.add_edge(cl[c][3], cl[(c + 1) % 3][0]);
    }
    for (int i = 0; i < 5; ++i) m.add_edge(un[i], cl[i % 3][r.below(5)]);
    m.add_edge(un[0], un[1]);
    return m;
}

/// Shortest distance from a point to a rectangle (0 inside).
inline double point_rect_distance(Point p, const Rect& r) {
    const double dx = std::max({r.x - p.x, 0.0, p.x - r.right()});
    const double dy = std::max({r.y - p.y, 0.0, p.y - r.bottom()});
    return std::hypot(dx, dy);
}

/// Angles of the members' centres around `c`, in member order.
inline std::vector<double> member_angles(const layout::LStructure& l, const layout::CircleMeta& c) {
    std::vector<double> a;
    for (layout::Index v : c.members) {
        const Point d = l.nodes[v].center() - c.center;
        a.push_back(normalize_angle(std::atan2(d.y, d.x)));
    }
    return a;
}

/// True when walking the members in order visits increasing angles (mod 2pi)
/// exactly once around, in either direction.
inline bool cyclic_angular_order(const std::vector<double>& angles) {
    const std::size_t n = angles.size();
    if (n < 3) return true;
    auto winding = [&](bool forward) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = angles[(i + 1) % n] - angles[i];
            if (!forward) d = -d;
            d = std::fmod(d + 4 * kPi, kTwoPi);
            if (d <= 0) return false;
            total += d;
        }
        return std::abs(total - kTwoPi) < 1e-6;
    };
    return winding(true) || winding(false);
}

struct CiseCheck {
    bool on_circle = true;
    bool even_gaps = true;
    bool order_kept = true;
    bool crossings_monotone = true;
    bool no_overlap = true;
    double worst_track = 0;  // max |dist - r| / r
    double worst_gap = 0;    // rad
    std::size_t step3_crossings = 0;
    std::size_t final_crossings = 0;
    std::string detail;

    bool ok() const { return on_circle && even_gaps && order_kept && crossings_monotone && no_overlap; }
};

/// Runs the four CiSE steps one by one on a flat clustered model, checking
/// the requirements at each checkpoint with independent geometry.
inline CiseCheck check_cise(const GraphModel& m, std::uint64_t seed) {
    using namespace layout;
    CiseCheck out;
    LStructure l = build_l_structure(m);
    LayoutOptions o;
    o.seed = seed;
    LayoutContext ctx(seed);
    for (auto& e : l.edges) e.ideal_length = o.ideal_edge_length;
    const ClusterAssignment clusters = clusters_of(l);

    auto check_track = [&](const CiseState& st, const char* when) {
        for (const auto& c : st.circles)
            for (Index v : c.members) {
                const double err = std::abs(distance(l.nodes[v].center(), c.center) - c.radius) / c.radius;
                out.worst_track = std::max(out.worst_track, err);
                if (err > 1e-6) {
                    out.on_circle = false;
                    out.detail += std::string("off track ") + when + "; ";
                }
            }
    };

    CiseState st = cise_step1(l, clusters, o);
    check_track(st, "after step 1");
    for (const auto& c : st.circles) {
        const auto a = member_angles(l, c);
        const double want = kTwoPi / static_cast<double>(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            double gap = std::fmod(a[(i + 1) % a.size()] - a[i] + 2 * kTwoPi, kTwoPi);
            if (a.size() == 1) gap = kTwoPi;
            out.worst_gap = std::max(out.worst_gap, std::abs(gap - want));
        }
    }
    out.even_gaps = out.worst_gap <= 1e-9;

    cise_step2(l, st, o, ctx);
    check_track(st, "after step 2");
    std::vector<std::vector<Index>> members_before;
    for (const auto& c : st.circles) members_before.push_back(c.members);

    cise_step3(l, st, o, ctx);
    check_track(st, "after step 3");
    for (std::size_t i = 0; i < st.circles.size(); ++i) {
        if (st.circles[i].members != members_before[i] || !cyclic_angular_order(member_angles(l, st.circles[i]))) {
            out.order_kept = false;
            out.detail += "order changed in step 3; ";
        }
    }
    out.step3_crossings = model_crossings_of(l);

    cise_step4(l, st, o, ctx);
    check_track(st, "after step 4");
    out.final_crossings = model_crossings_of(l);
    out.crossings_monotone = out.final_crossings <= out.step3_crossings;

    for (Index u : st.unclustered)
        for (const auto& c : st.circles)
            if (point_rect_distance(c.center, l.nodes[u].rect) < c.radius) {
                out.no_overlap = false;
                out.detail += "unclustered node " + std::to_string(l.nodes[u].id.value) + " overlaps circle " +
                              c.cluster_id + "; ";
            }
    return out;
}

/// Random digraph with up to `max_nodes` nodes, cycles, self-loops,
/// parallel and some undirected edges.
inline GraphModel random_digraph(Rng& rng, int max_nodes) {
    GraphModel m;
    const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_nodes)));
    std::vector<NodeId> v;
    for (int i = 0; i < n; ++i) {
        NodeSpec s;
        s.bounds = {0, 0, std::round(uniform(rng, 10, 60)), std::round(uniform(rng, 10, 40))};
        v.push_back(m.add_node(m.root(), s));
    }
    const int edges = static_cast<int>(rng.below(static_cast<std::uint64_t>(2 * n + 1)));
    for (int i = 0; i < edges; ++i) {
        const EdgeId e = m.add_edge(v[rng.below(v.size())], v[rng.below(v.size())]);
        if (rng.below(8) == 0) m.set_directed(e, false);
    }
    return m;
}

struct SugiyamaCheck {
    bool acyclic = true;
    bool layers_monotone = true;
    bool adjacent_layers = true;
    bool no_overlap = true;
    bool sweeps_monotone = true;
    bool rows_match_layers = true;
    std::string detail;

    bool ok() const {
        return acyclic && layers_monotone && adjacent_layers && no_overlap && sweeps_monotone && rows_match_layers;
    }
};

/// Runs the Sugiyama pipeline on a flat model and checks its invariants
/// against independent oracles.
inline SugiyamaCheck check_sugiyama(const GraphModel& m) {
    using namespace layout;
    SugiyamaCheck out;
    LStructure l = build_l_structure(m);
    SugiyamaTrace t;
    sugiyama_run(l, LayoutOptions{}, &t);
    const std::size_t n = l.nodes.size();

    std::vector<std::pair<std::size_t, std::size_t>> dag;
    for (std::size_t i = 0; i < t.arcs.size(); ++i) {
        auto a = t.arcs[i];
        if (t.reversed.count(i)) std::swap(a.first, a.second);
        dag.push_back(a);
    }
    out.acyclic = is_acyclic(n, dag);
    if (!out.acyclic) out.detail += "cycle left after reversal; ";
    for (const auto& [s, d] : dag)
        if (s != d && t.layers[d] <= t.layers[s]) {
            out.layers_monotone = false;
            out.detail += "arc " + std::to_string(s) + "->" + std::to_string(d) + " not downward; ";
        }
    for (const auto& [s, d] : t.layered.arcs)
        if (t.layered.layer_of[d] != t.layered.layer_of[s] + 1) out.adjacent_layers = false;

    // Same-layer rectangles must not overlap, and rows must follow layers.
    std::map<int, std::vector<Rect>> rows;
    for (std::size_t v = 0; v < n; ++v) rows[t.layers[v]].push_back(l.nodes[v].rect);
    double prev_bottom = -1e300;
    for (auto& [layer, rects] : rows) {
        std::sort(rects.begin(), rects.end(), [](const Rect& a, const Rect& b) { return a.x < b.x; });
        for (std::size_t i = 0; i + 1 < rects.size(); ++i)
            if (rects[i].right() > rects[i + 1].x) {
                out.no_overlap = false;
                out.detail += "overlap in layer " + std::to_string(layer) + "; ";
            }
        double top = 1e300, bottom = -1e300;
        for (const Rect& r : rects) {
            top = std::min(top, r.y);
            bottom = std::max(bottom, r.bottom());
        }
        if (top < prev_bottom) out.rows_match_layers = false;
        prev_bottom = bottom;
    }
    for (std::size_t i = 1; i < t.sweep_crossings.size(); ++i)
        if (t.sweep_crossings[i] > t.sweep_crossings[i - 1]) {
            out.sweeps_monotone = false;
            out.detail += "sweep " + std::to_string(i) + " increased crossings; ";
        }
    return out;
}

inline GraphModel grid_graph(int rows, int cols) {
    GraphModel m;
    std::vector<NodeId> v;
    for (int i = 0; i < rows * cols; ++i) v.push_back(m.add_node(m.root(), {}));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) m.add_edge(v[r * cols + c], v[r * cols + c + 1]);
            if (r + 1 < rows) m.add_edge(v[r * cols + c], v[(r + 1) * cols + c]);
        }
    return m;
}

}  // namespace chisio::testing
