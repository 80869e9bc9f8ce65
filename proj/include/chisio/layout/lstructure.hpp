#pragma once

#include <chisio/geometry.hpp>
#include <chisio/model.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chisio::layout {

class LayoutError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Index = std::size_t;

struct LNode {
    NodeId id;
    Rect rect;
    Index owner = 0;
    std::optional<Index> child;
    Point displacement;
    bool pinned = false;
    /// Boundary distances treat the node as the disk inscribed in `rect`.
    bool round = false;
    std::optional<std::string> cluster;

    Point center() const { return rect.center(); }
};

struct LEdge {
    EdgeId id;
    Index source = 0;
    Index target = 0;
    double ideal_length = 50.0;
    bool inter_graph = false;
    double weight = 1.0;
    bool directed = true;
};

struct LGraph {
    GraphId id;
    std::vector<Index> nodes;
    std::optional<Index> parent;
    double margin = kDefaultMargin;
    double label_strip = kDefaultLabelStrip;
};

/// Layout-only mirror of a GraphModel (the graph manager): graphs, nodes and
/// edges addressed by index. Built for one layout run and discarded after the
/// geometry has been transferred back.
///
/// Graph 0 is the root. Nodes are stored in pre-order, so every compound
/// precedes its descendants.
class LStructure {
public:
    std::vector<LGraph> graphs;
    std::vector<LNode> nodes;
    std::vector<LEdge> edges;

    LStructure() { graphs.push_back(LGraph{}); }

    Index root() const { return 0; }

    bool is_flat() const {
        for (const auto& n : nodes)
            if (n.child) return false;
        return true;
    }

    /// Number of compound ancestors of node `v`.
    int depth(Index v) const {
        int d = 0;
        for (Index g = nodes[v].owner; graphs[g].parent; g = nodes[*graphs[g].parent].owner) ++d;
        return d;
    }

    int graph_depth(Index g) const {
        int d = 0;
        for (; graphs[g].parent; g = nodes[*graphs[g].parent].owner) ++d;
        return d;
    }

    std::optional<Index> parent_node(Index v) const { return graphs[nodes[v].owner].parent; }

    bool is_ancestor(Index ancestor, Index v) const {
        for (auto p = parent_node(v); p; p = parent_node(*p))
            if (*p == ancestor) return true;
        return false;
    }

    /// Lowest graph of the nesting tree containing both nodes.
    Index common_graph(Index a, Index b) const {
        Index ga = nodes[a].owner;
        Index gb = nodes[b].owner;
        int da = graph_depth(ga);
        int db = graph_depth(gb);
        auto up = [this](Index g) { return nodes[*graphs[g].parent].owner; };
        while (da > db) { ga = up(ga); --da; }
        while (db > da) { gb = up(gb); --db; }
        while (ga != gb) { ga = up(ga); gb = up(gb); }
        return ga;
    }

    std::size_t descendant_count(Index v) const {
        if (!nodes[v].child) return 0;
        std::size_t n = 0;
        for (Index c : graphs[*nodes[v].child].nodes) n += 1 + descendant_count(c);
        return n;
    }

    /// Moves a node and, for compounds, every descendant by the same offset.
    void translate_subtree(Index v, Point d) {
        nodes[v].rect = nodes[v].rect.translated(d.x, d.y);
        if (!nodes[v].child) return;
        for (Index c : graphs[*nodes[v].child].nodes) translate_subtree(c, d);
    }

    /// Compound rectangle from its children's current rectangles, using the
    /// same rule as the model.
    Rect tight_rect(Index v) const {
        const LNode& n = nodes[v];
        const LGraph& g = graphs[*n.child];
        if (g.nodes.empty()) return {n.rect.x, n.rect.y, kEmptyCompoundSize, kEmptyCompoundSize + g.label_strip};
        const Rect& f = nodes[g.nodes.front()].rect;
        double l = f.x, t = f.y, r = f.right(), b = f.bottom();
        for (Index c : g.nodes) {
            const Rect& x = nodes[c].rect;
            l = std::min(l, x.x);
            t = std::min(t, x.y);
            r = std::max(r, x.right());
            b = std::max(b, x.bottom());
        }
        return {l - g.margin, t - g.margin, (r - l) + 2.0 * g.margin, (b - t) + 2.0 * g.margin + g.label_strip};
    }

    /// Re-tightens every compound, deepest first.
    void tighten_all() {
        for (Index i = nodes.size(); i-- > 0;)
            if (nodes[i].child) nodes[i].rect = tight_rect(i);
    }

    std::optional<Index> find(NodeId id) const {
        for (Index i = 0; i < nodes.size(); ++i)
            if (nodes[i].id == id) return i;
        return std::nullopt;
    }

    /// Appends a node to graph `g`; returns its index. Only valid while the
    /// pre-order property is kept (append into the deepest graph last).
    Index add_node(Index g, Rect r, NodeId id = {}) {
        LNode n;
        n.id = id;
        n.rect = r;
        n.owner = g;
        nodes.push_back(n);
        graphs[g].nodes.push_back(nodes.size() - 1);
        return nodes.size() - 1;
    }

    Index add_edge(Index s, Index t, double ideal = 50.0, EdgeId id = {}) {
        LEdge e;
        e.id = id;
        e.source = s;
        e.target = t;
        e.ideal_length = ideal;
        e.inter_graph = nodes[s].owner != nodes[t].owner;
        edges.push_back(e);
        return edges.size() - 1;
    }
};

namespace detail {

inline void mirror_graph(const GraphModel& model, GraphId gid, Index lg, LStructure& l) {
    const Graph& g = model.graph(gid);
    l.graphs[lg].id = gid;
    l.graphs[lg].margin = g.margin;
    l.graphs[lg].label_strip = g.label_strip;
    for (NodeId nid : g.nodes) {
        const Node& n = model.node(nid);
        const Index li = l.add_node(lg, n.bounds, nid);
        l.nodes[li].cluster = n.cluster;
        if (n.child) {
            l.graphs.push_back(LGraph{});
            const Index child = l.graphs.size() - 1;
            l.graphs[child].parent = li;
            l.nodes[li].child = child;
            mirror_graph(model, *n.child, child, l);
        }
    }
}

}  // namespace detail

/// One LGraph per model graph, one LNode per node, one LEdge per edge.
inline LStructure build_l_structure(const GraphModel& model, double ideal_edge_length = 50.0) {
    if (auto v = model.validate(); !v.empty())
        throw LayoutError("invalid model: object " + std::to_string(v.front().object) + ": " + v.front().rule);
    LStructure l;
    detail::mirror_graph(model, model.root(), 0, l);
    std::map<NodeId, Index> index;
    for (Index i = 0; i < l.nodes.size(); ++i) index[l.nodes[i].id] = i;
    for (const auto& [eid, e] : model.edges()) {
        const Index le = l.add_edge(index.at(e.source), index.at(e.target), ideal_edge_length, eid);
        l.edges[le].directed = e.directed;
    }
    return l;
}

/// Copies l-level geometry back: leaves (and empty compounds, whose rect is
/// their anchor) take their LNode rect; compounds are then re-tightened.
inline void transfer_geometry(const LStructure& l, GraphModel& model) {
    if (l.nodes.size() != model.nodes().size() || l.edges.size() != model.edges().size() ||
        l.graphs.size() != model.graphs().size())
        throw LayoutError("transfer_geometry: topology mismatch between l-structure and model");
    ModelData& d = model.unchecked();
    for (const LNode& n : l.nodes) {
        auto it = d.nodes.find(n.id);
        if (it == d.nodes.end()) throw LayoutError("transfer_geometry: unknown node " + std::to_string(n.id.value));
        if (!n.rect.finite()) throw LayoutError("transfer_geometry: non-finite geometry");
        Node& mn = it->second;
        if (!mn.child || d.graphs.at(*mn.child).nodes.empty()) mn.bounds = n.rect;
    }
    model.refresh_all_bounds();
}

}  // namespace chisio::layout
