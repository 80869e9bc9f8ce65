#pragma once

#include <chisio/geometry.hpp>

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chisio {

/// Every object of a model (graph, node, edge) draws its id from one counter,
/// so a raw id is unambiguous across kinds.
using ObjectId = std::uint64_t;

template <class Tag>
struct Id {
    ObjectId value = 0;
    auto operator<=>(const Id&) const = default;
};

using NodeId = Id<struct NodeTag>;
using EdgeId = Id<struct EdgeTag>;
using GraphId = Id<struct GraphTag>;

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(Rgb, Rgb) = default;

    std::string hex() const {
        char buf[8];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
        return buf;
    }

    /// Parses "#rrggbb" (case-insensitive). Returns nullopt on anything else.
    static std::optional<Rgb> parse(std::string_view s) {
        if (s.size() != 7 || s[0] != '#') return std::nullopt;
        auto nibble = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            return -1;
        };
        int v[6];
        for (int i = 0; i < 6; ++i) {
            v[i] = nibble(s[i + 1]);
            if (v[i] < 0) return std::nullopt;
        }
        return Rgb{static_cast<std::uint8_t>(v[0] * 16 + v[1]),
                   static_cast<std::uint8_t>(v[2] * 16 + v[3]),
                   static_cast<std::uint8_t>(v[4] * 16 + v[5])};
    }
};

enum class NodeShape { Rectangle, Ellipse, Triangle };
enum class LineStyle { Solid, Dashed };
enum class Arrow { None, Source, Target, Both };

struct RenderStyle {
    Rgb fill_color{255, 255, 255};
    Rgb border_color{0, 0, 0};
    LineStyle line_style = LineStyle::Solid;
    Arrow arrow = Arrow::None;
    double width = 1.0;

    friend bool operator==(const RenderStyle&, const RenderStyle&) = default;
};

inline RenderStyle default_node_style() { return {}; }

inline RenderStyle default_edge_style() {
    RenderStyle s;
    s.arrow = Arrow::Target;
    return s;
}

using AttributeBag = std::map<std::string, std::string>;

inline constexpr double kDefaultMargin = 10.0;
inline constexpr double kDefaultLabelStrip = 12.0;
inline constexpr double kDefaultNodeSize = 40.0;
inline constexpr double kEmptyCompoundSize = 40.0;

struct Node {
    NodeId id;
    std::string label;
    Rect bounds{0.0, 0.0, kDefaultNodeSize, kDefaultNodeSize};
    NodeShape shape = NodeShape::Rectangle;
    RenderStyle style = default_node_style();
    GraphId owner;
    std::optional<GraphId> child;
    std::optional<std::string> cluster;
    AttributeBag attributes;

    bool is_compound() const { return child.has_value(); }
};

struct Edge {
    EdgeId id;
    NodeId source;
    NodeId target;
    RenderStyle style = default_edge_style();
    std::string label;
    bool directed = true;
    AttributeBag attributes;
};

struct Graph {
    GraphId id;
    std::set<NodeId> nodes;
    std::optional<NodeId> parent;
    double margin = kDefaultMargin;
    double label_strip = kDefaultLabelStrip;
    AttributeBag attributes;
};

/// Everything a node is created from; the model assigns id, owner and nesting.
struct NodeSpec {
    std::string label;
    Rect bounds{0.0, 0.0, kDefaultNodeSize, kDefaultNodeSize};
    NodeShape shape = NodeShape::Rectangle;
    RenderStyle style = default_node_style();
    std::optional<std::string> cluster;
};

struct Violation {
    ObjectId object = 0;
    std::string rule;
};

/// Raw storage of a model. Mutating it directly bypasses every invariant;
/// loaders use it and then call GraphModel::refresh_all_bounds().
struct ModelData {
    std::map<GraphId, Graph> graphs;
    std::map<NodeId, Node> nodes;
    std::map<EdgeId, Edge> edges;
    GraphId root;
    std::set<ObjectId> highlight;
    ObjectId next_id = 1;
};

/// A compound graph: a tree of graphs whose inner vertices are compound nodes,
/// plus edges that may connect nodes anywhere in that tree.
///
/// Compound geometry is derived. After every mutation each compound tightly
/// bounds its children, inflated by the child graph's margin on all sides and
/// with the label strip appended below.
class GraphModel {
public:
    GraphModel() {
        const GraphId root{d_.next_id++};
        d_.root = root;
        d_.graphs[root] = Graph{.id = root};
    }

    GraphId root() const { return d_.root; }
    const ModelData& data() const { return d_; }
    ModelData& unchecked() { return d_; }

    const std::map<GraphId, Graph>& graphs() const { return d_.graphs; }
    const std::map<NodeId, Node>& nodes() const { return d_.nodes; }
    const std::map<EdgeId, Edge>& edges() const { return d_.edges; }
    const std::set<ObjectId>& highlighted() const { return d_.highlight; }

    bool contains(NodeId id) const { return d_.nodes.count(id) != 0; }
    bool contains(EdgeId id) const { return d_.edges.count(id) != 0; }
    bool contains(GraphId id) const { return d_.graphs.count(id) != 0; }

    const Node& node(NodeId id) const {
        auto it = d_.nodes.find(id);
        if (it == d_.nodes.end()) throw ModelError("unknown node " + std::to_string(id.value));
        return it->second;
    }
    const Edge& edge(EdgeId id) const {
        auto it = d_.edges.find(id);
        if (it == d_.edges.end()) throw ModelError("unknown edge " + std::to_string(id.value));
        return it->second;
    }
    const Graph& graph(GraphId id) const {
        auto it = d_.graphs.find(id);
        if (it == d_.graphs.end()) throw ModelError("unknown graph " + std::to_string(id.value));
        return it->second;
    }

    bool is_compound(NodeId id) const { return node(id).is_compound(); }

    /// Number of compound ancestors of a node (0 for root-level nodes).
    int depth(NodeId id) const {
        int d = 0;
        for (GraphId g = node(id).owner; graph(g).parent; g = node(*graph(g).parent).owner) ++d;
        return d;
    }

    /// True when `ancestor` is a compound whose nested graphs contain `id`.
    bool is_ancestor(NodeId ancestor, NodeId id) const {
        for (GraphId g = node(id).owner; graph(g).parent;) {
            const NodeId p = *graph(g).parent;
            if (p == ancestor) return true;
            g = node(p).owner;
        }
        return false;
    }

    std::size_t degree(NodeId id) const {
        std::size_t n = 0;
        for (const auto& [eid, e] : d_.edges) {
            if (e.source == id) ++n;
            if (e.target == id) ++n;
        }
        return n;
    }

    bool is_inter_graph(EdgeId id) const {
        const Edge& e = edge(id);
        return node(e.source).owner != node(e.target).owner;
    }

    // -- structural editing -------------------------------------------------

    NodeId add_node(GraphId g, const NodeSpec& spec = {}) {
        if (!contains(g)) throw ModelError("add_node: unknown graph " + std::to_string(g.value));
        check_rect(spec.bounds, "add_node");
        check_style(spec.style, "add_node");
        const NodeId id{d_.next_id++};
        Node n;
        n.id = id;
        n.label = spec.label;
        n.bounds = spec.bounds;
        n.shape = spec.shape;
        n.style = spec.style;
        n.owner = g;
        n.cluster = spec.cluster;
        d_.nodes.emplace(id, std::move(n));
        d_.graphs.at(g).nodes.insert(id);
        refresh_ancestors(g);
        return id;
    }

    EdgeId add_edge(NodeId source, NodeId target, const RenderStyle& style = default_edge_style(),
                    std::string label = {}) {
        if (!contains(source)) throw ModelError("add_edge: unknown source node " + std::to_string(source.value));
        if (!contains(target)) throw ModelError("add_edge: unknown target node " + std::to_string(target.value));
        check_style(style, "add_edge");
        const EdgeId id{d_.next_id++};
        d_.edges.emplace(id, Edge{.id = id, .source = source, .target = target, .style = style,
                                  .label = std::move(label)});
        return id;
    }

    /// Groups `members` of graph `g` under a new compound node placed in `g`.
    NodeId make_compound(GraphId g, const std::set<NodeId>& members, const NodeSpec& spec = {}) {
        if (!contains(g)) throw ModelError("make_compound: unknown graph " + std::to_string(g.value));
        if (members.empty()) throw ModelError("make_compound: empty member set");
        for (NodeId m : members) {
            if (!contains(m)) throw ModelError("make_compound: unknown node " + std::to_string(m.value));
            if (node(m).owner != g)
                throw ModelError("make_compound: node " + std::to_string(m.value) +
                                 " does not belong to graph " + std::to_string(g.value));
        }
        check_style(spec.style, "make_compound");
        const NodeId cid{d_.next_id++};
        const GraphId child{d_.next_id++};

        Graph cg{.id = child, .nodes = members, .parent = cid};
        d_.graphs.emplace(child, std::move(cg));

        Node c;
        c.id = cid;
        c.label = spec.label;
        c.shape = NodeShape::Rectangle;
        c.style = spec.style;
        c.owner = g;
        c.child = child;
        c.cluster = spec.cluster;
        d_.nodes.emplace(cid, std::move(c));

        Graph& parent = d_.graphs.at(g);
        for (NodeId m : members) {
            parent.nodes.erase(m);
            d_.nodes.at(m).owner = child;
        }
        parent.nodes.insert(cid);
        d_.nodes.at(cid).bounds = tight_bounds(cid);
        refresh_ancestors(g);
        return cid;
    }

    /// Recomputes a compound's bounds from its descendants' leaf geometry,
    /// ignoring whatever bounds are stored for nested compounds.
    Rect compound_bounds(NodeId id) const {
        const Node& n = node(id);
        if (!n.child) throw ModelError("compound_bounds: node " + std::to_string(id.value) + " is not a compound");
        const Graph& cg = graph(*n.child);
        if (cg.nodes.empty()) return empty_compound_box(n.bounds, cg);
        Extent e;
        for (NodeId c : cg.nodes) {
            const Node& cn = node(c);
            e.add(cn.child ? compound_bounds(c) : cn.bounds);
        }
        return wrap(e, cg);
    }

    void translate(NodeId id, double dx, double dy) {
        if (!contains(id)) throw ModelError("translate: unknown node " + std::to_string(id.value));
        if (!std::isfinite(dx) || !std::isfinite(dy)) throw ModelError("translate: non-finite delta");
        if (dx == 0.0 && dy == 0.0) return;
        shift_subtree(id, dx, dy);
        refresh_ancestors(node(id).owner);
    }

    /// Moves or resizes a leaf node. Compound bounds are derived and cannot be set.
    void set_bounds(NodeId id, const Rect& r) {
        const Node& n = node(id);
        if (n.child) throw ModelError("set_bounds: compound bounds are derived from children");
        check_rect(r, "set_bounds");
        d_.nodes.at(id).bounds = r;
        refresh_ancestors(n.owner);
    }

    void remove_node(NodeId id) {
        if (!contains(id)) throw ModelError("remove: unknown node " + std::to_string(id.value));
        const GraphId owner = node(id).owner;
        std::set<NodeId> doomed;
        collect_subtree(id, doomed);
        for (auto it = d_.edges.begin(); it != d_.edges.end();) {
            if (doomed.count(it->second.source) || doomed.count(it->second.target)) {
                d_.highlight.erase(it->first.value);
                it = d_.edges.erase(it);
            } else {
                ++it;
            }
        }
        for (NodeId n : doomed) {
            const Node& dn = d_.nodes.at(n);
            if (dn.child) {
                d_.highlight.erase(dn.child->value);
                d_.graphs.erase(*dn.child);
            }
            d_.highlight.erase(n.value);
            d_.nodes.erase(n);
        }
        d_.graphs.at(owner).nodes.erase(id);
        refresh_ancestors(owner);
    }

    void remove_edge(EdgeId id) {
        if (d_.edges.erase(id) == 0) throw ModelError("remove: unknown edge " + std::to_string(id.value));
        d_.highlight.erase(id.value);
    }

    void remove_object(ObjectId id) {
        if (contains(NodeId{id})) return remove_node(NodeId{id});
        if (contains(EdgeId{id})) return remove_edge(EdgeId{id});
        if (contains(GraphId{id})) throw ModelError("remove: graph " + std::to_string(id) + " is not removable");
        throw ModelError("remove: unknown object " + std::to_string(id));
    }

    // -- properties -----------------------------------------------------------

    void set_label(NodeId id, std::string label) { node(id); d_.nodes.at(id).label = std::move(label); }
    void set_shape(NodeId id, NodeShape s) { node(id); d_.nodes.at(id).shape = s; }
    void set_cluster(NodeId id, std::optional<std::string> c) { node(id); d_.nodes.at(id).cluster = std::move(c); }
    void set_style(NodeId id, const RenderStyle& s) {
        node(id);
        check_style(s, "set_style");
        d_.nodes.at(id).style = s;
    }
    void set_style(EdgeId id, const RenderStyle& s) {
        edge(id);
        check_style(s, "set_style");
        d_.edges.at(id).style = s;
    }
    void set_label(EdgeId id, std::string label) { edge(id); d_.edges.at(id).label = std::move(label); }
    void set_directed(EdgeId id, bool directed) { edge(id); d_.edges.at(id).directed = directed; }

    void set_margins(GraphId id, double margin, double label_strip) {
        graph(id);
        if (!(margin >= 0.0) || !(label_strip >= 0.0) || !std::isfinite(margin) || !std::isfinite(label_strip))
            throw ModelError("set_margins: margins must be finite and non-negative");
        Graph& g = d_.graphs.at(id);
        g.margin = margin;
        g.label_strip = label_strip;
        if (g.parent) {
            d_.nodes.at(*g.parent).bounds = tight_bounds(*g.parent);
            refresh_ancestors(node(*g.parent).owner);
        }
    }

    void highlight(ObjectId id) {
        if (!contains(NodeId{id}) && !contains(EdgeId{id}) && !contains(GraphId{id}))
            throw ModelError("highlight: unknown object " + std::to_string(id));
        d_.highlight.insert(id);
    }
    void unhighlight(ObjectId id) { d_.highlight.erase(id); }
    void clear_highlight() { d_.highlight.clear(); }

    // -- consistency ----------------------------------------------------------

    /// Re-tightens every compound bottom-up. Loaders call this after filling
    /// the raw storage.
    void refresh_all_bounds() { refresh_graph(d_.root); }

    /// Recomputes the ancestor chain of graph `g` (the compound owning `g`,
    /// then its owner's compound, and so on).
    void refresh_ancestors(GraphId g) {
        std::size_t guard = d_.graphs.size() + 1;
        while (guard-- > 0) {
            const Graph& gr = d_.graphs.at(g);
            if (!gr.parent) return;
            Node& p = d_.nodes.at(*gr.parent);
            p.bounds = tight_bounds(p.id);
            g = p.owner;
        }
    }

    /// Bounds of a compound computed from the bounds stored on its direct
    /// children (which are themselves tight when the model is consistent).
    Rect tight_bounds(NodeId id) const {
        const Node& n = d_.nodes.at(id);
        const Graph& cg = d_.graphs.at(*n.child);
        if (cg.nodes.empty()) return empty_compound_box(n.bounds, cg);
        Extent e;
        for (NodeId c : cg.nodes) e.add(d_.nodes.at(c).bounds);
        return wrap(e, cg);
    }

    std::vector<Violation> validate() const;

private:
    // Running min/max of child edges. Width and height are taken once from
    // the extremes so the result does not depend on the order of children.
    struct Extent {
        double l = std::numeric_limits<double>::infinity(), t = l;
        double r = -std::numeric_limits<double>::infinity(), b = r;
        void add(const Rect& x) {
            l = std::min(l, x.x);
            t = std::min(t, x.y);
            r = std::max(r, x.x + x.w);
            b = std::max(b, x.y + x.h);
        }
    };

    static Rect wrap(const Extent& e, const Graph& cg) {
        return {e.l - cg.margin, e.t - cg.margin, (e.r - e.l) + 2.0 * cg.margin,
                (e.b - e.t) + 2.0 * cg.margin + cg.label_strip};
    }

    static Rect empty_compound_box(const Rect& last, const Graph& cg) {
        return {last.x, last.y, kEmptyCompoundSize, kEmptyCompoundSize + cg.label_strip};
    }

    static void check_rect(const Rect& r, const char* op) {
        if (!r.finite() || r.w < 0.0 || r.h < 0.0)
            throw ModelError(std::string(op) + ": bounds must be finite with non-negative size");
    }

    static void check_style(const RenderStyle& s, const char* op) {
        if (!(s.width > 0.0) || !std::isfinite(s.width))
            throw ModelError(std::string(op) + ": style width must be positive");
    }

    void refresh_graph(GraphId g) {
        for (NodeId id : d_.graphs.at(g).nodes) {
            Node& n = d_.nodes.at(id);
            if (n.child) {
                refresh_graph(*n.child);
                n.bounds = tight_bounds(id);
            }
        }
    }

    void shift_subtree(NodeId id, double dx, double dy) {
        Node& n = d_.nodes.at(id);
        if (!n.child) {
            n.bounds = n.bounds.translated(dx, dy);
            return;
        }
        const Graph& cg = d_.graphs.at(*n.child);
        if (cg.nodes.empty()) {
            n.bounds = n.bounds.translated(dx, dy);
            return;
        }
        for (NodeId c : cg.nodes) shift_subtree(c, dx, dy);
        n.bounds = tight_bounds(id);
    }

    void collect_subtree(NodeId id, std::set<NodeId>& out) const {
        out.insert(id);
        const Node& n = d_.nodes.at(id);
        if (!n.child) return;
        for (NodeId c : d_.graphs.at(*n.child).nodes) collect_subtree(c, out);
    }

    ModelData d_;
};

inline std::vector<Violation> GraphModel::validate() const {
    std::vector<Violation> out;
    auto report = [&out](ObjectId id, std::string rule) { out.push_back({id, std::move(rule)}); };
    auto name = [](char kind, ObjectId id) { return std::string(1, kind) + std::to_string(id); };

    bool structural_ok = true;

    auto root_it = d_.graphs.find(d_.root);
    if (root_it == d_.graphs.end()) {
        report(d_.root.value, "root graph missing");
        return out;
    }
    if (root_it->second.parent) {
        report(d_.root.value, "root graph has a parent node");
        structural_ok = false;
    }

    std::map<NodeId, std::vector<GraphId>> listed;
    for (const auto& [gid, g] : d_.graphs) {
        if (g.id != gid) report(gid.value, "graph id does not match its key");
        if (g.parent) {
            auto pit = d_.nodes.find(*g.parent);
            if (pit == d_.nodes.end()) {
                report(gid.value, "parent node " + name('n', g.parent->value) + " does not exist");
                structural_ok = false;
            } else if (pit->second.child != gid) {
                report(gid.value, "parent node " + name('n', g.parent->value) + " does not own this graph");
                structural_ok = false;
            }
        } else if (gid != d_.root) {
            report(gid.value, "non-root graph without parent compound");
            structural_ok = false;
        }
        if (!(g.margin >= 0.0) || !(g.label_strip >= 0.0) || !std::isfinite(g.margin) ||
            !std::isfinite(g.label_strip))
            report(gid.value, "margins must be finite and non-negative");
        for (NodeId n : g.nodes) {
            listed[n].push_back(gid);
            if (!d_.nodes.count(n)) {
                report(gid.value, "lists missing node " + name('n', n.value));
                structural_ok = false;
            }
        }
    }

    for (const auto& [nid, n] : d_.nodes) {
        if (n.id != nid) report(nid.value, "node id does not match its key");
        if (!d_.graphs.count(n.owner)) {
            report(nid.value, "owner graph " + name('g', n.owner.value) + " does not exist");
            structural_ok = false;
        }
        const std::size_t count = listed.count(nid) ? listed.at(nid).size() : 0;
        if (count != 1) {
            report(nid.value, "node belongs to " + std::to_string(count) + " graphs");
            structural_ok = false;
        } else if (listed.at(nid).front() != n.owner) {
            report(nid.value, "listed by graph " + name('g', listed.at(nid).front().value) + " but owned by " +
                                  name('g', n.owner.value));
            structural_ok = false;
        }
        if (n.child) {
            auto cit = d_.graphs.find(*n.child);
            if (cit == d_.graphs.end()) {
                report(nid.value, "child graph " + name('g', n.child->value) + " does not exist");
                structural_ok = false;
            } else if (cit->second.parent != nid) {
                report(nid.value, "child graph " + name('g', n.child->value) + " names another parent");
                structural_ok = false;
            }
        }
        if (!n.bounds.finite() || n.bounds.w < 0.0 || n.bounds.h < 0.0)
            report(nid.value, "bounds must be finite with non-negative size");
        if (!(n.style.width > 0.0)) report(nid.value, "style width must be positive");
    }

    // Nesting must be a tree rooted at the root graph.
    std::set<GraphId> in_cycle;
    for (const auto& [gid, g] : d_.graphs) {
        std::vector<GraphId> chain{gid};
        std::set<GraphId> seen{gid};
        GraphId cur = gid;
        bool reached_root = false;
        while (true) {
            if (cur == d_.root) {
                reached_root = true;
                break;
            }
            const Graph& cg = d_.graphs.at(cur);
            if (!cg.parent) break;
            auto pit = d_.nodes.find(*cg.parent);
            if (pit == d_.nodes.end() || !d_.graphs.count(pit->second.owner)) break;
            cur = pit->second.owner;
            if (seen.count(cur)) {
                if (!in_cycle.count(cur)) {
                    auto start = std::find(chain.begin(), chain.end(), cur);
                    std::string desc;
                    GraphId walk = cur;
                    for (auto it = start; it != chain.end(); ++it) {
                        walk = *it;
                        in_cycle.insert(walk);
                        desc += name('g', walk.value) + " -> " + name('n', d_.graphs.at(walk).parent->value) + " -> ";
                    }
                    desc += name('g', cur.value);
                    report(cur.value, "cyclic nesting: " + desc);
                }
                structural_ok = false;
                break;
            }
            seen.insert(cur);
            chain.push_back(cur);
        }
        if (!reached_root && !in_cycle.count(gid)) {
            report(gid.value, "graph not reachable from root");
            structural_ok = false;
        }
    }

    for (const auto& [eid, e] : d_.edges) {
        if (e.id != eid) report(eid.value, "edge id does not match its key");
        if (!d_.nodes.count(e.source)) report(eid.value, "source " + name('n', e.source.value) + " does not exist");
        if (!d_.nodes.count(e.target)) report(eid.value, "target " + name('n', e.target.value) + " does not exist");
        if (!(e.style.width > 0.0)) report(eid.value, "style width must be positive");
    }

    for (ObjectId h : d_.highlight)
        if (!d_.nodes.count(NodeId{h}) && !d_.edges.count(EdgeId{h}) && !d_.graphs.count(GraphId{h}))
            report(h, "highlighted object does not exist");

    if (structural_ok) {
        for (const auto& [nid, n] : d_.nodes) {
            if (!n.child) continue;
            if (!(n.bounds == tight_bounds(nid))) report(nid.value, "compound bounds are not tight");
        }
    }
    return out;
}

}  // namespace chisio
