#pragma once

// Layered drawing of directed graphs in four phases: cycle removal by
// reversing depth-first back edges, longest-path layering, barycenter
// ordering sweeps over a graph whose long edges are split by dummy vertices,
// and coordinate assignment with one barycenter alignment pass.

#include <chisio/layout/layout.hpp>
#include <chisio/layout/lstructure.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <set>
#include <span>
#include <utility>
#include <vector>

namespace chisio::layout {

using Arc = std::pair<std::size_t, std::size_t>;

/// Edges whose reversal makes the graph acyclic: the back edges of an
/// iterative depth-first search started from vertices in index order.
/// Self-loops are never reported (they are ignored by layering).
inline std::set<std::size_t> remove_cycles(std::size_t vertex_count, std::span<const Arc> arcs) {
    std::vector<std::vector<std::size_t>> out(vertex_count);
    for (std::size_t i = 0; i < arcs.size(); ++i)
        if (arcs[i].first != arcs[i].second) out[arcs[i].first].push_back(i);

    enum class Mark { White, Grey, Black };
    std::vector<Mark> mark(vertex_count, Mark::White);
    std::set<std::size_t> reversed;
    std::vector<std::pair<std::size_t, std::size_t>> stack;  // vertex, next out-arc position
    for (std::size_t root = 0; root < vertex_count; ++root) {
        if (mark[root] != Mark::White) continue;
        mark[root] = Mark::Grey;
        stack.emplace_back(root, 0);
        while (!stack.empty()) {
            auto& [v, k] = stack.back();
            if (k == out[v].size()) {
                mark[v] = Mark::Black;
                stack.pop_back();
                continue;
            }
            const std::size_t arc = out[v][k++];
            const std::size_t w = arcs[arc].second;
            if (mark[w] == Mark::Grey) {
                reversed.insert(arc);
            } else if (mark[w] == Mark::White) {
                mark[w] = Mark::Grey;
                stack.emplace_back(w, 0);
            }
        }
    }
    return reversed;
}

/// Longest-path layering: sources at 0, every other vertex one below its
/// deepest predecessor. Throws if the arcs contain a cycle.
inline std::vector<int> assign_layers(std::size_t vertex_count, std::span<const Arc> arcs) {
    std::vector<std::vector<std::size_t>> succ(vertex_count);
    std::vector<std::size_t> indeg(vertex_count, 0);
    for (const auto& [s, t] : arcs) {
        if (s == t) continue;
        succ[s].push_back(t);
        ++indeg[t];
    }
    std::vector<int> layer(vertex_count, 0);
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < vertex_count; ++v)
        if (indeg[v] == 0) ready.push_back(v);
    std::size_t done = 0;
    for (std::size_t head = 0; head < ready.size(); ++head) {
        const std::size_t v = ready[head];
        ++done;
        for (std::size_t w : succ[v]) {
            layer[w] = std::max(layer[w], layer[v] + 1);
            if (--indeg[w] == 0) ready.push_back(w);
        }
    }
    if (done != vertex_count) throw LayoutError("assign_layers: graph contains a cycle");
    return layer;
}

/// Layered graph whose arcs all join adjacent layers. Vertices below
/// `real_count` are graph nodes; the rest are dummies on split long edges.
struct LayeredGraph {
    std::size_t real_count = 0;
    std::vector<int> layer_of;
    std::vector<std::vector<std::size_t>> layers;
    std::vector<Arc> arcs;  // upper -> lower
};

inline LayeredGraph split_long_edges(std::size_t vertex_count, std::span<const Arc> arcs, const std::vector<int>& layer) {
    LayeredGraph g;
    g.real_count = vertex_count;
    g.layer_of = layer;
    for (const auto& [s, t] : arcs) {
        if (s == t) continue;
        std::size_t prev = s;
        for (int k = layer[s] + 1; k < layer[t]; ++k) {
            const std::size_t dummy = g.layer_of.size();
            g.layer_of.push_back(k);
            g.arcs.emplace_back(prev, dummy);
            prev = dummy;
        }
        g.arcs.emplace_back(prev, t);
    }
    int depth = 0;
    for (int l : g.layer_of) depth = std::max(depth, l + 1);
    g.layers.assign(static_cast<std::size_t>(depth), {});
    for (std::size_t v = 0; v < g.layer_of.size(); ++v) g.layers[static_cast<std::size_t>(g.layer_of[v])].push_back(v);
    return g;
}

inline std::vector<std::size_t> positions_of(const LayeredGraph& g) {
    std::vector<std::size_t> pos(g.layer_of.size(), 0);
    for (const auto& layer : g.layers)
        for (std::size_t i = 0; i < layer.size(); ++i) pos[layer[i]] = i;
    return pos;
}

/// Crossings between arcs joining layer `upper` and `upper + 1`.
inline std::size_t layer_crossings(const LayeredGraph& g, const std::vector<std::size_t>& pos, int upper) {
    std::vector<Arc> between;
    for (const auto& a : g.arcs)
        if (g.layer_of[a.first] == upper) between.push_back({pos[a.first], pos[a.second]});
    std::size_t n = 0;
    for (std::size_t i = 0; i < between.size(); ++i)
        for (std::size_t j = i + 1; j < between.size(); ++j) {
            const auto [u1, v1] = between[i];
            const auto [u2, v2] = between[j];
            if ((u1 < u2 && v1 > v2) || (u1 > u2 && v1 < v2)) ++n;
        }
    return n;
}

inline std::size_t total_crossings(const LayeredGraph& g) {
    const auto pos = positions_of(g);
    std::size_t n = 0;
    for (int k = 0; k + 1 < static_cast<int>(g.layers.size()); ++k) n += layer_crossings(g, pos, k);
    return n;
}

/// Mean of the given neighbour positions.
inline double barycenter(std::span<const double> positions) {
    if (positions.empty()) return 0.0;
    return std::accumulate(positions.begin(), positions.end(), 0.0) / static_cast<double>(positions.size());
}

namespace detail {

/// Reorders one layer by the barycenters of its neighbours in the adjacent
/// layer; vertices without such neighbours keep their current position.
inline void reorder_layer(LayeredGraph& g, std::size_t layer, bool use_upper) {
    const auto pos = positions_of(g);
    auto& members = g.layers[layer];
    std::vector<std::vector<double>> nbr(g.layer_of.size());
    for (const auto& [u, v] : g.arcs) {
        if (use_upper && static_cast<std::size_t>(g.layer_of[v]) == layer) nbr[v].push_back(static_cast<double>(pos[u]));
        if (!use_upper && static_cast<std::size_t>(g.layer_of[u]) == layer) nbr[u].push_back(static_cast<double>(pos[v]));
    }
    std::vector<std::pair<double, std::size_t>> keyed;
    for (std::size_t v : members)
        keyed.emplace_back(nbr[v].empty() ? static_cast<double>(pos[v]) : barycenter(nbr[v]), v);
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < members.size(); ++i) members[i] = keyed[i].second;
}

}  // namespace detail

/// Barycenter sweeps (each a downward then an upward pass). A sweep is kept
/// only if it does not increase the crossing count. Returns the crossing
/// count before the first sweep followed by the count after each sweep.
inline std::vector<std::size_t> order_layers(LayeredGraph& g, int sweeps) {
    std::vector<std::size_t> history{total_crossings(g)};
    for (int s = 0; s < sweeps; ++s) {
        const auto saved = g.layers;
        for (std::size_t k = 1; k < g.layers.size(); ++k) detail::reorder_layer(g, k, true);
        for (std::size_t k = g.layers.size(); k-- > 1;) detail::reorder_layer(g, k - 1, false);
        const std::size_t now = total_crossings(g);
        if (now > history.back()) {
            g.layers = saved;
            history.push_back(history.back());
        } else {
            history.push_back(now);
        }
    }
    return history;
}

struct SugiyamaSpacing {
    double node_separation = 20.0;
    double rank_separation = 50.0;
};

/// Places vertices: x packs each layer left to right with `node_separation`
/// gaps, then one downward pass pulls vertices towards the mean x of their
/// upper neighbours (order and gaps preserved); y stacks layers
/// `max height + rank_separation` apart. Returns one rectangle per vertex;
/// dummies have zero size.
inline std::vector<Rect> assign_coordinates(const LayeredGraph& g, std::span<const Rect> real_sizes,
                                            const SugiyamaSpacing& spacing) {
    const std::size_t n = g.layer_of.size();
    std::vector<double> w(n, 0.0), h(n, 0.0), cx(n, 0.0);
    double max_h = 0.0;
    for (std::size_t v = 0; v < g.real_count; ++v) {
        w[v] = real_sizes[v].w;
        h[v] = real_sizes[v].h;
        max_h = std::max(max_h, h[v]);
    }
    for (const auto& layer : g.layers) {
        double left = 0.0;
        for (std::size_t v : layer) {
            cx[v] = left + w[v] / 2.0;
            left += w[v] + spacing.node_separation;
        }
    }
    std::vector<std::vector<std::size_t>> upper(n);
    for (const auto& [u, v] : g.arcs) upper[v].push_back(u);
    for (std::size_t k = 1; k < g.layers.size(); ++k) {
        const auto& layer = g.layers[k];
        for (std::size_t i = 0; i < layer.size(); ++i) {
            const std::size_t v = layer[i];
            double want = cx[v];
            if (!upper[v].empty()) {
                std::vector<double> xs;
                for (std::size_t u : upper[v]) xs.push_back(cx[u]);
                want = barycenter(xs);
            }
            if (i > 0) {
                const std::size_t p = layer[i - 1];
                want = std::max(want, cx[p] + (w[p] + w[v]) / 2.0 + spacing.node_separation);
            }
            cx[v] = want;
        }
    }
    std::vector<Rect> out(n);
    for (std::size_t v = 0; v < n; ++v) {
        const double band = static_cast<double>(g.layer_of[v]) * (max_h + spacing.rank_separation);
        out[v] = {cx[v] - w[v] / 2.0, band + (max_h - h[v]) / 2.0, w[v], h[v]};
    }
    return out;
}

struct SugiyamaTrace {
    std::vector<Arc> arcs;
    std::set<std::size_t> reversed;
    std::vector<int> layers;
    std::vector<std::size_t> sweep_crossings;
    LayeredGraph layered;
};

/// Full pipeline on a flat l-structure. Undirected edges point from the
/// lower node id to the higher one.
inline LayoutReport sugiyama_run(LStructure& l, const LayoutOptions& opts, SugiyamaTrace* trace = nullptr) {
    if (!l.is_flat()) throw LayoutError("sugiyama layout does not support compound nodes");
    const std::size_t n = l.nodes.size();
    std::vector<Arc> arcs;
    for (const LEdge& e : l.edges) {
        Arc a{e.source, e.target};
        if (!e.directed && l.nodes[a.second].id < l.nodes[a.first].id) std::swap(a.first, a.second);
        arcs.push_back(a);
    }
    const auto reversed = remove_cycles(n, arcs);
    std::vector<Arc> dag = arcs;
    for (std::size_t i : reversed) std::swap(dag[i].first, dag[i].second);
    const auto layer = assign_layers(n, dag);
    LayeredGraph g = split_long_edges(n, dag, layer);
    const double sweep_option = opts.get("sweeps", 4.0);
    if (sweep_option < 0.0 || sweep_option > 1000.0 || sweep_option != std::floor(sweep_option))
        throw LayoutError("option 'sweeps' must be a whole number in [0, 1000]");
    const int sweeps = static_cast<int>(sweep_option);
    const auto history = order_layers(g, sweeps);
    std::vector<Rect> sizes;
    for (const auto& node : l.nodes) sizes.push_back(node.rect);
    const SugiyamaSpacing spacing{opts.get("nodeSeparation", 20.0), opts.get("rankSeparation", 50.0)};
    const auto rects = assign_coordinates(g, sizes, spacing);
    for (std::size_t v = 0; v < n; ++v) l.nodes[v].rect = rects[v];
    if (trace) *trace = SugiyamaTrace{arcs, reversed, layer, history, g};
    LayoutReport report;
    report.iterations_used = sweeps;
    return report;
}

class SugiyamaLayout : public LayoutAlgorithm {
public:
    std::string name() const override { return "sugiyama"; }

    std::vector<OptionSpec> options() const override {
        return {{"nodeSeparation", 20.0, "horizontal gap between nodes of a layer (px)"},
                {"rankSeparation", 50.0, "vertical gap between layers (px)"},
                {"sweeps", 4.0, "barycenter ordering sweeps"}};
    }

    void check_model(const GraphModel& model) const override {
        for (const auto& [id, node] : model.nodes())
            if (node.child) throw LayoutError("sugiyama layout does not support compound nodes");
    }

    LayoutReport run(LStructure& l, const LayoutOptions& opts, LayoutContext&) override { return sugiyama_run(l, opts); }
};

}  // namespace chisio::layout
