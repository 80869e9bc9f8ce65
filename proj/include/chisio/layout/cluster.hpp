#pragma once

#include <chisio/layout/cise.hpp>
#include <chisio/layout/cose.hpp>
#include <chisio/layout/layout.hpp>
#include <chisio/layout/lstructure.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chisio::layout {

/// Groups same-cluster nodes by wrapping each cluster in a temporary compound
/// (margin = compound_margin, no label strip), running CoSE, and dissolving
/// the wrappers again. Only the geometry of the original nodes survives.
inline LayoutReport cluster_run(LStructure& l, const ClusterAssignment& clusters, const LayoutOptions& opts,
                                LayoutContext& ctx) {
    if (!l.is_flat()) throw LayoutError("cluster layout does not support compound nodes");
    const CoseSettings settings{force_model_from(opts), GravityCenter::Barycenter};
    if (clusters.empty()) {
        assign_ideal_lengths(l, opts.ideal_edge_length);
        return cose_run(l, opts, ctx, settings);
    }

    std::map<NodeId, Index> index;
    for (Index i = 0; i < l.nodes.size(); ++i) index[l.nodes[i].id] = i;
    std::map<std::string, std::vector<Index>> groups;
    std::vector<bool> clustered(l.nodes.size(), false);
    for (const auto& [nid, cid] : clusters) {
        auto it = index.find(nid);
        if (it == index.end())
            throw LayoutError("cluster '" + cid + "' names node " + std::to_string(nid.value) + " which is not in the graph");
        groups[cid].push_back(it->second);
        clustered[it->second] = true;
    }

    LStructure w;
    std::vector<Index> to_wrapped(l.nodes.size());
    for (auto& [cid, members] : groups) {
        std::sort(members.begin(), members.end());
        const Index c = w.add_node(w.root(), {});
        w.graphs.push_back(LGraph{});
        const Index g = w.graphs.size() - 1;
        w.graphs[g].parent = c;
        w.graphs[g].margin = opts.compound_margin;
        w.graphs[g].label_strip = 0.0;
        w.nodes[c].child = g;
        for (Index v : members) {
            to_wrapped[v] = w.add_node(g, l.nodes[v].rect, l.nodes[v].id);
            w.nodes[to_wrapped[v]].pinned = l.nodes[v].pinned;
        }
    }
    for (Index v = 0; v < l.nodes.size(); ++v) {
        if (clustered[v]) continue;
        to_wrapped[v] = w.add_node(w.root(), l.nodes[v].rect, l.nodes[v].id);
        w.nodes[to_wrapped[v]].pinned = l.nodes[v].pinned;
    }
    for (const LEdge& e : l.edges) {
        const Index we = w.add_edge(to_wrapped[e.source], to_wrapped[e.target], opts.ideal_edge_length, e.id);
        w.edges[we].weight = e.weight;
    }
    w.tighten_all();
    assign_ideal_lengths(w, opts.ideal_edge_length);

    const LayoutReport report = cose_run(w, opts, ctx, settings);
    for (Index v = 0; v < l.nodes.size(); ++v) l.nodes[v].rect = w.nodes[to_wrapped[v]].rect;
    return report;
}

class ClusterLayout : public LayoutAlgorithm {
public:
    std::string name() const override { return "cluster"; }

    std::vector<OptionSpec> options() const override {
        auto o = CoseLayout{}.options();
        o.push_back({"compoundMargin", 10.0, "margin of the temporary cluster wrappers (px)"});
        return o;
    }

    void check_model(const GraphModel& model) const override {
        for (const auto& [id, n] : model.nodes())
            if (n.child) throw LayoutError("cluster layout does not support compound nodes");
    }

    LayoutReport run(LStructure& l, const LayoutOptions& opts, LayoutContext& ctx) override {
        return cluster_run(l, clusters_of(l), opts, ctx);
    }
};

}  // namespace chisio::layout
