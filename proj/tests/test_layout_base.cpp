#include "support.hpp"

#include <gtest/gtest.h>

using namespace chisio;
using namespace chisio::layout;

TEST(LStructure, PathInRoot) {
    GraphModel m;
    const NodeId a = m.add_node(m.root());
    const NodeId b = m.add_node(m.root());
    const NodeId c = m.add_node(m.root());
    m.add_edge(a, b);
    m.add_edge(b, c);
    const LStructure l = build_l_structure(m);
    EXPECT_EQ(l.graphs.size(), 1u);
    EXPECT_EQ(l.nodes.size(), 3u);
    EXPECT_EQ(l.edges.size(), 2u);
    for (const auto& e : l.edges) EXPECT_FALSE(e.inter_graph);
    EXPECT_TRUE(l.is_flat());
}

TEST(LStructure, InterGraphFlag) {
    GraphModel m;
    const NodeId a = m.add_node(m.root());
    const NodeId b = m.add_node(m.root());
    const NodeId c = m.add_node(m.root());
    const EdgeId cross = m.add_edge(a, b);
    const EdgeId local = m.add_edge(a, c);
    m.make_compound(m.root(), {a, c});
    const LStructure l = build_l_structure(m);
    for (const auto& e : l.edges) {
        const bool expected = m.node(l.nodes[e.source].id).owner != m.node(l.nodes[e.target].id).owner;
        EXPECT_EQ(e.inter_graph, expected);
        if (e.id == cross) EXPECT_TRUE(e.inter_graph);
        if (e.id == local) EXPECT_FALSE(e.inter_graph);
    }
    EXPECT_FALSE(l.is_flat());
}

TEST(LStructure, EmptyModel) {
    const LStructure l = build_l_structure(GraphModel{});
    EXPECT_EQ(l.graphs.size(), 1u);
    EXPECT_TRUE(l.nodes.empty());
    EXPECT_TRUE(l.edges.empty());
}

TEST(LStructure, PreOrderMirrorsNesting) {
    Rng rng(5);
    const GraphModel m = chisio::testing::random_compound_graph(rng, 60, 4);
    const LStructure l = build_l_structure(m);
    ASSERT_EQ(l.nodes.size(), m.nodes().size());
    ASSERT_EQ(l.graphs.size(), m.graphs().size());
    for (Index v = 0; v < l.nodes.size(); ++v) {
        const Node& n = m.node(l.nodes[v].id);
        EXPECT_EQ(l.nodes[v].rect, n.bounds);
        EXPECT_EQ(l.graphs[l.nodes[v].owner].id, n.owner);
        EXPECT_EQ(l.depth(v), m.depth(n.id));
        if (l.nodes[v].child) {
            EXPECT_EQ(l.graphs[*l.nodes[v].child].id, *n.child);
            // Pre-order: a compound precedes everything inside it.
            for (Index w : l.graphs[*l.nodes[v].child].nodes) EXPECT_GT(w, v);
        }
    }
}

TEST(Transfer, IdentityMoveAndRetighten) {
    GraphModel m;
    const NodeId a = m.add_node(m.root());
    const NodeId b = m.add_node(m.root());
    const NodeId c = m.make_compound(m.root(), {a});
    const std::string before = write_graphml(m);

    LStructure l = build_l_structure(m);
    transfer_geometry(l, m);
    EXPECT_EQ(write_graphml(m), before);

    const Index ib = *l.find(b);
    l.nodes[ib].rect.x = 100;
    l.nodes[ib].rect.y = 200;
    const Index ia = *l.find(a);
    l.nodes[ia].rect = l.nodes[ia].rect.translated(-30, 15);
    transfer_geometry(l, m);
    EXPECT_EQ(m.node(b).bounds.x, 100);
    EXPECT_EQ(m.node(b).bounds.y, 200);
    EXPECT_EQ(m.node(c).bounds, m.compound_bounds(c));
    EXPECT_EQ(m.node(c).bounds.x, -40);
}

TEST(Transfer, TopologyMismatchThrows) {
    GraphModel m;
    m.add_node(m.root());
    LStructure l = build_l_structure(m);
    m.add_node(m.root());
    EXPECT_THROW(transfer_geometry(l, m), LayoutError);
}

TEST(RunLayout, EmptyModelIsNoOp) {
    for (const auto& name : algorithm_names()) {
        GraphModel m;
        auto algo = make_algorithm(name);
        const LayoutReport r = run_layout(m, *algo, {});
        EXPECT_EQ(r.iterations_used, 0) << name;
        EXPECT_EQ(m.nodes().size(), 0u);
    }
}

TEST(RunLayout, SameSeedSameBytes) {
    for (const auto& name : algorithm_names()) {
        Rng rng(11);
        const GraphModel base = chisio::testing::random_flat_graph(rng, 20);
        GraphModel a = base, b = base;
        auto algo = make_algorithm(name);
        LayoutOptions o;
        o.seed = 42;
        run_layout(a, *algo, o);
        run_layout(b, *algo, o);
        EXPECT_EQ(write_graphml(a), write_graphml(b)) << name;
    }
}

TEST(RunLayout, DifferentSeedsDiffer) {
    for (const char* name : {"cose", "spring", "cise", "cluster"}) {
        Rng rng(3);
        GraphModel base = chisio::testing::random_flat_graph(rng, 20);
        chisio::testing::assign_random_clusters(base, rng, 3, 0.2);
        GraphModel a = base, b = base;
        auto algo = make_algorithm(name);
        LayoutOptions o;
        o.seed = 1;
        run_layout(a, *algo, o);
        o.seed = 2;
        run_layout(b, *algo, o);
        EXPECT_NE(write_graphml(a), write_graphml(b)) << name;
    }
}

TEST(RunLayout, TopologyUntouched) {
    for (const auto& name : algorithm_names()) {
        Rng rng(8);
        GraphModel m = chisio::testing::random_flat_graph(rng, 15);
        chisio::testing::assign_random_clusters(m, rng, 2, 0.3);
        const GraphModel before = m;
        auto algo = make_algorithm(name);
        run_layout(m, *algo, {});
        std::string why;
        EXPECT_FALSE(chisio::testing::structural_equal(before, m, 0, &why)) << name << " moved nothing";
        EXPECT_EQ(why.find("geometry") != std::string::npos, true) << name << ": " << why;
        EXPECT_TRUE(m.validate().empty());
    }
}

TEST(Registry, NamesOptionsAndErrors) {
    EXPECT_EQ(algorithm_names(), (std::vector<std::string>{"cose", "spring", "cise", "circular", "cluster", "sugiyama"}));
    EXPECT_EQ(make_algorithm("hierarchical")->name(), "sugiyama");
    EXPECT_THROW(make_algorithm("nope"), UnknownAlgorithm);

    auto cose = make_algorithm("cose");
    LayoutOptions o;
    set_option(o, *cose, "idealEdgeLength=80");
    set_option(o, *cose, "springConstant", 0.3);
    EXPECT_EQ(o.ideal_edge_length, 80);
    EXPECT_EQ(o.extra.at("springConstant"), 0.3);
    EXPECT_THROW(set_option(o, *cose, "nodeSeparation", 3), LayoutError);
    EXPECT_THROW(set_option(o, *cose, "iterations", 2.5), LayoutError);
    EXPECT_THROW(set_option(o, *cose, "idealEdgeLength=abc"), LayoutError);
    EXPECT_THROW(set_option(o, *cose, "=3"), LayoutError);
}

TEST(Registry, CompoundRejection) {
    GraphModel m;
    const NodeId a = m.add_node(m.root());
    m.make_compound(m.root(), {a});
    for (const char* name : {"cise", "circular", "cluster", "sugiyama"})
        EXPECT_THROW(make_algorithm(name)->check_model(m), LayoutError) << name;
    for (const char* name : {"cose", "spring"}) EXPECT_NO_THROW(make_algorithm(name)->check_model(m)) << name;
}
