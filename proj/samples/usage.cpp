// Builds a small compound graph in code, lays it out with CoSE and writes
// GraphML and SVG next to the binary.

#include <chisio/chisio.hpp>

#include <fstream>
#include <iostream>

int main() {
    using namespace chisio;

    GraphModel m;
    NodeSpec spec;
    spec.label = "a";
    const NodeId a = m.add_node(m.root(), spec);
    spec.label = "b";
    const NodeId b = m.add_node(m.root(), spec);
    spec.label = "c";
    const NodeId c = m.add_node(m.root(), spec);
    NodeSpec group;
    group.label = "group";
    const NodeId g = m.make_compound(m.root(), {a, b}, group);
    m.add_edge(a, b);
    m.add_edge(b, c);
    m.add_edge(g, c);

    layout::CoseLayout cose;
    layout::LayoutOptions opts;
    opts.seed = 7;
    const auto report = layout::run_layout(m, cose, opts);
    std::cout << "cose: " << report.iterations_used << " iterations\n";

    std::ofstream("usage.graphml") << write_graphml(m);
    std::ofstream("usage.svg") << render_svg(m);
}
