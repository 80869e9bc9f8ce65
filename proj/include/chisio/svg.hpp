#pragma once

// SVG export. One element per object: leaves as rect/ellipse/polygon with
// class "node", compounds as rect with class "compound", edges as line
// (path for self-loops) with class "edge". Non-empty labels are extra text
// elements: "node-label" centred on a leaf, "compound-label" centred in the
// compound's bottom label strip. Ancestors are drawn before their
// descendants, and all edges come last.

#include <chisio/geometry.hpp>
#include <chisio/model.hpp>
#include <chisio/numbers.hpp>
#include <chisio/xml.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace chisio {

struct SvgOptions {
    double scale = 1.0;
    Rgb highlight_color{255, 0, 0};
};

inline constexpr double kSvgPadding = 20.0;
inline constexpr double kArrowSize = 8.0;

namespace svg_detail {

inline std::string n(double v) { return short_number(v); }

/// Where the ray from the center of `r` along unit `dir` leaves the shape.
inline Point boundary_point(const Rect& r, NodeShape shape, Point dir) {
    const Point c = r.center();
    if (shape == NodeShape::Ellipse && r.w > 0.0 && r.h > 0.0) {
        const double a = r.w / 2.0;
        const double b = r.h / 2.0;
        const double t = 1.0 / std::sqrt((dir.x * dir.x) / (a * a) + (dir.y * dir.y) / (b * b));
        return c + dir * t;
    }
    return c + dir * clip_extent(r, dir);
}

inline std::string stroke_attrs(Rgb color, double width, LineStyle ls, double scale) {
    std::string s = " stroke=\"" + color.hex() + "\" stroke-width=\"" + n(width * scale) + "\"";
    if (ls == LineStyle::Dashed) s += " stroke-dasharray=\"" + n(4.0 * scale) + " " + n(2.0 * scale) + "\"";
    return s;
}

}  // namespace svg_detail

inline std::string render_svg(const GraphModel& model, const SvgOptions& opts = {}) {
    using svg_detail::n;
    const double s = opts.scale;
    const auto& hl = model.highlighted();

    // Bounding box of all nodes, in output units.
    std::optional<Rect> box;
    for (const auto& [id, node] : model.nodes()) {
        const Rect r{node.bounds.x * s, node.bounds.y * s, node.bounds.w * s, node.bounds.h * s};
        box = box ? unite(*box, r) : r;
    }
    const Rect content = box.value_or(Rect{0.0, 0.0, 0.0, 0.0});
    const Rect view{content.x - kSvgPadding, content.y - kSvgPadding, content.w + 2.0 * kSvgPadding,
                    content.h + 2.0 * kSvgPadding};

    std::set<Rgb, bool (*)(Rgb, Rgb)> edge_colors([](Rgb a, Rgb b) {
        return std::tie(a.r, a.g, a.b) < std::tie(b.r, b.g, b.b);
    });
    for (const auto& [id, e] : model.edges()) {
        if (e.style.arrow == Arrow::None) continue;
        edge_colors.insert(hl.count(id.value) ? opts.highlight_color : e.style.border_color);
    }

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + n(view.x) + " " + n(view.y) +
           " " + n(view.w) + " " + n(view.h) + "\" width=\"" + n(view.w) + "\" height=\"" + n(view.h) + "\">\n";
    if (!edge_colors.empty()) {
        out += "  <defs>\n";
        const std::string a = n(kArrowSize);
        const std::string h = n(kArrowSize / 2.0);
        for (Rgb c : edge_colors) {
            const std::string id = c.hex().substr(1);
            out += "    <marker id=\"arrow-end-" + id + "\" markerUnits=\"userSpaceOnUse\" markerWidth=\"" + a +
                   "\" markerHeight=\"" + a + "\" viewBox=\"0 0 " + a + " " + a + "\" refX=\"" + a + "\" refY=\"" + h +
                   "\" orient=\"auto\"><path d=\"M0,0 L" + a + "," + h + " L0," + a + " z\" fill=\"" + c.hex() +
                   "\"/></marker>\n";
            out += "    <marker id=\"arrow-start-" + id + "\" markerUnits=\"userSpaceOnUse\" markerWidth=\"" + a +
                   "\" markerHeight=\"" + a + "\" viewBox=\"0 0 " + a + " " + a + "\" refX=\"0\" refY=\"" + h +
                   "\" orient=\"auto\"><path d=\"M" + a + ",0 L0," + h + " L" + a + "," + a + " z\" fill=\"" +
                   c.hex() + "\"/></marker>\n";
        }
        out += "  </defs>\n";
    }
    out += "  <g class=\"canvas\">\n";

    // Shallow before deep, then by id.
    std::vector<std::pair<int, NodeId>> order;
    for (const auto& [id, node] : model.nodes()) order.emplace_back(model.depth(id), id);
    std::sort(order.begin(), order.end());

    for (const auto& [depth, id] : order) {
        const Node& node = model.node(id);
        const Rect r{node.bounds.x * s, node.bounds.y * s, node.bounds.w * s, node.bounds.h * s};
        const bool lit = hl.count(id.value) != 0;
        const Rgb stroke = lit ? opts.highlight_color : node.style.border_color;
        const double width = lit ? node.style.width + 2.0 : node.style.width;
        const std::string paint = " fill=\"" + node.style.fill_color.hex() + "\"" +
                                  svg_detail::stroke_attrs(stroke, width, node.style.line_style, s);
        const std::string ident = " id=\"n" + std::to_string(id.value) + "\"";
        if (node.child) {
            out += "    <rect class=\"compound\"" + ident + " x=\"" + n(r.x) + "\" y=\"" + n(r.y) + "\" width=\"" +
                   n(r.w) + "\" height=\"" + n(r.h) + "\"" + paint + "/>\n";
            if (node.label.empty()) continue;
            const double strip = model.graph(*node.child).label_strip * s;
            out += "    <text class=\"compound-label\" x=\"" + n(r.x + r.w / 2.0) + "\" y=\"" +
                   n(r.bottom() - strip / 2.0) + "\" font-size=\"" + n(10.0 * s) +
                   "\" text-anchor=\"middle\" dominant-baseline=\"central\">" + xml::escape(node.label) + "</text>\n";
            continue;
        }
        switch (node.shape) {
            case NodeShape::Rectangle:
                out += "    <rect class=\"node\"" + ident + " x=\"" + n(r.x) + "\" y=\"" + n(r.y) + "\" width=\"" +
                       n(r.w) + "\" height=\"" + n(r.h) + "\"" + paint + "/>\n";
                break;
            case NodeShape::Ellipse:
                out += "    <ellipse class=\"node\"" + ident + " cx=\"" + n(r.x + r.w / 2.0) + "\" cy=\"" +
                       n(r.y + r.h / 2.0) + "\" rx=\"" + n(r.w / 2.0) + "\" ry=\"" + n(r.h / 2.0) + "\"" + paint +
                       "/>\n";
                break;
            case NodeShape::Triangle:
                out += "    <polygon class=\"node\"" + ident + " points=\"" + n(r.x + r.w / 2.0) + "," + n(r.y) +
                       " " + n(r.right()) + "," + n(r.bottom()) + " " + n(r.x) + "," + n(r.bottom()) + "\"" + paint +
                       "/>\n";
                break;
        }
        if (!node.label.empty())
            out += "    <text class=\"node-label\" x=\"" + n(r.x + r.w / 2.0) + "\" y=\"" + n(r.y + r.h / 2.0) +
                   "\" font-size=\"" + n(10.0 * s) + "\" text-anchor=\"middle\" dominant-baseline=\"central\">" +
                   xml::escape(node.label) + "</text>\n";
    }

    for (const auto& [id, e] : model.edges()) {
        const Node& a = model.node(e.source);
        const Node& b = model.node(e.target);
        const Rect ra{a.bounds.x * s, a.bounds.y * s, a.bounds.w * s, a.bounds.h * s};
        const Rect rb{b.bounds.x * s, b.bounds.y * s, b.bounds.w * s, b.bounds.h * s};
        const bool lit = hl.count(id.value) != 0;
        const Rgb stroke = lit ? opts.highlight_color : e.style.border_color;
        const double width = lit ? e.style.width + 2.0 : e.style.width;
        std::string attrs = " fill=\"none\"" + svg_detail::stroke_attrs(stroke, width, e.style.line_style, s);
        const std::string mid = stroke.hex().substr(1);
        if (e.style.arrow == Arrow::Target || e.style.arrow == Arrow::Both)
            attrs += " marker-end=\"url(#arrow-end-" + mid + ")\"";
        if (e.style.arrow == Arrow::Source || e.style.arrow == Arrow::Both)
            attrs += " marker-start=\"url(#arrow-start-" + mid + ")\"";
        const std::string ident = " id=\"e" + std::to_string(id.value) + "\"";

        const Point ca = ra.center();
        const Point cb = rb.center();
        const Point d = cb - ca;
        if (e.source == e.target || d.norm() < 1e-9) {
            // Loop leaving the top edge and re-entering the right edge.
            const Point p{ra.x + 0.75 * ra.w, ra.y};
            const Point q{ra.right(), ra.y + 0.25 * ra.h};
            const double k = 20.0 * s;
            out += "    <path class=\"edge\"" + ident + " d=\"M" + n(p.x) + "," + n(p.y) + " C" + n(p.x) + "," +
                   n(p.y - k) + " " + n(q.x + k) + "," + n(q.y) + " " + n(q.x) + "," + n(q.y) + "\"" + attrs + "/>\n";
            continue;
        }
        const Point u = d / d.norm();
        Point p = svg_detail::boundary_point(ra, a.shape, u);
        Point q = svg_detail::boundary_point(rb, b.shape, -u);
        if (dot(q - p, u) <= 0.0) {
            // Overlapping shapes: fall back to the centre line.
            p = ca;
            q = cb;
        }
        out += "    <line class=\"edge\"" + ident + " x1=\"" + n(p.x) + "\" y1=\"" + n(p.y) + "\" x2=\"" + n(q.x) +
               "\" y2=\"" + n(q.y) + "\"" + attrs + "/>\n";
    }
    out += "  </g>\n</svg>\n";
    return out;
}

}  // namespace chisio
