#pragma once

// GraphML reading and writing. The key vocabulary is documented in
// docs/format.md.

#include <chisio/model.hpp>
#include <chisio/numbers.hpp>
#include <chisio/xml.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace chisio {

class GraphmlError : public std::runtime_error {
public:
    explicit GraphmlError(const std::string& what, std::optional<long> line = std::nullopt)
        : std::runtime_error(line ? "line " + std::to_string(*line) + ": " + what : what), line_(line) {}

    std::optional<long> line() const { return line_; }

private:
    std::optional<long> line_;
};

enum class KeyDomain { Graph, Node, Edge, All };
enum class KeyType { String, Double, Int };

struct GraphmlKey {
    std::string name;
    KeyDomain domain = KeyDomain::Node;
    KeyType type = KeyType::String;
};

/// The fixed vocabulary, in declaration order.
inline const std::vector<GraphmlKey>& graphml_keys() {
    static const std::vector<GraphmlKey> keys{
        {"margin", KeyDomain::Graph, KeyType::Double},
        {"labelStrip", KeyDomain::Graph, KeyType::Double},
        {"x", KeyDomain::Node, KeyType::Double},
        {"y", KeyDomain::Node, KeyType::Double},
        {"width", KeyDomain::Node, KeyType::Double},
        {"height", KeyDomain::Node, KeyType::Double},
        {"shape", KeyDomain::Node, KeyType::String},
        {"text", KeyDomain::Node, KeyType::String},
        {"color", KeyDomain::Node, KeyType::String},
        {"borderColor", KeyDomain::Node, KeyType::String},
        {"borderWidth", KeyDomain::Node, KeyType::Double},
        {"lineStyle", KeyDomain::Node, KeyType::String},
        {"clusterID", KeyDomain::Node, KeyType::String},
        {"text", KeyDomain::Edge, KeyType::String},
        {"color", KeyDomain::Edge, KeyType::String},
        {"style", KeyDomain::Edge, KeyType::String},
        {"arrow", KeyDomain::Edge, KeyType::String},
        {"width", KeyDomain::Edge, KeyType::Double},
    };
    return keys;
}

namespace graphml_detail {

inline const char* domain_name(KeyDomain d) {
    switch (d) {
        case KeyDomain::Graph: return "graph";
        case KeyDomain::Node: return "node";
        case KeyDomain::Edge: return "edge";
        case KeyDomain::All: return "all";
    }
    return "all";
}

inline const char* type_name(KeyType t) {
    switch (t) {
        case KeyType::String: return "string";
        case KeyType::Double: return "double";
        case KeyType::Int: return "int";
    }
    return "string";
}

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string shape_name(NodeShape s) {
    switch (s) {
        case NodeShape::Rectangle: return "rectangle";
        case NodeShape::Ellipse: return "ellipse";
        case NodeShape::Triangle: return "triangle";
    }
    return "rectangle";
}

inline std::string line_style_name(LineStyle s) { return s == LineStyle::Dashed ? "dashed" : "solid"; }

inline std::string arrow_name(Arrow a) {
    switch (a) {
        case Arrow::None: return "none";
        case Arrow::Source: return "source";
        case Arrow::Target: return "target";
        case Arrow::Both: return "both";
    }
    return "none";
}

struct KeyDef {
    std::string name;
    KeyDomain domain = KeyDomain::All;
    std::optional<std::string> default_value;
};

struct PendingEdge {
    std::string id;
    std::string source;
    std::string target;
    bool directed = true;
    const xml::Element* element = nullptr;
};

/// Canonical ids ("n12", "e3", "g1") keep their number when unambiguous.
inline std::optional<ObjectId> canonical_number(std::string_view id, char kind) {
    if (id.size() < 2 || id[0] != kind || id[1] == '0') return std::nullopt;
    ObjectId v = 0;
    for (std::size_t i = 1; i < id.size(); ++i) {
        if (id[i] < '0' || id[i] > '9') return std::nullopt;
        if (v > (ObjectId{1} << 52)) return std::nullopt;
        v = v * 10 + static_cast<ObjectId>(id[i] - '0');
    }
    return v;
}

class Reader {
public:
    GraphModel read(std::string_view text, bool validate) {
        std::unique_ptr<xml::Element> doc;
        try {
            doc = xml::parse(text);
        } catch (const xml::ParseError& e) {
            throw GraphmlError(std::string("malformed XML: ") + e.what(), e.line());
        }
        if (xml::local_name(doc->name) != "graphml")
            throw GraphmlError("root element must be <graphml>, found <" + doc->name + ">", doc->line);

        const xml::Element* top = nullptr;
        for (const auto& c : doc->children) {
            const auto n = xml::local_name(c->name);
            if (n == "key") read_key(*c);
            if (n == "graph") {
                if (top) throw GraphmlError("more than one top-level <graph>", c->line);
                top = c.get();
            }
        }

        ModelData& d = model_.unchecked();
        d = ModelData{};
        if (top) claim(*top);
        next_ = max_claim_ + 1;

        const GraphId root = graph_id(top);
        d.root = root;
        d.graphs[root] = Graph{.id = root};
        if (top) read_graph(*top, root);
        resolve_edges();
        d.next_id = next_;
        model_.refresh_all_bounds();

        if (auto v = validate ? model_.validate() : std::vector<Violation>{}; !v.empty())
            throw GraphmlError("invalid model: object " + std::to_string(v.front().object) + ": " + v.front().rule);
        return std::move(model_);
    }

private:
    GraphModel model_;
    std::map<std::string, KeyDef> keys_;
    std::set<ObjectId> claimed_;
    std::set<const xml::Element*> canonical_;
    ObjectId max_claim_ = 0;
    ObjectId next_ = 1;
    std::map<std::string, NodeId> node_ids_;
    std::vector<PendingEdge> edges_;

    void read_key(const xml::Element& k) {
        const auto id = k.attribute("id");
        if (!id) throw GraphmlError("<key> without id", k.line);
        KeyDef def;
        def.name = k.attribute("attr.name").value_or(*id);
        const std::string dom = lower(k.attribute("for").value_or("all"));
        if (dom == "node") def.domain = KeyDomain::Node;
        else if (dom == "edge") def.domain = KeyDomain::Edge;
        else if (dom == "graph") def.domain = KeyDomain::Graph;
        else if (dom == "all") def.domain = KeyDomain::All;
        else return;  // ports, hyperedges, graphml: not modelled
        for (const auto& c : k.children)
            if (xml::local_name(c->name) == "default") def.default_value = c->text;
        keys_[*id] = std::move(def);
    }

    void take_claim(const xml::Element& e, char kind) {
        const auto id = e.attribute("id");
        if (!id) return;
        const auto v = canonical_number(*id, kind);
        if (!v || claimed_.count(*v)) return;
        claimed_.insert(*v);
        canonical_.insert(&e);
        max_claim_ = std::max(max_claim_, *v);
    }

    void claim(const xml::Element& g) {
        take_claim(g, 'g');
        for (const auto& c : g.children) {
            const auto n = xml::local_name(c->name);
            if (n == "node") {
                take_claim(*c, 'n');
                for (const auto& cc : c->children)
                    if (xml::local_name(cc->name) == "graph") claim(*cc);
            } else if (n == "edge") {
                take_claim(*c, 'e');
            }
        }
    }

    ObjectId object_id(const xml::Element* e, char kind) {
        if (e && canonical_.count(e)) return *canonical_number(*e->attribute("id"), kind);
        return next_++;
    }

    GraphId graph_id(const xml::Element* e) { return GraphId{object_id(e, 'g')}; }

    /// Data values for an element: declared defaults first, then <data>.
    std::vector<std::pair<std::string, std::string>> values(const xml::Element& e, KeyDomain domain) const {
        std::map<std::string, std::string> out;
        for (const auto& [id, def] : keys_)
            if (def.default_value && (def.domain == domain || def.domain == KeyDomain::All))
                out[def.name] = *def.default_value;
        for (const auto& c : e.children) {
            if (xml::local_name(c->name) != "data") continue;
            const auto key = c->attribute("key");
            if (!key) throw GraphmlError("<data> without key", c->line);
            auto it = keys_.find(*key);
            out[it == keys_.end() ? *key : it->second.name] = c->text;
        }
        return {out.begin(), out.end()};
    }

    static double number(const std::string& v, const std::string& key, long line) {
        const auto x = parse_number(v);
        if (!x) throw GraphmlError("key '" + key + "': '" + v + "' is not a finite number", line);
        return *x;
    }

    static Rgb color(const std::string& v, const std::string& key, long line) {
        const auto c = Rgb::parse(trim(v));
        if (!c) throw GraphmlError("key '" + key + "': '" + v + "' is not a #rrggbb color", line);
        return *c;
    }

    static LineStyle line_style(const std::string& v, const std::string& key, long line) {
        const std::string s = lower(trim(v));
        if (s == "solid") return LineStyle::Solid;
        if (s == "dashed") return LineStyle::Dashed;
        throw GraphmlError("key '" + key + "': unknown line style '" + v + "'", line);
    }

    void read_graph(const xml::Element& ge, GraphId gid) {
        ModelData& d = model_.unchecked();
        const bool undirected_default = lower(ge.attribute("edgedefault").value_or("directed")) == "undirected";
        for (const auto& [k, v] : values(ge, KeyDomain::Graph)) {
            Graph& g = d.graphs.at(gid);
            if (k == "margin") g.margin = number(v, k, ge.line);
            else if (k == "labelStrip") g.label_strip = number(v, k, ge.line);
            else g.attributes[k] = v;
        }
        for (const auto& c : ge.children) {
            const auto n = xml::local_name(c->name);
            if (n == "node") read_node(*c, gid);
            else if (n == "edge") read_edge(*c, undirected_default);
        }
    }

    void read_node(const xml::Element& ne, GraphId owner) {
        ModelData& d = model_.unchecked();
        const auto sid = ne.attribute("id");
        if (!sid) throw GraphmlError("<node> without id", ne.line);
        if (node_ids_.count(*sid)) throw GraphmlError("duplicate node id '" + *sid + "'", ne.line);
        const NodeId id{object_id(&ne, 'n')};
        node_ids_[*sid] = id;

        Node node;
        node.id = id;
        node.owner = owner;
        for (const auto& [k, v] : values(ne, KeyDomain::Node)) {
            if (k == "x") node.bounds.x = number(v, k, ne.line);
            else if (k == "y") node.bounds.y = number(v, k, ne.line);
            else if (k == "width") node.bounds.w = number(v, k, ne.line);
            else if (k == "height") node.bounds.h = number(v, k, ne.line);
            else if (k == "text") node.label = v;
            else if (k == "color") node.style.fill_color = color(v, k, ne.line);
            else if (k == "borderColor") node.style.border_color = color(v, k, ne.line);
            else if (k == "borderWidth") node.style.width = number(v, k, ne.line);
            else if (k == "lineStyle") node.style.line_style = line_style(v, k, ne.line);
            else if (k == "clusterID") node.cluster = v;
            else if (k == "shape") {
                const std::string s = lower(trim(v));
                if (s == "rectangle" || s == "rect") node.shape = NodeShape::Rectangle;
                else if (s == "ellipse") node.shape = NodeShape::Ellipse;
                else if (s == "triangle") node.shape = NodeShape::Triangle;
                else throw GraphmlError("key 'shape': unknown shape '" + v + "'", ne.line);
            } else {
                node.attributes[k] = v;
            }
        }
        if (node.bounds.w < 0.0 || node.bounds.h < 0.0)
            throw GraphmlError("node '" + *sid + "' has negative size", ne.line);
        if (!(node.style.width > 0.0)) throw GraphmlError("node '" + *sid + "' has non-positive borderWidth", ne.line);

        const xml::Element* nested = nullptr;
        for (const auto& c : ne.children) {
            if (xml::local_name(c->name) != "graph") continue;
            if (nested) throw GraphmlError("node '" + *sid + "' contains more than one <graph>", c->line);
            nested = c.get();
        }
        d.graphs.at(owner).nodes.insert(id);
        if (nested) {
            const GraphId child = graph_id(nested);
            node.child = child;
            d.graphs[child] = Graph{.id = child, .parent = id};
        }
        d.nodes[id] = std::move(node);
        if (nested) read_graph(*nested, *d.nodes[id].child);
    }

    void read_edge(const xml::Element& ee, bool undirected_default) {
        PendingEdge p;
        p.id = ee.attribute("id").value_or("");
        const auto s = ee.attribute("source");
        const auto t = ee.attribute("target");
        if (!s || !t) throw GraphmlError("<edge> needs source and target", ee.line);
        p.source = *s;
        p.target = *t;
        p.directed = !undirected_default;
        if (const auto dir = ee.attribute("directed")) {
            const std::string v = lower(trim(*dir));
            if (v == "true") p.directed = true;
            else if (v == "false") p.directed = false;
            else throw GraphmlError("edge attribute directed must be true or false", ee.line);
        }
        p.element = &ee;
        edges_.push_back(std::move(p));
    }

    void resolve_edges() {
        ModelData& d = model_.unchecked();
        std::set<std::string> seen;
        for (const PendingEdge& p : edges_) {
            const long line = p.element->line;
            if (!p.id.empty() && !seen.insert(p.id).second) throw GraphmlError("duplicate edge id '" + p.id + "'", line);
            auto s = node_ids_.find(p.source);
            if (s == node_ids_.end()) throw GraphmlError("edge source '" + p.source + "' is not a declared node", line);
            auto t = node_ids_.find(p.target);
            if (t == node_ids_.end()) throw GraphmlError("edge target '" + p.target + "' is not a declared node", line);
            Edge e;
            e.id = EdgeId{object_id(p.element, 'e')};
            e.source = s->second;
            e.target = t->second;
            e.directed = p.directed;
            for (const auto& [k, v] : values(*p.element, KeyDomain::Edge)) {
                if (k == "text") e.label = v;
                else if (k == "color") e.style.border_color = color(v, k, line);
                else if (k == "style") e.style.line_style = line_style(v, k, line);
                else if (k == "width") e.style.width = number(v, k, line);
                else if (k == "arrow") {
                    const std::string a = lower(trim(v));
                    if (a == "none") e.style.arrow = Arrow::None;
                    else if (a == "source") e.style.arrow = Arrow::Source;
                    else if (a == "target") e.style.arrow = Arrow::Target;
                    else if (a == "both") e.style.arrow = Arrow::Both;
                    else throw GraphmlError("key 'arrow': unknown arrow '" + v + "'", line);
                } else {
                    e.attributes[k] = v;
                }
            }
            if (!(e.style.width > 0.0)) throw GraphmlError("edge has non-positive width", line);
            d.edges[e.id] = std::move(e);
        }
    }
};

class Writer {
public:
    explicit Writer(const GraphModel& m) : m_(m) {}

    std::string write() {
        out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out_ += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
        for (const auto& k : graphml_keys()) declare(k.name, domain_name(k.domain), k.type);
        std::set<std::pair<std::string, std::string>> extra;  // (domain, name)
        for (const auto& [id, g] : m_.graphs())
            for (const auto& [k, v] : g.attributes) extra.insert({"graph", k});
        for (const auto& [id, n] : m_.nodes())
            for (const auto& [k, v] : n.attributes) extra.insert({"node", k});
        for (const auto& [id, e] : m_.edges())
            for (const auto& [k, v] : e.attributes) extra.insert({"edge", k});
        for (const auto& [dom, name] : extra) declare(name, dom.c_str(), KeyType::String, dom + "." + name);
        write_graph(m_.root(), 1, true);
        out_ += "</graphml>\n";
        return std::move(out_);
    }

private:
    const GraphModel& m_;
    std::string out_;

    void declare(const std::string& name, const char* domain, KeyType type, const std::string& id = {}) {
        out_ += "  <key id=\"" + xml::escape(id.empty() ? key_id(name, domain) : id) + "\" for=\"" + domain +
                "\" attr.name=\"" + xml::escape(name) + "\" attr.type=\"" + type_name(type) + "\"/>\n";
    }

    /// Node and edge share the names text/color/width; their key ids differ.
    static std::string key_id(const std::string& name, std::string_view domain) {
        if (domain == "edge") return "e_" + name;
        return name;
    }

    void indent(int level) { out_.append(static_cast<std::size_t>(2 * level), ' '); }

    void data(int level, const std::string& key, const std::string& value) {
        indent(level);
        out_ += "<data key=\"" + xml::escape(key) + "\">" + xml::escape(value) + "</data>\n";
    }

    void bag(int level, const AttributeBag& b, const char* domain) {
        for (const auto& [k, v] : b) data(level, std::string(domain) + "." + k, v);
    }

    void write_graph(GraphId gid, int level, bool root) {
        const Graph& g = m_.graph(gid);
        indent(level);
        out_ += "<graph id=\"g" + std::to_string(gid.value) + "\" edgedefault=\"directed\">\n";
        data(level + 1, "margin", exact_number(g.margin));
        data(level + 1, "labelStrip", exact_number(g.label_strip));
        bag(level + 1, g.attributes, "graph");
        for (NodeId nid : g.nodes) write_node(nid, level + 1);
        if (root)
            for (const auto& [eid, e] : m_.edges()) write_edge(e, level + 1);
        indent(level);
        out_ += "</graph>\n";
    }

    void write_node(NodeId nid, int level) {
        const Node& n = m_.node(nid);
        indent(level);
        out_ += "<node id=\"n" + std::to_string(nid.value) + "\">\n";
        data(level + 1, "x", exact_number(n.bounds.x));
        data(level + 1, "y", exact_number(n.bounds.y));
        data(level + 1, "width", exact_number(n.bounds.w));
        data(level + 1, "height", exact_number(n.bounds.h));
        data(level + 1, "shape", shape_name(n.shape));
        data(level + 1, "text", n.label);
        data(level + 1, "color", n.style.fill_color.hex());
        data(level + 1, "borderColor", n.style.border_color.hex());
        data(level + 1, "borderWidth", exact_number(n.style.width));
        data(level + 1, "lineStyle", line_style_name(n.style.line_style));
        if (n.cluster) data(level + 1, "clusterID", *n.cluster);
        bag(level + 1, n.attributes, "node");
        if (n.child) write_graph(*n.child, level + 1, false);
        indent(level);
        out_ += "</node>\n";
    }

    void write_edge(const Edge& e, int level) {
        indent(level);
        out_ += "<edge id=\"e" + std::to_string(e.id.value) + "\" source=\"n" + std::to_string(e.source.value) +
                "\" target=\"n" + std::to_string(e.target.value) + "\"";
        if (!e.directed) out_ += " directed=\"false\"";
        out_ += ">\n";
        data(level + 1, "e_text", e.label);
        data(level + 1, "e_color", e.style.border_color.hex());
        data(level + 1, "e_style", line_style_name(e.style.line_style));
        data(level + 1, "e_arrow", arrow_name(e.style.arrow));
        data(level + 1, "e_width", exact_number(e.style.width));
        bag(level + 1, e.attributes, "edge");
        indent(level);
        out_ += "</edge>\n";
    }
};

}  // namespace graphml_detail

struct GraphmlReadOptions {
    /// Reject documents whose model fails validate(). Turned off by callers
    /// that want the full violation list instead of the first violation.
    bool validate = true;
};

/// Reads a GraphML document. Nested <graph> elements inside a <node> make it
/// a compound; compound geometry is recomputed from the children (an empty
/// compound keeps its x/y as anchor). Throws GraphmlError.
inline GraphModel parse_graphml(std::string_view text, const GraphmlReadOptions& opts = {}) {
    return graphml_detail::Reader{}.read(text, opts.validate);
}

/// Canonical, byte-stable GraphML for a valid model.
inline std::string write_graphml(const GraphModel& model) { return graphml_detail::Writer{model}.write(); }

}  // namespace chisio
