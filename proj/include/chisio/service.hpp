#pragma once

// Load -> layout -> save/render pipeline shared by the CLI and the HTTP
// service, and the HTTP handlers themselves. Handlers are stateless: every
// request carries its whole document.

#include <chisio/graphml.hpp>
#include <chisio/layout/registry.hpp>
#include <chisio/svg.hpp>

#include <httplib.h>
#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chisio {

/// Problem with the caller's input (bad document, option, algorithm name).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what, std::optional<long> line = std::nullopt,
                        std::vector<Violation> violations = {})
        : std::runtime_error(what), line_(line), violations_(std::move(violations)) {}

    std::optional<long> line() const { return line_; }
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::optional<long> line_;
    std::vector<Violation> violations_;
};

struct LayoutRequest {
    std::string graphml;
    std::string algorithm;
    /// key -> value, as accepted by layout::set_option.
    std::map<std::string, double> options;
    std::uint64_t seed = 1;
};

struct LayoutResult {
    std::string graphml;
    layout::LayoutReport report;
    GraphModel model;
};

/// Parses a document, turning every failure into an InputError carrying the
/// line (for XML errors) or the full violation list (for invalid models).
inline GraphModel load_document(std::string_view text) {
    GraphModel m;
    try {
        m = parse_graphml(text, {.validate = false});
    } catch (const GraphmlError& e) {
        throw InputError(e.what(), e.line());
    }
    if (auto v = m.validate(); !v.empty()) {
        const std::string what = "invalid model: " + std::to_string(v.size()) + " violation(s)";
        throw InputError(what, std::nullopt, std::move(v));
    }
    return m;
}

inline layout::LayoutOptions make_options(const layout::LayoutAlgorithm& algo,
                                          const std::map<std::string, double>& options, std::uint64_t seed) {
    layout::LayoutOptions opts;
    opts.seed = seed;
    try {
        for (const auto& [k, v] : options) layout::set_option(opts, algo, k, v);
        opts.check();
    } catch (const layout::LayoutError& e) {
        throw InputError(e.what());
    }
    return opts;
}

/// Throws layout::UnknownAlgorithm for a bad name and InputError for bad
/// documents, options, or models the algorithm does not accept.
inline LayoutResult run_pipeline(const LayoutRequest& req) {
    auto algo = layout::make_algorithm(req.algorithm);
    const auto opts = make_options(*algo, req.options, req.seed);
    LayoutResult out;
    out.model = load_document(req.graphml);
    try {
        algo->check_model(out.model);
    } catch (const layout::LayoutError& e) {
        throw InputError(e.what());
    }
    out.report = layout::run_layout(out.model, *algo, opts);
    out.graphml = write_graphml(out.model);
    return out;
}

namespace service {

using nlohmann::json;

inline json violations_json(const std::vector<Violation>& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back({{"object", x.object}, {"rule", x.rule}});
    return a;
}

inline json error_json(const std::string& message, std::optional<long> line = std::nullopt,
                       const std::vector<Violation>& v = {}) {
    json j{{"error", message}, {"violations", violations_json(v)}};
    j["line"] = line ? json(*line) : json(nullptr);
    return j;
}

inline json algorithms_json() {
    json list = json::array();
    for (const auto& name : layout::algorithm_names()) {
        const auto algo = layout::make_algorithm(name);
        json opts = json::array();
        for (const auto& o : algo->options())
            opts.push_back({{"key", o.key}, {"default", o.default_value}, {"description", o.description}});
        list.push_back({{"name", name}, {"aliases", layout::algorithm_aliases(name)}, {"options", opts}});
    }
    return {{"algorithms", list}};
}

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
    std::map<std::string, std::string> headers;
};

inline Response json_response(int status, const json& j) { return {status, j.dump(), "application/json", {}}; }

inline json parse_body(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw InputError("request body must be a JSON object");
    return j;
}

inline std::string string_field(const json& j, const char* key, bool required = true) {
    if (!j.contains(key)) {
        if (required) throw InputError(std::string("missing field '") + key + "'");
        return {};
    }
    if (!j[key].is_string()) throw InputError(std::string("field '") + key + "' must be a string");
    return j[key].get<std::string>();
}

inline LayoutRequest layout_request_from(const json& j) {
    LayoutRequest req;
    req.graphml = string_field(j, "graphml");
    req.algorithm = string_field(j, "algorithm");
    if (j.contains("options") && !j["options"].is_null()) {
        if (!j["options"].is_object()) throw InputError("field 'options' must be an object");
        for (const auto& [k, v] : j["options"].items()) {
            if (v.is_number()) req.options[k] = v.get<double>();
            else if (v.is_string() && parse_number(v.get<std::string>())) req.options[k] = *parse_number(v.get<std::string>());
            else throw InputError("option '" + k + "' must be a number");
        }
    }
    if (j.contains("seed") && !j["seed"].is_null()) {
        if (!j["seed"].is_number_unsigned()) throw InputError("field 'seed' must be a non-negative integer");
        req.seed = j["seed"].get<std::uint64_t>();
    }
    return req;
}

/// Wraps a handler body: InputError -> 400, UnknownAlgorithm -> 422,
/// anything else -> 500.
template <class F>
Response guarded(F&& f) {
    try {
        return f();
    } catch (const layout::UnknownAlgorithm& e) {
        return json_response(422, error_json(e.what()));
    } catch (const InputError& e) {
        return json_response(400, error_json(e.what(), e.line(), e.violations()));
    } catch (const std::exception& e) {
        return json_response(500, error_json(std::string("internal error: ") + e.what()));
    }
}

inline Response handle_algorithms() { return json_response(200, algorithms_json()); }

inline Response handle_layout(const std::string& body) {
    return guarded([&] {
        const LayoutResult r = run_pipeline(layout_request_from(parse_body(body)));
        json report{{"iterations_used", r.report.iterations_used},
                    {"final_total_displacement", r.report.final_total_displacement}};
        Response resp = json_response(200, {{"graphml", r.graphml}, {"report", report}});
        resp.headers["X-Layout-Wall-Time"] = exact_number(r.report.wall_time_ms);
        return resp;
    });
}

inline Response handle_render(const std::string& body) {
    return guarded([&] {
        const json j = parse_body(body);
        const GraphModel m = load_document(string_field(j, "graphml"));
        SvgOptions opts;
        if (j.contains("scale")) {
            if (!j["scale"].is_number() || !(j["scale"].get<double>() > 0.0))
                throw InputError("field 'scale' must be a positive number");
            opts.scale = j["scale"].get<double>();
        }
        if (j.contains("highlightColor")) {
            const auto c = Rgb::parse(string_field(j, "highlightColor"));
            if (!c) throw InputError("field 'highlightColor' must be #rrggbb");
            opts.highlight_color = *c;
        }
        return Response{200, render_svg(m, opts), "image/svg+xml", {}};
    });
}

inline Response handle_validate(const std::string& body) {
    return guarded([&] {
        const json j = parse_body(body);
        load_document(string_field(j, "graphml"));
        return json_response(200, {{"valid", true}, {"violations", json::array()}});
    });
}

inline void install(httplib::Server& server) {
    auto send = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        for (const auto& [k, v] : r.headers) res.set_header(k, v);
        res.set_content(r.body, r.content_type);
    };
    // The browser editor is served from its own origin.
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Expose-Headers", "X-Layout-Wall-Time"}});
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.status = 204;
    });
    server.Get("/algorithms", [send](const httplib::Request&, httplib::Response& res) { send(res, handle_algorithms()); });
    server.Post("/layout", [send](const httplib::Request& req, httplib::Response& res) {
        send(res, handle_layout(req.body));
    });
    server.Post("/render", [send](const httplib::Request& req, httplib::Response& res) {
        send(res, handle_render(req.body));
    });
    server.Post("/validate", [send](const httplib::Request& req, httplib::Response& res) {
        send(res, handle_validate(req.body));
    });
}

}  // namespace service
}  // namespace chisio
