#pragma once

#include <chisio/layout/cise.hpp>
#include <chisio/layout/cluster.hpp>
#include <chisio/layout/cose.hpp>
#include <chisio/layout/layout.hpp>
#include <chisio/layout/sugiyama.hpp>
#include <chisio/numbers.hpp>

#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace chisio::layout {

class UnknownAlgorithm : public std::runtime_error {
public:
    explicit UnknownAlgorithm(const std::string& name)
        : std::runtime_error("unknown algorithm '" + name + "'; valid names: " + valid_names()) {}

    static std::string valid_names();
};

/// Canonical algorithm names, in listing order.
inline const std::vector<std::string>& algorithm_names() {
    static const std::vector<std::string> names{"cose", "spring", "cise", "circular", "cluster", "sugiyama"};
    return names;
}

inline std::vector<std::string> algorithm_aliases(std::string_view name) {
    if (name == "sugiyama") return {"hierarchical"};
    return {};
}

inline std::string UnknownAlgorithm::valid_names() {
    std::string s;
    for (const auto& n : algorithm_names()) {
        if (!s.empty()) s += ", ";
        s += n;
        for (const auto& a : algorithm_aliases(n)) s += " (alias " + a + ")";
    }
    return s;
}

inline std::unique_ptr<LayoutAlgorithm> make_algorithm(std::string_view name) {
    if (name == "cose") return std::make_unique<CoseLayout>();
    if (name == "spring") return std::make_unique<SpringLayout>();
    if (name == "cise") return std::make_unique<CiseLayout>();
    if (name == "circular") return std::make_unique<CircularLayout>();
    if (name == "cluster") return std::make_unique<ClusterLayout>();
    if (name == "sugiyama" || name == "hierarchical") return std::make_unique<SugiyamaLayout>();
    throw UnknownAlgorithm(std::string(name));
}

/// Sets one named option. Common keys fill the LayoutOptions fields, other
/// keys listed by the algorithm go to the extra bag; anything else throws.
inline void set_option(LayoutOptions& opts, const LayoutAlgorithm& algo, const std::string& key, double value) {
    bool known = false;
    for (const auto& spec : algo.options()) known = known || spec.key == key;
    if (!known) {
        std::string valid;
        for (const auto& spec : algo.options()) valid += (valid.empty() ? "" : ", ") + spec.key;
        throw LayoutError("option '" + key + "' is not supported by " + algo.name() + " (valid: " + valid + ")");
    }
    if (!std::isfinite(value)) throw LayoutError("option '" + key + "' must be finite");
    if (key == "idealEdgeLength") opts.ideal_edge_length = value;
    else if (key == "gravity") opts.gravity_strength = value;
    else if (key == "coolingInitial") opts.cooling_initial = value;
    else if (key == "convergenceEps") opts.convergence_eps = value;
    else if (key == "compoundMargin") opts.compound_margin = value;
    else if (key == "iterations") {
        if (value != std::floor(value) || value < 1.0 || value > 1e7)
            throw LayoutError("option 'iterations' must be a whole number in [1, 1e7]");
        opts.iterations = static_cast<int>(value);
    } else {
        opts.extra[key] = value;
    }
}

/// Splits "key=value" with a numeric value.
inline std::pair<std::string, double> parse_assignment(std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw LayoutError("option '" + std::string(assignment) + "' is not of the form key=value");
    std::string key(assignment.substr(0, eq));
    const auto value = parse_number(assignment.substr(eq + 1));
    if (!value) throw LayoutError("option '" + key + "' needs a finite number");
    return {std::move(key), *value};
}

inline void set_option(LayoutOptions& opts, const LayoutAlgorithm& algo, std::string_view assignment) {
    const auto [key, value] = parse_assignment(assignment);
    set_option(opts, algo, key, value);
}

}  // namespace chisio::layout
