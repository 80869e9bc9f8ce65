#pragma once

#include <chisio/layout/lstructure.hpp>
#include <chisio/model.hpp>
#include <chisio/rng.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace chisio::layout {

struct LayoutOptions {
    double ideal_edge_length = 50.0;
    int iterations = 1000;
    std::uint64_t seed = 1;
    double gravity_strength = 0.4;
    double cooling_initial = 1.0;
    double convergence_eps = 0.5;
    double compound_margin = 10.0;
    /// Algorithm-specific tunables, keyed by their option name.
    std::map<std::string, double> extra;

    double get(std::string_view key, double fallback) const {
        auto it = extra.find(std::string(key));
        return it == extra.end() ? fallback : it->second;
    }

    void check() const {
        auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
        if (!positive(ideal_edge_length)) throw LayoutError("idealEdgeLength must be positive");
        if (iterations <= 0) throw LayoutError("iterations must be positive");
        if (!(std::isfinite(gravity_strength) && gravity_strength >= 0.0))
            throw LayoutError("gravity must be non-negative");
        if (!positive(cooling_initial)) throw LayoutError("coolingInitial must be positive");
        if (!positive(convergence_eps)) throw LayoutError("convergenceEps must be positive");
        if (!(std::isfinite(compound_margin) && compound_margin >= 0.0))
            throw LayoutError("compoundMargin must be non-negative");
        for (const auto& [k, v] : extra)
            if (!std::isfinite(v)) throw LayoutError("option " + k + " must be finite");
    }
};

struct LayoutReport {
    int iterations_used = 0;
    double final_total_displacement = 0.0;
    double wall_time_ms = 0.0;
};

/// Snapshot handed to the per-iteration callback of iterative layouts.
/// `own` is each node's own displacement this iteration; `translation` is
/// what was actually applied (own plus every enclosing cart's own).
struct IterationTrace {
    int iteration = 0;
    const LStructure* structure = nullptr;
    std::span<const Point> own;
    std::span<const Point> translation;
};

struct LayoutContext {
    Rng rng;
    std::function<void(const IterationTrace&)> on_iteration;

    explicit LayoutContext(std::uint64_t seed = 1) : rng(seed) {}
};

struct OptionSpec {
    std::string key;
    double default_value = 0.0;
    std::string description;
};

/// Extension contract for layout algorithms. An algorithm may only change
/// l-structure geometry, never its topology. The driver builds the
/// l-structure, calls `initialize` then `run`, and transfers geometry back.
class LayoutAlgorithm {
public:
    virtual ~LayoutAlgorithm() = default;

    virtual std::string name() const = 0;
    virtual std::vector<OptionSpec> options() const = 0;

    /// Rejects models the algorithm cannot handle (throws LayoutError).
    virtual void check_model(const GraphModel&) const {}

    virtual void initialize(LStructure&, const LayoutOptions&, LayoutContext&) {}
    virtual LayoutReport run(LStructure& l, const LayoutOptions& opts, LayoutContext& ctx) = 0;
};

inline std::vector<OptionSpec> common_options() {
    return {
        {"idealEdgeLength", 50.0, "target spring rest length (px)"},
        {"iterations", 1000.0, "iteration cap"},
        {"gravity", 0.4, "gravity strength"},
        {"coolingInitial", 1.0, "initial cooling factor"},
        {"convergenceEps", 0.5, "stop when mean displacement per node falls below this (px)"},
    };
}

/// build -> initialize -> run -> transfer -> destroy.
inline LayoutReport run_layout(GraphModel& model, LayoutAlgorithm& algorithm, const LayoutOptions& opts,
                               std::function<void(const IterationTrace&)> on_iteration = {}) {
    const auto start = std::chrono::steady_clock::now();
    opts.check();
    algorithm.check_model(model);
    LayoutReport report;
    if (!model.nodes().empty()) {
        LStructure l = build_l_structure(model, opts.ideal_edge_length);
        LayoutContext ctx(opts.seed);
        ctx.on_iteration = std::move(on_iteration);
        algorithm.initialize(l, opts, ctx);
        report = algorithm.run(l, opts, ctx);
        transfer_geometry(l, model);
    }
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace chisio::layout
