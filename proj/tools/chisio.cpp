// chisio command line: layout, validate, render, algorithms, serve.
//
// Exit codes: 0 success, 1 input error (bad file, document, option or
// algorithm name; invalid model), 2 internal error.

#include <chisio/service.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw chisio::InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw chisio::InputError("cannot write '" + path + "'");
    out << text;
    if (!out.flush()) throw chisio::InputError("cannot write '" + path + "'");
}

void print_violations(const std::vector<chisio::Violation>& v) {
    for (const auto& x : v) std::cerr << "  object " << x.object << ": " << x.rule << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compound graph layout engine"};
    app.require_subcommand(1);

    std::string in_path, out_path, svg_path, algorithm, bind = "127.0.0.1";
    std::uint64_t seed = 1;
    std::vector<std::string> opts;
    double scale = 1.0;
    int port = 8080;

    auto* layout = app.add_subcommand("layout", "lay out a GraphML document");
    layout->add_option("--algorithm,-a", algorithm, "algorithm name (see 'algorithms')")->required();
    layout->add_option("--in,-i", in_path, "input GraphML")->required();
    layout->add_option("--out,-o", out_path, "output GraphML")->required();
    layout->add_option("--svg", svg_path, "also write an SVG drawing");
    layout->add_option("--seed", seed, "random seed (default 1)");
    layout->add_option("--opt", opts, "algorithm option key=value (repeatable)");

    auto* validate = app.add_subcommand("validate", "check a GraphML document");
    validate->add_option("--in,-i", in_path, "input GraphML")->required();

    auto* render = app.add_subcommand("render", "draw a GraphML document as SVG");
    render->add_option("--in,-i", in_path, "input GraphML")->required();
    render->add_option("--svg", svg_path, "output SVG")->required();
    render->add_option("--scale", scale, "scale factor")->check(CLI::PositiveNumber);

    auto* algorithms = app.add_subcommand("algorithms", "list algorithms and their options");

    auto* serve = app.add_subcommand("serve", "run the HTTP layout service");
    serve->add_option("--port", port, "port (CHISIO_PORT overrides)");
    serve->add_option("--bind", bind, "bind address");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*layout) {
            chisio::LayoutRequest req;
            req.graphml = read_file(in_path);
            req.algorithm = algorithm;
            req.seed = seed;
            for (const auto& o : opts) {
                try {
                    const auto [key, value] = chisio::layout::parse_assignment(o);
                    req.options[key] = value;
                } catch (const chisio::layout::LayoutError& e) {
                    throw chisio::InputError(e.what());
                }
            }
            const auto result = chisio::run_pipeline(req);
            write_file(out_path, result.graphml);
            if (!svg_path.empty()) write_file(svg_path, chisio::render_svg(result.model));
            std::cerr << algorithm << ": " << result.report.iterations_used << " iterations, "
                      << result.report.wall_time_ms << " ms\n";
        } else if (*validate) {
            chisio::load_document(read_file(in_path));
            std::cout << "valid\n";
        } else if (*render) {
            const auto model = chisio::load_document(read_file(in_path));
            chisio::SvgOptions o;
            o.scale = scale;
            write_file(svg_path, chisio::render_svg(model, o));
        } else if (*algorithms) {
            for (const auto& name : chisio::layout::algorithm_names()) {
                std::cout << name;
                for (const auto& a : chisio::layout::algorithm_aliases(name)) std::cout << " (alias " << a << ")";
                std::cout << "\n";
                for (const auto& o : chisio::layout::make_algorithm(name)->options())
                    std::cout << "  " << o.key << " = " << chisio::exact_number(o.default_value) << "  "
                              << o.description << "\n";
            }
        } else if (*serve) {
            if (const char* env = std::getenv("CHISIO_PORT")) {
                const auto p = chisio::parse_number(env);
                if (!p || *p < 0 || *p > 65535 || *p != static_cast<int>(*p))
                    throw chisio::InputError(std::string("CHISIO_PORT is not a port number: ") + env);
                port = static_cast<int>(*p);
            }
            httplib::Server server;
            chisio::service::install(server);
            std::cerr << "listening on " << bind << ":" << port << "\n";
            if (!server.listen(bind, port)) throw chisio::InputError("cannot listen on " + bind + ":" + std::to_string(port));
        }
        return 0;
    } catch (const chisio::layout::UnknownAlgorithm& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const chisio::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        print_violations(e.violations());
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
