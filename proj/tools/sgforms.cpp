// sgforms: command-line front end for the harmonic-gasket toolkit.
//
// Subcommands export the level graphs, harmonic chart, Kusuoka measure and
// Z-field, evaluate the energy identity for an expression, integrate 1-forms
// along edge-paths, check the fundamental theorem of line integrals, and
// estimate intrinsic distances. Exit codes: 0 success, 2 usage error,
// 3 numeric/solver failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgf/bridge.hpp"
#include "sgf/expr.hpp"
#include "sgf/io.hpp"
#include "sgf/metric.hpp"
#include "sgf/paths.hpp"

namespace {

using nlohmann::json;
using namespace sgf;

struct RunConfig {
    int max_level = kDefaultMaxLevel;
    std::uint64_t seed = 0;
    std::string output;           // empty = stdout
    std::string format = "json";  // json | csv
};

void emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.output.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(cfg.output);
    if (!out) throw domain_error("cannot open output file '" + cfg.output + "'");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

void emit_json(const RunConfig& cfg, const json& j) { emit(cfg, j.dump(2)); }

ScalarField field_from_expr(const Expr& e) {
    return {[e](const Eigen::VectorXd& p) { return e.eval(p[0], p[1]); },
            [e](const Eigen::VectorXd& p) {
                const Dual2 d = e.eval_dual(p[0], p[1]);
                return (Eigen::VectorXd(2) << d.dx, d.dy).finished();
            }};
}

// 1-form with independently given coefficient expressions.
Form1 form_from_exprs(const Expr& wx, const Expr& wy) {
    Form1 w;
    w.coeff.push_back(field_from_expr(wx));
    w.coeff.push_back(field_from_expr(wy));
    return w;
}

// Vertex spec: "q0".."q2" for the outer corners, or "w:i" with w a cell
// address over {0,1,2} (empty w = the whole gasket) and i a corner index.
VertexId parse_vertex(const LevelGraph& g, const std::string& spec) {
    if (spec == "q0" || spec == "q1" || spec == "q2")
        return g.cell_boundary("")[static_cast<size_t>(spec[1] - '0')];
    const auto colon = spec.find(':');
    if (colon == std::string::npos)
        throw domain_error("vertex spec '" + spec + "': expected q0|q1|q2 or w:i");
    const Address w = spec.substr(0, colon);
    const std::string corner = spec.substr(colon + 1);
    if (corner.size() != 1 || corner[0] < '0' || corner[0] > '2')
        throw domain_error("vertex spec '" + spec + "': corner must be 0, 1 or 2");
    for (char c : w)
        if (c < '0' || c > '2')
            throw domain_error("vertex spec '" + spec + "': address digits must be 0-2");
    if (static_cast<int>(w.size()) > g.level())
        throw domain_error("vertex spec '" + spec + "': address deeper than the level");
    return g.cell_boundary(w)[static_cast<size_t>(corner[0] - '0')];
}

// Outer-side chain of level-m vertices: bottom q0->q1, left q0->q2,
// right q1->q2.
EdgePath outer_side_path(const LevelGraph& g, const std::string& which) {
    const std::int64_t scale = std::int64_t{1} << (g.level() + 1);
    std::vector<std::pair<std::int64_t, VertexId>> chain;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const LatticePoint p = g.lattice_points()[static_cast<size_t>(v)];
        if (which == "bottom" && p.y == 0) chain.emplace_back(p.x, v);
        if (which == "left" && p.x == p.y) chain.emplace_back(p.y, v);
        if (which == "right" && p.x + p.y == scale) chain.emplace_back(p.y, v);
    }
    std::sort(chain.begin(), chain.end());
    std::vector<VertexId> vs;
    vs.reserve(chain.size());
    for (const auto& [key, v] : chain) vs.push_back(v);
    return make_path(g, vs);
}

EdgePath parse_path(const LevelGraph& g, const std::string& spec) {
    if (spec == "bottom" || spec == "left" || spec == "right")
        return outer_side_path(g, spec);
    std::vector<VertexId> vs;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) vs.push_back(parse_vertex(g, item));
    if (vs.empty()) throw domain_error("path spec is empty");
    return make_path(g, vs);
}

void require_level(int level, const RunConfig& cfg) {
    if (level < 0) throw domain_error("level must be nonnegative");
    if (level > cfg.max_level)
        throw resource_limit_error("requested level " + std::to_string(level) +
                                   " exceeds --max-level " + std::to_string(cfg.max_level));
}

int run(int argc, char** argv) {
    CLI::App app{"differential-form calculus on the harmonic Sierpinski gasket"};
    app.require_subcommand(1);

    RunConfig cfg;
    app.add_option("--max-level", cfg.max_level, "resource cap on graph levels")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for randomized replication runs")
        ->capture_default_str();
    app.add_option("--output", cfg.output, "write results to a file instead of stdout");
    app.add_option("--format", cfg.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    int level = 0, refine = 0;
    std::string f_src, wx_src, wy_src, path_spec, from_spec, to_spec;

    CLI::App* gasket = app.add_subcommand("gasket", "export the level-m graph");
    gasket->add_option("--level", level, "graph level")->required();

    CLI::App* chart = app.add_subcommand("chart", "export harmonic-coordinate images");
    chart->add_option("--level", level, "chart level")->required();

    CLI::App* kusuoka = app.add_subcommand("kusuoka", "export the Kusuoka cell measures");
    kusuoka->add_option("--level", level, "cell level")->required();

    CLI::App* zfield = app.add_subcommand("zfield", "export the Z-matrix field");
    zfield->add_option("--level", level, "cell level")->required();

    CLI::App* energy = app.add_subcommand("energy", "energy identity report for F");
    energy->add_option("--f", f_src, "scalar expression in x, y")->required();
    energy->add_option("--level", level, "evaluation level")->required();

    CLI::App* integrate = app.add_subcommand("integrate", "line integral of (wx dx + wy dy)");
    integrate->add_option("--wx", wx_src, "first coefficient expression")->required();
    integrate->add_option("--wy", wy_src, "second coefficient expression")->required();
    integrate->add_option("--path", path_spec, "comma list of vertex specs, or bottom|left|right")
        ->required();
    integrate->add_option("--refine", refine, "dyadic refinement depth")->capture_default_str();
    integrate->add_option("--level", level, "path level")->capture_default_str();

    CLI::App* ftli = app.add_subcommand("ftli", "integrate dF and compare with endpoint values");
    ftli->add_option("--f", f_src, "scalar expression in x, y")->required();
    ftli->add_option("--path", path_spec, "comma list of vertex specs, or bottom|left|right")
        ->required();
    ftli->add_option("--refine", refine, "dyadic refinement depth")->capture_default_str();
    ftli->add_option("--level", level, "path level")->capture_default_str();

    CLI::App* distance = app.add_subcommand("distance", "intrinsic distance estimate");
    distance->add_option("--from", from_spec, "vertex spec")->required();
    distance->add_option("--to", to_spec, "vertex spec")->required();
    distance->add_option("--level", level, "solver level")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }

    require_level(level, cfg);

    if (gasket->parsed()) {
        if (cfg.format != "json") throw domain_error("gasket export supports only json");
        emit_json(cfg, graph_to_json(LevelGraph::build(level, cfg.max_level)));
    } else if (chart->parsed()) {
        if (cfg.format == "csv")
            emit(cfg, frames_to_csv(level));
        else
            emit_json(cfg, chart_to_json(build_chart(level, cfg.max_level)));
    } else if (kusuoka->parsed()) {
        const CellMeasureTable t = kusuoka_table(level);
        if (cfg.format == "csv")
            emit(cfg, kusuoka_to_csv(t));
        else
            emit_json(cfg, kusuoka_to_json(t));
    } else if (zfield->parsed()) {
        const ZField zf = ZField::build(level);
        if (cfg.format == "csv")
            emit(cfg, zfield_to_csv(zf));
        else
            emit_json(cfg, zfield_to_json(zf));
    } else if (energy->parsed()) {
        const Expr f = Expr::parse(f_src);
        const HarmonicChart ch = build_chart(level, cfg.max_level);
        std::vector<double> values(static_cast<size_t>(ch.graph.vertex_count()));
        for (VertexId v = 0; v < ch.graph.vertex_count(); ++v) {
            const Eigen::Vector2d p = ch.point(v);
            values[static_cast<size_t>(v)] = f.eval(p.x(), p.y());
        }
        const double e = graph_energy(values, ch.graph);
        const double sq = z_seminorm_sq(differential(field_from_expr(f), 2),
                                        ZField::build(level));
        emit_json(cfg, energy_report_json(level, sq, e));
    } else if (integrate->parsed() || ftli->parsed()) {
        require_level(level + refine, cfg);
        if (refine < 0) throw domain_error("--refine must be nonnegative");
        const LevelGraph g = LevelGraph::build(level, cfg.max_level);
        const EdgePath p = parse_path(g, path_spec);
        const HarmonicChart ch = build_chart(level + refine, cfg.max_level);
        json j;
        j["path"] = path_spec;
        j["refinement"] = refine;
        if (integrate->parsed()) {
            const Form1 omega = form_from_exprs(Expr::parse(wx_src), Expr::parse(wy_src));
            const PathIntegralResult r = integrate_form(omega, p, g, ch, refine);
            j["integral"] = r.value;
            j["estimated_error"] = r.estimated_error;
        } else {
            const Expr f = Expr::parse(f_src);
            const PathIntegralResult r =
                integrate_form(differential(field_from_expr(f), 2), p, g, ch, refine);
            const Eigen::Vector2d a = ch.point_of(g, p.vertices.front());
            const Eigen::Vector2d b = ch.point_of(g, p.vertices.back());
            j["integral"] = r.value;
            j["estimated_error"] = r.estimated_error;
            j["endpoint_difference"] = f.eval(b.x(), b.y()) - f.eval(a.x(), a.y());
        }
        emit_json(cfg, j);
    } else if (distance->parsed()) {
        const MetricContext ctx = MetricContext::build(level, cfg.max_level);
        const VertexId x = parse_vertex(ctx.graph(), from_spec);
        const VertexId y = parse_vertex(ctx.graph(), to_spec);
        const MetricEstimate e = intrinsic_estimate(ctx, x, y);
        emit_json(cfg, json{{"x", from_spec},
                            {"y", to_spec},
                            {"level", e.level},
                            {"lower", e.lower},
                            {"upper", e.upper}});
    }
    return 0;
}

json error_json(const std::string& code, const std::string& message) {
    return json{{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::cerr << error_json("usage", e.what()).dump() << '\n';
        return 2;
    } catch (const parse_error& e) {
        std::cerr << error_json("expr-parse", e.what()).dump() << '\n';
        return 2;
    } catch (const resource_limit_error& e) {
        std::cerr << error_json("resource-limit", e.what()).dump() << '\n';
        return 2;
    } catch (const solver_error& e) {
        std::cerr << error_json("solver", e.what()).dump() << '\n';
        return 3;
    } catch (const domain_error& e) {
        std::cerr << error_json("domain", e.what()).dump() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal", e.what()).dump() << '\n';
        return 3;
    }
}
