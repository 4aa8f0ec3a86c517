#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "leaky/bs_core.hpp"
#include "leaky/comparison.hpp"
#include "leaky/documents.hpp"
#include "leaky/experiments.hpp"
#include "leaky/greens.hpp"
#include "leaky/krein_points.hpp"
#include "leaky/line_defect.hpp"

using namespace leaky;

namespace {

struct RunConfig {
    std::string input;
    double tol = 1e-8;
    double mesh = 16.0;
    double truncation = 0.0;
    int j_max = 8;
    int threads = 1;
    std::string out;
    std::string format = "rows";
};

void add_solver_options(CLI::App* sub, RunConfig& c) {
    sub->add_option("--tol", c.tol, "relative bracket width on kappa, in [1e-10, 1e-4]")->check(CLI::Range(1e-10, 1e-4));
    sub->add_option("--mesh", c.mesh, "mesh density (nodes per 1/kappa_ref)")->check(CLI::Range(2.0, 256.0));
    sub->add_option("--truncation", c.truncation, "length of truncated leads and rays")->check(CLI::NonNegativeNumber);
    sub->add_option("--jmax", c.j_max, "maximum number of states")->check(CLI::Range(1, 512));
    sub->add_option("--threads", c.threads, "assembly threads")->check(CLI::Range(1, 256));
    sub->add_option("--out", c.out, "write the structured result to this file");
    sub->add_option("--format", c.format, "stdout format")->check(CLI::IsMember({"rows", "structured"}));
}

MeshOptions mesh_options(const RunConfig& c) {
    MeshOptions m;
    m.density = c.mesh;
    m.threads = c.threads;
    return m;
}

void emit(const SpectralResult& result, const RunConfig& c) {
    if (c.format == "structured") {
        std::cout << spectral_to_json(result).dump(2) << "\n";
    } else {
        std::cout << spectral_rows(result);
    }
    for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
    if (!c.out.empty()) write_text_file(c.out, spectral_to_json(result).dump(2) + "\n");
}

void emit_table(const Json& doc, const std::vector<std::vector<double>>& rows, const RunConfig& c) {
    if (c.format == "structured") {
        std::cout << doc.dump(2) << "\n";
    } else {
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) std::printf(i ? " %.17g" : "%.17g", row[i]);
            std::printf("\n");
        }
    }
    if (!c.out.empty()) write_text_file(c.out, doc.dump(2) + "\n");
}

LeakyGraph load_graph(const RunConfig& c) { return parse_graph_document(read_json_file(c.input), c.truncation).graph; }

int run_spectrum(const RunConfig& c) {
    emit(find_bound_states(load_graph(c), c.j_max, c.tol, mesh_options(c)), c);
    return 0;
}

int run_points(const RunConfig& c) {
    emit(point_spectrum(parse_point_document(read_json_file(c.input)), c.j_max, std::max(c.tol, 1e-10)), c);
    return 0;
}

int run_linedefect(const RunConfig& c) {
    emit(line_defect_spectrum(parse_line_defect_document(read_json_file(c.input)), c.tol), c);
    return 0;
}

int run_approx(const RunConfig& c, const std::vector<int>& counts) {
    const LeakyGraph graph = load_graph(c);
    const SpectralResult reference = find_bound_states(graph, 1, c.tol, mesh_options(c));
    if (reference.states.empty()) throw SolverError("approx: the graph has no resolved bound state");
    const double e0 = reference.states[0].energy;
    Json doc = {{"schema", kSchemaVersion}, {"kind", "approx"}, {"graph_energy", e0}, {"rows", Json::array()}};
    std::vector<std::vector<double>> rows;
    double previous = 0.0;
    for (int n : counts) {
        const SpectralResult s = point_spectrum(approximate_graph(graph, graph.alpha(), n), 1, std::max(c.tol, 1e-10));
        if (s.states.empty()) throw SolverError("approx: no bound state for n = " + std::to_string(n));
        const double e = s.states[0].energy;
        const double diff = std::fabs(e - e0);
        const double rate = previous > 0.0 ? std::log2(previous / diff) : std::nan("");
        previous = diff;
        rows.push_back({double(n), e, diff, rate});
        doc["rows"].push_back({{"n", n}, {"energy", e}, {"difference", diff}, {"rate", rate}});
    }
    emit_table(doc, rows, c);
    return 0;
}

int run_compare(const RunConfig& c) {
    const LeakyGraph graph = load_graph(c);
    if (graph.edges().size() != 1 || !graph.edges()[0].curve.closed()) {
        throw std::invalid_argument("compare: the graph must be a single closed smooth loop");
    }
    const ArcCurve& loop = graph.edges()[0].curve;
    const SpectralResult s = find_bound_states(graph, c.j_max, c.tol, mesh_options(c));
    Json doc = {{"schema", kSchemaVersion}, {"kind", "compare"}, {"delta-alpha", graph.alpha()}, {"rows", Json::array()}};
    std::vector<std::vector<double>> rows;
    for (const BoundState& st : s.states) {
        const double predicted = strong_coupling_predict(loop, graph.alpha(), st.index);
        rows.push_back({double(st.index), st.energy, predicted, st.energy - predicted});
        doc["rows"].push_back({{"index", st.index}, {"energy", st.energy}, {"predicted", predicted}, {"difference", st.energy - predicted}});
    }
    emit_table(doc, rows, c);
    return 0;
}

int run_polymer(const RunConfig& c, int dimension, double spacing, const std::vector<double>& alphas, const std::vector<int>& counts) {
    Json doc = {{"schema", kSchemaVersion}, {"kind", "polymer"}, {"dimension", dimension}, {"spacing", spacing}, {"rows", Json::array()}};
    std::vector<std::vector<double>> rows;
    for (double a : alphas) {
        const PolymerParams p{dimension, spacing, a};
        const double threshold = polymer_threshold(p);
        const double extrapolated = counts.empty() ? std::nan("") : polymer_extrapolate(p, counts);
        const double single = dimension == 2 ? zeta_threshold(a) : std::nan("");
        rows.push_back({a, threshold, extrapolated, single});
        doc["rows"].push_back({{"point-alpha", a},
                               {"threshold", threshold},
                               {"extrapolated", std::isnan(extrapolated) ? Json(nullptr) : Json(extrapolated)},
                               {"single_point", std::isnan(single) ? Json(nullptr) : Json(single)}});
    }
    emit_table(doc, rows, c);
    return 0;
}

int run_star(const RunConfig& c, double alpha, const std::vector<double>& betas, const std::vector<double>& angles) {
    if (!(alpha > 0.0)) throw std::invalid_argument("star: --delta-alpha must be positive");
    std::vector<StarConfig> configs;
    if (!angles.empty()) configs.push_back({angles, c.truncation});
    for (double b : betas) configs.push_back({{b}, c.truncation});
    if (configs.empty()) throw std::invalid_argument("star: give --beta or --angles");
    Json doc = {{"schema", kSchemaVersion}, {"kind", "star"}, {"delta-alpha", alpha}, {"rows", Json::array()}};
    std::vector<std::vector<double>> rows;
    for (const StarConfig& cfg : configs) {
        const SpectralResult s = find_bound_states(make_star_graph(cfg, alpha), c.j_max, c.tol, mesh_options(c));
        const double e = s.states.empty() ? std::nan("") : s.states[0].energy;
        std::vector<double> row{cfg.beta.size() == 1 ? cfg.beta[0] : std::nan(""), e, double(s.states.size())};
        rows.push_back(row);
        doc["rows"].push_back({{"angles", cfg.beta}, {"ground_energy", std::isnan(e) ? Json(nullptr) : Json(e)}, {"states", s.states.size()}});
    }
    emit_table(doc, rows, c);
    return 0;
}

int run_isoper(const RunConfig& c, double alpha, double length, int loops, std::uint64_t seed) {
    if (!(alpha > 0.0) || !(length > 0.0) || loops < 1) throw std::invalid_argument("isoper: delta-alpha, length and loops must be positive");
    LeakyGraph circle(alpha);
    circle.add_edge(ArcCurve::circle({0, 0}, length / (2.0 * kPi)));
    const SpectralResult sc = find_bound_states(circle, 1, c.tol, mesh_options(c));
    if (sc.states.empty()) throw SolverError("isoper: circle has no resolved bound state");
    const double e_circle = sc.states[0].energy;
    std::mt19937_64 rng(seed);
    Json doc = {{"schema", kSchemaVersion}, {"kind", "isoper"}, {"seed", seed}, {"circle_energy", e_circle}, {"rows", Json::array()}};
    std::vector<std::vector<double>> rows{{0.0, e_circle, 0.0}};
    int violations = 0;
    for (int i = 1; i <= loops; ++i) {
        LeakyGraph g(alpha);
        g.add_edge(random_loop(rng, length));
        const SpectralResult s = find_bound_states(g, 1, c.tol, mesh_options(c));
        if (s.states.empty()) throw SolverError("isoper: loop " + std::to_string(i) + " has no resolved bound state");
        const double e = s.states[0].energy;
        if (!(e < e_circle)) ++violations;
        rows.push_back({double(i), e, e_circle - e});
        doc["rows"].push_back({{"loop", i}, {"energy", e}, {"margin", e_circle - e}});
    }
    doc["violations"] = violations;
    emit_table(doc, rows, c);
    return 0;
}

int run_anchors(const RunConfig& c, std::vector<std::string> ids, const std::string& results, bool list, std::uint64_t seed) {
    if (list) {
        for (const std::string& id : anchor_ids()) std::cout << id << "\n";
        return 0;
    }
    if (ids.empty()) ids = anchor_ids();
    ExperimentOptions o;
    o.tol = std::min(c.tol, 1e-9);
    o.density = c.mesh;
    o.threads = c.threads;
    o.seed = seed;
    for (const std::string& id : ids) {
        const ExperimentReport r = run_anchor(id, o);
        const std::string path = write_report(r, results);
        std::printf("%-24s %s %8.2fs %s\n", id.c_str(), r.passed ? "PASS" : "FAIL", r.runtime_seconds, path.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bound states of leaky quantum graphs and point interactions"};
    app.require_subcommand(1);
    RunConfig c;

    auto* spectrum = app.add_subcommand("spectrum", "bound states of a graph document");
    auto* points = app.add_subcommand("points", "bound states of a point-interaction document");
    auto* approx = app.add_subcommand("approx", "point approximation of a compact graph: convergence table");
    auto* compare = app.add_subcommand("compare", "strong-coupling predictions against the graph solver on a loop");
    auto* polymer = app.add_subcommand("polymer", "thresholds of straight point arrays");
    auto* star = app.add_subcommand("star", "ground states of star graphs");
    auto* linedefect = app.add_subcommand("linedefect", "a delta line with point interactions");
    auto* isoper = app.add_subcommand("isoper", "circle against random loops of equal length");
    auto* anchors = app.add_subcommand("anchors", "run registered experiments and write reports");

    for (auto* sub : {spectrum, points, approx, compare, linedefect}) {
        sub->add_option("input", c.input, "input document")->required();
    }
    for (auto* sub : {spectrum, points, approx, compare, polymer, star, linedefect, isoper, anchors}) add_solver_options(sub, c);

    std::vector<int> counts{16, 32, 64, 128};
    approx->add_option("--counts", counts, "numbers of points")->check(CLI::Range(2, 100000));

    int dimension = 2;
    double spacing = 1.0;
    std::vector<double> point_alphas{0.0};
    std::vector<int> polymer_counts{50, 100, 200};
    polymer->add_option("--dimension", dimension)->check(CLI::IsMember({2, 3}));
    polymer->add_option("--spacing", spacing)->check(CLI::PositiveNumber);
    polymer->add_option("--point-alpha", point_alphas, "one or more point couplings");
    polymer->add_option("--counts", polymer_counts, "finite array sizes for the extrapolation (three, or none)");

    double star_alpha = 2.0;
    std::vector<double> betas;
    std::vector<double> angles;
    star->add_option("--delta-alpha", star_alpha)->check(CLI::PositiveNumber);
    star->add_option("--beta", betas, "two-ray opening angles to sweep");
    star->add_option("--angles", angles, "consecutive ray angles of one star");

    double iso_alpha = 4.0;
    double iso_length = 2.0 * kPi;
    int loops = 20;
    std::uint64_t seed = ExperimentOptions{}.seed;
    isoper->add_option("--delta-alpha", iso_alpha)->check(CLI::PositiveNumber);
    isoper->add_option("--length", iso_length)->check(CLI::PositiveNumber);
    isoper->add_option("--loops", loops)->check(CLI::Range(1, 10000));
    isoper->add_option("--seed", seed);

    std::vector<std::string> ids;
    std::string results = "results";
    bool list = false;
    anchors->add_option("ids", ids, "anchor ids (default: all)");
    anchors->add_option("--results", results, "report directory");
    anchors->add_flag("--list", list, "print the registered ids");
    anchors->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (*spectrum) return run_spectrum(c);
        if (*points) return run_points(c);
        if (*approx) return run_approx(c, counts);
        if (*compare) return run_compare(c);
        if (*polymer) {
            if (!polymer_counts.empty() && polymer_counts.size() != 3) throw std::invalid_argument("polymer: --counts takes three sizes");
            return run_polymer(c, dimension, spacing, point_alphas, polymer_counts);
        }
        if (*star) return run_star(c, star_alpha, betas, angles);
        if (*linedefect) return run_linedefect(c);
        if (*isoper) return run_isoper(c, iso_alpha, iso_length, loops, seed);
        if (*anchors) return run_anchors(c, ids, results, list, seed);
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
