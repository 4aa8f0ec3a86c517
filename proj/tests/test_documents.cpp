#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>
#include <string>

#include "leaky/documents.hpp"

using namespace leaky;

namespace {

std::string error_of(auto&& f) {
    try {
        f();
    } catch (const DocumentError& e) {
        return e.what();
    }
    return {};
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("graph document: star with truncation") {
    const Json doc = Json::parse(R"({"schema": 1, "delta-alpha": 4, "truncation": 5, "star": {"angles": [1.5707963267948966, 1.5707963267948966, 1.5707963267948966]}})");
    const GraphDocument g = parse_graph_document(doc);
    REQUIRE(g.star.has_value());
    CHECK(g.star->rays() == 4);
    CHECK(g.star->truncation == 5.0);
    CHECK(g.graph.alpha() == 4.0);
    CHECK(g.graph.edges().size() == 4);
    CHECK(g.graph.has_leads());

    const GraphDocument longer = parse_graph_document(doc, 9.0);
    CHECK(longer.star->truncation == 9.0);
}

TEST_CASE("graph document: every edge kind") {
    const Json doc = Json::parse(R"({
        "schema": 1, "delta-alpha": 2.5, "truncation": 7,
        "edges": [
            {"kind": "segment", "from": [10, 0], "to": [11, 0], "lead": "end"},
            {"kind": "arc", "center": [20, 0], "radius": 1, "start": 0, "sweep": 1.5},
            {"kind": "circle", "center": [30, 0], "radius": 2},
            {"kind": "polyline", "vertices": [[40, 0], [41, 0], [41, 1]], "closed": false},
            {"kind": "fourier", "length": 3, "harmonics": [{"order": 1, "ax": 1, "by": 1}, {"order": 2, "ax": 0.1}]},
            {"kind": "ray", "origin": [50, 0], "angle": 0}
        ]})");
    const GraphDocument g = parse_graph_document(doc);
    CHECK_FALSE(g.star.has_value());
    const auto& edges = g.graph.edges();
    REQUIRE(edges.size() == 7);  // the polyline splits at its corner
    CHECK(edges[0].truncated_end);
    CHECK_FALSE(edges[0].truncated_start);
    CHECK(edges[1].curve.length() == doctest::Approx(1.5));
    CHECK(edges[2].curve.closed());
    CHECK(edges[2].curve.length() == doctest::Approx(4.0 * std::numbers::pi));
    CHECK(edges[5].curve.closed());
    CHECK(edges[5].curve.length() == doctest::Approx(3.0));
    CHECK(edges[6].curve.length() == doctest::Approx(7.0));
    CHECK(edges[6].truncated_end);
}

TEST_CASE("graph document: errors name the field") {
    CHECK(error_of([] { parse_graph_document(Json::parse(R"({"delta-alpha": 1, "edges": []})")); }).find("schema") != std::string::npos);
    CHECK(error_of([] { parse_graph_document(Json::parse(R"({"schema": 2, "delta-alpha": 1, "edges": []})")); }).find("schema") !=
          std::string::npos);
    CHECK(error_of([] { parse_graph_document(Json::parse(R"({"schema": 1, "edges": []})")); }).find("delta-alpha") != std::string::npos);
    CHECK(error_of([] { parse_graph_document(Json::parse(R"({"schema": 1, "delta-alpha": -1, "edges": []})")); }).find("delta-alpha") !=
          std::string::npos);
    const std::string radius = error_of([] {
        parse_graph_document(Json::parse(R"({"schema": 1, "delta-alpha": 1, "edges": [{"kind": "circle", "center": [0, 0]}]})"));
    });
    CHECK(radius.find("edges[0].radius") != std::string::npos);
    const std::string kind = error_of([] {
        parse_graph_document(Json::parse(R"({"schema": 1, "delta-alpha": 1, "edges": [{"kind": "spiral"}]})"));
    });
    CHECK(kind.find("edges[0].kind") != std::string::npos);
    const std::string lead = error_of([] {
        parse_graph_document(
            Json::parse(R"({"schema": 1, "delta-alpha": 1, "edges": [{"kind": "segment", "from": [0, 0], "to": [1, 0], "lead": "up"}]})"));
    });
    CHECK(lead.find("edges[0].lead") != std::string::npos);
    const std::string coord = error_of([] {
        parse_graph_document(Json::parse(R"({"schema": 1, "delta-alpha": 1, "edges": [{"kind": "segment", "from": [0, "a"], "to": [1, 0]}]})"));
    });
    CHECK(coord.find("edges[0].from[1]") != std::string::npos);
    // a zero-radius circle is rejected by the geometry layer, still attributed to its edge
    const std::string degenerate = error_of([] {
        parse_graph_document(Json::parse(R"({"schema": 1, "delta-alpha": 1, "edges": [{"kind": "circle", "center": [0, 0], "radius": 0}]})"));
    });
    CHECK(degenerate.find("edges[0]") != std::string::npos);
}

TEST_CASE("point and line-defect documents") {
    const PointArray a = parse_point_document(Json::parse(
        R"({"schema": 1, "dimension": 3, "points": [{"position": [0, 0, 0], "point-alpha": 0.5}, {"position": [1, 2, 3], "point-alpha": -1}]})"));
    CHECK(a.dimension == 3);
    REQUIRE(a.size() == 2);
    CHECK(a.points[1].z() == 3.0);
    CHECK(a.alphas[1] == -1.0);
    CHECK(error_of([] {
              parse_point_document(Json::parse(R"({"schema": 1, "dimension": 2, "points": [{"position": [0, 0, 0], "point-alpha": 1}]})"));
          }).find("points[0].position") != std::string::npos);
    CHECK(error_of([] { parse_point_document(Json::parse(R"({"schema": 1, "dimension": 4, "points": []})")); }).find("dimension") !=
          std::string::npos);

    const LineDefectConfig c =
        parse_line_defect_document(Json::parse(R"({"schema": 1, "delta-alpha": 2, "points": [{"position": [0, 1], "point-alpha": 0.3}]})"));
    CHECK(c.alpha == 2.0);
    CHECK(c.points[0].y() == 1.0);
    CHECK(c.betas[0] == 0.3);
    CHECK(error_of([] {
              parse_line_defect_document(Json::parse(R"({"schema": 1, "delta-alpha": 2, "points": [{"position": [0, 0], "point-alpha": 0}]})"));
          }).find("points") != std::string::npos);
}

TEST_CASE("spectral result JSON round trip is bit-exact") {
    SpectralResult r;
    r.method = "nystrom";
    r.coupling = std::numeric_limits<double>::quiet_NaN();
    r.threshold = -1.0 / 3.0;
    BoundState s;
    s.index = 1;
    s.kappa = std::sqrt(2.0);
    s.energy = -2.0000000000000004;
    s.residual = 1.2345678901234567e-13;
    s.multiplicity = 2;
    s.coefficients = Eigen::VectorXd::LinSpaced(5, 0.1, std::numbers::pi);
    r.states.push_back(s);
    r.support.push_back({Vec3(0.1, 0.2, 0.30000000000000004), 0.7, 3, 1.0 / 7.0});
    r.warnings.push_back("note");

    const std::string text = spectral_to_json(r).dump();
    const Json parsed = Json::parse(text);
    CHECK(parsed["coupling"].is_null());
    const SpectralResult back = spectral_from_json(parsed);
    CHECK(back.method == r.method);
    CHECK(std::isnan(back.coupling));
    CHECK(same_bits(back.threshold, r.threshold));
    REQUIRE(back.states.size() == 1);
    CHECK(same_bits(back.states[0].kappa, s.kappa));
    CHECK(same_bits(back.states[0].energy, s.energy));
    CHECK(same_bits(back.states[0].residual, s.residual));
    CHECK(back.states[0].multiplicity == 2);
    for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) CHECK(same_bits(back.states[0].coefficients[i], s.coefficients[i]));
    CHECK(same_bits(back.support[0].position.z(), 0.30000000000000004));
    CHECK(same_bits(back.support[0].s, 1.0 / 7.0));
    CHECK(back.support[0].edge == 3);
    CHECK(back.warnings == r.warnings);
    CHECK(spectral_to_json(back).dump() == text);

    const std::string rows = spectral_rows(r);
    CHECK(rows.rfind("1 1.4142135623730951 -2.0000000000000004", 0) == 0);
}
