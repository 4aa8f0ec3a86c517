#include "leaky/documents.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace leaky {
namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw DocumentError("field '" + field + "': " + what);
}

const Json& member(const Json& obj, const std::string& key, const std::string& path) {
    const std::string field = path.empty() ? key : path + "." + key;
    if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(field, "missing");
    return *it;
}

double number(const Json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(field, "not finite");
    return v;
}

double number_at(const Json& obj, const std::string& key, const std::string& path) {
    return number(member(obj, key, path), path.empty() ? key : path + "." + key);
}

double number_or(const Json& obj, const std::string& key, const std::string& path, double fallback) {
    return obj.contains(key) ? number_at(obj, key, path) : fallback;
}

Vec2 vec2(const Json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) fail(field, "expected [x, y]");
    return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

Vec3 vec3(const Json& j, const std::string& field, int dimension) {
    if (!j.is_array() || int(j.size()) != dimension) fail(field, "expected " + std::to_string(dimension) + " coordinates");
    Vec3 v = Vec3::Zero();
    for (int i = 0; i < dimension; ++i) v[i] = number(j[std::size_t(i)], field + "[" + std::to_string(i) + "]");
    return v;
}

void check_schema(const Json& doc) {
    if (!doc.is_object()) fail("<root>", "expected an object");
    const Json& s = member(doc, "schema", "");
    if (!s.is_number_integer() || s.get<int>() != kSchemaVersion) fail("schema", "unsupported version (expected 1)");
}

template <class F>
auto guarded(const std::string& field, F&& f) {
    try {
        return f();
    } catch (const DocumentError&) {
        throw;
    } catch (const std::exception& e) {
        fail(field, e.what());
    }
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double from_number_or_null(const Json& j, const std::string& field) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!j.is_number()) fail(field, "expected a number or null");
    return j.get<double>();
}

}  // namespace

GraphDocument parse_graph_document(const Json& doc, double truncation_override) {
    check_schema(doc);
    const double alpha = number_at(doc, "delta-alpha", "");
    if (!(alpha > 0.0)) fail("delta-alpha", "must be positive");
    double truncation = number_or(doc, "truncation", "", 0.0);
    if (doc.contains("truncation") && !(truncation > 0.0)) fail("truncation", "must be positive");
    if (truncation_override > 0.0) truncation = truncation_override;
    if (!(truncation > 0.0)) truncation = default_star_truncation(alpha);

    GraphDocument out;
    out.graph = LeakyGraph(alpha);
    if (doc.contains("star")) {
        if (doc.contains("edges")) fail("star", "cannot be combined with edges");
        const Json& star = doc["star"];
        const Json& angles = member(star, "angles", "star");
        if (!angles.is_array() || angles.empty()) fail("star.angles", "expected a non-empty list");
        StarConfig config;
        for (std::size_t i = 0; i < angles.size(); ++i) config.beta.push_back(number(angles[i], "star.angles[" + std::to_string(i) + "]"));
        config.truncation = truncation;
        guarded("star", [&] { config.validate(); return 0; });
        out.graph = make_star_graph(config, alpha);
        out.star = config;
        return out;
    }
    const Json& edges = member(doc, "edges", "");
    if (!edges.is_array() || edges.empty()) fail("edges", "expected a non-empty list");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string path = "edges[" + std::to_string(i) + "]";
        const Json& e = edges[i];
        const Json& kind_json = member(e, "kind", path);
        if (!kind_json.is_string()) fail(path + ".kind", "expected a string");
        const std::string kind = kind_json.get<std::string>();
        guarded(path, [&] {
            if (kind == "segment") {
                std::string lead = e.value("lead", std::string("none"));
                if (lead != "none" && lead != "start" && lead != "end" && lead != "both") fail(path + ".lead", "expected none, start, end or both");
                out.graph.add_edge(ArcCurve::segment(vec2(member(e, "from", path), path + ".from"), vec2(member(e, "to", path), path + ".to")),
                                   lead == "start" || lead == "both", lead == "end" || lead == "both");
            } else if (kind == "ray") {
                const Vec2 origin = vec2(member(e, "origin", path), path + ".origin");
                const double angle = number_at(e, "angle", path);
                out.graph.add_edge(ArcCurve::segment(origin, origin + truncation * Vec2(std::cos(angle), std::sin(angle))), false, true);
            } else if (kind == "circle" || kind == "arc") {
                const Vec2 center = vec2(member(e, "center", path), path + ".center");
                const double radius = number_at(e, "radius", path);
                const double start = number_or(e, "start", path, 0.0);
                const double sweep = kind == "circle" ? 2.0 * std::numbers::pi : number_at(e, "sweep", path);
                out.graph.add_edge(ArcCurve::circle(center, radius, start, sweep));
            } else if (kind == "polyline") {
                const Json& vs = member(e, "vertices", path);
                if (!vs.is_array()) fail(path + ".vertices", "expected a list of points");
                std::vector<Vec2> vertices;
                for (std::size_t k = 0; k < vs.size(); ++k) vertices.push_back(vec2(vs[k], path + ".vertices[" + std::to_string(k) + "]"));
                const Json closed = e.value("closed", Json(false));
                if (!closed.is_boolean()) fail(path + ".closed", "expected true or false");
                out.graph.add_edge(ArcCurve::polyline(std::move(vertices), closed.get<bool>()));
            } else if (kind == "fourier") {
                const double length = number_at(e, "length", path);
                const Json& hs = member(e, "harmonics", path);
                if (!hs.is_array() || hs.empty()) fail(path + ".harmonics", "expected a non-empty list");
                std::vector<FourierHarmonic> harmonics;
                for (std::size_t k = 0; k < hs.size(); ++k) {
                    const std::string hp = path + ".harmonics[" + std::to_string(k) + "]";
                    const Json& order = member(hs[k], "order", hp);
                    if (!order.is_number_integer()) fail(hp + ".order", "expected an integer");
                    harmonics.push_back({order.get<int>(), number_or(hs[k], "ax", hp, 0.0), number_or(hs[k], "bx", hp, 0.0),
                                         number_or(hs[k], "ay", hp, 0.0), number_or(hs[k], "by", hp, 0.0)});
                }
                out.graph.add_edge(make_fourier_loop(harmonics, length));
            } else {
                fail(path + ".kind", "unknown edge kind '" + kind + "'");
            }
            return 0;
        });
    }
    guarded("edges", [&] { out.graph.validate(); return 0; });
    return out;
}

PointArray parse_point_document(const Json& doc) {
    check_schema(doc);
    const Json& dim = member(doc, "dimension", "");
    if (!dim.is_number_integer() || (dim.get<int>() != 2 && dim.get<int>() != 3)) fail("dimension", "expected 2 or 3");
    PointArray out;
    out.dimension = dim.get<int>();
    const Json& points = member(doc, "points", "");
    if (!points.is_array() || points.empty()) fail("points", "expected a non-empty list");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string path = "points[" + std::to_string(i) + "]";
        out.points.push_back(vec3(member(points[i], "position", path), path + ".position", out.dimension));
        out.alphas.push_back(number_at(points[i], "point-alpha", path));
    }
    guarded("points", [&] { out.validate(); return 0; });
    return out;
}

LineDefectConfig parse_line_defect_document(const Json& doc) {
    check_schema(doc);
    LineDefectConfig out;
    out.alpha = number_at(doc, "delta-alpha", "");
    const Json& points = member(doc, "points", "");
    if (!points.is_array() || points.empty()) fail("points", "expected a non-empty list");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::string path = "points[" + std::to_string(i) + "]";
        out.points.push_back(vec2(member(points[i], "position", path), path + ".position"));
        out.betas.push_back(number_at(points[i], "point-alpha", path));
    }
    guarded("points", [&] { out.validate(); return 0; });
    return out;
}

Json spectral_to_json(const SpectralResult& result) {
    Json states = Json::array();
    for (const BoundState& s : result.states) {
        states.push_back({{"index", s.index},
                          {"kappa", s.kappa},
                          {"energy", s.energy},
                          {"residual", s.residual},
                          {"multiplicity", s.multiplicity},
                          {"coefficients", std::vector<double>(s.coefficients.data(), s.coefficients.data() + s.coefficients.size())}});
    }
    Json support = Json::array();
    for (const SupportNode& n : result.support) {
        support.push_back({{"position", {n.position.x(), n.position.y(), n.position.z()}}, {"weight", n.weight}, {"edge", n.edge}, {"s", n.s}});
    }
    return {{"schema", kSchemaVersion},
            {"kind", "spectrum"},
            {"method", result.method},
            {"coupling", number_or_null(result.coupling)},
            {"threshold", number_or_null(result.threshold)},
            {"states", states},
            {"support", support},
            {"warnings", result.warnings}};
}

SpectralResult spectral_from_json(const Json& doc) {
    check_schema(doc);
    SpectralResult r;
    const Json& method = member(doc, "method", "");
    if (!method.is_string()) fail("method", "expected a string");
    r.method = method.get<std::string>();
    r.coupling = from_number_or_null(member(doc, "coupling", ""), "coupling");
    r.threshold = from_number_or_null(member(doc, "threshold", ""), "threshold");
    const Json& states = member(doc, "states", "");
    if (!states.is_array()) fail("states", "expected a list");
    for (std::size_t i = 0; i < states.size(); ++i) {
        const std::string path = "states[" + std::to_string(i) + "]";
        const Json& s = states[i];
        BoundState b;
        b.index = int(number_at(s, "index", path));
        b.kappa = number_at(s, "kappa", path);
        b.energy = number_at(s, "energy", path);
        b.residual = number_at(s, "residual", path);
        b.multiplicity = int(number_or(s, "multiplicity", path, 1.0));
        const Json& c = member(s, "coefficients", path);
        if (!c.is_array()) fail(path + ".coefficients", "expected a list");
        b.coefficients.resize(Eigen::Index(c.size()));
        for (std::size_t k = 0; k < c.size(); ++k) b.coefficients[Eigen::Index(k)] = number(c[k], path + ".coefficients");
        r.states.push_back(std::move(b));
    }
    if (doc.contains("support")) {
        const Json& support = doc["support"];
        if (!support.is_array()) fail("support", "expected a list");
        for (std::size_t i = 0; i < support.size(); ++i) {
            const std::string path = "support[" + std::to_string(i) + "]";
            SupportNode n;
            n.position = vec3(member(support[i], "position", path), path + ".position", 3);
            n.weight = number_at(support[i], "weight", path);
            n.edge = int(number_at(support[i], "edge", path));
            n.s = number_at(support[i], "s", path);
            r.support.push_back(n);
        }
    }
    if (doc.contains("warnings")) {
        for (const Json& w : doc["warnings"]) {
            if (!w.is_string()) fail("warnings", "expected strings");
            r.warnings.push_back(w.get<std::string>());
        }
    }
    return r;
}

std::string spectral_rows(const SpectralResult& result) {
    std::string out;
    char line[160];
    for (const BoundState& s : result.states) {
        std::snprintf(line, sizeof line, "%d %.17g %.17g %.3e\n", s.index, s.kappa, s.energy, s.residual);
        out += line;
    }
    return out;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DocumentError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw DocumentError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace leaky
