#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "leaky/documents.hpp"
#include "leaky/experiments.hpp"

using namespace leaky;

TEST_CASE("anchor registry") {
    CHECK(anchor_ids().size() == 14);
    CHECK_THROWS_AS(run_anchor("no-such-anchor"), std::invalid_argument);
    ExperimentOptions bad;
    bad.samples = 0;
    CHECK_THROWS_AS(run_anchor("chord-p1-p2", bad), std::invalid_argument);
}

TEST_CASE("random loops are seeded and simple") {
    std::mt19937_64 a(7), b(7);
    const ArcCurve la = random_loop(a, 3.0);
    const ArcCurve lb = random_loop(b, 3.0);
    CHECK(la.closed());
    CHECK(la.length() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK_FALSE(la.self_intersects());
    for (double s : {0.0, 0.7, 2.9}) CHECK((la.point(s) - lb.point(s)).norm() == 0.0);
}

TEST_CASE("report document") {
    ExperimentOptions o;
    o.samples = 3;
    const ExperimentReport r = run_anchor("chord-p1-p2", o);
    CHECK(r.id == "chord-p1-p2");
    CHECK(r.passed);
    CHECK(r.runtime_seconds > 0.0);
    for (const ReferenceValue& v : r.references) {
        const bool known = v.provenance == "closed-form" || v.provenance == "theorem" || v.provenance == "oracle" || v.provenance == "prediction";
        CHECK(known);
    }
    const Json doc = r.to_json();
    CHECK(doc["schema"] == kSchemaVersion);
    CHECK(doc["kind"] == "experiment");
    CHECK(doc["inputs"]["seed"] == o.seed);

    const auto dir = std::filesystem::temp_directory_path() / "leaky-report-test";
    const std::string path = write_report(r, dir.string());
    const Json back = read_json_file(path);
    CHECK(back["computed"] == doc["computed"]);
    std::filesystem::remove_all(dir);

    // deterministic under a fixed seed
    CHECK(run_anchor("chord-p1-p2", o).computed == r.computed);
}

TEST_CASE("fast anchors pass") {
    for (const char* id : {"polymer3-threshold", "approx-convergence", "flux-nonconstancy"}) {
        const ExperimentReport r = run_anchor(id);
        INFO(r.to_json().dump());
        CHECK(r.passed);
    }
}
