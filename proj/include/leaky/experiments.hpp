#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "leaky/geometry.hpp"

namespace leaky {

struct ExperimentOptions {
    double tol = 1e-9;
    double density = 16.0;   // bs_core mesh density
    int threads = 1;
    std::uint64_t seed = 20240611;
    int samples = 20;        // random loops / polygons per family
};

// A reference value and where it comes from: "closed-form", "theorem", "oracle" or "prediction".
struct ReferenceValue {
    std::string name;
    nlohmann::json value;
    std::string provenance;
};

struct ExperimentReport {
    std::string id;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json computed = nlohmann::json::object();
    std::vector<ReferenceValue> references;
    std::string criterion;  // the pass condition in words
    bool passed = false;
    double runtime_seconds = 0.0;

    nlohmann::json to_json() const;
};

const std::vector<std::string>& anchor_ids();

// Throws std::invalid_argument for an unknown id.
ExperimentReport run_anchor(const std::string& id, const ExperimentOptions& options = {});

// Writes <dir>/<id>.json, creating the directory; returns the file path.
std::string write_report(const ExperimentReport& report, const std::string& dir);

// Closed loop of the given length from a unit circle plus random harmonics of orders 2..5,
// coefficients uniform in +-amplitude / order^2; self-intersecting draws are rejected.
ArcCurve random_loop(std::mt19937_64& rng, double length, double amplitude = 0.2);

}  // namespace leaky
