#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "leaky/geometry.hpp"
#include "leaky/line_defect.hpp"
#include "leaky/spectral.hpp"

namespace leaky {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Malformed input document; the message names the offending field.
class DocumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct GraphDocument {
    LeakyGraph graph{1.0};
    std::optional<StarConfig> star;  // set when the document describes a star
};

// `truncation_override` > 0 replaces the document's truncation for rays and stars.
GraphDocument parse_graph_document(const Json& doc, double truncation_override = 0.0);
PointArray parse_point_document(const Json& doc);
LineDefectConfig parse_line_defect_document(const Json& doc);

Json spectral_to_json(const SpectralResult& result);
SpectralResult spectral_from_json(const Json& doc);

// One state per line: index kappa energy residual.
std::string spectral_rows(const SpectralResult& result);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace leaky
