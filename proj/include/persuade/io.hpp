#pragma once

// JSON encoding of instances, policies, and reduction artifacts. Numbers
// are read as JSON numbers, decimal strings, or exact "p/q" strings.

#include <string>

#include <json.hpp>

#include "persuade/hardness.hpp"
#include "persuade/model.hpp"
#include "persuade/policy.hpp"

namespace persuade {

using Json = nlohmann::json;

struct ParseError : Error {
    using Error::Error;
};

double number_from_json(const Json& j);

Json to_json(const Instance& instance);
Instance instance_from_json(const Json& j);

Json to_json(const PartitionalPolicy& policy);
PartitionalPolicy partitional_from_json(const Json& j);

Json to_json(const BiPoolingPolicy& policy);
/// Structural decoding only; validate against a prior separately.
BiPoolingPolicy bipooling_from_json(const Json& j);

/// Exact fractions throughout; the instance is embedded with double spikes.
Json to_json(const ReductionArtifacts& artifacts);
/// Rebuilds the artifacts from "c" and checks any stored X against them.
ReductionArtifacts artifacts_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace persuade
