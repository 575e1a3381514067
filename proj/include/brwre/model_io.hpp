#pragma once

#include <string>

#include "brwre/model.hpp"

namespace brwre {

/// Parses the JSON model description format:
///   {"dimension": d,
///    "steps": [[..], ..],
///    "offspring_vectors": [{"step_index": count, ..}, ..],
///    "site_laws": [{"vector_index": "p/q", ..}, ..],
///    "Q": [{"law_index": i, "weight": "p/q"}, ..]}
/// Probabilities and weights are exact rationals written as strings.
RawModel parse_model_json(const std::string& text);

/// Serializes a validated law back to the same format. Vectors and laws are
/// deduplicated so that emit -> validate round-trips to an identical law.
std::string model_to_json(const EnvironmentLaw& law);

EnvironmentLaw load_model_file(const std::string& path);

} // namespace brwre
