#pragma once

#include <string>
#include <vector>

#include "brwre/model.hpp"

namespace brwre {

/// Parameters of the built-in model families. Each preset validates under
/// the model module and exports through the JSON format unchanged.
struct PresetParams {
    Rat alpha{1, 2};  // exx-q1, exx-q2, d1-shape, flat-edge
    Rat a{1, 2};      // exx-q2
    Rat p{1, 100};    // qdecay, infexp
    Rat alpha1{9, 20}; // infexp
    Rat alpha2{9, 20}; // infexp
    int nmin = 6;     // driftmix
    int nmax = 20;    // driftmix
};

std::vector<std::string> preset_names();
std::string preset_description(const std::string& name);

/// Builds a named preset; throws std::invalid_argument for unknown names or
/// out-of-range parameters.
EnvironmentLaw make_preset(const std::string& name, const PresetParams& params = {});

} // namespace brwre
