#pragma once

#include <string>

#include <json.hpp>

#include "sanlr/san_model.hpp"

namespace sanlr {

//
// Model files
//
//   {"kind": "mhn", "d": 3, "theta": [[...], [...], [...]], "x0": [0,0,0]}
//
//   {"kind": "san",
//    "sizes": [2, 3],
//    "transitions": [[[0,1]], [[0,1], [1,2]]],       // per automaton, 0-based states
//    "theta": {"1:0->1": [[1.0, 0.5], [2.0, 1.0, 1.0]]},  // "<automaton>:<from>-><to>"
//    "x0": [0, 0]}
//
// Automaton indices in theta keys are 0-based. Transitions without a theta
// entry get all-ones parameter vectors. "x0" is optional (all zeros).
// MHN parameters can also come as CSV: d rows of d positive reals.
//

SanModel model_from_json(const nlohmann::json& j);
SanModel parse_model_json(const std::string& text);
nlohmann::json model_to_json(const SanModel& m);

MhnParams parse_mhn_csv(const std::string& text);

// Dispatches on the file extension: ".csv" is read as MHN parameters,
// anything else as JSON.
SanModel load_model_file(const std::string& path);

}  // namespace sanlr
