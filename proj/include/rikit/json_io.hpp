#ifndef RIKIT_JSON_IO_HPP
#define RIKIT_JSON_IO_HPP

#include <string>

#include "json.hpp"
#include "rikit/operators.hpp"
#include "rikit/spaces.hpp"
#include "rikit/step_function.hpp"
#include "rikit/weight.hpp"

namespace rikit::io {

using json = nlohmann::json;

// Unknown keys are rejected everywhere (strict schema). Parse errors carry a
// JSON-path-style location.

json to_json(const StepFunction& f);
StepFunction step_from_json(const json& j);  // array of cells, or {L, cells}

json to_json(const Weight& w);  // tabulated/powerlog/product round-trip
Weight weight_from_json(const json& j, const json* defs = nullptr);

Bijection bijection_from_json(const json& j, const json* defs = nullptr);

SpaceSpec space_from_json(const json& j, const json* defs = nullptr);

/// {kind: R|H, u, v, nu, L}; T is handled by the CLI with {kind: T, phi, L}
OperatorSpec operator_from_json(const json& j, const json* defs = nullptr);

double length_from_json(const json& j);  // number or "inf"
json length_to_json(double L);

json parse_file(const std::string& path);       // ParseError with diagnostics
void write_file(const std::string& path, const json& j);

}  // namespace rikit::io

#endif
