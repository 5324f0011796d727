#pragma once

#include <string>

#include <json.hpp>

#include "mcf/geometry.hpp"

namespace mcf {

// Field CSV: header `x,y,u`, float64 with 17 significant digits, one node
// per row in row-major order (t-rows outer, s-columns inner).
void write_field_csv(const ScalarField& u, const std::string& path);

// Rebuilds the field from CSV; grid shape and the sheared chart are inferred
// from the node positions (rows share y; column spacing gives the shear).
ScalarField read_field_csv(const std::string& path);

// Report JSON skeleton: {"schema_version": 1, "command": cmd}.
nlohmann::json make_report(const std::string& cmd);

// Deterministic dump: sorted keys, 2-space indent, trailing newline.
void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace mcf
