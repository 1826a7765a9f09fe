#pragma once

#include "helicoid/asymptotics.hpp"
#include "helicoid/curvature.hpp"
#include "helicoid/meshcheck.hpp"
#include "helicoid/msolver.hpp"
#include "helicoid/weierstrass.hpp"

#include <json.hpp>

#include <string>

namespace helicoid {

using Json = nlohmann::ordered_json;

// Rounds to `digits` significant digits so reports do not depend on the last
// bits of a floating-point result. Non-finite values map to null.
Json fixed(double x, int digits = 12);

Json to_json(const SolveReport& r);
Json to_json(const DecayFit& f, bool pass);
Json to_json(const DecaySequenceReport& r);
Json to_json(const BarrierCheck& c);
Json to_json(const CurvatureReport& r);
Json to_json(const ArcMarginRow& row);
Json to_json(const Topology& t);
Json to_json(const LevelPolyline& p);  // endpoints and point count, not the geometry
Json to_json(const SymmetryReport& s);
Json to_json(const Registration& r);
Json residue_json(Complex residue, const PoleOrder& order);

// {"payload": ..., "metadata": {...}}. The payload is the comparison object;
// the metadata block carries the timestamp and anything run-dependent.
Json wrap_report(Json payload, Json metadata = Json::object());

// Adds "generated_at" (UTC, ISO 8601) and "tool" to a metadata object.
Json stamped_metadata(Json metadata = Json::object());

// Two-space indented dump with a trailing newline. Throws Error when the
// file cannot be written.
void write_json(const std::string& path, const Json& j);

}  // namespace helicoid
