#pragma once

// JSON encodings. Rationals are strings "p/q"; agent and room indices are
// 1-based on the wire and 0-based in memory.

#include <nlohmann/json.hpp>

#include "fairdiv/geometry.hpp"
#include "fairdiv/oracle.hpp"
#include "fairdiv/preferences.hpp"
#include "fairdiv/solvers.hpp"
#include "fairdiv/verifier.hpp"

namespace fairdiv {

using Json = nlohmann::ordered_json;

Json rational_to_json(const Rational& value);
/// Accepts a string ("1/3", "0.25") or a JSON integer.
Rational rational_from_json(const Json& value);

Json point_to_json(const BarycentricPoint& point);
BarycentricPoint point_from_json(const Json& value);

Json grid_point_to_json(const GridPoint& point);
GridPoint grid_point_from_json(const Json& value);

Json profile_to_json(const PreferenceProfile& profile);
/// Validates the covering unless `validate` is false.
PreferenceProfile profile_from_json(const Json& value, bool validate = true);

Json transcript_to_json(const QueryTranscript& transcript);

Json certificate_to_json(const FairDivisionCertificate& certificate);
FairDivisionCertificate certificate_from_json(const Json& value);

Json verdict_to_json(const Verdict& verdict);
Json covering_report_to_json(const CoveringReport& report);

/// 1-based list from a 0-based permutation, and back (validated).
Json sigma_to_json(const std::vector<std::size_t>& sigma);
std::vector<std::size_t> sigma_from_json(const Json& value);

}  // namespace fairdiv
