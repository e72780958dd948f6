#pragma once

#include <string>

#include <json.hpp>

#include "ultra/embed.hpp"
#include "ultra/extend.hpp"
#include "ultra/telescope.hpp"

namespace ultra {

using Json = nlohmann::ordered_json;

// All numeric payloads travel as decimal-free rational strings ("p" or
// "p/q"); parsing and emission round-trip bit-exactly.

Json range_set_to_json(const RangeSet& s);
RangeSet range_set_from_json(const Json& j);

Json space_to_json(const FiniteUltrametricSpace& x);
/// Raw matrix + range set; runs the full validator.
FiniteUltrametricSpace space_from_json(const Json& j);
/// As above but with the range set supplied by the caller (for payloads
/// without a "range_set" member).
FiniteUltrametricSpace space_from_json(const Json& j, const RangeSet& range);

/// Square matrix with a header row of labels; the range set comes from the
/// caller.
FiniteUltrametricSpace space_from_csv(const std::string& text, const RangeSet& range);

/// Unvalidated payloads, for callers that want to run (and report on) the
/// validator themselves.
DistanceMatrix raw_matrix_from_json(const Json& j);
DistanceMatrix raw_matrix_from_csv(const std::string& text);

Json vector_to_json(const UltraVector& v);
UltraVector vector_from_json(const Json& j);

Json problem_to_json(const InterpolationProblem& p);
InterpolationProblem problem_from_json(const Json& j);

Json telescope_to_json(const TelescopeSpace& t);
TelescopeSpace telescope_from_json(const Json& j);

}  // namespace ultra
