#pragma once

#include <nlohmann/json.hpp>

#include "grhs/candidate.hpp"
#include "grhs/constructor.hpp"
#include "grhs/geodesics.hpp"
#include "grhs/profile.hpp"
#include "grhs/soliton.hpp"

namespace grhs {

using Json = nlohmann::json;

Json interval_to_json(const Interval& d);
Interval interval_from_json(const Json& j);

/// profile-v1: {"schema", "domain", "expr"} with expression nodes
/// {"op", "args", "const"}. Quadrature and ODE leaves carry their defining
/// data and "exact": false; ODE leaves re-integrate on load.
Json profile_to_json(const Profile& p);
Profile profile_from_json(const Json& j);

/// candidate-v1.
Json candidate_to_json(const WarpedCandidate& c);
WarpedCandidate candidate_from_json(const Json& j);

/// caseparams-v1.
Json case_params_to_json(const CaseParams& p);
CaseParams case_params_from_json(const Json& j);

/// residual-report-v1.
Json report_to_json(const ResidualReport& r);

/// probe-summary-v1.
Json probe_to_json(const ProbeSummary& s);

/// Finite doubles as numbers, anything else as null.
Json number_or_null(double v);

}  // namespace grhs
