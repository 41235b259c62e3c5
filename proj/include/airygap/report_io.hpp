#pragma once

#include <string>

#include "json.hpp"

#include "airygap/asympt.hpp"
#include "airygap/fredholm.hpp"
#include "airygap/verify.hpp"

namespace airygap::io {

using nlohmann::json;

// Non-finite doubles are written as null and read back as NaN.
json to_json(const verify::VerificationReport& rep);
verify::VerificationReport report_from_json(const json& j);

/// Header r,logF_num,err_estimate,predicted_no_C,residual; %.17g; LF endings.
std::string to_csv(const verify::VerificationReport& rep);

json to_json(const SurfaceData& sd);
json to_json(const fredholm::NystromResult& res);
json to_json(const asympt::ExpansionTerms& t);

}  // namespace airygap::io
