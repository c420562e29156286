#pragma once

#include <json.hpp>

#include "wishmom/gpi.hpp"
#include "wishmom/matrix.hpp"
#include "wishmom/mc.hpp"
#include "wishmom/wishart.hpp"

namespace wishmom {

using nlohmann::json;

// Matrices serialize as {"dim": n, "rows": [[...], ...]}, row-major doubles.
json matrix_to_json(const SymMatrix& m);
SymMatrix sym_from_json(const json& j);
SpdMatrix spd_from_json(const json& j);

// Model descriptor: {"alpha": a, "sigma": <matrix>, "p1": n}.
json model_to_json(const WishartModel& m);
WishartModel model_from_json(const json& j);

// Query: {"nu0": x, "nu1": x, "nu2": x, "tilt": <matrix or null>}.
json query_to_json(const MomentQuery& q);
MomentQuery query_from_json(const json& j);

// Estimate: {"mean":.., "se":.., "n":.., "seed":..}.
json estimate_to_json(const McEstimate& e);

json gpi_report_to_json(const GpiReport& r);

}  // namespace wishmom
