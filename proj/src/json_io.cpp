#include "wishmom/json_io.hpp"

namespace wishmom {

json matrix_to_json(const SymMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return json{{"dim", m.dim()}, {"rows", std::move(rows)}};
}

SymMatrix sym_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("rows"))
    throw DomainError("matrix json must have \"dim\" and \"rows\"");
  const int dim = j.at("dim").get<int>();
  const json& rows = j.at("rows");
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
    throw DomainError("matrix json: row count does not match dim");
  std::vector<double> e;
  e.reserve(static_cast<size_t>(dim) * dim);
  for (const json& row : rows) {
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw DomainError("matrix json: column count does not match dim");
    for (const json& v : row) e.push_back(v.get<double>());
  }
  return SymMatrix(dim, std::move(e));
}

SpdMatrix spd_from_json(const json& j) { return SpdMatrix(sym_from_json(j)); }

json model_to_json(const WishartModel& m) {
  return json{{"alpha", m.alpha}, {"sigma", matrix_to_json(m.sigma)}, {"p1", m.split.p1}};
}

WishartModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("alpha") || !j.contains("sigma") || !j.contains("p1"))
    throw DomainError("model json must have \"alpha\", \"sigma\", \"p1\"");
  return WishartModel(j.at("alpha").get<double>(), spd_from_json(j.at("sigma")),
                      j.at("p1").get<int>());
}

json query_to_json(const MomentQuery& q) {
  json out{{"nu0", q.nu0}, {"nu1", q.nu1}, {"nu2", q.nu2}};
  out["tilt"] = q.tilt ? matrix_to_json(*q.tilt) : json(nullptr);
  return out;
}

MomentQuery query_from_json(const json& j) {
  MomentQuery q;
  q.nu0 = j.value("nu0", 0.0);
  q.nu1 = j.value("nu1", 0.0);
  q.nu2 = j.value("nu2", 0.0);
  if (j.contains("tilt") && !j.at("tilt").is_null()) q.tilt = sym_from_json(j.at("tilt"));
  return q;
}

json estimate_to_json(const McEstimate& e) {
  return json{{"mean", e.mean}, {"se", e.std_error}, {"n", e.n}, {"seed", e.seed}};
}

json gpi_report_to_json(const GpiReport& r) {
  return json{{"lhs", r.lhs},
              {"middle", r.middle},
              {"slack_upper", r.slack_upper},
              {"slack_lower", r.slack_lower}};
}

}  // namespace wishmom
