#include "nlwe/certificate_json.hpp"

#include "nlwe/errors.hpp"

namespace nlwe {

using nlohmann::json;

json operator_to_json(const HermitianOperator& a) {
  json rows = json::array();
  for (std::size_t r = 0; r < a.dim(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < a.dim(); ++c) row.push_back({a(r, c).real(), a(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dims", {a.dims().first, a.dims().second}}, {"entries", std::move(rows)}};
}

HermitianOperator operator_from_json(const json& j) {
  const Dims dims{j.at("dims").at(0).get<std::size_t>(), j.at("dims").at(1).get<std::size_t>()};
  const auto& rows = j.at("entries");
  const std::size_t n = rows.size();
  if (n != dims.total()) throw DimensionError("operator_from_json: row count != d1 * d2");
  ComplexMatrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) throw DimensionError("operator_from_json: ragged rows");
    for (std::size_t c = 0; c < n; ++c) {
      m(r, c) = Complex(rows[r][c].at(0).get<double>(), rows[r][c].at(1).get<double>());
    }
  }
  return HermitianOperator(std::move(m), dims);
}

json certificate_to_json(const SepStarCertificate& c) {
  json parts = json::array();
  for (const auto& p : c.psd_parts) {
    parts.push_back({{"kind", "psd"}, {"operator", operator_to_json(p)}});
  }
  for (const auto& p : c.ppt_source_parts) {
    parts.push_back({{"kind", "ppt_source"}, {"operator", operator_to_json(p)}});
  }
  return {{"label", c.label}, {"target", operator_to_json(c.target)}, {"parts", std::move(parts)}};
}

SepStarCertificate certificate_from_json(const json& j) {
  SepStarCertificate c{j.at("label").get<std::string>(), operator_from_json(j.at("target")), {},
                       {}};
  for (const auto& part : j.at("parts")) {
    const auto kind = part.at("kind").get<std::string>();
    if (kind == "psd") {
      c.psd_parts.push_back(operator_from_json(part.at("operator")));
    } else if (kind == "ppt_source") {
      c.ppt_source_parts.push_back(operator_from_json(part.at("operator")));
    } else {
      throw ContractError("certificate_from_json: unknown part kind '" + kind + "'");
    }
  }
  return c;
}

}  // namespace nlwe
