#pragma once

// JSON form of operators and SEP* certificates.
//
//   operator:    {"dims": [d1, d2], "entries": [[[re, im], ...], ...]}   (row-major)
//   certificate: {"label": "...", "target": <operator>,
//                 "parts": [{"kind": "psd" | "ppt_source", "operator": <operator>}, ...]}
//
// Doubles are written with round-trip precision, so load(dump(x)) == x.

#include "json.hpp"
#include "nlwe/sepcert.hpp"

namespace nlwe {

nlohmann::json operator_to_json(const HermitianOperator& a);
HermitianOperator operator_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const SepStarCertificate& c);
SepStarCertificate certificate_from_json(const nlohmann::json& j);

}  // namespace nlwe
