// JSON (de)serialization for the CLI surfaces: quivers, exchange graphs,
// fans, deformation specs, and point parsing ("p/q" rational strings).
#pragma once

#include <json.hpp>

#include "cstab/deform.hpp"
#include "cstab/stability.hpp"

namespace cstab {

using nlohmann::json;

ExchangeMatrix quiverFromJson(const json& j);
json quiverToJson(const ExchangeMatrix& B);
ExchangeMatrix loadQuiverArg(const std::string& arg);  // named quiver or file path

json graphToJson(const ExchangeGraph& E);
std::string graphToDot(const ExchangeGraph& E);

json fanToJson(const Fan& fan);
json quotientFanToJson(const QuotientFan& qf);

RatVec ratVecFromJson(const json& j);            // array of "p/q" strings or numbers
json ratVecToJson(const RatVec& v);
QCVec qcVecFromJson(const json& j);              // entries: "p/q" or ["re","im"]
json qcVecToJson(const QCVec& v);

// Deformation spec: {"dim": d, "t0": "p/q", "grid": [..] or {"points": N},
// "families": [{"gens": [[..]], "phi": {"kind": "samples"|"rotation"|"tangent", ...}}]}.
struct DeformSpec {
  std::vector<CCFamily> families;
  Rat t0;
  std::vector<Rat> grid;
};
DeformSpec deformSpecFromJson(const json& j);

json cellToJson(const CellId& cell);
json complexVecToJson(const std::vector<std::complex<double>>& v);

}  // namespace cstab
