#include "cstab/jsonio.hpp"

#include <fstream>
#include <sstream>

namespace cstab {

ExchangeMatrix quiverFromJson(const json& j) {
  ExchangeMatrix B;
  B.n = j.at("n").get<int>();
  B.v = IMat(B.n, B.n);
  const auto& rows = j.at("v");
  for (int i = 0; i < B.n; ++i)
    for (int k = 0; k < B.n; ++k) B.v(i, k) = rows.at(i).at(k).get<long long>();
  if (!B.skewSymmetric()) throw std::invalid_argument("quiver JSON: v is not skew-symmetric");
  return B;
}

json quiverToJson(const ExchangeMatrix& B) {
  json rows = json::array();
  for (int i = 0; i < B.n; ++i) {
    json row = json::array();
    for (int k = 0; k < B.n; ++k) row.push_back(B.v(i, k));
    rows.push_back(row);
  }
  return json{{"n", B.n}, {"v", rows}};
}

ExchangeMatrix loadQuiverArg(const std::string& arg) {
  try {
    return namedQuiver(arg);
  } catch (const std::invalid_argument&) {
  }
  std::ifstream in(arg);
  if (!in) throw std::invalid_argument("cannot open quiver file: " + arg);
  json j;
  in >> j;
  return quiverFromJson(j);
}

namespace {

json imatToJson(const IMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

json graphToJson(const ExchangeGraph& E) {
  json vertices = json::array();
  for (int s = 0; s < E.vertexCount(); ++s)
    vertices.push_back(json{{"id", s}, {"B", imatToJson(E.seeds[s].B)}, {"G", imatToJson(E.seeds[s].G)}});
  json edges = json::array();
  for (size_t e = 0; e < E.edges.size(); e += 2) {
    const GraphEdge& ed = E.edges[e];
    edges.push_back(json{{"src", ed.src}, {"dst", ed.dst}, {"edge", ed.k}, {"rho", ed.rho}});
  }
  return json{{"n", E.n}, {"base", E.base}, {"vertices", vertices}, {"edges", edges}};
}

std::string graphToDot(const ExchangeGraph& E) {
  std::ostringstream os;
  os << "graph exchange {\n";
  for (int s = 0; s < E.vertexCount(); ++s) os << "  v" << s << ";\n";
  for (size_t e = 0; e < E.edges.size(); e += 2) {
    const GraphEdge& ed = E.edges[e];
    os << "  v" << ed.src << " -- v" << ed.dst << " [label=\"" << ed.k << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

json fanToJson(const Fan& fan) {
  json cones = json::array();
  for (const auto& c : fan.maximal)
    cones.push_back(json{{"originVertex", c.originVertex}, {"chart", c.chart}, {"gens", imatToJson(c.gens)}});
  return json{{"chart", fan.chart}, {"dim", fan.dim}, {"cones", cones}};
}

json quotientFanToJson(const QuotientFan& qf) {
  json proj = json::array();
  for (int i = 0; i < qf.projection.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < qf.projection.cols; ++j) row.push_back(ratToString(qf.projection(i, j)));
    proj.push_back(row);
  }
  json cones = json::array();
  for (size_t i = 0; i < qf.cones.size(); ++i)
    cones.push_back(json{{"originVertex", qf.originVertices[i]}, {"gens", imatToJson(qf.cones[i].gens)}});
  return json{{"projection", proj}, {"cones", cones}};
}

namespace {

Rat ratFromJson(const json& j) {
  if (j.is_string()) return parseRat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  throw std::invalid_argument("expected rational string or integer, got: " + j.dump());
}

}  // namespace

RatVec ratVecFromJson(const json& j) {
  RatVec out;
  for (const auto& e : j) out.push_back(ratFromJson(e));
  return out;
}

json ratVecToJson(const RatVec& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(ratToString(r));
  return out;
}

QCVec qcVecFromJson(const json& j) {
  QCVec out;
  for (const auto& e : j) {
    if (e.is_array()) {
      if (e.size() != 2) throw std::invalid_argument("complex entry needs [re, im]");
      out.push_back(QC(ratFromJson(e.at(0)), ratFromJson(e.at(1))));
    } else {
      out.push_back(QC(ratFromJson(e)));
    }
  }
  return out;
}

json qcVecToJson(const QCVec& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(json::array({ratToString(z.re), ratToString(z.im)}));
  return out;
}

DeformSpec deformSpecFromJson(const json& j) {
  DeformSpec spec;
  spec.t0 = ratFromJson(j.at("t0"));
  if (j.contains("grid") && j.at("grid").is_array()) {
    for (const auto& t : j.at("grid")) spec.grid.push_back(ratFromJson(t));
  } else {
    int points = j.contains("grid") ? j.at("grid").at("points").get<int>() : 101;
    spec.grid = uniformGrid(points);
  }
  int dim = j.at("dim").get<int>();
  for (const auto& fj : j.at("families")) {
    const auto& phi = fj.at("phi");
    std::string kind = phi.at("kind").get<std::string>();
    if (kind == "rotation") {
      for (auto& f : rotatingRaysFamilies(spec.t0)) spec.families.push_back(std::move(f));
    } else if (kind == "tangent") {
      ExchangeMatrix B = loadQuiverArg(phi.at("quiver").get<std::string>());
      ExchangeGraph E = enumerateExchangeGraph(B);
      PositivePoint x{0, ratVecFromJson(phi.at("at"))};
      IVec m(B.n, 1);
      if (phi.contains("m"))
        for (int i = 0; i < B.n; ++i) m[i] = phi.at("m").at(i).get<long long>();
      for (auto& f : tangentJacobianFamilies(E, x, m)) spec.families.push_back(std::move(f));
    } else if (kind == "samples") {
      CCFamily f;
      f.name = fj.value("name", "family" + std::to_string(spec.families.size()));
      const auto& gens = fj.at("gens");
      int k = static_cast<int>(gens.size());
      f.base.gens = QMat(dim, k);
      for (int c = 0; c < k; ++c) {
        RatVec col = ratVecFromJson(gens.at(c));
        for (int r = 0; r < dim; ++r) f.base.gens(r, c) = col[r];
      }
      std::vector<Rat> ts;
      std::vector<QMat> mats;
      for (const auto& sj : phi.at("samples")) {
        ts.push_back(ratFromJson(sj.at("t")));
        QMat m(dim, dim);
        for (int r = 0; r < dim; ++r) {
          RatVec row = ratVecFromJson(sj.at("matrix").at(r));
          for (int c = 0; c < dim; ++c) m(r, c) = row[c];
        }
        mats.push_back(std::move(m));
      }
      if (ts.size() < 2) throw std::invalid_argument("samples family needs >= 2 samples");
      f.phi.exact = [ts, mats, dim](const Rat& t) -> std::optional<QMat> {
        // Piecewise-linear interpolation in t.
        size_t hi = 1;
        while (hi + 1 < ts.size() && ts[hi] < t) ++hi;
        const Rat& t0 = ts[hi - 1];
        const Rat& t1 = ts[hi];
        Rat lam = t1 == t0 ? Rat(0) : (t - t0) / (t1 - t0);
        QMat out(dim, dim);
        for (int r = 0; r < dim; ++r)
          for (int c = 0; c < dim; ++c)
            out(r, c) = mats[hi - 1](r, c) * (Rat(1) - lam) + mats[hi](r, c) * lam;
        return out;
      };
      auto exact = f.phi.exact;
      f.phi.approx = [exact, dim](double t) {
        auto m = exact(Rat(t));
        DMat out(dim, dim);
        for (int r = 0; r < dim; ++r)
          for (int c = 0; c < dim; ++c) out(r, c) = toDouble((*m)(r, c));
        return out;
      };
      spec.families.push_back(std::move(f));
    } else {
      throw std::invalid_argument("unknown phi kind: " + kind);
    }
  }
  return spec;
}

json cellToJson(const CellId& cell) {
  return json{{"sigma", cell.sigma}, {"tau", cell.tauMask}};
}

json complexVecToJson(const std::vector<std::complex<double>>& v) {
  json out = json::array();
  for (const auto& z : v) out.push_back(json::array({z.real(), z.imag()}));
  return out;
}

}  // namespace cstab
