#pragma once

#include "conelab/body.hpp"
#include "conelab/cone.hpp"
#include "conelab/duality.hpp"
#include "conelab/properties.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace conelab {

using Json = nlohmann::json;

inline Json to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

/// Row-major list of rows.
inline Json matrix_to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(to_json(Vec(m.row(i).transpose())));
  return out;
}

inline Json to_json(const std::vector<Vec>& vs) {
  Json out = Json::array();
  for (const Vec& v : vs) out.push_back(to_json(v));
  return out;
}

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::IoError, std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace detail

inline Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::IoError, "expected a number array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::IoError, "expected a number");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

inline std::vector<Vec> vecs_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::IoError, "expected an array of vectors");
  std::vector<Vec> out;
  for (const Json& row : j) out.push_back(vec_from_json(row));
  return out;
}

inline Mat matrix_from_json(const Json& j, Eigen::Index cols_if_empty = 0) {
  const std::vector<Vec> rows = vecs_from_json(j);
  if (rows.empty()) return Mat(0, cols_if_empty);
  Mat m(static_cast<Eigen::Index>(rows.size()), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols()) throw Error(ErrorCode::IoError, "ragged matrix");
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return m;
}

inline Json to_json(const ConeRep& C) {
  Json j;
  j["id"] = C.id;
  j["dim"] = C.dim();
  if (C.is_polyhedral()) {
    j["type"] = "polyhedral";
    j["generators"] = to_json(C.polyhedral().generators);
    j["halfspaces"] = to_json(C.polyhedral().halfspaces);
  } else {
    const EllipsoidalCone& E = C.ellipsoidal();
    j["type"] = "ellipsoidal";
    j["u"] = to_json(E.u());
    j["center"] = to_json(E.center());
    j["basis"] = matrix_to_json(E.basis());
    j["form"] = matrix_to_json(E.form());
  }
  if (C.provenance.kind != "manual")
    j["provenance"] = {{"kind", C.provenance.kind}, {"seed", C.provenance.seed}, {"delta", C.provenance.delta}};
  return j;
}

inline ConeRep cone_from_json(const Json& j) {
  ConeRep C;
  C.id = j.value("id", std::string("cone"));
  const auto n = detail::field(j, "dim").get<Eigen::Index>();
  const std::string type = detail::field(j, "type").get<std::string>();
  if (type == "polyhedral") {
    const std::vector<Vec> gens = j.contains("generators") ? vecs_from_json(j["generators"]) : std::vector<Vec>{};
    const std::vector<Vec> halfs = j.contains("halfspaces") ? vecs_from_json(j["halfspaces"]) : std::vector<Vec>{};
    for (const Vec& v : gens) require_dim(v, n, "cone generators");
    for (const Vec& v : halfs) require_dim(v, n, "cone halfspaces");
    if (!gens.empty() && !halfs.empty()) C.shape = PolyhedralCone{n, gens, halfs};
    else if (!gens.empty()) C.shape = polyhedral_from_generators(gens);
    else if (!halfs.empty()) C.shape = polyhedral_from_halfspaces(halfs);
    else throw Error(ErrorCode::IoError, "polyhedral cone needs generators or halfspaces");
  } else if (type == "ellipsoidal") {
    Vec u = vec_from_json(detail::field(j, "u"));
    Vec center = vec_from_json(detail::field(j, "center"));
    Mat basis = matrix_from_json(detail::field(j, "basis"));
    Mat form = matrix_from_json(detail::field(j, "form"));
    require_dim(u, n, "cone u");
    C.shape = EllipsoidalCone(std::move(u), std::move(center), std::move(basis), std::move(form));
  } else {
    throw Error(ErrorCode::IoError, "unknown cone type '" + type + "'");
  }
  if (j.contains("provenance")) {
    const Json& p = j["provenance"];
    C.provenance = {p.value("kind", std::string("manual")), p.value("seed", std::uint64_t{0}), p.value("delta", 0.0)};
  }
  return C;
}

inline Json to_json(const AffineSubspace& A) {
  Json dirs = Json::array();
  for (Eigen::Index i = 0; i < A.directions.dim(); ++i) dirs.push_back(to_json(Vec(A.directions.basis.col(i))));
  return {{"base", to_json(A.base)}, {"directions", dirs}};
}

inline AffineSubspace affine_from_json(const Json& j) {
  const Vec base = vec_from_json(detail::field(j, "base"));
  const std::vector<Vec> dirs = vecs_from_json(detail::field(j, "directions"));
  Mat D(base.size(), static_cast<Eigen::Index>(dirs.size()));
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    require_dim(dirs[i], base.size(), "ambient directions");
    D.col(static_cast<Eigen::Index>(i)) = dirs[i];
  }
  return make_affine(base, orthonormal_span(D));
}

inline Json to_json(const ConvexBody& body) {
  Json j;
  j["ambient"] = to_json(body.ambient);
  if (body.is_polytope()) {
    j["kind"] = "polytope";
    j["vertices"] = to_json(body.polytope().vertices);
  } else {
    const Ellipsoid& e = body.ellipsoid();
    j["kind"] = "ellipsoid";
    j["center"] = to_json(e.center);
    j["basis"] = matrix_to_json(e.basis);
    j["form"] = matrix_to_json(e.form);
  }
  return j;
}

inline ConvexBody body_from_json(const Json& j) {
  const std::string kind = detail::field(j, "kind").get<std::string>();
  if (kind == "polytope") {
    std::vector<Vec> verts = vecs_from_json(detail::field(j, "vertices"));
    if (verts.empty()) throw Error(ErrorCode::IoError, "polytope without vertices");
    AffineSubspace ambient = j.contains("ambient") ? affine_from_json(j["ambient"]) : affine_span(verts);
    return make_polytope(std::move(verts), std::move(ambient));
  }
  if (kind == "ellipsoid") {
    Vec center = vec_from_json(detail::field(j, "center"));
    Mat form = matrix_from_json(detail::field(j, "form"));
    Mat basis = matrix_from_json(detail::field(j, "basis"), form.rows());
    if (basis.rows() != center.size() || basis.cols() != form.rows() || form.rows() != form.cols())
      throw Error(ErrorCode::IoError, "ellipsoid shapes do not match");
    ConvexBody body = make_ellipsoid(std::move(center), std::move(basis), std::move(form));
    if (j.contains("ambient")) body.ambient = affine_from_json(j["ambient"]);
    return body;
  }
  throw Error(ErrorCode::IoError, "unknown body kind '" + kind + "'");
}

inline Json to_json(const DualityCertificate& c) {
  return {{"phi", to_json(c.phi)}, {"r_star", c.r_star}, {"eps_star", c.eps_star}, {"product_defect", c.product_defect}};
}

inline Json to_json(const PropertyReport& r, bool include_runtime = true, std::size_t max_witnesses = 64) {
  Json witnesses = Json::array();
  for (std::size_t i = 0; i < r.witnesses.size() && i < max_witnesses; ++i) {
    const Witness& w = r.witnesses[i];
    witnesses.push_back({{"what", w.what}, {"point", to_json(w.point)}, {"value", w.value}});
  }
  Json tol = Json::object();
  for (const auto& [k, v] : r.tolerances) tol[k] = v;
  return {{"cone_id", r.cone_id},
          {"property", std::string(to_string(r.property))},
          {"verdict", std::string(to_string(r.verdict))},
          {"samples", r.samples},
          {"seed", r.seed},
          {"tolerances", tol},
          {"witnesses", witnesses},
          {"runtime_ms", include_runtime ? r.runtime_ms : 0}};
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::IoError, "'" + path + "': " + e.what());
  }
}

/// Writes j with sorted keys and a trailing newline.
inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

}  // namespace conelab
