#pragma once

// JSON encoding of every value the command line exchanges: fields, additive
// subgroups, elements, matrices, forms, spaces (with optional named
// subspaces or a Coxeter graph), extension problems, and reports. Parsers
// validate shape and content, raising ValidationError with the offending
// key; every emitted document re-parses to an equal value.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "formkit/census.hpp"
#include "formkit/checks.hpp"
#include "formkit/witt.hpp"

namespace formkit {

using Json = nlohmann::ordered_json;

namespace detail {

inline const Json& member(const Json& j, const char* key) {
  if (!j.is_object())
    throw ValidationError(std::string("json: expected an object with \"") +
                          key + "\"");
  if (!j.contains(key))
    throw ValidationError(std::string("json: missing \"") + key + "\"");
  return j.at(key);
}

inline long int_value(const Json& j, const char* what) {
  if (!j.is_number_integer())
    throw ValidationError(std::string("json: ") + what +
                          " must be an integer");
  return j.get<long>();
}

inline std::string string_value(const Json& j, const char* what) {
  if (!j.is_string())
    throw ValidationError(std::string("json: ") + what + " must be a string");
  return j.get<std::string>();
}

inline Involution involution_from_token(const std::string& token) {
  if (token == "id") return Involution::Identity;
  if (token == "frobenius" || token == "frob") return Involution::Frobenius;
  throw ValidationError("json: involution must be \"id\" or \"frobenius\"");
}

}  // namespace detail

// ---- fields ----

inline Json field_to_json(const Field* f) {
  const FieldSpec& s = f->spec();
  Json j;
  switch (s.kind) {
    case FieldKind::Rationals:
      j["kind"] = "rationals";
      break;
    case FieldKind::Prime:
      j["kind"] = "prime";
      j["p"] = s.p;
      break;
    case FieldKind::Extension:
      j["kind"] = "extension";
      j["p"] = s.p;
      j["k"] = s.k;
      j["modulus"] = s.modulus;
      j["involution"] = s.sigma == Involution::Frobenius ? "frobenius" : "id";
      break;
  }
  return j;
}

/// Accepts the full field object or a shorthand token: "rationals", or "gfN"
/// with an optional "^frob" suffix selecting the Frobenius involution.
inline const Field* field_from_json(const Json& j) {
  if (j.is_string()) {
    std::string token = j.get<std::string>();
    if (token == "rationals") return Field::rationals();
    Involution sigma = Involution::Identity;
    if (token.size() > 5 && token.substr(token.size() - 5) == "^frob") {
      sigma = Involution::Frobenius;
      token = token.substr(0, token.size() - 5);
    }
    if (token.size() > 2 && token.substr(0, 2) == "gf") {
      long q = 0;
      for (char c : token.substr(2)) {
        if (c < '0' || c > '9') q = -1;
        if (q < 0) break;
        q = q * 10 + (c - '0');
      }
      if (q > 1) return Field::gf(q, sigma);
    }
    throw ValidationError("json: unknown field token \"" + j.get<std::string>() +
                          "\"");
  }
  std::string kind = detail::string_value(detail::member(j, "kind"), "kind");
  if (kind == "rationals") return Field::rationals();
  long p = detail::int_value(detail::member(j, "p"), "p");
  if (kind == "prime") {
    if (j.contains("involution") &&
        detail::involution_from_token(detail::string_value(
            j.at("involution"), "involution")) != Involution::Identity)
      throw ValidationError("json: a prime field admits only the identity "
                            "involution");
    return Field::prime(p);
  }
  if (kind == "extension") {
    int k = static_cast<int>(detail::int_value(detail::member(j, "k"), "k"));
    std::vector<long> modulus;
    if (j.contains("modulus")) {
      const Json& mj = j.at("modulus");
      if (!mj.is_array())
        throw ValidationError("json: modulus must be an array");
      for (const Json& c : mj)
        modulus.push_back(detail::int_value(c, "modulus coefficient"));
    } else {
      modulus = Field::default_modulus(p, k);
    }
    Involution sigma = Involution::Identity;
    if (j.contains("involution"))
      sigma = detail::involution_from_token(
          detail::string_value(j.at("involution"), "involution"));
    return Field::extension(p, k, std::move(modulus), sigma);
  }
  throw ValidationError("json: field kind must be \"prime\", \"extension\", "
                        "or \"rationals\"");
}

// ---- elements ----

inline Json elem_to_json(const Elem& a) {
  const Field* f = a.field();
  if (!f->finite()) {
    const Rat& r = a.rational();
    if (boost::multiprecision::denominator(r) == 1) {
      auto n = boost::multiprecision::numerator(r);
      if (n >= -(1LL << 53) && n <= (1LL << 53))
        return Json(n.convert_to<long long>());
    }
    return Json(r.str());
  }
  if (f->degree() == 1) return Json(f->coords(a)[0]);
  return Json(f->coords(a));
}

/// Integers embed through the prime subfield; arrays give modulus-basis
/// coordinates on an extension field; strings hold exact rationals "a/b".
inline Elem elem_from_json(const Json& j, const Field* f) {
  if (j.is_number_integer()) return f->from_int(j.get<long>());
  if (j.is_array()) {
    if (!f->finite())
      throw ValidationError("json: coordinate arrays need a finite field");
    std::vector<long> c;
    for (const Json& v : j) c.push_back(detail::int_value(v, "coordinate"));
    return f->from_coords(c);
  }
  if (j.is_string()) {
    if (f->finite())
      throw ValidationError("json: string elements are rationals only");
    try {
      return f->from_rational(Rat(j.get<std::string>()));
    } catch (const std::exception&) {
      throw ValidationError("json: invalid rational \"" +
                            j.get<std::string>() + "\"");
    }
  }
  throw ValidationError("json: an element must be an integer, a coordinate "
                        "array, or a rational string");
}

// ---- additive subgroups ----

inline Json subgroup_to_json(const AdditiveSubgroup& s) {
  if (!s.field()->finite() && s == AdditiveSubgroup::all(s.field()))
    return Json{{"all", true}};
  Json rows = Json::array();
  for (const std::vector<int>& row : s.basis_rows()) rows.push_back(row);
  return Json{{"basis", rows}};
}

/// Accepts {"basis": [[...]]} in modulus-basis coordinates, {"all": true},
/// or a token: "zero"/"min"/"max"/"full" (the extremal tokens resolve
/// against epsilon).
inline AdditiveSubgroup subgroup_from_json(const Json& j, const Field* f,
                                           const Elem& epsilon) {
  if (j.is_string()) {
    std::string token = j.get<std::string>();
    if (token == "zero") return AdditiveSubgroup::zero(f);
    if (token == "full" || token == "all") return AdditiveSubgroup::all(f);
    if (token == "min") return lambda_min(f, epsilon);
    if (token == "max") return lambda_max(f, epsilon);
    throw ValidationError("json: unknown subgroup token \"" + token + "\"");
  }
  if (j.is_object() && j.contains("all")) {
    if (!j.at("all").is_boolean() || !j.at("all").get<bool>())
      throw ValidationError("json: \"all\" must be true when present");
    return AdditiveSubgroup::all(f);
  }
  const Json& basis = detail::member(j, "basis");
  if (!basis.is_array())
    throw ValidationError("json: subgroup basis must be an array of rows");
  if (!f->finite()) {
    if (!basis.empty())
      throw ValidationError("json: over the rationals the only subgroup "
                            "bases are [] and {\"all\": true}");
    return AdditiveSubgroup::zero(f);
  }
  std::vector<std::vector<int>> rows;
  for (const Json& rj : basis) {
    if (!rj.is_array())
      throw ValidationError("json: subgroup basis rows must be arrays");
    std::vector<int> row;
    for (const Json& c : rj)
      row.push_back(static_cast<int>(detail::int_value(c, "basis entry")));
    rows.push_back(std::move(row));
  }
  return AdditiveSubgroup::from_basis_rows(f, rows);
}

// ---- matrices ----

inline Json matrix_rows_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t jx = 0; jx < m.cols(); ++jx)
      row.push_back(elem_to_json(m.at(i, jx)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json matrix_to_json(const Matrix& m) {
  return Json{{"rows", matrix_rows_to_json(m)}};
}

/// Accepts a bare array of rows or {"rows": [...]}; the explicit column
/// count permits empty matrices and validates row width.
inline Matrix matrix_from_json(const Json& j, const Field* f,
                               long cols = -1) {
  const Json& rows = j.is_object() ? detail::member(j, "rows") : j;
  if (!rows.is_array())
    throw ValidationError("json: a matrix must be an array of rows");
  std::vector<Vec> vecs;
  for (const Json& rj : rows) {
    if (!rj.is_array())
      throw ValidationError("json: matrix rows must be arrays");
    Vec v;
    for (const Json& c : rj) v.push_back(elem_from_json(c, f));
    if (cols >= 0 && v.size() != static_cast<std::size_t>(cols))
      throw ValidationError("json: matrix rows must have width " +
                            std::to_string(cols));
    if (!vecs.empty() && v.size() != vecs.front().size())
      throw ValidationError("json: matrix rows must share one width");
    vecs.push_back(std::move(v));
  }
  if (vecs.empty()) {
    if (cols < 0)
      throw ValidationError("json: an empty matrix needs an explicit width");
    return Matrix(f, 0, static_cast<std::size_t>(cols));
  }
  return Matrix::from_rows(f, vecs, vecs.front().size());
}

// ---- form parameters, forms, spaces ----

inline Json params_to_json(const FormParams& p) {
  return Json{{"field", field_to_json(p.field())},
              {"epsilon", elem_to_json(p.epsilon())},
              {"lambda", subgroup_to_json(p.lambda())}};
}

inline FormParams params_from_json(const Json& j) {
  const Field* f = field_from_json(detail::member(j, "field"));
  Elem eps = elem_from_json(detail::member(j, "epsilon"), f);
  AdditiveSubgroup lam =
      subgroup_from_json(detail::member(j, "lambda"), f, eps);
  return FormParams(f, eps, lam);
}

inline Json form_to_json(const FormClass& q) {
  return Json{{"params", params_to_json(q.params())},
              {"matrix", matrix_rows_to_json(q.rep())}};
}

inline FormClass form_from_json(const Json& j) {
  FormParams p = params_from_json(detail::member(j, "params"));
  Matrix m = matrix_from_json(detail::member(j, "matrix"), p.field());
  if (m.rows() != m.cols())
    throw ValidationError("json: a form matrix must be square");
  return FormClass(p, m);
}

/// A formed space plus any named subspaces carried alongside it.
struct SpaceDoc {
  FormedSpace space;
  std::map<std::string, Subspace> subspaces;
};

/// Accepts form JSON (any key other than "params"/"matrix" names a subspace
/// by a basis-row matrix) or a Coxeter graph {"vertices": n, "edges":
/// [[i, j, label], ...]} with labels in {2, 3} and 0 standing for infinity.
inline SpaceDoc space_from_json(const Json& j) {
  if (!j.is_object())
    throw ValidationError("json: a space must be an object");
  if (j.contains("vertices")) {
    long n = detail::int_value(j.at("vertices"), "vertices");
    if (n < 1) throw ValidationError("json: vertices must be positive");
    std::vector<CoxeterEdge> edges;
    if (j.contains("edges")) {
      const Json& ej = j.at("edges");
      if (!ej.is_array())
        throw ValidationError("json: edges must be an array");
      for (const Json& e : ej) {
        if (!e.is_array() || e.size() != 3)
          throw ValidationError("json: an edge is [i, j, label]");
        edges.push_back(CoxeterEdge{
            static_cast<std::size_t>(detail::int_value(e.at(0), "edge endpoint")),
            static_cast<std::size_t>(detail::int_value(e.at(1), "edge endpoint")),
            detail::int_value(e.at(2), "edge label")});
      }
    }
    SpaceDoc doc{coxeter_space(static_cast<std::size_t>(n), edges), {}};
    for (const auto& [key, value] : j.items())
      if (key != "vertices" && key != "edges")
        doc.subspaces.emplace(
            key, Subspace::row_space(matrix_from_json(
                     value, doc.space.field(), static_cast<long>(n))));
    return doc;
  }
  SpaceDoc doc{FormedSpace(form_from_json(j)), {}};
  for (const auto& [key, value] : j.items())
    if (key != "params" && key != "matrix")
      doc.subspaces.emplace(
          key, Subspace::row_space(matrix_from_json(
                   value, doc.space.field(),
                   static_cast<long>(doc.space.dim()))));
  return doc;
}

inline Json space_to_json(const FormedSpace& e,
                          const std::map<std::string, Subspace>& named = {}) {
  Json j = form_to_json(e.form());
  for (const auto& [key, s] : named) {
    require(key != "params" && key != "matrix" && key != "vertices",
            "space json: a subspace may not be named \"" + key + "\"");
    j[key] = matrix_rows_to_json(s.basis());
  }
  return j;
}

// ---- extension problems and results ----

/// {"space": ..., "U": [[...]], "W": [[...]], "images": [[...]],
///  "fix": [[...]]?}; the i-th row of "images" is the image of the i-th row
/// of "U", and together the images must span W.
inline ExtensionProblem problem_from_json(const Json& j) {
  SpaceDoc doc = space_from_json(detail::member(j, "space"));
  const FormedSpace& e = doc.space;
  const long n = static_cast<long>(e.dim());
  Matrix u = matrix_from_json(detail::member(j, "U"), e.field(), n);
  Matrix w = matrix_from_json(detail::member(j, "W"), e.field(), n);
  Matrix images = matrix_from_json(detail::member(j, "images"), e.field(), n);
  if (u.rows() != images.rows())
    throw ValidationError("json: images must pair with the rows of U");
  if (!(Subspace::row_space(images) == Subspace::row_space(w)))
    throw ValidationError("json: images must span W");
  PartialIsometry f(e.form(), u, images);
  if (j.contains("fix"))
    return ExtensionProblem(
        e, f, Subspace::row_space(matrix_from_json(j.at("fix"), e.field(), n)));
  return ExtensionProblem(e, f);
}

inline Json witt_result_to_json(const WittResult& r) {
  return Json{{"matrix", matrix_rows_to_json(r.g.matrix())},
              {"certified", true},
              {"case_trace", r.case_trace}};
}

// ---- reports ----

inline Json orbit_report_to_json(const ClassicalEntry& entry) {
  Json table = Json::array();
  for (const auto& [dim, orbits] : entry.orbit_table)
    table.push_back(Json::array({dim, orbits}));
  return Json{{"order", entry.order},
              {"label", entry.label},
              {"orbit_table", table}};
}

inline Json check_results_to_json(const std::vector<CheckResult>& results) {
  Json out = Json::array();
  bool all_passed = true;
  for (const CheckResult& r : results) {
    out.push_back(Json{{"name", r.name},
                       {"description", r.description},
                       {"passed", r.passed},
                       {"skipped", r.skipped},
                       {"cases", r.cases},
                       {"detail", r.detail}});
    all_passed = all_passed && r.passed;
  }
  return Json{{"results", out}, {"all_passed", all_passed}};
}

}  // namespace formkit
