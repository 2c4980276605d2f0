#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "formkit/json_io.hpp"

using namespace formkit;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {

Json parse(const std::string& text) { return Json::parse(text); }

}  // namespace

TEST_CASE("fields round-trip through json and accept shorthand tokens") {
  std::vector<const Field*> roster{
      Field::gf(2),
      Field::gf(3),
      Field::gf(5),
      Field::gf(4, Involution::Identity),
      Field::gf(4, Involution::Frobenius),
      Field::gf(9, Involution::Identity),
      Field::gf(9, Involution::Frobenius),
      Field::rationals()};
  for (const Field* f : roster) {
    Json j = field_to_json(f);
    CHECK(field_from_json(j) == f);
    CHECK(field_from_json(parse(j.dump())) == f);
  }

  CHECK(field_from_json(Json("gf2")) == Field::gf(2));
  CHECK(field_from_json(Json("gf9")) == Field::gf(9, Involution::Identity));
  CHECK(field_from_json(Json("gf9^frob")) ==
        Field::gf(9, Involution::Frobenius));
  CHECK(field_from_json(Json("rationals")) == Field::rationals());

  CHECK_THROWS_MATCHES(field_from_json(Json("gf")), ValidationError,
                       MessageMatches(ContainsSubstring("field token")));
  CHECK_THROWS_MATCHES(field_from_json(Json("z4")), ValidationError,
                       MessageMatches(ContainsSubstring("field token")));
  CHECK_THROWS_MATCHES(
      field_from_json(parse(R"({"kind":"galois","p":2})")), ValidationError,
      MessageMatches(ContainsSubstring("kind")));
  CHECK_THROWS_MATCHES(
      field_from_json(parse(R"({"kind":"prime","p":3,"involution":"frobenius"})")),
      ValidationError, MessageMatches(ContainsSubstring("identity")));
  CHECK_THROWS_MATCHES(field_from_json(parse(R"({"kind":"prime"})")),
                       ValidationError,
                       MessageMatches(ContainsSubstring("missing \"p\"")));
}

TEST_CASE("an explicit modulus selects the matching interned field") {
  const Field* f4 = Field::gf(4, Involution::Frobenius);
  Json j = field_to_json(f4);
  REQUIRE(j.at("modulus").is_array());
  CHECK(j.at("modulus").size() == 3);
  CHECK(field_from_json(j) == f4);
  Json no_modulus = parse(
      R"({"kind":"extension","p":2,"k":2,"involution":"frobenius"})");
  CHECK(field_from_json(no_modulus) == f4);
}

TEST_CASE("elements round-trip over every field kind") {
  const Field* f3 = Field::gf(3);
  const Field* f9 = Field::gf(9, Involution::Frobenius);
  const Field* ra = Field::rationals();

  CHECK(elem_to_json(f3->from_int(2)) == Json(2));
  CHECK(elem_from_json(Json(5), f3) == f3->from_int(2));

  for (const Elem& a : f9->elements()) {
    Json j = elem_to_json(a);
    CHECK(j.is_array());
    CHECK(elem_from_json(j, f9) == a);
  }

  Elem third = ra->from_rational(Rat(2) / 3);
  Json jt = elem_to_json(third);
  CHECK(jt == Json("2/3"));
  CHECK(elem_from_json(jt, ra) == third);
  CHECK(elem_to_json(ra->from_int(-4)) == Json(-4));
  CHECK(elem_from_json(Json("7"), ra) == ra->from_int(7));

  CHECK_THROWS_MATCHES(elem_from_json(Json("1/2"), f3), ValidationError,
                       MessageMatches(ContainsSubstring("rationals only")));
  CHECK_THROWS_MATCHES(elem_from_json(Json("x"), ra), ValidationError,
                       MessageMatches(ContainsSubstring("invalid rational")));
  CHECK_THROWS_MATCHES(elem_from_json(parse("1.5"), ra), ValidationError,
                       MessageMatches(ContainsSubstring("element")));
}

TEST_CASE("subgroups round-trip and resolve extremal tokens") {
  const Field* f4 = Field::gf(4, Involution::Identity);
  const Elem one = f4->one();

  AdditiveSubgroup prime_subfield =
      AdditiveSubgroup::span(f4, {f4->one()});
  Json j = subgroup_to_json(prime_subfield);
  REQUIRE(j.contains("basis"));
  CHECK(subgroup_from_json(j, f4, one) == prime_subfield);

  CHECK(subgroup_from_json(Json("zero"), f4, one) ==
        AdditiveSubgroup::zero(f4));
  CHECK(subgroup_from_json(Json("full"), f4, one) ==
        AdditiveSubgroup::all(f4));
  CHECK(subgroup_from_json(Json("min"), f4, one) == lambda_min(f4, one));
  CHECK(subgroup_from_json(Json("max"), f4, one) == lambda_max(f4, one));
  CHECK_THROWS_MATCHES(subgroup_from_json(Json("half"), f4, one),
                       ValidationError,
                       MessageMatches(ContainsSubstring("subgroup token")));

  const Field* ra = Field::rationals();
  Json all = subgroup_to_json(AdditiveSubgroup::all(ra));
  CHECK(all == Json{{"all", true}});
  CHECK(subgroup_from_json(all, ra, ra->one()) == AdditiveSubgroup::all(ra));
  Json zero = subgroup_to_json(AdditiveSubgroup::zero(ra));
  CHECK(subgroup_from_json(zero, ra, ra->one()) ==
        AdditiveSubgroup::zero(ra));
  CHECK_THROWS_MATCHES(
      subgroup_from_json(parse(R"({"basis":[[1]]})"), ra, ra->one()),
      ValidationError, MessageMatches(ContainsSubstring("rationals")));
}

TEST_CASE("matrices parse from bare rows or a rows object") {
  const Field* f2 = Field::gf(2);
  Json bare = parse("[[0,1],[1,0]]");
  Json wrapped = parse(R"({"rows":[[0,1],[1,0]]})");
  Matrix m = matrix_from_json(bare, f2);
  CHECK(matrix_from_json(wrapped, f2) == m);
  CHECK(matrix_to_json(m) == wrapped);
  CHECK(matrix_rows_to_json(m) == bare);

  Matrix empty = matrix_from_json(parse("[]"), f2, 3);
  CHECK(empty.rows() == 0);
  CHECK(empty.cols() == 3);
  CHECK_THROWS_MATCHES(matrix_from_json(parse("[]"), f2), ValidationError,
                       MessageMatches(ContainsSubstring("explicit width")));
  CHECK_THROWS_MATCHES(matrix_from_json(parse("[[1],[0,1]]"), f2),
                       ValidationError,
                       MessageMatches(ContainsSubstring("width")));
  CHECK_THROWS_MATCHES(matrix_from_json(parse("[[1,0]]"), f2, 3),
                       ValidationError,
                       MessageMatches(ContainsSubstring("width 3")));
}

TEST_CASE("forms emit their canonical representative and round-trip") {
  const Field* f3 = Field::gf(3);
  FormParams p(f3, f3->from_int(-1), AdditiveSubgroup::all(f3));
  Json doc = parse(R"({
    "params": {"field": "gf3", "epsilon": -1, "lambda": "full"},
    "matrix": [[0, 2], [1, 0]]
  })");
  FormClass q = form_from_json(doc);
  CHECK(q.params() == p);

  Json out = form_to_json(q);
  CHECK(out.at("matrix") == parse("[[0,1],[0,0]]"));
  CHECK(form_from_json(out) == q);
  CHECK(form_from_json(parse(out.dump())) == q);
  CHECK(form_to_json(form_from_json(out)).dump() == out.dump());

  CHECK_THROWS_MATCHES(
      form_from_json(parse(
          R"({"params":{"field":"gf3","epsilon":-1,"lambda":"full"},"matrix":[[0,1]]})")),
      ValidationError, MessageMatches(ContainsSubstring("square")));
}

TEST_CASE("spaces carry named subspaces and accept coxeter graphs") {
  Json doc = parse(R"({
    "params": {"field": "gf2", "epsilon": 1, "lambda": "zero"},
    "matrix": [[0, 1], [0, 0]],
    "U": [[1, 0]],
    "W": [[0, 1]]
  })");
  SpaceDoc sd = space_from_json(doc);
  CHECK(sd.space.dim() == 2);
  REQUIRE(sd.subspaces.count("U") == 1);
  REQUIRE(sd.subspaces.count("W") == 1);
  CHECK(sd.subspaces.at("U").dim() == 1);

  // Emission canonicalizes shorthand tokens; it is a fixpoint of re-parsing.
  Json out = space_to_json(sd.space, sd.subspaces);
  SpaceDoc back = space_from_json(out);
  CHECK(back.space.form() == sd.space.form());
  CHECK(back.subspaces.at("U") == sd.subspaces.at("U"));
  CHECK(space_to_json(back.space, back.subspaces).dump() == out.dump());

  Json cox = parse(R"({"vertices": 2, "edges": [[0, 1, 3]]})");
  SpaceDoc a2 = space_from_json(cox);
  CHECK(a2.space.field() == Field::rationals());
  CHECK(a2.space.form().omega().at(0, 0) == Field::rationals()->from_int(2));
  CHECK(a2.space.form().omega().at(0, 1) == Field::rationals()->from_int(-1));
  CHECK(a2.space.radical().dim() == 0);

  Json affine = parse(R"({"vertices": 2, "edges": [[0, 1, 0]]})");
  CHECK(space_from_json(affine).space.radical().dim() == 1);

  CHECK_THROWS_MATCHES(
      space_from_json(parse(R"({"vertices": 2, "edges": [[0, 1, 5]]})")),
      ValidationError, MessageMatches(ContainsSubstring("label")));
  CHECK_THROWS_MATCHES(
      space_from_json(parse(R"({"vertices": 2, "edges": [[0, 2, 3]]})")),
      ValidationError, MessageMatches(ContainsSubstring("endpoints")));
}

TEST_CASE("extension problems parse, solve, and serialize the witness") {
  Json doc = parse(R"({
    "space": {
      "params": {"field": "gf2", "epsilon": 1, "lambda": "zero"},
      "matrix": [[0, 1], [0, 0]]
    },
    "U": [[1, 0]],
    "W": [[0, 1]],
    "images": [[0, 1]]
  })");
  WittResult res = witt_extend(problem_from_json(doc));
  Json out = witt_result_to_json(res);
  CHECK(out.at("matrix") == parse("[[0,1],[1,0]]"));
  CHECK(out.at("certified") == Json(true));
  CHECK(out.at("case_trace") ==
        Json(std::vector<std::string>{"H-reduction", "2.1", "base"}));

  Json bad_span = doc;
  bad_span["images"] = parse("[[1,0]]");
  CHECK_THROWS_MATCHES(problem_from_json(bad_span), ValidationError,
                       MessageMatches(ContainsSubstring("span W")));

  Json not_isometric = doc;
  not_isometric["W"] = parse("[[1,1]]");
  not_isometric["images"] = parse("[[1,1]]");
  CHECK_THROWS_AS(problem_from_json(not_isometric), HypothesisError);
}

TEST_CASE("a relative problem parses its fixed subspace") {
  Json doc = parse(R"({
    "space": {
      "params": {"field": "gf3", "epsilon": -1, "lambda": "full"},
      "matrix": [[0, 1], [0, 0]]
    },
    "U": [[1, 0]],
    "W": [[1, 0]],
    "images": [[1, 0]],
    "fix": [[1, 0]]
  })");
  ExtensionProblem p = problem_from_json(doc);
  REQUIRE(p.fix().has_value());
  WittResult res = relative_witt_extend(p);
  CHECK(res.case_trace.front() == "relative");
  CHECK(res.g.matrix().row(0) == vec_from_ints(Field::gf(3), {1, 0}));
}

TEST_CASE("reports serialize orders, labels, and check outcomes") {
  const Field* f2 = Field::gf(2);
  FormParams alt(f2, f2->one(), AdditiveSubgroup::all(f2));
  ClassicalEntry entry = identify_isometry_group(hyperbolic_space(alt, 1));
  Json j = orbit_report_to_json(entry);
  CHECK(j.at("order") == Json(6));
  CHECK(j.at("label") == Json("Sp_2"));
  CHECK(j.at("orbit_table") == parse("[[1,1]]"));

  CheckSelection sel;
  sel.fields = {f2};
  sel.max_dim = 1;
  std::vector<CheckResult> results = {run_check("eq1", sel),
                                      run_check("prop29", sel)};
  Json rep = check_results_to_json(results);
  CHECK(rep.at("all_passed") == Json(true));
  REQUIRE(rep.at("results").size() == 2);
  CHECK(rep.at("results").at(0).at("name") == Json("eq1"));
  CHECK(rep.at("results").at(1).at("skipped") == Json(true));
}
