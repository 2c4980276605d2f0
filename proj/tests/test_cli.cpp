#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "formkit/cli.hpp"

using namespace formkit;
using Catch::Matchers::ContainsSubstring;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli_main(std::move(args), out, err);
  return Run{code, out.str(), err.str()};
}

Json out_json(const Run& r) {
  REQUIRE(r.code == 0);
  return Json::parse(r.out);
}

}  // namespace

TEST_CASE("lambda prints the extremal subgroups and the table row") {
  Run gf2 = cli({"lambda", "--field", "gf2", "--sigma", "id", "--epsilon", "1"});
  REQUIRE(gf2.code == 0);
  CHECK_THAT(gf2.out, ContainsSubstring("row: yes/yes/1"));
  CHECK_THAT(gf2.out, ContainsSubstring("lambda_min: {0}"));
  CHECK_THAT(gf2.out, ContainsSubstring("lambda_max: {0, 1}"));

  Run gf5 = cli({"lambda", "--field", "gf5", "--epsilon", "-1"});
  REQUIRE(gf5.code == 0);
  CHECK_THAT(gf5.out, ContainsSubstring("row: yes/no/-1"));
  CHECK_THAT(gf5.out, ContainsSubstring("lambda_min: {0, 1, 2, 3, 4}"));
  CHECK_THAT(gf5.out, ContainsSubstring("lambda_max: {0, 1, 2, 3, 4}"));

  Run gf9 = cli({"lambda", "--field", "gf9", "--sigma", "frob", "--epsilon",
                 "-1", "--format", "json"});
  Json j = out_json(gf9);
  CHECK(j.at("row") == Json("no/-1"));
  CHECK(j.at("lambda_min") == j.at("lambda_max"));
  AdditiveSubgroup got = subgroup_from_json(
      j.at("lambda_min"), Field::gf(9, Involution::Frobenius),
      Field::gf(9, Involution::Frobenius)->from_int(-1));
  CHECK(got.elements().size() == 3);
}

TEST_CASE("classify reports kind, kernel, radical, and the canonical rep") {
  Run euc = cli({"classify", "--format", "json", "--input",
                 R"({"params":{"field":"gf2","epsilon":1,"lambda":"zero"},)"
                 R"("matrix":[[1,0],[0,1]]})"});
  Json j = out_json(euc);
  CHECK(j.at("kind") == Json("quadratic"));
  CHECK(j.at("kernel_dim") == Json(2));
  CHECK(j.at("radical_dim") == Json(1));
  CHECK(j.at("canonical") == Json::parse("[[1,0],[0,1]]"));

  Run alt = cli({"classify", "--input",
                 R"({"params":{"field":"gf3","epsilon":-1,"lambda":"full"},)"
                 R"("matrix":[[0,1],[0,0]]})"});
  REQUIRE(alt.code == 0);
  CHECK_THAT(alt.out, ContainsSubstring("kind: alternating"));
  CHECK_THAT(alt.out, ContainsSubstring("kernel dim: 0"));

  Run zero = cli({"classify", "--format", "json", "--input",
                  R"({"params":{"field":"gf3","epsilon":1,"lambda":"zero"},)"
                  R"("matrix":[[0,0],[0,0]]})"});
  Json z = out_json(zero);
  CHECK(z.at("kernel_dim") == Json(2));
  CHECK(z.at("radical_dim") == Json(2));
}

TEST_CASE("witt solves problems and maps hypothesis failures to exit 3") {
  const std::string swap_problem =
      R"({"space":{"params":{"field":"gf2","epsilon":1,"lambda":"zero"},)"
      R"("matrix":[[0,1],[0,0]]},)"
      R"("U":[[1,0]],"W":[[0,1]],"images":[[0,1]]})";
  Json j = out_json(cli({"witt", "--format", "json", "--input", swap_problem}));
  CHECK(j.at("matrix") == Json::parse("[[0,1],[1,0]]"));
  CHECK(j.at("certified") == Json(true));
  CHECK(j.at("case_trace") ==
        Json(std::vector<std::string>{"H-reduction", "2.1", "base"}));

  // Empty domain: the extension is the identity with the trivial trace.
  Run base = cli({"witt", "--format", "json", "--input",
                  R"({"space":{"params":{"field":"gf3","epsilon":-1,)"
                  R"("lambda":"full"},"matrix":[[0,1],[0,0]]},)"
                  R"("U":[],"W":[],"images":[]})"});
  Json b = out_json(base);
  CHECK(b.at("matrix") == Json::parse("[[1,0],[0,1]]"));
  CHECK(b.at("case_trace") == Json(std::vector<std::string>{"base"}));

  // e3 spans the kernel of the hyperbolic-plane-plus-zero-line form; mapping
  // it onto the isotropic e1 outside the kernel violates f(U meet K) = W meet K.
  Run bad = cli({"witt", "--input",
                 R"({"space":{"params":{"field":"gf2","epsilon":1,)"
                 R"("lambda":"zero"},"matrix":[[0,1,0],[0,0,0],[0,0,0]]},)"
                 R"("U":[[0,0,1]],"W":[[1,0,0]],"images":[[1,0,0]]})"});
  CHECK(bad.code == 3);
  CHECK_THAT(bad.err, ContainsSubstring("kernel condition"));
}

TEST_CASE("a relative problem dispatches on the fix key") {
  Run rel = cli({"witt", "--format", "json", "--input",
                 R"({"space":{"params":{"field":"gf3","epsilon":-1,)"
                 R"("lambda":"full"},"matrix":[[0,1],[0,0]]},)"
                 R"("U":[[1,0]],"W":[[1,0]],"images":[[1,0]],)"
                 R"("fix":[[1,0]]})"});
  Json j = out_json(rel);
  CHECK(j.at("case_trace").at(0) == Json("relative"));
}

TEST_CASE("orbits identifies a space document or the standard spaces") {
  Json sp = out_json(cli({"orbits", "--format", "json", "--input",
                          R"({"params":{"field":"gf2","epsilon":1,)"
                          R"("lambda":"full"},"matrix":[[0,1],[0,0]]})"}));
  CHECK(sp == Json::parse(R"({"order":6,"label":"Sp_2","orbit_table":[[1,1]]})"));

  Json std_spaces = out_json(cli({"orbits", "--field", "gf2", "--epsilon", "1",
                                  "--lambda", "zero", "--dim", "2", "--format",
                                  "json"}));
  REQUIRE(std_spaces.at("entries").size() == 2);
  const Json& hyp = std_spaces.at("entries").at(0);
  CHECK(hyp.at("form") == Json("hyperbolic"));
  CHECK(hyp.at("order") == Json(2));
  CHECK(hyp.at("label") == Json("O_{1,1}"));
  const Json& euc = std_spaces.at("entries").at(1);
  CHECK(euc.at("form") == Json("euclidean"));
  CHECK(euc.at("order") == Json(2));
  CHECK(euc.at("label") == Json(""));

  Run missing = cli({"orbits", "--field", "gf2"});
  CHECK(missing.code == 2);
  CHECK_THAT(missing.err, ContainsSubstring("--dim"));
}

TEST_CASE("verify runs the whole catalog and honors the budget") {
  Json rep = out_json(cli({"verify", "--field", "gf2", "--max-dim", "2",
                           "--format", "json"}));
  CHECK(rep.at("all_passed") == Json(true));
  CHECK(rep.at("results").size() == 9);
  CHECK(rep.at("fields") == Json(std::vector<std::string>{"GF(2)"}));

  Run text = cli({"verify", "--field", "gf2", "--max-dim", "2"});
  REQUIRE(text.code == 0);
  CHECK_THAT(text.out, ContainsSubstring("eq1"));
  CHECK_THAT(text.out, ContainsSubstring("all 9 checks passed"));

  Run over = cli({"verify", "--field", "gf2", "--max-dim", "9"});
  CHECK(over.code == 4);
  CHECK_THAT(over.err, ContainsSubstring("budget"));
}

TEST_CASE("a bare extension-field token verifies both involutions") {
  Json rep = out_json(cli({"verify", "--field", "gf4", "--max-dim", "1",
                           "--format", "json"}));
  CHECK(rep.at("fields") ==
        Json(std::vector<std::string>{"GF(4)", "GF(4)^frob"}));
  for (const Json& r : rep.at("results"))
    if (r.at("name") == Json("prop29")) CHECK(r.at("skipped") == Json(false));

  Json only = out_json(cli({"verify", "--field", "gf4", "--sigma", "frob",
                            "--max-dim", "1", "--format", "json"}));
  CHECK(only.at("fields") == Json(std::vector<std::string>{"GF(4)^frob"}));
}

TEST_CASE("invalid input exits with code 2") {
  CHECK(cli({"classify", "--input", "{not json"}).code == 2);
  CHECK(cli({"classify", "--input", "/no/such/file.json"}).code == 2);
  CHECK(cli({"lambda", "--field", "gf7^frob"}).code == 2);
  CHECK(cli({"lambda", "--field", "gf2", "--sigma", "frob"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"lambda"}).code == 2);
  Run bad_eps = cli({"lambda", "--field", "gf2", "--epsilon", "0"});
  CHECK(bad_eps.code == 2);
}

TEST_CASE("reports can be written to a file and help exits cleanly") {
  std::string path = "cli_test_report.json";
  Run r = cli({"orbits", "--input",
               R"({"params":{"field":"gf2","epsilon":1,"lambda":"full"},)"
               R"("matrix":[[0,1],[0,0]]})",
               "--format", "json", "--output", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  Json j = Json::parse(in);
  CHECK(j.at("label") == Json("Sp_2"));
  in.close();
  std::remove(path.c_str());

  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"witt", "--help"}).code == 0);
}
