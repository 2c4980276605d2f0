#include <set>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "formkit/checks.hpp"

using namespace formkit;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::MessageMatches;

namespace {

CheckSelection select(std::vector<const Field*> fields, std::size_t max_dim,
                      long budget = kDefaultBudget) {
  CheckSelection sel;
  sel.fields = std::move(fields);
  sel.max_dim = max_dim;
  sel.budget = budget;
  return sel;
}

CheckResult expect_pass(const std::string& name, const CheckSelection& sel,
                        long cases) {
  CheckResult r = run_check(name, sel);
  INFO(r.name << ": " << r.detail);
  CHECK(r.passed);
  CHECK_FALSE(r.skipped);
  CHECK(r.cases == cases);
  return r;
}

}  // namespace

TEST_CASE("check catalog lists every check once, in a fixed order") {
  const auto& catalog = check_catalog();
  REQUIRE(catalog.size() == 9);
  std::vector<std::string> names;
  for (const auto& [name, description] : catalog) {
    names.push_back(name);
    CHECK_FALSE(description.empty());
  }
  CHECK(names == std::vector<std::string>{
                     "eq1", "prop27", "thm1-counts", "witt-exhaustive",
                     "transitivity", "lemma36", "lemma38", "prop29", "propA1"});
}

TEST_CASE("run_check rejects bad selections and unknown names") {
  const Field* f2 = Field::gf(2);
  CHECK_THROWS_MATCHES(run_check("eq1", select({}, 2)), ValidationError,
                       MessageMatches(ContainsSubstring("no fields")));
  CHECK_THROWS_MATCHES(run_check("eq1", select({Field::rationals()}, 2)),
                       ValidationError,
                       MessageMatches(ContainsSubstring("finite")));
  CHECK_THROWS_MATCHES(run_check("eq-one", select({f2}, 2)), ValidationError,
                       MessageMatches(ContainsSubstring("unknown check")));
}

TEST_CASE("defect identity holds over small fields") {
  const Field* f2 = Field::gf(2);
  const Field* f3 = Field::gf(3);
  expect_pass("eq1", select({f2}, 2), 172);
  expect_pass("eq1", select({f2}, 3), 4780);
  expect_pass("eq1", select({f2, f3}, 2), 2638);
}

TEST_CASE("determination and counting agree with the class roster") {
  const Field* f2 = Field::gf(2);
  const Field* f3 = Field::gf(3);
  expect_pass("prop27", select({f2}, 2), 13);
  expect_pass("prop27", select({f2, f3}, 2), 47);
  expect_pass("thm1-counts", select({f2}, 3), 85);
  expect_pass("thm1-counts", select({f2, f3}, 2), 47);
}

TEST_CASE("exhaustive extension reports its outcome split") {
  const Field* f2 = Field::gf(2);
  CheckResult r = expect_pass("witt-exhaustive", select({f2}, 2), 118);
  CHECK(r.detail == "118 extended, 0 kernel-rejected, 48 non-isometric");
}

TEST_CASE("orbit invariants and fixing lemmas hold over gf2 and gf3") {
  const Field* f2 = Field::gf(2);
  const Field* f3 = Field::gf(3);
  expect_pass("transitivity", select({f2}, 2), 26);
  expect_pass("transitivity", select({f2, f3}, 2), 88);
  expect_pass("lemma36", select({f2, f3}, 2), 766);
  expect_pass("lemma38", select({f2, f3}, 2), 570);
}

TEST_CASE("negligibility check skips without an intermediate lambda") {
  const Field* f2 = Field::gf(2);
  CheckResult r = run_check("prop29", select({f2}, 2));
  CHECK(r.passed);
  CHECK(r.skipped);
  CHECK(r.cases == 0);
  CHECK_THAT(r.detail, ContainsSubstring("multiplier core"));
}

TEST_CASE("negligibility check runs over gf4 where lambda can shrink") {
  const Field* f4i = Field::gf(4, Involution::Identity);
  const Field* f4f = Field::gf(4, Involution::Frobenius);
  expect_pass("prop29", select({f4i, f4f}, 2), 780);
}

TEST_CASE("extremal subgroup check covers every admissible epsilon") {
  const Field* f2 = Field::gf(2);
  const Field* f3 = Field::gf(3);
  const Field* f4i = Field::gf(4, Involution::Identity);
  const Field* f4f = Field::gf(4, Involution::Frobenius);
  expect_pass("propA1", select({f2}, 2), 1);
  expect_pass("propA1", select({f2, f3}, 2), 3);
  expect_pass("propA1", select({f4i, f4f}, 2), 4);
}

TEST_CASE("over-budget requests are refused before any work") {
  const Field* f2 = Field::gf(2);
  for (const char* name : {"eq1", "witt-exhaustive", "transitivity", "lemma36"})
    CHECK_THROWS_MATCHES(run_check(name, select({f2}, 9)), BudgetError,
                         MessageMatches(ContainsSubstring("budget")));
  CHECK_THROWS_MATCHES(run_check("eq1", select({f2}, 1, 1)), BudgetError,
                       MessageMatches(ContainsSubstring("budget of 1")));
  CHECK_NOTHROW(run_check("eq1", select({f2}, 1, 12)));
}

TEST_CASE("run_all_checks returns one result per catalog entry") {
  const Field* f2 = Field::gf(2);
  std::vector<CheckResult> results = run_all_checks(select({f2}, 2));
  REQUIRE(results.size() == check_catalog().size());
  for (std::size_t i = 0; i < results.size(); ++i) {
    CHECK(results[i].name == check_catalog()[i].first);
    CHECK(results[i].description == check_catalog()[i].second);
    CHECK(results[i].passed);
    CHECK(results[i].skipped == (results[i].name == "prop29"));
  }
}
