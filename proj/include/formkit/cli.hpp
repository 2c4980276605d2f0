#pragma once

// Command-line front end: subcommands lambda, classify, witt, orbits, and
// verify over the JSON formats. Text output is a thin rendering of the same
// report. Exit codes: 0 success, 1 failed verification, 2 invalid input,
// 3 hypothesis violated, 4 budget exceeded.

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "formkit/json_io.hpp"

namespace formkit {

namespace cli_detail {

/// --input accepts a file path or inline JSON (starting with '{' or '[').
inline Json load_input(const std::string& spec) {
  std::string text;
  if (!spec.empty() && (spec[0] == '{' || spec[0] == '[')) {
    text = spec;
  } else {
    std::ifstream in(spec);
    if (!in) throw ValidationError("cannot read input: " + spec);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("invalid json: ") + e.what());
  }
}

inline void deliver(const std::string& text, const std::string& output_path,
                    std::ostream& out) {
  if (output_path.empty()) {
    out << text;
    return;
  }
  std::ofstream o(output_path);
  if (!o) throw ValidationError("cannot write output: " + output_path);
  o << text;
}

inline std::string render(const Json& report, const std::string& text,
                          const std::string& format) {
  return format == "json" ? report.dump(2) + "\n" : text;
}

/// A flag value is inline JSON when it looks like JSON, else a plain token.
inline Json flag_json(const std::string& value) {
  if (!value.empty() && (value[0] == '{' || value[0] == '[')) {
    try {
      return Json::parse(value);
    } catch (const std::exception& e) {
      throw ValidationError(std::string("invalid json: ") + e.what());
    }
  }
  return Json(value);
}

inline const Field* resolve_field(const std::string& token,
                                  const std::string& sigma) {
  const Field* f = field_from_json(flag_json(token));
  if (sigma.empty()) return f;
  Involution want = detail::involution_from_token(sigma);
  if (f->involution() == want) return f;
  if (f->spec().kind != FieldKind::Extension)
    throw ValidationError("--sigma frob needs an extension field");
  return Field::extension(f->spec().p, f->spec().k, f->spec().modulus, want);
}

inline Elem resolve_epsilon(const std::string& value, const Field* f) {
  Json j;
  try {
    j = Json::parse(value);
  } catch (const std::exception&) {
    j = Json(value);
  }
  return elem_from_json(j, f);
}

inline std::string subgroup_text(const AdditiveSubgroup& s) {
  if (!s.field()->finite())
    return s == AdditiveSubgroup::all(s.field()) ? "Q" : "{0}";
  std::string out = "{";
  bool first = true;
  for (const Elem& a : s.elements()) {
    if (!first) out += ", ";
    out += s.field()->to_string(a);
    first = false;
  }
  return out + "}";
}

inline std::string rows_text(const Json& rows) { return rows.dump(); }

}  // namespace cli_detail

/// Which row of the extremal-subgroup table (sigma trivial? / characteristic
/// two? / epsilon) the pair (field, epsilon) falls in.
inline std::string lambda_table_row(const Field* f, const Elem& epsilon) {
  if (!f->trivial_involution())
    return epsilon == f->from_int(-1) ? "no/-1" : "no/!=-1";
  if (f->characteristic() == 2) return "yes/yes/1";
  return epsilon.is_one() ? "yes/no/1" : "yes/no/-1";
}

namespace cli_detail {

inline int cmd_lambda(const std::string& field, const std::string& sigma,
                      const std::string& epsilon, const std::string& format,
                      const std::string& output, std::ostream& out) {
  const Field* f = resolve_field(field, sigma);
  Elem eps = resolve_epsilon(epsilon, f);
  require((eps * f->involve(eps)).is_one(),
          "epsilon must satisfy epsilon * sigma(epsilon) = 1");
  AdditiveSubgroup lo = lambda_min(f, eps);
  AdditiveSubgroup hi = lambda_max(f, eps);
  Json report{{"field", field_to_json(f)},
              {"epsilon", elem_to_json(eps)},
              {"row", lambda_table_row(f, eps)},
              {"lambda_min", subgroup_to_json(lo)},
              {"lambda_max", subgroup_to_json(hi)}};
  std::ostringstream text;
  text << "field: " << f->label() << "\n"
       << "epsilon: " << f->to_string(eps) << "\n"
       << "row: " << lambda_table_row(f, eps) << "\n"
       << "lambda_min: " << subgroup_text(lo) << "\n"
       << "lambda_max: " << subgroup_text(hi) << "\n";
  deliver(render(report, text.str(), format), output, out);
  return 0;
}

inline int cmd_classify(const std::string& input, const std::string& format,
                        const std::string& output, std::ostream& out) {
  SpaceDoc doc = space_from_json(load_input(input));
  const FormedSpace& e = doc.space;
  const char* kind = to_string(classify(e.params()));
  Json canonical = matrix_rows_to_json(e.form().rep());
  Json report{{"kind", kind},
              {"kernel_dim", e.kernel().dim()},
              {"radical_dim", e.radical().dim()},
              {"canonical", canonical},
              {"params", params_to_json(e.params())}};
  std::ostringstream text;
  text << "kind: " << kind << "\n"
       << "kernel dim: " << e.kernel().dim() << "\n"
       << "radical dim: " << e.radical().dim() << "\n"
       << "canonical: " << rows_text(canonical) << "\n";
  deliver(render(report, text.str(), format), output, out);
  return 0;
}

inline int cmd_witt(const std::string& input, const std::string& format,
                    const std::string& output, std::ostream& out) {
  Json doc = load_input(input);
  ExtensionProblem problem = problem_from_json(doc);
  WittResult res = problem.fix().has_value() ? relative_witt_extend(problem)
                                             : witt_extend(problem);
  Json report = witt_result_to_json(res);
  std::ostringstream text;
  text << "matrix: " << rows_text(report.at("matrix")) << "\n"
       << "certified: true\n"
       << "case trace: ";
  for (std::size_t i = 0; i < res.case_trace.size(); ++i)
    text << (i ? ", " : "") << res.case_trace[i];
  text << "\n";
  deliver(render(report, text.str(), format), output, out);
  return 0;
}

inline Json entry_to_json(const ClassicalEntry& entry) {
  Json j = orbit_report_to_json(entry);
  j["form"] = entry.form;
  j["dim"] = entry.dim;
  j["formula"] = entry.formula;
  return j;
}

inline void entry_text(std::ostringstream& text, const Json& j) {
  text << "order: " << j.at("order").get<long>() << "\n"
       << "label: "
       << (j.at("label").get<std::string>().empty()
               ? "(none)"
               : j.at("label").get<std::string>())
       << "\n"
       << "orbit table: " << j.at("orbit_table").dump() << "\n";
}

inline int cmd_orbits(const std::string& input, const std::string& field,
                      const std::string& sigma, const std::string& epsilon,
                      const std::string& lambda, std::size_t dim, long budget,
                      const std::string& format, const std::string& output,
                      std::ostream& out) {
  std::ostringstream text;
  Json report;
  if (!input.empty()) {
    SpaceDoc doc = space_from_json(load_input(input));
    ClassicalEntry entry = identify_isometry_group(doc.space, budget);
    report = orbit_report_to_json(entry);
    entry_text(text, report);
  } else {
    if (field.empty() || dim == 0)
      throw ValidationError(
          "orbits needs --input, or --field and --dim for the standard "
          "spaces");
    const Field* f = resolve_field(field, sigma);
    Elem eps = resolve_epsilon(epsilon, f);
    AdditiveSubgroup lam = subgroup_from_json(flag_json(lambda), f, eps);
    ClassicalReport rep =
        classical_identification_report(FormParams(f, eps, lam), dim, budget);
    Json entries = Json::array();
    bool first = true;
    for (const ClassicalEntry& entry : rep.entries) {
      entries.push_back(entry_to_json(entry));
      if (!first) text << "\n";
      text << "form: " << entry.form << "\n"
           << "dim: " << entry.dim << "\n";
      entry_text(text, entries.back());
      first = false;
    }
    report = Json{{"params", params_to_json(rep.params)},
                  {"dim", rep.n},
                  {"entries", entries}};
  }
  deliver(render(report, text.str(), format), output, out);
  return 0;
}

inline int cmd_verify(const std::vector<std::string>& fields,
                      const std::string& sigma, std::size_t max_dim,
                      long budget, const std::string& format,
                      const std::string& output, std::ostream& out) {
  CheckSelection sel;
  sel.max_dim = max_dim;
  sel.budget = budget;
  for (const std::string& token : fields) {
    const Field* f = resolve_field(token, sigma);
    sel.fields.push_back(f);
    // A bare extension-field token covers both involutions.
    if (sigma.empty() && f->spec().kind == FieldKind::Extension &&
        f->spec().k % 2 == 0)
      sel.fields.push_back(Field::extension(f->spec().p, f->spec().k,
                                            f->spec().modulus,
                                            Involution::Frobenius));
  }
  std::vector<CheckResult> results = run_all_checks(sel);
  Json report = check_results_to_json(results);
  Json names = Json::array();
  for (const Field* f : sel.fields) names.push_back(f->label());
  report["fields"] = names;
  report["max_dim"] = max_dim;

  std::ostringstream text;
  std::size_t failed = 0;
  for (const CheckResult& r : results) {
    text << std::left << std::setw(16) << r.name
         << (r.skipped ? "SKIP" : r.passed ? "PASS" : "FAIL");
    if (!r.skipped) text << "   cases=" << r.cases;
    if (!r.detail.empty()) text << "   " << r.detail;
    text << "\n";
    if (!r.passed) ++failed;
  }
  if (failed == 0)
    text << "all " << results.size() << " checks passed\n";
  else
    text << failed << " of " << results.size() << " checks failed\n";
  deliver(render(report, text.str(), format), output, out);
  return failed == 0 ? 0 : 1;
}

}  // namespace cli_detail

inline int cli_main(std::vector<std::string> args, std::ostream& out,
                    std::ostream& err) {
  CLI::App app{"exact calculus of (sigma, epsilon, lambda)-quadratic forms"};
  app.require_subcommand(1);

  std::string field, sigma, epsilon = "1", lambda = "zero";
  std::string input, output, format = "text";
  std::vector<std::string> verify_fields;
  std::size_t max_dim = 2, dim = 0;
  long budget = kDefaultBudget;

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--output", output, "write the report to a file");
  };

  CLI::App* lam = app.add_subcommand(
      "lambda", "extremal form-parameter subgroups of a field");
  lam->add_option("--field", field, "field token or inline field json")
      ->required();
  lam->add_option("--sigma", sigma, "involution: id or frob");
  lam->add_option("--epsilon", epsilon, "epsilon (int, coords, or rational)");
  add_io(lam);

  CLI::App* cls = app.add_subcommand(
      "classify", "classify a form: kind, kernel, radical, canonical rep");
  cls->add_option("--input", input, "form/space json (path or inline)")
      ->required();
  add_io(cls);

  CLI::App* wit = app.add_subcommand(
      "witt", "extend a partial isometry to the whole space");
  wit->add_option("--input", input, "extension problem json (path or inline)")
      ->required();
  add_io(wit);

  CLI::App* orb = app.add_subcommand(
      "orbits", "isometry group order, classical label, and orbit table");
  orb->add_option("--input", input, "space json (path or inline)");
  orb->add_option("--field", field, "field token or inline field json");
  orb->add_option("--sigma", sigma, "involution: id or frob");
  orb->add_option("--epsilon", epsilon, "epsilon (int, coords, or rational)");
  orb->add_option("--lambda", lambda,
                  "subgroup: zero, min, max, full, or inline json");
  orb->add_option("--dim", dim, "dimension of the standard spaces");
  orb->add_option("--budget", budget, "enumeration budget");
  add_io(orb);

  CLI::App* ver = app.add_subcommand(
      "verify", "run every named check over a field selection");
  ver->add_option("--field", verify_fields,
                  "field tokens; a bare gf4/gf9 covers both involutions")
      ->required();
  ver->add_option("--sigma", sigma, "restrict to one involution: id or frob");
  ver->add_option("--max-dim", max_dim, "largest dimension to enumerate");
  ver->add_option("--budget", budget, "enumeration budget");
  add_io(ver);

  std::vector<const char*> argv;
  argv.push_back("formkit");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    using namespace cli_detail;
    if (lam->parsed())
      return cmd_lambda(field, sigma, epsilon, format, output, out);
    if (cls->parsed()) return cmd_classify(input, format, output, out);
    if (wit->parsed()) return cmd_witt(input, format, output, out);
    if (orb->parsed())
      return cmd_orbits(input, field, sigma, epsilon, lambda, dim, budget,
                        format, output, out);
    return cmd_verify(verify_fields, sigma, max_dim, budget, format, output,
                      out);
  } catch (const BudgetError& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 4;
  } catch (const HypothesisError& e) {
    err << "hypothesis violated: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace formkit
