#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "formkit/census.hpp"
#include "formkit/witt.hpp"

namespace formkit {

/// Which fields and dimensions a verification run covers. Enumeration sizes
/// derived from the selection are compared against the budget; exceeding it
/// raises BudgetError before any work starts.
struct CheckSelection {
  std::vector<const Field*> fields;
  std::size_t max_dim = 2;
  long budget = kDefaultBudget;
};

struct CheckResult {
  std::string name;
  std::string description;
  bool passed = false;
  bool skipped = false;  // nothing in the selection exercises this law
  long cases = 0;
  std::string detail;
};

namespace detail {

inline void check_budget(long count, long budget, const std::string& what) {
  if (count > budget)
    throw BudgetError(what + ": " + std::to_string(count) +
                      " candidates exceed the budget of " +
                      std::to_string(budget));
}

/// base^e, clamped to budget + 1 on overflow past the budget.
inline long pow_clamped(long base, std::size_t e, long budget) {
  long r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    r *= base;
    if (r > budget) return budget + 1;
  }
  return r;
}

inline long class_count_estimate(const FormParams& p, std::size_t n, long budget) {
  long d = static_cast<long>(diag_representatives(p).size());
  long q = p.field()->order();
  long r = pow_clamped(d, n, budget);
  for (std::size_t i = 0; i < n * (n - 1) / 2 && r <= budget; ++i) r *= q;
  return r > budget ? budget + 1 : r;
}

/// Refuse the whole run before any work: if any requested (params, dim)
/// pair overflows the budget, throw up front rather than after grinding
/// through the smaller dimensions.
inline void prescan_budget(const CheckSelection& sel, std::size_t dim_cap,
                           bool matrices, const std::string& what) {
  for (const Field* f : sel.fields)
    for (const FormParams& p : all_form_params(f))
      for (std::size_t n = 1; n <= std::min(sel.max_dim, dim_cap); ++n) {
        if (matrices)
          check_budget(pow_clamped(f->order(), n * n, sel.budget), sel.budget,
                       what);
        check_budget(class_count_estimate(p, n, sel.budget), sel.budget, what);
      }
}

inline std::string params_tag(const FormParams& p) {
  std::string s = "|F|=" + std::to_string(p.field()->order()) +
                  " eps=" + p.field()->to_string(p.epsilon()) + " lambda={";
  for (const Elem& a : p.lambda().elements()) s += p.field()->to_string(a) + " ";
  s += "}";
  return s;
}

/// Visit every matrix whose rows form an ordered basis of w.
inline void for_each_basis_tuple(const Subspace& w,
                                 const std::function<void(const Matrix&)>& fn) {
  const Field* f = w.field();
  std::vector<Vec> vectors = subspace_vectors(w);
  std::vector<Vec> rows;
  std::function<void()> rec = [&]() {
    if (rows.size() == w.dim()) {
      fn(Matrix::from_rows(f, rows, w.ambient()));
      return;
    }
    Subspace span =
        rows.empty() ? Subspace::zero(f, w.ambient())
                     : Subspace::row_space(Matrix::from_rows(f, rows, w.ambient()));
    for (const Vec& v : vectors) {
      if (span.contains(v)) continue;
      rows.push_back(v);
      rec();
      rows.pop_back();
    }
  };
  rec();
}

// ---- individual checks ----

inline void run_propA1(const CheckSelection& sel, CheckResult& r) {
  for (const Field* f : sel.fields) {
    const long q = f->order();
    bool twisted = false;
    for (const Elem& a : f->elements())
      if (f->involve(a) != a) twisted = true;
    long q0 = 1;
    while (q0 * q0 < q) ++q0;
    auto sigma_ind = [&](const Elem& a) {
      if (!twisted) return a;
      Elem out = a;
      for (long i = 1; i < q0; ++i) out = out * a;
      return out;
    };
    auto set_of = [](const AdditiveSubgroup& s) {
      std::set<long> out;
      for (const Elem& a : s.elements()) out.insert(a.index());
      return out;
    };
    for (const Elem& eps : f->elements()) {
      if (eps.is_zero() || !(eps * sigma_ind(eps)).is_one()) continue;
      std::set<long> expect_min, expect_max;
      for (const Elem& a : f->elements()) {
        expect_min.insert((a - eps * sigma_ind(a)).index());
        if ((a + eps * sigma_ind(a)).is_zero()) expect_max.insert(a.index());
      }
      AdditiveSubgroup got_min = lambda_min(f, eps);
      AdditiveSubgroup got_max = lambda_max(f, eps);
      bool ok = set_of(got_min) == expect_min && set_of(got_max) == expect_max &&
                got_max.contains(got_min);
      const bool spread = !twisted && f->characteristic() == 2;
      ok = ok && ((expect_min == expect_max) == !spread);
      if (!twisted) {
        if (f->characteristic() == 2)
          ok = ok && expect_min == std::set<long>{0} &&
               expect_max.size() == static_cast<std::size_t>(q);
        else if (eps.is_one())
          ok = ok && expect_min == std::set<long>{0} &&
               expect_max == std::set<long>{0};
        else
          ok = ok && expect_min.size() == static_cast<std::size_t>(q);
      } else {
        ok = ok && expect_min.size() == static_cast<std::size_t>(q0);
      }
      if (!ok) {
        r.passed = false;
        r.detail = "extremal subgroups disagree at |F|=" + std::to_string(q) +
                   " eps=" + f->to_string(eps);
        return;
      }
      ++r.cases;
    }
  }
}

inline void run_eq1(const CheckSelection& sel, CheckResult& r) {
  prescan_budget(sel, sel.max_dim, false, "eq1 form enumeration");
  for (const Field* f : sel.fields)
    for (const FormParams& p : all_form_params(f))
      for (std::size_t n = 1; n <= sel.max_dim; ++n) {
        std::vector<Vec> vecs = all_vectors(f, n);
        for (const FormClass& q : all_form_classes(p, n))
          for (const Vec& v : vecs)
            for (const Vec& w : vecs) {
              if (!eq1_defect(q, v, w).is_zero()) {
                r.passed = false;
                r.detail = "nonzero defect at " + params_tag(p) + " n=" +
                           std::to_string(n);
                return;
              }
              ++r.cases;
            }
      }
}

inline void run_prop27(const CheckSelection& sel, CheckResult& r) {
  prescan_budget(sel, 2, false, "determination form enumeration");
  for (const Field* f : sel.fields)
    for (const FormParams& p : all_form_params(f)) {
      const bool lambda_maximal = p.lambda() == lambda_max(f, p.epsilon());
      const bool lambda_proper = !(p.lambda() == AdditiveSubgroup::all(f));
      for (std::size_t n = 1; n <= std::min<std::size_t>(sel.max_dim, 2); ++n) {
        std::vector<Vec> vecs = all_vectors(f, n);
        std::map<std::string, std::size_t> by_chi, by_omega, by_q;
        std::size_t index = 0;
        for (const FormClass& q : all_form_classes(p, n)) {
          std::string omega_key = matrix_key(q.omega());
          std::string q_key;
          for (const Vec& v : vecs)
            q_key += std::to_string(q.q_value(v).index()) + ",";
          auto fail = [&](const char* what) {
            r.passed = false;
            r.detail = std::string(what) + " fails to determine the class at " +
                       params_tag(p) + " n=" + std::to_string(n);
          };
          if (!by_chi.emplace(omega_key + "|" + q_key, index).second) {
            fail("(omega, Q)");
            return;
          }
          if (lambda_maximal && !by_omega.emplace(omega_key, index).second) {
            fail("omega alone");
            return;
          }
          if (lambda_proper && !by_q.emplace(q_key, index).second) {
            fail("Q alone");
            return;
          }
          ++index;
          ++r.cases;
        }
      }
    }
}

inline void run_thm1_counts(const CheckSelection& sel, CheckResult& r) {
  prescan_budget(sel, 3, false, "count form enumeration");
  for (const Field* f : sel.fields)
    for (const FormParams& p : all_form_params(f))
      for (std::size_t n = 1; n <= std::min<std::size_t>(sel.max_dim, 3); ++n) {
        long expected = class_count_estimate(p, n, sel.budget);
        std::vector<FormClass> classes = all_form_classes(p, n);
        std::set<std::string> reps;
        for (const FormClass& q : classes) reps.insert(matrix_key(q.rep()));
        if (static_cast<long>(classes.size()) != expected ||
            static_cast<long>(reps.size()) != expected) {
          r.passed = false;
          r.detail = "count mismatch at " + params_tag(p) + " n=" +
                     std::to_string(n) + ": enumerated " +
                     std::to_string(classes.size()) + ", distinct " +
                     std::to_string(reps.size()) + ", formula " +
                     std::to_string(expected);
          return;
        }
        r.cases += expected;
      }
}

inline void run_prop29(const CheckSelection& sel, CheckResult& r) {
  for (const Field* f : sel.fields)
    for (const FormParams& p : all_form_params(f)) {
      if (p.diag_subgroup() == p.lambda()) continue;
      for (std::size_t n = 1; n <= std::min<std::size_t>(sel.max_dim, 2); ++n)
        check_budget(pow_clamped(f->order(), n * n, sel.budget), sel.budget,
                     "negligible-set enumeration");
    }
  bool applicable = false;
  for (const Field* f : sel.fields)
    for (const FormParams& p : all_form_params(f)) {
      if (p.diag_subgroup() == p.lambda()) continue;
      applicable = true;
      FormParams shrunk(f, p.epsilon(), p.diag_subgroup());
      auto raw_member = [&](const FormParams& pp, const Matrix& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
          for (std::size_t j = 0; j < m.cols(); ++j)
            if (m.at(j, i) != -(pp.epsilon() * f->involve(m.at(i, j))))
              return false;
        for (const Vec& v : all_vectors(f, m.rows()))
          if (!pp.lambda().contains(sesq_value(m, v, v))) return false;
        return true;
      };
      for (std::size_t n = 1; n <= std::min<std::size_t>(sel.max_dim, 2); ++n) {
        std::vector<Elem> elems = f->elements();
        std::vector<std::size_t> digit(n * n, 0);
        long total = pow_clamped(f->order(), n * n, sel.budget);
        for (long idx = 0; idx < total; ++idx) {
          Matrix m(f, n, n);
          for (std::size_t c = 0; c < n * n; ++c)
            m.at(c / n, c % n) = elems[digit[c]];
          bool a = raw_member(p, m);
          if (a != raw_member(shrunk, m) || a != x_membership(p, m) ||
              a != x_membership(shrunk, m)) {
            r.passed = false;
            r.detail = "negligible sets diverge at " + params_tag(p) + " n=" +
                       std::to_string(n);
            return;
          }
          ++r.cases;
          std::size_t pos = 0;
          while (pos < digit.size() && ++digit[pos] == elems.size())
            digit[pos++] = 0;
        }
      }
    }
  if (!applicable) {
    r.skipped = true;
    r.detail = "no selected parameters have a strictly smaller multiplier core";
  }
}

inline void run_witt_exhaustive(const CheckSelection& sel, CheckResult& r) {
  prescan_budget(sel, sel.max_dim, true, "partial-isometry enumeration");
  long non_isometric = 0, kernel_rejected = 0;
  for (const Field* f : sel.fields)
    for (const FormParams& p : all_form_params(f))
      for (std::size_t n = 1; n <= sel.max_dim; ++n) {
        std::vector<Subspace> subs = all_subspaces(f, n);
        for (const FormClass& q : all_form_classes(p, n)) {
          FormedSpace e(q);
          const Matrix& omega = q.omega();
          for (const Subspace& u : subs) {
            const std::size_t d = u.dim();
            std::vector<Vec> dom;
            std::vector<Elem> dom_q;
            for (std::size_t i = 0; i < d; ++i) {
              dom.push_back(u.basis_row(i));
              dom_q.push_back(q.q_value(dom.back()));
            }
            for (const Subspace& w : subs) {
              if (w.dim() != d) continue;
              for_each_basis_tuple(w, [&](const Matrix& img) {
                if (!r.passed) return;
                // Necessary pointwise probes (Q on rows, omega on pairs)
                // reject most tuples before the certifying constructor.
                for (std::size_t i = 0; i < d; ++i) {
                  Vec ri = img.row(i);
                  if (q.q_value(ri) != dom_q[i]) {
                    ++non_isometric;
                    return;
                  }
                  for (std::size_t j = i + 1; j < d; ++j)
                    if (sesq_value(omega, ri, img.row(j)) !=
                        sesq_value(omega, dom[i], dom[j])) {
                      ++non_isometric;
                      return;
                    }
                }
                try {
                  PartialIsometry part(q, u.basis(), img);
                  try {
                    WittResult res = witt_extend(ExtensionProblem(e, part));
                    (void)res;
                    ++r.cases;
                  } catch (const HypothesisError&) {
                    ++kernel_rejected;
                  }
                } catch (const HypothesisError&) {
                  ++non_isometric;
                } catch (const Error& err) {
                  r.passed = false;
                  r.detail = "extension failed at " + params_tag(p) + " n=" +
                             std::to_string(n) + ": " + err.what();
                }
              });
              if (!r.passed) return;
            }
          }
        }
      }
  r.detail = std::to_string(r.cases) + " extended, " +
             std::to_string(kernel_rejected) + " kernel-rejected, " +
             std::to_string(non_isometric) + " non-isometric";
}

inline void run_transitivity(const CheckSelection& sel, CheckResult& r) {
  prescan_budget(sel, sel.max_dim, true, "isometry enumeration");
  for (const Field* f : sel.fields)
    for (const FormParams& p : all_form_params(f))
      for (std::size_t n = 1; n <= sel.max_dim; ++n) {
        std::vector<Subspace> subs = all_subspaces(f, n);
        for (const FormClass& q : all_form_classes(p, n)) {
          FormedSpace e(q);
          GroupCensus census = enumerate_isometries(e, sel.budget);
          std::vector<Subspace> isotropics;
          for (const Subspace& s : subs)
            if (e.is_isotropic(s)) isotropics.push_back(s);
          std::set<std::pair<std::size_t, std::size_t>> seen;
          for (const Orbit& o : orbit_partition(census, isotropics)) {
            if (!seen.insert({o.dim, o.radical_meet}).second) {
              r.passed = false;
              r.detail = "two orbits share (dim, radical meet) at " +
                         params_tag(p) + " n=" + std::to_string(n);
              return;
            }
            for (const Subspace& m : o.members)
              if (m.dim() != o.dim ||
                  intersect(m, e.radical()).dim() != o.radical_meet) {
                r.passed = false;
                r.detail = "orbit members disagree on the invariant at " +
                           params_tag(p);
                return;
              }
            ++r.cases;
          }
        }
      }
}

inline void run_lemma36(const CheckSelection& sel, CheckResult& r) {
  prescan_budget(sel, sel.max_dim, true, "pointwise-fix enumeration");
  for (const Field* f : sel.fields)
    for (const FormParams& p : all_form_params(f))
      for (std::size_t n = 1; n <= sel.max_dim; ++n) {
        std::vector<Subspace> subs = all_subspaces(f, n);
        for (const FormClass& q : all_form_classes(p, n)) {
          FormedSpace e(q);
          GroupCensus census = enumerate_isometries(e, sel.budget);
          for (const Subspace& a : subs) {
            Subspace perp = e.orthogonal(a);
            for (const Isometry& g : census.elements()) {
              if (a.basis() * g.matrix() != a.basis()) continue;
              bool ok = map_image(perp, g.matrix()) == perp;
              for (std::size_t i = 0; ok && i < n; ++i) {
                Vec ei(n, f->zero());
                ei[i] = f->one();
                ok = perp.contains(sub_vec(g.apply(ei), ei));
              }
              if (!ok) {
                r.passed = false;
                r.detail = "an isometry fixing a subspace escapes its "
                           "orthogonal at " + params_tag(p) + " n=" +
                           std::to_string(n);
                return;
              }
              ++r.cases;
            }
          }
        }
      }
}

inline void run_lemma38(const CheckSelection& sel, CheckResult& r) {
  prescan_budget(sel, sel.max_dim, false, "radical-bound form enumeration");
  for (const Field* f : sel.fields)
    for (const FormParams& p : all_form_params(f))
      for (std::size_t n = 1; n <= sel.max_dim; ++n) {
        std::vector<Subspace> subs = all_subspaces(f, n);
        for (const FormClass& q : all_form_classes(p, n)) {
          FormedSpace e(q);
          for (const Subspace& u : subs) {
            if (!e.is_isotropic(u)) continue;
            Subspace uperp = e.orthogonal(u);
            for (const Subspace& w : subs) {
              if (sum(w, uperp) != e.full()) continue;
              bool ok = e.radical().contains(intersect(u, e.orthogonal(w)));
              if (ok && e.is_isotropic(w))
                ok = e.radical().contains(intersect(u, w));
              if (!ok) {
                r.passed = false;
                r.detail = "a meet escapes the radical at " + params_tag(p) +
                           " n=" + std::to_string(n);
                return;
              }
              ++r.cases;
            }
          }
        }
      }
}

}  // namespace detail

inline const std::vector<std::pair<std::string, std::string>>& check_catalog() {
  static const std::vector<std::pair<std::string, std::string>> catalog{
      {"eq1", "Q(v+w) - Q(v) - Q(w) = omega(v, w) for every class and pair"},
      {"prop27",
       "(omega, Q) determines the class; omega alone at maximal lambda; Q "
       "alone when lambda is proper"},
      {"thm1-counts", "form-class counts match the closed product formula"},
      {"witt-exhaustive",
       "every kernel-compatible partial isometry extends to a certified "
       "global isometry"},
      {"transitivity",
       "isometry orbits of isotropic subspaces are cut out by (dim, dim of "
       "the radical meet)"},
      {"lemma36",
       "isometries fixing a subspace pointwise preserve its orthogonal and "
       "are the identity modulo it"},
      {"lemma38",
       "U isotropic and W + U-perp = E force U meet W-perp into the radical"},
      {"prop29",
       "negligibility is unchanged by shrinking lambda to its multiplier "
       "core"},
      {"propA1", "extremal lambda subgroups match their closed forms"},
  };
  return catalog;
}

inline CheckResult run_check(const std::string& name, const CheckSelection& sel) {
  require(!sel.fields.empty(), "check selection: no fields selected");
  for (const Field* f : sel.fields)
    require(f->finite(), "check selection: finite fields only");
  CheckResult r;
  r.name = name;
  r.passed = true;
  for (const auto& [known, description] : check_catalog())
    if (known == name) r.description = description;
  require(!r.description.empty(), "unknown check: " + name);
  try {
    if (name == "eq1") detail::run_eq1(sel, r);
    else if (name == "prop27") detail::run_prop27(sel, r);
    else if (name == "thm1-counts") detail::run_thm1_counts(sel, r);
    else if (name == "witt-exhaustive") detail::run_witt_exhaustive(sel, r);
    else if (name == "transitivity") detail::run_transitivity(sel, r);
    else if (name == "lemma36") detail::run_lemma36(sel, r);
    else if (name == "lemma38") detail::run_lemma38(sel, r);
    else if (name == "prop29") detail::run_prop29(sel, r);
    else if (name == "propA1") detail::run_propA1(sel, r);
  } catch (const BudgetError&) {
    throw;
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& err) {
    r.passed = false;
    r.detail = err.what();
  }
  return r;
}

inline std::vector<CheckResult> run_all_checks(const CheckSelection& sel) {
  std::vector<CheckResult> out;
  for (const auto& [name, description] : check_catalog())
    out.push_back(run_check(name, sel));
  return out;
}

}  // namespace formkit
