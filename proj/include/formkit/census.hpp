#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "formkit/isometry.hpp"
#include "formkit/space.hpp"

namespace formkit {

inline constexpr long kDefaultBudget = 1L << 20;

namespace detail {

inline bool elem_less(const Elem& a, const Elem& b) {
  if (a.field()->finite()) return a.index() < b.index();
  return a.rational() < b.rational();
}

inline std::string matrix_key(const Matrix& m) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Elem& e = m.at(i, j);
      s += e.field()->finite() ? std::to_string(e.index())
                               : e.field()->to_string(e);
      s += ',';
    }
  return s;
}

inline bool matrix_lex_less(const Matrix& a, const Matrix& b) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (a.at(i, j) != b.at(i, j)) return elem_less(a.at(i, j), b.at(i, j));
  return false;
}

inline bool subspace_less(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  return matrix_lex_less(a.basis(), b.basis());
}

}  // namespace detail

/// One orbit of the isometry group acting on a family of subspaces. Members
/// are sorted; the first one (echelon-basis lexicographic minimum) is the
/// orbit representative. Every isometry preserves the radical, so the
/// invariant pair (dim, dim of the meet with the radical) is constant along
/// the orbit.
struct Orbit {
  std::vector<Subspace> members;
  std::size_t dim = 0;
  std::size_t radical_meet = 0;
};

/// The full isometry group of a formed space as an explicit element list,
/// sorted, with the orbit partition of the building attached.
class GroupCensus {
 public:
  GroupCensus(FormedSpace e, std::vector<Isometry> elements)
      : e_(std::move(e)), elems_(std::move(elements)) {
    std::sort(elems_.begin(), elems_.end(),
              [](const Isometry& a, const Isometry& b) {
                return detail::matrix_lex_less(a.matrix(), b.matrix());
              });
    keys_.reserve(elems_.size());
    for (const Isometry& g : elems_) keys_.push_back(detail::matrix_key(g.matrix()));
    std::sort(keys_.begin(), keys_.end());
    certify(std::adjacent_find(keys_.begin(), keys_.end()) == keys_.end(),
            "census: duplicate elements");
    certify(contains(Matrix::identity(e_.field(), e_.dim())),
            "census: identity is missing");
    for (const Isometry& g : elems_)
      certify(contains(g.inverse().matrix()), "census: an inverse is missing");
  }

  const FormedSpace& space() const { return e_; }
  const std::vector<Isometry>& elements() const { return elems_; }
  std::size_t order() const { return elems_.size(); }

  bool contains(const Matrix& g) const {
    return std::binary_search(keys_.begin(), keys_.end(),
                              detail::matrix_key(g));
  }

  /// Full product-closure certificate, quadratic in the order.
  void verify_closure() const {
    for (const Isometry& g : elems_)
      for (const Isometry& h : elems_)
        certify(contains(g.matrix() * h.matrix()),
                "census: a product escapes the element list");
  }

 private:
  FormedSpace e_;
  std::vector<Isometry> elems_;
  std::vector<std::string> keys_;
};

/// All invertible matrices preserving the form, by exhaustive filtering of
/// the |F|^(n^2) candidates. Refuses to start past the candidate budget.
inline GroupCensus enumerate_isometries(FormedSpace e,
                                        long budget = kDefaultBudget) {
  require(e.field()->finite(),
          "isometry enumeration: infinite-field-unsupported");
  const Field* f = e.field();
  const long q = f->order();
  const std::size_t n = e.dim();
  long total = 1;
  for (std::size_t i = 0; i < n * n; ++i) {
    total *= q;
    if (total > budget)
      throw BudgetError("isometry enumeration: |F|^(n^2) candidates exceed the "
                        "budget of " + std::to_string(budget));
  }
  const std::vector<Elem> elems = f->elements();
  const FormClass& form = e.form();
  const Matrix& omega = form.omega();
  Vec e0(n, f->zero());
  if (n > 0) e0[0] = f->one();
  const Elem diag0 = n > 0 ? form.q_value(e0) : f->zero();
  std::vector<Isometry> found;
  std::vector<std::size_t> digit(n * n, 0);
  for (long idx = 0; idx < total; ++idx) {
    Matrix m(f, n, n);
    for (std::size_t c = 0; c < n * n; ++c) m.at(c / n, c % n) = elems[digit[c]];
    // Necessary probes (first diagonal Q value, first omega pair) reject most
    // candidates before the full pullback comparison.
    bool plausible = true;
    if (n > 0) {
      Vec r0 = m.row(0);
      plausible = form.q_value(r0) == diag0;
      if (plausible && n > 1)
        plausible = sesq_value(omega, r0, m.row(1)) == omega.at(0, 1);
    }
    if (plausible && e.is_isometry(m)) found.emplace_back(form, m);
    std::size_t pos = 0;
    while (pos < digit.size() && ++digit[pos] == elems.size()) digit[pos++] = 0;
  }
  return GroupCensus(std::move(e), std::move(found));
}

/// Partition a family of subspaces into orbits under the census group. Only
/// images landing inside the given family are linked, so the result is the
/// restriction of the orbit relation to the family.
inline std::vector<Orbit> orbit_partition(const GroupCensus& census,
                                          const std::vector<Subspace>& subspaces) {
  const FormedSpace& e = census.space();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    require(subspaces[i].field() == e.field() &&
                subspaces[i].ambient() == e.dim(),
            "orbit partition: subspace lives in a different space");
    index[detail::matrix_key(subspaces[i].basis())] = i;
  }

  std::vector<std::size_t> parent(subspaces.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  for (std::size_t i = 0; i < subspaces.size(); ++i)
    for (const Isometry& g : census.elements()) {
      Subspace img = map_image(subspaces[i], g.matrix());
      auto it = index.find(detail::matrix_key(img.basis()));
      if (it == index.end()) continue;
      std::size_t a = find(i), b = find(it->second);
      if (a != b) parent[a] = b;
    }

  std::map<std::size_t, std::vector<Subspace>> buckets;
  for (std::size_t i = 0; i < subspaces.size(); ++i)
    buckets[find(i)].push_back(subspaces[i]);
  std::vector<Orbit> out;
  for (auto& [root, members] : buckets) {
    std::sort(members.begin(), members.end(), detail::subspace_less);
    Orbit o;
    o.dim = members.front().dim();
    o.radical_meet = intersect(members.front(), e.radical()).dim();
    o.members = std::move(members);
    out.push_back(std::move(o));
  }
  std::sort(out.begin(), out.end(), [](const Orbit& a, const Orbit& b) {
    return detail::subspace_less(a.members.front(), b.members.front());
  });
  return out;
}

/// Orbit partition of the building, already grouped by the census group.
inline std::vector<Orbit> building_orbits(const GroupCensus& census) {
  return orbit_partition(census, census.space().building());
}

// ---- classical group identification ----

namespace detail {

inline long gl_order(long q, std::size_t n) {
  long qn = 1;
  for (std::size_t i = 0; i < n; ++i) qn *= q;
  long o = 1, qi = 1;
  for (std::size_t i = 0; i < n; ++i, qi *= q) o *= qn - qi;
  return o;
}

inline long sp_order(long q, std::size_t m) {
  long o = 1;
  for (std::size_t i = 1; i <= m * m; ++i) o *= q;
  long q2i = 1;
  for (std::size_t i = 1; i <= m; ++i) {
    q2i *= q * q;
    o *= q2i - 1;
  }
  return o;
}

inline long unitary_order(long q0, std::size_t n) {
  long o = 1;
  for (std::size_t i = 0; i < n * (n - 1) / 2; ++i) o *= q0;
  long q0i = 1, sign = -1;
  for (std::size_t i = 1; i <= n; ++i) {
    q0i *= q0;
    o *= q0i - sign;
    sign = -sign;
  }
  return o;
}

/// plus = true for the split (hyperbolic) type.
inline long orthogonal_even_order(long q, std::size_t m, bool plus) {
  long o = 2;
  for (std::size_t i = 0; i < m * (m - 1); ++i) o *= q;
  long qm = 1;
  for (std::size_t i = 0; i < m; ++i) qm *= q;
  o *= plus ? qm - 1 : qm + 1;
  long q2i = 1;
  for (std::size_t i = 1; i + 1 <= m; ++i) {
    q2i *= q * q;
    o *= q2i - 1;
  }
  return o;
}

inline long orthogonal_odd_order(long q, std::size_t m) {
  long o = 2;
  for (std::size_t i = 0; i < m * m; ++i) o *= q;
  long q2i = 1;
  for (std::size_t i = 1; i <= m; ++i) {
    q2i *= q * q;
    o *= q2i - 1;
  }
  return o;
}

inline long subfield_order(long q) {
  long r = 1;
  while (r * r < q) ++r;
  certify(r * r == q, "classical report: field order is not a square");
  return r;
}

}  // namespace detail

/// One identified standard space: the enumerated group order, the classical
/// label when the matching closed order formula agrees with the enumeration
/// (empty label otherwise), and the per-rank orbit counts of the building.
struct ClassicalEntry {
  std::string form;  // "hyperbolic" or "euclidean"
  std::size_t dim = 0;
  long order = 0;
  std::string label;
  long formula = 0;  // 0 when no classical formula applies
  std::vector<std::pair<std::size_t, std::size_t>> orbit_table;  // (dim, orbits)
};

struct ClassicalReport {
  FormParams params;
  std::size_t n;
  std::vector<ClassicalEntry> entries;
};

namespace detail {

inline ClassicalEntry identify_space(const FormedSpace& e, const char* kind,
                                     long budget) {
  GroupCensus census = enumerate_isometries(e, budget);
  ClassicalEntry entry;
  entry.form = kind;
  entry.dim = e.dim();
  entry.order = static_cast<long>(census.order());

  std::map<std::size_t, std::size_t> ranks;
  std::size_t witt_index = 0;
  for (const Orbit& o : building_orbits(census)) ++ranks[o.dim];
  for (const Subspace& w : e.building()) witt_index = std::max(witt_index, w.dim());
  entry.orbit_table.assign(ranks.begin(), ranks.end());

  const long q = e.field()->order();
  const std::size_t n = e.dim();
  const bool hyperbolic = entry.form == "hyperbolic";
  const bool euclidean = entry.form == "euclidean";
  std::string label;
  long formula = 0;
  switch (classify(e.params())) {
    case FormKind::Alternating:
      if (hyperbolic) {
        label = "Sp_" + std::to_string(n);
        formula = sp_order(q, n / 2);
      }
      break;
    case FormKind::Hermitian:
      if (hyperbolic || euclidean) {
        long q0 = subfield_order(q);
        label = hyperbolic ? "U_{" + std::to_string(n / 2) + "," +
                                 std::to_string(n / 2) + "}"
                           : "U_" + std::to_string(n);
        formula = unitary_order(q0, n);
      }
      break;
    case FormKind::Quadratic:
      if (hyperbolic) {
        label = "O_{" + std::to_string(n / 2) + "," + std::to_string(n / 2) + "}";
        formula = orthogonal_even_order(q, n / 2, true);
      } else if (euclidean && e.field()->characteristic() != 2) {
        label = "O_" + std::to_string(n);
        formula = n % 2 == 1 ? orthogonal_odd_order(q, n / 2)
                             : orthogonal_even_order(q, n / 2,
                                                     witt_index == n / 2);
      }
      break;
    case FormKind::ModLambdaQuadratic:
      break;
  }

  if (!label.empty() && formula == entry.order) {
    entry.label = label;
    entry.formula = formula;
  } else if (e.form().is_zero()) {
    entry.label = "GL_" + std::to_string(n);
    entry.formula = gl_order(q, n);
    certify(entry.formula == entry.order,
            "classical report: a trivial form's group is not the full linear "
            "group");
  }
  return entry;
}

}  // namespace detail

/// Identify the isometry group of an arbitrary formed space. The space is
/// matched against the standard hyperbolic and euclidean forms of its
/// parameters; classical labels only attach to a recognized standard space
/// (and only when certified), so an unrecognized form reports its order and
/// orbit table with an empty label.
inline ClassicalEntry identify_isometry_group(const FormedSpace& e,
                                              long budget = kDefaultBudget) {
  require(e.field()->finite(), "group identification: finite fields only");
  const FormParams& p = e.params();
  const std::size_t n = e.dim();
  const bool std_hyp =
      n % 2 == 0 && n > 0 && e.form() == hyperbolic_space(p, n / 2).form();
  const bool std_euc = !std_hyp && e.form() == euclidean_space(p, n).form();
  return detail::identify_space(
      e, std_hyp ? "hyperbolic" : std_euc ? "euclidean" : "generic", budget);
}

/// Identify the isometry groups of the standard spaces of dimension n (the
/// hyperbolic one exists for even n) with classical groups. A label is
/// attached only when certified: either the matching classical order formula
/// reproduces the enumerated order, or the form is the zero class and the
/// group is all of GL_n.
inline ClassicalReport classical_identification_report(
    const FormParams& p, std::size_t n, long budget = kDefaultBudget) {
  require(p.field()->finite(), "classical report: finite fields only");
  require(n >= 1, "classical report: dimension must be positive");
  ClassicalReport rep{p, n, {}};
  if (n % 2 == 0)
    rep.entries.push_back(
        detail::identify_space(hyperbolic_space(p, n / 2), "hyperbolic", budget));
  rep.entries.push_back(
      detail::identify_space(euclidean_space(p, n), "euclidean", budget));
  return rep;
}

}  // namespace formkit
