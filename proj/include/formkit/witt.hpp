#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "formkit/isometry.hpp"
#include "formkit/space.hpp"

namespace formkit {

/// An isometry of the whole space together with the construction cases
/// visited while building it, outermost reduction first.
struct WittResult {
  Isometry g;
  std::vector<std::string> case_trace;
};

/// A bijective isometry between two subspaces, packaged for extension and
/// validated on construction.
///
/// Plain problems check the kernel condition f(U meet K) = W meet K, where
/// K is the kernel of omega. Problems with a fixed subspace A check instead:
///   (1) U meet A = W meet A and f fixes it pointwise;
///   (2) f(u) - u lies in the orthogonal of A for every u in U;
///   (3) the kernel condition above.
class ExtensionProblem {
 public:
  ExtensionProblem(FormedSpace e, PartialIsometry f)
      : e_(std::move(e)), f_(std::move(f)) {
    validate_compatible();
    require_hyp(kernel_condition_holds(),
                "kernel condition violated: f(U meet K) != W meet K");
  }

  ExtensionProblem(FormedSpace e, PartialIsometry f, Subspace fix)
      : e_(std::move(e)), f_(std::move(f)), fix_(std::move(fix)) {
    validate_compatible();
    require(fix_->field() == e_.field() && fix_->ambient() == e_.dim(),
            "extension problem: fixed subspace lives in a different space");
    Subspace ua = intersect(f_.domain(), *fix_);
    bool fixes = ua == intersect(f_.codomain(), *fix_);
    for (std::size_t i = 0; fixes && i < ua.dim(); ++i)
      fixes = f_.apply(ua.basis_row(i)) == ua.basis_row(i);
    require_hyp(fixes,
                "relative condition (1) violated: f must fix U meet A = W meet A "
                "pointwise");
    Subspace aperp = e_.orthogonal(*fix_);
    bool shifts = true;
    for (std::size_t i = 0; shifts && i < f_.rank(); ++i)
      shifts = aperp.contains(
          sub_vec(f_.image_rows().row(i), f_.domain_rows().row(i)));
    require_hyp(shifts,
                "relative condition (2) violated: f must be the identity modulo "
                "the orthogonal of A");
    require_hyp(kernel_condition_holds(),
                "relative condition (3) violated: the kernel condition "
                "f(U meet K) = W meet K fails");
  }

  const FormedSpace& space() const { return e_; }
  const PartialIsometry& map() const { return f_; }
  const std::optional<Subspace>& fix() const { return fix_; }

 private:
  void validate_compatible() const {
    require(f_.form().params() == e_.params() && f_.form().dim() == e_.dim() &&
                f_.form() == e_.form(),
            "extension problem: map certified against a different form");
  }

  bool kernel_condition_holds() const {
    Subspace uk = intersect(f_.domain(), e_.kernel());
    return f_.image_of(uk) == intersect(f_.codomain(), e_.kernel());
  }

  FormedSpace e_;
  PartialIsometry f_;
  std::optional<Subspace> fix_;
};

/// Adjoin an identity block: the map keeping f on its domain and fixing C
/// pointwise. Requires C to meet the domain and the image trivially, and
/// either C orthogonal to both, or f of rank one moving a to b with C
/// orthogonal to b - a.
inline PartialIsometry extend_by_identity(const PartialIsometry& f,
                                          const Subspace& c) {
  require(c.field() == f.form().field() && c.ambient() == f.ambient_dim(),
          "extend_by_identity: subspace lives in a different space");
  Subspace a = f.domain(), b = f.codomain();
  require(intersect(c, a).is_zero() && intersect(c, b).is_zero(),
          "extend_by_identity: the identity block must meet the domain and the "
          "image trivially");
  FormedSpace e(f.form());
  bool both = e.orthogonal(a).contains(c) && e.orthogonal(b).contains(c);
  bool line = false;
  if (!both && f.rank() == 1) {
    Vec shift = sub_vec(f.image_rows().row(0), f.domain_rows().row(0));
    line = e.orthogonal(Subspace::span(e.field(), e.dim(), {shift})).contains(c);
  }
  require(both || line,
          "extend_by_identity: the identity block is not orthogonal to the "
          "moved vectors");
  try {
    return PartialIsometry(f.form(), f.domain_rows().stacked(c.basis()),
                           f.image_rows().stacked(c.basis()));
  } catch (const Error&) {
    throw CertificationError("extend_by_identity: certification failed");
  }
}

namespace detail {

/// First vector of mperp pairing nontrivially with both a and b. One exists
/// whenever mperp lies in neither a-perp nor b-perp: two proper subspaces
/// never cover. Over the rationals the basis rows and their pairwise sums
/// already contain a witness.
inline Vec pairing_vector(const FormedSpace& e, const Subspace& mperp,
                          const Vec& a, const Vec& b) {
  const FormClass& q = e.form();
  auto good = [&](const Vec& v) {
    return !q.omega_value(a, v).is_zero() && !q.omega_value(b, v).is_zero();
  };
  if (e.field()->finite()) {
    for (const Vec& v : subspace_vectors(mperp))
      if (good(v)) return v;
  } else {
    for (std::size_t i = 0; i < mperp.dim(); ++i)
      if (good(mperp.basis_row(i))) return mperp.basis_row(i);
    for (std::size_t i = 0; i < mperp.dim(); ++i)
      for (std::size_t j = i + 1; j < mperp.dim(); ++j) {
        Vec v = add_vec(mperp.basis_row(i), mperp.basis_row(j));
        if (good(v)) return v;
      }
  }
  throw CertificationError("witt: no pairing vector found");
}

/// Recursive core of the extension theorem. Peels one vector off the part of
/// the domain outside the kernel, extends the rest, and glues the peeled
/// vector back with an explicit case analysis.
inline std::pair<Isometry, std::vector<std::string>> witt_recurse(
    const FormedSpace& e, const PartialIsometry& f) {
  const Field* fld = e.field();
  const FormClass& q = e.form();
  const Subspace& k = e.kernel();
  Subspace u = f.domain();

  if (k.contains(u)) {
    certify(k.contains(f.codomain()), "witt base: image escaped the kernel");
    Subspace l = simultaneous_complement(u, f.codomain(), e.full());
    Matrix p = f.domain_rows().stacked(l.basis());
    Matrix pq = f.image_rows().stacked(l.basis());
    auto pinv = inverse(p);
    certify(pinv.has_value(), "witt base: domain basis failed to complete");
    return {Isometry(q, *pinv * pq), {"base"}};
  }

  Matrix bu = basis_through(intersect(u, k), u);
  std::vector<Vec> h_rows = bu.row_list();
  Vec a = h_rows.back();
  h_rows.pop_back();
  std::vector<Vec> h_images;
  h_images.reserve(h_rows.size());
  for (const Vec& r : h_rows) h_images.push_back(f.apply(r));
  PartialIsometry fh(q, Matrix::from_rows(fld, h_rows, e.dim()),
                     Matrix::from_rows(fld, h_images, e.dim()));
  auto [h, inner] = witt_recurse(e, fh);

  // Twist by the inverse: the remaining problem fixes H and sends a to b.
  Vec b = h.inverse().apply(f.apply(a));
  Vec bma = sub_vec(b, a);
  Subspace hsp = Subspace::span(fld, e.dim(), h_rows);
  Subspace perp = e.orthogonal(Subspace::span(fld, e.dim(), {bma}));

  std::string label;
  std::vector<Vec> prow, qrow;
  if (perp.is_full()) {
    label = "1";
    QuotientMap quo(e.full(), hsp);
    Subspace abar = Subspace::span(fld, quo.dim(), {quo.project(a)});
    Subspace bbar = Subspace::span(fld, quo.dim(), {quo.project(b)});
    Subspace lbar =
        simultaneous_complement(abar, bbar, Subspace::full(fld, quo.dim()));
    Subspace m = quo.preimage(lbar);
    prow = m.basis().row_list();
    qrow = prow;
    prow.push_back(a);
    qrow.push_back(b);
  } else if (!perp.contains(a)) {
    // b lies outside as well: omega(b, b - a) = omega(a - b, a).
    label = "2.1";
    prow = perp.basis().row_list();
    qrow = prow;
    prow.push_back(a);
    qrow.push_back(b);
  } else {
    certify(q.q_value(bma).is_zero(), "witt: Q(b - a) is not negligible");
    std::vector<Vec> wrows = h_rows;
    wrows.push_back(b);
    Subspace w = Subspace::span(fld, e.dim(), wrows);
    Subspace l = complement_containing(u, w, perp, k);
    Subspace m = sum(hsp, l);
    Vec v = pairing_vector(e, e.orthogonal(m), a, b);
    Elem qv = q.value(v, v);
    prow = m.basis().row_list();
    qrow = prow;
    prow.push_back(a);
    qrow.push_back(b);
    if (!perp.contains(v)) {
      label = "2.2.1";
      Elem d = fld->div(q.omega_value(a, v), q.omega_value(b, v));
      Elem c = fld->div((fld->one() - d * fld->involve(d)) * qv,
                        fld->involve(d) * q.omega_value(v, bma));
      prow.push_back(v);
      qrow.push_back(add_vec(scale_vec(c, bma), scale_vec(d, v)));
    } else {
      label = "2.2.2";
      std::optional<Vec> z;
      for (std::size_t i = 0; i < e.dim() && !z; ++i) {
        Vec cand = Matrix::identity(fld, e.dim()).row(i);
        if (!perp.contains(cand)) z = cand;
      }
      certify(z.has_value(), "witt: no axis vector outside a proper perp");
      Elem d = fld->div(q.omega_value(a, *z) - q.omega_value(b, *z),
                        q.omega_value(b, v));
      Elem c = fld->neg(fld->div(
          d * fld->involve(d) * qv + d * q.omega_value(*z, v),
          q.omega_value(*z, bma)));
      prow.push_back(*z);
      qrow.push_back(add_vec(*z, add_vec(scale_vec(c, bma), scale_vec(d, v))));
    }
  }

  Matrix p = Matrix::from_rows(fld, prow, e.dim());
  Matrix pq = Matrix::from_rows(fld, qrow, e.dim());
  auto pinv = inverse(p);
  certify(pinv.has_value(), "witt: case basis is not a basis");
  Isometry g = Isometry(q, *pinv * pq).then(h);
  std::vector<std::string> trace{"H-reduction", label};
  trace.insert(trace.end(), inner.begin(), inner.end());
  return {std::move(g), std::move(trace)};
}

}  // namespace detail

/// Extend a problem's map to a certified isometry of the whole space.
inline WittResult witt_extend(const ExtensionProblem& p) {
  require(!p.fix().has_value(),
          "witt_extend: the problem fixes a subspace; use relative_witt_extend");
  auto [g, trace] = detail::witt_recurse(p.space(), p.map());
  const PartialIsometry& f = p.map();
  for (std::size_t i = 0; i < f.rank(); ++i)
    certify(g.apply(f.domain_rows().row(i)) == f.image_rows().row(i),
            "witt_extend: result does not extend the given map");
  return {std::move(g), std::move(trace)};
}

/// Extend a problem's map to a certified isometry fixing the problem's
/// subspace pointwise. The map is first widened by the identity on a
/// complement of U meet A inside A; the widened problem re-validates its own
/// kernel condition, which does not follow from the relative conditions and
/// can fail honestly.
inline WittResult relative_witt_extend(const ExtensionProblem& p) {
  require(p.fix().has_value(),
          "relative_witt_extend: the problem fixes no subspace; use witt_extend");
  const FormedSpace& e = p.space();
  const PartialIsometry& f = p.map();
  const Subspace& a = *p.fix();

  Subspace a0 = complement_in(a, intersect(f.domain(), a));
  std::optional<PartialIsometry> widened;
  try {
    widened.emplace(e.form(), f.domain_rows().stacked(a0.basis()),
                    f.image_rows().stacked(a0.basis()));
  } catch (const Error&) {
    throw CertificationError(
        "relative extension: widening by the fixed complement failed");
  }
  WittResult out = witt_extend(ExtensionProblem(e, *widened));
  for (std::size_t i = 0; i < a.dim(); ++i)
    certify(out.g.apply(a.basis_row(i)) == a.basis_row(i),
            "relative extension: result moved the fixed subspace");
  out.case_trace.insert(out.case_trace.begin(), "relative");
  return out;
}

/// Move one totally isotropic subspace onto another by an isometry fixing U
/// pointwise. Requires U, W1, W2 totally isotropic and containing the
/// radical, dim W1 = dim W2, and W1 + U-perp = E = W2 + U-perp.
inline WittResult isotropic_transport(const FormedSpace& e, const Subspace& u,
                                      const Subspace& w1, const Subspace& w2) {
  const Subspace& r = e.radical();
  auto admit = [&](const Subspace& s, const char* name) {
    require(s.field() == e.field() && s.ambient() == e.dim(),
            std::string("transport: ") + name + " lives in a different space");
    require_hyp(e.is_isotropic(s),
                std::string("transport: ") + name + " must be totally isotropic");
    require_hyp(s.contains(r),
                std::string("transport: ") + name + " must contain the radical");
  };
  admit(u, "U");
  admit(w1, "W1");
  admit(w2, "W2");
  require_hyp(w1.dim() == w2.dim(),
              "transport: W1 and W2 must have equal dimension");
  Subspace uperp = e.orthogonal(u);
  require_hyp(sum(w1, uperp).is_full() && sum(w2, uperp).is_full(),
              "transport: W + U-perp must be the whole space");

  // Basis of W1 in three layers: the radical, then W1 meet U-perp, then the
  // rest. The radical is fixed, the middle layer goes to the matching layer
  // for W2, and each remaining vector moves inside its U-perp coset.
  Subspace mid1 = intersect(w1, uperp);
  Subspace mid2 = intersect(w2, uperp);
  certify(mid1.dim() == mid2.dim(), "transport: U-perp slices differ in size");
  Matrix m1 = basis_through(r, mid1);
  Matrix m2 = basis_through(r, mid2);
  Matrix full1 = basis_through(mid1, w1);
  Matrix reach = w2.basis().stacked(uperp.basis());

  std::vector<Vec> drow, irow;
  for (std::size_t i = 0; i < m1.rows(); ++i) {
    drow.push_back(m1.row(i));
    irow.push_back(i < r.dim() ? m1.row(i) : m2.row(i));
  }
  for (std::size_t i = mid1.dim(); i < full1.rows(); ++i) {
    Vec x = full1.row(i);
    auto sol = solve_row(reach, x);
    certify(sol.has_value(), "transport: W2 + U-perp failed to reach W1");
    Vec coeff(sol->begin(), sol->begin() + w2.dim());
    drow.push_back(x);
    irow.push_back(coeff * w2.basis());
  }
  std::optional<PartialIsometry> f;
  try {
    f.emplace(e.form(), Matrix::from_rows(e.field(), drow, e.dim()),
              Matrix::from_rows(e.field(), irow, e.dim()));
  } catch (const Error&) {
    throw CertificationError("transport: constructed map failed certification");
  }
  WittResult out = relative_witt_extend(ExtensionProblem(e, *f, u));
  certify(map_image(w1, out.g.matrix()) == w2,
          "transport: W1 does not land on W2");
  return out;
}

}  // namespace formkit
