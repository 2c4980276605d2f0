#pragma once

// The calculus of (sigma, epsilon, lambda)-quadratic forms. A form is a
// sesquilinear matrix taken modulo the subgroup X of negligible matrices
// (skew with diagonal in a prescribed subgroup); we store the canonical
// representative, which makes class equality a syntactic check.
//
// Matrix convention: q(v, w) = sum_ij sigma(v_i) M_ij w_j, so the first
// argument is conjugated and q(e_i, e_j) = M_ij.

#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "formkit/error.hpp"
#include "formkit/field.hpp"
#include "formkit/linalg.hpp"

namespace formkit {

inline Elem sesq_value(const Matrix& m, const Vec& v, const Vec& w) {
  require(v.size() == m.rows() && w.size() == m.cols(),
          "sesquilinear evaluation: shape mismatch");
  const Field* f = m.field();
  Elem acc = f->zero();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    Elem s = f->involve(v[i]);
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (w[j].is_zero()) continue;
      acc = acc + s * m.at(i, j) * w[j];
    }
  }
  return acc;
}

/// The tuple (field, epsilon, lambda). Validated at construction: epsilon has
/// norm one and lambda sits between the extremal admissible subgroups. Also
/// carries the largest multiplier-closed subgroup of lambda, which governs
/// which diagonals are negligible (for every closed lambda it is lambda
/// itself).
class FormParams {
 public:
  FormParams(const Field* f, const Elem& eps, const AdditiveSubgroup& lambda)
      : f_(f), eps_(eps), lambda_(lambda), diag_(closure_core(lambda)) {
    f_->check(eps_);
    require(lambda_.field() == f_, "form parameters: lambda lives in a different field");
    require(f_->norm(eps_).is_one(), "form parameters: epsilon must have norm one");
    require(subgroup_validate(f_, eps_, lambda_),
            "form parameters: lambda is not admissible for this epsilon");
  }

  const Field* field() const { return f_; }
  const Elem& epsilon() const { return eps_; }
  const AdditiveSubgroup& lambda() const { return lambda_; }

  /// Subgroup governing negligible diagonal entries.
  const AdditiveSubgroup& diag_subgroup() const { return diag_; }

  bool operator==(const FormParams& o) const {
    return f_ == o.f_ && eps_ == o.eps_ && lambda_ == o.lambda_;
  }
  bool operator!=(const FormParams& o) const { return !(*this == o); }

 private:
  const Field* f_;
  Elem eps_;
  AdditiveSubgroup lambda_;
  AdditiveSubgroup diag_;
};

enum class FormKind { Hermitian, Alternating, Quadratic, ModLambdaQuadratic };

inline const char* to_string(FormKind k) {
  switch (k) {
    case FormKind::Hermitian: return "hermitian";
    case FormKind::Alternating: return "alternating";
    case FormKind::Quadratic: return "quadratic";
    case FormKind::ModLambdaQuadratic: return "mod-lambda-quadratic";
  }
  return "?";
}

/// Which classical theory the parameters present. A nontrivial involution
/// always gives Hermitian forms. For the identity involution away from
/// characteristic 2 the sign of epsilon decides (lambda is forced); in
/// characteristic 2 the choice of lambda decides.
inline FormKind classify(const FormParams& p) {
  const Field* f = p.field();
  if (!f->trivial_involution()) return FormKind::Hermitian;
  if (f->characteristic() != 2)
    return p.epsilon().is_one() ? FormKind::Quadratic : FormKind::Alternating;
  if (p.lambda().is_all()) return FormKind::Alternating;
  if (p.lambda().is_zero()) return FormKind::Quadratic;
  return FormKind::ModLambdaQuadratic;
}

/// Membership in X: the skew condition M_ji = -eps * sigma(M_ij) together
/// with every diagonal entry negligible. Diagonal entries are tested against
/// the multiplier-closed core of lambda, which makes the basis check
/// equivalent to f(v, v) in lambda for every vector v.
inline bool x_membership(const FormParams& p, const Matrix& m) {
  require(m.is_square(), "x membership: matrix is not square");
  require(m.field() == p.field(), "x membership: field mismatch");
  const Field* f = p.field();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!p.diag_subgroup().contains(m.at(i, i))) return false;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m.at(j, i) != -(p.epsilon() * f->involve(m.at(i, j)))) return false;
  }
  return true;
}

class FormClass {
 public:
  FormClass(FormParams p, const Matrix& m)
      : p_(std::move(p)),
        rep_(canonical(p_, m)),
        omega_(rep_ + rep_.transposed().involved().scaled(p_.epsilon())) {}

  static FormClass zero(const FormParams& p, std::size_t n) {
    return FormClass(p, Matrix(p.field(), n, n));
  }

  const FormParams& params() const { return p_; }
  const Field* field() const { return p_.field(); }
  std::size_t dim() const { return rep_.rows(); }

  /// Canonical representative: strictly upper accumulation, diagonal reduced
  /// to its coset representative, zero below the diagonal.
  const Matrix& rep() const { return rep_; }

  bool is_zero() const {
    for (std::size_t i = 0; i < rep_.rows(); ++i)
      for (std::size_t j = 0; j < rep_.cols(); ++j)
        if (!rep_.at(i, j).is_zero()) return false;
    return true;
  }

  /// Matrix of omega_q(v, w) = q(v, w) + eps * sigma(q(w, v)); independent of
  /// the representative.
  const Matrix& omega() const { return omega_; }

  /// Raw representative value q(v, w).
  Elem value(const Vec& v, const Vec& w) const { return sesq_value(rep_, v, w); }

  Elem omega_value(const Vec& v, const Vec& w) const {
    return sesq_value(omega(), v, w);
  }

  /// Q_q(v) as its canonical coset representative modulo lambda.
  Elem q_value(const Vec& v) const {
    return coset_reduce(sesq_value(rep_, v, v), p_.lambda());
  }

  bool operator==(const FormClass& o) const {
    require(p_ == o.p_, "comparing forms with different parameters");
    require(dim() == o.dim(), "comparing forms of different dimensions");
    return rep_ == o.rep_;
  }
  bool operator!=(const FormClass& o) const { return !(*this == o); }

  /// Stable key for containers holding forms with the same parameters.
  std::string key() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < rep_.rows(); ++i)
      for (std::size_t j = 0; j < rep_.cols(); ++j) {
        if (field()->finite())
          os << rep_.at(i, j).index();
        else
          os << field()->to_string(rep_.at(i, j));
        os << ",";
      }
    return os.str();
  }

 private:
  static Matrix canonical(const FormParams& p, const Matrix& m) {
    require(m.is_square(), "form: matrix is not square");
    require(m.field() == p.field(), "form: matrix field differs from the parameters");
    const Field* f = p.field();
    Matrix t(f, m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
      t.at(i, i) = coset_reduce(m.at(i, i), p.diag_subgroup());
      for (std::size_t j = i + 1; j < m.cols(); ++j)
        t.at(i, j) = m.at(i, j) + p.epsilon() * f->involve(m.at(j, i));
    }
    return t;
  }

  FormParams p_;
  Matrix rep_;
  Matrix omega_;
};

inline bool form_equal(const FormClass& a, const FormClass& b) { return a == b; }

/// Q_q(v+w) - Q_q(v) - Q_q(w) - omega_q(v, w), reduced modulo lambda.
/// Identically zero.
inline Elem eq1_defect(const FormClass& q, const Vec& v, const Vec& w) {
  Vec s = add_vec(v, w);
  Elem raw = q.value(s, s) - q.value(v, v) - q.value(w, w) - q.omega_value(v, w);
  return coset_reduce(raw, q.params().lambda());
}

/// Pullback along v -> v * g: the form (v, w) -> q(v g, w g).
inline FormClass pullback(const Matrix& g, const FormClass& q) {
  require(g.field() == q.field(), "pullback: field mismatch");
  require(g.cols() == q.dim(), "pullback: shape mismatch");
  Matrix m = g.involved() * q.rep() * g.transposed();
  return FormClass(q.params(), m);
}

/// Multiplication by a nonzero scalar; transports the form to the parameters
/// (field, a sigma(a)^-1 eps, a lambda). With a Hilbert-90 solution as the
/// scalar this normalizes any nontrivial-involution form to epsilon = 1.
inline FormClass scale_form(const FormClass& q, const Elem& a) {
  require(!a.is_zero(), "scale_form: zero scalar");
  const Field* f = q.field();
  f->check(a);
  Elem eps2 = a * f->inv(f->involve(a)) * q.params().epsilon();
  FormParams p2(f, eps2, q.params().lambda().scaled(a));
  return FormClass(p2, q.rep().scaled(a));
}

namespace detail {

/// First solution of a + eps * sigma(a) = w, element order; nullopt if none.
inline std::optional<Elem> trace_preimage(const Field* f, const Elem& eps, const Elem& w) {
  if (!f->finite()) {
    // sigma = id over the rationals: (1 + eps) a = w.
    Elem c = f->one() + eps;
    if (c.is_zero()) return w.is_zero() ? std::optional<Elem>(f->zero()) : std::nullopt;
    return w / c;
  }
  for (const Elem& a : f->elements())
    if (a + eps * f->involve(a) == w) return a;
  return std::nullopt;
}

}  // namespace detail

/// Lift of an epsilon-hermitian matrix: a form class q with omega() equal to
/// the input. Fails only when the diagonal has no trace preimage, which
/// happens exactly for the identity involution in characteristic 2 with a
/// non-alternating input.
inline FormClass from_classical(const FormParams& p, const Matrix& omega) {
  require(omega.is_square(), "omega lift: matrix is not square");
  require(omega.field() == p.field(), "omega lift: field mismatch");
  const Field* f = p.field();
  for (std::size_t i = 0; i < omega.rows(); ++i)
    for (std::size_t j = 0; j < omega.cols(); ++j)
      require(omega.at(j, i) == p.epsilon() * f->involve(omega.at(i, j)),
              "omega lift: matrix is not epsilon-hermitian");
  Matrix m(f, omega.rows(), omega.cols());
  for (std::size_t i = 0; i < omega.rows(); ++i) {
    for (std::size_t j = i + 1; j < omega.cols(); ++j) m.at(i, j) = omega.at(i, j);
    auto a = detail::trace_preimage(f, p.epsilon(), omega.at(i, i));
    require(a.has_value(), "omega lift: unliftable diagonal (not a trace value)");
    m.at(i, i) = *a;
  }
  FormClass q(p, m);
  certify(q.omega() == omega, "omega lift: round trip failed");
  return q;
}

/// Lift of a quadratic function given by representatives of Q on the basis
/// vectors and the pair values B_Q(e_i, e_j) for i < j (read from the strict
/// upper triangle of `pairs`).
inline FormClass from_classical(const FormParams& p, const Vec& q_on_basis,
                                const Matrix& pairs) {
  const std::size_t n = q_on_basis.size();
  require(pairs.rows() == n && pairs.cols() == n, "quadratic lift: shape mismatch");
  require(pairs.field() == p.field(), "quadratic lift: field mismatch");
  Matrix m(p.field(), n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m.at(i, i) = q_on_basis[i];
    for (std::size_t j = i + 1; j < n; ++j) m.at(i, j) = pairs.at(i, j);
  }
  return FormClass(p, m);
}

/// All admissible (epsilon, lambda) pairs over a finite field, in a
/// deterministic order (epsilon by element index, lambda by subgroup basis).
inline std::vector<FormParams> all_form_params(const Field* f) {
  std::vector<FormParams> out;
  if (!f->finite()) {
    for (long e : {1L, -1L}) {
      for (bool full : {false, true}) {
        AdditiveSubgroup lam =
            full ? AdditiveSubgroup::all(f) : AdditiveSubgroup::zero(f);
        if (subgroup_validate(f, f->from_int(e), lam))
          out.emplace_back(f, f->from_int(e), lam);
      }
    }
    return out;
  }
  const Field* prime = Field::prime(f->characteristic());
  std::vector<Subspace> coeff_spaces = all_subspaces(prime, f->degree());
  for (const Elem& eps : f->norm_one_elements()) {
    for (const Subspace& s : coeff_spaces) {
      std::vector<std::vector<int>> rows;
      for (std::size_t i = 0; i < s.dim(); ++i) {
        std::vector<int> r;
        for (std::size_t j = 0; j < s.ambient(); ++j)
          r.push_back(static_cast<int>(s.basis().at(i, j).index()));
        rows.push_back(std::move(r));
      }
      AdditiveSubgroup lam = AdditiveSubgroup::from_basis_rows(f, rows);
      if (subgroup_validate(f, eps, lam)) out.emplace_back(f, eps, lam);
    }
  }
  return out;
}

/// Representatives of F modulo the negligible-diagonal subgroup.
inline std::vector<Elem> diag_representatives(const FormParams& p) {
  std::vector<Elem> out;
  for (const Elem& a : p.field()->elements())
    if (coset_reduce(a, p.diag_subgroup()) == a) out.push_back(a);
  return out;
}

/// Every form class on dimension n, enumerated through canonical
/// representatives (strict upper triangle free, diagonal over coset
/// representatives).
inline std::vector<FormClass> all_form_classes(const FormParams& p, std::size_t n) {
  const Field* f = p.field();
  require(f->finite(), "all_form_classes: finite fields only");
  std::vector<Elem> diag = diag_representatives(p);
  std::vector<Elem> elems = f->elements();

  std::vector<std::pair<std::size_t, std::size_t>> upper;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) upper.emplace_back(i, j);

  unsigned long long total = 1;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    total *= elems.size();
    require(total <= 4'000'000, "all_form_classes: enumeration too large");
  }
  for (std::size_t i = 0; i < n; ++i) {
    total *= diag.size();
    require(total <= 4'000'000, "all_form_classes: enumeration too large");
  }

  std::vector<FormClass> out;
  out.reserve(total);
  for (unsigned long long idx = 0; idx < total; ++idx) {
    unsigned long long t = idx;
    Matrix m(f, n, n);
    for (auto [i, j] : upper) {
      m.at(i, j) = elems[t % elems.size()];
      t /= elems.size();
    }
    for (std::size_t i = 0; i < n; ++i) {
      m.at(i, i) = diag[t % diag.size()];
      t /= diag.size();
    }
    out.emplace_back(p, m);
  }
  return out;
}

}  // namespace formkit
