#pragma once

// A formed space: a finite-dimensional space carrying a form class, with the
// derived geometry (kernel, radical, orthogonal complements, isotropy) and
// the buildings of isotropic subspaces.

#include <cstddef>
#include <vector>

#include "formkit/error.hpp"
#include "formkit/form.hpp"
#include "formkit/linalg.hpp"

namespace formkit {

class FormedSpace {
 public:
  explicit FormedSpace(FormClass q)
      : q_(std::move(q)), omega_(q_.omega()), kernel_(compute_kernel()),
        radical_(compute_radical()) {}

  const FormClass& form() const { return q_; }
  const FormParams& params() const { return q_.params(); }
  const Field* field() const { return q_.field(); }
  std::size_t dim() const { return q_.dim(); }
  const Matrix& omega() const { return omega_; }

  /// Kernel of v -> omega(-, v): vectors pairing trivially with everything.
  const Subspace& kernel() const { return kernel_; }

  /// Kernel vectors with vanishing Q; equals the kernel away from
  /// characteristic 2.
  const Subspace& radical() const { return radical_; }

  Subspace full() const { return Subspace::full(field(), dim()); }

  /// All v with omega(u, v) = 0 for every u in U. Contains the kernel;
  /// orthogonality is symmetric, so the one-sided definition is two-sided.
  Subspace orthogonal(const Subspace& u) const {
    require(u.field() == field() && u.ambient() == dim(),
            "orthogonal: subspace does not live in this space");
    if (u.is_zero()) return full();
    Matrix constraints = u.basis().involved() * omega_;
    return Subspace::row_space(nullspace(constraints));
  }

  /// The form pulled back to the rows of U's basis.
  FormClass restricted(const Subspace& u) const {
    require(u.field() == field() && u.ambient() == dim(),
            "restricted: subspace does not live in this space");
    return pullback(u.basis(), q_);
  }

  bool is_isotropic(const Subspace& u) const { return restricted(u).is_zero(); }

  bool preserves_form(const Matrix& g) const {
    require(g.rows() == dim() && g.cols() == dim(), "preserves_form: shape mismatch");
    return pullback(g, q_) == q_;
  }

  bool is_isometry(const Matrix& g) const {
    return preserves_form(g) && is_invertible(g);
  }

  /// Isotropic subspaces strictly between the radical and the whole space,
  /// sorted (dimension, then basis order).
  std::vector<Subspace> building() const {
    require(field()->finite(), "building: infinite-field-unsupported");
    std::vector<Subspace> out;
    for (const Subspace& w : all_subspaces(field(), dim())) {
      if (w.dim() <= radical_.dim() || w.dim() >= dim()) continue;
      if (!w.contains(radical_)) continue;
      if (is_isotropic(w)) out.push_back(w);
    }
    return out;
  }

  /// Building members W with W + U^perp = E.
  std::vector<Subspace> relative_building(const Subspace& u) const {
    require(field()->finite(), "relative_building: infinite-field-unsupported");
    require(u.contains(radical_) && is_isotropic(u),
            "relative_building: U must be isotropic and contain the radical");
    Subspace uperp = orthogonal(u);
    std::vector<Subspace> out;
    for (const Subspace& w : building())
      if (sum(w, uperp).is_full()) out.push_back(w);
    return out;
  }

 private:
  Subspace compute_kernel() const {
    return Subspace::row_space(nullspace(omega_));
  }

  Subspace compute_radical() const {
    if (field()->characteristic() != 2) return kernel_;
    std::vector<Vec> zeros;
    for (const Vec& v : subspace_vectors(kernel_))
      if (q_.q_value(v).is_zero()) zeros.push_back(v);
    return Subspace::span(field(), dim(), zeros);
  }

  FormClass q_;
  Matrix omega_;
  Subspace kernel_;
  Subspace radical_;
};

/// Pullback of E2's form along g equals E1's form; g need not be square
/// (an isometric embedding when rectangular and injective).
inline bool is_isometry_between(const Matrix& g, const FormedSpace& e1,
                                const FormedSpace& e2) {
  require(g.rows() == e1.dim() && g.cols() == e2.dim(),
          "is_isometry_between: shape mismatch");
  return pullback(g, e2.form()) == e1.form() && rank(g) == g.rows();
}

/// Standard hyperbolic space of dimension 2m: q(v, w) = sum of
/// sigma(v_{2i}) w_{2i+1}.
inline FormedSpace hyperbolic_space(const FormParams& p, std::size_t m) {
  Matrix rep(p.field(), 2 * m, 2 * m);
  for (std::size_t i = 0; i < m; ++i) rep.at(2 * i, 2 * i + 1) = p.field()->one();
  return FormedSpace(FormClass(p, rep));
}

/// Standard Euclidean space: q(v, w) = sum of sigma(v_i) w_i.
inline FormedSpace euclidean_space(const FormParams& p, std::size_t n) {
  return FormedSpace(FormClass(p, Matrix::identity(p.field(), n)));
}

inline FormedSpace zero_space(const FormParams& p, std::size_t n) {
  return FormedSpace(FormClass::zero(p, n));
}

struct CoxeterEdge {
  std::size_t i;
  std::size_t j;
  long label;  // 2, 3, or 0 meaning infinity
};

/// The symmetric matrix of a Coxeter graph (diagonal 2, off-diagonal
/// -2 cos(pi/label): 0 for label 2, -1 for label 3, -2 for infinity) as a
/// formed space over the rationals with parameters (id, 1, {0}). Labels are
/// restricted to {2, 3, infinity} so every entry is rational.
inline FormedSpace coxeter_space(std::size_t vertices,
                                 const std::vector<CoxeterEdge>& edges) {
  const Field* ra = Field::rationals();
  Matrix b(ra, vertices, vertices);
  for (std::size_t i = 0; i < vertices; ++i) b.at(i, i) = ra->from_int(2);
  for (const CoxeterEdge& e : edges) {
    require(e.i < vertices && e.j < vertices && e.i != e.j,
            "coxeter: edge endpoints out of range");
    long entry;
    switch (e.label) {
      case 2: entry = 0; break;
      case 3: entry = -1; break;
      case 0: entry = -2; break;
      default:
        throw ValidationError("coxeter: edge label must be 2, 3, or 0 (infinity)");
    }
    b.at(e.i, e.j) = ra->from_int(entry);
    b.at(e.j, e.i) = ra->from_int(entry);
  }
  FormParams p(ra, ra->one(), AdditiveSubgroup::zero(ra));
  return FormedSpace(from_classical(p, b));
}

}  // namespace formkit
