#pragma once

// Certified isometries. A PartialIsometry is a bijective form-preserving map
// between two subspaces, given by an ordered domain basis and its images; an
// Isometry is an invertible form-preserving endomorphism. Both types verify
// their invariants at construction and cannot exist in a broken state.

#include <cstddef>
#include <utility>

#include "formkit/error.hpp"
#include "formkit/form.hpp"
#include "formkit/linalg.hpp"

namespace formkit {

class PartialIsometry {
 public:
  /// domain_rows: independent rows spanning U; image_rows: their images.
  /// Throws ValidationError on malformed shapes or dependent rows, and
  /// HypothesisError if the images fail to preserve the form.
  PartialIsometry(FormClass q, Matrix domain_rows, Matrix image_rows)
      : q_(std::move(q)), dom_(std::move(domain_rows)), img_(std::move(image_rows)) {
    require(dom_.field() == q_.field() && img_.field() == q_.field(),
            "partial isometry: field mismatch");
    require(dom_.cols() == q_.dim() && img_.cols() == q_.dim(),
            "partial isometry: vectors do not live in the space");
    require(dom_.rows() == img_.rows(), "partial isometry: domain/image size mismatch");
    require(formkit::rank(dom_) == dom_.rows(),
            "partial isometry: domain rows are dependent");
    require_hyp(formkit::rank(img_) == img_.rows(), "partial isometry: f is not injective");
    require_hyp(pullback(dom_, q_) == pullback(img_, q_),
                "partial isometry: f does not preserve the form");
  }

  static PartialIsometry identity_on(const FormClass& q, const Subspace& u) {
    return PartialIsometry(q, u.basis(), u.basis());
  }

  const FormClass& form() const { return q_; }
  const Matrix& domain_rows() const { return dom_; }
  const Matrix& image_rows() const { return img_; }
  std::size_t rank() const { return dom_.rows(); }
  std::size_t ambient_dim() const { return q_.dim(); }

  Subspace domain() const { return Subspace::row_space(dom_); }
  Subspace codomain() const { return Subspace::row_space(img_); }

  Vec apply(const Vec& v) const {
    auto c = coords_in(dom_, v);
    require(c.has_value(), "partial isometry: vector outside the domain");
    return *c * img_;
  }

  Subspace image_of(const Subspace& s) const {
    std::vector<Vec> imgs;
    for (std::size_t i = 0; i < s.dim(); ++i) imgs.push_back(apply(s.basis_row(i)));
    return Subspace::span(q_.field(), q_.dim(), imgs);
  }

 private:
  FormClass q_;
  Matrix dom_;
  Matrix img_;
};

class Isometry {
 public:
  /// Throws CertificationError unless g is invertible and preserves the form.
  Isometry(FormClass q, Matrix g) : q_(std::move(q)), g_(std::move(g)) {
    certify(g_.field() == q_.field() && g_.rows() == q_.dim() && g_.cols() == q_.dim(),
            "isometry: shape mismatch");
    certify(is_invertible(g_), "isometry: matrix is not invertible");
    certify(pullback(g_, q_) == q_, "isometry: matrix does not preserve the form");
  }

  static Isometry identity(const FormClass& q) {
    return Isometry(q, Matrix::identity(q.field(), q.dim()));
  }

  const FormClass& form() const { return q_; }
  const Matrix& matrix() const { return g_; }
  std::size_t dim() const { return q_.dim(); }

  Vec apply(const Vec& v) const { return v * g_; }

  Isometry inverse() const {
    auto inv = formkit::inverse(g_);
    certify(inv.has_value(), "isometry: inverse vanished");
    return Isometry(q_, *inv);
  }

  /// Composite "this, then o".
  Isometry then(const Isometry& o) const {
    require(q_ == o.q_ && dim() == o.dim(), "isometry composition: space mismatch");
    return Isometry(q_, g_ * o.g_);
  }

  /// Restriction to a subspace as a partial isometry.
  PartialIsometry restricted_to(const Subspace& u) const {
    return PartialIsometry(q_, u.basis(), u.basis() * g_);
  }

  bool operator==(const Isometry& o) const { return q_ == o.q_ && g_ == o.g_; }
  bool operator!=(const Isometry& o) const { return !(*this == o); }

 private:
  FormClass q_;
  Matrix g_;
};

}  // namespace formkit
