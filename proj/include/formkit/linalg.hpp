#pragma once

// Dense exact linear algebra over a Field: matrices, row reduction, solving,
// and the subspace lattice (sum, intersection, complements, quotients).
//
// Vectors are rows. A linear map is a matrix G whose rows are the images of
// the basis vectors, acting by v -> v * G. Subspaces are row spaces stored in
// reduced row echelon form, so subspace equality is a representation check.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "formkit/error.hpp"
#include "formkit/field.hpp"

namespace formkit {

using Vec = std::vector<Elem>;

inline Vec zero_vec(const Field* f, std::size_t n) { return Vec(n, f->zero()); }

inline bool is_zero_vec(const Vec& v) {
  for (const Elem& e : v)
    if (!e.is_zero()) return false;
  return true;
}

inline Vec add_vec(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector sizes differ");
  Vec r;
  r.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] + b[i]);
  return r;
}

inline Vec sub_vec(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vector sizes differ");
  Vec r;
  r.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(a[i] - b[i]);
  return r;
}

inline Vec scale_vec(const Elem& c, const Vec& v) {
  Vec r;
  r.reserve(v.size());
  for (const Elem& e : v) r.push_back(c * e);
  return r;
}

inline Vec involve_vec(const Vec& v) {
  Vec r;
  r.reserve(v.size());
  for (const Elem& e : v) r.push_back(e.field()->involve(e));
  return r;
}

class Matrix {
 public:
  Matrix() = default;

  Matrix(const Field* f, std::size_t rows, std::size_t cols)
      : f_(f), r_(rows), c_(cols), a_(rows * cols, f->zero()) {}

  static Matrix identity(const Field* f, std::size_t n) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = f->one();
    return m;
  }

  static Matrix from_rows(const Field* f, const std::vector<Vec>& rows,
                          std::size_t cols) {
    Matrix m(f, rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
    return m;
  }

  static Matrix from_rows(const Field* f, const std::vector<Vec>& rows) {
    require(!rows.empty(), "from_rows: need explicit column count for an empty matrix");
    return from_rows(f, rows, rows[0].size());
  }

  const Field* field() const { return f_; }
  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool is_square() const { return r_ == c_; }

  Elem& at(std::size_t i, std::size_t j) {
    require(i < r_ && j < c_, "matrix index out of range");
    return a_[i * c_ + j];
  }
  const Elem& at(std::size_t i, std::size_t j) const {
    require(i < r_ && j < c_, "matrix index out of range");
    return a_[i * c_ + j];
  }

  Vec row(std::size_t i) const {
    require(i < r_, "matrix row out of range");
    return Vec(a_.begin() + i * c_, a_.begin() + (i + 1) * c_);
  }

  void set_row(std::size_t i, const Vec& v) {
    require(i < r_ && v.size() == c_, "matrix row assignment shape mismatch");
    for (std::size_t j = 0; j < c_; ++j) a_[i * c_ + j] = v[j];
  }

  std::vector<Vec> row_list() const {
    std::vector<Vec> out;
    out.reserve(r_);
    for (std::size_t i = 0; i < r_; ++i) out.push_back(row(i));
    return out;
  }

  bool operator==(const Matrix& o) const {
    require(f_ == o.f_, "comparing matrices over different fields");
    return r_ == o.r_ && c_ == o.c_ && a_ == o.a_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  Matrix operator+(const Matrix& o) const {
    same_shape(o);
    Matrix m(f_, r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
    return m;
  }

  Matrix operator-(const Matrix& o) const {
    same_shape(o);
    Matrix m(f_, r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
    return m;
  }

  Matrix operator-() const {
    Matrix m(f_, r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = -a_[i];
    return m;
  }

  Matrix operator*(const Matrix& o) const {
    require(f_ == o.f_, "multiplying matrices over different fields");
    require(c_ == o.r_, "matrix product shape mismatch");
    Matrix m(f_, r_, o.c_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t k = 0; k < c_; ++k) {
        const Elem& aik = a_[i * c_ + k];
        if (aik.is_zero()) continue;
        for (std::size_t j = 0; j < o.c_; ++j)
          m.a_[i * o.c_ + j] = m.a_[i * o.c_ + j] + aik * o.a_[k * o.c_ + j];
      }
    return m;
  }

  Matrix scaled(const Elem& c) const {
    Matrix m(f_, r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = c * a_[i];
    return m;
  }

  Matrix transposed() const {
    Matrix m(f_, c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) m.at(j, i) = a_[i * c_ + j];
    return m;
  }

  /// Entrywise application of the field involution.
  Matrix involved() const {
    Matrix m(f_, r_, c_);
    for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] = f_->involve(a_[i]);
    return m;
  }

  /// Vertical concatenation.
  Matrix stacked(const Matrix& below) const {
    require(f_ == below.f_ && c_ == below.c_, "stacking shape mismatch");
    Matrix m(f_, r_ + below.r_, c_);
    m.a_ = a_;
    m.a_.insert(m.a_.end(), below.a_.begin(), below.a_.end());
    return m;
  }

 private:
  void same_shape(const Matrix& o) const {
    require(f_ == o.f_, "matrices over different fields");
    require(r_ == o.r_ && c_ == o.c_, "matrix shape mismatch");
  }

  const Field* f_ = nullptr;
  std::size_t r_ = 0, c_ = 0;
  std::vector<Elem> a_;
};

/// v * G for a row vector v.
inline Vec operator*(const Vec& v, const Matrix& g) {
  require(v.size() == g.rows(), "row-vector product: shape mismatch");
  Vec r = zero_vec(g.field(), g.cols());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    for (std::size_t j = 0; j < g.cols(); ++j) r[j] = r[j] + v[i] * g.at(i, j);
  }
  return r;
}

// ---- conveniences for building exact values from integer literals ----

inline Vec vec_from_ints(const Field* f, const std::vector<long>& v) {
  Vec r;
  r.reserve(v.size());
  for (long x : v) r.push_back(f->from_int(x));
  return r;
}

inline Matrix mat_from_ints(const Field* f, const std::vector<std::vector<long>>& rows,
                            std::size_t cols_if_empty = 0) {
  if (rows.empty()) return Matrix(f, 0, cols_if_empty);
  Matrix m(f, rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, vec_from_ints(f, rows[i]));
  return m;
}

inline std::string to_string(const Vec& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i].field()->to_string(v[i]);
  }
  os << ")";
  return os.str();
}

inline std::string to_string(const Matrix& m) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) os << "; ";
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) os << " ";
      os << m.field()->to_string(m.at(i, j));
    }
  }
  os << "]";
  return os.str();
}

// ---- row reduction and solving ----

/// Reduced row echelon form; returns the canonical form and the pivot columns.
inline std::pair<Matrix, std::vector<std::size_t>> rref(const Matrix& m) {
  Matrix a = m;
  const Field* f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t sel = r;
    while (sel < a.rows() && a.at(sel, c).is_zero()) ++sel;
    if (sel == a.rows()) continue;
    if (sel != r) {
      Vec tmp = a.row(r);
      a.set_row(r, a.row(sel));
      a.set_row(sel, tmp);
    }
    Elem iv = f->inv(a.at(r, c));
    a.set_row(r, scale_vec(iv, a.row(r)));
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a.at(i, c).is_zero()) continue;
      Elem factor = a.at(i, c);
      a.set_row(i, sub_vec(a.row(i), scale_vec(factor, a.row(r))));
    }
    pivots.push_back(c);
    ++r;
  }
  // Drop the zero rows; the result has exactly rank(m) rows.
  Matrix out(f, pivots.size(), a.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) out.set_row(i, a.row(i));
  return {out, pivots};
}

inline std::size_t rank(const Matrix& m) { return rref(m).second.size(); }

inline bool is_invertible(const Matrix& m) {
  return m.is_square() && rank(m) == m.rows();
}

/// One solution x of m * x = rhs (x and rhs as coordinate rows), with free
/// variables set to zero; nullopt if the system is inconsistent.
inline std::optional<Vec> solve(const Matrix& m, const Vec& rhs) {
  require(rhs.size() == m.rows(), "solve: right-hand side length mismatch");
  const Field* f = m.field();
  Matrix aug(f, m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = rhs[i];
  }
  auto [red, pivots] = rref(aug);
  Vec x = zero_vec(f, m.cols());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == m.cols()) return std::nullopt;  // pivot in the rhs column
    x[pivots[i]] = red.at(i, m.cols());
  }
  return x;
}

/// One solution x of x * m = rhs; free variables set to zero.
inline std::optional<Vec> solve_row(const Matrix& m, const Vec& rhs) {
  return solve(m.transposed(), rhs);
}

/// Row-space basis of { v : m * v^T = 0 }, in reduced row echelon form.
inline Matrix nullspace(const Matrix& m) {
  const Field* f = m.field();
  auto [red, pivots] = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  std::vector<Vec> rows;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (is_pivot[j]) continue;
    Vec v = zero_vec(f, m.cols());
    v[j] = f->one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -red.at(i, j);
    rows.push_back(std::move(v));
  }
  Matrix basis = Matrix::from_rows(f, rows, m.cols());
  return rref(basis).first;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  require(m.is_square(), "inverse: matrix is not square");
  const Field* f = m.field();
  const std::size_t n = m.rows();
  Matrix aug(f, n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = f->one();
  }
  auto [red, pivots] = rref(aug);
  if (pivots.size() != n || (n > 0 && pivots.back() != n - 1)) return std::nullopt;
  Matrix out(f, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = red.at(i, n + j);
  return out;
}

// ---- subspaces ----

class Subspace {
 public:
  Subspace() = default;

  static Subspace zero(const Field* f, std::size_t ambient) {
    return Subspace(f, ambient, Matrix(f, 0, ambient));
  }

  static Subspace full(const Field* f, std::size_t ambient) {
    return Subspace(f, ambient, Matrix::identity(f, ambient));
  }

  static Subspace row_space(const Matrix& m) {
    return Subspace(m.field(), m.cols(), rref(m).first);
  }

  static Subspace span(const Field* f, std::size_t ambient,
                       const std::vector<Vec>& gens) {
    return row_space(Matrix::from_rows(f, gens, ambient));
  }

  const Field* field() const { return f_; }
  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == ambient_; }

  /// Basis rows in reduced row echelon form.
  const Matrix& basis() const { return basis_; }
  Vec basis_row(std::size_t i) const { return basis_.row(i); }

  bool contains(const Vec& v) const {
    require(v.size() == ambient_, "contains: vector length mismatch");
    Vec r = v;
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      std::size_t p = pivot_col(i);
      if (r[p].is_zero()) continue;
      r = sub_vec(r, scale_vec(r[p], basis_.row(i)));
    }
    return is_zero_vec(r);
  }

  bool contains(const Subspace& o) const {
    require(f_ == o.f_ && ambient_ == o.ambient_, "contains: ambient mismatch");
    for (std::size_t i = 0; i < o.dim(); ++i)
      if (!contains(o.basis_row(i))) return false;
    return true;
  }

  bool operator==(const Subspace& o) const {
    require(f_ == o.f_ && ambient_ == o.ambient_, "comparing subspaces of different ambients");
    return basis_ == o.basis_;
  }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

  /// Strict total order: by dimension, then by the basis entries in row-major
  /// element-index order (used for deterministic listings).
  bool operator<(const Subspace& o) const {
    require(f_ == o.f_ && ambient_ == o.ambient_, "ordering subspaces of different ambients");
    if (dim() != o.dim()) return dim() < o.dim();
    require(f_->finite(), "subspace ordering needs a finite field");
    for (std::size_t i = 0; i < dim(); ++i)
      for (std::size_t j = 0; j < ambient_; ++j) {
        long a = basis_.at(i, j).index(), b = o.basis_.at(i, j).index();
        if (a != b) return a < b;
      }
    return false;
  }

 private:
  Subspace(const Field* f, std::size_t ambient, Matrix basis)
      : f_(f), ambient_(ambient), basis_(std::move(basis)) {}

  std::size_t pivot_col(std::size_t i) const {
    for (std::size_t j = 0; j < ambient_; ++j)
      if (!basis_.at(i, j).is_zero()) return j;
    throw CertificationError("subspace basis has a zero row");
  }

  const Field* f_ = nullptr;
  std::size_t ambient_ = 0;
  Matrix basis_;
};

inline Subspace sum(const Subspace& a, const Subspace& b) {
  require(a.field() == b.field() && a.ambient() == b.ambient(), "sum: ambient mismatch");
  return Subspace::row_space(a.basis().stacked(b.basis()));
}

/// Intersection via the stacked-kernel method: coefficient pairs (u, v) with
/// u * A + v * B = 0 parameterize the intersection as u * A.
inline Subspace intersect(const Subspace& a, const Subspace& b) {
  require(a.field() == b.field() && a.ambient() == b.ambient(), "intersect: ambient mismatch");
  const Field* f = a.field();
  Matrix stacked = a.basis().stacked(b.basis());
  Matrix ker = nullspace(stacked.transposed());  // rows (u | v)
  std::vector<Vec> gens;
  for (std::size_t i = 0; i < ker.rows(); ++i) {
    Vec pair = ker.row(i);
    Vec u(pair.begin(), pair.begin() + a.dim());
    gens.push_back(u * a.basis());
  }
  return Subspace::span(f, a.ambient(), gens);
}

/// Image of a subspace under v -> v * G.
inline Subspace map_image(const Subspace& s, const Matrix& g) {
  return Subspace::row_space(s.basis() * g);
}

/// Coefficients x with x * basis = v, if v lies in the row space.
inline std::optional<Vec> coords_in(const Matrix& basis, const Vec& v) {
  auto x = solve_row(basis, v);
  if (!x) return std::nullopt;
  if ((*x * basis) != v) return std::nullopt;
  return x;
}

/// Deterministic complement of A inside V (A <= V): the V-basis rows at the
/// non-pivot positions of A written in V-coordinates.
inline Subspace complement_in(const Subspace& v, const Subspace& a) {
  require(v.contains(a), "complement_in: subspace is not contained in the ambient one");
  const Field* f = v.field();
  std::vector<Vec> coord_rows;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    auto c = coords_in(v.basis(), a.basis_row(i));
    certify(c.has_value(), "complement_in: containment did not yield coordinates");
    coord_rows.push_back(*c);
  }
  auto [red, pivots] = rref(Matrix::from_rows(f, coord_rows, v.dim()));
  std::vector<bool> is_pivot(v.dim(), false);
  for (std::size_t p : pivots) is_pivot[p] = true;
  std::vector<Vec> rows;
  for (std::size_t j = 0; j < v.dim(); ++j)
    if (!is_pivot[j]) rows.push_back(v.basis_row(j));
  return Subspace::span(f, v.ambient(), rows);
}

/// Ordered basis of `outer` whose first dim(inner) rows are the basis of
/// `inner` (rows, not in echelon form as a whole).
inline Matrix basis_through(const Subspace& inner, const Subspace& outer) {
  require(outer.contains(inner), "basis_through: inner subspace not contained in outer");
  Subspace comp = complement_in(outer, inner);
  return inner.basis().stacked(comp.basis());
}

/// Coordinates on V/N for N <= V: projection onto a deterministic complement
/// of N in V, with the canonical section as the lift.
class QuotientMap {
 public:
  QuotientMap(const Subspace& v, const Subspace& n)
      : v_(v), n_(n), comp_(complement_in(v, n)), stacked_(n.basis().stacked(comp_.basis())) {}

  const Field* field() const { return v_.field(); }
  std::size_t dim() const { return comp_.dim(); }
  const Subspace& domain() const { return v_; }
  const Subspace& kernel() const { return n_; }
  const Subspace& section_image() const { return comp_; }

  /// Quotient coordinates of v in V.
  Vec project(const Vec& v) const {
    auto x = coords_in(stacked_, v);
    require(x.has_value(), "quotient projection: vector outside the domain");
    return Vec(x->begin() + n_.dim(), x->end());
  }

  /// Canonical representative of a quotient coordinate row.
  Vec lift(const Vec& w) const { return w * comp_.basis(); }

  Subspace push(const Subspace& s) const {
    require(v_.contains(s), "quotient push: subspace outside the domain");
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < s.dim(); ++i) rows.push_back(project(s.basis_row(i)));
    return Subspace::span(field(), dim(), rows);
  }

  /// Full preimage (always contains the kernel N).
  Subspace preimage(const Subspace& s) const {
    require(s.ambient() == dim(), "quotient preimage: ambient mismatch");
    std::vector<Vec> rows = n_.basis().row_list();
    for (std::size_t i = 0; i < s.dim(); ++i) rows.push_back(lift(s.basis_row(i)));
    return Subspace::span(field(), v_.ambient(), rows);
  }

 private:
  Subspace v_, n_;
  Subspace comp_;
  Matrix stacked_;
};

/// A subspace L with A + L = V = B + L and both sums direct. Requires
/// dim A = dim B; fails on a precondition otherwise. Construction: quotient
/// by A meet B, take the graph of the basis-to-basis isomorphism between the
/// images of A and B, adjoin a complement of the image of A + B, and lift
/// through the canonical section.
inline Subspace simultaneous_complement(const Subspace& a, const Subspace& b,
                                        const Subspace& v) {
  require(v.contains(a) && v.contains(b),
          "simultaneous_complement: subspaces must lie in the ambient one");
  require(a.dim() == b.dim(), "simultaneous_complement: unequal dimensions");
  const Field* f = v.field();

  Subspace d = intersect(a, b);
  QuotientMap q(v, d);
  Subspace abar = q.push(a), bbar = q.push(b);

  std::vector<Vec> graph_rows;
  for (std::size_t i = 0; i < abar.dim(); ++i)
    graph_rows.push_back(add_vec(abar.basis_row(i), bbar.basis_row(i)));
  Subspace graph = Subspace::span(f, q.dim(), graph_rows);

  Subspace outside = complement_in(Subspace::full(f, q.dim()), sum(abar, bbar));
  Subspace lbar = sum(graph, outside);

  std::vector<Vec> rows;
  for (std::size_t i = 0; i < lbar.dim(); ++i) rows.push_back(q.lift(lbar.basis_row(i)));
  Subspace l = Subspace::span(f, v.ambient(), rows);

  certify(l.dim() + a.dim() == v.dim() && intersect(a, l).is_zero() &&
              intersect(b, l).is_zero() && sum(a, l) == v && sum(b, l) == v,
          "simultaneous_complement: output failed verification");
  return l;
}

/// Common complement L of A and B in V arranged around `through`: writing
/// N for the deterministic complement of (through meet A) inside `through`,
/// the result satisfies A + L = V = B + L (both direct) and N <= L, hence
/// through <= A + L, and through <= L whenever through meets A trivially.
/// Requires through meet A = through meet B and dim A = dim B.
inline Subspace complement_containing(const Subspace& a, const Subspace& b,
                                      const Subspace& v, const Subspace& through) {
  require(v.contains(a) && v.contains(b) && v.contains(through),
          "complement_containing: subspaces must lie in the ambient one");
  require(a.dim() == b.dim(), "complement_containing: unequal dimensions");
  Subspace meet_a = intersect(through, a);
  require(meet_a == intersect(through, b),
          "complement_containing: the subspace to thread meets the two sides differently");

  Subspace n = complement_in(through, meet_a);
  QuotientMap q(v, n);
  Subspace lbar = simultaneous_complement(q.push(a), q.push(b),
                                          Subspace::full(v.field(), q.dim()));
  Subspace l = q.preimage(lbar);

  certify(sum(a, l) == v && intersect(a, l).is_zero() && sum(b, l) == v &&
              intersect(b, l).is_zero() && l.contains(n),
          "complement_containing: output failed verification");
  return l;
}

// ---- enumeration (finite fields) ----

/// All q^n coordinate rows, by base-q counter (the zero vector first).
inline std::vector<Vec> all_vectors(const Field* f, std::size_t n) {
  require(f->finite(), "all_vectors: finite fields only");
  const long q = f->order();
  long total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= q;
    require(total <= 1'000'000, "all_vectors: enumeration too large");
  }
  std::vector<Vec> out;
  out.reserve(total);
  for (long idx = 0; idx < total; ++idx) {
    Vec v;
    v.reserve(n);
    long t = idx;
    for (std::size_t i = 0; i < n; ++i) {
      v.push_back(f->elem(t % q));
      t /= q;
    }
    out.push_back(std::move(v));
  }
  return out;
}

/// All vectors of a subspace: coefficient tuples over the basis in base-q
/// counter order (the zero vector first).
inline std::vector<Vec> subspace_vectors(const Subspace& s) {
  const Field* f = s.field();
  std::vector<Vec> out;
  for (const Vec& c : all_vectors(f, s.dim()))
    out.push_back(s.dim() == 0 ? zero_vec(f, s.ambient()) : c * s.basis());
  return out;
}

/// Visit every r-by-c matrix over a finite field in counter order.
template <class F>
inline void for_each_matrix(const Field* f, std::size_t r, std::size_t c, F&& fn) {
  require(f->finite(), "for_each_matrix: finite fields only");
  const long q = f->order();
  const std::size_t cells = r * c;
  std::vector<long> digits(cells, 0);
  Matrix m(f, r, c);
  while (true) {
    fn(m);
    std::size_t i = 0;
    while (i < cells && digits[i] == q - 1) {
      digits[i] = 0;
      m.at(i / c, i % c) = f->elem(0);
      ++i;
    }
    if (i == cells) return;
    ++digits[i];
    m.at(i / c, i % c) = f->elem(digits[i]);
  }
}

/// All subspaces of the coordinate space, enumerated via reduced row echelon
/// canonical forms, sorted by (dimension, basis entries).
inline std::vector<Subspace> all_subspaces(const Field* f, std::size_t n) {
  require(f->finite(), "all_subspaces: finite fields only");
  require(n <= 16, "all_subspaces: ambient dimension too large");
  const long q = f->order();
  std::vector<Subspace> out;
  out.push_back(Subspace::zero(f, n));
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    std::vector<std::size_t> pivots;
    for (std::size_t j = 0; j < n; ++j)
      if (mask & (1ul << j)) pivots.push_back(j);
    const std::size_t d = pivots.size();
    // Free cells: to the right of each row's pivot, excluding pivot columns.
    std::vector<std::pair<std::size_t, std::size_t>> free_cells;
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : pivots) is_pivot[p] = true;
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = pivots[i] + 1; j < n; ++j)
        if (!is_pivot[j]) free_cells.emplace_back(i, j);
    long total = 1;
    for (std::size_t i = 0; i < free_cells.size(); ++i) {
      total *= q;
      require(total <= 4'000'000, "all_subspaces: enumeration too large");
    }
    for (long idx = 0; idx < total; ++idx) {
      Matrix m(f, d, n);
      for (std::size_t i = 0; i < d; ++i) m.at(i, pivots[i]) = f->one();
      long t = idx;
      for (auto [i, j] : free_cells) {
        m.at(i, j) = f->elem(t % q);
        t /= q;
      }
      out.push_back(Subspace::row_space(m));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// All subspaces of V, via the coordinate space of its basis.
inline std::vector<Subspace> subspaces_of(const Subspace& v) {
  std::vector<Subspace> out;
  for (const Subspace& c : all_subspaces(v.field(), v.dim()))
    out.push_back(Subspace::row_space(c.basis() * v.basis()));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace formkit
