#pragma once

// Exact arithmetic for the scalar domains the library works over: prime
// fields GF(p), extension fields GF(p^k) with an explicit irreducible
// modulus, and the rationals. Finite fields are backed by lookup tables and
// elements are table indices; rational elements are exact fractions.
//
// Each field carries its involution (identity, or the Frobenius power
// x -> x^(p^(k/2)) when k is even). Fields are interned: Field::get returns
// a pointer that stays valid for the lifetime of the process, so elements
// and matrices can hold plain pointers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "formkit/error.hpp"

namespace formkit {

using Rat = boost::multiprecision::cpp_rational;

enum class FieldKind { Prime, Extension, Rationals };
enum class Involution { Identity, Frobenius };

/// Description of a field; the key used for interning.
struct FieldSpec {
  FieldKind kind = FieldKind::Prime;
  long p = 2;                  // characteristic, 0 for the rationals
  int k = 1;                   // extension degree over GF(p)
  std::vector<long> modulus;   // monic, ascending coefficients, size k+1
  Involution sigma = Involution::Identity;
};

class Field;

/// Element of an interned Field. Cheap to copy; binary operations require
/// both operands to come from the same Field instance.
class Elem {
 public:
  Elem() = default;

  const Field* field() const { return f_; }
  long index() const { return idx_; }  // finite fields only
  const Rat& rational() const { return rat_; }

  bool is_zero() const;
  bool is_one() const;

  bool operator==(const Elem& o) const;
  bool operator!=(const Elem& o) const { return !(*this == o); }

 private:
  friend class Field;
  Elem(const Field* f, long idx) : f_(f), idx_(idx) {}
  Elem(const Field* f, Rat r) : f_(f), rat_(std::move(r)) {}

  const Field* f_ = nullptr;
  long idx_ = 0;
  Rat rat_;
};

namespace detail {

// ---- small helpers over ints mod p (used for subgroup bases and for
// ---- modulus validation; the general Matrix type lives elsewhere) ----

inline long pmod(long a, long p) {
  long r = a % p;
  return r < 0 ? r + p : r;
}

inline long pinv(long a, long p) {
  // Fermat; p is prime and a != 0 mod p.
  long r = 1, b = pmod(a, p), e = p - 2;
  while (e > 0) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

/// In-place row reduction of an integer matrix mod p; returns pivot columns.
inline std::vector<int> prref(std::vector<std::vector<int>>& rows, long p) {
  std::vector<int> pivots;
  if (rows.empty()) return pivots;
  const size_t ncols = rows[0].size();
  size_t r = 0;
  for (size_t c = 0; c < ncols && r < rows.size(); ++c) {
    size_t sel = r;
    while (sel < rows.size() && rows[sel][c] % p == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    long iv = pinv(rows[r][c], p);
    for (size_t j = 0; j < ncols; ++j) rows[r][j] = rows[r][j] * iv % p;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] % p == 0) continue;
      long f = rows[i][c] % p;
      for (size_t j = 0; j < ncols; ++j)
        rows[i][j] = pmod(rows[i][j] - f * rows[r][j], p);
    }
    pivots.push_back(static_cast<int>(c));
    ++r;
  }
  rows.resize(pivots.size());
  return pivots;
}

/// Reduce v by the rref rows (pivot columns zeroed); v becomes the canonical
/// coset representative of v + rowspace.
inline void preduce(std::vector<int>& v, const std::vector<std::vector<int>>& rows,
                    const std::vector<int>& pivots, long p) {
  for (size_t i = 0; i < rows.size(); ++i) {
    long f = v[pivots[i]] % p;
    if (f == 0) continue;
    for (size_t j = 0; j < v.size(); ++j) v[j] = pmod(v[j] - f * rows[i][j], p);
  }
}

// ---- dense polynomial helpers over GF(p), ascending coefficients ----

inline std::vector<int> ptrim(std::vector<int> a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
  return a;
}

inline std::vector<int> pmul(const std::vector<int>& a, const std::vector<int>& b, long p) {
  if (a.empty() || b.empty()) return {};
  std::vector<int> c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = static_cast<int>((c[i + j] + 1L * a[i] * b[j]) % p);
  return ptrim(std::move(c));
}

/// Remainder of a modulo monic b.
inline std::vector<int> prem(std::vector<int> a, const std::vector<int>& b, long p) {
  a = ptrim(std::move(a));
  const size_t db = b.size() - 1;
  while (a.size() >= b.size()) {
    long f = a.back();
    size_t shift = a.size() - 1 - db;
    for (size_t j = 0; j < b.size(); ++j)
      a[shift + j] = static_cast<int>(pmod(a[shift + j] - f * b[j], p));
    a = ptrim(std::move(a));
  }
  return a;
}

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline bool is_irreducible(const std::vector<int>& m, long p) {
  const int k = static_cast<int>(m.size()) - 1;
  if (k < 1) return false;
  if (k == 1) return true;
  // Trial division by all monic polynomials of degree 1..k/2.
  for (int d = 1; 2 * d <= k; ++d) {
    long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long idx = 0; idx < count; ++idx) {
      std::vector<int> cand(d + 1, 0);
      long t = idx;
      for (int i = 0; i < d; ++i) { cand[i] = static_cast<int>(t % p); t /= p; }
      cand[d] = 1;
      if (prem(m, cand, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

class Field {
 public:
  /// Largest supported finite field order (table-backed arithmetic).
  static constexpr long kMaxOrder = 1024;

  static const Field* get(FieldSpec spec) {
    normalize(spec);
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<Field>> registry;
    std::lock_guard<std::mutex> lock(mu);
    std::string key = spec_key(spec);
    auto it = registry.find(key);
    if (it == registry.end())
      it = registry.emplace(key, std::unique_ptr<Field>(new Field(spec))).first;
    return it->second.get();
  }

  static const Field* prime(long p) {
    FieldSpec s;
    s.kind = FieldKind::Prime;
    s.p = p;
    return get(s);
  }

  static const Field* extension(long p, int k, std::vector<long> modulus,
                                Involution sigma = Involution::Identity) {
    FieldSpec s;
    s.kind = FieldKind::Extension;
    s.p = p;
    s.k = k;
    s.modulus = std::move(modulus);
    s.sigma = sigma;
    return get(s);
  }

  static const Field* rationals() {
    FieldSpec s;
    s.kind = FieldKind::Rationals;
    s.p = 0;
    s.k = 1;
    return get(s);
  }

  /// GF(q) with the lexicographically smallest irreducible modulus.
  static const Field* gf(long q, Involution sigma = Involution::Identity) {
    require(q >= 2, "gf: order must be at least 2");
    long p = smallest_prime_factor(q);
    int k = 0;
    long t = q;
    while (t > 1) {
      require(t % p == 0, "gf: order is not a prime power");
      t /= p;
      ++k;
    }
    if (k == 1) {
      require(sigma == Involution::Identity,
              "gf: a prime field admits only the identity involution");
      return prime(p);
    }
    return extension(p, k, default_modulus(p, k), sigma);
  }

  /// Smallest monic irreducible of degree k over GF(p) in base-p counter order.
  static std::vector<long> default_modulus(long p, int k) {
    long count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (long idx = 0; idx < count; ++idx) {
      std::vector<int> cand(k + 1, 0);
      long t = idx;
      for (int i = 0; i < k; ++i) { cand[i] = static_cast<int>(t % p); t /= p; }
      cand[k] = 1;
      if (detail::is_irreducible(cand, p)) return std::vector<long>(cand.begin(), cand.end());
    }
    throw ValidationError("default_modulus: no irreducible polynomial found");
  }

  // ---- description ----

  const FieldSpec& spec() const { return spec_; }
  bool finite() const { return spec_.kind != FieldKind::Rationals; }
  long characteristic() const { return finite() ? spec_.p : 0; }
  long order() const { return q_; }  // 0 for the rationals
  int degree() const { return spec_.k; }
  Involution involution() const { return spec_.sigma; }
  bool trivial_involution() const { return spec_.sigma == Involution::Identity; }

  std::string label() const {
    if (!finite()) return "Q";
    std::ostringstream os;
    os << "GF(" << q_ << ")";
    if (spec_.sigma == Involution::Frobenius) os << "^frob";
    return os.str();
  }

  // ---- constants and construction ----

  Elem zero() const { return finite() ? Elem(this, 0) : Elem(this, Rat(0)); }
  Elem one() const { return finite() ? Elem(this, 1) : Elem(this, Rat(1)); }

  Elem from_int(long n) const {
    if (!finite()) return Elem(this, Rat(n));
    return Elem(this, detail::pmod(n, spec_.p));
  }

  Elem elem(long idx) const {
    require(finite(), "elem: index construction needs a finite field");
    require(idx >= 0 && idx < q_, "elem: index out of range");
    return Elem(this, idx);
  }

  Elem from_coords(const std::vector<long>& c) const {
    require(finite(), "from_coords: finite fields only");
    require(static_cast<int>(c.size()) <= spec_.k, "from_coords: too many coordinates");
    long idx = 0, w = 1;
    for (int i = 0; i < spec_.k; ++i) {
      long d = i < static_cast<int>(c.size()) ? detail::pmod(c[i], spec_.p) : 0;
      idx += d * w;
      w *= spec_.p;
    }
    return Elem(this, idx);
  }

  Elem from_rational(const Rat& r) const {
    require(!finite(), "from_rational: rationals only");
    return Elem(this, r);
  }

  /// Base-p digits of a finite element (coefficient of x^i at position i).
  std::vector<long> coords(const Elem& e) const {
    check(e);
    require(finite(), "coords: finite fields only");
    std::vector<long> c(spec_.k);
    long t = e.idx_;
    for (int i = 0; i < spec_.k; ++i) { c[i] = t % spec_.p; t /= spec_.p; }
    return c;
  }

  // ---- arithmetic ----

  Elem add(const Elem& a, const Elem& b) const {
    check(a); check(b);
    if (finite()) return Elem(this, add_[a.idx_ * q_ + b.idx_]);
    return Elem(this, Rat(a.rat_ + b.rat_));
  }

  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }

  Elem mul(const Elem& a, const Elem& b) const {
    check(a); check(b);
    if (finite()) return Elem(this, mul_[a.idx_ * q_ + b.idx_]);
    return Elem(this, Rat(a.rat_ * b.rat_));
  }

  Elem neg(const Elem& a) const {
    check(a);
    if (finite()) return Elem(this, neg_[a.idx_]);
    return Elem(this, Rat(-a.rat_));
  }

  Elem inv(const Elem& a) const {
    check(a);
    require(!a.is_zero(), "inv: division by zero");
    if (finite()) return Elem(this, inv_[a.idx_]);
    return Elem(this, Rat(1 / a.rat_));
  }

  Elem div(const Elem& a, const Elem& b) const { return mul(a, inv(b)); }

  Elem involve(const Elem& a) const {
    check(a);
    if (finite()) return Elem(this, sig_[a.idx_]);
    return a;  // the rationals admit only the identity
  }

  Elem norm(const Elem& a) const { return mul(a, involve(a)); }

  Elem pow(const Elem& a, long e) const {
    Elem r = one(), b = a;
    require(e >= 0, "pow: negative exponent");
    while (e > 0) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }

  // ---- enumeration ----

  std::vector<Elem> elements() const {
    require(finite(), "elements: finite fields only");
    std::vector<Elem> v;
    v.reserve(q_);
    for (long i = 0; i < q_; ++i) v.push_back(Elem(this, i));
    return v;
  }

  /// Elements of norm one, i.e. a * sigma(a) = 1, in index order.
  std::vector<Elem> norm_one_elements() const {
    if (!finite()) return {one(), from_int(-1)};
    std::vector<Elem> v;
    for (long i = 0; i < q_; ++i) {
      Elem a(this, i);
      if (norm(a).is_one()) v.push_back(a);
    }
    return v;
  }

  /// First a (index order) with eps = a^-1 * sigma(a). Needs a nontrivial
  /// involution and norm-one eps.
  Elem hilbert90_solve(const Elem& eps) const {
    check(eps);
    require(spec_.sigma == Involution::Frobenius,
            "hilbert90_solve: needs a nontrivial involution");
    require(norm(eps).is_one(), "hilbert90_solve: eps is not of norm one");
    for (long i = 1; i < q_; ++i) {
      Elem a(this, i);
      if (mul(inv(a), involve(a)) == eps) return a;
    }
    throw CertificationError("hilbert90_solve: no solution found");
  }

  // ---- rendering ----

  std::string to_string(const Elem& e) const {
    check(e);
    if (!finite()) {
      std::ostringstream os;
      os << e.rat_;
      return os.str();
    }
    if (spec_.kind == FieldKind::Prime) return std::to_string(e.idx_);
    std::vector<long> c = coords(e);
    std::string s;
    for (int i = spec_.k - 1; i >= 0; --i) {
      if (c[i] == 0) continue;
      if (!s.empty()) s += "+";
      if (i == 0 || c[i] != 1) s += std::to_string(c[i]);
      if (i >= 1) s += "x";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

  void check(const Elem& e) const {
    require(e.f_ == this, "element does not belong to this field");
  }

 private:
  explicit Field(const FieldSpec& spec) : spec_(spec) {
    if (!finite()) return;
    q_ = 1;
    for (int i = 0; i < spec_.k; ++i) q_ *= spec_.p;
    build_tables();
  }

  static void normalize(FieldSpec& s) {
    switch (s.kind) {
      case FieldKind::Rationals:
        require(s.sigma == Involution::Identity,
                "field spec: the rationals admit only the identity involution");
        s.p = 0;
        s.k = 1;
        s.modulus.clear();
        return;
      case FieldKind::Prime:
        require(detail::is_prime(s.p), "field spec: p is not prime");
        require(s.sigma == Involution::Identity,
                "field spec: a prime field admits only the identity involution");
        s.k = 1;
        s.modulus.clear();
        return;
      case FieldKind::Extension: {
        require(detail::is_prime(s.p), "field spec: p is not prime");
        require(s.k >= 2, "field spec: extension degree must be at least 2");
        require(static_cast<int>(s.modulus.size()) == s.k + 1,
                "field spec: modulus must have degree k");
        for (long& c : s.modulus) c = detail::pmod(c, s.p);
        require(s.modulus.back() == 1, "field spec: modulus must be monic");
        std::vector<int> m(s.modulus.begin(), s.modulus.end());
        require(detail::is_irreducible(m, s.p), "field spec: modulus is reducible");
        if (s.sigma == Involution::Frobenius)
          require(s.k % 2 == 0,
                  "field spec: the involutive Frobenius needs even degree");
        long q = 1;
        for (int i = 0; i < s.k; ++i) {
          q *= s.p;
          require(q <= kMaxOrder, "field spec: field order exceeds supported maximum");
        }
        return;
      }
    }
  }

  static std::string spec_key(const FieldSpec& s) {
    std::ostringstream os;
    os << static_cast<int>(s.kind) << ":" << s.p << ":" << s.k << ":";
    for (long c : s.modulus) os << c << ",";
    os << ":" << static_cast<int>(s.sigma);
    return os.str();
  }

  static long smallest_prime_factor(long n) {
    for (long d = 2; d * d <= n; ++d)
      if (n % d == 0) return d;
    return n;
  }

  void build_tables() {
    const long p = spec_.p;
    const int k = spec_.k;
    add_.resize(q_ * q_);
    mul_.resize(q_ * q_);
    neg_.resize(q_);
    inv_.resize(q_);
    sig_.resize(q_);

    auto digits = [&](long idx) {
      std::vector<int> d(k);
      for (int i = 0; i < k; ++i) { d[i] = static_cast<int>(idx % p); idx /= p; }
      return d;
    };
    auto index_of = [&](const std::vector<int>& d) {
      long idx = 0, w = 1;
      for (int i = 0; i < k; ++i) { idx += d[i] * w; w *= p; }
      return idx;
    };

    std::vector<int> mod(spec_.modulus.begin(), spec_.modulus.end());
    if (mod.empty()) mod = {0, 1};  // unused for prime fields

    for (long a = 0; a < q_; ++a) {
      std::vector<int> da = digits(a);
      std::vector<int> nd(k);
      for (int i = 0; i < k; ++i) nd[i] = static_cast<int>(detail::pmod(-da[i], p));
      neg_[a] = static_cast<uint16_t>(index_of(nd));
      for (long b = 0; b < q_; ++b) {
        std::vector<int> db = digits(b);
        std::vector<int> s(k);
        for (int i = 0; i < k; ++i) s[i] = static_cast<int>((da[i] + db[i]) % p);
        add_[a * q_ + b] = static_cast<uint16_t>(index_of(s));
        std::vector<int> m;
        if (spec_.kind == FieldKind::Prime) {
          m = {static_cast<int>(da[0] * 1L * db[0] % p)};
        } else {
          m = detail::prem(detail::pmul(da, db, p), mod, p);
        }
        m.resize(k, 0);
        mul_[a * q_ + b] = static_cast<uint16_t>(index_of(m));
      }
    }

    inv_[0] = 0;
    for (long a = 1; a < q_; ++a) {
      for (long b = 1; b < q_; ++b) {
        if (mul_[a * q_ + b] == 1) { inv_[a] = static_cast<uint16_t>(b); break; }
      }
    }

    if (spec_.sigma == Involution::Identity) {
      for (long a = 0; a < q_; ++a) sig_[a] = static_cast<uint16_t>(a);
    } else {
      long e = 1;
      for (int i = 0; i < k / 2; ++i) e *= p;  // p^(k/2)
      for (long a = 0; a < q_; ++a) {
        long r = 1;
        long base = a, ee = e;
        while (ee > 0) {
          if (ee & 1) r = mul_[r * q_ + base];
          base = mul_[base * q_ + base];
          ee >>= 1;
        }
        sig_[a] = static_cast<uint16_t>(r);
      }
      for (long a = 0; a < q_; ++a)
        certify(sig_[sig_[a]] == a, "field tables: Frobenius is not an involution");
    }
  }

  FieldSpec spec_;
  long q_ = 0;
  std::vector<uint16_t> add_, mul_, neg_, inv_, sig_;
};

inline bool Elem::is_zero() const {
  require(f_ != nullptr, "element is uninitialized");
  return f_->finite() ? idx_ == 0 : rat_ == 0;
}

inline bool Elem::is_one() const {
  require(f_ != nullptr, "element is uninitialized");
  return f_->finite() ? idx_ == 1 : rat_ == 1;
}

inline bool Elem::operator==(const Elem& o) const {
  require(f_ != nullptr && f_ == o.f_, "comparing elements of different fields");
  return f_->finite() ? idx_ == o.idx_ : rat_ == o.rat_;
}

inline Elem operator+(const Elem& a, const Elem& b) { return a.field()->add(a, b); }
inline Elem operator-(const Elem& a, const Elem& b) { return a.field()->sub(a, b); }
inline Elem operator*(const Elem& a, const Elem& b) { return a.field()->mul(a, b); }
inline Elem operator/(const Elem& a, const Elem& b) { return a.field()->div(a, b); }
inline Elem operator-(const Elem& a) { return a.field()->neg(a); }

/// Additive subgroup of a field, stored as a row-reduced basis over the
/// prime field. Over the rationals only the zero subgroup and the full field
/// are representable (those are the only subgroups the form calculus uses).
class AdditiveSubgroup {
 public:
  static AdditiveSubgroup zero(const Field* f) { return AdditiveSubgroup(f, {}, false); }

  static AdditiveSubgroup all(const Field* f) {
    if (!f->finite()) return AdditiveSubgroup(f, {}, true);
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < f->degree(); ++i) {
      std::vector<int> r(f->degree(), 0);
      r[i] = 1;
      rows.push_back(std::move(r));
    }
    return AdditiveSubgroup(f, std::move(rows), false);
  }

  static AdditiveSubgroup span(const Field* f, const std::vector<Elem>& gens) {
    if (!f->finite()) {
      for (const Elem& g : gens)
        if (!g.is_zero()) return all(f);
      return zero(f);
    }
    std::vector<std::vector<int>> rows;
    for (const Elem& g : gens) {
      f->check(g);
      std::vector<long> c = f->coords(g);
      rows.emplace_back(c.begin(), c.end());
    }
    detail::prref(rows, f->characteristic());
    return AdditiveSubgroup(f, std::move(rows), false);
  }

  /// Basis rows over the prime field, entries in [0, p).
  static AdditiveSubgroup from_basis_rows(const Field* f,
                                          std::vector<std::vector<int>> rows) {
    require(f->finite(), "from_basis_rows: finite fields only");
    for (auto& r : rows) {
      require(static_cast<int>(r.size()) == f->degree(),
              "subgroup basis row has wrong length");
      for (int& x : r) x = static_cast<int>(detail::pmod(x, f->characteristic()));
    }
    detail::prref(rows, f->characteristic());
    return AdditiveSubgroup(f, std::move(rows), false);
  }

  const Field* field() const { return f_; }
  bool is_zero() const { return !all_ && rows_.empty(); }
  bool is_all() const {
    return f_->finite() ? static_cast<int>(rows_.size()) == f_->degree() : all_;
  }
  int dim() const {
    require(f_->finite(), "dim: finite fields only");
    return static_cast<int>(rows_.size());
  }
  const std::vector<std::vector<int>>& basis_rows() const { return rows_; }

  bool contains(const Elem& a) const {
    f_->check(a);
    if (!f_->finite()) return all_ || a.is_zero();
    return reduce(a).is_zero();
  }

  bool contains(const AdditiveSubgroup& o) const {
    require(f_ == o.f_, "subgroup fields differ");
    if (!f_->finite()) return all_ || o.is_zero();
    for (const auto& r : o.rows_) {
      std::vector<long> c(r.begin(), r.end());
      if (!contains(f_->from_coords(c))) return false;
    }
    return true;
  }

  bool operator==(const AdditiveSubgroup& o) const {
    require(f_ == o.f_, "subgroup fields differ");
    if (!f_->finite()) return all_ == o.all_;
    return rows_ == o.rows_;
  }
  bool operator!=(const AdditiveSubgroup& o) const { return !(*this == o); }

  /// Canonical coset representative: coordinates at the basis pivot columns
  /// are eliminated. Idempotent and constant on cosets.
  Elem reduce(const Elem& a) const {
    f_->check(a);
    if (!f_->finite()) return all_ ? f_->zero() : a;
    if (rows_.empty()) return a;
    std::vector<long> c = f_->coords(a);
    std::vector<int> v(c.begin(), c.end());
    detail::preduce(v, rows_, pivots(), f_->characteristic());
    std::vector<long> out(v.begin(), v.end());
    return f_->from_coords(out);
  }

  /// All elements, enumerated by coefficient tuples over the basis.
  std::vector<Elem> elements() const {
    require(f_->finite(), "elements: finite fields only");
    const long p = f_->characteristic();
    long n = 1;
    for (size_t i = 0; i < rows_.size(); ++i) n *= p;
    std::vector<Elem> out;
    out.reserve(n);
    for (long idx = 0; idx < n; ++idx) {
      std::vector<int> acc(f_->degree(), 0);
      long t = idx;
      for (size_t i = 0; i < rows_.size(); ++i) {
        long co = t % p;
        t /= p;
        for (int j = 0; j < f_->degree(); ++j)
          acc[j] = static_cast<int>((acc[j] + co * rows_[i][j]) % p);
      }
      out.push_back(f_->from_coords(std::vector<long>(acc.begin(), acc.end())));
    }
    return out;
  }

  /// a * this, as a subgroup.
  AdditiveSubgroup scaled(const Elem& a) const {
    f_->check(a);
    if (!f_->finite()) {
      if (a.is_zero()) return zero(f_);
      return *this;
    }
    std::vector<Elem> gens;
    for (const auto& r : rows_) {
      std::vector<long> c(r.begin(), r.end());
      gens.push_back(a * f_->from_coords(c));
    }
    return span(f_, gens);
  }

  AdditiveSubgroup sum(const AdditiveSubgroup& o) const {
    require(f_ == o.f_, "subgroup fields differ");
    if (!f_->finite()) return (all_ || o.all_) ? all(f_) : zero(f_);
    std::vector<std::vector<int>> rows = rows_;
    rows.insert(rows.end(), o.rows_.begin(), o.rows_.end());
    detail::prref(rows, f_->characteristic());
    return AdditiveSubgroup(f_, std::move(rows), false);
  }

 private:
  AdditiveSubgroup(const Field* f, std::vector<std::vector<int>> rows, bool all)
      : f_(f), rows_(std::move(rows)), all_(all) {}

  std::vector<int> pivots() const {
    std::vector<int> piv;
    for (const auto& r : rows_) {
      for (size_t j = 0; j < r.size(); ++j) {
        if (r[j] != 0) { piv.push_back(static_cast<int>(j)); break; }
      }
    }
    return piv;
  }

  const Field* f_;
  std::vector<std::vector<int>> rows_;  // row-reduced over GF(p)
  bool all_ = false;                    // rationals only
};

/// { a - eps * sigma(a) : a in F }, the smallest admissible lambda.
inline AdditiveSubgroup lambda_min(const Field* f, const Elem& eps) {
  f->check(eps);
  if (!f->finite()) {
    // sigma = id; eps = 1 gives 0, eps = -1 gives all of Q.
    return eps.is_one() ? AdditiveSubgroup::zero(f) : AdditiveSubgroup::all(f);
  }
  std::vector<Elem> gens;
  for (const Elem& a : f->elements()) gens.push_back(a - eps * f->involve(a));
  return AdditiveSubgroup::span(f, gens);
}

/// { a : a + eps * sigma(a) = 0 }, the largest admissible lambda.
inline AdditiveSubgroup lambda_max(const Field* f, const Elem& eps) {
  f->check(eps);
  if (!f->finite())
    return eps.is_one() ? AdditiveSubgroup::zero(f) : AdditiveSubgroup::all(f);
  std::vector<Elem> gens;
  for (const Elem& a : f->elements())
    if ((a + eps * f->involve(a)).is_zero()) gens.push_back(a);
  return AdditiveSubgroup::span(f, gens);
}

/// True iff lambda_min <= lambda <= lambda_max for the given eps.
inline bool subgroup_validate(const Field* f, const Elem& eps,
                              const AdditiveSubgroup& lambda) {
  require(lambda.field() == f, "subgroup_validate: field mismatch");
  return lambda.contains(lambda_min(f, eps)) && lambda_max(f, eps).contains(lambda);
}

inline Elem coset_reduce(const Elem& a, const AdditiveSubgroup& lambda) {
  return lambda.reduce(a);
}

/// Largest subgroup L' <= L with c * sigma(c) * L' <= L' for every c. This is
/// exactly { a : c * sigma(c) * a in L for all c }, and equals L whenever L is
/// itself closed under those multipliers.
inline AdditiveSubgroup closure_core(const AdditiveSubgroup& lambda) {
  const Field* f = lambda.field();
  if (!f->finite()) return lambda;  // both representable subgroups are closed
  std::vector<Elem> gens;
  for (const Elem& a : f->elements()) {
    bool ok = true;
    for (const Elem& c : f->elements()) {
      if (!lambda.contains(f->norm(c) * a)) { ok = false; break; }
    }
    if (ok) gens.push_back(a);
  }
  return AdditiveSubgroup::span(f, gens);
}

/// The fixed subfield F^sigma, as an additive subgroup.
inline AdditiveSubgroup fixed_subfield_subgroup(const Field* f) {
  if (!f->finite()) return AdditiveSubgroup::all(f);
  std::vector<Elem> gens;
  for (const Elem& a : f->elements())
    if (f->involve(a) == a) gens.push_back(a);
  return AdditiveSubgroup::span(f, gens);
}

}  // namespace formkit
