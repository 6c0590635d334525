#pragma once

// Translation schemes on spaces of polynomials, classified by how the
// difference of two polynomials factors.
//
//   hom2, hom3   binary forms of degree k in X, Y; a coefficient vector v is
//                sum v_i X^i Y^{k-i}, so it matches the ERS(q,k) coefficient order
//   ternary2     quadratic forms in X, Y, Z with monomials X^2, XY, XZ, Y^2, YZ, Z^2
//
// Eigenmatrices come from counting each class against every hyperplane of the
// dual space. Dual classes are the distinct eigenvalue tuples.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isect/codes.hpp"
#include "isect/config.hpp"
#include "isect/ekr.hpp"
#include "isect/error.hpp"
#include "isect/gf.hpp"
#include "isect/numeric.hpp"
#include "isect/pg.hpp"
#include "isect/spectral.hpp"

namespace isect {

enum class SchemeFamily { Hom2, Hom3, Ternary2 };

inline std::string to_string(SchemeFamily f) {
  switch (f) {
    case SchemeFamily::Hom2:
      return "hom2";
    case SchemeFamily::Hom3:
      return "hom3";
    case SchemeFamily::Ternary2:
      return "ternary2";
  }
  return "?";
}

inline SchemeFamily parse_scheme_family(const std::string& s) {
  if (s == "hom2") return SchemeFamily::Hom2;
  if (s == "hom3") return SchemeFamily::Hom3;
  if (s == "ternary2") return SchemeFamily::Ternary2;
  throw Error(Errc::BadParameters, "unknown scheme family '" + s + "'");
}

/// Number of nontrivial classes.
inline std::size_t class_count(SchemeFamily f) {
  switch (f) {
    case SchemeFamily::Hom2:
      return 3;
    case SchemeFamily::Hom3:
      return 5;
    case SchemeFamily::Ternary2:
      return 4;
  }
  return 0;
}

inline std::size_t group_dimension(SchemeFamily f) {
  switch (f) {
    case SchemeFamily::Hom2:
      return 3;
    case SchemeFamily::Hom3:
      return 4;
    case SchemeFamily::Ternary2:
      return 6;
  }
  return 0;
}

struct FactorType {
  SchemeFamily family;
  std::size_t index;  // 1..d; 0 is reserved for the zero vector

  std::string name() const { return "R" + std::to_string(index); }
  friend bool operator==(const FactorType&, const FactorType&) = default;
};

/// Projective root multiplicities of a nonzero binary form, largest first.
inline std::vector<std::size_t> root_pattern(const Field& F, const HomPoly& f) {
  Poly g = f.a;
  poly::trim(g);
  if (g.empty()) throw Error(Errc::ZeroPolynomial, "the zero form has no factorization type");
  std::vector<std::size_t> mult;
  const std::size_t at_inf = f.degree() - static_cast<std::size_t>(poly::degree(g));
  if (at_inf) mult.push_back(at_inf);
  for (std::uint32_t x = 0; x < F.q(); ++x) {
    std::size_t m = 0;
    const Poly lin{F.neg(Elem{x}), F.one()};
    while (poly::degree(g) > 0 && poly::eval(F, g, Elem{x}).code == 0) {
      g = poly::divmod(F, g, lin).first;
      ++m;
    }
    if (m) mult.push_back(m);
  }
  std::sort(mult.rbegin(), mult.rend());
  return mult;
}

inline FactorType hom_factor_type(const Field& F, const HomPoly& f) {
  const std::size_t k = f.degree();
  if (k != 2 && k != 3) throw Error(Errc::BadParameters, "binary forms of degree 2 or 3 only");
  const auto pat = root_pattern(F, f);
  using P = std::vector<std::size_t>;
  if (k == 2) {
    if (pat == P{2}) return {SchemeFamily::Hom2, 1};
    if (pat == P{1, 1}) return {SchemeFamily::Hom2, 2};
    if (pat.empty()) return {SchemeFamily::Hom2, 3};
  } else {
    if (pat == P{3}) return {SchemeFamily::Hom3, 1};
    if (pat == P{2, 1}) return {SchemeFamily::Hom3, 2};
    if (pat == P{1, 1, 1}) return {SchemeFamily::Hom3, 3};
    if (pat == P{1}) return {SchemeFamily::Hom3, 4};
    if (pat.empty()) return {SchemeFamily::Hom3, 5};
  }
  throw Error(Errc::NotAScheme, "impossible root pattern");
}

namespace detail {

inline Elem eval_ternary(const Field& E, const Vec& a, const Vec& x) {
  const Elem terms[6] = {E.mul(x[0], x[0]), E.mul(x[0], x[1]), E.mul(x[0], x[2]),
                         E.mul(x[1], x[1]), E.mul(x[1], x[2]), E.mul(x[2], x[2])};
  Elem s = E.zero();
  for (int i = 0; i < 6; ++i) s = E.add(s, E.mul(a[i], terms[i]));
  return s;
}

/// L divides a quadratic form iff the form vanishes at three distinct points of L = 0.
inline bool linear_form_divides(const Field& E, const Vec& a, const Vec& L) {
  std::size_t j = 0;
  while (L[j].code == 0) ++j;
  const Elem inv = E.inv(L[j]);
  std::vector<Vec> basis;
  for (std::size_t r = 0; r < 3; ++r) {
    if (r == j) continue;
    Vec e(3, E.zero());
    e[r] = E.one();
    e[j] = E.neg(E.mul(L[r], inv));
    basis.push_back(e);
  }
  Vec sum(3);
  for (std::size_t i = 0; i < 3; ++i) sum[i] = E.add(basis[0][i], basis[1][i]);
  return eval_ternary(E, a, basis[0]).code == 0 && eval_ternary(E, a, basis[1]).code == 0 && eval_ternary(E, a, sum).code == 0;
}

}  // namespace detail

/// Classifier for ternary quadratic forms over F_q, holding PG(2,q) and PG(2,q^2).
class TernaryClassifier {
 public:
  explicit TernaryClassifier(FieldPtr F) : F_(std::move(F)) {
    E_ = Field::extension(F_, poly::find_irreducible(*F_, 2));
    const ProjectiveSpace plane(F_, 3);
    lines_ = plane.hyperplanes();
    points_ = plane.points();
    const ProjectiveSpace big(E_, 3);
    through_.resize(points_.size());
    for (std::size_t p = 0; p < points_.size(); ++p) through_[p] = big.hyperplanes_through(points_[p]);
  }

  const Field& field() const { return *F_; }
  const Field& extension() const { return *E_; }

  /// Linear divisors over F_q, in canonical order.
  std::vector<Hyperplane> rational_divisors(const Vec& a) const {
    std::vector<Hyperplane> out;
    for (const auto& L : lines_)
      if (detail::linear_form_divides(*F_, a, L.dual)) out.push_back(L);
    return out;
  }

  FactorType classify(const Vec& a) const {
    if (a.size() != 6) throw Error(Errc::DimensionMismatch, "a ternary quadratic has 6 coefficients");
    if (std::all_of(a.begin(), a.end(), [](Elem e) { return e.code == 0; }))
      throw Error(Errc::ZeroPolynomial, "the zero form has no factorization type");
    const auto divs = rational_divisors(a);
    if (divs.size() >= 2) return {SchemeFamily::Ternary2, 2};
    if (divs.size() == 1) return {SchemeFamily::Ternary2, 1};
    // A conjugate pair of lines has exactly one rational point: their intersection.
    std::optional<std::size_t> zero;
    for (std::size_t p = 0; p < points_.size(); ++p) {
      if (detail::eval_ternary(*F_, a, points_[p].coords).code != 0) continue;
      if (zero) return {SchemeFamily::Ternary2, 4};
      zero = p;
    }
    if (!zero) return {SchemeFamily::Ternary2, 4};
    for (const auto& L : through_[*zero])
      if (detail::linear_form_divides(*E_, a, L.dual)) return {SchemeFamily::Ternary2, 3};
    return {SchemeFamily::Ternary2, 4};
  }

 private:
  FieldPtr F_;
  FieldPtr E_;
  std::vector<Hyperplane> lines_;
  std::vector<ProjPoint> points_;
  std::vector<std::vector<Hyperplane>> through_;
};

inline FactorType ternary_quadratic_type(const FieldPtr& F, const Vec& a) { return TernaryClassifier(F).classify(a); }

// ---------------------------------------------------------------------------

/// The classes of F_q^dim under a factorization-type classifier.
struct TranslationScheme {
  SchemeFamily family;
  FieldPtr field;
  std::size_t dim = 0;
  std::size_t d = 0;
  std::vector<std::uint8_t> type;           // class of each group element (index as codeword index)
  std::vector<std::uint64_t> class_sizes;   // d+1 entries, class 0 = {0}
  std::uint64_t order() const { return type.size(); }
};

inline TranslationScheme build_scheme(SchemeFamily family, std::uint32_t q, const Config& cfg = default_config()) {
  TranslationScheme S;
  S.family = family;
  S.field = Field::of_order(q);
  S.dim = group_dimension(family);
  S.d = class_count(family);
  const Field& F = *S.field;
  if ((family == SchemeFamily::Hom2 && q < 3) || (family == SchemeFamily::Hom3 && q < 4))
    throw Error(Errc::BadParameters, "need q > k for binary forms of degree k");
  const std::uint64_t N = checked_pow(q, S.dim);
  if (N > cfg.enumeration_cap) throw Error(Errc::TooLarge, "group of order " + std::to_string(N) + " exceeds the enumeration cap");
  S.type.assign(N, 0);
  S.class_sizes.assign(S.d + 1, 0);
  S.class_sizes[0] = 1;

  std::optional<TernaryClassifier> tern;
  if (family == SchemeFamily::Ternary2) tern.emplace(S.field);
  const ProjectiveSpace space(S.field, S.dim, cfg);
  auto index_of = [&](const Vec& v) {
    std::uint64_t r = 0;
    for (const auto& e : v) r = r * q + e.code;
    return r;
  };
  for (std::uint64_t p = 0; p < space.size(); ++p) {
    const Vec v = space.vector_at(p);
    std::size_t cls;
    if (tern) {
      cls = tern->classify(v).index;
    } else {
      cls = hom_factor_type(F, HomPoly{v}).index;
    }
    for (std::uint32_t b = 1; b < q; ++b) {
      Vec w(v);
      for (auto& e : w) e = F.mul(e, Elem{b});
      S.type[index_of(w)] = static_cast<std::uint8_t>(cls);
    }
    S.class_sizes[cls] += q - 1;
  }
  return S;
}

using IntMatrix = std::vector<std::vector<BigInt>>;

namespace detail {

/// Exact inverse of a square rational matrix by Gauss-Jordan elimination.
inline std::vector<std::vector<Rational>> inverse(std::vector<std::vector<Rational>> A) {
  const std::size_t n = A.size();
  std::vector<std::vector<Rational>> I(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && A[piv][c] == 0) ++piv;
    if (piv == n) throw Error(Errc::NotAScheme, "eigenmatrix is singular");
    std::swap(A[c], A[piv]);
    std::swap(I[c], I[piv]);
    const Rational inv = Rational(1) / A[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      A[c][j] *= inv;
      I[c][j] *= inv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || A[r][c] == 0) continue;
      const Rational f = A[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        A[r][j] -= f * A[c][j];
        I[r][j] -= f * I[c][j];
      }
    }
  }
  return I;
}

inline IntMatrix multiply(const IntMatrix& A, const IntMatrix& B) {
  IntMatrix C(A.size(), std::vector<BigInt>(B[0].size(), 0));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t k = 0; k < B.size(); ++k)
      for (std::size_t j = 0; j < B[0].size(); ++j) C[i][j] += A[i][k] * B[k][j];
  return C;
}

}  // namespace detail

/// P(j,i): eigenvalue of class i on dual class j. Row 0 is the trivial
/// character; rows 1..d follow the first dual point of each dual class in
/// canonical point order.
struct EigenMatrices {
  IntMatrix P, Q;
  std::vector<BigInt> multiplicities;          // m_j, m_0 = 1
  std::vector<std::uint64_t> dual_class_sizes;  // projective dual points per dual class
  std::vector<std::uint64_t> class_sizes;
  std::vector<std::uint64_t> dual_representative;  // index of one dual point per row (row 0: none)
  BigInt order;
};

inline EigenMatrices scheme_eigenmatrices(const TranslationScheme& S, const Config& cfg = default_config()) {
  const Field& F = *S.field;
  const std::uint32_t q = F.q();
  const ProjectiveSpace space(S.field, S.dim, cfg);
  const std::uint64_t np = space.size();
  for (std::size_t i = 1; i <= S.d; ++i)
    if (S.class_sizes[i] % (q - 1)) throw Error(Errc::NotAScheme, "class size not divisible by q-1");

  std::vector<Vec> pts(np);
  std::vector<std::uint8_t> cls(np);
  for (std::uint64_t p = 0; p < np; ++p) {
    pts[p] = space.vector_at(p);
    std::uint64_t r = 0;
    for (const auto& e : pts[p]) r = r * q + e.code;
    cls[p] = S.type[r];
  }

  std::map<std::vector<std::int64_t>, std::size_t> row_of;
  std::vector<std::vector<std::int64_t>> rows;
  std::vector<std::uint64_t> sizes, reps;
  std::vector<std::int64_t> rep_count(S.d + 1, 0);
  for (std::size_t i = 1; i <= S.d; ++i) rep_count[i] = static_cast<std::int64_t>(S.class_sizes[i] / (q - 1));
  for (std::uint64_t w = 0; w < np; ++w) {
    std::vector<std::int64_t> hit(S.d + 1, 0);
    for (std::uint64_t x = 0; x < np; ++x)
      if (dot(F, pts[w], pts[x]).code == 0) ++hit[cls[x]];
    std::vector<std::int64_t> e(S.d + 1, 1);
    for (std::size_t i = 1; i <= S.d; ++i) e[i] = static_cast<std::int64_t>(q) * hit[i] - rep_count[i];
    auto [it, fresh] = row_of.emplace(e, rows.size());
    if (fresh) {
      rows.push_back(e);
      sizes.push_back(0);
      reps.push_back(w);
    }
    ++sizes[it->second];
  }
  if (rows.size() != S.d)
    throw Error(Errc::NotAScheme, std::to_string(rows.size()) + " distinct eigenvalue tuples for " + std::to_string(S.d) + " classes");

  EigenMatrices E;
  E.order = BigInt(S.order());
  E.class_sizes = S.class_sizes;
  E.P.assign(S.d + 1, std::vector<BigInt>(S.d + 1));
  for (std::size_t i = 0; i <= S.d; ++i) E.P[0][i] = S.class_sizes[i];
  E.dual_class_sizes.push_back(0);
  E.dual_representative.push_back(0);
  E.multiplicities.push_back(1);
  for (std::size_t j = 0; j < S.d; ++j) {
    for (std::size_t i = 0; i <= S.d; ++i) E.P[j + 1][i] = rows[j][i];
    E.dual_class_sizes.push_back(sizes[j]);
    E.dual_representative.push_back(reps[j]);
    E.multiplicities.push_back(BigInt(sizes[j]) * (q - 1));
  }

  std::vector<std::vector<Rational>> Pr(S.d + 1, std::vector<Rational>(S.d + 1));
  for (std::size_t a = 0; a <= S.d; ++a)
    for (std::size_t b = 0; b <= S.d; ++b) Pr[a][b] = Rational(E.P[a][b]);
  const auto inv = detail::inverse(Pr);
  E.Q.assign(S.d + 1, std::vector<BigInt>(S.d + 1));
  for (std::size_t a = 0; a <= S.d; ++a)
    for (std::size_t b = 0; b <= S.d; ++b) {
      const Rational v = inv[a][b] * Rational(E.order);
      if (!is_integer(v)) throw Error(Errc::NotAScheme, "Q is not integral");
      E.Q[a][b] = numerator(v);
    }
  for (std::size_t j = 0; j <= S.d; ++j)
    if (E.Q[0][j] != E.multiplicities[j]) throw Error(Errc::NotAScheme, "multiplicities disagree with the first row of Q");
  const IntMatrix PQ = detail::multiply(E.P, E.Q);
  for (std::size_t a = 0; a <= S.d; ++a)
    for (std::size_t b = 0; b <= S.d; ++b)
      if (PQ[a][b] != (a == b ? E.order : BigInt(0))) throw Error(Errc::NotAScheme, "P Q differs from |X| I");
  return E;
}

inline EigenMatrices scheme_eigenmatrices(SchemeFamily family, std::uint32_t q, const Config& cfg = default_config()) {
  return scheme_eigenmatrices(build_scheme(family, q, cfg), cfg);
}

// ---------------------------------------------------------------------------
// Closed-form tables.

struct ClosedFormTable {
  std::string name;
  bool applicable = true;  // false outside the range the formulas are stated for
  IntMatrix P, Q;
};

namespace detail {

inline IntMatrix to_int(const std::vector<std::vector<Rational>>& R) {
  IntMatrix M(R.size());
  for (std::size_t i = 0; i < R.size(); ++i)
    for (const auto& v : R[i]) {
      if (!is_integer(v)) throw Error(Errc::TableMismatch, "closed form is not integral at this q");
      M[i].push_back(numerator(v));
    }
  return M;
}

}  // namespace detail

inline ClosedFormTable closed_form_table(SchemeFamily family, std::uint32_t qq) {
  using R = Rational;
  const R q(qq);
  const R h = R(1, 2), s = R(1, 6), t = R(1, 3);
  ClosedFormTable T;
  std::vector<std::vector<R>> P, Q;
  if (family == SchemeFamily::Hom2) {
    const std::vector<R> top{1, q * q - 1, h * q * (q * q - 1), h * q * (q - 1) * (q - 1)};
    if (qq % 2) {
      T.name = "hom2_odd";
      P = {top, {1, -1, h * q * (q - 1), -h * q * (q - 1)}, {1, q - 1, -q, 0}, {1, -q - 1, 0, q}};
      Q = P;
    } else {
      T.name = "hom2_even";
      P = {top, {1, -1, h * q * (q - 1), -h * q * (q - 1)}, {1, q * q - 1, -h * q * (q + 1), -h * q * (q - 1)}, {1, -1, -h * q, h * q}};
      Q = {{1, q * q - 1, q - 1, (q + 1) * (q - 1) * (q - 1)}, {1, -1, q - 1, -q + 1}, {1, q - 1, -1, -q + 1}, {1, -q - 1, -1, q + 1}};
    }
  } else if (family == SchemeFamily::Hom3) {
    const R c = (q - 1) * (q - 1) * q * (q + 1);
    const std::vector<R> top{1, q * q - 1, q * (q * q - 1), s * c, h * c, t * c};
    if (qq % 3 == 0) {
      T.name = "hom3_3divq";
      P = {top,
           {1, -1, q * (q - 1), s * q * (q - 1) * (2 * q - 1), -h * q * (q - 1), -t * (q - 1) * q * (q + 1)},
           {1, q * q - 1, -q, -s * q * (q - 1), -h * q * (q - 1), -t * q * (q - 1)},
           {1, -1, q * (q - 1), -s * q * (3 * q - 1), -h * q * (q - 1), t * q},
           {1, -1, -q, s * q * (q + 1), -h * q * (q - 1), t * q * (q + 1)},
           {1, -1, -q, -s * q * (q - 1), h * q * (q + 1), -t * q * (q - 1)}};
      Q = {{1, q * q - 1, q * q - 1, (q - 1) * (q - 1) * (q + 1), h * c, h * c},
           {1, -1, q * q - 1, -(q - 1), -h * q * (q - 1), -h * q * (q - 1)},
           {1, q - 1, -1, (q - 1) * (q - 1), -h * q * (q - 1), -h * q * (q - 1)},
           {1, 2 * q - 1, -1, -(3 * q - 1), h * q * (q + 1), -h * q * (q - 1)},
           {1, -1, -1, -(q - 1), -h * q * (q - 1), h * q * (q + 1)},
           {1, -(q + 1), -1, 1, h * q * (q + 1), -h * q * (q - 1)}};
    } else {
      const R e = qq % 3 == 1 ? 1 : -1;
      T.name = qq % 3 == 1 ? "hom3_eps_plus" : "hom3_eps_minus";
      T.applicable = qq >= 5;
      P = {top,
           {1, -1, q * (q - 1), s * q * (q - 1) * (2 * q - 1), -h * q * (q - 1), -t * q * (q - 1) * (q + 1)},
           {1, q - 1, q * (q - 2), -h * q * (q - 1), -h * q * (q - 1), 0},
           {1, 2 * q - 1, -3 * q, s * q * (e * q + 5), h * q * (-e * q + 1), t * q * (e * q - 1)},
           {1, -1, -q, s * q * (-e * q + 1), h * q * (e * q + 1), t * q * (-e * q + 1)},
           {1, -(q + 1), 0, s * q * (e * q - 1), h * q * (-e * q + 1), t * q * (e * q + 2)}};
      Q = P;
    }
  } else {
    const R w = q * q + q + 1;
    const std::vector<R> top{1, q * q * q - 1, h * q * (q * q - 1) * w, h * q * (q - 1) * (q - 1) * w, q * q * (q - 1) * (q - 1) * w};
    if (qq % 2) {
      T.name = "ternary2_odd";
      P = {top,
           {1, -1, h * q * (q + 1) * (q + 1) * (q - 1), -h * q * (q - 1) * (q * q + 1), -q * q * (q - 1)},
           {1, q * q - 1, h * q * (q * q - 2 * q - 1), h * q * (q - 1) * (q - 1), -q * q * (q - 1)},
           {1, -(q * q + 1), h * q * (q * q - 1), h * q * (q * q + 1), -q * q * (q - 1)},
           {1, -1, -h * q * (q + 1), -h * q * (q - 1), q * q}};
      Q = P;
    } else {
      T.name = "ternary2_even";
      P = {top,
           {1, -1, h * q * (q + 1) * (q + 1) * (q - 1), -h * q * (q - 1) * (q * q + 1), -q * q * (q - 1)},
           {1, q * q * q - 1, -h * q * (q + 1), -h * q * (q - 1), -q * q * (q - 1)},
           {1, -1, h * q * (q * q - q - 1), h * q * (q * q - q + 1), -q * q * (q - 1)},
           {1, -1, -h * q * (q + 1), -h * q * (q - 1), q * q}};
      Q = {{1, q * q * q - 1, q * q * q - 1, (q + 1) * (q - 1) * (q - 1) * w, q * q * (q - 1) * (q - 1) * w},
           {1, -1, q * q * q - 1, -(q * q - 1), -q * q * (q - 1)},
           {1, q * q - 1, -1, (q - 1) * (q * q - q - 1), -q * q * (q - 1)},
           {1, -(q * q + 1), -1, q * q * q + 1, -q * q * (q - 1)},
           {1, -1, -1, -(q * q - 1), q * q}};
    }
  }
  T.P = detail::to_int(P);
  T.Q = detail::to_int(Q);
  return T;
}

struct TableMatch {
  std::string table;
  bool applicable = true;
  bool matched = false;
  std::vector<std::size_t> permutation;  // table row r is computed row permutation[r]
  std::string mismatch;                  // first differing entry when not matched
  bool p_equals_q = false;               // in the matched ordering
  bool p_equals_q_transpose = false;
  bool formally_self_dual = false;       // P = Q under some pairing of classes with dual classes
};

namespace detail {

inline bool formally_self_dual(const IntMatrix& P, const IntMatrix& Q) {
  const std::size_t n = P.size();
  std::vector<std::size_t> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    if (sigma[0] != 0) continue;
    bool ok = true;
    for (std::size_t r = 0; r < n && ok; ++r)
      for (std::size_t c = 0; c < n && ok; ++c) ok = P[sigma[r]][c] == Q[r][sigma[c]];
    if (ok) return true;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return false;
}

}  // namespace detail

/// Compares computed eigenmatrices with the closed form for q. Row 0 stays
/// fixed; rows 1..d are matched as a multiset, and Q is checked after the
/// corresponding column permutation.
inline TableMatch match_closed_form(SchemeFamily family, std::uint32_t q, const EigenMatrices& E) {
  const ClosedFormTable T = closed_form_table(family, q);
  TableMatch m;
  m.table = T.name;
  m.applicable = T.applicable;
  const std::size_t n = E.P.size();
  if (T.P.size() != n) {
    m.mismatch = "table size differs";
    return m;
  }
  m.permutation.assign(n, 0);
  std::vector<bool> used(n, false);
  used[0] = true;
  for (std::size_t r = 0; r < n; ++r) {
    std::optional<std::size_t> hit;
    for (std::size_t c = (r == 0 ? 0 : 1); c < n && !hit; ++c)
      if ((r == 0 || !used[c]) && E.P[c] == T.P[r]) hit = c;
    if (r == 0 && E.P[0] != T.P[0]) hit.reset();
    if (!hit) {
      for (std::size_t j = 0; j < n; ++j)
        if (T.P[r][j] != E.P[r][j]) {
          m.mismatch = "P row " + std::to_string(r) + " (" + to_string(T.P[r][j]) + " in the table at column " + std::to_string(j) +
                       ") matches no computed row";
          break;
        }
      if (m.mismatch.empty()) m.mismatch = "P row " + std::to_string(r) + " matches no computed row";
      return m;
    }
    used[*hit] = true;
    m.permutation[r] = *hit;
  }
  IntMatrix Pa(n), Qa(n, std::vector<BigInt>(n));
  for (std::size_t r = 0; r < n; ++r) Pa[r] = E.P[m.permutation[r]];
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) Qa[r][c] = E.Q[r][m.permutation[c]];
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      if (Qa[r][c] != T.Q[r][c]) {
        m.mismatch = "Q(" + std::to_string(r) + "," + std::to_string(c) + ") is " + to_string(Qa[r][c]) + ", table has " + to_string(T.Q[r][c]);
        return m;
      }
  m.matched = true;
  m.p_equals_q = Pa == Qa;
  bool tr = true;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) tr = tr && Pa[r][c] == Qa[c][r];
  m.p_equals_q_transpose = tr;
  m.formally_self_dual = detail::formally_self_dual(E.P, E.Q);
  return m;
}

/// Builds the scheme, computes P and Q, and requires a match whenever the
/// closed form applies at this q.
inline TableMatch verify_closed_form(SchemeFamily family, std::uint32_t q, const Config& cfg = default_config()) {
  const auto E = scheme_eigenmatrices(family, q, cfg);
  auto m = match_closed_form(family, q, E);
  if (m.applicable && !m.matched) throw Error(Errc::TableMismatch, m.table + ": " + m.mismatch);
  return m;
}

// ---------------------------------------------------------------------------

struct IntersectionNumbers {
  // p[k][i][j] = #{z : type(z) = i, type(y - z) = j} for any y of class k
  std::vector<std::vector<std::vector<std::uint64_t>>> p;
  bool full = false;              // every member of every class was checked
  std::uint64_t checked_points = 0;
};

inline IntersectionNumbers intersection_numbers(const TranslationScheme& S, const Config& cfg = default_config()) {
  const Field& F = *S.field;
  const std::uint32_t q = F.q();
  const std::uint64_t N = S.order();
  const std::size_t d = S.d, dim = S.dim;
  std::vector<std::uint16_t> digits(N * dim);
  for (std::uint64_t x = 0; x < N; ++x) {
    std::uint64_t r = x;
    for (std::size_t i = dim; i-- > 0;) {
      digits[x * dim + i] = static_cast<std::uint16_t>(r % q);
      r /= q;
    }
  }
  std::vector<std::uint32_t> sub(static_cast<std::size_t>(q) * q);
  for (std::uint32_t a = 0; a < q; ++a)
    for (std::uint32_t b = 0; b < q; ++b) sub[a * q + b] = F.sub(Elem{a}, Elem{b}).code;

  std::vector<std::vector<std::uint64_t>> members(d + 1);
  for (std::uint64_t x = 0; x < N; ++x) members[S.type[x]].push_back(x);

  IntersectionNumbers out;
  out.full = N <= cfg.full_check_cap;
  out.p.assign(d + 1, std::vector<std::vector<std::uint64_t>>(d + 1, std::vector<std::uint64_t>(d + 1, 0)));
  auto tally = [&](std::uint64_t y) {
    std::vector<std::vector<std::uint64_t>> c(d + 1, std::vector<std::uint64_t>(d + 1, 0));
    const std::uint16_t* yd = &digits[y * dim];
    for (std::uint64_t z = 0; z < N; ++z) {
      const std::uint16_t* zd = &digits[z * dim];
      std::uint64_t r = 0;
      for (std::size_t i = 0; i < dim; ++i) r = r * q + sub[yd[i] * q + zd[i]];
      ++c[S.type[z]][S.type[r]];
    }
    return c;
  };
  constexpr std::size_t kSample = 16;
  for (std::size_t k = 0; k <= d; ++k) {
    const auto& mem = members[k];
    const std::size_t stride = out.full || mem.size() <= kSample ? 1 : mem.size() / kSample;
    bool first = true;
    for (std::size_t a = 0; a < mem.size(); a += stride) {
      auto c = tally(mem[a]);
      ++out.checked_points;
      if (first) {
        out.p[k] = std::move(c);
        first = false;
      } else if (c != out.p[k]) {
        throw Error(Errc::NotConstant, "intersection numbers vary within class " + std::to_string(k));
      }
    }
  }
  for (std::size_t k = 0; k <= d; ++k)
    for (std::size_t i = 0; i <= d; ++i)
      for (std::size_t j = 0; j <= d; ++j)
        if (out.p[k][i][j] != out.p[k][j][i]) throw Error(Errc::NotConstant, "intersection numbers are not symmetric");
  return out;
}

/// Delsarte clique bound for the graph of a single class r.
inline BigInt scheme_clique_bound(const EigenMatrices& E, const std::vector<std::size_t>& relations) {
  if (relations.size() != 1)
    throw Error(Errc::BadRelationSet, "the clique bound applies to a single class; got " + std::to_string(relations.size()));
  const std::size_t r = relations[0];
  if (r == 0 || r >= E.P.size()) throw Error(Errc::BadRelationSet, "class index out of range");
  BigInt lo = E.P[0][r];
  for (const auto& row : E.P) lo = std::min(lo, row[r]);
  return delsarte_clique_bound(E.P[0][r], lo);
}

/// Spectrum of the Cayley graph on the union of the given classes.
inline Spectrum union_spectrum(const EigenMatrices& E, const std::vector<std::size_t>& relations) {
  std::vector<std::pair<BigInt, BigInt>> pairs;
  for (std::size_t j = 0; j < E.P.size(); ++j) {
    BigInt v = 0;
    for (std::size_t r : relations) v += E.P[j][r];
    pairs.emplace_back(v, E.multiplicities[j]);
  }
  return make_spectrum(pairs);
}

}  // namespace isect
