#pragma once

// Linear codes over F_q, extended Reed-Solomon codes and the polynomial view
// of their codewords.
//
// Codewords are addressed by the canonical index sum v_i q^{dim-1-i} of their
// coefficient vector v, so index order equals lexicographic order on v.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isect/config.hpp"
#include "isect/error.hpp"
#include "isect/gf.hpp"
#include "isect/numeric.hpp"
#include "isect/pg.hpp"

namespace isect {

struct Codeword {
  Vec coeff;
  Vec word;

  friend bool operator==(const Codeword&, const Codeword&) = default;
};

class LinearCode {
 public:
  LinearCode(FieldPtr field, std::vector<Vec> G) : F_(std::move(field)), G_(std::move(G)) {
    if (G_.empty()) throw Error(Errc::BadParameters, "generator matrix has no rows");
    n_ = G_[0].size();
    for (const auto& row : G_) {
      if (row.size() != n_) throw Error(Errc::DimensionMismatch, "ragged generator matrix");
      for (Elem e : row)
        if (e.code >= F_->q()) throw Error(Errc::FieldMismatch, "matrix entry outside the field");
    }
    if (rank(*F_, G_) != G_.size()) throw Error(Errc::RankDeficient, "generator rows are dependent");
  }

  const Field& field() const { return *F_; }
  const FieldPtr& field_ptr() const { return F_; }
  std::uint32_t q() const { return F_->q(); }
  std::size_t length() const { return n_; }
  std::size_t dim() const { return G_.size(); }
  const std::vector<Vec>& generator() const { return G_; }

  /// Number of codewords q^dim; throws TooLarge above the cap.
  std::uint64_t size(const Config& cfg = default_config()) const {
    const std::uint64_t n = checked_pow(q(), dim());
    if (n > cfg.enumeration_cap) throw Error(Errc::TooLarge, "code has " + std::to_string(n) + " codewords, above the enumeration cap");
    return n;
  }

  Vec column(std::size_t j) const {
    Vec c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = G_[i][j];
    return c;
  }

  Vec encode(const Vec& coeff) const {
    if (coeff.size() != dim()) throw Error(Errc::DimensionMismatch, "coefficient vector has the wrong length");
    Vec w(n_, F_->zero());
    for (std::size_t i = 0; i < dim(); ++i) {
      if (coeff[i].code == 0) continue;
      for (std::size_t j = 0; j < n_; ++j) w[j] = F_->add(w[j], F_->mul(coeff[i], G_[i][j]));
    }
    return w;
  }

  Codeword codeword(const Vec& coeff) const { return Codeword{coeff, encode(coeff)}; }

  Vec coeff_at(std::uint64_t idx) const {
    Vec v(dim());
    for (std::size_t i = dim(); i-- > 0;) {
      v[i] = Elem{static_cast<std::uint32_t>(idx % q())};
      idx /= q();
    }
    if (idx != 0) throw Error(Errc::BadParameters, "codeword index out of range");
    return v;
  }

  std::uint64_t index_of(const Vec& coeff) const {
    if (coeff.size() != dim()) throw Error(Errc::DimensionMismatch, "coefficient vector has the wrong length");
    std::uint64_t idx = 0;
    for (Elem e : coeff) idx = idx * q() + e.code;
    return idx;
  }

  Codeword codeword_at(std::uint64_t idx) const { return codeword(coeff_at(idx)); }

  /// Coefficient vector of a word in the code; throws NotInCode otherwise.
  Vec coeff_of(const Vec& word) const {
    if (word.size() != n_) throw Error(Errc::CodeMismatch, "word has the wrong length");
    // Solve v G = word by elimination on the augmented transpose system.
    const std::size_t k = dim();
    std::vector<Vec> rows(n_, Vec(k + 1));
    for (std::size_t j = 0; j < n_; ++j) {
      for (std::size_t i = 0; i < k; ++i) rows[j][i] = G_[i][j];
      rows[j][k] = word[j];
    }
    std::vector<std::size_t> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < k && r < n_; ++c) {
      std::size_t piv = r;
      while (piv < n_ && rows[piv][c].code == 0) ++piv;
      if (piv == n_) continue;
      std::swap(rows[r], rows[piv]);
      const Elem inv = F_->inv(rows[r][c]);
      for (auto& x : rows[r]) x = F_->mul(x, inv);
      for (std::size_t i = 0; i < n_; ++i) {
        if (i == r || rows[i][c].code == 0) continue;
        const Elem f = rows[i][c];
        for (std::size_t j = 0; j <= k; ++j) rows[i][j] = F_->sub(rows[i][j], F_->mul(f, rows[r][j]));
      }
      pivcol.push_back(c);
      ++r;
    }
    for (std::size_t i = r; i < n_; ++i)
      if (rows[i][k].code != 0) throw Error(Errc::NotInCode, "word is not a codeword");
    Vec v(k, F_->zero());
    for (std::size_t i = 0; i < r; ++i) v[pivcol[i]] = rows[i][k];
    return v;
  }

  /// Calls fn(index, coeff, word) for every codeword in index order. Words are
  /// updated incrementally, one generator row per changed coefficient.
  void for_each(const std::function<void(std::uint64_t, const Vec&, const Vec&)>& fn, const Config& cfg = default_config()) const {
    const std::uint64_t total = size(cfg);
    Vec v(dim(), F_->zero()), w(n_, F_->zero());
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      fn(idx, v, w);
      for (std::size_t i = dim(); i-- > 0;) {
        const Elem old = v[i];
        const Elem nxt{(old.code + 1) % q()};
        v[i] = nxt;
        const Elem delta = F_->sub(nxt, old);
        for (std::size_t j = 0; j < n_; ++j) w[j] = F_->add(w[j], F_->mul(delta, G_[i][j]));
        if (nxt.code != 0) break;
      }
    }
  }

  /// Canonical columns; the code is projective when these are pairwise distinct.
  std::vector<ProjPoint> projective_system() const {
    std::vector<ProjPoint> out;
    out.reserve(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      auto c = canonicalize(*F_, column(j));
      if (!c) throw Error(Errc::BadParameters, "zero column " + std::to_string(j) + " has no projective point");
      out.push_back(ProjPoint{std::move(*c)});
    }
    return out;
  }

 private:
  FieldPtr F_;
  std::vector<Vec> G_;
  std::size_t n_ = 0;
};

inline std::size_t weight(const Vec& w) {
  return static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](Elem e) { return e.code != 0; }));
}

inline std::size_t agreements(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(Errc::CodeMismatch, "words of different length");
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a[i] == b[i];
  return n;
}

/// True when the two codewords agree in at least t positions.
inline bool intersects(const Codeword& a, const Codeword& b, std::size_t t = 1) { return agreements(a.word, b.word) >= t; }

// ---------------------------------------------------------------------------
// Extended Reed-Solomon codes and polynomials.

/// f = a_0 + a_1 X + ... + a_k X^k, read as the form sum a_i X^i Y^{k-i}.
struct HomPoly {
  Vec a;

  std::size_t degree() const { return a.empty() ? 0 : a.size() - 1; }
  Elem at(const Field& F, Elem x) const { return poly::eval(F, a, x); }
  Elem at_infinity() const { return a.back(); }
};

/// ERS(q,k): evaluation of polynomials of degree at most k on F_q and at infinity.
inline LinearCode ers_create(const FieldPtr& F, std::size_t k) {
  if (k >= F->q()) throw Error(Errc::DegreeTooLarge, "ERS needs k < q");
  const std::size_t n = F->q() + 1;
  std::vector<Vec> G(k + 1, Vec(n, F->zero()));
  for (std::uint32_t x = 0; x < F->q(); ++x) {
    Elem pw = F->one();
    for (std::size_t i = 0; i <= k; ++i) {
      G[i][x] = pw;
      pw = F->mul(pw, Elem{x});
    }
  }
  G[k][n - 1] = F->one();
  return LinearCode(F, std::move(G));
}

inline LinearCode ers_create(std::uint32_t q, std::size_t k) { return ers_create(Field::of_order(q), k); }

/// (f(0), f(1), ..., f(q-1), a_k) with field elements taken in code order.
inline Vec poly_to_word(const Field& F, const HomPoly& f) {
  if (f.a.empty()) throw Error(Errc::BadParameters, "polynomial needs at least one coefficient");
  if (f.degree() >= F.q()) throw Error(Errc::DegreeTooLarge, "degree must be below q");
  Vec w(F.q() + 1);
  for (std::uint32_t x = 0; x < F.q(); ++x) w[x] = f.at(F, Elem{x});
  w[F.q()] = f.at_infinity();
  return w;
}

inline HomPoly word_to_poly(const LinearCode& ers, const Vec& word) { return HomPoly{ers.coeff_of(word)}; }

// ---------------------------------------------------------------------------
// Weight machinery.

inline std::vector<std::uint64_t> weight_distribution_enumerated(const LinearCode& C, const Config& cfg = default_config()) {
  std::vector<std::uint64_t> W(C.length() + 1, 0);
  C.for_each([&](std::uint64_t, const Vec&, const Vec& w) { ++W[weight(w)]; }, cfg);
  return W;
}

/// Closed-form weight distribution of an [n,k]_q MDS code.
inline std::vector<BigInt> mds_weight_distribution(std::int64_t n, std::int64_t k, std::int64_t q) {
  const std::int64_t d = n - k + 1;
  if (k < 0 || d < 1) throw Error(Errc::BadParameters, "MDS parameters need 0 <= k <= n");
  std::vector<BigInt> W(static_cast<std::size_t>(n) + 1, 0);
  W[0] = 1;
  for (std::int64_t t = std::max<std::int64_t>(d, 1); t <= n; ++t) {
    BigInt s = 0;
    for (std::int64_t j = 0; j <= t - d; ++j) {
      BigInt term = binomial(t - 1, j) * ipow(BigInt(q), static_cast<std::uint64_t>(t - d - j));
      s += (j % 2 == 0) ? term : BigInt(-term);
    }
    W[static_cast<std::size_t>(t)] = BigInt(q - 1) * binomial(n, t) * s;
  }
  return W;
}

inline std::size_t minimum_weight(const LinearCode& C, const Config& cfg = default_config()) {
  const auto W = weight_distribution_enumerated(C, cfg);
  for (std::size_t t = 1; t < W.size(); ++t)
    if (W[t] != 0) return t;
  return 0;
}

inline bool is_mds(const LinearCode& C, const Config& cfg = default_config()) {
  return minimum_weight(C, cfg) == C.length() - C.dim() + 1;
}

inline bool is_projective(const LinearCode& C) {
  std::vector<ProjPoint> pts;
  for (std::size_t j = 0; j < C.length(); ++j) {
    auto c = canonicalize(C.field(), C.column(j));
    if (!c) return false;
    pts.push_back(ProjPoint{std::move(*c)});
  }
  std::sort(pts.begin(), pts.end());
  return std::adjacent_find(pts.begin(), pts.end()) == pts.end();
}

// ---------------------------------------------------------------------------
// Families and stars.

/// A set of codewords given by sorted, distinct canonical indices.
struct Family {
  std::vector<std::uint64_t> members;

  Family() = default;
  explicit Family(std::vector<std::uint64_t> ids) : members(std::move(ids)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
  std::size_t size() const { return members.size(); }
  bool contains(std::uint64_t id) const { return std::binary_search(members.begin(), members.end(), id); }
  friend bool operator==(const Family&, const Family&) = default;
};

/// Pairwise check that any two members agree in at least t positions.
inline bool is_intersecting_family(const LinearCode& C, const Family& fam, std::size_t t = 1) {
  std::vector<Vec> words;
  words.reserve(fam.size());
  for (std::uint64_t id : fam.members) words.push_back(C.encode(C.coeff_at(id)));
  for (std::size_t a = 0; a < words.size(); ++a)
    for (std::size_t b = a + 1; b < words.size(); ++b)
      if (agreements(words[a], words[b]) < t) return false;
  return true;
}

/// All codewords with word[positions[r]] == values[r] for every r.
inline Family t_star(const LinearCode& C, const std::vector<std::size_t>& positions, const Vec& values, const Config& cfg = default_config()) {
  if (positions.size() != values.size()) throw Error(Errc::DimensionMismatch, "positions and values differ in length");
  std::vector<std::size_t> sorted(positions);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw Error(Errc::BadParameters, "star positions must be distinct");
  for (std::size_t p : positions)
    if (p >= C.length()) throw Error(Errc::BadParameters, "star position out of range");
  std::vector<std::uint64_t> ids;
  C.for_each(
      [&](std::uint64_t idx, const Vec&, const Vec& w) {
        for (std::size_t r = 0; r < positions.size(); ++r)
          if (w[positions[r]] != values[r]) return;
        ids.push_back(idx);
      },
      cfg);
  if (ids.empty()) throw Error(Errc::InconsistentConstraints, "no codeword meets the star constraints");
  return Family(std::move(ids));
}

inline Family star(const LinearCode& C, std::size_t i, Elem alpha, const Config& cfg = default_config()) {
  return t_star(C, {i}, {alpha}, cfg);
}

// ---------------------------------------------------------------------------
// Hyperplane geometry of the projective system.

/// For every hyperplane of PG(dim-1, q), the number of system points on it.
/// Hyperplane v^perp corresponds to the codewords with coefficient vector
/// proportional to v, and meets the system in n - wt(v^T G) points.
class CodeGeometry {
 public:
  explicit CodeGeometry(const LinearCode& C, const Config& cfg = default_config())
      : code_(&C), space_(C.field_ptr(), C.dim(), cfg), system_(C.projective_system()) {
    meet_.resize(space_.size());
    for (std::uint64_t h = 0; h < space_.size(); ++h) {
      const Vec v = space_.vector_at(h);
      meet_[h] = static_cast<std::uint32_t>(C.length() - weight(C.encode(v)));
    }
    on_system_.assign(space_.size(), false);
    for (const auto& P : system_) on_system_[space_.index_of(P)] = true;
  }

  const LinearCode& code() const { return *code_; }
  const ProjectiveSpace& space() const { return space_; }
  const std::vector<ProjPoint>& system() const { return system_; }
  std::uint32_t meet(std::uint64_t h) const { return meet_[h]; }
  const std::vector<std::uint32_t>& meets() const { return meet_; }
  bool on_system(std::uint64_t point) const { return on_system_[point]; }

  /// Hyperplane indices whose meet count lies in T.
  std::vector<std::uint64_t> hyperplanes_meeting(const std::vector<std::size_t>& T) const {
    std::vector<bool> want(code_->length() + 1, false);
    for (std::size_t t : T)
      if (t <= code_->length()) want[t] = true;
    std::vector<std::uint64_t> out;
    for (std::uint64_t h = 0; h < meet_.size(); ++h)
      if (want[meet_[h]]) out.push_back(h);
    return out;
  }

  /// For every point, the number of listed hyperplanes through it.
  std::vector<std::uint64_t> incidence_counts(const std::vector<std::uint64_t>& hyperplanes) const {
    const Field& F = code_->field();
    std::vector<Vec> duals;
    duals.reserve(hyperplanes.size());
    for (std::uint64_t h : hyperplanes) duals.push_back(space_.vector_at(h));
    std::vector<std::uint64_t> m(space_.size(), 0);
    for (std::uint64_t p = 0; p < space_.size(); ++p) {
      const Vec P = space_.vector_at(p);
      std::uint64_t c = 0;
      for (const auto& d : duals) c += dot(F, P, d).code == 0;
      m[p] = c;
    }
    return m;
  }

 private:
  const LinearCode* code_;
  ProjectiveSpace space_;
  std::vector<ProjPoint> system_;
  std::vector<std::uint32_t> meet_;
  std::vector<bool> on_system_;
};

struct ExtendResult {
  LinearCode code;
  bool extended = false;
  std::vector<ProjPoint> added;
};

/// Appends a column for every point outside the system that lies on no
/// hyperplane avoiding the system. Afterwards the full-weight codewords are
/// unchanged, so two old codewords intersect iff their extensions do.
inline ExtendResult extend_code(const LinearCode& C, const Config& cfg = default_config()) {
  const CodeGeometry geo(C, cfg);
  const auto M = geo.hyperplanes_meeting({0});
  if (M.empty()) throw Error(Errc::WeakEKRFails, "no hyperplane avoids the projective system");
  const auto m = geo.incidence_counts(M);
  std::vector<ProjPoint> added;
  for (std::uint64_t p = 0; p < m.size(); ++p)
    if (m[p] == 0 && !geo.on_system(p)) added.push_back(geo.space().point_at(p));
  if (added.empty()) return ExtendResult{C, false, {}};

  std::vector<Vec> G = C.generator();
  for (const auto& P : added)
    for (std::size_t i = 0; i < G.size(); ++i) G[i].push_back(P.coords[i]);
  LinearCode ext(C.field_ptr(), std::move(G));

  const std::size_t n = C.length();
  C.for_each(
      [&](std::uint64_t, const Vec& v, const Vec& w) {
        if (weight(w) != n) return;
        for (const auto& P : added)
          if (dot(C.field(), v, P.coords).code == 0)
            throw Error(Errc::VerificationFailed, "extension creates an agreement for a full-weight codeword");
      },
      cfg);
  return ExtendResult{std::move(ext), true, std::move(added)};
}

/// [q+1, t] MDS subcode of ERS(q,k) spanned by Ev(f X^j), j < t, where f is the
/// first irreducible of degree k+1-t. Needs 1 <= t < k so that deg f >= 2.
inline LinearCode mds_subcode(const LinearCode& ers, std::size_t t, const Config& cfg = default_config()) {
  const Field& F = ers.field();
  const std::size_t k = ers.dim() - 1;
  if (ers.length() != F.q() + 1) throw Error(Errc::CodeMismatch, "expected an extended Reed-Solomon code");
  if (t < 1 || t >= k) throw Error(Errc::BadParameters, "MDS subcode needs 1 <= t < k");
  const Poly f = poly::find_irreducible(F, static_cast<int>(k + 1 - t));
  std::vector<Vec> rows;
  for (std::size_t j = 0; j < t; ++j) {
    Vec g(k + 1, F.zero());
    for (std::size_t i = 0; i < f.size(); ++i) g[i + j] = f[i];
    rows.push_back(poly_to_word(F, HomPoly{g}));
  }
  LinearCode sub(ers.field_ptr(), std::move(rows));
  if (!is_mds(sub, cfg)) throw Error(Errc::VerificationFailed, "subcode is not MDS");
  return sub;
}

/// Every codeword's word, flattened row-major, for repeated pairwise checks.
class CodewordTable {
 public:
  CodewordTable(const LinearCode& C, const Config& cfg = default_config()) : n_(C.length()), count_(C.size(cfg)) {
    words_.resize(count_ * n_);
    C.for_each(
        [&](std::uint64_t idx, const Vec&, const Vec& w) {
          for (std::size_t j = 0; j < n_; ++j) words_[idx * n_ + j] = static_cast<std::uint16_t>(w[j].code);
        },
        cfg);
  }

  std::uint64_t size() const { return count_; }
  std::size_t length() const { return n_; }
  const std::uint16_t* word(std::uint64_t idx) const { return &words_[idx * n_]; }

  std::size_t agreements(std::uint64_t a, std::uint64_t b) const {
    const std::uint16_t* x = word(a);
    const std::uint16_t* y = word(b);
    std::size_t c = 0;
    for (std::size_t j = 0; j < n_; ++j) c += x[j] == y[j];
    return c;
  }

 private:
  std::size_t n_;
  std::uint64_t count_;
  std::vector<std::uint16_t> words_;
};

}  // namespace isect
