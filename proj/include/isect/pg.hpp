#pragma once

// Points, hyperplanes and lines of PG(k-1, q).
//
// A point is stored as its canonical coordinate vector: the leftmost nonzero
// coordinate equals 1. Points are ordered lexicographically by coordinate
// codes, and index_of/point_at convert between a point and its position in
// that order without enumerating.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isect/config.hpp"
#include "isect/error.hpp"
#include "isect/gf.hpp"
#include "isect/numeric.hpp"

namespace isect {

using Vec = std::vector<Elem>;

struct ProjPoint {
  Vec coords;

  std::size_t dim() const { return coords.size(); }
  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
  friend auto operator<=>(const ProjPoint& a, const ProjPoint& b) { return a.coords <=> b.coords; }
};

/// The hyperplane sum dual_i x_i = 0.
struct Hyperplane {
  Vec dual;

  std::size_t dim() const { return dual.size(); }
  friend bool operator==(const Hyperplane&, const Hyperplane&) = default;
  friend auto operator<=>(const Hyperplane& a, const Hyperplane& b) { return a.dual <=> b.dual; }
};

inline std::string to_string(const Vec& v, char sep = ':') {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i].code);
  }
  return s + ")";
}
inline std::string to_string(const ProjPoint& p) { return to_string(p.coords); }
inline std::string to_string(const Hyperplane& h) { return to_string(h.dual); }

/// Scales v so its leftmost nonzero entry is 1; nullopt for the zero vector.
inline std::optional<Vec> canonicalize(const Field& F, Vec v) {
  std::size_t j = 0;
  while (j < v.size() && v[j].code == 0) ++j;
  if (j == v.size()) return std::nullopt;
  if (v[j].code != 1) {
    const Elem s = F.inv(v[j]);
    for (std::size_t i = j; i < v.size(); ++i) v[i] = F.mul(v[i], s);
  }
  return v;
}

inline ProjPoint make_point(const Field& F, Vec v) {
  auto c = canonicalize(F, std::move(v));
  if (!c) throw Error(Errc::BadParameters, "the zero vector is not a projective point");
  return ProjPoint{std::move(*c)};
}

inline Hyperplane make_hyperplane(const Field& F, Vec v) {
  auto c = canonicalize(F, std::move(v));
  if (!c) throw Error(Errc::BadParameters, "the zero vector defines no hyperplane");
  return Hyperplane{std::move(*c)};
}

inline Elem dot(const Field& F, const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw Error(Errc::DimensionMismatch, "vectors of different length");
  Elem s = F.zero();
  for (std::size_t i = 0; i < a.size(); ++i) s = F.add(s, F.mul(a[i], b[i]));
  return s;
}

inline bool incident(const Field& F, const ProjPoint& P, const Hyperplane& H) {
  if (P.dim() != H.dim()) throw Error(Errc::DimensionMismatch, "point and hyperplane of different dimension");
  return dot(F, P.coords, H.dual).code == 0;
}

/// Rank of a list of row vectors over F.
inline std::size_t rank(const Field& F, std::vector<Vec> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c].code == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const Elem inv = F.inv(rows[r][c]);
    for (auto& x : rows[r]) x = F.mul(x, inv);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].code == 0) continue;
      const Elem f = rows[i][c];
      for (std::size_t j = 0; j < cols; ++j) rows[i][j] = F.sub(rows[i][j], F.mul(f, rows[r][j]));
    }
    ++r;
  }
  return r;
}

inline bool collinear(const Field& F, const ProjPoint& a, const ProjPoint& b, const ProjPoint& c) {
  if (a.dim() != b.dim() || a.dim() != c.dim()) throw Error(Errc::DimensionMismatch, "points of different dimension");
  if (a == b || a == c || b == c) throw Error(Errc::DuplicatePoints, "collinearity needs three distinct points");
  return rank(F, {a.coords, b.coords, c.coords}) <= 2;
}

/// Image of target in the quotient PG(k-2, q) by the center: subtract
/// target_j times the center, where j is the center's leading position, then
/// drop coordinate j.
inline ProjPoint project_from(const Field& F, const ProjPoint& center, const ProjPoint& target) {
  if (center.dim() != target.dim()) throw Error(Errc::DimensionMismatch, "points of different dimension");
  std::size_t j = 0;
  while (center.coords[j].code == 0) ++j;
  const Elem tj = target.coords[j];
  Vec out;
  out.reserve(center.dim() - 1);
  for (std::size_t i = 0; i < center.dim(); ++i) {
    if (i == j) continue;
    out.push_back(F.sub(target.coords[i], F.mul(tj, center.coords[i])));
  }
  auto c = canonicalize(F, std::move(out));
  if (!c) throw Error(Errc::ProjectCenterItself, "cannot project the center from itself");
  return ProjPoint{std::move(*c)};
}

struct Line {
  ProjPoint base, dir;
  std::vector<ProjPoint> points;  // q+1 points, canonical order
};

/// The line through two distinct points.
inline Line make_line(const Field& F, const ProjPoint& a, const ProjPoint& b) {
  if (a == b) throw Error(Errc::DuplicatePoints, "a line needs two distinct points");
  Line l{a, b, {}};
  l.points.reserve(F.q() + 1);
  l.points.push_back(b);
  for (std::uint32_t t = 0; t < F.q(); ++t) {
    Vec v(a.coords);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = F.add(v[i], F.mul(Elem{t}, b.coords[i]));
    l.points.push_back(make_point(F, std::move(v)));
  }
  std::sort(l.points.begin(), l.points.end());
  return l;
}

/// PG(k-1, q) with index arithmetic over the canonical lexicographic order.
class ProjectiveSpace {
 public:
  ProjectiveSpace(FieldPtr field, std::size_t k, const Config& cfg = default_config()) : F_(std::move(field)), k_(k) {
    if (k < 1) throw Error(Errc::BadParameters, "projective space needs k >= 1");
    const std::uint64_t vectors = checked_pow(F_->q(), k);
    if (vectors > cfg.enumeration_cap) throw Error(Errc::TooLarge, "q^k = " + std::to_string(vectors) + " exceeds the enumeration cap");
    qpow_.resize(k + 1);
    qpow_[0] = 1;
    for (std::size_t i = 1; i <= k; ++i) qpow_[i] = qpow_[i - 1] * F_->q();
    count_ = (qpow_[k] - 1) / (F_->q() - 1);
  }

  const Field& field() const { return *F_; }
  const FieldPtr& field_ptr() const { return F_; }
  std::size_t k() const { return k_; }
  std::uint64_t size() const { return count_; }

  /// Position of a canonical vector. Vectors whose leading 1 sits at j follow
  /// all vectors whose leading 1 sits further right.
  std::uint64_t index_of(const Vec& canon) const {
    if (canon.size() != k_) throw Error(Errc::DimensionMismatch, "point has the wrong dimension");
    std::size_t j = 0;
    while (j < k_ && canon[j].code == 0) ++j;
    if (j == k_ || canon[j].code != 1) throw Error(Errc::BadParameters, "vector is not canonical");
    std::uint64_t idx = (qpow_[k_ - 1 - j] - 1) / (F_->q() - 1);
    for (std::size_t i = j + 1; i < k_; ++i) idx += canon[i].code * qpow_[k_ - 1 - i];
    return idx;
  }
  std::uint64_t index_of(const ProjPoint& p) const { return index_of(p.coords); }
  std::uint64_t index_of(const Hyperplane& h) const { return index_of(h.dual); }

  Vec vector_at(std::uint64_t idx) const {
    if (idx >= count_) throw Error(Errc::BadParameters, "point index out of range");
    const std::uint32_t q = F_->q();
    // Find the leading position j: the block for j starts at (q^{k-1-j}-1)/(q-1).
    std::size_t j = k_ - 1;
    while (j > 0 && (qpow_[k_ - j] - 1) / (q - 1) <= idx) --j;
    std::uint64_t rest = idx - (qpow_[k_ - 1 - j] - 1) / (q - 1);
    Vec v(k_, Elem{0});
    v[j] = Elem{1};
    for (std::size_t i = k_; i-- > j + 1;) {
      v[i] = Elem{static_cast<std::uint32_t>(rest % q)};
      rest /= q;
    }
    return v;
  }
  ProjPoint point_at(std::uint64_t idx) const { return ProjPoint{vector_at(idx)}; }
  Hyperplane hyperplane_at(std::uint64_t idx) const { return Hyperplane{vector_at(idx)}; }

  std::vector<ProjPoint> points() const {
    std::vector<ProjPoint> out;
    out.reserve(count_);
    for (std::uint64_t i = 0; i < count_; ++i) out.push_back(point_at(i));
    return out;
  }

  std::vector<Hyperplane> hyperplanes() const {
    std::vector<Hyperplane> out;
    out.reserve(count_);
    for (std::uint64_t i = 0; i < count_; ++i) out.push_back(hyperplane_at(i));
    return out;
  }

  std::vector<Hyperplane> hyperplanes_through(const ProjPoint& P) const {
    std::vector<Hyperplane> out;
    for (std::uint64_t i = 0; i < count_; ++i) {
      Hyperplane h = hyperplane_at(i);
      if (dot(*F_, P.coords, h.dual).code == 0) out.push_back(std::move(h));
    }
    return out;
  }

  std::vector<ProjPoint> points_on(const Hyperplane& H) const {
    std::vector<ProjPoint> out;
    for (std::uint64_t i = 0; i < count_; ++i) {
      ProjPoint p = point_at(i);
      if (dot(*F_, p.coords, H.dual).code == 0) out.push_back(std::move(p));
    }
    return out;
  }

  /// Lines through Q, ordered by the index of their image under project_from(Q, .).
  std::vector<Line> lines_through(const ProjPoint& Q) const {
    if (k_ < 2) return {};
    const ProjectiveSpace quotient(F_, k_ - 1);
    std::vector<std::optional<ProjPoint>> rep(quotient.size());
    for (std::uint64_t i = 0; i < count_; ++i) {
      ProjPoint p = point_at(i);
      if (p == Q) continue;
      const std::uint64_t img = quotient.index_of(project_from(*F_, Q, p));
      if (!rep[img]) rep[img] = std::move(p);
    }
    std::vector<Line> out;
    out.reserve(rep.size());
    for (auto& r : rep) out.push_back(make_line(*F_, Q, *r));
    return out;
  }

 private:
  FieldPtr F_;
  std::size_t k_;
  std::vector<std::uint64_t> qpow_;
  std::uint64_t count_ = 0;
};

inline std::vector<ProjPoint> enumerate_points(std::size_t k, const FieldPtr& F, const Config& cfg = default_config()) {
  return ProjectiveSpace(F, k, cfg).points();
}

inline std::vector<Hyperplane> hyperplanes_through(const FieldPtr& F, const ProjPoint& P, const Config& cfg = default_config()) {
  return ProjectiveSpace(F, P.dim(), cfg).hyperplanes_through(P);
}

}  // namespace isect
