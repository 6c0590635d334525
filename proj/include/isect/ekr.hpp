#pragma once

// Per-instance checks of the weak, module and strict EKR criteria, the
// t-intersecting bounds for homogeneous polynomials, and family predicates.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isect/codes.hpp"
#include "isect/config.hpp"
#include "isect/numeric.hpp"
#include "isect/pg.hpp"
#include "isect/spectral.hpp"

namespace isect {

enum class WeakEkr { AllIntersecting, Holds };

struct WeakEkrReport {
  WeakEkr status = WeakEkr::Holds;
  BigInt avoiding = 0;         // |M|
  BigInt max_family_size = 0;  // q^{dim-1} when Holds, q^dim otherwise
};

inline WeakEkrReport weak_ekr_check(const LinearCode& C, const Config& cfg = default_config()) {
  const CodeGeometry geo(C, cfg);
  WeakEkrReport r;
  r.avoiding = geo.hyperplanes_meeting({0}).size();
  if (r.avoiding == 0) {
    r.status = WeakEkr::AllIntersecting;
    r.max_family_size = ipow(BigInt(C.q()), C.dim());
  } else {
    r.max_family_size = ipow(BigInt(C.q()), C.dim() - 1);
  }
  return r;
}

struct ModuleReport {
  bool holds = true;
  std::optional<ProjPoint> witness;  // first off-system point on no avoiding hyperplane
};

inline ModuleReport module_property_check(const LinearCode& C, const Config& cfg = default_config()) {
  const CodeGeometry geo(C, cfg);
  const auto avoid = avoiding_hyperplanes(geo, {0});
  const auto m = incidence_profile(geo, avoid);
  ModuleReport r;
  for (std::uint64_t p = 0; p < m.size(); ++p) {
    if (!geo.on_system(p) && m[p] == 0) {
      r.holds = false;
      r.witness = geo.space().point_at(p);
      break;
    }
  }
  return r;
}

struct StrictReport {
  bool holds = false;
  bool no_three_collinear = true;
  std::string reason;                // "collinear", "deviation", "no avoiding hyperplanes" or empty
  std::optional<ProjPoint> worst_point;
  // (q m_P - |M|)^2 min{n,(q-1)^2} / |M|^2 at the worst point; the condition needs < 1.
  Rational worst_ratio = 0;
};

/// The sufficient condition for stars to be the only maximum families:
/// no three system points collinear and, off the system,
/// (q m_P - |M|)^2 * min{n, (q-1)^2} < |M|^2.
inline StrictReport strict_condition_check(const LinearCode& C, const Config& cfg = default_config()) {
  const CodeGeometry geo(C, cfg);
  const Field& F = C.field();
  StrictReport r;
  const auto& sys = geo.system();
  for (std::size_t a = 0; a < sys.size() && r.no_three_collinear; ++a)
    for (std::size_t b = a + 1; b < sys.size() && r.no_three_collinear; ++b)
      for (std::size_t c = b + 1; c < sys.size(); ++c)
        if (collinear(F, sys[a], sys[b], sys[c])) {
          r.no_three_collinear = false;
          break;
        }

  const auto avoid = avoiding_hyperplanes(geo, {0});
  const auto m = incidence_profile(geo, avoid);
  const BigInt M = avoid.size();
  const BigInt q = C.q();
  const BigInt n = C.length();
  const BigInt mn = std::min(n, BigInt((q - 1) * (q - 1)));
  bool deviation_ok = M != 0;
  if (M != 0) {
    for (std::uint64_t p = 0; p < m.size(); ++p) {
      if (geo.on_system(p)) continue;
      const BigInt d = q * m[p] - M;
      const Rational ratio = Rational(d * d * mn) / Rational(M * M);
      if (!r.worst_point || ratio > r.worst_ratio) {
        r.worst_ratio = ratio;
        r.worst_point = geo.space().point_at(p);
      }
      if (d * d * mn >= M * M) deviation_ok = false;
    }
  }
  r.holds = r.no_three_collinear && deviation_ok;
  if (!r.no_three_collinear)
    r.reason = "collinear";
  else if (M == 0)
    r.reason = "no avoiding hyperplanes";
  else if (!deviation_ok)
    r.reason = "deviation";
  return r;
}

struct TIntBound {
  Rational value;
  bool strict = false;  // true: |F| < value; false: |F| <= value
  /// Largest family size the bound permits.
  BigInt max_size() const {
    const BigInt f = floor(value);
    return (strict && is_integer(value)) ? BigInt(f - 1) : f;
  }
};

/// Bound on t-intersecting families of homogeneous degree-k polynomials over F_q.
inline TIntBound t_int_upper_bound(std::int64_t q, std::int64_t k, std::int64_t t) {
  if (k < 2 || t < 1 || t > k || k >= q) throw Error(Errc::BadParameters, "need 1 <= t <= k < q and k >= 2");
  if (t < k) return {Rational(ipow(BigInt(q), static_cast<std::uint64_t>(k + 1 - t))), false};
  return {Rational(q * q - 1, k) + 1, true};
}

/// floor(valency / |tau| + 1), the clique bound of a single scheme relation.
inline BigInt delsarte_clique_bound(const BigInt& valency, const BigInt& min_eigenvalue) {
  if (min_eigenvalue >= 0) throw Error(Errc::BadSpectrum, "minimum eigenvalue must be negative");
  return floor(Rational(valency, -min_eigenvalue) + 1);
}

/// (i, alpha) when the family is exactly the star of that coordinate and value.
inline std::optional<std::pair<std::size_t, Elem>> is_star(const LinearCode& C, const Family& fam, const Config& cfg = default_config()) {
  const BigInt star_size = ipow(BigInt(C.q()), C.dim() - 1);
  if (BigInt(fam.size()) != star_size || fam.size() == 0) return std::nullopt;
  const Vec w0 = C.encode(C.coeff_at(fam.members[0]));
  for (std::size_t i = 0; i < C.length(); ++i) {
    bool all = true;
    for (std::uint64_t id : fam.members)
      if (C.encode(C.coeff_at(id))[i] != w0[i]) {
        all = false;
        break;
      }
    if (all && star(C, i, w0[i], cfg).size() == fam.size()) return std::make_pair(i, w0[i]);
  }
  return std::nullopt;
}

/// First (i, alpha) in canonical order whose star contains the family.
inline std::optional<std::pair<std::size_t, Elem>> contained_in_star(const LinearCode& C, const Family& fam) {
  if (fam.size() == 0) return std::make_pair(std::size_t{0}, Elem{0});
  std::vector<Vec> words;
  for (std::uint64_t id : fam.members) words.push_back(C.encode(C.coeff_at(id)));
  for (std::size_t i = 0; i < C.length(); ++i) {
    bool all = true;
    for (const auto& w : words)
      if (w[i] != words[0][i]) {
        all = false;
        break;
      }
    if (all) return std::make_pair(i, words[0][i]);
  }
  return std::nullopt;
}

}  // namespace isect
