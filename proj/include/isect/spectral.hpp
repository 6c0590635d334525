#pragma once

// Avoiding hyperplanes, exact spectra of the non-intersection Cayley graphs
// and the bipartite star graph, and the bound quantities derived from them.
//
// Every eigenvalue here is an exact integer. For a scalar-closed connection
// set S whose hyperplanes v^perp (v in S) form M, the character of a point P
// has eigenvalue q * #{H in M : P in H} - |M|.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isect/codes.hpp"
#include "isect/config.hpp"
#include "isect/error.hpp"
#include "isect/numeric.hpp"
#include "isect/pg.hpp"

namespace isect {

struct Eigen {
  BigInt value;
  BigInt mult;
  friend bool operator==(const Eigen&, const Eigen&) = default;
};

/// Eigenvalues with multiplicities, sorted by decreasing value.
struct Spectrum {
  std::vector<Eigen> eigen;

  BigInt vertex_count() const {
    BigInt s = 0;
    for (const auto& e : eigen) s += e.mult;
    return s;
  }
  BigInt moment(unsigned m) const {
    BigInt s = 0;
    for (const auto& e : eigen) s += e.mult * boost::multiprecision::pow(e.value, m);
    return s;
  }
  const BigInt& max() const { return eigen.front().value; }
  const BigInt& min() const { return eigen.back().value; }
  std::optional<BigInt> multiplicity(const BigInt& v) const {
    for (const auto& e : eigen)
      if (e.value == v) return e.mult;
    return std::nullopt;
  }
  friend bool operator==(const Spectrum&, const Spectrum&) = default;
};

/// Builds a sorted spectrum from (value, multiplicity) pairs, merging equal values.
inline Spectrum make_spectrum(const std::vector<std::pair<BigInt, BigInt>>& pairs) {
  std::map<BigInt, BigInt, std::greater<>> acc;
  for (const auto& [v, m] : pairs)
    if (m != 0) acc[v] += m;
  Spectrum s;
  for (const auto& [v, m] : acc) s.eigen.push_back({v, m});
  return s;
}

inline std::string to_string(const Spectrum& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.eigen.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.eigen[i].value) + ":" + to_string(s.eigen[i].mult);
  }
  return out + "}";
}

/// Spectrum of a bipartite graph: each nonzero pair +-sqrt(lambda_sq) appears
/// pair_mult times; zero_mult counts the eigenvalue 0 on its own.
struct BipartiteSpectrum {
  struct Pair {
    BigInt lambda_sq;
    BigInt pair_mult;
    friend bool operator==(const Pair&, const Pair&) = default;
  };
  std::vector<Pair> pairs;  // decreasing lambda_sq
  BigInt zero_mult = 0;

  BigInt vertex_count() const {
    BigInt s = zero_mult;
    for (const auto& p : pairs) s += 2 * p.pair_mult;
    return s;
  }
  /// Spectrum of M M^T, the squares with their pair multiplicities.
  Spectrum squared() const {
    std::vector<std::pair<BigInt, BigInt>> v;
    for (const auto& p : pairs) v.emplace_back(p.lambda_sq, p.pair_mult);
    return make_spectrum(v);
  }
};

// ---------------------------------------------------------------------------
// Avoiding hyperplanes.

struct AvoidSet {
  std::vector<std::size_t> T;
  std::vector<std::uint64_t> hyperplanes;  // indices in PG(dim-1, q)

  std::size_t size() const { return hyperplanes.size(); }
};

inline AvoidSet avoiding_hyperplanes(const CodeGeometry& geo, std::vector<std::size_t> T = {0}) {
  std::sort(T.begin(), T.end());
  T.erase(std::unique(T.begin(), T.end()), T.end());
  for (std::size_t t : T)
    if (t >= geo.code().length()) throw Error(Errc::BadParameters, "T must lie in {0..n-1}");
  AvoidSet a{T, geo.hyperplanes_meeting(T)};
  // Recount the meets from scratch against the system points.
  const Field& F = geo.code().field();
  for (std::uint64_t h : a.hyperplanes) {
    const Vec d = geo.space().vector_at(h);
    std::size_t c = 0;
    for (const auto& P : geo.system()) c += dot(F, P.coords, d).code == 0;
    if (!std::binary_search(T.begin(), T.end(), c)) throw Error(Errc::VerificationFailed, "hyperplane meet count outside T");
  }
  return a;
}

/// m_P for every point P of PG(dim-1, q).
inline std::vector<std::uint64_t> incidence_profile(const CodeGeometry& geo, const AvoidSet& M) {
  return geo.incidence_counts(M.hyperplanes);
}

// ---------------------------------------------------------------------------
// Gamma_T.

struct GammaSpectrum {
  AvoidSet avoid;
  std::vector<std::uint64_t> profile;  // m_P per point index
  Spectrum spectrum;
};

inline GammaSpectrum gamma_T_details(const LinearCode& C, const std::vector<std::size_t>& T, const Config& cfg = default_config()) {
  const CodeGeometry geo(C, cfg);
  GammaSpectrum g;
  g.avoid = avoiding_hyperplanes(geo, T);
  g.profile = incidence_profile(geo, g.avoid);
  const BigInt q = C.q();
  const BigInt M = g.avoid.size();
  std::vector<std::pair<BigInt, BigInt>> pairs{{(q - 1) * M, 1}};
  for (std::uint64_t m : g.profile) pairs.emplace_back(q * m - M, q - 1);
  g.spectrum = make_spectrum(pairs);
  return g;
}

inline Spectrum gamma_T_spectrum(const LinearCode& C, const std::vector<std::size_t>& T, const Config& cfg = default_config()) {
  return gamma_T_details(C, T, cfg).spectrum;
}

namespace detail {

/// F_q^dim with elements addressed by their coefficient index.
class VectorGroup {
 public:
  VectorGroup(const Field& F, std::size_t dim, std::uint64_t size) : F_(F), dim_(dim), size_(size) {
    digits_.resize(size * dim);
    for (std::uint64_t x = 0; x < size; ++x) {
      std::uint64_t r = x;
      for (std::size_t i = dim; i-- > 0;) {
        digits_[x * dim + i] = static_cast<std::uint16_t>(r % F.q());
        r /= F.q();
      }
    }
  }
  std::uint64_t size() const { return size_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < dim_; ++i)
      r = r * F_.q() + F_.add(Elem{digits_[a * dim_ + i]}, Elem{digits_[b * dim_ + i]}).code;
    return r;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < dim_; ++i)
      r = r * F_.q() + F_.sub(Elem{digits_[a * dim_ + i]}, Elem{digits_[b * dim_ + i]}).code;
    return r;
  }
  Elem dot(std::uint64_t a, const Vec& v) const {
    Elem s{0};
    for (std::size_t i = 0; i < dim_; ++i) s = F_.add(s, F_.mul(Elem{digits_[a * dim_ + i]}, v[i]));
    return s;
  }

 private:
  const Field& F_;
  std::size_t dim_;
  std::uint64_t size_;
  std::vector<std::uint16_t> digits_;
};

using Wide = __int128;

inline Wide checked_mul(Wide a, Wide b) {
  Wide r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(Errc::TooLarge, "walk count overflows 128 bits");
  return r;
}

inline BigInt to_big(Wide v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
  BigInt r = static_cast<std::uint64_t>(u >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(u);
  return neg ? BigInt(-r) : r;
}

/// tr(A^m) for m = 0..max_m where A is the Cayley (multi)graph of weight w on
/// the group: tr(A^{a+b}) = |X| * sum_x f_a(x) f_b(-x), f_a the a-fold
/// convolution power of w. The weight must be symmetric (w(-x) = w(x)).
inline std::vector<BigInt> cayley_trace_moments(const VectorGroup& G, const std::vector<std::pair<std::uint64_t, Wide>>& weight,
                                                 unsigned max_m, std::uint64_t group_order) {
  const unsigned half = (max_m + 1) / 2;
  std::vector<std::vector<Wide>> f(half + 1, std::vector<Wide>(G.size(), 0));
  f[0][0] = 1;
  for (unsigned a = 1; a <= half; ++a) {
    for (std::uint64_t y = 0; y < G.size(); ++y) {
      const Wide fy = f[a - 1][y];
      if (fy == 0) continue;
      for (const auto& [s, ws] : weight) {
        Wide& slot = f[a][G.add(y, s)];
        if (__builtin_add_overflow(slot, checked_mul(fy, ws), &slot)) throw Error(Errc::TooLarge, "walk count overflows 128 bits");
      }
    }
  }
  std::vector<BigInt> out(max_m + 1);
  for (unsigned m = 0; m <= max_m; ++m) {
    const unsigned a = m / 2, b = m - a;
    BigInt s = 0;
    for (std::uint64_t x = 0; x < G.size(); ++x) {
      if (f[a][x] == 0 || f[b][x] == 0) continue;
      // f_b is symmetric, so f_b(-x) = f_b(x).
      s += to_big(f[a][x]) * to_big(f[b][x]);
    }
    out[m] = s * group_order;
  }
  return out;
}

}  // namespace detail

struct VerifyReport {
  bool ok = true;
  std::string message;

  void fail(std::string m) {
    if (ok) message = std::move(m);
    ok = false;
  }
};

/// Checks a claimed Gamma_T spectrum two ways with exact integers: the
/// eigenvector identity for q*xi_{v,alpha} - 1 at one point per m_P class, and
/// the trace moments tr(A^m), m = 0..#distinct eigenvalues.
inline VerifyReport verify_spectrum_exact(const LinearCode& C, const std::vector<std::size_t>& T, const Spectrum& claimed,
                                          const Config& cfg = default_config()) {
  VerifyReport rep;
  const std::uint64_t N = C.size(cfg);
  if (N > cfg.verify_cap) throw Error(Errc::TooLarge, "code too large for spectrum verification");
  const Field& F = C.field();
  const std::uint32_t q = C.q();
  const std::size_t n = C.length();

  std::vector<bool> inT(n + 1, false);
  for (std::size_t t : T)
    if (t <= n) inT[t] = true;
  std::vector<std::uint64_t> S;
  C.for_each([&](std::uint64_t idx, const Vec&, const Vec& w) {
    if (idx != 0 && inT[n - weight(w)]) S.push_back(idx);
  }, cfg);

  if (claimed.vertex_count() != N) rep.fail("multiplicities sum to " + to_string(claimed.vertex_count()) + ", expected " + std::to_string(N));

  detail::VectorGroup G(F, C.dim(), N);

  // (a) Eigenvector identity. One representative point per m_P class.
  const CodeGeometry geo(C, cfg);
  const auto avoid = geo.hyperplanes_meeting(T);
  const auto profile = geo.incidence_counts(avoid);
  std::map<std::uint64_t, std::uint64_t> rep_of;
  for (std::uint64_t p = 0; p < profile.size(); ++p) rep_of.emplace(profile[p], p);
  const BigInt deg = S.size();
  if (!claimed.multiplicity(deg)) rep.fail("degree " + to_string(deg) + " missing from the spectrum");

  constexpr std::uint64_t kDense = 4096;
  for (const auto& [mval, p] : rep_of) {
    const Vec v = geo.space().vector_at(p);
    std::vector<std::int64_t> x(N);
    std::vector<std::uint32_t> dotv(N);
    for (std::uint64_t w = 0; w < N; ++w) {
      dotv[w] = G.dot(w, v).code;
      x[w] = dotv[w] == 0 ? static_cast<std::int64_t>(q) - 1 : -1;  // alpha = 0
    }
    std::vector<std::int64_t> Ax(N, 0);
    if (N <= kDense) {
      for (std::uint64_t w = 0; w < N; ++w) {
        std::int64_t s = 0;
        for (std::uint64_t sh : S) s += x[G.add(w, sh)];
        Ax[w] = s;
      }
    } else {
      // (A x)(w) depends on w only through w.v; histogram s.v over S.
      std::vector<std::int64_t> h(q, 0);
      for (std::uint64_t sh : S) ++h[dotv[sh]];
      for (std::uint64_t w = 0; w < N; ++w) {
        const std::uint32_t need = F.neg(Elem{dotv[w]}).code;  // (w+s).v = 0
        Ax[w] = static_cast<std::int64_t>(q) * h[need] - static_cast<std::int64_t>(S.size());
      }
    }
    // Read off lambda at the zero codeword (x(0) = q-1 != 0) and compare everywhere.
    if (Ax[0] % x[0] != 0) {
      rep.fail("A x is not a multiple of x at point " + to_string(geo.space().point_at(p)));
      continue;
    }
    const std::int64_t lambda = Ax[0] / x[0];
    for (std::uint64_t w = 0; w < N; ++w) {
      if (Ax[w] != lambda * x[w]) {
        rep.fail("eigenvector identity fails at codeword " + std::to_string(w) + " for point " + to_string(geo.space().point_at(p)));
        break;
      }
    }
    if (!claimed.multiplicity(BigInt(lambda)))
      rep.fail("eigenvalue " + std::to_string(lambda) + " of point " + to_string(geo.space().point_at(p)) + " missing from the spectrum");
  }

  // (b) Trace moments.
  std::vector<std::pair<std::uint64_t, detail::Wide>> wts;
  wts.reserve(S.size());
  for (std::uint64_t s : S) wts.emplace_back(s, 1);
  const unsigned D = static_cast<unsigned>(claimed.eigen.size());
  const auto moments = detail::cayley_trace_moments(G, wts, D, N);
  for (unsigned m = 0; m <= D; ++m) {
    if (moments[m] != claimed.moment(m)) {
      rep.fail("trace moment m=" + std::to_string(m) + ": graph " + to_string(moments[m]) + ", spectrum " + to_string(claimed.moment(m)));
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The bipartite graph B(C, i, 0).

struct LineEigen {
  Line line;
  BigInt lambda;  // q * sum m_P^2 - |M|^2 over the points of the line other than Q
};

struct BGraphDetails {
  ProjPoint Q;
  BigInt M;
  std::vector<LineEigen> lines;
  BipartiteSpectrum spectrum;
};

inline BGraphDetails b_graph_details(const LinearCode& C, std::size_t i, const Config& cfg = default_config()) {
  if (i >= C.length()) throw Error(Errc::BadParameters, "coordinate out of range");
  const CodeGeometry geo(C, cfg);
  const auto avoid = avoiding_hyperplanes(geo, {0});
  const auto m = incidence_profile(geo, avoid);
  BGraphDetails d;
  d.Q = make_point(C.field(), C.column(i));
  d.M = avoid.size();
  const BigInt q = C.q();
  std::vector<std::pair<BigInt, BigInt>> sq{{(q - 1) * d.M * d.M, 1}};
  for (auto& l : geo.space().lines_through(d.Q)) {
    BigInt s = 0;
    for (const auto& P : l.points) {
      if (P == d.Q) continue;
      const BigInt mp = m[geo.space().index_of(P)];
      s += mp * mp;
    }
    const BigInt lam = q * s - d.M * d.M;
    sq.emplace_back(lam, q - 1);
    d.lines.push_back({std::move(l), lam});
  }
  const Spectrum merged = make_spectrum(sq);
  for (const auto& e : merged.eigen) d.spectrum.pairs.push_back({e.value, e.mult});
  d.spectrum.zero_mult = (q - 2) * ipow(q, C.dim() - 1);
  return d;
}

inline BipartiteSpectrum b_graph_spectrum(const LinearCode& C, std::size_t i, const Config& cfg = default_config()) {
  return b_graph_details(C, i, cfg).spectrum;
}

/// Moment check of M M^T on the star L = {c : c(i) = 0}: M M^T is the Cayley
/// multigraph on L with weight mu(c) = #{r full weight : r - c full weight}.
inline VerifyReport verify_b_spectrum(const LinearCode& C, std::size_t i, const BipartiteSpectrum& claimed, const Config& cfg = default_config()) {
  VerifyReport rep;
  const std::uint64_t N = C.size(cfg);
  if (N > cfg.verify_cap) throw Error(Errc::TooLarge, "code too large for spectrum verification");
  const std::size_t n = C.length();
  const BigInt q = C.q();
  const BigInt L = ipow(q, C.dim() - 1);
  if (claimed.vertex_count() != N) rep.fail("bipartite multiplicities sum to " + to_string(claimed.vertex_count()));
  if (claimed.zero_mult != (q - 2) * L) rep.fail("zero multiplicity differs from (q-2)q^{dim-1}");

  std::vector<std::uint64_t> full;
  std::vector<bool> in_L(N, false);
  C.for_each([&](std::uint64_t idx, const Vec&, const Vec& w) {
    if (weight(w) == n) full.push_back(idx);
    if (w[i].code == 0) in_L[idx] = true;
  }, cfg);
  detail::VectorGroup G(C.field(), C.dim(), N);
  std::vector<detail::Wide> mu(N, 0);
  std::vector<bool> is_full(N, false);
  for (auto r : full) is_full[r] = true;
  for (auto r : full)
    for (auto r2 : full) {
      const std::uint64_t c = G.sub(r, r2);
      if (in_L[c]) ++mu[c];
    }
  std::vector<std::pair<std::uint64_t, detail::Wide>> wts;
  for (std::uint64_t c = 0; c < N; ++c)
    if (mu[c] != 0) wts.emplace_back(c, mu[c]);

  // Degree check against the bipartite degrees d_L d_R = (q-1)|M|^2.
  detail::Wide row = 0;
  for (const auto& [c, w] : wts) row += w;
  const Spectrum sq = claimed.squared();
  if (detail::to_big(row) != sq.max()) rep.fail("row sum of M M^T is " + to_string(detail::to_big(row)) + ", top eigenvalue " + to_string(sq.max()));

  const unsigned D = static_cast<unsigned>(sq.eigen.size());
  const auto moments = detail::cayley_trace_moments(G, wts, D, static_cast<std::uint64_t>(L));
  for (unsigned m = 0; m <= D; ++m) {
    if (moments[m] != sq.moment(m)) {
      rep.fail("M M^T trace moment m=" + std::to_string(m) + ": graph " + to_string(moments[m]) + ", spectrum " + to_string(sq.moment(m)));
      break;
    }
  }
  return rep;
}

/// lambda_l evaluated from its defining sum with rational arithmetic.
inline Rational lambda_line(const CodeGeometry& geo, const std::vector<std::uint64_t>& profile, std::uint64_t M, const ProjPoint& Q, const Line& l) {
  const Rational q = geo.code().q();
  const Rational mean = Rational(M) / q;
  Rational s = 0;
  for (const auto& P : l.points) {
    if (P == Q) continue;
    const Rational d = Rational(profile[geo.space().index_of(P)]) - mean;
    s += d * d;
  }
  return q * s;
}

inline BigInt lambda_max(const LinearCode& C, std::size_t i, const Config& cfg = default_config()) {
  const auto d = b_graph_details(C, i, cfg);
  BigInt best = d.lines.front().lambda;
  for (const auto& l : d.lines) best = std::max(best, l.lambda);
  return best;
}

// ---------------------------------------------------------------------------
// Bounds.

/// Upper bound on |F cap F_{i,alpha}| * |F \ F_{i,alpha}| for intersecting F.
inline Rational few_or_many_bound(const LinearCode& C, std::size_t i, const Config& cfg = default_config()) {
  const auto d = b_graph_details(C, i, cfg);
  if (d.M == 0) throw Error(Errc::WeakEKRFails, "no hyperplane avoids the system");
  BigInt lam = d.lines.front().lambda;
  for (const auto& l : d.lines) lam = std::max(lam, l.lambda);
  const Rational r = Rational(ipow(BigInt(C.q()), C.dim() - 1)) / Rational(d.M);
  return Rational(lam) * r * r;
}

inline Rational hoffman_bound(const Spectrum& s, const BigInt& vertex_count) {
  if (s.eigen.empty() || s.vertex_count() != vertex_count) throw Error(Errc::BadSpectrum, "multiplicities do not sum to the vertex count");
  const BigInt deg = s.max();
  // A graph is regular iff its largest eigenvalue equals its average degree.
  if (s.moment(2) != vertex_count * deg) throw Error(Errc::NotRegular, "largest eigenvalue differs from the average degree");
  if (s.min() >= 0) throw Error(Errc::NonnegativeSpectrum, "minimum eigenvalue is not negative");
  const Rational lmin = -Rational(s.min());
  return Rational(vertex_count) / (Rational(deg) / lmin + 1);
}

/// Lower bound on the best star intersection of an intersecting family of the given size.
inline Rational more_than_few_bound(const LinearCode& C, const BigInt& family_size, const Config& cfg = default_config()) {
  const CodeGeometry geo(C, cfg);
  const auto avoid = avoiding_hyperplanes(geo, {0});
  const auto m = incidence_profile(geo, avoid);
  std::optional<std::uint64_t> t;
  for (std::uint64_t p = 0; p < m.size(); ++p)
    if (!geo.on_system(p)) t = t ? std::min(*t, m[p]) : m[p];
  if (!t || *t == 0) throw Error(Errc::ModulePropertyFails, "some point off the system lies on no avoiding hyperplane");
  const Rational q = C.q(), F = Rational(family_size), M = Rational(avoid.size()), tt = Rational(*t);
  const Rational qk = Rational(ipow(BigInt(C.q()), C.dim()));
  const Rational qk1 = Rational(ipow(BigInt(C.q()), C.dim() - 1));
  const Rational n = Rational(C.length());
  return F / q + (qk1 / n) * ((F / qk) * (M / tt - 1) + 1 - M / (q * tt));
}

inline BigInt hm_family_size(const LinearCode& C, const Config& cfg = default_config()) {
  const CodeGeometry geo(C, cfg);
  return ipow(BigInt(C.q()), C.dim() - 1) - BigInt(geo.hyperplanes_meeting({0}).size()) + 1;
}

/// {c} together with every codeword of the star (i, alpha) that meets c.
inline Family hm_family(const LinearCode& C, std::size_t i, Elem alpha, std::uint64_t apex, const Config& cfg = default_config()) {
  const Codeword c = C.codeword_at(apex);
  if (c.word[i] == alpha) throw Error(Errc::BadApex, "apex lies in the star");
  std::vector<std::uint64_t> ids{apex};
  C.for_each([&](std::uint64_t idx, const Vec&, const Vec& w) {
    if (w[i] == alpha && agreements(w, c.word) >= 1) ids.push_back(idx);
  }, cfg);
  Family fam(std::move(ids));
  if (!is_intersecting_family(C, fam, 1)) throw Error(Errc::VerificationFailed, "Hilton-Milner family is not intersecting");
  return fam;
}

// ---------------------------------------------------------------------------
// Normal rational curve statistics.

struct NrcProfile {
  std::vector<std::uint64_t> enumerated;   // t -> #hyperplanes meeting the curve in t points
  std::vector<BigInt> closed_form;         // with inner binomial C(q-t, j)
  std::vector<BigInt> printed_variant;     // with inner binomial C(q+2-t, j)
};

/// #hyperplanes of PG(k,q) meeting the NRC in exactly t points, from the MDS
/// weight distribution at weight q+1-t; `shift` selects the inner binomial
/// C(q - t + shift, j) (0 is the correct substitution).
inline BigInt nrc_count_formula(std::int64_t q, std::int64_t k, std::int64_t t, std::int64_t shift = 0) {
  BigInt s = 0;
  for (std::int64_t j = 0; j <= k - t; ++j) {
    BigInt term = binomial_general(q - t + shift, j) * ipow(BigInt(q), static_cast<std::uint64_t>(k - t - j));
    s += (j % 2 == 0) ? term : BigInt(-term);
  }
  return binomial(q + 1, t) * s;
}

inline NrcProfile nrc_profile(std::uint32_t q, std::size_t k, const Config& cfg = default_config()) {
  const LinearCode C = ers_create(q, k);
  const CodeGeometry geo(C, cfg);
  NrcProfile p;
  p.enumerated.assign(k + 1, 0);
  for (std::uint32_t m : geo.meets()) {
    if (m > k) throw Error(Errc::VerificationFailed, "a hyperplane meets the curve in more than k points");
    ++p.enumerated[m];
  }
  for (std::size_t t = 0; t <= k; ++t) {
    p.closed_form.push_back(nrc_count_formula(q, static_cast<std::int64_t>(k), static_cast<std::int64_t>(t), 0));
    p.printed_variant.push_back(nrc_count_formula(q, static_cast<std::int64_t>(k), static_cast<std::int64_t>(t), 2));
  }
  for (std::size_t t = 0; t <= k; ++t)
    if (BigInt(p.enumerated[t]) != p.closed_form[t])
      throw Error(Errc::FormulaMismatch, "t=" + std::to_string(t) + ": enumerated " + std::to_string(p.enumerated[t]) + ", formula " + to_string(p.closed_form[t]));
  return p;
}

/// mu_{k,t} = (1/t!) sum_{j=0}^{k-t} (-1)^j / j!.
inline Rational mu(std::int64_t k, std::int64_t t) {
  if (t < 0 || t > k) throw Error(Errc::BadParameters, "mu needs 0 <= t <= k");
  Rational s = 0;
  for (std::int64_t j = 0; j <= k - t; ++j) {
    const Rational term = Rational(1) / Rational(factorial(j));
    s += (j % 2 == 0) ? term : Rational(-term);
  }
  return s / Rational(factorial(t));
}

struct MuChecks {
  bool sums_to_one = true;         // sum_t mu_{k,t} = 1
  bool shift_identity = true;      // t mu_{k,t} = mu_{k-1,t-1}
  std::int64_t first_failure_k = -1;
};

inline MuChecks mu_checks(std::int64_t k_max) {
  MuChecks r;
  for (std::int64_t k = 0; k <= k_max; ++k) {
    Rational s = 0;
    for (std::int64_t t = 0; t <= k; ++t) s += mu(k, t);
    if (s != 1) {
      r.sums_to_one = false;
      if (r.first_failure_k < 0) r.first_failure_k = k;
    }
    for (std::int64_t t = 1; t <= k; ++t) {
      if (Rational(t) * mu(k, t) != mu(k - 1, t - 1)) {
        r.shift_identity = false;
        if (r.first_failure_k < 0) r.first_failure_k = k;
      }
    }
  }
  return r;
}

struct StProfile {
  std::size_t k = 0;
  std::uint32_t q = 0;
  std::vector<std::uint64_t> points;             // off-curve point indices
  std::vector<std::vector<std::uint64_t>> s;     // s[p][t]
  std::vector<Rational> max_deviation;           // per t, max |s_t(P) - mu_{k,t} q^{k-1}|
  Rational overall_max_deviation = 0;
  Rational delta_observed = 0;                   // overall max / q^{k-2}
  bool sanity_bound = true;                      // every deviation < q^{k-1}
};

/// s_t(P) = #hyperplanes through P meeting the NRC of PG(k,q) in t points.
inline StProfile s_t_profile(std::uint32_t q, std::size_t k, const Config& cfg = default_config()) {
  if (k < 2) throw Error(Errc::BadParameters, "s_t profiles need k >= 2");
  const LinearCode C = ers_create(q, k);
  const CodeGeometry geo(C, cfg);
  const auto& S = geo.space();
  const Field& F = C.field();
  const NrcProfile nrc = nrc_profile(q, k, cfg);

  StProfile r;
  r.k = k;
  r.q = q;
  std::vector<Vec> duals(S.size());
  for (std::uint64_t h = 0; h < S.size(); ++h) duals[h] = S.vector_at(h);
  const std::uint64_t through = (checked_pow(q, k) - 1) / (q - 1);
  std::vector<BigInt> global(k + 1, 0);
  for (std::uint64_t p = 0; p < S.size(); ++p) {
    if (geo.on_system(p)) continue;
    const Vec P = S.vector_at(p);
    std::vector<std::uint64_t> st(k + 1, 0);
    for (std::uint64_t h = 0; h < S.size(); ++h)
      if (dot(F, P, duals[h]).code == 0) ++st[geo.meet(h)];
    std::uint64_t tot = 0;
    for (std::size_t t = 0; t <= k; ++t) {
      tot += st[t];
      global[t] += st[t];
    }
    if (tot != through) throw Error(Errc::VerificationFailed, "s_t(P) does not sum to the hyperplanes through P");
    r.points.push_back(p);
    r.s.push_back(std::move(st));
  }
  // Each t-hyperplane carries (q^k-1)/(q-1) - t points off the curve.
  for (std::size_t t = 0; t <= k; ++t)
    if (global[t] != BigInt(nrc.enumerated[t]) * (through - t))
      throw Error(Errc::VerificationFailed, "double count of s_" + std::to_string(t) + " disagrees with the hyperplane profile");

  const Rational qk1 = Rational(ipow(BigInt(q), k - 1));
  r.max_deviation.assign(k + 1, Rational(0));
  for (const auto& st : r.s) {
    for (std::size_t t = 0; t <= k; ++t) {
      Rational dev = Rational(st[t]) - mu(static_cast<std::int64_t>(k), static_cast<std::int64_t>(t)) * qk1;
      if (dev < 0) dev = -dev;
      r.max_deviation[t] = std::max(r.max_deviation[t], dev);
      if (dev >= qk1) r.sanity_bound = false;
    }
  }
  for (const auto& d : r.max_deviation) r.overall_max_deviation = std::max(r.overall_max_deviation, d);
  r.delta_observed = r.overall_max_deviation / Rational(ipow(BigInt(q), k - 2));
  return r;
}

/// delta_k = 2 + (delta_{k-1} + 4) H_k, iterated from delta_3.
inline Rational delta_recursion(const Rational& delta3, std::int64_t k) {
  if (k < 3) throw Error(Errc::BadParameters, "the recursion starts at k = 3");
  Rational d = delta3;
  for (std::int64_t j = 4; j <= k; ++j) {
    Rational H = 0;
    for (std::int64_t t = 1; t <= j; ++t) H += Rational(1, t);
    d = 2 + (d + 4) * H;
  }
  return d;
}

struct StabilityReport {
  std::uint32_t q = 0;
  std::size_t k = 0;
  bool no_three_collinear = true;
  bool length_ok = true;  // n <= q + 1
  BigInt M = 0;
  Rational mu0 = 0;                 // mu_{k,0}
  Rational M_deviation = 0;         // | |M| - mu0 q^k |
  Rational tau = 0;                 // M_deviation / q^{k-1}
  Rational point_deviation = 0;     // max_{P off S} | m_P - |M|/q |
  Rational delta = 0;               // point_deviation / q^{k-2}
  Rational one_minus_mu = 0;
  bool inv_sqrt2_dominates = false; // 1/sqrt 2 > 1 - mu0
  double threshold_constant = 0;    // max{1/sqrt 2, 1 - mu0}
  std::string threshold_symbolic;
  double threshold_value = 0;       // threshold_constant * q^k
};

inline StabilityReport stability_report(std::uint32_t q, std::size_t k, const Config& cfg = default_config()) {
  const LinearCode C = ers_create(q, k);
  const CodeGeometry geo(C, cfg);
  const Field& F = C.field();
  StabilityReport r;
  r.q = q;
  r.k = k;
  const auto& sys = geo.system();
  for (std::size_t a = 0; a < sys.size() && r.no_three_collinear; ++a)
    for (std::size_t b = a + 1; b < sys.size() && r.no_three_collinear; ++b)
      for (std::size_t c = b + 1; c < sys.size(); ++c)
        if (collinear(F, sys[a], sys[b], sys[c])) {
          r.no_three_collinear = false;
          break;
        }
  r.length_ok = C.length() <= static_cast<std::size_t>(q) + 1;
  const auto avoid = avoiding_hyperplanes(geo, {0});
  const auto m = incidence_profile(geo, avoid);
  r.M = avoid.size();
  r.mu0 = mu(static_cast<std::int64_t>(k), 0);
  const Rational qk = Rational(ipow(BigInt(q), k));
  r.M_deviation = abs(Rational(r.M) - r.mu0 * qk);
  r.tau = r.M_deviation / Rational(ipow(BigInt(q), k - 1));
  const Rational mean = Rational(r.M) / Rational(q);
  for (std::uint64_t p = 0; p < m.size(); ++p) {
    if (geo.on_system(p)) continue;
    r.point_deviation = std::max(r.point_deviation, Rational(abs(Rational(m[p]) - mean)));
  }
  r.delta = k >= 2 ? r.point_deviation / Rational(ipow(BigInt(q), k - 2)) : r.point_deviation * q;
  r.one_minus_mu = 1 - r.mu0;
  // 1/sqrt 2 > x  <=>  1/2 > x^2 for x >= 0.
  r.inv_sqrt2_dominates = Rational(1, 2) > r.one_minus_mu * r.one_minus_mu;
  r.threshold_constant = r.inv_sqrt2_dominates ? 1.0 / std::sqrt(2.0) : to_double(r.one_minus_mu);
  r.threshold_symbolic = (r.inv_sqrt2_dominates ? std::string("1/sqrt(2)") : to_string(r.one_minus_mu)) + " * " + std::to_string(q) + "^" + std::to_string(k);
  r.threshold_value = r.threshold_constant * std::pow(static_cast<double>(q), static_cast<double>(k));
  return r;
}

}  // namespace isect
