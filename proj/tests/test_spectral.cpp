#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "isect/spectral.hpp"

using namespace isect;

namespace {

using Matrix = std::vector<std::vector<std::int64_t>>;

Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size(), m = b[0].size(), l = b.size();
  Matrix r(n, std::vector<std::int64_t>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < l; ++k)
      if (a[i][k])
        for (std::size_t j = 0; j < m; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

std::int64_t trace(const Matrix& a) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i][i];
  return s;
}

// Dense adjacency of Gamma_T: codewords adjacent when their difference has
// n - weight in T.
Matrix gamma_adjacency(const LinearCode& C, const std::vector<std::size_t>& T) {
  std::vector<Vec> words;
  C.for_each([&](std::uint64_t, const Vec&, const Vec& w) { words.push_back(w); });
  const std::size_t N = words.size();
  Matrix A(N, std::vector<std::int64_t>(N, 0));
  for (std::size_t a = 0; a < N; ++a)
    for (std::size_t b = 0; b < N; ++b) {
      if (a == b) continue;
      const std::size_t agree = agreements(words[a], words[b]);
      A[a][b] = std::find(T.begin(), T.end(), agree) != T.end();
    }
  return A;
}

Spectrum spec(std::initializer_list<std::pair<int, int>> pairs) {
  std::vector<std::pair<BigInt, BigInt>> v;
  for (auto [a, b] : pairs) v.emplace_back(a, b);
  return make_spectrum(v);
}

template <class Fn>
void expect_errc(Errc code, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << errc_name(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Avoidance, ConicExternalLines) {
  const auto C = ers_create(5, 2);
  const CodeGeometry geo(C);
  const auto M = avoiding_hyperplanes(geo);
  EXPECT_EQ(M.size(), 10u);
  const auto all = avoiding_hyperplanes(geo, {0, 1, 2, 3, 4, 5});
  EXPECT_EQ(all.size(), 31u);
  const auto prof = incidence_profile(geo, M);
  std::uint64_t total = 0;
  for (std::uint64_t p = 0; p < prof.size(); ++p) {
    total += prof[p];
    if (geo.on_system(p)) EXPECT_EQ(prof[p], 0u);
  }
  EXPECT_EQ(total, 10u * 6u);
}

TEST(Avoidance, TwistedCubicMatchesCorrectedFormula) {
  const auto C = ers_create(7, 3);
  const CodeGeometry geo(C);
  EXPECT_EQ(BigInt(avoiding_hyperplanes(geo).size()), nrc_count_formula(7, 3, 0));
}

TEST(GammaSpectrum, ConicOverF5) {
  const auto C = ers_create(5, 2);
  const Spectrum s = gamma_T_spectrum(C, {0});
  EXPECT_EQ(s, spec({{40, 1}, {5, 40}, {0, 60}, {-10, 24}}));
  EXPECT_EQ(s.vertex_count(), 125);
  EXPECT_EQ(s.moment(1), 0);
  EXPECT_EQ(s.moment(2), 125 * 40);
}

TEST(GammaSpectrum, EmptyConnectionSet) {
  const auto C = ers_create(4, 2);
  EXPECT_EQ(gamma_T_spectrum(C, {}), spec({{0, 64}}));
}

TEST(GammaSpectrum, NucleusAttainsMinimum) {
  const auto C = ers_create(4, 2);
  const auto g = gamma_T_details(C, {0});
  const BigInt M = g.avoid.size();
  EXPECT_EQ(g.spectrum.min(), -M);
  const CodeGeometry geo(C);
  const ProjectiveSpace& S = geo.space();
  for (std::uint64_t p = 0; p < S.size(); ++p) {
    const bool expect_zero = geo.on_system(p) || S.point_at(p).coords == Vec{Elem{0}, Elem{1}, Elem{0}};
    EXPECT_EQ(g.profile[p] == 0, expect_zero) << to_string(S.point_at(p));
  }
}

// Dense-matrix oracle: trace moments of the explicit adjacency matrix and
// eigenvector equations for the star indicators.
TEST(GammaSpectrum, DenseMatrixOracle) {
  for (auto [q, k, T] : std::vector<std::tuple<std::uint32_t, std::size_t, std::vector<std::size_t>>>{
           {3, 2, {0}}, {4, 2, {0}}, {5, 2, {0}}, {5, 2, {1, 2}}, {4, 3, {0, 1}}}) {
    const auto C = ers_create(q, k);
    const Matrix A = gamma_adjacency(C, T);
    const auto g = gamma_T_details(C, T);
    const std::size_t N = A.size();
    Matrix P(N, std::vector<std::int64_t>(N, 0));
    for (std::size_t i = 0; i < N; ++i) P[i][i] = 1;
    for (unsigned m = 0; m <= g.spectrum.eigen.size(); ++m) {
      EXPECT_EQ(BigInt(trace(P)), g.spectrum.moment(m)) << "q=" << q << " k=" << k << " m=" << m;
      P = multiply(P, A);
    }
    const CodeGeometry geo(C);
    const BigInt M = g.avoid.size();
    for (std::uint64_t p = 0; p < geo.space().size(); ++p) {
      const Vec v = geo.space().vector_at(p);
      std::vector<std::int64_t> x(N);
      for (std::uint64_t c = 0; c < N; ++c) x[c] = dot(C.field(), C.coeff_at(c), v).code == 0 ? static_cast<std::int64_t>(q) - 1 : -1;
      const std::int64_t lambda = static_cast<std::int64_t>(q * g.profile[p]) - static_cast<std::int64_t>(M);
      for (std::size_t r = 0; r < N; ++r) {
        std::int64_t s = 0;
        for (std::size_t c = 0; c < N; ++c) s += A[r][c] * x[c];
        ASSERT_EQ(s, lambda * x[r]);
      }
    }
  }
}

TEST(GammaSpectrum, VerifyAcceptsTrueAndRejectsPerturbed) {
  const auto C = ers_create(5, 2);
  const Spectrum s = gamma_T_spectrum(C, {0});
  EXPECT_TRUE(verify_spectrum_exact(C, {0}, s).ok);
  Spectrum bad = s;
  for (auto& e : bad.eigen)
    if (e.value == -10) e.mult = 23;
  const auto rep = verify_spectrum_exact(C, {0}, bad);
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.message.empty());
  // Same multiplicities, shifted eigenvalue: moments catch it.
  Spectrum shifted = spec({{40, 1}, {5, 40}, {1, 60}, {-10, 24}});
  EXPECT_FALSE(verify_spectrum_exact(C, {0}, shifted).ok);
  EXPECT_TRUE(verify_spectrum_exact(ers_create(3, 2), {0}, gamma_T_spectrum(ers_create(3, 2), {0})).ok);
}

TEST(GammaSpectrum, VerifyRespectsCap) {
  Config cfg;
  cfg.verify_cap = 100;
  const auto C = ers_create(5, 2);
  expect_errc(Errc::TooLarge, [&] { verify_spectrum_exact(C, {0}, gamma_T_spectrum(C, {0}), cfg); });
}

TEST(BGraph, BookkeepingAndTopEigenvalue) {
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{4, 2}, {5, 2}, {7, 2}, {5, 3}}) {
    const auto C = ers_create(q, k);
    for (std::size_t i = 0; i < C.length(); i += 2) {
      const auto d = b_graph_details(C, i);
      const BigInt qq = q;
      const BigInt L = ipow(qq, C.dim() - 1);
      EXPECT_EQ(d.spectrum.vertex_count(), ipow(qq, C.dim()));
      EXPECT_EQ(2 + 2 * (L - 1) + (qq - 2) * L, ipow(qq, C.dim()));
      EXPECT_EQ(d.spectrum.pairs.front().lambda_sq, (qq - 1) * d.M * d.M);
      EXPECT_EQ(BigInt(d.lines.size()), (L - 1) / (qq - 1));
      // lambda_ell is the scaled sum q * sum (m_P - |M|/q)^2, so it is never negative.
      const auto m = gamma_T_details(C, {0}).profile;
      const CodeGeometry geo(C);
      for (const auto& l : d.lines) {
        EXPECT_GE(l.lambda, 0);
        EXPECT_EQ(Rational(l.lambda), lambda_line(geo, m, static_cast<std::uint64_t>(d.M), d.Q, l.line));
      }
    }
  }
  EXPECT_EQ(b_graph_spectrum(ers_create(5, 2), 0).pairs.front().lambda_sq, 400);
}

TEST(BGraph, DenseMatrixOracle) {
  for (auto [q, k, i] : std::vector<std::tuple<std::uint32_t, std::size_t, std::size_t>>{{4, 2, 0}, {4, 2, 4}, {5, 2, 2}, {3, 2, 1}}) {
    const auto C = ers_create(q, k);
    std::vector<Vec> words;
    C.for_each([&](std::uint64_t, const Vec&, const Vec& w) { words.push_back(w); });
    std::vector<std::size_t> Lset, Rset;
    for (std::size_t c = 0; c < words.size(); ++c) (words[c][i].code == 0 ? Lset : Rset).push_back(c);
    Matrix B(Lset.size(), std::vector<std::int64_t>(Rset.size(), 0));
    for (std::size_t a = 0; a < Lset.size(); ++a)
      for (std::size_t b = 0; b < Rset.size(); ++b) B[a][b] = agreements(words[Lset[a]], words[Rset[b]]) == 0;
    const auto d = b_graph_details(C, i);
    for (std::size_t a = 0; a < Lset.size(); ++a) {
      std::int64_t deg = 0;
      for (auto x : B[a]) deg += x;
      ASSERT_EQ(BigInt(deg), (BigInt(q) - 1) * d.M);
    }
    for (std::size_t b = 0; b < Rset.size(); ++b) {
      std::int64_t deg = 0;
      for (std::size_t a = 0; a < Lset.size(); ++a) deg += B[a][b];
      ASSERT_EQ(BigInt(deg), d.M);
    }
    Matrix Bt(Rset.size(), std::vector<std::int64_t>(Lset.size()));
    for (std::size_t a = 0; a < Lset.size(); ++a)
      for (std::size_t b = 0; b < Rset.size(); ++b) Bt[b][a] = B[a][b];
    const Matrix MMt = multiply(B, Bt);
    const Spectrum sq = d.spectrum.squared();
    Matrix P(MMt.size(), std::vector<std::int64_t>(MMt.size(), 0));
    for (std::size_t r = 0; r < P.size(); ++r) P[r][r] = 1;
    for (unsigned m = 0; m <= sq.eigen.size(); ++m) {
      EXPECT_EQ(BigInt(trace(P)), sq.moment(m)) << "q=" << q << " i=" << i << " m=" << m;
      P = multiply(P, MMt);
    }
    EXPECT_TRUE(verify_b_spectrum(C, i, d.spectrum).ok);
  }
}

TEST(BGraph, VerifyRejectsPerturbed) {
  const auto C = ers_create(5, 2);
  auto s = b_graph_spectrum(C, 1);
  s.pairs.back().lambda_sq += 1;
  EXPECT_FALSE(verify_b_spectrum(C, 1, s).ok);
}

TEST(BGraph, EvenConicLinesAllEqual) {
  // Over F_4 the nucleus does not separate the lines through a conic point.
  const auto d = b_graph_details(ers_create(4, 2), 0);
  for (const auto& l : d.lines) EXPECT_EQ(l.lambda, 12);
}

TEST(Bounds, Hoffman) {
  const auto C52 = ers_create(5, 2);
  EXPECT_EQ(hoffman_bound(gamma_T_spectrum(C52, {0}), 125), Rational(25));
  EXPECT_EQ(hoffman_bound(gamma_T_spectrum(ers_create(7, 3), {0}), 2401), Rational(343));
  EXPECT_EQ(hoffman_bound(spec({{4, 1}, {-1, 4}}), 5), Rational(1));
  expect_errc(Errc::BadSpectrum, [] { hoffman_bound(spec({{4, 1}, {-1, 4}}), 6); });
  expect_errc(Errc::NotRegular, [] { hoffman_bound(spec({{4, 1}, {-1, 3}, {0, 1}}), 5); });
  expect_errc(Errc::NonnegativeSpectrum, [] { hoffman_bound(spec({{0, 5}}), 5); });
}

TEST(Bounds, HoffmanEqualsStarSizeAcrossInstances) {
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{4, 2}, {5, 2}, {7, 2}, {8, 2}, {9, 2}, {4, 3}, {5, 3}}) {
    const auto C = ers_create(q, k);
    const auto N = ipow(BigInt(q), C.dim());
    EXPECT_EQ(hoffman_bound(gamma_T_spectrum(C, {0}), N), Rational(ipow(BigInt(q), C.dim() - 1)));
  }
}

TEST(Bounds, FewOrMany) {
  const auto C = ers_create(5, 2);
  const auto d = b_graph_details(C, 0);
  BigInt lam = 0;
  for (const auto& l : d.lines) lam = std::max(lam, l.lambda);
  EXPECT_EQ(lambda_max(C, 0), lam);
  EXPECT_EQ(few_or_many_bound(C, 0), Rational(lam) * Rational(625, 100));
  EXPECT_EQ(few_or_many_bound(C, 0), Rational(375, 2));
}

TEST(Bounds, MoreThanFew) {
  const auto C = ers_create(5, 2);
  EXPECT_EQ(more_than_few_bound(C, 25), Rational(25, 3));
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{5, 2}, {7, 2}, {5, 3}}) {
    const auto D = ers_create(q, k);
    const BigInt star = ipow(BigInt(q), D.dim() - 1);
    const Rational expect = Rational(ipow(BigInt(q), D.dim() - 2)) * (1 + Rational(q - 1, D.length()));
    EXPECT_EQ(more_than_few_bound(D, star), expect);
    EXPECT_LT(more_than_few_bound(D, star - 1), more_than_few_bound(D, star));
  }
  expect_errc(Errc::ModulePropertyFails, [] { more_than_few_bound(ers_create(4, 2), 16); });
}

TEST(Bounds, HiltonMilner) {
  EXPECT_EQ(hm_family_size(ers_create(5, 2)), 16);
  EXPECT_EQ(hm_family_size(ers_create(4, 2)), 11);
  const auto C = ers_create(5, 2);
  const auto F = hm_family(C, 0, Elem{0}, C.index_of(Vec{Elem{1}, Elem{0}, Elem{0}}));
  EXPECT_EQ(F.size(), 16u);
  EXPECT_TRUE(is_intersecting_family(C, F));
  expect_errc(Errc::BadApex, [&] { hm_family(C, 0, Elem{0}, 0); });
}

TEST(Nrc, Profiles) {
  const auto p = nrc_profile(5, 2);
  EXPECT_EQ(p.enumerated, (std::vector<std::uint64_t>{10, 6, 15}));
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{3, 2}, {4, 2}, {7, 2}, {5, 3}, {7, 3}, {5, 4}}) {
    const auto r = nrc_profile(q, k);
    std::uint64_t total = 0;
    for (auto c : r.enumerated) total += c;
    EXPECT_EQ(BigInt(total), (ipow(BigInt(q), k + 1) - 1) / (q - 1));
    if (k == 2) EXPECT_EQ(r.enumerated[1], q + 1u);
    for (std::size_t t = 0; t <= k; ++t) EXPECT_EQ(BigInt(r.enumerated[t]), r.closed_form[t]);
  }
}

TEST(Nrc, PrintedVariantDisagrees) {
  const auto p = nrc_profile(5, 2);
  EXPECT_EQ(p.printed_variant[1], -6);
  EXPECT_NE(p.printed_variant[1], p.closed_form[1]);
}

TEST(Mu, Values) {
  EXPECT_EQ(mu(3, 0), Rational(1, 3));
  EXPECT_EQ(mu(4, 0), Rational(3, 8));
  for (std::int64_t k = 0; k <= 10; ++k) EXPECT_EQ(mu(k, k), Rational(1) / Rational(factorial(k)));
  const auto c = mu_checks(12);
  EXPECT_TRUE(c.sums_to_one);
  EXPECT_TRUE(c.shift_identity);
  EXPECT_EQ(c.first_failure_k, -1);
  expect_errc(Errc::BadParameters, [] { mu(3, 4); });
}

TEST(Mu, AgreesWithDerangementCounts) {
  // mu_{k,t} k! counts permutations of k points with exactly t fixed points.
  for (std::int64_t k = 1; k <= 7; ++k) {
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    std::map<std::int64_t, std::int64_t> fixed;
    do {
      std::int64_t f = 0;
      for (std::size_t i = 0; i < perm.size(); ++i) f += perm[i] == static_cast<int>(i);
      ++fixed[f];
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (std::int64_t t = 0; t <= k; ++t) EXPECT_EQ(mu(k, t) * Rational(factorial(k)), Rational(fixed[t]));
  }
}

TEST(StProfile, DoubleCountingAndTangents) {
  const auto r = s_t_profile(5, 2);
  for (const auto& s : r.s) {
    std::uint64_t total = 0;
    for (auto x : s) total += x;
    EXPECT_EQ(total, 6u);
  }
  // External points of a conic in odd characteristic lie on two tangents.
  std::size_t externals = 0;
  for (std::size_t j = 0; j < r.points.size(); ++j) {
    if (r.s[j][1] == 2) ++externals;
    EXPECT_TRUE(r.s[j][1] == 0 || r.s[j][1] == 2);
  }
  EXPECT_EQ(externals, 15u);
  const auto r7 = s_t_profile(7, 3);
  EXPECT_TRUE(r7.sanity_bound);
  EXPECT_GT(r7.overall_max_deviation, 0);
  EXPECT_EQ(r7.delta_observed, r7.overall_max_deviation / 7);
}

TEST(Delta, Recursion) {
  const Rational d3 = 5;
  EXPECT_EQ(delta_recursion(d3, 3), d3);
  EXPECT_EQ(delta_recursion(d3, 4), 2 + (d3 + 4) * (Rational(1) + Rational(1, 2) + Rational(1, 3) + Rational(1, 4)));
  const Rational d4 = delta_recursion(d3, 4);
  Rational h5 = 0;
  for (int t = 1; t <= 5; ++t) h5 += Rational(1, t);
  EXPECT_EQ(delta_recursion(d3, 5), 2 + (d4 + 4) * h5);
  EXPECT_LT(delta_recursion(Rational(1), 6), delta_recursion(Rational(2), 6));
}

TEST(Stability, Report) {
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{5, 3}, {7, 3}, {5, 4}}) {
    const auto r = stability_report(q, k);
    EXPECT_TRUE(r.no_three_collinear);
    EXPECT_TRUE(r.length_ok);
    EXPECT_TRUE(r.inv_sqrt2_dominates);
    EXPECT_GE(r.one_minus_mu, Rational(5, 8));
    EXPECT_LE(r.one_minus_mu, Rational(2, 3));
    EXPECT_NEAR(r.threshold_constant, 1 / std::sqrt(2.0), 1e-12);
  }
  const auto r = stability_report(7, 3);
  EXPECT_EQ(r.tau, Rational(1, 21));
  EXPECT_EQ(r.delta, Rational(3, 7));
}
