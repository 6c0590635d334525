#include <gtest/gtest.h>

#include <set>

#include "isect/codes.hpp"

using namespace isect;

namespace {

Vec v(std::initializer_list<std::uint32_t> codes) {
  Vec out;
  for (auto c : codes) out.push_back(Elem{c});
  return out;
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

TEST(Ers, Shape) {
  const auto C = ers_create(5, 2);
  EXPECT_EQ(C.length(), 6u);
  EXPECT_EQ(C.dim(), 3u);
  EXPECT_EQ(C.column(2), v({1, 2, 4}));
  EXPECT_EQ(C.column(5), v({0, 0, 1}));
  const auto D = ers_create(4, 2);
  EXPECT_EQ(D.length(), 5u);
  EXPECT_EQ(D.dim(), 3u);
  expect_errc(Errc::DegreeTooLarge, [] { ers_create(5, 5); });
}

TEST(Ers, ProjectiveSystemIsNormalRationalCurve) {
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{5, 2}, {4, 2}, {7, 3}, {9, 2}, {8, 4}}) {
    const auto F = Field::of_order(q);
    const auto C = ers_create(F, k);
    std::set<ProjPoint> expect;
    for (std::uint32_t x = 0; x < q; ++x) {
      Vec p;
      Elem pw = F->one();
      for (std::size_t i = 0; i <= k; ++i) {
        p.push_back(pw);
        pw = F->mul(pw, Elem{x});
      }
      expect.insert(ProjPoint{p});
    }
    Vec inf(k + 1, F->zero());
    inf[k] = F->one();
    expect.insert(ProjPoint{inf});
    const auto sys = C.projective_system();
    EXPECT_EQ(std::set<ProjPoint>(sys.begin(), sys.end()), expect);
    EXPECT_TRUE(is_projective(C));
  }
}

TEST(Ers, ArcPropertyEveryHyperplaneMeetsAtMostKPoints) {
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{5, 2}, {4, 2}, {7, 3}, {8, 2}, {5, 4}}) {
    const auto C = ers_create(q, k);
    const CodeGeometry geo(C);
    for (auto m : geo.meets()) ASSERT_LE(m, k) << "q=" << q << " k=" << k;
  }
}

TEST(Weights, Ers52Enumerated) {
  const auto W = weight_distribution_enumerated(ers_create(5, 2));
  EXPECT_EQ(W, (std::vector<std::uint64_t>{1, 0, 0, 0, 60, 24, 40}));
}

TEST(Weights, ClosedFormMatchesEnumeration) {
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{3, 1}, {4, 2}, {5, 2}, {7, 2}, {7, 3}, {8, 3}, {9, 2}, {5, 4}}) {
    const auto C = ers_create(q, k);
    const auto W = weight_distribution_enumerated(C);
    const auto M = mds_weight_distribution(q + 1, static_cast<std::int64_t>(k) + 1, q);
    ASSERT_EQ(W.size(), M.size());
    BigInt total = 0;
    for (std::size_t t = 0; t < W.size(); ++t) {
      EXPECT_EQ(BigInt(W[t]), M[t]) << "q=" << q << " k=" << k << " t=" << t;
      total += M[t];
    }
    EXPECT_EQ(total, ipow(BigInt(q), k + 1));
    const std::size_t d = q + 1 - k;
    EXPECT_EQ(M[d], BigInt(q - 1) * binomial(q + 1, static_cast<std::int64_t>(d)));
  }
}

TEST(Weights, ClosedFormExample) {
  const auto M = mds_weight_distribution(6, 3, 5);
  EXPECT_EQ(M[4], 60);
  EXPECT_EQ(M[5], 24);
  EXPECT_EQ(M[6], 40);
}

TEST(Weights, MdsAndProjectivity) {
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{4, 2}, {5, 2}, {5, 3}, {7, 3}, {8, 2}})
    EXPECT_TRUE(is_mds(ers_create(q, k)));
  EXPECT_EQ(minimum_weight(ers_create(7, 3)), 5u);
  const auto F = Field::of_order(5);
  EXPECT_FALSE(is_projective(LinearCode(F, {v({1, 2, 1, 0}), v({0, 0, 0, 1})})));
  EXPECT_FALSE(is_projective(LinearCode(F, {v({1, 0, 3, 0}), v({0, 1, 4, 0})})));
  EXPECT_FALSE(is_mds(LinearCode(F, {v({1, 0, 3, 0}), v({0, 1, 4, 0})})));
}

TEST(Codewords, IndexingRoundTripAndEncoding) {
  const auto C = ers_create(4, 2);
  for (std::uint64_t i = 0; i < C.size(); ++i) {
    const Codeword c = C.codeword_at(i);
    EXPECT_EQ(C.index_of(c.coeff), i);
    EXPECT_EQ(C.coeff_of(c.word), c.coeff);
  }
  // Leading coefficient is the most significant digit.
  EXPECT_EQ(C.index_of(v({1, 0, 0})), 16u);
  EXPECT_EQ(C.index_of(v({0, 0, 1})), 1u);
  expect_errc(Errc::NotInCode, [&] { C.coeff_of(v({1, 0, 0, 0, 0})); });
  expect_errc(Errc::CodeMismatch, [&] { C.coeff_of(v({1, 0, 0})); });
}

TEST(Codewords, ConstructionErrors) {
  const auto F = Field::of_order(3);
  expect_errc(Errc::RankDeficient, [&] { LinearCode(F, {v({1, 2, 0}), v({2, 1, 0})}); });
  expect_errc(Errc::DimensionMismatch, [&] { LinearCode(F, {v({1, 2, 0}), v({2, 1})}); });
  expect_errc(Errc::FieldMismatch, [&] { LinearCode(F, {v({1, 3, 0})}); });
}

TEST(Intersection, Examples) {
  const auto F = Field::of_order(5);
  const auto C = ers_create(F, 2);
  const Codeword x2 = C.codeword(v({0, 0, 1}));
  const Codeword x1 = C.codeword(v({0, 1, 0}));
  EXPECT_TRUE(intersects(x2, x2, C.length()));
  EXPECT_TRUE(intersects(x2, x1, 1));
  EXPECT_TRUE(intersects(x2, x1, 2));
  EXPECT_FALSE(intersects(x2, x1, 3));
  // X^2 + 2 is irreducible over F_5, so it is nowhere zero and misses the zero word.
  const Codeword f = C.codeword(v({2, 0, 1}));
  EXPECT_EQ(weight(f.word), 6u);
  EXPECT_FALSE(intersects(f, C.codeword(v({0, 0, 0}))));
}

TEST(Polynomials, WordBridge) {
  const auto F = Field::of_order(5);
  EXPECT_EQ(poly_to_word(*F, HomPoly{v({0, 0, 1})}), v({0, 1, 4, 4, 1, 1}));
  EXPECT_EQ(poly_to_word(*F, HomPoly{v({0, 0, 0})}), v({0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(poly_to_word(*F, HomPoly{v({1, 0, 0})}), v({1, 1, 1, 1, 1, 0}));
  expect_errc(Errc::DegreeTooLarge, [&] { poly_to_word(*F, HomPoly{v({0, 0, 0, 0, 0, 1})}); });
  const auto C = ers_create(F, 3);
  C.for_each([&](std::uint64_t, const Vec& coeff, const Vec& w) {
    EXPECT_EQ(poly_to_word(*F, HomPoly{coeff}), w);
    EXPECT_EQ(word_to_poly(C, w).a, coeff);
  });
}

TEST(Stars, Sizes) {
  const auto C52 = ers_create(5, 2);
  EXPECT_EQ(star(C52, 0, Elem{0}).size(), 25u);
  const auto C42 = ers_create(4, 2);
  for (std::size_t i = 0; i < C42.length(); ++i)
    for (std::uint32_t a = 0; a < 4; ++a) EXPECT_EQ(star(C42, i, Elem{a}).size(), 16u);
  EXPECT_EQ(t_star(C52, {0, 1, 5}, v({1, 2, 3})).size(), 1u);
  const auto C53 = ers_create(5, 3);
  const auto s = t_star(C53, {1, 4}, v({0, 2}));
  EXPECT_EQ(s.size(), 25u);
  EXPECT_TRUE(is_intersecting_family(C53, s, 2));
  EXPECT_TRUE(is_intersecting_family(C52, star(C52, 3, Elem{4}), 1));
}

TEST(Stars, Errors) {
  const auto F = Field::of_order(3);
  const LinearCode C(F, {v({1, 1, 0}), v({0, 0, 1})});
  expect_errc(Errc::InconsistentConstraints, [&] { t_star(C, {0, 1}, v({1, 2})); });
  expect_errc(Errc::BadParameters, [&] { t_star(C, {0, 0}, v({1, 1})); });
  expect_errc(Errc::DimensionMismatch, [&] { t_star(C, {0}, v({1, 1})); });
}

TEST(Extension, Nucleus) {
  const auto r4 = extend_code(ers_create(4, 2));
  ASSERT_TRUE(r4.extended);
  ASSERT_EQ(r4.added.size(), 1u);
  EXPECT_EQ(r4.added[0].coords, v({0, 1, 0}));
  EXPECT_EQ(r4.code.length(), 6u);
  EXPECT_TRUE(is_projective(r4.code));

  const auto r8 = extend_code(ers_create(8, 2));
  EXPECT_TRUE(r8.extended);
  EXPECT_EQ(r8.added.size(), 1u);

  const auto r5 = extend_code(ers_create(5, 2));
  EXPECT_FALSE(r5.extended);
  EXPECT_EQ(r5.code.length(), 6u);
}

TEST(Extension, PreservesIntersectionOfOriginalCodewords) {
  const auto C = ers_create(4, 2);
  const auto E = extend_code(C).code;
  for (std::uint64_t a = 0; a < C.size(); a += 3)
    for (std::uint64_t b = 0; b < C.size(); ++b) {
      const bool before = agreements(C.encode(C.coeff_at(a)), C.encode(C.coeff_at(b))) >= 1;
      const bool after = agreements(E.encode(C.coeff_at(a)), E.encode(C.coeff_at(b))) >= 1;
      ASSERT_EQ(before, after);
    }
}

TEST(Subcode, MdsAndIrreducibleGenerator) {
  const auto C = ers_create(5, 3);
  const auto S = mds_subcode(C, 2);
  EXPECT_EQ(S.length(), 6u);
  EXPECT_EQ(S.dim(), 2u);
  EXPECT_EQ(minimum_weight(S), 5u);
  EXPECT_EQ(S.generator()[0], poly_to_word(C.field(), HomPoly{v({2, 0, 1, 0})}));
  // Codewords of the subcode pairwise agree in at most one position.
  S.for_each([&](std::uint64_t i, const Vec&, const Vec& a) {
    S.for_each([&](std::uint64_t j, const Vec&, const Vec& b) {
      if (i < j) EXPECT_LE(agreements(a, b), 1u);
    });
  });
  const auto S1 = mds_subcode(ers_create(7, 2), 1);
  EXPECT_EQ(minimum_weight(S1), 8u);
  expect_errc(Errc::BadParameters, [&] { mds_subcode(C, 3); });
}

TEST(Table, AgreementsMatchWords) {
  const auto C = ers_create(4, 2);
  const CodewordTable T(C);
  ASSERT_EQ(T.size(), 64u);
  for (std::uint64_t a = 0; a < 64; a += 5)
    for (std::uint64_t b = 0; b < 64; ++b)
      EXPECT_EQ(T.agreements(a, b), agreements(C.encode(C.coeff_at(a)), C.encode(C.coeff_at(b))));
}

TEST(Caps, EnumerationLimited) {
  Config cfg;
  cfg.enumeration_cap = 100;
  expect_errc(Errc::TooLarge, [&] { weight_distribution_enumerated(ers_create(5, 2), cfg); });
}
