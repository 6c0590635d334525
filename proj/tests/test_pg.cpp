#include <gtest/gtest.h>

#include <set>

#include "isect/pg.hpp"

using namespace isect;

namespace {

Vec v(std::initializer_list<std::uint32_t> codes) {
  Vec out;
  for (auto c : codes) out.push_back(Elem{c});
  return out;
}

ProjPoint pt(const Field& F, std::initializer_list<std::uint32_t> codes) { return make_point(F, v(codes)); }

std::uint64_t ipow(std::uint64_t b, std::size_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST(Points, Counts) {
  EXPECT_EQ(enumerate_points(3, Field::of_order(5)).size(), 31u);
  EXPECT_EQ(enumerate_points(2, Field::of_order(4)).size(), 5u);
  EXPECT_EQ(enumerate_points(4, Field::of_order(3)).size(), 40u);
  for (std::uint32_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u})
    for (std::size_t k = 1; k <= 4; ++k) {
      const ProjectiveSpace S(Field::of_order(q), k);
      EXPECT_EQ(S.size(), (ipow(q, k) - 1) / (q - 1));
      EXPECT_EQ(S.hyperplanes().size(), S.size());
    }
}

TEST(Points, CanonicalLexicographicOrderAndIndexRoundTrip) {
  const auto F = Field::of_order(4);
  const ProjectiveSpace S(F, 3);
  const auto pts = S.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto c = canonicalize(*F, pts[i].coords);
    ASSERT_TRUE(c);
    EXPECT_EQ(*c, pts[i].coords);
    EXPECT_EQ(S.index_of(pts[i]), i);
    if (i) EXPECT_LT(pts[i - 1], pts[i]);
  }
}

TEST(Points, CanonicalizationIdempotentAndScaleInvariant) {
  const auto F = Field::of_order(7);
  const Vec x = v({0, 3, 5, 1});
  const ProjPoint p = make_point(*F, x);
  EXPECT_EQ(p.coords, v({0, 1, 4, 5}));
  EXPECT_EQ(make_point(*F, p.coords), p);
  for (std::uint32_t s = 1; s < 7; ++s) {
    Vec y = x;
    for (auto& e : y) e = F->mul(e, Elem{s});
    EXPECT_EQ(make_point(*F, y), p);
  }
  try {
    make_point(*F, v({0, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadParameters);
  }
}

TEST(Incidence, Examples) {
  const auto F2 = Field::of_order(2);
  const auto F5 = Field::of_order(5);
  EXPECT_TRUE(incident(*F5, ProjPoint{v({1, 0, 0})}, Hyperplane{v({0, 0, 1})}));
  EXPECT_TRUE(incident(*F2, ProjPoint{v({1, 1, 1})}, Hyperplane{v({1, 0, 1})}));
  EXPECT_FALSE(incident(*F5, ProjPoint{v({1, 2})}, Hyperplane{v({1, 1})}));
  try {
    incident(*F5, ProjPoint{v({1, 2})}, Hyperplane{v({1, 1, 0})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DimensionMismatch);
  }
}

TEST(Incidence, HyperplanesThroughExamples) {
  const auto F5 = Field::of_order(5);
  for (const auto& P : enumerate_points(3, F5)) EXPECT_EQ(hyperplanes_through(F5, P).size(), 6u);
  const auto F4 = Field::of_order(4);
  EXPECT_EQ(hyperplanes_through(F4, pt(*F4, {0, 1, 2, 3})).size(), 21u);
  const auto F2 = Field::of_order(2);
  const auto hs = hyperplanes_through(F2, pt(*F2, {1, 0, 0}));
  ASSERT_EQ(hs.size(), 3u);
  EXPECT_EQ(hs[0].dual, v({0, 0, 1}));
  EXPECT_EQ(hs[1].dual, v({0, 1, 0}));
  EXPECT_EQ(hs[2].dual, v({0, 1, 1}));
}

TEST(Incidence, RegularityExhaustive) {
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{2, 5}, {3, 4}, {4, 3}, {5, 3}, {7, 3}, {4, 4}}) {
    const auto F = Field::of_order(q);
    const ProjectiveSpace S(F, k);
    const std::uint64_t expect = (ipow(q, k - 1) - 1) / (q - 1);
    for (const auto& P : S.points()) ASSERT_EQ(S.hyperplanes_through(P).size(), expect);
    for (const auto& H : S.hyperplanes()) ASSERT_EQ(S.points_on(H).size(), expect);
  }
}

TEST(Incidence, EnumerationCap) {
  Config cfg;
  cfg.enumeration_cap = 100;
  try {
    ProjectiveSpace(Field::of_order(5), 3, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TooLarge);
  }
}

TEST(Projection, Examples) {
  const auto F5 = Field::of_order(5);
  const auto F3 = Field::of_order(3);
  EXPECT_EQ(project_from(*F3, pt(*F3, {1, 0, 0}), pt(*F3, {1, 1, 1})).coords, v({1, 1}));
  EXPECT_EQ(project_from(*F5, pt(*F5, {1, 0, 0}), pt(*F5, {1, 1, 1})).coords, v({1, 1}));
  EXPECT_EQ(project_from(*F5, pt(*F5, {1, 0, 0}), pt(*F5, {0, 1, 0})).coords, v({1, 0}));
  EXPECT_EQ(project_from(*F5, pt(*F5, {0, 0, 1}), pt(*F5, {1, 2, 3})).coords, v({1, 2}));
  try {
    project_from(*F5, pt(*F5, {0, 1, 2}), pt(*F5, {0, 2, 4}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ProjectCenterItself);
  }
}

TEST(Projection, LinesThroughCenterMapBijectively) {
  for (auto [q, k] : std::vector<std::pair<std::uint32_t, std::size_t>>{{3, 3}, {4, 3}, {5, 3}, {3, 4}, {2, 5}}) {
    const auto F = Field::of_order(q);
    const ProjectiveSpace S(F, k), quotient(F, k - 1);
    for (std::uint64_t c = 0; c < S.size(); c += 3) {
      const ProjPoint Q = S.point_at(c);
      const auto lines = S.lines_through(Q);
      ASSERT_EQ(lines.size(), quotient.size());
      std::set<ProjPoint> covered;
      for (std::size_t li = 0; li < lines.size(); ++li) {
        const auto& L = lines[li];
        ASSERT_EQ(L.points.size(), q + 1u);
        std::set<ProjPoint> images;
        for (const auto& P : L.points) {
          if (P == Q) continue;
          images.insert(project_from(*F, Q, P));
          EXPECT_TRUE(covered.insert(P).second);
        }
        ASSERT_EQ(images.size(), 1u);
        EXPECT_EQ(quotient.index_of(*images.begin()), li);
      }
      EXPECT_EQ(covered.size(), S.size() - 1);
    }
  }
}

TEST(Collinearity, Examples) {
  const auto F5 = Field::of_order(5);
  EXPECT_TRUE(collinear(*F5, pt(*F5, {1, 0, 0}), pt(*F5, {0, 1, 0}), pt(*F5, {1, 1, 0})));
  EXPECT_FALSE(collinear(*F5, pt(*F5, {1, 0, 0}), pt(*F5, {0, 1, 0}), pt(*F5, {0, 0, 1})));
  // nu_2 images of (0:1), (1:1), (1:0) are (0:0:1), (1:1:1), (1:0:0).
  EXPECT_FALSE(collinear(*F5, pt(*F5, {0, 0, 1}), pt(*F5, {1, 1, 1}), pt(*F5, {1, 0, 0})));
  try {
    collinear(*F5, pt(*F5, {1, 0, 0}), pt(*F5, {2, 0, 0}), pt(*F5, {0, 0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DuplicatePoints);
  }
}

TEST(Lines, PointsArePairwiseDistinctAndCollinear) {
  const auto F = Field::of_order(7);
  const Line L = make_line(*F, pt(*F, {1, 2, 3}), pt(*F, {0, 1, 5}));
  ASSERT_EQ(L.points.size(), 8u);
  EXPECT_EQ(std::set<ProjPoint>(L.points.begin(), L.points.end()).size(), 8u);
  for (std::size_t i = 0; i < L.points.size(); ++i)
    if (L.points[i] != L.base && L.points[i] != L.dir) EXPECT_TRUE(collinear(*F, L.base, L.dir, L.points[i]));
}
