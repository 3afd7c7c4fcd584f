#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace linf;

namespace {

std::vector<Vec> random_columns(std::mt19937_64 &rng, int rows, int cols, int density) {
  std::vector<Vec> c(cols);
  std::uniform_int_distribution<int> coef(-3, 3), hit(0, 9);
  for (auto &v : c)
    for (int i = 0; i < rows; ++i)
      if (hit(rng) < density)
        v.add(i, frac(coef(rng), 1 + hit(rng) % 3));
  return c;
}

Vec apply_cols(const std::vector<Vec> &cols, const Vec &x) {
  Vec out;
  for (const auto &[j, c] : x)
    out.axpy(c, cols[j]);
  return out;
}

} // namespace

TEST(LinearSystem, RankMatchesDenseOracle) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 60; ++t) {
    const int rows = 1 + t % 7, cols = 1 + (t * 3) % 8;
    LinearSystem ls{random_columns(rng, rows, cols, 1 + t % 6)};
    EXPECT_EQ(ls.rank(), oracle::rank(oracle::from_columns(ls.cols, rows)));
  }
}

TEST(LinearSystem, SolveAgreesOnSolvability) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 80; ++t) {
    const int rows = 2 + t % 5, cols = 1 + t % 6;
    LinearSystem ls{random_columns(rng, rows, cols, 4)};
    Vec b = random_columns(rng, rows, 1, 5)[0];
    std::vector<Q> dense(rows);
    for (const auto &[i, c] : b)
      dense[i] = c;
    auto want = oracle::solve(oracle::from_columns(ls.cols, rows), dense);
    auto got = ls.solve(b);
    ASSERT_EQ(got.has_value(), want.has_value());
    if (got)
      EXPECT_EQ(apply_cols(ls.cols, *got), b);
  }
}

TEST(LinearSystem, KernelHasComplementaryDimension) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 40; ++t) {
    const int rows = 1 + t % 4, cols = 2 + t % 6;
    LinearSystem ls{random_columns(rng, rows, cols, 5)};
    auto ker = ls.kernel();
    EXPECT_EQ((int)ker.size(), cols - ls.rank());
    for (const auto &k : ker)
      EXPECT_TRUE(apply_cols(ls.cols, k).empty());
    EXPECT_EQ(oracle::rank(oracle::from_columns(ker, cols)), (int)ker.size());
  }
}

TEST(Reducer, RelationsAndCombinations) {
  Reducer r;
  EXPECT_TRUE(r.insert(Vec::unit(0) + Vec::unit(1), 0));
  EXPECT_TRUE(r.insert(Vec::unit(1) + 2 * Vec::unit(2), 1));
  Vec rel;
  Vec dep = Vec::unit(0) - 2 * Vec::unit(2);
  EXPECT_FALSE(r.insert(dep, 2, &rel));
  // rel is a combination of inputs 0, 1, 2 summing to zero
  Vec sum = rel.at(0) * (Vec::unit(0) + Vec::unit(1)) + rel.at(1) * (Vec::unit(1) + 2 * Vec::unit(2)) +
            rel.at(2) * dep;
  EXPECT_TRUE(sum.empty());
  EXPECT_FALSE(rel.empty());
  EXPECT_EQ(r.rank(), 2);

  Vec v = 3 * Vec::unit(0) + Vec::unit(2) + Vec::unit(7), comb;
  Vec in = v;
  r.reduce(v, &comb);
  Vec back = v + comb.at(0) * (Vec::unit(0) + Vec::unit(1)) +
             comb.at(1) * (Vec::unit(1) + 2 * Vec::unit(2));
  EXPECT_EQ(back, in);
  EXPECT_TRUE(r.in_span(Vec::unit(0) - 2 * Vec::unit(2)));
  EXPECT_FALSE(r.in_span(Vec::unit(7)));
}

TEST(Cohomology, RandomComplexesMatchRankFormula) {
  // random complexes C0 -> C1 -> C2 with d^2 = 0
  std::mt19937_64 rng(24);
  for (int t = 0; t < 30; ++t) {
    const int n0 = 1 + t % 3, n1 = 2 + t % 3, n2 = 1 + t % 4;
    auto d0 = random_columns(rng, n1, n0, 5); // C0 -> C1
    // d1 : C1 -> C2 vanishing on the image of d0: compose with a projection
    Reducer red;
    int id = 0;
    for (const auto &c : d0)
      red.insert(c, id++);
    auto raw = random_columns(rng, n2, n1, 5);
    std::vector<Vec> d1(n1);
    // d1(e_i) = raw(residue of e_i modulo the image)
    for (int i = 0; i < n1; ++i) {
      Vec v = Vec::unit(i);
      red.reduce(v);
      d1[i] = apply_cols(raw, v);
    }
    std::vector<int> deg;
    std::vector<Vec> d;
    for (int i = 0; i < n0; ++i) {
      deg.push_back(0);
      Vec v;
      for (const auto &[r, c] : d0[i])
        v.add(n0 + r, c);
      d.push_back(v);
    }
    for (int i = 0; i < n1; ++i) {
      deg.push_back(1);
      Vec v;
      for (const auto &[r, c] : d1[i])
        v.add(n0 + n1 + r, c);
      d.push_back(v);
    }
    for (int i = 0; i < n2; ++i) {
      deg.push_back(2);
      d.push_back(Vec());
    }
    for (int i = 0; i < n0; ++i) {
      Vec dd;
      for (const auto &[j, c] : d[i])
        dd.axpy(c, d[j]);
      ASSERT_TRUE(dd.empty());
    }
    Cohomology H(deg, d);
    const int r0 = oracle::rank(oracle::from_columns(d0, n1));
    const int r1 = oracle::rank(oracle::from_columns(d1, n2));
    EXPECT_EQ(H.dim(0), n0 - r0);
    EXPECT_EQ(H.dim(1), n1 - r1 - r0);
    EXPECT_EQ(H.dim(2), n2 - r1);
    for (auto k : H.keys())
      for (const auto &z : H.reps(k))
        EXPECT_TRUE(H.is_cocycle(z));
  }
}

TEST(Cohomology, PrimitiveOfExactCocycle) {
  // C0 = <a>, C1 = <b, c>, d a = b
  Cohomology H({0, 1, 1}, {Vec::unit(1), Vec(), Vec()});
  EXPECT_EQ(H.dim(0), 0);
  EXPECT_EQ(H.dim(1), 1);
  auto p = H.primitive(3 * Vec::unit(1), {1, 0});
  ASSERT_TRUE(p.has_value());
  EXPECT_EQ(*p, 3 * Vec::unit(0));
  EXPECT_FALSE(H.primitive(Vec::unit(2), {1, 0}).has_value());
  Vec c = H.coords(Vec::unit(2) + Vec::unit(1), {1, 0});
  EXPECT_EQ(c.size(), 1u);
}

TEST(Cohomology, WeightsSplitTheDimensions) {
  // two copies of C0 -> C1 in weights 0 and 1; only weight 1 has a differential
  Cohomology H({0, 1, 0, 1}, {Vec(), Vec(), Vec::unit(3), Vec()}, {0, 0, 1, 1});
  EXPECT_EQ(H.dim(0, 0), 1);
  EXPECT_EQ(H.dim(1, 0), 1);
  EXPECT_EQ(H.dim(0, 1), 0);
  EXPECT_EQ(H.dim(1, 1), 0);
  EXPECT_EQ(H.dim(0), 1);
}
