#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace linf;

TEST(Rational, ParseAndPrintRoundTrip) {
  for (const char *s : {"0", "-3", "7/2", "-1/6", "123456789012345678901234567891/7"}) {
    Q q = parse_q(s);
    EXPECT_EQ(qstr(q), s);
  }
  EXPECT_EQ(parse_q("4/6"), frac(2, 3));
  EXPECT_THROW(parse_q("1/0"), Error);
  EXPECT_THROW(parse_q("x"), Error);
}

TEST(Rational, FracIsCanonical) {
  Q a = frac(6, -4);
  EXPECT_EQ(a, Q(-3, 2));
  EXPECT_EQ(qstr(a), "-3/2");
}

TEST(Vec, ZeroCoefficientsAreDropped) {
  Vec v = Vec::unit(3, 2);
  v.add(3, -2);
  EXPECT_TRUE(v.empty());
  v.add(1, 0);
  EXPECT_TRUE(v.empty());
  Vec w = Vec::unit(0) + frac(1, 2) * Vec::unit(5);
  EXPECT_EQ((w - w).size(), 0u);
  EXPECT_EQ(w.at(5), frac(1, 2));
  EXPECT_EQ(w.at(4), 0);
  EXPECT_EQ((-w).at(0), -1);
}

TEST(Koszul, AgreesWithInversionCount) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 6;
    std::vector<int> deg(n), perm(n);
    for (int &d : deg)
      d = std::uniform_int_distribution<int>(-2, 2)(rng);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(koszul_sign(deg, perm), oracle::koszul(deg, perm));
  }
}

TEST(Koszul, RejectsNonPermutations) {
  EXPECT_THROW(koszul_sign({1, 1}, {0, 0}), Error);
  EXPECT_THROW(koszul_sign({1, 1}, {0}), Error);
}

TEST(Koszul, TranspositionOfOddsIsNegative) {
  EXPECT_EQ(koszul_sign({1, 1}, {1, 0}), -1);
  EXPECT_EQ(koszul_sign({1, 0}, {1, 0}), 1);
  EXPECT_EQ(koszul_sign({1, 1, 1}, {2, 0, 1}), 1);
}

TEST(Shuffles, CountIsMultinomialAndBlocksIncrease) {
  for (const std::vector<int> &blocks :
       std::vector<std::vector<int>>{{1}, {2, 1}, {1, 2}, {2, 2}, {1, 1, 1}, {3, 1, 2}}) {
    auto sh = shuffles(blocks);
    int n = std::accumulate(blocks.begin(), blocks.end(), 0);
    Q expect = factorial(n);
    for (int b : blocks)
      expect /= factorial(b);
    EXPECT_EQ(Q((long)sh.size()), expect);
    EXPECT_TRUE(std::is_sorted(sh.begin(), sh.end()));
    std::set<std::vector<int>> distinct(sh.begin(), sh.end());
    EXPECT_EQ(distinct.size(), sh.size());
    for (const auto &p : sh) {
      int pos = 0;
      for (int b : blocks) {
        EXPECT_TRUE(std::is_sorted(p.begin() + pos, p.begin() + pos + b));
        pos += b;
      }
    }
  }
  EXPECT_THROW(shuffles({}), Error);
  EXPECT_THROW(shuffles({2, 0}), Error);
}

TEST(Bernoulli, ConventionWithNegativeFirst) {
  EXPECT_EQ(bernoulli(0), 1);
  EXPECT_EQ(bernoulli(1), frac(-1, 2));
  EXPECT_EQ(bernoulli(2), frac(1, 6));
  EXPECT_EQ(bernoulli(3), 0);
  EXPECT_EQ(bernoulli(4), frac(-1, 30));
}

TEST(Bernoulli, GeneratingFunctionOracle) {
  // x / (e^x - 1) = sum B_n x^n / n!, so (sum x^k/(k+1)!) (sum B_n x^n/n!) = 1
  const int N = 12;
  for (int n = 0; n <= N; ++n) {
    Q s = 0;
    for (int k = 0; k <= n; ++k)
      s += bernoulli(k) / factorial(k) / factorial(n - k + 1);
    EXPECT_EQ(s, n == 0 ? 1 : 0) << n;
  }
}

TEST(Binomial, PascalRule) {
  for (int n = 1; n < 12; ++n)
    for (int k = 0; k <= n; ++k)
      EXPECT_EQ(binomial(n, k), binomial(n - 1, k - 1) + binomial(n - 1, k));
  EXPECT_EQ(binomial(4, 7), 0);
}

TEST(Words, NormalizeMatchesKoszul) {
  std::mt19937_64 rng(5);
  const std::vector<int> deg = {0, 1, 1, 0, -1, 2};
  for (int trial = 0; trial < 300; ++trial) {
    Word w(1 + trial % 5);
    for (int &x : w)
      x = std::uniform_int_distribution<int>(0, 5)(rng);
    Word v = w;
    int s = normalize_word(v, deg);
    EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
    bool repeat = false;
    for (std::size_t i = 1; i < v.size(); ++i)
      repeat |= v[i] == v[i - 1] && odd(deg[v[i]]);
    if (repeat) {
      EXPECT_EQ(s, 0);
      continue;
    }
    // stable sort permutation: w[perm[i]] = v[i]
    std::vector<int> perm(w.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return w[a] < w[b]; });
    std::vector<int> d;
    for (int x : w)
      d.push_back(deg[x]);
    EXPECT_EQ(s, oracle::koszul(d, perm));
  }
}

TEST(Words, MergeIsConcatenateThenNormalize) {
  std::mt19937_64 rng(6);
  const std::vector<int> deg = {1, 0, 1, 1, 2};
  for (int trial = 0; trial < 300; ++trial) {
    Word a(trial % 3), b(1 + trial % 4);
    for (int &x : a)
      x = std::uniform_int_distribution<int>(0, 4)(rng);
    for (int &x : b)
      x = std::uniform_int_distribution<int>(0, 4)(rng);
    if (normalize_word(a, deg) == 0 || normalize_word(b, deg) == 0)
      continue;
    Word out, cat = a;
    cat.insert(cat.end(), b.begin(), b.end());
    int s = normalize_word(cat, deg);
    int m = merge_words(a, b, out, deg);
    EXPECT_EQ(m, s);
    if (s != 0)
      EXPECT_EQ(out, cat);
  }
}

TEST(Words, SymWordsEnumeratesSortedWords) {
  const std::vector<int> deg = {0, 1, 0, 1};
  for (int n = 0; n <= 4; ++n) {
    // brute force over all words
    std::set<Word> want;
    Word w(n, 0);
    std::function<void(int)> rec = [&](int i) {
      if (i == n) {
        Word v = w;
        if (normalize_word(v, deg) != 0)
          want.insert(v);
        return;
      }
      for (int x = 0; x < 4; ++x) {
        w[i] = x;
        rec(i + 1);
      }
    };
    rec(0);
    auto got = sym_words(4, n, deg);
    EXPECT_EQ(std::set<Word>(got.begin(), got.end()), want);
    EXPECT_EQ(got.size(), want.size());
  }
}

TEST(Check, KeepsFirstWitnessAndCounts) {
  Check c;
  c.fail("a", "x");
  c.fail("b", "y");
  EXPECT_FALSE(c.ok);
  EXPECT_EQ(c.what, "a");
  EXPECT_EQ(c.witness, "x");
  EXPECT_EQ(c.failures, 2);
}
