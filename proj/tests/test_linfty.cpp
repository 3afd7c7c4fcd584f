#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace linf;

namespace {

Word unit_word(const DgModule &L, Word g) {
  for (int &x : g)
    x = L.idx(x, L.R->unit);
  return g;
}

SPtr scaled_bracket(const SPtr &s, int n, const Q &c) {
  auto t = std::make_shared<LInftyStructure>(*s);
  t->q[n] = SymMap(s->q.at(n).degree(), [s, n, c](const Word &w) { return c * s->bracket(n, w); });
  return t;
}

} // namespace

TEST(Decalage, Sl2BracketIsShiftedLieBracket) {
  DgLie g = dgla(dgca_field(), lie_sl2());
  SPtr s = decalage(g, 3);
  EXPECT_TRUE(check_linfty(*s, 3).ok);
  LieAlgebra sl2 = lie_sl2();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      EXPECT_EQ(s->bracket_at(2, {i, j}), desuspend(*g.M, sl2.bracket[i][j]));
}

TEST(Decalage, GradedDglasPassIdentities) {
  for (const DgLie &g : {dgla_tensor(lie_sl2(), dgca_exterior(1)),
                         dgla_tensor(lie_heisenberg(), ce_dgca(lie_aff1())),
                         dgla_base_change(dgla(dgca_field(), lie_aff1()), dgca_exterior(2))}) {
    EXPECT_TRUE(g.validate().ok);
    EXPECT_TRUE(check_linfty(*decalage(g, 4), 4).ok);
  }
}

TEST(CheckLinfty, TamperedBracketIsCaughtWithWitness) {
  // sl2 (x) Lambda(xi): several generator triples meet the tampered pair (h, f)
  SPtr s = decalage(dgla_tensor(lie_sl2(), dgca_exterior(1)), 3);
  auto t = std::make_shared<LInftyStructure>(*s);
  t->q[2] = SymMap(0, [s](const Word &w) {
    Vec v = s->bracket(2, w);
    if (w == Word{2, 4})
      v = 3 * v;
    return v;
  });
  Check c = check_linfty(*t, 3);
  EXPECT_FALSE(c.ok);
  EXPECT_FALSE(c.witness.empty());
  Check all = check_linfty(*t, 3, {true});
  EXPECT_FALSE(all.ok);
  EXPECT_GT(all.failures, 1);
}

TEST(CheckLinfty, CorpusConesWithTwoSourceGeneratorsRejectScaledTernary) {
  int tested = 0;
  for (const auto &it : oracle::dgla_corpus(7, 12)) {
    ConeStructure cs = cone_structure(*it.f, 4);
    ASSERT_TRUE(check_linfty(*cs.s, 4).ok) << it.name;
    EXPECT_TRUE(check_multilinear(*cs.s, 3).ok) << it.name;
    if (cs.nl < 2 || cs.s->q.count(3) == 0)
      continue;
    bool nonzero = false;
    for (const Word &g : sym_words(cs.s->L->ngen(), 3, cs.s->L->gen_deg))
      nonzero |= !cs.s->bracket(3, unit_word(*cs.s->L, g)).empty();
    if (!nonzero)
      continue;
    EXPECT_FALSE(check_linfty(*scaled_bracket(cs.s, 3, 2), 4).ok) << it.name;
    ++tested;
  }
  EXPECT_GT(tested, 0);
}

TEST(SymMap, GradedSymmetryOfVectorArguments) {
  std::mt19937_64 rng(41);
  SPtr s = decalage(dgla_tensor(lie_sl2(), dgca_exterior(1)), 3);
  const DgModule &L = *s->L;
  auto rnd = [&](int deg) {
    Vec v;
    for (int u = 0; u < L.dim(); ++u)
      if (L.deg[u] == deg)
        v.add(u, std::uniform_int_distribution<int>(-2, 2)(rng));
    return v;
  };
  for (int dx : {-1, 0})
    for (int dy : {-1, 0}) {
      Vec x = rnd(dx), y = rnd(dy);
      EXPECT_EQ(s->bracket_vecs({x, y}), sgn_pow(dx * dy) * s->bracket_vecs({y, x}));
    }
}

TEST(Morphisms, IdentityCompositionInverse) {
  std::mt19937_64 rng(42);
  SPtr s = decalage(dgla_tensor(lie_aff1(), dgca_exterior(1)), 4);
  EXPECT_TRUE(check_morphism(identity_morphism(s), 4).ok);
  ModPtr L = s->L;
  SPtr a = abelian_structure(L, 4);
  auto tails = oracle::random_tails(L, 3, rng);
  SPtr c = conjugated_structure(L, tails, 4);
  EXPECT_TRUE(check_linfty(*c, 4).ok);
  // the conjugating tails are a morphism to the abelian structure
  LInftyMorphism G = morphism_from_generators(c, a, tails);
  EXPECT_TRUE(check_morphism(G, 4).ok);
  LInftyMorphism Gi = inverse(G);
  EXPECT_TRUE(check_morphism(Gi, 4).ok);
  LInftyMorphism id = compose(G, Gi);
  for (int n = 2; n <= 4; ++n)
    for (const Word &w : sym_words(L->dim(), n, L->deg))
      ASSERT_TRUE(id.taylor(n, w).empty()) << word_str(w);
}

TEST(Morphisms, StrictMorphismsFromCorpus) {
  for (const auto &it : oracle::dgla_corpus(8, 6)) {
    SPtr a = decalage(*it.L, 3), b = decalage(*it.M, 3);
    ModuleMap f1 = it.f->f;
    f1.src = a->L;
    f1.tgt = b->L;
    EXPECT_TRUE(check_morphism(strict_morphism(a, b, f1), 3).ok) << it.name;
  }
}

TEST(Morphisms, WrongLinearPartFails) {
  SPtr s = decalage(dgla(dgca_field(), lie_sl2()), 3);
  ModuleMap twice = identity_map(s->L);
  for (auto &c : twice.col)
    c = 2 * c;
  Check c = check_morphism(strict_morphism(s, s, twice), 3);
  EXPECT_FALSE(c.ok);
}

TEST(BinaryClass, NonabelianBracketOverFieldIsNontrivial) {
  BinaryClass b = binary_class(*decalage(dgla(dgca_field(), lie_sl2()), 3));
  EXPECT_TRUE(b.cocycle);
  EXPECT_FALSE(b.vanishes);
  BinaryClass z = binary_class(*abelian_structure(free_module(dgca_field(), {"a"}, {0}, {Vec()})));
  EXPECT_TRUE(z.cocycle);
  EXPECT_TRUE(z.vanishes);
}

TEST(CohomologyBracket, Sl2OverFieldRecoversTheLieAlgebra) {
  CohomologyBracket cb = cohomology_bracket(*decalage(dgla(dgca_field(), lie_sl2()), 3));
  EXPECT_TRUE(cb.well_defined.ok);
  EXPECT_TRUE(cb.jacobiator.ok);
  EXPECT_EQ(cb.reps.size(), 3u);
  int nonzero = 0;
  for (const auto &[k, v] : cb.table)
    nonzero += !v.empty();
  EXPECT_GT(nonzero, 0);
}

TEST(BaseChange, RestrictionAndExtensionKeepIdentities) {
  DgLie g = dgla_tensor(lie_sl2(), dgca_exterior(1));
  SPtr s = decalage(g, 3);
  Extension ext;
  SPtr e = extend_scalars(s, dgca_unit_map(dgca_exterior(1)), &ext);
  EXPECT_EQ(e->L->dim(), 2 * s->L->dim());
  EXPECT_TRUE(check_linfty(*e, 3).ok);
  DgLie over = dgla(ce_dgca(lie_aff1()), lie_sl2());
  SPtr o = decalage(over, 3);
  SPtr r = restrict_scalars(o, dgca_unit_map(over.M->R));
  EXPECT_EQ(r->L->dim(), o->L->dim());
  EXPECT_EQ(r->L->rdim(), 1);
  EXPECT_TRUE(check_linfty(*r, 3).ok);
}

TEST(Combinatorics, PartitionAndInsertionCounts) {
  const std::vector<int> deg(6, 0);
  auto one = [](int, const Word &) { return Vec::unit(0); };
  auto outer = [](int, const std::vector<Vec> &) { return Vec::unit(0); };
  const int bell[] = {1, 1, 2, 5, 15, 52, 203};
  for (int n = 1; n <= 6; ++n) {
    Word w(n);
    for (int i = 0; i < n; ++i)
      w[i] = i;
    EXPECT_EQ(partition_sum(w, deg, one, outer, 1, n).at(0), bell[n]);
    EXPECT_EQ(insertion_sum(w, deg, one, outer, 1, n).at(0), (1 << n) - 1);
  }
}

TEST(Combinatorics, OddPartitionSigns) {
  // all inputs odd, inner and outer constant: only the sign sum remains
  const std::vector<int> deg(3, 1);
  auto one = [](int, const Word &) { return Vec::unit(0); };
  auto outer = [](int k, const std::vector<Vec> &) { return k == 2 ? Vec::unit(0) : Vec(); };
  // blocks {0,1}{2} +1, {0,2}{1} -1, {0}{1,2} +1
  EXPECT_EQ(partition_sum({0, 1, 2}, deg, one, outer, 2, 2).at(0), 1);
}
