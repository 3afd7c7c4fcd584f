#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace linf;

namespace {

// Total cohomology dimensions of a DGCA by dense ranks of d in each degree.
std::vector<int> betti(const Dgca &a, int top) {
  std::vector<int> dim(top + 2, 0), rk(top + 2, 0);
  for (int d = 0; d <= top; ++d) {
    std::vector<Vec> cols;
    for (int i = 0; i < a.dim(); ++i)
      if (a.deg[i] == d) {
        ++dim[d];
        cols.push_back(a.d[i]);
      }
    rk[d] = oracle::rank(oracle::from_columns(cols, a.dim()));
  }
  std::vector<int> b;
  for (int d = 0; d <= top; ++d)
    b.push_back(dim[d] - rk[d] - (d > 0 ? rk[d - 1] : 0));
  return b;
}

} // namespace

TEST(LieAlgebra, NamedAlgebrasSatisfyJacobi) {
  for (const LieAlgebra &g : {lie_sl2(), lie_aff1(), lie_heisenberg(), lie_abelian(3)})
    EXPECT_TRUE(g.validate().ok);
}

TEST(LieAlgebra, Sl2Relations) {
  LieAlgebra g = lie_sl2();
  EXPECT_EQ(g.br(Vec::unit(1), Vec::unit(0)), 2 * Vec::unit(0));
  EXPECT_EQ(g.br(Vec::unit(1), Vec::unit(2)), -2 * Vec::unit(2));
  EXPECT_EQ(g.br(Vec::unit(0), Vec::unit(2)), Vec::unit(1));
}

TEST(LieAlgebra, BrokenJacobiIsReported) {
  LieAlgebra g = lie_sl2();
  // [e, f] = e: the Jacobiator of (e, f, h) is 2e
  g.bracket[0][2] = Vec::unit(0);
  g.bracket[2][0] = -Vec::unit(0);
  Check c = g.validate();
  EXPECT_FALSE(c.ok);
  EXPECT_EQ(c.what, "jacobi");
  g = lie_aff1();
  g.bracket[1][0] = Vec();
  EXPECT_EQ(g.validate().what, "antisymmetry");
}

TEST(Dgca, ExteriorAlgebraTables) {
  for (int n = 0; n <= 3; ++n) {
    DgcaPtr a = dgca_exterior(n);
    EXPECT_EQ(a->dim(), 1 << n);
    EXPECT_TRUE(a->validate().ok);
    EXPECT_EQ((int)a->gens.size(), n);
  }
  DgcaPtr a = dgca_exterior(2);
  const int x = a->gens[0], y = a->gens[1];
  EXPECT_EQ(a->mult(Vec::unit(x), Vec::unit(y)), -a->mult(Vec::unit(y), Vec::unit(x)));
  EXPECT_TRUE(a->mult(Vec::unit(x), Vec::unit(x)).empty());
}

TEST(Dgca, ChevalleyEilenbergDifferential) {
  DgcaPtr a = ce_dgca(lie_aff1());
  const int x1 = a->gens[0], x2 = a->gens[1];
  EXPECT_TRUE(a->d[x1].empty());
  EXPECT_EQ(a->d[x2], -a->mult(Vec::unit(x1), Vec::unit(x2)));
}

TEST(Dgca, ChevalleyEilenbergCohomology) {
  EXPECT_EQ(betti(*ce_dgca(lie_sl2()), 3), (std::vector<int>{1, 0, 0, 1}));
  EXPECT_EQ(betti(*ce_dgca(lie_aff1()), 2), (std::vector<int>{1, 1, 0}));
  EXPECT_EQ(betti(*ce_dgca(lie_heisenberg()), 3), (std::vector<int>{1, 2, 2, 1}));
  EXPECT_EQ(betti(*ce_dgca(lie_abelian(2)), 2), (std::vector<int>{1, 2, 1}));
}

TEST(Dgca, CeDualToBracket) {
  // (d xi^k)(e_i, e_j) = -xi^k([e_i, e_j]) with xi^i xi^j (e_i, e_j) = 1
  for (const LieAlgebra &g : {lie_sl2(), lie_heisenberg(), lie_aff1()}) {
    DgcaPtr a = ce_dgca(g);
    for (int k = 0; k < g.dim(); ++k)
      for (int i = 0; i < g.dim(); ++i)
        for (int j = i + 1; j < g.dim(); ++j) {
          Vec m = a->mult(Vec::unit(a->gens[i]), Vec::unit(a->gens[j]));
          const int idx = m.begin()->first;
          const Q sign = m.begin()->second;
          EXPECT_EQ(a->d[a->gens[k]].at(idx) * sign, -g.bracket[i][j].at(k));
        }
  }
}

TEST(Dgca, TruncatedPolynomial) {
  DgcaPtr a = dgca_truncated_poly(5);
  EXPECT_EQ(a->mult(Vec::unit(2), Vec::unit(2)), Vec::unit(4));
  EXPECT_TRUE(a->mult(Vec::unit(2), Vec::unit(3)).empty());
  EXPECT_EQ(a->wt[3], 3);
  EXPECT_THROW(dgca_truncated_poly(0), Error);
}

TEST(Dgca, InvalidTablesThrowAxiomError) {
  Dgca a = *dgca_exterior(1);
  a.d[a.gens[0]] = Vec::unit(0); // degree 0 target
  EXPECT_THROW(make_dgca(a), AxiomError);
  Dgca b = *dgca_truncated_poly(3);
  b.mul[1][2] = Vec::unit(1);
  b.mul[2][1] = Vec::unit(1);
  Check c = b.validate();
  EXPECT_FALSE(c.ok);
  EXPECT_EQ(c.what, "associativity");
}

TEST(Dgca, DerivationsSatisfyLeibniz) {
  DgcaPtr a = dgca_exterior(3);
  // degree -1 derivation with D(xi^k) = k-th scalar
  std::vector<Vec> on = {Vec::unit(0), 2 * Vec::unit(0), Vec()};
  auto D = derivation_from_generators(*a, -1, on);
  for (int i = 0; i < a->dim(); ++i)
    for (int j = 0; j < a->dim(); ++j) {
      Vec lhs;
      for (const auto &[k, c] : a->mul[i][j])
        lhs.axpy(c, D[k]);
      Vec rhs = a->mult(D[i], Vec::unit(j));
      rhs.axpy(sgn_pow(-a->deg[i]), a->mult(Vec::unit(i), D[j]));
      EXPECT_EQ(lhs, rhs);
    }
}

TEST(DgcaMorphism, QuotientAndComposition) {
  DgcaPtr S = dgca_truncated_poly(5), T = dgca_truncated_poly(2);
  DgcaMorphism phi{S, T, std::vector<Vec>(5)};
  phi.map[0] = Vec::unit(0);
  phi.map[1] = Vec::unit(1);
  EXPECT_TRUE(phi.validate().ok);
  DgcaMorphism bad = phi;
  bad.map[1] = 2 * Vec::unit(1);
  bad.map[2] = Vec::unit(1);
  EXPECT_FALSE(bad.validate().ok);
  DgcaMorphism u = dgca_unit_map(S);
  EXPECT_TRUE(u.validate().ok);
  DgcaMorphism c = compose(phi, u);
  EXPECT_TRUE(c.validate().ok);
  EXPECT_EQ(c.map[0], Vec::unit(0));
  EXPECT_TRUE(dgca_identity(ce_dgca(lie_sl2())).validate().ok);
}

TEST(DgcaMorphism, DifferentialMustCommute) {
  // Lambda(xi) with d = 0 -> ce(aff1), xi -> xi2 fails since d xi2 != 0
  DgcaPtr L = dgca_exterior(1), C = ce_dgca(lie_aff1());
  DgcaMorphism f{L, C, {Vec::unit(0), Vec::unit(C->gens[1])}};
  Check c = f.validate();
  EXPECT_FALSE(c.ok);
  EXPECT_EQ(c.what, "differential");
  f.map[1] = Vec::unit(C->gens[0]);
  EXPECT_TRUE(f.validate().ok);
}
