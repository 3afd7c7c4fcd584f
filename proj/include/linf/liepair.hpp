#pragma once

#include "linf/envelope.hpp"

namespace linf {

// Lie pair (g, a) over a point. The working basis of g is j(b_1..b_m)
// followed by a_1..a_k; q : g -> B is the projection along a.
struct LiePair {
  LieAlgebra g;                 // in the working basis
  LieAlgebra a;                 // structure constants of a in its own basis
  int m = 0, k = 0;             // dim B, dim a
  std::vector<std::string> b_label;
  std::vector<Vec> basis_in_g;  // working basis vectors in the input coordinates
  std::vector<int> sub;         // input indices spanning a
  DgcaPtr ce;                   // ce(a)

  Vec q(const Vec &x) const;    // working coordinates -> B coordinates
  Vec bott(int i, int b) const; // nabla_{a_i} b
};
// j[b] (input coordinates) defaults to the basis vectors outside sub.
LiePair make_lie_pair(const LieAlgebra &g, const std::vector<int> &sub,
                      const std::vector<Vec> &j = {});

// g x B -> B extending the Bott connection.
struct LiePairConnection {
  std::vector<std::vector<Vec>> nab; // nab[x][b], x in the working basis of g
  Vec apply(const Vec &x, const Vec &b) const;
};
LiePairConnection default_connection(const LiePair &p);
Check check_liepair_connection(const LiePair &p, const LiePairConnection &c);

struct LiePairKapranov {
  LiePair pair;
  LiePairConnection nab;
  ModPtr omega;                         // Omega_A(B), free over ce(a) on B
  std::shared_ptr<const Envelope> Ug;   // U(g), for the quotient U(g)/U(g)a
  std::shared_ptr<const SymCoalgebra> S;
  CoMat pbw, pbw_inv, dA, dlight;
  SPtr structure;

  // Class in Omega_A (x) U_B of r_a (x) X for X in U(g).
  Vec quotient(int a, const Vec &X) const;
  Vec gmul(int x, const Vec &y) const; // left g-action on Omega_A (x) U_B
};
LiePairKapranov kapranov_liepair(const LiePair &p, const LiePairConnection &c, int arity_cap,
                                 int W);
// Isomorphism pbw_to^{-1} pbw_from between structures of the same pair built
// from different splittings or connections.
LInftyMorphism liepair_change(const LiePairKapranov &from, const LiePairKapranov &to);
// sum_i xi^i (x) (nabla_a nabla_{jb1} b2 - nabla_{jb1} nabla_a b2 - nabla_{[a,jb1]} b2)
Vec liepair_r2(const LiePairKapranov &k, int b1, int b2);
// Delta pbw = (pbw (x) pbw) Delta up to weight maxw.
Check check_liepair_pbw(const LiePairKapranov &k, int maxw);

struct LiePairAtiyah {
  Vec cocycle; // in C^1(a; S^2 B^v (x) B), basis (xi^i, {b1 <= b2}, b)
  bool is_cocycle = false;
  bool vanishes = false;
  Vec primitive;
  int dim_c0 = 0, dim_c1 = 0, dim_c2 = 0;
  int dim = 0; // all cochain degrees
  std::function<Vec(const Vec &)> d; // differential on C(a; V)
};
LiePairAtiyah liepair_atiyah_class(const LiePair &p, const LiePairConnection &c);

struct Pullback {
  AlgPtr alg;
  Vec s;
  int nd = 0; // generators D_1..D_k come first, then E_x for the working basis
};
Pullback pullback_algebroid(const LiePair &p);

struct ComparisonReport {
  Check p0_chain, p0_quasi_iso, inclusion_square, pu_chain, pu_coalgebra, morphism;
  bool ok() const {
    return p0_chain.ok && p0_quasi_iso.ok && inclusion_square.ok && pu_chain.ok &&
           pu_coalgebra.ok && morphism.ok;
  }
};
ComparisonReport compare_kapranov(const LiePair &p, const LiePairConnection &c, int arity_cap,
                                  int W);

} // namespace linf
