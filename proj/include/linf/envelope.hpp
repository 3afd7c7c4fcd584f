#pragma once

#include "linf/algebroid.hpp"
#include "linf/coalgebra.hpp"

namespace linf {

// Universal enveloping algebra of a DG Lie-Rinehart algebra, truncated at
// weight W. Elements are written in normal form r_a * g_{i1} ... g_{ik} with
// i1 <= ... <= ik (odd letters not repeated), on the same basis as S_R(L).
class Envelope : public RWords {
public:
  Envelope(AlgPtr a, int W);

  const AlgPtr &algebroid() const { return a_; }
  Vec from_l(const Vec &l) const;
  Vec from_r(const Vec &r) const;
  Vec rmul(int a, const Vec &x) const; // r_a * x
  Vec lmul(int g, const Vec &x) const; // generator g times x
  Vec mult(const Vec &x, const Vec &y) const;
  // x (x)_R y on the Q-basis of the tensor square (coefficients moved left).
  Vec tensor(const Vec &x, const Vec &y) const;
  // Q_L extended to words by the Leibniz rule, with d_R on coefficients.
  Vec differential_word(int p) const;

private:
  const Vec &gen_word(int g, int p) const;
  AlgPtr a_;
  mutable std::map<std::pair<int, int>, Vec> memo_;
};

CoMat envelope_differential(const std::shared_ptr<const Envelope> &U);
// Inverse of an operator of the form id + (strictly weight-lowering).
CoMat unipotent_inverse(const CoMat &m);

// Coalgebra isomorphism S_R(L) -> U(L) of a connection, and its inverse.
struct Pbw {
  std::shared_ptr<const SymCoalgebra> S;
  std::shared_ptr<const Envelope> U;
  CoMat map, inv;
};
Pbw make_pbw(const Connection &c, int W);
Pbw make_pbw(const Connection &c, const std::shared_ptr<const SymCoalgebra> &S,
             const std::shared_ptr<const Envelope> &U);
// Delta pbw = (pbw (x) pbw) Delta on basis elements of weight <= maxw.
Check check_pbw_coalgebra(const Pbw &p, int maxw);

struct Kapranov {
  Pbw pbw;
  CoMat QU, Qpbw;
  SPtr structure;
};
Kapranov kapranov_structure(const Connection &c, int arity_cap, int W);
// F = pbw_to^{-1} pbw_from as a morphism from the structure of `from` to that of `to`.
LInftyMorphism connection_change(const Kapranov &from, const Kapranov &to);

// C = Q_U pbw - pbw Q_S, directly and by the recursion, on generator words.
struct CnablaReport {
  Check agree;      // recursion equals the definition up to W
  Check low_weight; // zero on weights 0 and 1
  Check weight_two; // equals -At on weight 2
  bool identically_zero = true;
};
CnablaReport cnabla_check(const Connection &c, int W);

// R_n on a generator word from R_{n-1} by the flat-connection recursion.
Vec flat_recursion(const Kapranov &k, const Connection &c, const Word &gens);

struct TauReport {
  Check evaluation, chain_map, coderivation;
  int weight_cap = 0;
  bool ok() const { return evaluation.ok && chain_map.ok && coderivation.ok; }
};
TauReport tau_splitting_check(const Connection &c, int W);

} // namespace linf
