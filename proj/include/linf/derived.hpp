#pragma once

#include "linf/coalgebra.hpp"
#include "linf/transfer.hpp"

namespace linf {

// M with differential d + [X, -] for a Maurer-Cartan element X of degree 1.
DgLie dgla_twist(const DgLie &M, const Vec &X);

// L[1] (+) M for a morphism f : L -> M of DG Lie R-algebras. Generators of L
// come first (shifted), then those of M.
struct ConeStructure {
  SPtr s;
  int nl = 0; // number of L generators
  Vec from_l(const Vec &x) const; // x in L -> s^{-1}x
  Vec from_m(const Vec &y) const; // y in M
};
ConeStructure cone_structure(const DgLieMorphism &f, int arity_cap);

// 0 -> L -> M -> A -> 0 with a graded R-linear splitting sigma of pi.
struct SplittingData {
  const DgLieMorphism *incl = nullptr;
  ModPtr A;
  ModuleMap pi, sigma;
  bool is_chain_map = false;
  bool image_abelian = false;
};
// sigma_gens[k] is the image of the k-th generator of A in M.
SplittingData make_splitting(const DgLieMorphism &i, const std::vector<Vec> &sigma_gens,
                             const std::vector<std::string> &labels = {});

Contraction cone_contraction(const ConeStructure &cone, const SplittingData &sp);

enum class DerivedBranch { transfer, closed_form };
SPtr derived_brackets(const SplittingData &sp, int arity_cap,
                      DerivedBranch branch = DerivedBranch::transfer);

// ev_1 [...[[D, sigma(x_1)], sigma(x_2)], ..., sigma(x_n)] (1) on the
// coalgebra of s, for R-generators x_1..x_n.
Vec coder_derived_bracket(const LInftyStructure &s, const Word &gens);

// Isomorphism with linear part id_A from the structure of sp1 to the
// abelian structure of the chain-map splitting sp2.
LInftyMorphism abelianization_iso(const SplittingData &sp1, const SplittingData &sp2,
                                  int arity_cap);

} // namespace linf
