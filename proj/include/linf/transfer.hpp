#pragma once

#include "linf/linfty.hpp"

namespace linf {

using SymVec = std::map<Word, Q>; // element of S(L) over Q, sorted Q-basis words

// Symmetrized tensor-trick homotopy on a weight-n word of the big side of c.
SymVec tensor_trick_H(const Contraction &c, const Word &w);

struct TransferResult {
  SPtr transferred;   // on the small side M
  LInftyMorphism F;   // M -> L
  LInftyMorphism G;   // L -> M
  Contraction contraction;
};

TransferResult homotopy_transfer(const SPtr &s, const Contraction &c, int arity_cap);

} // namespace linf
