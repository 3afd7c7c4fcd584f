#pragma once

#include "linf/dgmod.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>

namespace linf {

// Graded-symmetric multilinear map, evaluated on sorted Q-basis words and
// memoized. An empty SymMap is the zero map.
class SymMap {
public:
  using Fn = std::function<Vec(const Word &)>;

  SymMap() = default;
  SymMap(int degree, Fn fn);
  static SymMap table(int degree, std::map<Word, Vec> t);

  Vec operator()(const Word &sorted) const;
  // Value at an arbitrary word of basis elements (sorts with Koszul sign).
  Vec at(Word w, const std::vector<int> &deg) const;
  bool zero() const { return !fn_; }
  int degree() const { return degree_; }

private:
  int degree_ = 0;
  Fn fn_;
  std::shared_ptr<std::map<Word, Vec>> cache_;
};

// Multilinear expansion of args into sorted words with Koszul signs.
std::map<Word, Q> sym_expand(const std::vector<Vec> &args, const std::vector<int> &deg);
// Multilinear value of m on vector arguments.
Vec eval_vecs(const SymMap &m, const std::vector<Vec> &args, const std::vector<int> &deg);

struct LInftyStructure {
  ModPtr L;
  std::map<int, SymMap> q; // arity >= 2; missing arities are zero
  int cap = 4;

  // q_1 = d_L
  Vec bracket(int n, const Word &sorted) const;
  Vec bracket_at(int n, Word w) const;
  Vec bracket_vecs(const std::vector<Vec> &args) const;
  const std::vector<int> &deg() const { return L->deg; }
};
using SPtr = std::shared_ptr<const LInftyStructure>;

SPtr abelian_structure(const ModPtr &L, int cap = 4);

struct LInftyMorphism {
  SPtr src, tgt;
  std::map<int, SymMap> f; // arity >= 1
  int cap = 4;

  Vec taylor(int n, const Word &sorted) const;
  Vec taylor_at(int n, Word w) const;
};

struct CheckOptions {
  bool exhaustive = false; // all Q-basis words and count every failure
};

// Generalized Jacobi identities for 2 <= n <= cap (n = 1 is d^2 = 0).
Check check_linfty(const LInftyStructure &s, int cap, CheckOptions opt = {});
Check check_morphism(const LInftyMorphism &F, int cap, CheckOptions opt = {});
// R-multilinearity and degree of each bracket up to the given arity, on all Q-words.
Check check_multilinear(const LInftyStructure &s, int cap);
Check check_multilinear_map(const DgModule &src, const DgModule &tgt, const SymMap &m, int n);

// Sum over set partitions of the positions of w (blocks ordered by their
// minima) of sign * outer(|P|, [inner(|B|, w_B) for B in P]).
Vec partition_sum(const Word &w, const std::vector<int> &deg,
                  const std::function<Vec(int, const Word &)> &inner,
                  const std::function<Vec(int, const std::vector<Vec> &)> &outer, int kmin,
                  int kmax);
// Sum over Sh(i, n-i) of sign * outer(n-i+1, [inner(i, first block)] + rest).
Vec insertion_sum(const Word &w, const std::vector<int> &deg,
                  const std::function<Vec(int, const Word &)> &inner,
                  const std::function<Vec(int, const std::vector<Vec> &)> &outer, int imin,
                  int imax);

LInftyMorphism identity_morphism(const SPtr &s);
LInftyMorphism strict_morphism(const SPtr &src, const SPtr &tgt, const ModuleMap &f1);
LInftyMorphism compose(const LInftyMorphism &F, const LInftyMorphism &G);
LInftyMorphism inverse(const LInftyMorphism &F);
// Q-basis words over an R-generating set, or all words.
std::vector<Word> check_words(const DgModule &L, int n, bool all);

struct BinaryClass {
  bool cocycle = false;
  bool vanishes = false;
  Vec representative; // coordinates in hom_sym_complex(L, 2), degree 1
  Vec primitive;      // degree 0 coordinates when vanishing
  std::shared_ptr<HomComplex> hom;
};
BinaryClass binary_class(const LInftyStructure &s);

struct CohomologyBracket {
  std::vector<int> rep_degree;
  std::vector<Vec> reps;
  std::map<std::pair<int, int>, Vec> table; // (i,j) -> coordinates
  Check well_defined;
  Check jacobiator;
};
CohomologyBracket cohomology_bracket(const LInftyStructure &s);

// Base change.
SPtr restrict_scalars(const SPtr &s, const DgcaMorphism &phi);
LInftyMorphism restrict_scalars(const LInftyMorphism &F, const SPtr &src, const SPtr &tgt);
ModPtr restrict_module(const ModPtr &L, const DgcaMorphism &phi);

struct Extension {
  ModPtr mod;
  std::vector<std::pair<int, int>> pure;               // basis -> (R index, L index)
  std::function<Vec(int, const Vec &)> tensor;          // r_a (x) x
};
Extension extend_module(const ModPtr &L, const DgcaMorphism &phi);
SPtr extend_scalars(const SPtr &s, const DgcaMorphism &phi, Extension *ext = nullptr);
ModuleMap extend_map(const ModuleMap &f, const Extension &src, const Extension &tgt,
                     const DgcaMorphism &phi);
LInftyMorphism extend_morphism(const LInftyMorphism &F, const SPtr &src, const SPtr &tgt,
                               const Extension &es, const Extension &et);

// DG Lie R-algebra on a free R-module; the bracket is given on generators and
// extended R-bilinearly.
struct DgLie {
  ModPtr M;
  std::vector<std::vector<Vec>> br; // br[g][h] as a Q-vector of M

  Vec bracket(const Vec &x, const Vec &y) const;
  Vec bracket_basis(int u, int v) const;
  Check validate() const;
};
// R (x) g with differential d_R (x) 1 + sum_i xi^i (x) D_i + 1 (x) d_g where the
// pairs (basis index of xi^i in R, derivation matrix D_i on g) are optional.
DgLie dgla(const DgcaPtr &R, const LieAlgebra &g,
           const std::vector<std::pair<int, std::vector<Vec>>> &twist = {});
// g (x) A for a DGCA A, over the ground field.
DgLie dgla_tensor(const LieAlgebra &g, const DgcaPtr &A);
// R (x)_Q N for a DG Lie algebra N over the ground field.
DgLie dgla_base_change(const DgLie &N, const DgcaPtr &R);

struct DgLieMorphism {
  const DgLie *src, *tgt;
  ModuleMap f; // R-linear, degree 0
  Check validate() const;
};

// Shift of a DG Lie algebra to an L-infinity[1] structure on L[1].
SPtr decalage(const DgLie &g, int cap = 4);
// The shift uses the same Q-basis indices; these convert elements.
Vec desuspend(const DgModule &M, const Vec &x); // x in M -> s^{-1}x in M[1]

} // namespace linf
