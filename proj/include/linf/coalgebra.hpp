#pragma once

#include "linf/linfty.hpp"

#include <functional>
#include <map>
#include <memory>

namespace linf {

// Q-basis r_a * w of R (x) S(V): R-basis index a and a sorted word w over
// generators of the given degrees, of weight at most W.
class RWords {
public:
  RWords(DgcaPtr R, std::vector<int> gen_deg, int W);

  const DgcaPtr &R() const { return R_; }
  int W() const { return W_; }
  int rdim() const { return R_->dim(); }
  int nwords() const { return (int)words_.size(); }
  int dim() const { return nwords() * rdim(); }
  int ngen() const { return (int)gdeg_.size(); }
  int idx(int a, int p) const { return p * rdim() + a; }
  int coef_of(int i) const { return i % rdim(); }
  int word_of(int i) const { return i / rdim(); }
  const Word &word(int p) const { return words_[p]; }
  int find(const Word &w) const;
  int word_deg(int p) const { return wdeg_[p]; }
  int deg(int i) const { return R_->deg[coef_of(i)] + wdeg_[word_of(i)]; }
  int weight(int i) const { return (int)words_[word_of(i)].size(); }
  const std::vector<int> &gen_deg() const { return gdeg_; }
  const std::vector<int> &words_of_weight(int k) const { return by_weight_[k]; }
  // Sign and index of r_a times the (unsorted) word w; index -1 when zero or
  // beyond the weight cap.
  std::pair<int, int> element(int a, Word w) const;
  Vec project_weight(const Vec &x, int k) const;
  int max_weight(const Vec &x) const;
  std::string label(int i, const std::vector<std::string> &gen_labels) const;

  // Shuffle coproduct of r_a * w into the tensor square with Q-basis r_a w1 (x) w2.
  int tidx(int a, int p1, int p2) const { return (p1 * nwords() + p2) * rdim() + a; }
  Vec coproduct(int i) const;
  Vec coproduct(const Vec &x) const;

private:
  DgcaPtr R_;
  std::vector<int> gdeg_;
  int W_;
  std::vector<Word> words_;
  std::vector<int> wdeg_;
  std::map<Word, int> index_;
  std::vector<std::vector<int>> by_weight_;
};

// Weight-truncated symmetric coalgebra S_R(L) of a free DG R-module.
class SymCoalgebra : public RWords {
public:
  SymCoalgebra(ModPtr L, int W);

  const ModPtr &L() const { return L_; }
  // Graded-commutative product, truncated at weight W.
  Vec mul(const Vec &x, const Vec &y) const;
  Vec embed(const Vec &l) const;      // L -> weight one
  Vec corestrict(const Vec &x) const; // weight-one part as a vector of L
  Vec from_r(const Vec &r) const;     // R -> weight zero
  Vec gen_word(const Word &gens) const;
  // R (x) V word for an L-basis word (sorted generator indices with signs).
  Vec lword(const Word &lw) const;


private:
  ModPtr L_;
};

// Q-linear operator on a truncated basis, of fixed degree, with memoized
// lazily computed columns.
class CoMat {
public:
  CoMat() = default;
  CoMat(int degree, int dim, std::function<Vec(int)> col);

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  const Vec &col(int i) const;
  Vec apply(const Vec &x) const;
  bool valid() const { return (bool)impl_; }

private:
  struct Impl {
    std::function<Vec(int)> fn;
    std::map<int, Vec> cache;
  };
  int degree_ = 0, dim_ = 0;
  std::shared_ptr<Impl> impl_;
};

CoMat compose(const CoMat &a, const CoMat &b);
CoMat operator+(const CoMat &a, const CoMat &b);
CoMat scaled(const Q &c, const CoMat &a);
// a b - (-1)^{|a||b|} b a
CoMat commutator(const CoMat &a, const CoMat &b);

// R-linear coderivation given by its Taylor coefficients on sorted generator
// words (the empty word carries the constant part); values are Q-vectors of L.
struct Coder {
  int degree = 0;
  std::map<Word, Vec> taylor;
  // left multiplication of every coefficient by r_a
  Coder times(const DgModule &L, int a) const;
};

// Taylor coefficients of an L-infinity structure, generator words of arity 2..cap.
Coder coder_from_brackets(const LInftyStructure &s, int cap);
// sigma(x) = x . (-)
Coder coder_sigma(const DgModule &L, const Vec &x);

CoMat coderivation_from_taylor(const SymCoalgebra &S, const Coder &q);
CoMat lift_module_differential(const SymCoalgebra &S);
// Coefficients on generator words up to weight W (of the S basis).
Coder corestrict(const SymCoalgebra &S, const CoMat &m, int maxw);
// Delta Q = (Q (x) 1 + 1 (x) Q) Delta on basis elements of weight <= maxw.
Check check_coderivation(const SymCoalgebra &S, const CoMat &m, int maxw);
// Columns of a and b agree on basis elements of weight <= maxw.
Check same_operator(const SymCoalgebra &S, const CoMat &a, const CoMat &b, int maxw,
                    const std::string &what);

struct McReport {
  bool ok = true;
  int weight = 0; // least failing weight
  std::string witness;
};
McReport mc_check(const LInftyStructure &s, int W);

struct ObstructionCertificate {
  bool solvable = false;
  int weight_cap = 0;
  int failing_weight = 0; // arity of the first unsolvable equation
  std::vector<Coder> tau;  // per R-generator of L
  Check verified;
  std::string scope;
};
ObstructionCertificate linearization_obstruction(const LInftyStructure &s, int W);
// The splitting sigma - tau is an ev-section and a chain map up to weight W.
Check verify_splitting(const LInftyStructure &s, int W, const std::vector<Coder> &tau);

// Structure F^{-1} d F on S_R(L) for an R-linear coalgebra automorphism F with
// Taylor coefficients (id, f_2, f_3, ...) given on generator words.
SPtr conjugated_structure(const ModPtr &L, const std::map<int, SymMap> &f, int cap);
// The morphism (id, f_2, ...) extended R-multilinearly from generator words.
LInftyMorphism morphism_from_generators(const SPtr &src, const SPtr &tgt,
                                        const std::map<int, SymMap> &f);

} // namespace linf
