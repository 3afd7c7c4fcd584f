#pragma once

#include "linf/dgca.hpp"
#include "linf/linalg.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>

namespace linf {

// Finite-dimensional DG module over a Dgca, given on a Q-basis. A free module
// additionally remembers its generators; its Q-basis element idx(g, a) is r_a * g.
struct DgModule {
  DgcaPtr R;
  std::vector<std::string> label;
  std::vector<int> deg;
  std::vector<int> wt;
  std::vector<std::vector<Vec>> act; // act[r][v] = r . v
  std::vector<Vec> d;

  bool free = false;
  std::vector<std::string> gen_label;
  std::vector<int> gen_deg;

  int dim() const { return (int)label.size(); }
  int ngen() const { return (int)gen_deg.size(); }
  int rdim() const { return R->dim(); }
  int idx(int g, int a) const { return g * rdim() + a; }
  int gen_of(int v) const { return v / rdim(); }
  int coef_of(int v) const { return v % rdim(); }

  Vec action(const Vec &r, const Vec &v) const;
  Vec action(int r, const Vec &v) const;
  Vec diff(const Vec &v) const;
  Check validate() const;
  // Q-basis indices of an R-generating set: the free generators, or a greedy
  // choice over the Q-basis otherwise.
  std::vector<int> generators() const;
  // Q-vector of a generator expressed through a free presentation element sum r*g.
  Vec element(const std::vector<std::pair<Vec, int>> &rg) const;
};
using ModPtr = std::shared_ptr<const DgModule>;

ModPtr make_module(DgModule m);
// Free module; gen_diff[g] is d(g) as a Q-vector of the module being built.
ModPtr free_module(DgcaPtr R, std::vector<std::string> gen_label, std::vector<int> gen_deg,
                   const std::vector<Vec> &gen_diff, std::vector<int> gen_wt = {});
ModPtr zero_module(DgcaPtr R);

// Value at a sorted Q-word of an R-multilinear symmetric map of degree k out of
// a free module, from its values on generator words.
Vec extend_from_generators(const DgModule &src, const DgModule &tgt, int k, const Word &w,
                           const std::function<Vec(const Word &)> &on_gens);
// Generator word and R-basis coefficients of a sorted Q-word of a free module.
// Returns the sign and fills r (product of coefficients) and g.
int split_word(const DgModule &src, int k, const Word &w, Vec &r, Word &g);

struct ModuleMap {
  ModPtr src, tgt;
  int degree = 0;
  std::vector<Vec> col;

  Vec apply(const Vec &v) const;
  Check check_chain() const;
  Check check_rlinear() const;
};
ModuleMap identity_map(const ModPtr &m);
ModuleMap zero_map(const ModPtr &s, const ModPtr &t, int degree);
ModuleMap compose(const ModuleMap &f, const ModuleMap &g);
// R-linear map out of a free module from generator images.
ModuleMap map_from_generators(const ModPtr &s, const ModPtr &t, int degree,
                              const std::vector<Vec> &gen_images);

Cohomology cohomology(const DgModule &m);
// Induced map on cohomology is an isomorphism in every (degree, weight) with
// weight at most max_weight.
Check check_quasi_iso(const ModuleMap &f, int max_weight = 1 << 30);

// f : M -> L, g : L -> M, h : L -> L.
struct Contraction {
  ModuleMap f, g, h;
  ModPtr L() const { return g.src; }
  ModPtr M() const { return f.src; }
  Check validate() const;
};
Contraction make_contraction(ModuleMap f, ModuleMap g, ModuleMap h);
Contraction identity_contraction(const ModPtr &m);

// Hom_R(S^n_R L, L) with the differential induced by d_L.
class HomComplex {
public:
  HomComplex(ModPtr m, int arity, bool force_constrained = false);

  int arity() const { return n_; }
  bool constrained() const { return constrained_; }
  int dim(int k) const;
  // Coordinates of a degree-k map given by its values on sorted Q-words.
  Vec coords(int k, const std::function<Vec(const Word &)> &phi) const;
  Vec eval(int k, const Vec &c, const Word &w) const;
  Vec d(int k, const Vec &c) const;
  std::optional<Vec> primitive(int k, const Vec &z) const;
  int cohomology_dim(int k) const;

private:
  struct Piece {
    // free: basis element = (generator word index, output Q-basis index)
    std::vector<std::pair<int, int>> cells;
    std::map<std::pair<int, int>, int> cell_index;
    // constrained: basis vectors over cells
    std::vector<Vec> basis;
    bool built_d = false;
    std::vector<Vec> dcols;
  };
  const Piece &piece(int k) const;
  Vec raw_d(int k, const std::function<Vec(const Word &)> &phi, const Word &w) const;
  Vec table_eval(int k, const Piece &p, const Vec &c, const Word &w) const;

  ModPtr m_;
  int n_;
  bool constrained_;
  std::vector<Word> words_; // generator words (free) or Q-words (constrained)
  std::map<Word, int> word_index_;
  mutable std::map<int, Piece> pieces_;
};

} // namespace linf
