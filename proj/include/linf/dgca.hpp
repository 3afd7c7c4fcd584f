#pragma once

#include "linf/kernel.hpp"

#include <memory>
#include <string>
#include <vector>

namespace linf {

// Finite-dimensional Lie algebra over Q in degree 0, by structure constants.
struct LieAlgebra {
  std::vector<std::string> label;
  std::vector<std::vector<Vec>> bracket; // bracket[i][j] = [e_i, e_j]

  int dim() const { return (int)label.size(); }
  Vec br(const Vec &x, const Vec &y) const;
  Check validate() const;
};

LieAlgebra lie_sl2();          // basis e, h, f
LieAlgebra lie_aff1();         // [e1, e2] = e2
LieAlgebra lie_abelian(int n);
LieAlgebra lie_heisenberg();   // [x, y] = z

struct Dgca {
  std::vector<std::string> label;
  std::vector<int> deg;
  std::vector<int> wt; // auxiliary grading (polynomial degree), 0 when unused
  int unit = 0;
  std::vector<std::vector<Vec>> mul;
  std::vector<Vec> d;
  // Basis indices of the degree-one generators when R is an exterior algebra.
  std::vector<int> gens;

  int dim() const { return (int)label.size(); }
  Vec mult(const Vec &a, const Vec &b) const;
  Vec diff(const Vec &a) const;
  Check validate() const;
};
using DgcaPtr = std::shared_ptr<const Dgca>;

DgcaPtr make_dgca(Dgca a);
DgcaPtr dgca_field();
DgcaPtr dgca_exterior(int n);
// Exterior algebra with d(xi^k) = dgen[k] (vectors in the algebra being built).
DgcaPtr dgca_exterior(int n, const std::vector<Vec> &dgen);
// Derivation of the given degree of an exterior algebra from its generator values.
std::vector<Vec> derivation_from_generators(const Dgca &a, int degree,
                                            const std::vector<Vec> &on_gens);
DgcaPtr ce_dgca(const LieAlgebra &g);
DgcaPtr dgca_truncated_poly(int D); // Q[x]/(x^D), |x| = 0, poly weight recorded

struct DgcaMorphism {
  DgcaPtr src, tgt;
  std::vector<Vec> map; // src basis -> tgt vector

  Vec apply(const Vec &a) const;
  Check validate() const;
};
DgcaMorphism dgca_identity(const DgcaPtr &a);
DgcaMorphism dgca_unit_map(const DgcaPtr &a); // Q -> R
DgcaMorphism compose(const DgcaMorphism &f, const DgcaMorphism &g);

} // namespace linf
