#pragma once

#include "linf/linfty.hpp"

namespace linf {

// DG Lie-Rinehart algebra over R on a free module L (differential Q_L = L->d).
// Bracket and anchor are given on generators and extended by the Leibniz rules.
struct DgLieRinehart {
  ModPtr L;
  std::vector<std::vector<Vec>> br;  // br[g][h] = [g, h]
  std::vector<std::vector<Vec>> rho; // rho[g][a] = rho(g)(r_a)

  const DgcaPtr &R() const { return L->R; }
  Vec anchor_basis(int u, int a) const;       // rho(u)(r_a), u a Q-basis index of L
  Vec anchor(const Vec &l, const Vec &r) const;
  Vec bracket_basis(int u, int v) const;
  Vec bracket(const Vec &x, const Vec &y) const;
  Check validate() const;
};
using AlgPtr = std::shared_ptr<const DgLieRinehart>;

AlgPtr make_algebroid(DgLieRinehart a);
// R, bracket and anchor on generators; the differential is [s, -] for a
// degree-one section s (given in the Q-basis of the module).
AlgPtr algebroid_with_section(const DgcaPtr &R, const std::vector<std::string> &labels,
                              const std::vector<int> &degs, std::vector<std::vector<Vec>> br,
                              std::vector<std::vector<Vec>> rho, const Vec &s);
AlgPtr from_dgla(const DgLie &g);
// Derivations of an exterior DGCA: generators d/dxi^k, differential [Q, -].
AlgPtr tangent_of(const DgcaPtr &R);

struct Connection {
  AlgPtr a;
  std::vector<std::vector<Vec>> nab; // nab[g][h] = nabla_g h

  Vec apply_basis(int u, int v) const;
  Vec apply(const Vec &x, const Vec &y) const;
};
// nabla_g h = 1/2 [g, h] on generators
Connection half_bracket_connection(const AlgPtr &a);
Connection zero_connection(const AlgPtr &a);
// nabla + S for a table S on generators
Connection add_tensor(const Connection &c, const std::vector<std::vector<Vec>> &S);

Vec torsion(const Connection &c, const Vec &x, const Vec &y);
Check check_torsion_free(const Connection &c);
Connection torsion_free_correction(const Connection &c);
Vec curvature(const Connection &c, const Vec &x, const Vec &y, const Vec &z);
bool is_flat(const Connection &c);

Vec atiyah(const Connection &c, const Vec &x, const Vec &y);

struct AtiyahReport {
  Vec cocycle;   // coordinates in Hom_R(S^2 L, L), degree 1
  bool is_cocycle = false;
  bool symmetric = false;
  bool class_vanishes = false;
  Vec primitive;
  std::shared_ptr<HomComplex> hom;
};
AtiyahReport atiyah_cocycle(const Connection &c);

} // namespace linf
