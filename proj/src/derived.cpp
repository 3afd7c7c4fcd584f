#include "linf/derived.hpp"

#include <algorithm>
#include <numeric>

namespace linf {

DgLie dgla_twist(const DgLie &M, const Vec &X) {
  const DgModule &m = *M.M;
  if (!(m.diff(X) + frac(1, 2) * M.bracket(X, X)).empty())
    throw AxiomError("twist: element does not satisfy the Maurer-Cartan equation");
  std::vector<Vec> gd;
  for (int g = 0; g < m.ngen(); ++g) {
    Vec u = Vec::unit(m.idx(g, m.R->unit));
    gd.push_back(m.d[m.idx(g, m.R->unit)] + M.bracket(X, u));
  }
  DgLie out;
  out.M = free_module(m.R, m.gen_label, m.gen_deg, gd);
  out.br = M.br;
  Check c = out.M->validate();
  if (!c.ok)
    throw AxiomError("twisted differential: " + c.what + " fails at " + c.witness);
  c = out.validate();
  if (!c.ok)
    throw AxiomError("twisted dg lie algebra: " + c.what + " fails at " + c.witness);
  return out;
}

// ------------------------------------------------------------------ cone

Vec ConeStructure::from_l(const Vec &x) const {
  return desuspend(*s->L, x);
}

Vec ConeStructure::from_m(const Vec &y) const {
  Vec out;
  const int off = nl * s->L->rdim();
  for (const auto &[v, c] : y)
    out.add(v + off, c);
  return out;
}

ConeStructure cone_structure(const DgLieMorphism &f, int arity_cap) {
  Check ok = f.validate();
  if (!ok.ok)
    throw AxiomError("cone: not a morphism of dg lie algebras: " + ok.what + " at " + ok.witness);
  const DgModule &L = *f.src->M, &M = *f.tgt->M;
  const int nl = L.ngen(), nm = M.ngen(), rd = L.rdim();
  const int off = nl * rd;
  std::vector<std::string> lab;
  std::vector<int> deg;
  std::vector<Vec> gd;
  for (int g = 0; g < nl; ++g) {
    lab.push_back("s" + L.gen_label[g]);
    deg.push_back(L.gen_deg[g] - 1);
    const int u = L.idx(g, L.R->unit);
    Vec v = -desuspend(L, L.d[u]);
    for (const auto &[y, c] : f.f.col[u])
      v.add(y + off, -c);
    gd.push_back(v);
  }
  for (int h = 0; h < nm; ++h) {
    lab.push_back(M.gen_label[h]);
    deg.push_back(M.gen_deg[h]);
    Vec v;
    for (const auto &[y, c] : M.d[M.idx(h, M.R->unit)])
      v.add(y + off, c);
    gd.push_back(v);
  }
  ConeStructure cone;
  cone.nl = nl;
  auto st = std::make_shared<LInftyStructure>();
  st->L = free_module(L.R, lab, deg, gd);
  st->cap = arity_cap;
  ModPtr C = st->L;
  auto src = std::make_shared<DgLie>(*f.src), tgt = std::make_shared<DgLie>(*f.tgt);
  auto fc = std::make_shared<std::vector<Vec>>(f.f.col);
  auto shift_m = [off](const Vec &y) {
    Vec out;
    for (const auto &[v, c] : y)
      out.add(v + off, c);
    return out;
  };
  for (int n = 2; n <= arity_cap; ++n) {
    const Q coef = -bernoulli(n - 1) / factorial(n - 1);
    st->q[n] = SymMap(1, [=](const Word &w) {
      const DgModule &Lm = *src->M, &Mm = *tgt->M;
      return extend_from_generators(*C, *C, 1, w, [&](const Word &gw) {
        int nlet = (int)std::count_if(gw.begin(), gw.end(), [&](int x) { return x < nl; });
        if (n == 2 && nlet == 2) {
          Vec v = desuspend(Lm, src->br[gw[0]][gw[1]]);
          v *= sgn_pow(Lm.gen_deg[gw[0]]);
          return v;
        }
        if (nlet != 1 || coef == 0)
          return Vec();
        Vec fx = (*fc)[Lm.idx(gw[0], Lm.R->unit)];
        std::vector<int> hs, hd;
        for (int i = 1; i < n; ++i) {
          hs.push_back(gw[i] - nl);
          hd.push_back(Mm.gen_deg[gw[i] - nl]);
        }
        std::vector<int> p(n - 1);
        std::iota(p.begin(), p.end(), 0);
        Vec acc;
        do {
          Vec v = fx;
          for (int i : p)
            v = tgt->bracket(v, Vec::unit(Mm.idx(hs[i], Mm.R->unit)));
          acc.axpy(koszul_sign(hd, p), v);
        } while (std::next_permutation(p.begin(), p.end()));
        acc *= coef;
        return shift_m(acc);
      });
    });
  }
  cone.s = st;
  return cone;
}

// ------------------------------------------------------------- splitting

SplittingData make_splitting(const DgLieMorphism &i, const std::vector<Vec> &sigma_gens,
                             const std::vector<std::string> &labels) {
  const DgModule &L = *i.src->M, &M = *i.tgt->M;
  const DgcaPtr &R = M.R;
  const int na = (int)sigma_gens.size(), rd = R->dim();
  std::vector<int> adeg;
  std::vector<std::string> alab;
  for (int k = 0; k < na; ++k) {
    if (sigma_gens[k].empty())
      throw Error("splitting: zero generator image");
    adeg.push_back(M.deg[sigma_gens[k].begin()->first]);
    alab.push_back(k < (int)labels.size() ? labels[k] : "a" + std::to_string(k));
  }
  if (L.dim() + na * rd != M.dim())
    throw Error("splitting: dimensions do not add up");
  LinearSystem sys;
  for (int v = 0; v < L.dim(); ++v)
    sys.cols.push_back(i.f.col[v]);
  std::vector<Vec> scol;
  for (int k = 0; k < na; ++k)
    for (int a = 0; a < rd; ++a)
      scol.push_back(M.action(a, sigma_gens[k]));
  for (const Vec &c : scol)
    sys.cols.push_back(c);
  if (sys.rank() != M.dim())
    throw Error("splitting: image of sigma is not a complement of L");
  const int off = L.dim();
  std::vector<Vec> picol;
  for (int y = 0; y < M.dim(); ++y) {
    Vec x = *sys.solve(Vec::unit(y));
    Vec a;
    for (const auto &[j, c] : x)
      if (j >= off)
        a.add(j - off, c);
    picol.push_back(a);
  }
  auto pi_of = [&](const Vec &y) {
    Vec out;
    for (const auto &[v, c] : y)
      out.axpy(c, picol[v]);
    return out;
  };
  std::vector<Vec> gd;
  for (int k = 0; k < na; ++k)
    gd.push_back(pi_of(M.diff(sigma_gens[k])));
  SplittingData sp;
  sp.incl = &i;
  sp.A = free_module(R, alab, adeg, gd);
  Check c = sp.A->validate();
  if (!c.ok)
    throw AxiomError("quotient module: " + c.what + " fails at " + c.witness);
  sp.pi = ModuleMap{i.tgt->M, sp.A, 0, picol};
  sp.sigma = ModuleMap{sp.A, i.tgt->M, 0, scol};
  c = sp.pi.check_chain();
  if (!c.ok)
    throw AxiomError("projection is not a chain map: L is not a dg submodule");
  sp.is_chain_map = sp.sigma.check_chain().ok;
  sp.image_abelian = true;
  for (int k = 0; k < na; ++k)
    for (int l = 0; l < na; ++l)
      if (!i.tgt->bracket(sigma_gens[k], sigma_gens[l]).empty())
        sp.image_abelian = false;
  return sp;
}

Contraction cone_contraction(const ConeStructure &cone, const SplittingData &sp) {
  const DgLieMorphism &i = *sp.incl;
  const DgModule &L = *i.src->M, &M = *i.tgt->M, &A = *sp.A;
  ModPtr C = cone.s->L;
  LinearSystem inc;
  for (int v = 0; v < L.dim(); ++v)
    inc.cols.push_back(i.f.col[v]);
  // s^{-1} i^{-1} (id - sigma pi) y
  auto lift = [&](const Vec &y) {
    Vec p = y - sp.sigma.apply(sp.pi.apply(y));
    auto x = inc.solve(p);
    if (!x)
      throw Error("cone contraction: complement does not land in L");
    return cone.from_l(*x);
  };
  std::vector<Vec> fcol, gcol, hcol;
  for (int a = 0; a < A.dim(); ++a) {
    Vec sa = sp.sigma.col[a];
    Vec Dsa = M.diff(sa) - sp.sigma.apply(A.d[a]);
    fcol.push_back(lift(Dsa) + cone.from_m(sa));
  }
  const int off = cone.nl * C->rdim();
  for (int v = 0; v < C->dim(); ++v) {
    if (v < off) {
      gcol.emplace_back();
      hcol.emplace_back();
    } else {
      Vec y = Vec::unit(v - off);
      gcol.push_back(sp.pi.apply(y));
      hcol.push_back(lift(y));
    }
  }
  return make_contraction(ModuleMap{sp.A, C, 0, fcol}, ModuleMap{C, sp.A, 0, gcol},
                          ModuleMap{C, C, -1, hcol});
}

// ------------------------------------------------------ derived brackets

SPtr derived_brackets(const SplittingData &sp, int arity_cap, DerivedBranch branch) {
  if (branch == DerivedBranch::transfer) {
    ConeStructure cone = cone_structure(*sp.incl, arity_cap);
    return homotopy_transfer(cone.s, cone_contraction(cone, sp), arity_cap).transferred;
  }
  if (!sp.image_abelian)
    throw Error("closed-form derived brackets need a splitting with abelian image");
  auto st = std::make_shared<LInftyStructure>();
  st->L = sp.A;
  st->cap = arity_cap;
  auto M = std::make_shared<DgLie>(*sp.incl->tgt);
  auto pi = std::make_shared<ModuleMap>(sp.pi);
  auto sigma = std::make_shared<ModuleMap>(sp.sigma);
  ModPtr A = sp.A;
  for (int n = 2; n <= arity_cap; ++n)
    st->q[n] = SymMap(1, [M, pi, sigma, A](const Word &w) {
      return extend_from_generators(*A, *A, 1, w, [&](const Word &gw) {
        auto sg = [&](int g) { return sigma->col[A->idx(g, A->R->unit)]; };
        Vec s0 = sg(gw[0]);
        Vec v = M->M->diff(s0) - sigma->apply(A->d[A->idx(gw[0], A->R->unit)]);
        for (std::size_t k = 1; k < gw.size(); ++k)
          v = M->bracket(v, sg(gw[k]));
        return pi->apply(v);
      });
    });
  return st;
}

Vec coder_derived_bracket(const LInftyStructure &s, const Word &gens) {
  const int n = (int)gens.size();
  auto L = s.L;
  SymCoalgebra S(L, std::max(n, 1));
  CoMat D = lift_module_differential(S) + coderivation_from_taylor(S, coder_from_brackets(s, n));
  std::vector<Vec> xs;
  std::vector<int> cdeg{1};
  for (int g : gens) {
    xs.push_back(S.embed(Vec::unit(L->idx(g, L->R->unit))));
    cdeg.push_back(cdeg.back() + L->gen_deg[g]);
  }
  std::function<Vec(int, const Vec &)> apply = [&](int j, const Vec &v) -> Vec {
    if (v.empty())
      return v;
    if (j == 0)
      return D.apply(v);
    const Vec &x = xs[j - 1];
    Vec out = apply(j - 1, S.mul(x, v));
    out.axpy(-sgn_pow(cdeg[j - 1] * L->gen_deg[gens[j - 1]]), S.mul(x, apply(j - 1, v)));
    return out;
  };
  return S.corestrict(apply(n, S.from_r(Vec::unit(L->R->unit))));
}

LInftyMorphism abelianization_iso(const SplittingData &sp1, const SplittingData &sp2,
                                  int arity_cap) {
  if (sp1.incl != sp2.incl)
    throw Error("abelianization: splittings of different sequences");
  if (!sp2.is_chain_map)
    throw Error("abelianization: second splitting is not a chain map");
  ConeStructure cone = cone_structure(*sp1.incl, arity_cap);
  TransferResult t1 = homotopy_transfer(cone.s, cone_contraction(cone, sp1), arity_cap);
  TransferResult t2 = homotopy_transfer(cone.s, cone_contraction(cone, sp2), arity_cap);
  return compose(t2.G, t1.F);
}

} // namespace linf
