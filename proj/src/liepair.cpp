#include "linf/liepair.hpp"

#include <algorithm>

namespace linf {

Vec LiePair::q(const Vec &x) const {
  Vec out;
  for (const auto &[i, c] : x)
    if (i < m)
      out.add(i, c);
  return out;
}

Vec LiePair::bott(int i, int b) const { return q(g.bracket[m + i][b]); }

LiePair make_lie_pair(const LieAlgebra &g, const std::vector<int> &sub,
                      const std::vector<Vec> &j) {
  Check v = g.validate();
  if (!v.ok)
    throw AxiomError("lie algebra: " + v.what + " fails at " + v.witness);
  const int n = g.dim();
  std::vector<bool> in_a(n, false);
  for (int s : sub) {
    if (s < 0 || s >= n || in_a[s])
      throw Error("lie pair: bad subalgebra index " + std::to_string(s));
    in_a[s] = true;
  }
  LiePair p;
  p.sub = sub;
  p.k = (int)sub.size();
  p.m = n - p.k;
  std::vector<int> comp;
  for (int x = 0; x < n; ++x)
    if (!in_a[x])
      comp.push_back(x);
  if (!j.empty() && (int)j.size() != p.m)
    throw Error("lie pair: splitting has the wrong number of vectors");
  for (int b = 0; b < p.m; ++b) {
    Vec jb = j.empty() ? Vec::unit(comp[b]) : j[b];
    for (int x : comp)
      if (jb.at(x) != (x == comp[b] ? 1 : 0))
        throw AxiomError("lie pair: splitting is not a section of the projection at " +
                         g.label[comp[b]]);
    p.basis_in_g.push_back(jb);
    p.b_label.push_back(g.label[comp[b]]);
  }
  for (int s : sub)
    p.basis_in_g.push_back(Vec::unit(s));

  LinearSystem sys{p.basis_in_g};
  p.g.label = p.b_label;
  for (int s : sub)
    p.g.label.push_back(g.label[s]);
  p.g.bracket.assign(n, std::vector<Vec>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      auto sol = sys.solve(g.br(p.basis_in_g[x], p.basis_in_g[y]));
      if (!sol)
        throw Error("lie pair: working basis does not span");
      p.g.bracket[x][y] = *sol;
    }
  p.a.label.assign(p.g.label.begin() + p.m, p.g.label.end());
  p.a.bracket.assign(p.k, std::vector<Vec>(p.k));
  for (int x = 0; x < p.k; ++x)
    for (int y = 0; y < p.k; ++y)
      for (const auto &[z, c] : p.g.bracket[p.m + x][p.m + y]) {
        if (z < p.m)
          throw AxiomError("lie pair: subalgebra not closed at [" + p.a.label[x] + ", " +
                           p.a.label[y] + "]");
        p.a.bracket[x][y].add(z - p.m, c);
      }
  p.ce = ce_dgca(p.a);
  return p;
}

// ------------------------------------------------------------ connection

Vec LiePairConnection::apply(const Vec &x, const Vec &b) const {
  Vec out;
  for (const auto &[i, ci] : x)
    for (const auto &[k, ck] : b)
      out.axpy(ci * ck, nab[i][k]);
  return out;
}

LiePairConnection default_connection(const LiePair &p) {
  LiePairConnection c;
  c.nab.assign(p.m + p.k, std::vector<Vec>(p.m));
  for (int x = 0; x < p.m + p.k; ++x)
    for (int b = 0; b < p.m; ++b)
      c.nab[x][b] = x < p.m ? frac(1, 2) * p.q(p.g.bracket[x][b]) : p.bott(x - p.m, b);
  return c;
}

Check check_liepair_connection(const LiePair &p, const LiePairConnection &c) {
  Check ch;
  const int n = p.m + p.k;
  for (int i = 0; i < p.k; ++i)
    for (int b = 0; b < p.m; ++b)
      if (!(c.nab[p.m + i][b] == p.bott(i, b)))
        ch.fail("restriction to a is not the Bott connection",
                "(" + p.g.label[p.m + i] + ", " + p.b_label[b] + ")");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      Vec t = c.apply(Vec::unit(x), p.q(Vec::unit(y))) - c.apply(Vec::unit(y), p.q(Vec::unit(x))) -
              p.q(p.g.bracket[x][y]);
      if (!t.empty())
        ch.fail("connection has torsion", "(" + p.g.label[x] + ", " + p.g.label[y] + ")");
    }
  return ch;
}

// -------------------------------------------------------------- kapranov

namespace {

Vec unit_of(const DgcaPtr &R) { return Vec::unit(R->unit); }

// binary bracket at (a_i; b1, b2) from the connection
Vec r2_value(const LiePair &p, const LiePairConnection &c, int i, int b1, int b2) {
  Vec a = Vec::unit(p.m + i);
  Vec out = c.apply(a, c.nab[b1][b2]);
  out -= c.apply(Vec::unit(b1), c.nab[p.m + i][b2]);
  out -= c.apply(p.g.bracket[p.m + i][b1], Vec::unit(b2));
  return out;
}

struct LiePairState {
  std::shared_ptr<const SymCoalgebra> S;
  std::shared_ptr<const Envelope> Ug;
  LiePair p;
  LiePairConnection c;
  std::map<std::pair<int, int>, Vec> gmul_memo;
  std::map<int, Vec> pbw_memo;
};

Vec quotient_of(const LiePairState &st, int a, const Vec &X) {
  const SymCoalgebra &S = *st.S;
  Vec out;
  for (const auto &[i, c] : X) {
    const Word &w = st.Ug->word(st.Ug->word_of(i));
    if (std::any_of(w.begin(), w.end(), [&](int x) { return x >= st.p.m; }))
      continue;
    const int q = S.find(w);
    if (q >= 0)
      out.add(S.idx(a, q), c);
  }
  return out;
}

const Vec &gmul_word(LiePairState &st, int x, int p) {
  auto key = std::make_pair(x, p);
  auto it = st.gmul_memo.find(key);
  if (it != st.gmul_memo.end())
    return it->second;
  const Envelope &U = *st.Ug;
  Vec lift = Vec::unit(U.idx(0, U.find(st.S->word(p))));
  Vec v = quotient_of(st, st.S->R()->unit, U.lmul(x, lift));
  return st.gmul_memo.emplace(key, std::move(v)).first->second;
}

Vec gmul_vec(LiePairState &st, int x, const Vec &y) {
  const SymCoalgebra &S = *st.S;
  Vec out;
  for (const auto &[i, c] : y)
    for (const auto &[t, ct] : gmul_word(st, x, S.word_of(i)))
      out.add(S.idx(S.coef_of(i), S.word_of(t)), c * ct);
  return out;
}

// nabla_{j b} on a pure B word, as a derivation
Vec nabla_bword(const LiePairState &st, int b, const Word &w) {
  const SymCoalgebra &S = *st.S;
  Vec out;
  for (std::size_t t = 0; t < w.size(); ++t)
    for (const auto &[z, c] : st.c.nab[b][w[t]]) {
      Word v = w;
      v[t] = z;
      auto [s, q] = S.element(S.R()->unit, v);
      if (q >= 0)
        out.add(q, s * c);
    }
  return out;
}

const Vec &pbw_bword(LiePairState &st, int p);

Vec pbw_bvec(LiePairState &st, const Vec &x) {
  const SymCoalgebra &S = *st.S;
  Vec out;
  for (const auto &[i, c] : x)
    for (const auto &[t, ct] : pbw_bword(st, S.word_of(i)))
      out.add(S.idx(S.coef_of(i), S.word_of(t)), c * ct);
  return out;
}

const Vec &pbw_bword(LiePairState &st, int p) {
  auto it = st.pbw_memo.find(p);
  if (it != st.pbw_memo.end())
    return it->second;
  const SymCoalgebra &S = *st.S;
  const Word &w = S.word(p);
  const int n = (int)w.size();
  Vec out;
  if (n <= 1) {
    out = Vec::unit(S.idx(S.R()->unit, p));
  } else {
    for (int k = 0; k < n; ++k) {
      Word rest = w;
      rest.erase(rest.begin() + k);
      Vec t = gmul_vec(st, w[k], pbw_bword(st, S.find(rest)));
      t -= pbw_bvec(st, nabla_bword(st, w[k], rest));
      out += t;
    }
    out *= frac(1, n);
  }
  return st.pbw_memo.emplace(p, std::move(out)).first->second;
}

} // namespace

Vec LiePairKapranov::quotient(int a, const Vec &X) const {
  LiePairState st{S, Ug, pair, nab, {}, {}};
  return quotient_of(st, a, X);
}

Vec LiePairKapranov::gmul(int x, const Vec &y) const {
  LiePairState st{S, Ug, pair, nab, {}, {}};
  return gmul_vec(st, x, y);
}

LiePairKapranov kapranov_liepair(const LiePair &p, const LiePairConnection &c, int arity_cap,
                                 int W) {
  if (arity_cap > W)
    throw Error("kapranov: arity cap exceeds the weight cap");
  Check cc = check_liepair_connection(p, c);
  if (!cc.ok)
    throw AxiomError("lie pair connection: " + cc.what + " at " + cc.witness);
  LiePairKapranov k;
  k.pair = p;
  k.nab = c;
  const DgcaPtr &R = p.ce;
  const int rd = R->dim();
  std::vector<Vec> gd(p.m);
  for (int b = 0; b < p.m; ++b)
    for (int i = 0; i < p.k; ++i)
      for (const auto &[z, cz] : p.bott(i, b))
        gd[b].add(z * rd + R->gens[i], cz);
  k.omega = free_module(R, p.b_label, std::vector<int>(p.m, 0), gd);
  // one extra weight so that a-letters can be moved across weight-W words
  k.Ug = std::make_shared<Envelope>(from_dgla(dgla(dgca_field(), p.g)), W + 1);
  k.S = std::make_shared<SymCoalgebra>(k.omega, W);

  auto st = std::make_shared<LiePairState>(LiePairState{k.S, k.Ug, p, c, {}, {}});
  k.pbw = CoMat(0, k.S->dim(), [st](int i) {
    const SymCoalgebra &S = *st->S;
    Vec out;
    for (const auto &[t, ct] : pbw_bword(*st, S.word_of(i)))
      out.add(S.idx(S.coef_of(i), S.word_of(t)), ct);
    return out;
  });
  k.pbw_inv = unipotent_inverse(k.pbw);
  k.dA = CoMat(1, k.S->dim(), [st](int i) {
    const SymCoalgebra &S = *st->S;
    const Dgca &r = *S.R();
    const int a = S.coef_of(i), q = S.word_of(i);
    Vec out;
    for (const auto &[b, cb] : r.d[a])
      out.add(S.idx(b, q), cb);
    for (int x = 0; x < st->p.k; ++x)
      for (const auto &[b, cb] : r.mul[r.gens[x]][a])
        out.axpy(cb, gmul_vec(*st, st->p.m + x, Vec::unit(S.idx(b, q))));
    return out;
  });
  k.dlight = compose(k.pbw_inv, compose(k.dA, k.pbw));

  auto s = std::make_shared<LInftyStructure>();
  s->L = k.omega;
  s->cap = arity_cap;
  auto S = k.S;
  CoMat D = k.dlight;
  for (int n = 2; n <= arity_cap; ++n)
    s->q[n] = SymMap(1, [S, D](const Word &w) {
      const DgModule &L = *S->L();
      return extend_from_generators(L, L, 1, w, [&](const Word &g) {
        return S->corestrict(D.col(S->idx(S->R()->unit, S->find(g))));
      });
    });
  k.structure = s;
  return k;
}

Vec liepair_r2(const LiePairKapranov &k, int b1, int b2) {
  const LiePair &p = k.pair;
  const DgModule &om = *k.omega;
  Vec out;
  for (int i = 0; i < p.k; ++i)
    for (const auto &[z, c] : r2_value(p, k.nab, i, b1, b2))
      out.add(om.idx(z, p.ce->gens[i]), c);
  return out;
}

namespace {

// x (x)_R y on the tensor square of S, for words of degree zero
Vec tensor_s(const SymCoalgebra &S, const Vec &x, const Vec &y) {
  const Dgca &r = *S.R();
  Vec out;
  for (const auto &[i, ci] : x)
    for (const auto &[j, cj] : y)
      for (const auto &[a, ca] : r.mul[S.coef_of(i)][S.coef_of(j)])
        out.add(S.tidx(a, S.word_of(i), S.word_of(j)), ci * cj * ca);
  return out;
}

// Delta F = (F (x) F) Delta for F : src -> tgt between truncated coalgebras
Check check_coalgebra_map(const SymCoalgebra &src, const SymCoalgebra &tgt, const CoMat &F,
                          int maxw, const std::string &what) {
  Check ch;
  for (int w = 0; w <= std::min(maxw, src.W()); ++w)
    for (int q : src.words_of_weight(w))
      for (int a = 0; a < src.rdim(); ++a) {
        const int i = src.idx(a, q);
        Vec lhs = tgt.coproduct(F.col(i));
        Vec rhs;
        for (const auto &[t, ct] : src.coproduct(i)) {
          const int b = t % src.rdim(), pq = t / src.rdim();
          const int p1 = pq / src.nwords(), p2 = pq % src.nwords();
          rhs.axpy(ct, tensor_s(tgt, F.col(src.idx(b, p1)),
                                F.col(src.idx(src.R()->unit, p2))));
        }
        if (!(lhs == rhs)) {
          ch.fail(what, src.label(i, src.L()->gen_label));
          return ch;
        }
      }
  return ch;
}

// Morphism with Taylor coefficients the corestrictions of a coalgebra map F
LInftyMorphism morphism_of(const SPtr &src, const SPtr &tgt,
                           const std::shared_ptr<const SymCoalgebra> &SS,
                           const std::shared_ptr<const SymCoalgebra> &ST, const CoMat &F,
                           int cap) {
  LInftyMorphism M;
  M.src = src;
  M.tgt = tgt;
  M.cap = cap;
  ModPtr L = src->L, Om = tgt->L;
  for (int n = 1; n <= cap; ++n)
    M.f[n] = SymMap(0, [SS, ST, F, L, Om](const Word &w) {
      return extend_from_generators(*L, *Om, 0, w, [&](const Word &g) {
        return ST->corestrict(F.col(SS->idx(SS->R()->unit, SS->find(g))));
      });
    });
  return M;
}

} // namespace

LInftyMorphism liepair_change(const LiePairKapranov &from, const LiePairKapranov &to) {
  if (from.pair.sub != to.pair.sub || from.pair.g.dim() != to.pair.g.dim() ||
      from.S->W() != to.S->W())
    throw Error("lie pair change: structures belong to different pairs or truncations");
  LinearSystem sys{to.pair.basis_in_g};
  std::vector<Vec> coords;
  for (const auto &v : from.pair.basis_in_g)
    coords.push_back(*sys.solve(v));
  auto SF = from.S, ST = to.S;
  auto U = to.Ug;
  const int m = to.pair.m;
  // class of j'(b_1) ... j'(b_n) in the normal forms of the target
  CoMat T(0, SF->dim(), [SF, ST, U, coords, m](int i) {
    const Word &w = SF->word(SF->word_of(i));
    Vec X = Vec::unit(U->idx(0, U->find({})));
    for (int t = (int)w.size() - 1; t >= 0; --t) {
      Vec Y;
      for (const auto &[y, c] : coords[w[t]])
        Y.axpy(c, U->lmul(y, X));
      X = std::move(Y);
    }
    Vec out;
    for (const auto &[u, c] : X) {
      const Word &uw = U->word(U->word_of(u));
      if (std::any_of(uw.begin(), uw.end(), [&](int x) { return x >= m; }))
        continue;
      if (int q = ST->find(uw); q >= 0)
        out.add(ST->idx(SF->coef_of(i), q), c);
    }
    return out;
  });
  CoMat F = compose(to.pbw_inv, compose(T, from.pbw));
  return morphism_of(from.structure, to.structure, SF, ST, F,
                     std::min(from.structure->cap, to.structure->cap));
}

Check check_liepair_pbw(const LiePairKapranov &k, int maxw) {
  return check_coalgebra_map(*k.S, *k.S, k.pbw, maxw, "pbw does not intertwine coproducts");
}

// ----------------------------------------------------------- atiyah class

LiePairAtiyah liepair_atiyah_class(const LiePair &p, const LiePairConnection &c) {
  Check cc = check_liepair_connection(p, c);
  if (!cc.ok)
    throw AxiomError("lie pair connection: " + cc.what + " at " + cc.witness);
  const DgcaPtr &R = p.ce;
  const Dgca &r = *R;
  const int rd = r.dim();
  // V = S^2 B^v (x) B; a basis element sends the pair (b1 <= b2) to b
  std::vector<std::pair<int, int>> pairs;
  std::map<std::pair<int, int>, int> pidx;
  for (int b1 = 0; b1 < p.m; ++b1)
    for (int b2 = b1; b2 < p.m; ++b2) {
      pidx[{b1, b2}] = (int)pairs.size();
      pairs.push_back({b1, b2});
    }
  const int vdim = (int)pairs.size() * p.m;
  auto vidx = [&](int pr, int b) { return pr * p.m + b; };
  auto value = [&](const Vec &phi, int c1, int c2) {
    Vec out;
    const int pr = pidx.at({std::min(c1, c2), std::max(c1, c2)});
    for (int b = 0; b < p.m; ++b)
      if (Q x = phi.at(vidx(pr, b)); x != 0)
        out.add(b, x);
    return out;
  };
  auto value_vecs = [&](const Vec &phi, const Vec &u, const Vec &v) {
    Vec out;
    for (const auto &[i, ci] : u)
      for (const auto &[j, cj] : v)
        out.axpy(ci * cj, value(phi, i, j));
    return out;
  };
  // (a_i . phi)(c1, c2) = nabla phi(c1, c2) - phi(nabla c1, c2) - phi(c1, nabla c2)
  auto act = [&](int i, const Vec &phi) {
    Vec out;
    const Vec a = Vec::unit(p.m + i);
    for (std::size_t pr = 0; pr < pairs.size(); ++pr) {
      auto [c1, c2] = pairs[pr];
      Vec v = c.apply(a, value(phi, c1, c2));
      v -= value_vecs(phi, c.nab[p.m + i][c1], Vec::unit(c2));
      v -= value_vecs(phi, Vec::unit(c1), c.nab[p.m + i][c2]);
      for (const auto &[b, cb] : v)
        out.add(vidx((int)pr, b), cb);
    }
    return out;
  };
  // cochains: basis (r_a, v) at index v * rd + a; d(w (x) phi) = dw (x) phi + sum xi^i w (x) a_i phi
  std::vector<std::vector<Vec>> actions(p.k, std::vector<Vec>(vdim));
  for (int i = 0; i < p.k; ++i)
    for (int v = 0; v < vdim; ++v)
      actions[i][v] = act(i, Vec::unit(v));
  auto d = [R, rd, k = p.k, actions](const Vec &x) {
    const Dgca &r = *R;
    Vec out;
    for (const auto &[u, cu] : x) {
      const int a = u % rd, v = u / rd;
      for (const auto &[b, cb] : r.d[a])
        out.add(v * rd + b, cu * cb);
      for (int i = 0; i < k; ++i)
        for (const auto &[b, cb] : r.mul[r.gens[i]][a])
          for (const auto &[w, cw] : actions[i][v])
            out.add(w * rd + b, cu * cb * cw);
    }
    return out;
  };

  LiePairAtiyah rep;
  rep.d = d;
  rep.dim = vdim * rd;
  for (int a = 0; a < rd; ++a) {
    if (r.deg[a] == 0)
      rep.dim_c0 += vdim;
    else if (r.deg[a] == 1)
      rep.dim_c1 += vdim;
    else if (r.deg[a] == 2)
      rep.dim_c2 += vdim;
  }
  for (int i = 0; i < p.k; ++i)
    for (std::size_t pr = 0; pr < pairs.size(); ++pr)
      for (const auto &[b, cb] : r2_value(p, c, i, pairs[pr].first, pairs[pr].second))
        rep.cocycle.add(vidx((int)pr, b) * rd + r.gens[i], cb);
  rep.is_cocycle = d(rep.cocycle).empty();
  LinearSystem sys;
  for (int v = 0; v < vdim; ++v)
    sys.cols.push_back(d(Vec::unit(v * rd + r.unit)));
  auto sol = sys.solve(rep.cocycle);
  rep.vanishes = rep.is_cocycle && sol.has_value();
  if (rep.vanishes)
    for (const auto &[v, cv] : *sol)
      rep.primitive.add(v * rd + r.unit, cv);
  return rep;
}

// -------------------------------------------------------------- pullback

Pullback pullback_algebroid(const LiePair &p) {
  const DgcaPtr &R = p.ce;
  const int rd = R->dim(), n = p.m + p.k;
  Pullback pb;
  pb.nd = p.k;
  std::vector<std::string> lab;
  std::vector<int> deg;
  std::vector<std::vector<Vec>> rho;
  for (int k = 0; k < p.k; ++k) {
    lab.push_back("d/d" + R->label[R->gens[k]]);
    deg.push_back(-1);
    std::vector<Vec> on(p.k);
    on[k] = unit_of(R);
    rho.push_back(derivation_from_generators(*R, -1, on));
  }
  for (int x = 0; x < n; ++x) {
    lab.push_back("E." + p.g.label[x]);
    deg.push_back(0);
    rho.push_back(std::vector<Vec>(rd));
  }
  std::vector<std::vector<Vec>> br(p.k + n, std::vector<Vec>(p.k + n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (const auto &[z, c] : p.g.bracket[x][y])
        br[p.k + x][p.k + y].add((p.k + z) * rd + R->unit, c);
  for (int k = 0; k < p.k; ++k)
    for (const auto &[b, c] : R->d[R->gens[k]])
      pb.s.add(k * rd + b, c);
  for (int i = 0; i < p.k; ++i)
    pb.s.add((p.k + p.m + i) * rd + R->gens[i], 1);
  pb.alg = algebroid_with_section(R, lab, deg, br, rho, pb.s);
  return pb;
}

// ------------------------------------------------------------ comparison

ComparisonReport compare_kapranov(const LiePair &p, const LiePairConnection &c, int arity_cap,
                                  int W) {
  ComparisonReport rep;
  Pullback pb = pullback_algebroid(p);
  Kapranov KP = kapranov_structure(half_bracket_connection(pb.alg), arity_cap, W);
  LiePairKapranov KL = kapranov_liepair(p, c, arity_cap, W);
  ModPtr L = pb.alg->L, Om = KL.omega;
  const DgcaPtr &R = p.ce;

  std::vector<Vec> img(L->ngen());
  for (int x = 0; x < p.m; ++x)
    img[pb.nd + x] = Vec::unit(Om->idx(x, R->unit));
  ModuleMap P0 = map_from_generators(L, Om, 0, img);
  rep.p0_chain = P0.check_chain();
  rep.p0_quasi_iso = check_quasi_iso(P0);

  auto U = KP.pbw.U;
  auto SB = KL.S;
  const int nd = pb.nd, m = p.m;
  CoMat PU(0, U->dim(), [U, SB, nd, m](int i) {
    Word w = U->word(U->word_of(i));
    for (int &x : w) {
      if (x < nd || x - nd >= m)
        return Vec();
      x -= nd;
    }
    return Vec::unit(SB->idx(U->coef_of(i), SB->find(w)));
  });

  for (int v = 0; v < L->dim(); ++v) {
    Vec lhs = PU.col(U->idx(L->coef_of(v), U->find({L->gen_of(v)})));
    if (!(lhs == SB->embed(P0.col[v])))
      rep.inclusion_square.fail("projection does not restrict to P0", L->label[v]);
  }
  for (int i = 0; i < U->dim(); ++i) {
    Vec lhs = PU.apply(KP.QU.col(i)), rhs = KL.dA.apply(PU.col(i));
    if (!(lhs == rhs)) {
      rep.pu_chain.fail("projection does not intertwine differentials",
                        U->label(i, L->gen_label));
      break;
    }
  }
  CoMat F = compose(KL.pbw_inv, compose(PU, KP.pbw.map));
  rep.pu_coalgebra = check_coalgebra_map(*KP.pbw.S, *SB, F, W,
                                         "projection is not a coalgebra map");

  LInftyMorphism M = morphism_of(KP.structure, KL.structure, KP.pbw.S, SB, F, arity_cap);
  rep.morphism = check_morphism(M, arity_cap);
  return rep;
}

} // namespace linf
