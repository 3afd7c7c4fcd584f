#include "linf/envelope.hpp"

namespace linf {

// -------------------------------------------------------------- envelope

Envelope::Envelope(AlgPtr a, int W) : RWords(a->R(), a->L->gen_deg, W), a_(std::move(a)) {}

Vec Envelope::from_l(const Vec &l) const {
  const DgModule &L = *a_->L;
  Vec out;
  for (const auto &[v, c] : l)
    out.add(idx(L.coef_of(v), find({L.gen_of(v)})), c);
  return out;
}

Vec Envelope::from_r(const Vec &r) const {
  Vec out;
  for (const auto &[a, c] : r)
    out.add(idx(a, 0), c);
  return out;
}

Vec Envelope::rmul(int a, const Vec &x) const {
  const Dgca &R = *this->R();
  Vec out;
  for (const auto &[i, c] : x)
    for (const auto &[b, cb] : R.mul[a][coef_of(i)])
      out.add(idx(b, word_of(i)), c * cb);
  return out;
}

const Vec &Envelope::gen_word(int g, int p) const {
  auto key = std::make_pair(g, p);
  auto it = memo_.find(key);
  if (it != memo_.end())
    return it->second;
  Vec out;
  const Word &w = word(p);
  const auto &gd = gen_deg();
  if ((int)w.size() < W()) {
    if (w.empty() || g < w[0] || (g == w[0] && !odd(gd[g]))) {
      Word nw = w;
      nw.insert(nw.begin(), g);
      out = Vec::unit(idx(R()->unit, find(nw)));
    } else {
      const int pr = find(Word(w.begin() + 1, w.end()));
      const Vec rest = Vec::unit(idx(R()->unit, pr));
      if (g == w[0]) {
        out = frac(1, 2) * mult(from_l(a_->br[g][g]), rest);
      } else {
        const int j = w[0];
        Vec inner = gen_word(g, pr);
        out = sgn_pow(gd[g] * gd[j]) * lmul(j, inner);
        out += mult(from_l(a_->br[g][j]), rest);
      }
    }
  }
  return memo_.emplace(key, std::move(out)).first->second;
}

Vec Envelope::lmul(int g, const Vec &x) const {
  const Dgca &R = *this->R();
  const int dg = gen_deg()[g];
  Vec out;
  for (const auto &[i, c] : x) {
    const int a = coef_of(i), p = word_of(i);
    for (const auto &[b, cb] : a_->rho[g][a])
      out.add(idx(b, p), c * cb);
    if (weight(i) < W())
      out.axpy(c * sgn_pow(dg * R.deg[a]), rmul(a, gen_word(g, p)));
  }
  return out;
}

Vec Envelope::mult(const Vec &x, const Vec &y) const {
  Vec out;
  for (const auto &[i, c] : x) {
    Vec v = y;
    const Word &w = word(word_of(i));
    for (auto it = w.rbegin(); it != w.rend() && !v.empty(); ++it)
      v = lmul(*it, v);
    out.axpy(c, rmul(coef_of(i), v));
  }
  return out;
}

Vec Envelope::tensor(const Vec &x, const Vec &y) const {
  Vec out;
  for (const auto &[j, cj] : y) {
    Vec xr = mult(x, from_r(Vec::unit(coef_of(j))));
    for (const auto &[k, ck] : xr)
      out.add(tidx(coef_of(k), word_of(k), word_of(j)), cj * ck);
  }
  return out;
}

Vec Envelope::differential_word(int p) const {
  const DgModule &L = *a_->L;
  const Word &w = word(p);
  Vec out;
  int pre = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    Vec prefix = Vec::unit(idx(R()->unit, find(Word(w.begin(), w.begin() + k))));
    Vec suffix = Vec::unit(idx(R()->unit, find(Word(w.begin() + k + 1, w.end()))));
    Vec ql = from_l(L.d[L.idx(w[k], L.R->unit)]);
    out.axpy(sgn_pow(pre), mult(prefix, mult(ql, suffix)));
    pre += gen_deg()[w[k]];
  }
  return out;
}

CoMat envelope_differential(const std::shared_ptr<const Envelope> &U) {
  auto memo = std::make_shared<std::map<int, Vec>>();
  return CoMat(1, U->dim(), [U, memo](int i) {
    const Dgca &R = *U->R();
    const int a = U->coef_of(i), p = U->word_of(i);
    auto it = memo->find(p);
    if (it == memo->end())
      it = memo->emplace(p, U->differential_word(p)).first;
    Vec out;
    for (const auto &[b, c] : R.d[a])
      out.add(U->idx(b, p), c);
    out.axpy(sgn_pow(R.deg[a]), U->rmul(a, it->second));
    return out;
  });
}

namespace {

struct InverseState {
  CoMat m;
  std::map<int, Vec> memo;
};

const Vec &inverse_col(InverseState &st, int i) {
  auto it = st.memo.find(i);
  if (it != st.memo.end())
    return it->second;
  Vec r = st.m.col(i);
  r.add(i, -1);
  Vec out = Vec::unit(i);
  for (const auto &[j, c] : r) {
    if (j == i)
      throw Error("inverse: operator is not unipotent");
    out.axpy(-c, inverse_col(st, j));
  }
  return st.memo.emplace(i, std::move(out)).first->second;
}

} // namespace

CoMat unipotent_inverse(const CoMat &m) {
  auto st = std::make_shared<InverseState>(InverseState{m, {}});
  return CoMat(-m.degree(), m.dim(), [st](int i) { return inverse_col(*st, i); });
}

// ------------------------------------------------------------------- pbw

namespace {

Vec unit_gen(const DgModule &L, int g) { return Vec::unit(L.idx(g, L.R->unit)); }

// nabla_l applied to the generator word w of S as a derivation
Vec nabla_word(const SymCoalgebra &S, const Connection &c, int l, const Word &w) {
  const DgModule &L = *S.L();
  Vec out;
  int pre = 0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    Vec v = c.apply(unit_gen(L, l), unit_gen(L, w[j]));
    if (!v.empty()) {
      Vec t = S.mul(S.gen_word(Word(w.begin(), w.begin() + j)), S.embed(v));
      t = S.mul(t, S.gen_word(Word(w.begin() + j + 1, w.end())));
      out.axpy(sgn_pow(L.gen_deg[l] * pre), t);
    }
    pre += L.gen_deg[w[j]];
  }
  return out;
}

Word drop(const Word &w, std::size_t k) {
  Word r = w;
  r.erase(r.begin() + k);
  return r;
}

struct PbwState {
  std::shared_ptr<const SymCoalgebra> S;
  std::shared_ptr<const Envelope> U;
  Connection c;
  std::map<int, Vec> memo;
};

const Vec &pbw_word(PbwState &st, int p);

Vec pbw_vec(PbwState &st, const Vec &x) {
  Vec out;
  for (const auto &[i, c] : x)
    out.axpy(c, st.U->rmul(st.S->coef_of(i), pbw_word(st, st.S->word_of(i))));
  return out;
}

const Vec &pbw_word(PbwState &st, int p) {
  auto it = st.memo.find(p);
  if (it != st.memo.end())
    return it->second;
  const SymCoalgebra &S = *st.S;
  const Envelope &U = *st.U;
  const Word &w = S.word(p);
  const int n = (int)w.size();
  Vec out;
  if (n <= 1) {
    out = Vec::unit(U.idx(S.R()->unit, p));
  } else {
    int pre = 0;
    for (int k = 0; k < n; ++k) {
      const int l = w[k];
      Word rest = drop(w, k);
      Vec t = U.lmul(l, pbw_word(st, S.find(rest)));
      t -= pbw_vec(st, nabla_word(S, st.c, l, rest));
      out.axpy(sgn_pow(S.gen_deg()[l] * pre), t);
      pre += S.gen_deg()[l];
    }
    out *= frac(1, n);
  }
  return st.memo.emplace(p, std::move(out)).first->second;
}

} // namespace

Pbw make_pbw(const Connection &c, const std::shared_ptr<const SymCoalgebra> &S,
             const std::shared_ptr<const Envelope> &U) {
  auto st = std::make_shared<PbwState>(PbwState{S, U, c, {}});
  Pbw p;
  p.S = S;
  p.U = U;
  p.map = CoMat(0, S->dim(), [st](int i) {
    return st->U->rmul(st->S->coef_of(i), pbw_word(*st, st->S->word_of(i)));
  });
  p.inv = unipotent_inverse(p.map);
  return p;
}

Pbw make_pbw(const Connection &c, int W) {
  return make_pbw(c, std::make_shared<SymCoalgebra>(c.a->L, W),
                  std::make_shared<Envelope>(c.a, W));
}

Check check_pbw_coalgebra(const Pbw &p, int maxw) {
  Check c;
  const SymCoalgebra &S = *p.S;
  const Envelope &U = *p.U;
  for (int k = 0; k <= std::min(maxw, S.W()); ++k)
    for (int q : S.words_of_weight(k))
      for (int a = 0; a < S.rdim(); ++a) {
        const int i = S.idx(a, q);
        Vec lhs = U.coproduct(p.map.col(i));
        Vec rhs;
        for (const auto &[t, ct] : S.coproduct(i)) {
          const int b = t % S.rdim(), pq = t / S.rdim();
          const int p1 = pq / S.nwords(), p2 = pq % S.nwords();
          Vec x = p.map.col(S.idx(b, p1));
          rhs.axpy(ct, U.tensor(x, p.map.col(S.idx(S.R()->unit, p2))));
        }
        if (!(lhs == rhs)) {
          c.fail("pbw does not intertwine coproducts", S.label(i, S.L()->gen_label));
          return c;
        }
      }
  return c;
}

// -------------------------------------------------------------- kapranov

Kapranov kapranov_structure(const Connection &c, int arity_cap, int W) {
  if (arity_cap > W)
    throw Error("kapranov: arity cap exceeds the weight cap");
  Check tf = check_torsion_free(c);
  if (!tf.ok)
    throw Error("kapranov: connection has torsion at " + tf.witness);
  Kapranov k;
  k.pbw = make_pbw(c, W);
  k.QU = envelope_differential(k.pbw.U);
  k.Qpbw = compose(k.pbw.inv, compose(k.QU, k.pbw.map));
  auto st = std::make_shared<LInftyStructure>();
  st->L = c.a->L;
  st->cap = arity_cap;
  auto S = k.pbw.S;
  CoMat Q = k.Qpbw;
  for (int n = 2; n <= arity_cap; ++n)
    st->q[n] = SymMap(1, [S, Q](const Word &w) {
      const DgModule &L = *S->L();
      return extend_from_generators(L, L, 1, w, [&](const Word &g) {
        return S->corestrict(Q.col(S->idx(S->R()->unit, S->find(g))));
      });
    });
  k.structure = st;
  return k;
}

LInftyMorphism connection_change(const Kapranov &from, const Kapranov &to) {
  CoMat F = compose(to.pbw.inv, from.pbw.map);
  auto S = from.pbw.S;
  std::map<int, SymMap> f;
  for (int n = 2; n <= from.structure->cap; ++n)
    f[n] = SymMap(0, [S, F](const Word &lw) {
      const DgModule &L = *S->L();
      Word g;
      for (int v : lw)
        g.push_back(L.gen_of(v));
      return S->corestrict(F.col(S->idx(S->R()->unit, S->find(g))));
    });
  return morphism_from_generators(from.structure, to.structure, f);
}

// ---------------------------------------------------------------- cnabla

CnablaReport cnabla_check(const Connection &c, int W) {
  CnablaReport rep;
  Pbw p = make_pbw(c, W);
  const SymCoalgebra &S = *p.S;
  const Envelope &U = *p.U;
  const DgModule &L = *c.a->L;
  CoMat QU = envelope_differential(p.U);
  CoMat direct =
      compose(QU, p.map) + scaled(-1, compose(p.map, lift_module_differential(S)));
  std::map<int, Vec> memo;
  std::function<Vec(int)> rec = [&](int q) -> Vec {
    auto it = memo.find(q);
    if (it != memo.end())
      return it->second;
    const Word &w = S.word(q);
    const int n = (int)w.size();
    Vec out;
    if (n == 2) {
      out = -U.from_l(atiyah(c, unit_gen(L, w[0]), unit_gen(L, w[1])));
    } else if (n >= 3) {
      auto cvec = [&](const Vec &x) {
        Vec r;
        for (const auto &[i, ci] : x) {
          const int a = S.coef_of(i);
          r.axpy(ci * sgn_pow(S.R()->deg[a]), U.rmul(a, rec(S.word_of(i))));
        }
        return r;
      };
      std::vector<int> eps(n);
      int pre = 0;
      for (int k = 0; k < n; ++k) {
        eps[k] = sgn_pow(L.gen_deg[w[k]] * pre);
        pre += L.gen_deg[w[k]];
      }
      Vec first;
      for (int k = 0; k < n; ++k) {
        const int l = w[k];
        Word rest = drop(w, k);
        Vec t = sgn_pow(L.gen_deg[l]) * U.lmul(l, rec(S.find(rest)));
        t -= cvec(nabla_word(S, c, l, rest));
        first.axpy(eps[k], t);
      }
      Vec second;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          Word rest = drop(drop(w, j), i);
          Vec at = atiyah(c, unit_gen(L, w[j]), unit_gen(L, w[i]));
          Vec x = S.mul(S.embed(at), S.gen_word(rest));
          second.axpy(eps[i] * eps[j], p.map.apply(x));
        }
      out = frac(1, n) * first;
      out.axpy(frac(-2, n), second);
    }
    memo[q] = out;
    return out;
  };
  for (int k = 0; k <= W; ++k)
    for (int q : S.words_of_weight(k)) {
      const int i = S.idx(S.R()->unit, q);
      Vec d = direct.col(i);
      if (!d.empty())
        rep.identically_zero = false;
      const std::string wit = S.label(i, L.gen_label);
      if (k <= 1 && !d.empty())
        rep.low_weight.fail("nonzero on weight " + std::to_string(k), wit);
      if (k == 2 && !(d == rec(q)))
        rep.weight_two.fail("differs from minus the Atiyah cocycle", wit);
      if (!(d == rec(q)))
        rep.agree.fail("recursion differs from the definition", wit + " at weight " +
                                                                    std::to_string(k));
    }
  return rep;
}

Vec flat_recursion(const Kapranov &k, const Connection &c, const Word &gens) {
  const SymCoalgebra &S = *k.pbw.S;
  const DgModule &L = *c.a->L;
  const int n = (int)gens.size();
  auto lower = [&](const Vec &x) {
    if (n - 1 == 1)
      return L.diff(S.corestrict(x));
    Vec r;
    for (const auto &[i, ci] : x) {
      Word lw;
      for (int g : S.word(S.word_of(i)))
        lw.push_back(L.idx(g, L.R->unit));
      const int a = S.coef_of(i);
      r.axpy(ci * sgn_pow(S.R()->deg[a]), L.action(a, k.structure->bracket(n - 1, lw)));
    }
    return r;
  };
  Vec out;
  int pre = 0;
  for (int j = 0; j < n; ++j) {
    const int l = gens[j];
    Word rest = drop(gens, j);
    Vec t = sgn_pow(L.gen_deg[l]) * c.apply(unit_gen(L, l), lower(S.gen_word(rest)));
    t -= lower(nabla_word(S, c, l, rest));
    out.axpy(sgn_pow(L.gen_deg[l] * pre), t);
    pre += L.gen_deg[l];
  }
  out *= frac(1, n);
  return out;
}

// ------------------------------------------------------------------- tau

TauReport tau_splitting_check(const Connection &c, int W) {
  TauReport rep;
  rep.weight_cap = W;
  Kapranov k = kapranov_structure(c, 2, W + 1);
  const SymCoalgebra &S = *k.pbw.S;
  auto U = k.pbw.U;
  const DgModule &L = *c.a->L;
  auto tau = [&](const Vec &eta, int deg) {
    Pbw p = k.pbw;
    auto Sp = k.pbw.S;
    return CoMat(deg, S.dim(), [p, Sp, U, eta, deg](int i) {
      if (Sp->weight(i) >= Sp->W())
        return Vec();
      Vec v = U->mult(p.map.col(i), U->from_l(eta));
      Vec r = p.inv.apply(v);
      r *= sgn_pow(deg * Sp->deg(i));
      return r;
    });
  };
  const int one = S.idx(S.R()->unit, 0);
  for (int e = 0; e < L.dim(); ++e) {
    const Vec eta = Vec::unit(e);
    CoMat T = tau(eta, L.deg[e]);
    if (!(S.corestrict(T.col(one)) == eta))
      rep.evaluation.fail("ev_1 tau(eta) != eta", L.label[e]);
    Check cd = check_coderivation(S, T, W);
    if (!cd.ok)
      rep.coderivation.fail(cd.what, L.label[e] + " on " + cd.witness);
    CoMat lhs = commutator(k.Qpbw, T);
    CoMat rhs = tau(L.d[e], L.deg[e] + 1);
    Check ch = same_operator(S, lhs, rhs, W, "tau is not a chain map");
    if (!ch.ok)
      rep.chain_map.fail(ch.what, L.label[e] + " on " + ch.witness);
  }
  return rep;
}

} // namespace linf
