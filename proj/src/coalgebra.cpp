#include "linf/coalgebra.hpp"

#include <algorithm>

namespace linf {

// ------------------------------------------------------------------ RWords

RWords::RWords(DgcaPtr R, std::vector<int> gen_deg, int W)
    : R_(std::move(R)), gdeg_(std::move(gen_deg)), W_(W) {
  by_weight_.resize(W + 1);
  for (int k = 0; k <= W; ++k)
    for (Word &w : sym_words(ngen(), k, gdeg_)) {
      index_[w] = (int)words_.size();
      by_weight_[k].push_back((int)words_.size());
      wdeg_.push_back(word_degree(w, gdeg_));
      words_.push_back(std::move(w));
    }
}

int RWords::find(const Word &w) const {
  auto it = index_.find(w);
  return it == index_.end() ? -1 : it->second;
}

std::pair<int, int> RWords::element(int a, Word w) const {
  if ((int)w.size() > W_)
    return {0, -1};
  int s = normalize_word(w, gdeg_);
  if (!s)
    return {0, -1};
  return {s, idx(a, find(w))};
}

Vec RWords::project_weight(const Vec &x, int k) const {
  Vec out;
  for (const auto &[i, c] : x)
    if (weight(i) == k)
      out.add(i, c);
  return out;
}

int RWords::max_weight(const Vec &x) const {
  int m = -1;
  for (const auto &kv : x)
    m = std::max(m, weight(kv.first));
  return m;
}

std::string RWords::label(int i, const std::vector<std::string> &gl) const {
  std::string s;
  int a = coef_of(i);
  const Word &w = word(word_of(i));
  if (a != R_->unit || w.empty())
    s = R_->label[a];
  for (int g : w)
    s += (s.empty() ? "" : ".") + gl[g];
  return s;
}

// ------------------------------------------------------------ SymCoalgebra

SymCoalgebra::SymCoalgebra(ModPtr L, int W) : RWords(L->R, L->gen_deg, W), L_(std::move(L)) {
  if (!L_->free)
    throw Error("symmetric coalgebra: module must be free over R");
}

Vec SymCoalgebra::mul(const Vec &x, const Vec &y) const {
  Vec out;
  const Dgca &R = *this->R();
  Word merged;
  for (const auto &[i, ci] : x) {
    int a = coef_of(i);
    const Word &u = word(word_of(i));
    for (const auto &[j, cj] : y) {
      int b = coef_of(j);
      const Word &v = word(word_of(j));
      if ((int)(u.size() + v.size()) > W())
        continue;
      int s = merge_words(u, v, merged, gen_deg());
      if (!s)
        continue;
      s *= sgn_pow(word_deg(word_of(i)) * R.deg[b]);
      int p = find(merged);
      for (const auto &[c, cr] : R.mul[a][b])
        out.add(idx(c, p), ci * cj * cr * s);
    }
  }
  return out;
}

Vec SymCoalgebra::embed(const Vec &l) const {
  Vec out;
  for (const auto &[v, c] : l)
    out.add(idx(L_->coef_of(v), find({L_->gen_of(v)})), c);
  return out;
}

Vec SymCoalgebra::corestrict(const Vec &x) const {
  Vec out;
  for (const auto &[i, c] : x) {
    const Word &w = word(word_of(i));
    if (w.size() == 1)
      out.add(L_->idx(w[0], coef_of(i)), c);
  }
  return out;
}

Vec SymCoalgebra::from_r(const Vec &r) const {
  Vec out;
  for (const auto &[a, c] : r)
    out.add(idx(a, 0), c);
  return out;
}

Vec SymCoalgebra::gen_word(const Word &gens) const {
  auto [s, i] = element(R()->unit, gens);
  return i < 0 ? Vec() : Vec::unit(i, s);
}

Vec SymCoalgebra::lword(const Word &lw) const {
  Vec out = from_r(Vec::unit(R()->unit));
  for (int v : lw)
    out = mul(out, embed(Vec::unit(v)));
  return out;
}

Vec RWords::coproduct(int i) const {
  Vec out;
  int a = coef_of(i);
  const Word &w = word(word_of(i));
  const int n = (int)w.size();
  std::vector<int> d(n);
  for (int t = 0; t < n; ++t)
    d[t] = gen_deg()[w[t]];
  for (int k = 0; k <= n; ++k) {
    std::vector<std::vector<int>> sh;
    if (k == 0 || k == n) {
      std::vector<int> id(n);
      for (int t = 0; t < n; ++t)
        id[t] = t;
      sh.push_back(id);
    } else {
      sh = shuffles({k, n - k});
    }
    for (const auto &p : sh) {
      Word u, v;
      for (int t = 0; t < k; ++t)
        u.push_back(w[p[t]]);
      for (int t = k; t < n; ++t)
        v.push_back(w[p[t]]);
      out.add(tidx(a, find(u), find(v)), koszul_sign(d, p));
    }
  }
  return out;
}

Vec RWords::coproduct(const Vec &x) const {
  Vec out;
  for (const auto &[i, c] : x)
    out.axpy(c, coproduct(i));
  return out;
}

// ------------------------------------------------------------------- CoMat

CoMat::CoMat(int degree, int dim, std::function<Vec(int)> col)
    : degree_(degree), dim_(dim), impl_(std::make_shared<Impl>()) {
  impl_->fn = std::move(col);
}

const Vec &CoMat::col(int i) const {
  auto it = impl_->cache.find(i);
  if (it != impl_->cache.end())
    return it->second;
  Vec v = impl_->fn(i);
  return impl_->cache.emplace(i, std::move(v)).first->second;
}

Vec CoMat::apply(const Vec &x) const {
  Vec out;
  for (const auto &[i, c] : x)
    out.axpy(c, col(i));
  return out;
}

CoMat compose(const CoMat &a, const CoMat &b) {
  return CoMat(a.degree() + b.degree(), a.dim(), [a, b](int i) { return a.apply(b.col(i)); });
}

CoMat operator+(const CoMat &a, const CoMat &b) {
  if (a.degree() != b.degree())
    throw Error("operator sum: degree mismatch");
  return CoMat(a.degree(), a.dim(), [a, b](int i) { return a.col(i) + b.col(i); });
}

CoMat scaled(const Q &c, const CoMat &a) {
  return CoMat(a.degree(), a.dim(), [c, a](int i) { return c * a.col(i); });
}

CoMat commutator(const CoMat &a, const CoMat &b) {
  int s = sgn_pow(a.degree() * b.degree());
  return CoMat(a.degree() + b.degree(), a.dim(), [a, b, s](int i) {
    Vec v = a.apply(b.col(i));
    v.axpy(-s, b.apply(a.col(i)));
    return v;
  });
}

// ------------------------------------------------------------ coderivations

Coder Coder::times(const DgModule &L, int a) const {
  Coder c{degree, {}};
  for (const auto &[w, v] : taylor) {
    Vec x = L.action(a, v);
    if (!x.empty())
      c.taylor[w] = x;
  }
  return c;
}

Coder coder_from_brackets(const LInftyStructure &s, int cap) {
  Coder q{1, {}};
  const DgModule &L = *s.L;
  for (int n = 2; n <= cap; ++n)
    for (Word w : sym_words(L.ngen(), n, L.gen_deg)) {
      Word lw = w;
      for (int &g : lw)
        g = L.idx(g, L.R->unit);
      Vec v = s.bracket(n, lw);
      if (!v.empty())
        q.taylor[w] = v;
    }
  return q;
}

Coder coder_sigma(const DgModule &L, const Vec &x) {
  Coder c;
  c.degree = x.empty() ? 0 : L.deg[x.begin()->first];
  if (!x.empty())
    c.taylor[{}] = x;
  return c;
}

// Value of the coderivation with Taylor coefficients q on the generator word w.
static Vec coder_on_word(const SymCoalgebra &S, const Coder &q, const Word &w) {
  const int n = (int)w.size();
  std::vector<int> d(n);
  for (int t = 0; t < n; ++t)
    d[t] = S.gen_deg()[w[t]];
  Vec out;
  for (int j = 0; j <= n; ++j) {
    std::vector<std::vector<int>> sh;
    if (j == 0 || j == n) {
      std::vector<int> id(n);
      for (int t = 0; t < n; ++t)
        id[t] = t;
      sh.push_back(id);
    } else {
      sh = shuffles({j, n - j});
    }
    for (const auto &p : sh) {
      Word first, rest;
      for (int t = 0; t < j; ++t)
        first.push_back(w[p[t]]);
      for (int t = j; t < n; ++t)
        rest.push_back(w[p[t]]);
      auto it = q.taylor.find(first);
      if (it == q.taylor.end())
        continue;
      Vec v = S.mul(S.embed(it->second), S.gen_word(rest));
      out.axpy(koszul_sign(d, p), v);
    }
  }
  return out;
}

CoMat coderivation_from_taylor(const SymCoalgebra &S, const Coder &q) {
  for (const auto &[w, v] : q.taylor)
    for (const auto &[x, c] : v)
      if (S.L()->deg[x] != word_degree(w, S.gen_deg()) + q.degree)
        throw Error("coderivation: Taylor coefficient of wrong degree at " + word_str(w));
  auto Sp = std::make_shared<SymCoalgebra>(S);
  auto memo = std::make_shared<std::map<int, Vec>>();
  return CoMat(q.degree, S.dim(), [Sp, q, memo](int i) {
    const SymCoalgebra &S = *Sp;
    int p = S.word_of(i), a = S.coef_of(i);
    auto it = memo->find(p);
    if (it == memo->end())
      it = memo->emplace(p, coder_on_word(S, q, S.word(p))).first;
    if (a == S.R()->unit)
      return it->second;
    Vec v = S.mul(S.from_r(Vec::unit(a)), it->second);
    v *= sgn_pow(q.degree * S.R()->deg[a]);
    return v;
  });
}

CoMat lift_module_differential(const SymCoalgebra &S) {
  const DgModule &L = *S.L();
  Coder q{1, {}};
  for (int g = 0; g < L.ngen(); ++g) {
    const Vec &dg = L.d[L.idx(g, L.R->unit)];
    if (!dg.empty())
      q.taylor[{g}] = dg;
  }
  CoMat lin = coderivation_from_taylor(S, q);
  auto Sp = std::make_shared<SymCoalgebra>(S);
  return CoMat(1, S.dim(), [Sp, lin](int i) {
    const SymCoalgebra &S = *Sp;
    int p = S.word_of(i), a = S.coef_of(i);
    const Dgca &R = *S.R();
    Vec out = S.mul(S.from_r(R.d[a]), Vec::unit(S.idx(R.unit, p)));
    Vec rest = S.mul(S.from_r(Vec::unit(a)), lin.col(S.idx(R.unit, p)));
    out.axpy(sgn_pow(R.deg[a]), rest);
    return out;
  });
}

Coder corestrict(const SymCoalgebra &S, const CoMat &m, int maxw) {
  Coder q{m.degree(), {}};
  for (int k = 0; k <= std::min(maxw, S.W()); ++k)
    for (int p : S.words_of_weight(k)) {
      Vec v = S.corestrict(m.col(S.idx(S.R()->unit, p)));
      if (!v.empty())
        q.taylor[S.word(p)] = v;
    }
  return q;
}

Check check_coderivation(const SymCoalgebra &S, const CoMat &m, int maxw) {
  Check c;
  const Dgca &R = *S.R();
  const int P = S.nwords();
  auto wt = [&](int p) { return (int)S.word(p).size(); };
  for (int k = 0; k <= std::min(maxw, S.W()); ++k)
    for (int p : S.words_of_weight(k))
      for (int a = 0; a < R.dim(); ++a) {
        int i = S.idx(a, p);
        Vec lhs = S.coproduct(m.col(i));
        Vec rhs;
        for (const auto &[t, ct] : S.coproduct(i)) {
          int b = t % R.dim(), pq = t / R.dim();
          int p1 = pq / P, p2 = pq % P;
          // (m (x) 1)
          for (const auto &[j, cj] : m.col(S.idx(b, p1)))
            if (wt(S.word_of(j)) + wt(p2) <= S.W())
              rhs.add(S.tidx(S.coef_of(j), S.word_of(j), p2), ct * cj);
          // (1 (x) m)
          int s1 = sgn_pow(m.degree() * (R.deg[b] + S.word_deg(p1)));
          for (const auto &[j, cj] : m.col(S.idx(R.unit, p2))) {
            if (wt(p1) + wt(S.word_of(j)) > S.W())
              continue;
            int e = S.coef_of(j);
            int s2 = sgn_pow(S.word_deg(p1) * R.deg[e]);
            for (const auto &[f, cf] : R.mul[b][e])
              rhs.add(S.tidx(f, p1, S.word_of(j)), ct * cj * cf * s1 * s2);
          }
        }
        if (!(lhs == rhs)) {
          c.fail("coderivation diagram", S.label(i, S.L()->gen_label));
          return c;
        }
      }
  return c;
}

Check same_operator(const SymCoalgebra &S, const CoMat &a, const CoMat &b, int maxw,
                    const std::string &what) {
  Check c;
  for (int k = 0; k <= std::min(maxw, S.W()); ++k)
    for (int p : S.words_of_weight(k))
      for (int r = 0; r < S.rdim(); ++r) {
        int i = S.idx(r, p);
        if (!(a.col(i) == b.col(i))) {
          c.fail(what, S.label(i, S.L()->gen_label));
          return c;
        }
      }
  return c;
}

McReport mc_check(const LInftyStructure &s, int W) {
  McReport rep;
  SymCoalgebra S(s.L, W);
  CoMat D = lift_module_differential(S) + coderivation_from_taylor(S, coder_from_brackets(s, W));
  CoMat D2 = compose(D, D);
  for (int k = 0; k <= W; ++k)
    for (int p : S.words_of_weight(k)) {
      int i = S.idx(S.R()->unit, p);
      Vec v = D2.col(i);
      if (!v.empty()) {
        rep.ok = false;
        rep.weight = k;
        rep.witness = S.label(i, s.L->gen_label);
        return rep;
      }
    }
  return rep;
}

// ------------------------------------------------------------ linearization

namespace {

struct Family {
  std::vector<Coder> phi; // one per generator
};

// Taylor coefficient at the generator word p of [D, Phi_i] - Phi(d g_i).
Vec residual(const SymCoalgebra &S, const CoMat &D, const Family &F,
             const std::vector<CoMat> &mats, int i, int p) {
  const DgModule &L = *S.L();
  Vec w = Vec::unit(S.idx(S.R()->unit, p));
  const CoMat &Phi = mats[i];
  Vec out;
  if (Phi.valid()) {
    out = S.corestrict(D.apply(Phi.apply(w)));
    out.axpy(-sgn_pow(Phi.degree()), S.corestrict(Phi.apply(D.apply(w))));
  }
  for (const auto &[v, c] : L.d[L.idx(i, L.R->unit)]) {
    const Coder &h = F.phi[L.gen_of(v)];
    auto it = h.taylor.find(S.word(p));
    if (it != h.taylor.end())
      out.axpy(-c, L.action(L.coef_of(v), it->second));
  }
  return out;
}

std::vector<CoMat> matrices(const SymCoalgebra &S, const Family &F) {
  std::vector<CoMat> m;
  for (const Coder &c : F.phi)
    m.push_back(c.taylor.empty() ? CoMat() : coderivation_from_taylor(S, c));
  return m;
}

} // namespace

ObstructionCertificate linearization_obstruction(const LInftyStructure &s, int W) {
  ObstructionCertificate cert;
  cert.weight_cap = W;
  cert.scope = "splitting equations solved on generator words of weight <= " +
               std::to_string(W - 1) + " (brackets of arity <= " + std::to_string(W) + ")";
  const DgModule &L = *s.L;
  SymCoalgebra S(s.L, W);
  CoMat D = lift_module_differential(S) + coderivation_from_taylor(S, coder_from_brackets(s, W));
  const int G = L.ngen(), N = L.dim(), P = S.nwords();

  Family sigma;
  for (int i = 0; i < G; ++i)
    sigma.phi.push_back(coder_sigma(L, Vec::unit(L.idx(i, L.R->unit))));
  std::vector<CoMat> smats = matrices(S, sigma);

  auto eq_index = [&](int i, int p, int v) { return (i * P + p) * N + v; };
  std::vector<int> eq_weight;
  Vec rhs;
  std::vector<std::tuple<int, int, int>> unknowns;
  std::vector<Vec> cols;
  for (int i = 0; i < G; ++i)
    for (int k = 1; k < W; ++k)
      for (int p : S.words_of_weight(k)) {
        Vec r = residual(S, D, sigma, smats, i, p);
        for (const auto &[v, c] : r)
          rhs.add(eq_index(i, p, v), c);
        int dg = L.gen_deg[i] + S.word_deg(p);
        for (int v = 0; v < N; ++v)
          if (L.deg[v] == dg)
            unknowns.emplace_back(i, p, v);
      }
  for (const auto &[i, p, v] : unknowns) {
    Family F;
    F.phi.assign(G, Coder{});
    for (int j = 0; j < G; ++j)
      F.phi[j].degree = L.gen_deg[j];
    F.phi[i].taylor[S.word(p)] = Vec::unit(v);
    std::vector<CoMat> mats = matrices(S, F);
    Vec col;
    for (int j = 0; j < G; ++j)
      for (int k = 1; k < W; ++k)
        for (int q : S.words_of_weight(k))
          for (const auto &[x, c] : residual(S, D, F, mats, j, q))
            col.add(eq_index(j, q, x), c);
    cols.push_back(col);
  }
  auto weight_of_eq = [&](int e) { return (int)S.word((e / N) % P).size(); };
  std::optional<Vec> sol;
  for (int K = 1; K < W; ++K) {
    LinearSystem sys;
    for (std::size_t u = 0; u < unknowns.size(); ++u) {
      Vec c;
      if ((int)S.word(std::get<1>(unknowns[u])).size() <= K)
        for (const auto &[e, x] : cols[u])
          if (weight_of_eq(e) <= K)
            c.add(e, x);
      sys.cols.push_back(c);
    }
    Vec b;
    for (const auto &[e, x] : rhs)
      if (weight_of_eq(e) <= K)
        b.add(e, x);
    sol = sys.solve(b);
    if (!sol) {
      cert.failing_weight = K + 1;
      return cert;
    }
  }
  cert.solvable = true;
  cert.tau.assign(G, Coder{});
  for (int i = 0; i < G; ++i)
    cert.tau[i].degree = L.gen_deg[i];
  if (sol)
    for (const auto &[u, c] : *sol) {
      auto [i, p, v] = unknowns[u];
      cert.tau[i].taylor[S.word(p)].add(v, c);
    }
  cert.verified = verify_splitting(s, W, cert.tau);
  return cert;
}

Check verify_splitting(const LInftyStructure &s, int W, const std::vector<Coder> &tau) {
  Check c;
  const DgModule &L = *s.L;
  SymCoalgebra S(s.L, W);
  CoMat D = lift_module_differential(S) + coderivation_from_taylor(S, coder_from_brackets(s, W));
  const int G = L.ngen();
  std::vector<Coder> phi;
  for (int i = 0; i < G; ++i) {
    Coder p = coder_sigma(L, Vec::unit(L.idx(i, L.R->unit)));
    for (const auto &[w, v] : tau[i].taylor) {
      if (w.empty()) {
        c.fail("splitting leaves the kernel of evaluation", L.gen_label[i]);
        return c;
      }
      p.taylor[w] -= v;
    }
    phi.push_back(p);
  }
  for (int i = 0; i < G; ++i) {
    CoMat m = coderivation_from_taylor(S, phi[i]);
    Vec ev = S.corestrict(m.col(S.idx(S.R()->unit, 0)));
    if (!(ev == Vec::unit(L.idx(i, L.R->unit)))) {
      c.fail("evaluation at 1 is not the identity", L.gen_label[i]);
      return c;
    }
    Check cd = check_coderivation(S, m, W - 1);
    if (!cd.ok) {
      c.fail(cd.what, L.gen_label[i] + " on " + cd.witness);
      return c;
    }
    Coder target{phi[i].degree + 1, {}};
    for (const auto &[v, x] : L.d[L.idx(i, L.R->unit)]) {
      Coder t = phi[L.gen_of(v)].times(L, L.coef_of(v));
      for (const auto &[w, y] : t.taylor)
        target.taylor[w].axpy(x, y);
    }
    Check ch = same_operator(S, commutator(D, m), coderivation_from_taylor(S, target), W - 1,
                             "splitting is not a chain map");
    if (!ch.ok) {
      c.fail(ch.what, L.gen_label[i] + " on " + ch.witness);
      return c;
    }
  }
  return c;
}

// ---------------------------------------------------------- conjugation

static Vec on_lgens(const DgModule &L, const std::map<int, SymMap> &f, int n, const Word &g) {
  if (n == 1)
    return Vec::unit(L.idx(g[0], L.R->unit));
  auto it = f.find(n);
  if (it == f.end())
    return Vec();
  Word lw = g;
  for (int &x : lw)
    x = L.idx(x, L.R->unit);
  return it->second.at(lw, L.deg);
}

SPtr conjugated_structure(const ModPtr &L, const std::map<int, SymMap> &f, int cap) {
  auto S = std::make_shared<SymCoalgebra>(L, cap);
  auto fp = std::make_shared<std::map<int, SymMap>>(f);
  CoMat F(0, S->dim(), [S, fp](int i) {
    const DgModule &M = *S->L();
    const Word &w = S->word(S->word_of(i));
    Vec v = partition_sum(
        w, M.gen_deg, [&](int n, const Word &sub) { return on_lgens(M, *fp, n, sub); },
        [&](int, const std::vector<Vec> &args) {
          Vec out = S->from_r(Vec::unit(M.R->unit));
          for (const auto &a : args)
            out = S->mul(out, S->embed(a));
          return out;
        },
        1, (int)w.size());
    return S->mul(S->from_r(Vec::unit(S->coef_of(i))), v);
  });
  CoMat Finv(0, S->dim(), [F](int i) {
    Vec acc = Vec::unit(i), v = Vec::unit(i);
    while (true) {
      v = F.apply(v) - v;
      if (v.empty())
        break;
      v *= -1;
      acc += v;
    }
    return acc;
  });
  CoMat Dc = compose(Finv, compose(lift_module_differential(*S), F));
  auto st = std::make_shared<LInftyStructure>();
  st->L = L;
  st->cap = cap;
  for (int n = 2; n <= cap; ++n)
    st->q[n] = SymMap(1, [S, Dc](const Word &w) {
      const DgModule &M = *S->L();
      return extend_from_generators(M, M, 1, w, [&](const Word &g) {
        return S->corestrict(Dc.apply(S->gen_word(g)));
      });
    });
  return st;
}

LInftyMorphism morphism_from_generators(const SPtr &src, const SPtr &tgt,
                                        const std::map<int, SymMap> &f) {
  LInftyMorphism F;
  F.src = src;
  F.tgt = tgt;
  F.cap = std::min(src->cap, tgt->cap);
  auto fp = std::make_shared<std::map<int, SymMap>>(f);
  ModPtr L = src->L, M = tgt->L;
  for (int n = 1; n <= F.cap; ++n)
    F.f[n] = SymMap(0, [L, M, fp, n](const Word &w) {
      return extend_from_generators(*L, *M, 0, w,
                                    [&](const Word &g) { return on_lgens(*L, *fp, n, g); });
    });
  return F;
}

} // namespace linf
