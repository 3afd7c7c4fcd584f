#include "linf/linfty.hpp"

#include <algorithm>

namespace linf {

SymMap::SymMap(int degree, Fn fn)
    : degree_(degree), fn_(std::move(fn)), cache_(std::make_shared<std::map<Word, Vec>>()) {}

SymMap SymMap::table(int degree, std::map<Word, Vec> t) {
  auto tab = std::make_shared<const std::map<Word, Vec>>(std::move(t));
  return SymMap(degree, [tab](const Word &w) {
    auto it = tab->find(w);
    return it == tab->end() ? Vec() : it->second;
  });
}

Vec SymMap::operator()(const Word &sorted) const {
  if (!fn_)
    return Vec();
  auto it = cache_->find(sorted);
  if (it != cache_->end())
    return it->second;
  Vec v = fn_(sorted);
  cache_->emplace(sorted, v);
  return v;
}

Vec SymMap::at(Word w, const std::vector<int> &deg) const {
  if (!fn_)
    return Vec();
  int s = normalize_word(w, deg);
  if (!s)
    return Vec();
  Vec v = (*this)(w);
  if (s < 0)
    v *= -1;
  return v;
}

static void expand_rec(const std::vector<Vec> &args, std::size_t i, Word &cur, const Q &c,
                       std::map<Word, Q> &acc) {
  if (i == args.size()) {
    auto [it, fresh] = acc.try_emplace(cur, c);
    if (!fresh)
      it->second += c;
    return;
  }
  for (const auto &[b, x] : args[i]) {
    cur.push_back(b);
    expand_rec(args, i + 1, cur, c * x, acc);
    cur.pop_back();
  }
}

std::map<Word, Q> sym_expand(const std::vector<Vec> &args, const std::vector<int> &deg) {
  std::map<Word, Q> raw, out;
  Word cur;
  expand_rec(args, 0, cur, Q(1), raw);
  for (auto &[w0, c] : raw) {
    if (c == 0)
      continue;
    Word w = w0;
    int s = normalize_word(w, deg);
    if (!s)
      continue;
    auto [it, fresh] = out.try_emplace(w, s * c);
    if (!fresh)
      it->second += s * c;
  }
  return out;
}

Vec eval_vecs(const SymMap &m, const std::vector<Vec> &args, const std::vector<int> &deg) {
  Vec out;
  if (m.zero())
    return out;
  for (const auto &a : args)
    if (a.empty())
      return out;
  for (const auto &[w, c] : sym_expand(args, deg))
    if (c != 0)
      out.axpy(c, m(w));
  return out;
}

Vec LInftyStructure::bracket(int n, const Word &sorted) const {
  if (n == 1)
    return L->d[sorted[0]];
  auto it = q.find(n);
  return it == q.end() ? Vec() : it->second(sorted);
}

Vec LInftyStructure::bracket_at(int n, Word w) const {
  if (n == 1)
    return L->d[w[0]];
  auto it = q.find(n);
  return it == q.end() ? Vec() : it->second.at(std::move(w), L->deg);
}

Vec LInftyStructure::bracket_vecs(const std::vector<Vec> &args) const {
  if (args.size() == 1)
    return L->diff(args[0]);
  auto it = q.find((int)args.size());
  return it == q.end() ? Vec() : eval_vecs(it->second, args, L->deg);
}

SPtr abelian_structure(const ModPtr &L, int cap) {
  auto s = std::make_shared<LInftyStructure>();
  s->L = L;
  s->cap = cap;
  return s;
}

Vec LInftyMorphism::taylor(int n, const Word &sorted) const {
  auto it = f.find(n);
  return it == f.end() ? Vec() : it->second(sorted);
}

Vec LInftyMorphism::taylor_at(int n, Word w) const {
  auto it = f.find(n);
  return it == f.end() ? Vec() : it->second.at(std::move(w), src->L->deg);
}

static void partitions_rec(int n, int i, std::vector<int> &rgs, int blocks,
                           const std::function<void(const std::vector<int> &, int)> &emit) {
  if (i == n) {
    emit(rgs, blocks);
    return;
  }
  for (int b = 0; b <= blocks; ++b) {
    rgs[i] = b;
    partitions_rec(n, i + 1, rgs, std::max(blocks, b + 1), emit);
  }
}

Vec partition_sum(const Word &w, const std::vector<int> &deg,
                  const std::function<Vec(int, const Word &)> &inner,
                  const std::function<Vec(int, const std::vector<Vec> &)> &outer, int kmin,
                  int kmax) {
  const int n = (int)w.size();
  std::vector<int> pd(n);
  for (int i = 0; i < n; ++i)
    pd[i] = deg[w[i]];
  Vec out;
  std::vector<int> rgs(n, 0);
  partitions_rec(n, 0, rgs, 0, [&](const std::vector<int> &r, int k) {
    if (k < kmin || k > kmax)
      return;
    std::vector<std::vector<int>> blocks(k);
    for (int i = 0; i < n; ++i)
      blocks[r[i]].push_back(i);
    std::vector<int> perm;
    std::vector<Vec> args;
    for (auto &b : blocks) {
      Word sub;
      for (int p : b) {
        perm.push_back(p);
        sub.push_back(w[p]);
      }
      Vec a = inner((int)b.size(), sub);
      if (a.empty())
        return;
      args.push_back(std::move(a));
    }
    Vec v = outer(k, args);
    if (!v.empty())
      out.axpy(koszul_sign(pd, perm), v);
  });
  return out;
}

Vec insertion_sum(const Word &w, const std::vector<int> &deg,
                  const std::function<Vec(int, const Word &)> &inner,
                  const std::function<Vec(int, const std::vector<Vec> &)> &outer, int imin,
                  int imax) {
  const int n = (int)w.size();
  std::vector<int> pd(n);
  for (int i = 0; i < n; ++i)
    pd[i] = deg[w[i]];
  Vec out;
  for (int i = std::max(1, imin); i <= std::min(n, imax); ++i) {
    std::vector<std::vector<int>> sh;
    if (i == n) {
      std::vector<int> id(n);
      for (int j = 0; j < n; ++j)
        id[j] = j;
      sh.push_back(id);
    } else {
      sh = shuffles({i, n - i});
    }
    for (const auto &p : sh) {
      Word first(p.begin(), p.begin() + i);
      for (int &x : first)
        x = w[x];
      Vec a = inner(i, first);
      if (a.empty())
        continue;
      std::vector<Vec> args{std::move(a)};
      for (int j = i; j < n; ++j)
        args.push_back(Vec::unit(w[p[j]]));
      Vec v = outer(n - i + 1, args);
      if (!v.empty())
        out.axpy(koszul_sign(pd, p), v);
    }
  }
  return out;
}

std::vector<Word> check_words(const DgModule &L, int n, bool all) {
  if (all)
    return sym_words(L.dim(), n, L.deg);
  std::vector<int> gens = L.generators();
  std::vector<int> gdeg;
  for (int g : gens)
    gdeg.push_back(L.deg[g]);
  std::vector<Word> out = sym_words((int)gens.size(), n, gdeg);
  for (Word &w : out)
    for (int &x : w)
      x = gens[x];
  return out;
}

Check check_linfty(const LInftyStructure &s, int cap, CheckOptions opt) {
  Check c;
  const auto &deg = s.L->deg;
  for (int n = 2; n <= cap; ++n) {
    for (const Word &w : check_words(*s.L, n, opt.exhaustive)) {
      Vec J = insertion_sum(
          w, deg, [&](int i, const Word &sub) { return s.bracket_at(i, sub); },
          [&](int, const std::vector<Vec> &args) { return s.bracket_vecs(args); }, 1, n);
      if (!J.empty()) {
        c.fail("L-infinity identity at arity " + std::to_string(n),
               word_str(w, &s.L->label) + " residue " + J.str(&s.L->label));
        if (!opt.exhaustive)
          return c;
      }
    }
  }
  return c;
}

static Vec morphism_eval(const LInftyMorphism &F, int k, const std::vector<Vec> &args) {
  auto it = F.f.find(k);
  return it == F.f.end() ? Vec() : eval_vecs(it->second, args, F.src->L->deg);
}

Check check_morphism(const LInftyMorphism &F, int cap, CheckOptions opt) {
  Check c;
  const auto &deg = F.src->L->deg;
  for (int n = 1; n <= cap; ++n) {
    for (const Word &w : check_words(*F.src->L, n, opt.exhaustive)) {
      Vec lhs = partition_sum(
          w, deg, [&](int i, const Word &sub) { return F.taylor_at(i, sub); },
          [&](int, const std::vector<Vec> &args) { return F.tgt->bracket_vecs(args); }, 1, n);
      Vec rhs = insertion_sum(
          w, deg, [&](int i, const Word &sub) { return F.src->bracket_at(i, sub); },
          [&](int k, const std::vector<Vec> &args) { return morphism_eval(F, k, args); }, 1, n);
      if (!(lhs == rhs)) {
        c.fail("morphism identity at arity " + std::to_string(n),
               word_str(w, &F.src->L->label) + " residue " + (lhs - rhs).str(&F.tgt->L->label));
        if (!opt.exhaustive)
          return c;
      }
    }
  }
  return c;
}

Check check_multilinear_map(const DgModule &src, const DgModule &tgt, const SymMap &m, int n) {
  Check c;
  if (m.zero())
    return c;
  const DgcaPtr &R = src.R;
  std::vector<Word> shorter = n >= 2 ? sym_words(src.dim(), n - 1, src.deg) : std::vector<Word>{{}};
  for (int x = 0; x < src.dim(); ++x)
    for (const Word &ws : shorter) {
      Word w{x};
      w.insert(w.end(), ws.begin(), ws.end());
      Vec base = m.at(w, src.deg);
      int wd = word_degree(w, src.deg);
      for (const auto &[v, unused] : base) {
        (void)unused;
        if (tgt.deg[v] != wd + m.degree()) {
          c.fail("degree at arity " + std::to_string(n), word_str(w, &src.label));
          break;
        }
      }
      for (int a = 0; a < R->dim(); ++a) {
        if (a == R->unit)
          continue;
        std::vector<Vec> args{src.act[a][x]};
        for (int y : ws)
          args.push_back(Vec::unit(y));
        Vec lhs = eval_vecs(m, args, src.deg);
        Vec rhs = tgt.action(a, base);
        rhs *= sgn_pow(R->deg[a] * m.degree());
        if (!(lhs == rhs))
          c.fail("R-multilinearity at arity " + std::to_string(n),
                 R->label[a] + " on " + word_str(w, &src.label));
      }
    }
  return c;
}

Check check_multilinear(const LInftyStructure &s, int cap) {
  Check c;
  for (const auto &[n, m] : s.q) {
    if (n > cap)
      break;
    Check k = check_multilinear_map(*s.L, *s.L, m, n);
    if (!k.ok)
      c.fail(k.what, k.witness);
  }
  return c;
}

LInftyMorphism identity_morphism(const SPtr &s) {
  LInftyMorphism F;
  F.src = F.tgt = s;
  F.cap = s->cap;
  F.f[1] = SymMap(0, [](const Word &w) { return Vec::unit(w[0]); });
  return F;
}

LInftyMorphism strict_morphism(const SPtr &src, const SPtr &tgt, const ModuleMap &f1) {
  LInftyMorphism F;
  F.src = src;
  F.tgt = tgt;
  F.cap = std::min(src->cap, tgt->cap);
  auto cols = std::make_shared<std::vector<Vec>>(f1.col);
  F.f[1] = SymMap(0, [cols](const Word &w) { return (*cols)[w[0]]; });
  return F;
}

LInftyMorphism compose(const LInftyMorphism &F, const LInftyMorphism &G) {
  if (G.tgt->L->dim() != F.src->L->dim())
    throw Error("compose: endpoint mismatch");
  LInftyMorphism H;
  H.src = G.src;
  H.tgt = F.tgt;
  H.cap = std::min(F.cap, G.cap);
  const auto &deg = G.src->L->deg;
  for (int n = 1; n <= H.cap; ++n)
    H.f[n] = SymMap(0, [F, G, deg](const Word &w) {
      return partition_sum(
          w, deg, [&](int i, const Word &sub) { return G.taylor_at(i, sub); },
          [&](int k, const std::vector<Vec> &args) { return morphism_eval(F, k, args); }, 1,
          (int)w.size());
    });
  return H;
}

LInftyMorphism inverse(const LInftyMorphism &F) {
  const DgModule &L = *F.src->L;
  const DgModule &M = *F.tgt->L;
  if (L.dim() != M.dim())
    throw Error("inverse: linear part not invertible");
  LinearSystem sys;
  for (int v = 0; v < L.dim(); ++v)
    sys.cols.push_back(F.taylor(1, {v}));
  auto inv = std::make_shared<std::vector<Vec>>();
  for (int y = 0; y < M.dim(); ++y) {
    auto x = sys.solve(Vec::unit(y));
    if (!x)
      throw Error("inverse: linear part not invertible");
    inv->push_back(*x);
  }
  auto hold = std::make_shared<std::map<int, SymMap>>();
  (*hold)[1] = SymMap(0, [inv](const Word &w) { return (*inv)[w[0]]; });
  const auto &ldeg = L.deg;
  for (int n = 2; n <= F.cap; ++n) {
    std::weak_ptr<std::map<int, SymMap>> wh = hold;
    (*hold)[n] = SymMap(0, [F, inv, wh, ldeg](const Word &y) {
      auto h = wh.lock();
      std::vector<Vec> xs;
      for (int v : y)
        xs.push_back((*inv)[v]);
      Vec out;
      // expand x's in the given order; the identity holds for any ordering
      std::function<void(std::size_t, Word &, Q)> rec = [&](std::size_t i, Word &cur, Q c) {
        if (i == xs.size()) {
          Vec t = partition_sum(
              cur, ldeg, [&](int k, const Word &sub) { return F.taylor_at(k, sub); },
              [&](int k, const std::vector<Vec> &args) {
                auto it = h->find(k);
                return it == h->end() ? Vec() : eval_vecs(it->second, args, F.tgt->L->deg);
              },
              1, (int)cur.size() - 1);
          out.axpy(-c, t);
          return;
        }
        for (const auto &[b, x] : xs[i]) {
          cur.push_back(b);
          rec(i + 1, cur, c * x);
          cur.pop_back();
        }
      };
      Word cur;
      rec(0, cur, Q(1));
      return out;
    });
  }
  LInftyMorphism H;
  H.src = F.tgt;
  H.tgt = F.src;
  H.cap = F.cap;
  for (const auto &kv : *hold) {
    int n = kv.first;
    H.f[n] = SymMap(0, [hold, n](const Word &w) { return hold->at(n)(w); });
  }
  return H;
}

BinaryClass binary_class(const LInftyStructure &s) {
  BinaryClass b;
  b.hom = std::make_shared<HomComplex>(s.L, 2);
  b.representative = b.hom->coords(1, [&](const Word &w) { return s.bracket(2, w); });
  b.cocycle = b.hom->d(1, b.representative).empty();
  auto p = b.hom->primitive(1, b.representative);
  b.vanishes = p.has_value();
  if (p)
    b.primitive = *p;
  return b;
}

CohomologyBracket cohomology_bracket(const LInftyStructure &s) {
  CohomologyBracket out;
  const DgModule &L = *s.L;
  Cohomology H = cohomology(L);
  std::vector<Cohomology::Key> key;
  std::map<Cohomology::Key, int> offset;
  for (auto k : H.keys()) {
    offset[k] = (int)out.reps.size();
    for (const auto &z : H.reps(k)) {
      out.reps.push_back(z);
      out.rep_degree.push_back(k.first);
      key.push_back(k);
    }
  }
  auto q2 = [&](const Vec &x, const Vec &y) { return s.bracket_vecs({x, y}); };
  auto klass = [&](const Vec &z, Check &chk, const std::string &what, const std::string &wit) {
    Vec out_c;
    if (z.empty())
      return out_c;
    if (!H.is_cocycle(z)) {
      chk.fail(what + " (not closed)", wit);
      return out_c;
    }
    auto k = H.key_of(z.begin()->first);
    Vec c = H.coords(z, k);
    for (const auto &[i, x] : c)
      out_c.add(offset[k] + i, x);
    return out_c;
  };
  const int n = (int)out.reps.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::string wit = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
      Vec c = klass(q2(out.reps[i], out.reps[j]), out.well_defined, "bracket", wit);
      out.table[{i, j}] = c;
      // shifted representatives: z_i + d e for basis e one degree lower
      for (int e = 0; e < L.dim(); ++e) {
        if (L.deg[e] != out.rep_degree[i] - 1 || L.d[e].empty())
          continue;
        Vec shifted = out.reps[i] + L.d[e];
        Vec c2 = klass(q2(shifted, out.reps[j]), out.well_defined, "bracket", wit);
        if (!(c2 == c))
          out.well_defined.fail("representative dependence", wit + " shift " + L.label[e]);
      }
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::vector<Vec> z{out.reps[i], out.reps[j], out.reps[k]};
        std::vector<int> d{out.rep_degree[i] - 0, out.rep_degree[j], out.rep_degree[k]};
        Vec J;
        for (const auto &p : shuffles({2, 1})) {
          Vec inner = q2(z[p[0]], z[p[1]]);
          J.axpy(koszul_sign(d, p), q2(inner, z[p[2]]));
        }
        std::string wit = "(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
        Vec c = klass(J, out.jacobiator, "jacobiator", wit);
        if (!c.empty())
          out.jacobiator.fail("jacobiator class nonzero", wit);
      }
  return out;
}

ModPtr restrict_module(const ModPtr &L, const DgcaMorphism &phi) {
  Check c = phi.validate();
  if (!c.ok)
    throw AxiomError("restriction: " + c.what + " fails at " + c.witness);
  if (phi.src.get() == L->R.get())
    return L;
  DgModule m;
  m.R = phi.src;
  m.label = L->label;
  m.deg = L->deg;
  m.wt = L->wt;
  m.d = L->d;
  m.act.assign(phi.src->dim(), std::vector<Vec>(L->dim()));
  for (int s = 0; s < phi.src->dim(); ++s)
    for (int v = 0; v < L->dim(); ++v)
      m.act[s][v] = L->action(phi.map[s], Vec::unit(v));
  return make_module(std::move(m));
}

SPtr restrict_scalars(const SPtr &s, const DgcaMorphism &phi) {
  auto r = std::make_shared<LInftyStructure>(*s);
  r->L = restrict_module(s->L, phi);
  return r;
}

LInftyMorphism restrict_scalars(const LInftyMorphism &F, const SPtr &src, const SPtr &tgt) {
  LInftyMorphism G = F;
  G.src = src;
  G.tgt = tgt;
  return G;
}

Extension extend_module(const ModPtr &Lp, const DgcaMorphism &phi) {
  Check c = phi.validate();
  if (!c.ok)
    throw AxiomError("extension: " + c.what + " fails at " + c.witness);
  const DgModule &L = *Lp;
  const DgcaPtr &S = phi.src, &R = phi.tgt;
  Extension e;
  if (L.free) {
    std::vector<Vec> gd;
    // indices of the module under construction: idx(g, a) = g * |R| + a
    const int m = R->dim();
    for (int g = 0; g < L.ngen(); ++g) {
      Vec v;
      for (const auto &[x, cx] : L.d[L.idx(g, S->unit)])
        for (const auto &[a, ca] : phi.map[L.coef_of(x)])
          v.add(L.gen_of(x) * m + a, cx * ca);
      gd.push_back(v);
    }
    std::vector<int> gw;
    for (int g = 0; g < L.ngen(); ++g)
      gw.push_back(L.wt[L.idx(g, S->unit)]);
    e.mod = free_module(R, L.gen_label, L.gen_deg, gd, gw);
    for (int g = 0; g < L.ngen(); ++g)
      for (int a = 0; a < m; ++a)
        e.pure.push_back({a, L.idx(g, S->unit)});
    ModPtr mod = e.mod;
    e.tensor = [mod, Lp, phi](int a, const Vec &x) {
      Vec out;
      const DgModule &LL = *Lp;
      for (const auto &[v, cv] : x) {
        Vec r = phi.tgt->mult(Vec::unit(a), phi.map[LL.coef_of(v)]);
        for (const auto &[b, cb] : r)
          out.add(mod->idx(LL.gen_of(v), b), cv * cb);
      }
      return out;
    };
    return e;
  }
  // Quotient of R (x)_Q L by the balancing relations. Index (a, v) is ordered so
  // that pivots fall on large L-indices, keeping low-index tensors as basis.
  const int m = R->dim(), N = L.dim();
  auto id = [&](int a, int v) { return (N - 1 - v) * m + (m - 1 - a); };
  auto red = std::make_shared<Reducer>();
  int rid = 0;
  for (int a = 0; a < m; ++a)
    for (int s = 0; s < S->dim(); ++s)
      for (int v = 0; v < N; ++v) {
        Vec rel;
        for (const auto &[b, cb] : R->mult(Vec::unit(a), phi.map[s]))
          rel.add(id(b, v), cb);
        for (const auto &[w, cw] : L.act[s][v])
          rel.add(id(a, w), -cw);
        if (!rel.empty())
          red->insert(rel, rid++);
      }
  std::vector<int> piv = red->pivots();
  std::vector<char> is_piv(m * N, 0);
  for (int p : piv)
    is_piv[p] = 1;
  auto newidx = std::make_shared<std::map<int, int>>();
  DgModule q;
  q.R = R;
  for (int v = 0; v < N; ++v)
    for (int a = 0; a < m; ++a) {
      int k = id(a, v);
      if (is_piv[k])
        continue;
      (*newidx)[k] = (int)e.pure.size();
      e.pure.push_back({a, v});
      q.label.push_back(a == R->unit ? L.label[v] : R->label[a] + "(x)" + L.label[v]);
      q.deg.push_back(R->deg[a] + L.deg[v]);
      q.wt.push_back(R->wt[a] + L.wt[v]);
    }
  auto project = [red, newidx, m, N](const Vec &raw) {
    Vec r = raw;
    red->reduce(r);
    Vec out;
    for (const auto &[k, c] : r)
      out.add(newidx->at(k), c);
    (void)m;
    (void)N;
    return out;
  };
  e.tensor = [project, R, m, N](int a, const Vec &x) {
    Vec raw;
    for (const auto &[v, c] : x)
      raw.add((N - 1 - v) * m + (m - 1 - a), c);
    return project(raw);
  };
  const int n = (int)e.pure.size();
  q.act.assign(m, std::vector<Vec>(n));
  q.d.assign(n, Vec());
  for (int i = 0; i < n; ++i) {
    auto [a, v] = e.pure[i];
    for (int b = 0; b < m; ++b) {
      Vec raw;
      for (const auto &[c, cc] : R->mul[b][a])
        raw.add(id(c, v), cc);
      q.act[b][i] = project(raw);
    }
    Vec raw;
    for (const auto &[c, cc] : R->d[a])
      raw.add(id(c, v), cc);
    for (const auto &[w, cw] : L.d[v])
      raw.add(id(a, w), cw * sgn_pow(R->deg[a]));
    q.d[i] = project(raw);
  }
  e.mod = make_module(std::move(q));
  return e;
}

SPtr extend_scalars(const SPtr &s, const DgcaMorphism &phi, Extension *ext) {
  Extension e = extend_module(s->L, phi);
  auto out = std::make_shared<LInftyStructure>();
  out->L = e.mod;
  out->cap = s->cap;
  auto ep = std::make_shared<Extension>(e);
  const DgcaPtr R = phi.tgt;
  for (const auto &[n, qn] : s->q) {
    SPtr src = s;
    int arity = n;
    out->q[n] = SymMap(1, [ep, src, R, arity](const Word &w) {
      Vec r = Vec::unit(R->unit);
      Word xs;
      int e_r = 0, e_x = 0, xprefix = 0;
      for (int b : w) {
        auto [a, v] = ep->pure[b];
        e_r += R->deg[a];
        e_x += xprefix * R->deg[a];
        xprefix += src->L->deg[v];
        r = R->mult(r, Vec::unit(a));
        xs.push_back(v);
      }
      Vec val = src->bracket_at(arity, xs);
      Vec out;
      if (val.empty())
        return out;
      for (const auto &[a, c] : r)
        out.axpy(c, ep->tensor(a, val));
      out *= sgn_pow(e_r + e_x);
      return out;
    });
  }
  if (ext)
    *ext = e;
  return out;
}

ModuleMap extend_map(const ModuleMap &f, const Extension &src, const Extension &tgt,
                     const DgcaMorphism &phi) {
  ModuleMap g{src.mod, tgt.mod, f.degree, {}};
  for (auto [a, v] : src.pure) {
    Vec img = tgt.tensor(a, f.col[v]);
    img *= sgn_pow(phi.tgt->deg[a] * f.degree);
    g.col.push_back(img);
  }
  return g;
}

LInftyMorphism extend_morphism(const LInftyMorphism &F, const SPtr &src, const SPtr &tgt,
                               const Extension &es, const Extension &et) {
  LInftyMorphism G;
  G.src = src;
  G.tgt = tgt;
  G.cap = F.cap;
  auto esp = std::make_shared<Extension>(es), etp = std::make_shared<Extension>(et);
  const DgcaPtr R = src->L->R;
  for (const auto &[n, fn] : F.f) {
    int arity = n;
    G.f[n] = SymMap(0, [F, esp, etp, R, arity](const Word &w) {
      Vec r = Vec::unit(R->unit);
      Word xs;
      int e_x = 0, xprefix = 0;
      for (int b : w) {
        auto [a, v] = esp->pure[b];
        e_x += xprefix * R->deg[a];
        xprefix += F.src->L->deg[v];
        r = R->mult(r, Vec::unit(a));
        xs.push_back(v);
      }
      Vec val = F.taylor_at(arity, xs);
      Vec out;
      if (val.empty())
        return out;
      for (const auto &[a, c] : r)
        out.axpy(c, etp->tensor(a, val));
      out *= sgn_pow(e_x);
      return out;
    });
  }
  return G;
}

// ------------------------------------------------------------------- DgLie

Vec DgLie::bracket_basis(int u, int v) const {
  const DgModule &m = *M;
  int g = m.gen_of(u), a = m.coef_of(u), h = m.gen_of(v), b = m.coef_of(v);
  Vec r = m.R->mul[a][b];
  if (r.empty() || br[g][h].empty())
    return Vec();
  Vec out = m.action(r, br[g][h]);
  out *= sgn_pow(m.gen_deg[g] * m.R->deg[b]);
  return out;
}

Vec DgLie::bracket(const Vec &x, const Vec &y) const {
  Vec out;
  for (const auto &[u, cu] : x)
    for (const auto &[v, cv] : y)
      out.axpy(cu * cv, bracket_basis(u, v));
  return out;
}

Check DgLie::validate() const {
  Check c;
  const DgModule &m = *M;
  const int n = m.dim();
  auto lab = [&](std::initializer_list<int> xs) {
    std::string s = "(";
    bool first = true;
    for (int x : xs) {
      if (!first) s += ",";
      first = false;
      s += m.label[x];
    }
    return s + ")";
  };
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      Vec a = bracket_basis(u, v), b = bracket_basis(v, u);
      b *= -sgn_pow(m.deg[u] * m.deg[v]);
      if (!(a == b))
        c.fail("antisymmetry", lab({u, v}));
      for (const auto &[w, cw] : a)
        if (m.deg[w] != m.deg[u] + m.deg[v]) {
          c.fail("bracket degree", lab({u, v}));
          break;
        }
      Vec lhs = m.diff(a);
      Vec rhs = bracket(m.d[u], Vec::unit(v));
      rhs.axpy(sgn_pow(m.deg[u]), bracket(Vec::unit(u), m.d[v]));
      if (!(lhs == rhs))
        c.fail("differential is a derivation", lab({u, v}));
    }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w) {
        Vec lhs = bracket(Vec::unit(u), bracket_basis(v, w));
        Vec rhs = bracket(bracket_basis(u, v), Vec::unit(w));
        rhs.axpy(sgn_pow(m.deg[u] * m.deg[v]), bracket(Vec::unit(v), bracket_basis(u, w)));
        if (!(lhs == rhs))
          c.fail("jacobi", lab({u, v, w}));
      }
  return c;
}

DgLie dgla(const DgcaPtr &R, const LieAlgebra &g,
           const std::vector<std::pair<int, std::vector<Vec>>> &twist) {
  const int n = g.dim(), m = R->dim();
  std::vector<Vec> gd(n);
  for (const auto &[xi, D] : twist)
    for (int j = 0; j < n; ++j)
      for (const auto &[k, c] : D[j])
        gd[j].add(k * m + xi, c);
  DgLie L;
  L.M = free_module(R, g.label, std::vector<int>(n, 0), gd);
  L.br.assign(n, std::vector<Vec>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (const auto &[k, c] : g.bracket[i][j])
        L.br[i][j].add(L.M->idx(k, R->unit), c);
  Check ch = L.validate();
  if (!ch.ok)
    throw AxiomError("dg lie algebra: " + ch.what + " fails at " + ch.witness);
  return L;
}

DgLie dgla_tensor(const LieAlgebra &g, const DgcaPtr &A) {
  DgcaPtr K = dgca_field();
  const int n = g.dim(), a = A->dim();
  std::vector<std::string> lab;
  std::vector<int> deg;
  std::vector<Vec> gd;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < a; ++j) {
      lab.push_back(j == A->unit ? g.label[i] : g.label[i] + "." + A->label[j]);
      deg.push_back(A->deg[j]);
      Vec v;
      for (const auto &[k, c] : A->d[j])
        v.add(i * a + k, c);
      gd.push_back(v);
    }
  DgLie L;
  L.M = free_module(K, lab, deg, gd);
  L.br.assign(n * a, std::vector<Vec>(n * a));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < a; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < a; ++l)
          for (const auto &[p, cp] : g.bracket[i][k])
            for (const auto &[q, cq] : A->mul[j][l])
              L.br[i * a + j][k * a + l].add(p * a + q, cp * cq);
  Check ch = L.validate();
  if (!ch.ok)
    throw AxiomError("dg lie algebra: " + ch.what + " fails at " + ch.witness);
  return L;
}

DgLie dgla_base_change(const DgLie &N, const DgcaPtr &R) {
  const DgModule &m = *N.M;
  const int G = m.ngen(), r = R->dim(), k = m.rdim();
  std::vector<Vec> gd(G);
  for (int g = 0; g < G; ++g)
    for (const auto &[v, c] : m.d[m.idx(g, m.R->unit)]) {
      if (m.coef_of(v) != m.R->unit || k != 1)
        throw Error("base change: source must be over the ground field");
      gd[g].add(m.gen_of(v) * r + R->unit, c);
    }
  DgLie L;
  L.M = free_module(R, m.gen_label, m.gen_deg, gd);
  L.br.assign(G, std::vector<Vec>(G));
  for (int g = 0; g < G; ++g)
    for (int h = 0; h < G; ++h)
      for (const auto &[v, c] : N.br[g][h])
        L.br[g][h].add(L.M->idx(m.gen_of(v), R->unit), c);
  Check ch = L.validate();
  if (!ch.ok)
    throw AxiomError("dg lie algebra: " + ch.what + " fails at " + ch.witness);
  return L;
}

Check DgLieMorphism::validate() const {
  Check c;
  auto merge = [&](const Check &x) {
    if (!x.ok)
      c.fail(x.what, x.witness);
  };
  merge(f.check_chain());
  merge(f.check_rlinear());
  const DgModule &m = *src->M;
  for (int u = 0; u < m.dim(); ++u)
    for (int v = 0; v < m.dim(); ++v)
      if (!(f.apply(src->bracket_basis(u, v)) == tgt->bracket(f.col[u], f.col[v])))
        c.fail("bracket preserved", "(" + m.label[u] + "," + m.label[v] + ")");
  return c;
}

Vec desuspend(const DgModule &M, const Vec &x) {
  Vec out;
  for (const auto &[v, c] : x)
    out.add(v, c * sgn_pow(M.R->deg[M.coef_of(v)]));
  return out;
}

SPtr decalage(const DgLie &g, int cap) {
  const DgModule &M = *g.M;
  const int G = M.ngen();
  std::vector<std::string> lab;
  std::vector<int> deg;
  std::vector<Vec> gd;
  for (int i = 0; i < G; ++i) {
    lab.push_back("s" + M.gen_label[i]);
    deg.push_back(M.gen_deg[i] - 1);
    gd.push_back(-desuspend(M, M.d[M.idx(i, M.R->unit)]));
  }
  auto s = std::make_shared<LInftyStructure>();
  s->L = free_module(M.R, lab, deg, gd);
  s->cap = cap;
  ModPtr L1 = s->L;
  ModPtr Mp = g.M;
  auto br = std::make_shared<std::vector<std::vector<Vec>>>(g.br);
  s->q[2] = SymMap(1, [L1, Mp, br](const Word &w) {
    return extend_from_generators(*L1, *L1, 1, w, [&](const Word &gw) {
      Vec v = desuspend(*Mp, (*br)[gw[0]][gw[1]]);
      v *= sgn_pow(Mp->gen_deg[gw[0]]);
      return v;
    });
  });
  return s;
}

} // namespace linf
