#include "linf/transfer.hpp"

#include <algorithm>
#include <numeric>

namespace linf {

SymVec tensor_trick_H(const Contraction &c, const Word &w) {
  const DgModule &L = *c.L();
  const int n = (int)w.size();
  SymVec out;
  std::vector<int> d(n);
  for (int i = 0; i < n; ++i)
    d[i] = L.deg[w[i]];
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  const Q scale = Q(1) / factorial(n);
  do {
    const Q eps = scale * koszul_sign(d, p);
    int prefix = 0;
    for (int i = 0; i < n; ++i) {
      std::vector<Vec> args;
      for (int j = 0; j < n; ++j) {
        Vec x = Vec::unit(w[p[j]]);
        if (j < i)
          args.push_back(c.f.apply(c.g.apply(x)));
        else if (j == i)
          args.push_back(c.h.apply(x));
        else
          args.push_back(x);
      }
      const Q e = eps * sgn_pow(prefix);
      prefix += d[p[i]];
      for (const auto &[u, x] : sym_expand(args, L.deg)) {
        if (x == 0)
          continue;
        auto [it, fresh] = out.try_emplace(u, e * x);
        if (!fresh)
          it->second += e * x;
      }
    }
  } while (std::next_permutation(p.begin(), p.end()));
  std::erase_if(out, [](const auto &kv) { return kv.second == 0; });
  return out;
}

namespace {

struct Tables {
  std::map<int, SymMap> f, g, r;
};

Vec eval_in(const std::map<int, SymMap> &t, int k, const std::vector<Vec> &args,
            const std::vector<int> &deg) {
  auto it = t.find(k);
  return it == t.end() ? Vec() : eval_vecs(it->second, args, deg);
}

Vec at_in(const std::map<int, SymMap> &t, int k, const Word &w, const std::vector<int> &deg) {
  auto it = t.find(k);
  return it == t.end() ? Vec() : it->second.at(w, deg);
}

} // namespace

TransferResult homotopy_transfer(const SPtr &s, const Contraction &c, int arity_cap) {
  if (s->L->dim() != c.L()->dim())
    throw Error("transfer: structure and contraction have different modules");
  auto T = std::make_shared<Tables>();
  Tables *t = T.get();
  ModPtr M = c.M(), L = c.L();
  auto f1 = std::make_shared<std::vector<Vec>>(c.f.col);
  auto g1 = std::make_shared<std::vector<Vec>>(c.g.col);
  t->f[1] = SymMap(0, [f1](const Word &w) { return (*f1)[w[0]]; });
  t->g[1] = SymMap(0, [g1](const Word &w) { return (*g1)[w[0]]; });
  for (int n = 2; n <= arity_cap; ++n) {
    // blocks of the partition are evaluated by lower f_k; outer by h q_k or g q_k
    auto via = [t, s, M](bool use_h, const Contraction &cc) {
      auto proj = std::make_shared<ModuleMap>(use_h ? cc.h : cc.g);
      return SymMap(use_h ? 0 : 1, [t, s, M, proj](const Word &w) {
        return partition_sum(
            w, M->deg, [&](int k, const Word &sub) { return at_in(t->f, k, sub, M->deg); },
            [&](int, const std::vector<Vec> &args) {
              return proj->apply(s->bracket_vecs(args));
            },
            2, (int)w.size());
      });
    };
    t->f[n] = via(true, c);
    t->r[n] = via(false, c);
    auto cc = std::make_shared<Contraction>(c);
    t->g[n] = SymMap(0, [t, s, L, cc](const Word &w) {
      Vec out;
      const int n = (int)w.size();
      for (const auto &[u, x] : tensor_trick_H(*cc, w)) {
        Vec v = insertion_sum(
            u, L->deg, [&](int i, const Word &sub) { return s->bracket_at(i, sub); },
            [&](int k, const std::vector<Vec> &args) { return eval_in(t->g, k, args, L->deg); },
            2, n);
        out.axpy(x, v);
      }
      return out;
    });
  }
  auto wrap = [T](std::map<int, SymMap> Tables::*which, int deg) {
    std::map<int, SymMap> out;
    for (const auto &kv : T.get()->*which) {
      int n = kv.first;
      out[n] = SymMap(deg, [T, which, n](const Word &w) { return (T.get()->*which).at(n)(w); });
    }
    return out;
  };
  auto st = std::make_shared<LInftyStructure>();
  st->L = M;
  st->cap = arity_cap;
  st->q = wrap(&Tables::r, 1);
  TransferResult res;
  res.transferred = st;
  res.F.src = st;
  res.F.tgt = s;
  res.F.cap = arity_cap;
  res.F.f = wrap(&Tables::f, 0);
  res.G.src = s;
  res.G.tgt = st;
  res.G.cap = arity_cap;
  res.G.f = wrap(&Tables::g, 0);
  res.contraction = c;
  return res;
}

} // namespace linf
