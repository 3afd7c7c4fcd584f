#include "linf/dgmod.hpp"

namespace linf {

Vec DgModule::action(int r, const Vec &v) const {
  Vec out;
  for (const auto &[i, c] : v)
    out.axpy(c, act[r][i]);
  return out;
}

Vec DgModule::action(const Vec &r, const Vec &v) const {
  Vec out;
  for (const auto &[a, c] : r)
    out.axpy(c, action(a, v));
  return out;
}

Vec DgModule::diff(const Vec &v) const {
  Vec out;
  for (const auto &[i, c] : v)
    out.axpy(c, d[i]);
  return out;
}

static bool homog(const Vec &v, const std::vector<int> &deg, int want) {
  for (const auto &kv : v)
    if (deg[kv.first] != want)
      return false;
  return true;
}

Check DgModule::validate() const {
  Check c;
  const int n = dim(), m = rdim();
  if ((int)deg.size() != n || (int)d.size() != n || (int)act.size() != m) {
    c.fail("table shape", "");
    return c;
  }
  auto pair = [&](int r, int v) { return "(" + R->label[r] + "," + label[v] + ")"; };
  for (int v = 0; v < n; ++v) {
    if (!(act[R->unit][v] == Vec::unit(v)))
      c.fail("unital action", label[v]);
    if (!homog(d[v], deg, deg[v] + 1))
      c.fail("differential degree", label[v]);
    if (!diff(d[v]).empty())
      c.fail("d^2=0", label[v]);
  }
  for (int r = 0; r < m; ++r)
    for (int v = 0; v < n; ++v) {
      if (!homog(act[r][v], deg, R->deg[r] + deg[v]))
        c.fail("action degree", pair(r, v));
      Vec lhs = diff(act[r][v]);
      Vec rhs = action(R->d[r], Vec::unit(v));
      rhs.axpy(sgn_pow(R->deg[r]), action(r, d[v]));
      if (!(lhs == rhs))
        c.fail("leibniz", pair(r, v));
      for (int s = 0; s < m; ++s)
        if (!(action(r, act[s][v]) == action(R->mul[r][s], Vec::unit(v))))
          c.fail("associative action", "(" + R->label[r] + "," + R->label[s] + "," + label[v] + ")");
    }
  return c;
}

std::vector<int> DgModule::generators() const {
  std::vector<int> out;
  if (free) {
    for (int g = 0; g < ngen(); ++g)
      out.push_back(idx(g, R->unit));
    return out;
  }
  Reducer span;
  int id = 0;
  for (int v = 0; v < dim(); ++v) {
    if (span.in_span(Vec::unit(v)))
      continue;
    out.push_back(v);
    for (int r = 0; r < rdim(); ++r)
      span.insert(act[r][v], id++);
  }
  return out;
}

Vec DgModule::element(const std::vector<std::pair<Vec, int>> &rg) const {
  Vec out;
  for (const auto &[r, g] : rg)
    for (const auto &[a, c] : r)
      out.add(idx(g, a), c);
  return out;
}

ModPtr make_module(DgModule m) {
  if (m.wt.empty())
    m.wt.assign(m.dim(), 0);
  Check c = m.validate();
  if (!c.ok)
    throw AxiomError("module: " + c.what + " fails at " + c.witness);
  return std::make_shared<const DgModule>(std::move(m));
}

ModPtr free_module(DgcaPtr R, std::vector<std::string> gen_label, std::vector<int> gen_deg,
                   const std::vector<Vec> &gen_diff, std::vector<int> gen_wt) {
  DgModule m;
  m.R = R;
  m.free = true;
  m.gen_label = std::move(gen_label);
  m.gen_deg = std::move(gen_deg);
  const int G = m.ngen(), k = R->dim();
  if (gen_wt.empty())
    gen_wt.assign(G, 0);
  for (int g = 0; g < G; ++g)
    for (int a = 0; a < k; ++a) {
      m.label.push_back(a == R->unit ? m.gen_label[g] : R->label[a] + "*" + m.gen_label[g]);
      m.deg.push_back(R->deg[a] + m.gen_deg[g]);
      m.wt.push_back(R->wt[a] + gen_wt[g]);
    }
  const int n = m.dim();
  m.act.assign(k, std::vector<Vec>(n));
  for (int r = 0; r < k; ++r)
    for (int g = 0; g < G; ++g)
      for (int a = 0; a < k; ++a)
        for (const auto &[b, c] : R->mul[r][a])
          m.act[r][m.idx(g, a)].add(m.idx(g, b), c);
  m.d.assign(n, Vec());
  for (int g = 0; g < G; ++g)
    for (int a = 0; a < k; ++a) {
      Vec v;
      for (const auto &[b, c] : R->d[a])
        v.add(m.idx(g, b), c);
      v.axpy(sgn_pow(R->deg[a]), m.action(a, gen_diff[g]));
      m.d[m.idx(g, a)] = v;
    }
  return make_module(std::move(m));
}

ModPtr zero_module(DgcaPtr R) {
  DgModule m;
  m.R = R;
  m.act.assign(R->dim(), {});
  m.free = true;
  return make_module(std::move(m));
}

int split_word(const DgModule &src, int k, const Word &w, Vec &r, Word &g) {
  const DgcaPtr &R = src.R;
  r = Vec::unit(R->unit);
  g.clear();
  int rdeg_total = 0, sign_exp = 0;
  int gdeg_prefix = 0;
  for (int v : w) {
    int gi = src.gen_of(v), a = src.coef_of(v);
    int ra = R->deg[a];
    sign_exp += gdeg_prefix * ra;
    gdeg_prefix += src.gen_deg[gi];
    rdeg_total += ra;
    r = R->mult(r, Vec::unit(a));
    g.push_back(gi);
  }
  sign_exp += k * rdeg_total;
  int s = normalize_word(g, src.gen_deg);
  return s == 0 ? 0 : s * sgn_pow(sign_exp);
}

Vec extend_from_generators(const DgModule &src, const DgModule &tgt, int k, const Word &w,
                           const std::function<Vec(const Word &)> &on_gens) {
  Vec r;
  Word g;
  int s = split_word(src, k, w, r, g);
  if (s == 0 || r.empty())
    return Vec();
  Vec val = on_gens(g);
  if (val.empty())
    return val;
  Vec out = tgt.action(r, val);
  out *= s;
  return out;
}

Vec ModuleMap::apply(const Vec &v) const {
  Vec out;
  for (const auto &[i, c] : v)
    out.axpy(c, col[i]);
  return out;
}

Check ModuleMap::check_chain() const {
  Check c;
  for (int v = 0; v < src->dim(); ++v) {
    Vec lhs = tgt->diff(col[v]);
    Vec rhs = apply(src->d[v]);
    rhs *= sgn_pow(degree);
    if (!(lhs == rhs))
      c.fail("chain map", src->label[v]);
  }
  return c;
}

Check ModuleMap::check_rlinear() const {
  Check c;
  const DgcaPtr &R = src->R;
  for (int r = 0; r < R->dim(); ++r)
    for (int v = 0; v < src->dim(); ++v) {
      Vec lhs = apply(src->act[r][v]);
      Vec rhs = tgt->action(r, col[v]);
      rhs *= sgn_pow(R->deg[r] * degree);
      if (!(lhs == rhs))
        c.fail("R-linearity", "(" + R->label[r] + "," + src->label[v] + ")");
    }
  for (int v = 0; v < src->dim(); ++v)
    if (!homog(col[v], tgt->deg, src->deg[v] + degree))
      c.fail("map degree", src->label[v]);
  return c;
}

ModuleMap identity_map(const ModPtr &m) {
  ModuleMap f{m, m, 0, {}};
  for (int i = 0; i < m->dim(); ++i)
    f.col.push_back(Vec::unit(i));
  return f;
}

ModuleMap zero_map(const ModPtr &s, const ModPtr &t, int degree) {
  return ModuleMap{s, t, degree, std::vector<Vec>(s->dim())};
}

ModuleMap compose(const ModuleMap &f, const ModuleMap &g) {
  ModuleMap h{g.src, f.tgt, f.degree + g.degree, {}};
  for (const auto &v : g.col)
    h.col.push_back(f.apply(v));
  return h;
}

ModuleMap map_from_generators(const ModPtr &s, const ModPtr &t, int degree,
                              const std::vector<Vec> &gen_images) {
  ModuleMap f{s, t, degree, std::vector<Vec>(s->dim())};
  for (int g = 0; g < s->ngen(); ++g)
    for (int a = 0; a < s->rdim(); ++a) {
      Vec v = t->action(a, gen_images[g]);
      v *= sgn_pow(s->R->deg[a] * degree);
      f.col[s->idx(g, a)] = v;
    }
  return f;
}

Cohomology cohomology(const DgModule &m) { return Cohomology(m.deg, m.d, m.wt); }

Check check_quasi_iso(const ModuleMap &f, int max_weight) {
  Check c;
  Check ch = f.check_chain();
  if (!ch.ok) {
    c.fail(ch.what, ch.witness);
    return c;
  }
  Cohomology hs = cohomology(*f.src), ht = cohomology(*f.tgt);
  std::map<Cohomology::Key, int> keys = hs.dims();
  for (const auto &kv : ht.dims())
    keys[kv.first];
  for (const auto &[key, unused] : keys) {
    (void)unused;
    if (key.second > max_weight)
      continue;
    Cohomology::Key tk{key.first + f.degree, key.second};
    int a = hs.dim(key.first, key.second), b = ht.dim(tk.first, tk.second);
    std::string wit = "degree " + std::to_string(key.first) + " weight " + std::to_string(key.second);
    if (a != b) {
      c.fail("cohomology dimension mismatch (" + std::to_string(a) + " vs " + std::to_string(b) + ")", wit);
      continue;
    }
    Reducer img;
    int id = 0;
    for (const auto &z : hs.reps(key))
      img.insert(ht.coords(f.apply(z), tk), id++);
    if (img.rank() != a)
      c.fail("induced map not injective", wit);
  }
  return c;
}

Check Contraction::validate() const {
  Check c;
  auto merge = [&](const Check &x, const std::string &name) {
    if (!x.ok)
      c.fail(name + ": " + x.what, x.witness);
  };
  if (f.degree != 0 || g.degree != 0 || h.degree != -1 || f.tgt->dim() != g.src->dim() ||
      g.tgt->dim() != f.src->dim() || h.src->dim() != g.src->dim()) {
    c.fail("endpoint or degree mismatch", "");
    return c;
  }
  merge(f.check_chain(), "f chain map");
  merge(g.check_chain(), "g chain map");
  merge(f.check_rlinear(), "f R-linear");
  merge(g.check_rlinear(), "g R-linear");
  merge(h.check_rlinear(), "h R-linear");
  const DgModule &Lm = *L();
  const DgModule &Mm = *M();
  for (int v = 0; v < Mm.dim(); ++v)
    if (!(g.apply(f.col[v]) == Vec::unit(v)))
      c.fail("gf=id", Mm.label[v]);
  for (int v = 0; v < Lm.dim(); ++v) {
    Vec lhs = Lm.diff(h.col[v]) + h.apply(Lm.d[v]);
    Vec rhs = f.apply(g.col[v]) - Vec::unit(v);
    if (!(lhs == rhs))
      c.fail("dh+hd=fg-id", Lm.label[v]);
    if (!h.apply(h.col[v]).empty())
      c.fail("h^2=0", Lm.label[v]);
    if (!g.apply(h.col[v]).empty())
      c.fail("gh=0", Lm.label[v]);
  }
  for (int v = 0; v < Mm.dim(); ++v)
    if (!h.apply(f.col[v]).empty())
      c.fail("hf=0", Mm.label[v]);
  return c;
}

Contraction make_contraction(ModuleMap f, ModuleMap g, ModuleMap h) {
  Contraction c{std::move(f), std::move(g), std::move(h)};
  Check k = c.validate();
  if (!k.ok)
    throw AxiomError("contraction: " + k.what + " fails at " + k.witness);
  return c;
}

Contraction identity_contraction(const ModPtr &m) {
  return make_contraction(identity_map(m), identity_map(m), zero_map(m, m, -1));
}

// ---------------------------------------------------------------- HomComplex

HomComplex::HomComplex(ModPtr m, int arity, bool force_constrained)
    : m_(std::move(m)), n_(arity), constrained_(force_constrained || !m_->free) {
  if (arity < 1)
    throw Error("hom_sym_complex: arity must be positive");
  if (constrained_)
    words_ = sym_words(m_->dim(), n_, m_->deg);
  else
    words_ = sym_words(m_->ngen(), n_, m_->gen_deg);
  for (int i = 0; i < (int)words_.size(); ++i)
    word_index_[words_[i]] = i;
}

const HomComplex::Piece &HomComplex::piece(int k) const {
  auto it = pieces_.find(k);
  if (it != pieces_.end())
    return it->second;
  Piece p;
  const DgModule &L = *m_;
  for (int wi = 0; wi < (int)words_.size(); ++wi) {
    int wd = constrained_ ? word_degree(words_[wi], L.deg) : word_degree(words_[wi], L.gen_deg);
    for (int v = 0; v < L.dim(); ++v)
      if (L.deg[v] - wd == k) {
        p.cell_index[{wi, v}] = (int)p.cells.size();
        p.cells.push_back({wi, v});
      }
  }
  if (constrained_) {
    // R-multilinearity in the first slot; symmetry is built into the words.
    std::vector<Vec> rows;
    std::vector<Word> shorter = n_ >= 2 ? sym_words(L.dim(), n_ - 1, L.deg) : std::vector<Word>{Word{}};
    const DgcaPtr &R = L.R;
    for (int a = 0; a < R->dim(); ++a) {
      if (a == R->unit)
        continue;
      int sr = sgn_pow(R->deg[a] * k);
      for (int x = 0; x < L.dim(); ++x)
        for (const Word &ws : shorter) {
          std::map<int, Vec> by_out; // output index -> row
          for (const auto &[y, cy] : L.act[a][x]) {
            Word w = ws;
            w.push_back(y);
            int s = normalize_word(w, L.deg);
            if (!s)
              continue;
            int wi = word_index_.at(w);
            for (int u = 0; u < L.dim(); ++u) {
              auto ci = p.cell_index.find({wi, u});
              if (ci != p.cell_index.end())
                by_out[u].add(ci->second, cy * s);
            }
          }
          Word w = ws;
          w.push_back(x);
          int s = normalize_word(w, L.deg);
          if (s) {
            int wi = word_index_.at(w);
            for (int v = 0; v < L.dim(); ++v) {
              auto ci = p.cell_index.find({wi, v});
              if (ci == p.cell_index.end())
                continue;
              for (const auto &[u, cu] : L.act[a][v])
                by_out[u].add(ci->second, -cu * s * sr);
            }
          }
          for (auto &kv : by_out)
            if (!kv.second.empty())
              rows.push_back(std::move(kv.second));
        }
    }
    LinearSystem sys;
    sys.cols.assign(p.cells.size(), Vec());
    for (int r = 0; r < (int)rows.size(); ++r)
      for (const auto &[ci, c] : rows[r])
        sys.cols[ci].add(r, c);
    p.basis = sys.kernel();
  }
  return pieces_.emplace(k, std::move(p)).first->second;
}

int HomComplex::dim(int k) const {
  const Piece &p = piece(k);
  return constrained_ ? (int)p.basis.size() : (int)p.cells.size();
}

Vec HomComplex::table_eval(int k, const Piece &p, const Vec &table, const Word &w) const {
  const DgModule &L = *m_;
  auto on_words = [&](const Word &key) {
    Vec out;
    auto wi = word_index_.find(key);
    if (wi == word_index_.end())
      return out;
    for (int v = 0; v < L.dim(); ++v) {
      auto ci = p.cell_index.find({wi->second, v});
      if (ci != p.cell_index.end())
        out.add(v, table.at(ci->second));
    }
    return out;
  };
  if (constrained_)
    return on_words(w);
  return extend_from_generators(L, L, k, w, on_words);
}

Vec HomComplex::eval(int k, const Vec &c, const Word &w) const {
  const Piece &p = piece(k);
  if (!constrained_)
    return table_eval(k, p, c, w);
  Vec table;
  for (const auto &[i, x] : c)
    table.axpy(x, p.basis[i]);
  return table_eval(k, p, table, w);
}

Vec HomComplex::coords(int k, const std::function<Vec(const Word &)> &phi) const {
  const Piece &p = piece(k);
  const DgModule &L = *m_;
  Vec table;
  for (int wi = 0; wi < (int)words_.size(); ++wi) {
    Word kw = words_[wi];
    if (!constrained_)
      for (int &g : kw)
        g = L.idx(g, L.R->unit);
    Vec val = phi(kw);
    for (const auto &[v, c] : val) {
      auto ci = p.cell_index.find({wi, v});
      if (ci == p.cell_index.end())
        throw Error("hom complex: value of wrong degree");
      table.add(ci->second, c);
    }
  }
  if (!constrained_)
    return table;
  LinearSystem sys{p.basis};
  auto sol = sys.solve(table);
  if (!sol)
    throw Error("hom complex: map is not R-multilinear");
  return *sol;
}

Vec HomComplex::raw_d(int k, const std::function<Vec(const Word &)> &phi, const Word &w) const {
  const DgModule &L = *m_;
  Vec out = L.diff(phi(w));
  // phi applied to the lifted differential of w
  int prefix = 0;
  Vec inner;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (const auto &[y, c] : L.d[w[i]]) {
      Word u = w;
      u[i] = y;
      int s = normalize_word(u, L.deg);
      if (!s)
        continue;
      inner.axpy(c * s * sgn_pow(prefix), phi(u));
    }
    prefix += L.deg[w[i]];
  }
  out.axpy(-sgn_pow(k), inner);
  return out;
}

Vec HomComplex::d(int k, const Vec &c) const {
  auto phi = [&](const Word &w) { return eval(k, c, w); };
  return coords(k + 1, [&](const Word &w) { return raw_d(k, phi, w); });
}

std::optional<Vec> HomComplex::primitive(int k, const Vec &z) const {
  auto it = pieces_.find(k - 1);
  piece(k - 1);
  it = pieces_.find(k - 1);
  Piece &p = it->second;
  if (!p.built_d) {
    int dm = dim(k - 1);
    for (int i = 0; i < dm; ++i)
      p.dcols.push_back(d(k - 1, Vec::unit(i)));
    p.built_d = true;
  }
  LinearSystem sys{p.dcols};
  return sys.solve(z);
}

int HomComplex::cohomology_dim(int k) const {
  auto rank_of = [&](int j) {
    LinearSystem sys;
    for (int i = 0; i < dim(j); ++i)
      sys.cols.push_back(d(j, Vec::unit(i)));
    return sys.rank();
  };
  return dim(k) - rank_of(k) - rank_of(k - 1);
}

} // namespace linf
