#include "linf/algebroid.hpp"

namespace linf {

namespace {

template <class F> Vec bilinear(const Vec &x, const Vec &y, F &&f) {
  Vec out;
  for (const auto &[u, cu] : x)
    for (const auto &[v, cv] : y)
      out.axpy(cu * cv, f(u, v));
  return out;
}

Vec gen_times(const DgModule &L, const Vec &r, int g) {
  return L.action(r, Vec::unit(L.idx(g, L.R->unit)));
}

} // namespace

// ------------------------------------------------------------ algebroid

Vec DgLieRinehart::anchor_basis(int u, int a) const {
  const Dgca &r = *R();
  return r.mult(Vec::unit(L->coef_of(u)), rho[L->gen_of(u)][a]);
}

Vec DgLieRinehart::anchor(const Vec &l, const Vec &f) const {
  return bilinear(l, f, [&](int u, int a) { return anchor_basis(u, a); });
}

Vec DgLieRinehart::bracket_basis(int u, int v) const {
  const DgModule &m = *L;
  const Dgca &r = *R();
  const int g = m.gen_of(u), a = m.coef_of(u), h = m.gen_of(v), b = m.coef_of(v);
  const int dg = m.gen_deg[g], dh = m.gen_deg[h];
  Vec out = gen_times(m, r.mult(Vec::unit(a), rho[g][b]), h);
  out.axpy(sgn_pow(dg * r.deg[b]), m.action(r.mul[a][b], br[g][h]));
  out.axpy(-sgn_pow((r.deg[a] + dg) * (r.deg[b] + dh)),
           gen_times(m, r.mult(Vec::unit(b), rho[h][a]), g));
  return out;
}

Vec DgLieRinehart::bracket(const Vec &x, const Vec &y) const {
  return bilinear(x, y, [&](int u, int v) { return bracket_basis(u, v); });
}

Check DgLieRinehart::validate() const {
  Check c;
  const DgModule &m = *L;
  const Dgca &r = *R();
  const int n = m.dim(), k = r.dim();
  auto lab = [&](std::initializer_list<std::string> xs) {
    std::string s = "(";
    for (const auto &x : xs)
      s += (s.size() > 1 ? "," : "") + x;
    return s + ")";
  };
  Check mc = m.validate();
  if (!mc.ok) {
    c.fail("module: " + mc.what, mc.witness);
    return c;
  }
  if ((int)br.size() != m.ngen() || (int)rho.size() != m.ngen()) {
    c.fail("table shape", "");
    return c;
  }
  for (int g = 0; g < m.ngen(); ++g)
    for (int a = 0; a < k; ++a) {
      for (const auto &[b, x] : rho[g][a])
        if (r.deg[b] != r.deg[a] + m.gen_deg[g]) {
          c.fail("anchor degree", lab({m.gen_label[g], r.label[a]}));
          return c;
        }
      for (int b = 0; b < k; ++b) {
        Vec lhs = r.mult(rho[g][a], Vec::unit(b));
        lhs.axpy(sgn_pow(m.gen_deg[g] * r.deg[a]), r.mult(Vec::unit(a), rho[g][b]));
        Vec direct = anchor(Vec::unit(m.idx(g, r.unit)), r.mul[a][b]);
        if (!(lhs == direct))
          c.fail("anchor is a derivation", lab({m.gen_label[g], r.label[a], r.label[b]}));
      }
    }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      Vec uv = bracket_basis(u, v);
      Vec vu = bracket_basis(v, u);
      vu *= -sgn_pow(m.deg[u] * m.deg[v]);
      if (!(uv == vu))
        c.fail("antisymmetry", lab({m.label[u], m.label[v]}));
      // compatibility of Q_L with the bracket
      Vec lhs = m.diff(uv);
      Vec rhs = bracket(m.d[u], Vec::unit(v));
      rhs.axpy(sgn_pow(m.deg[u]), bracket(Vec::unit(u), m.d[v]));
      if (!(lhs == rhs))
        c.fail("differential is a derivation of the bracket", lab({m.label[u], m.label[v]}));
      // anchor is a morphism of brackets
      for (int a = 0; a < k; ++a) {
        Vec l = anchor(uv, Vec::unit(a));
        Vec rr = anchor(Vec::unit(u), anchor_basis(v, a));
        rr.axpy(-sgn_pow(m.deg[u] * m.deg[v]), anchor(Vec::unit(v), anchor_basis(u, a)));
        if (!(l == rr))
          c.fail("anchor preserves brackets", lab({m.label[u], m.label[v], r.label[a]}));
        // Leibniz in the second slot
        Vec fv = m.act[a][v];
        Vec lb = bracket(Vec::unit(u), fv);
        Vec rb = m.action(anchor_basis(u, a), Vec::unit(v));
        rb.axpy(sgn_pow(r.deg[a] * m.deg[u]), m.action(a, uv));
        if (!(lb == rb))
          c.fail("Leibniz rule", lab({m.label[u], r.label[a], m.label[v]}));
      }
    }
  for (int u = 0; u < n; ++u)
    for (int a = 0; a < k; ++a) {
      Vec lhs = r.diff(anchor_basis(u, a));
      lhs.axpy(-sgn_pow(m.deg[u]), anchor(Vec::unit(u), r.d[a]));
      if (!(lhs == anchor(m.d[u], Vec::unit(a))))
        c.fail("anchor intertwines differentials", lab({m.label[u], r.label[a]}));
    }
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      for (int w = 0; w < n; ++w) {
        Vec lhs = bracket(Vec::unit(u), bracket_basis(v, w));
        Vec rhs = bracket(bracket_basis(u, v), Vec::unit(w));
        rhs.axpy(sgn_pow(m.deg[u] * m.deg[v]), bracket(Vec::unit(v), bracket_basis(u, w)));
        if (!(lhs == rhs))
          c.fail("jacobi", lab({m.label[u], m.label[v], m.label[w]}));
      }
  return c;
}

AlgPtr make_algebroid(DgLieRinehart a) {
  Check c = a.validate();
  if (!c.ok)
    throw AxiomError("algebroid: " + c.what + " fails at " + c.witness);
  return std::make_shared<const DgLieRinehart>(std::move(a));
}

AlgPtr algebroid_with_section(const DgcaPtr &R, const std::vector<std::string> &labels,
                              const std::vector<int> &degs, std::vector<std::vector<Vec>> br,
                              std::vector<std::vector<Vec>> rho, const Vec &s) {
  const int G = (int)labels.size();
  DgLieRinehart a0{free_module(R, labels, degs, std::vector<Vec>(G)), br, rho};
  for (const auto &[v, c] : s)
    if (a0.L->deg[v] != 1)
      throw AxiomError("section is not of degree one");
  Vec ss = a0.bracket(s, s);
  if (!ss.empty())
    throw AxiomError("section does not square to zero: [s,s] = " + ss.str(&a0.L->label));
  for (int x = 0; x < R->dim(); ++x)
    if (!(a0.anchor(s, Vec::unit(x)) == R->d[x]))
      throw AxiomError("anchor of the section is not the differential of R at " + R->label[x]);
  std::vector<Vec> gd;
  for (int g = 0; g < G; ++g)
    gd.push_back(a0.bracket(s, Vec::unit(a0.L->idx(g, R->unit))));
  return make_algebroid(DgLieRinehart{free_module(R, labels, degs, gd), std::move(br),
                                      std::move(rho)});
}

AlgPtr from_dgla(const DgLie &g) {
  const DgModule &m = *g.M;
  DgLieRinehart a{g.M, g.br, {}};
  a.rho.assign(m.ngen(), std::vector<Vec>(m.rdim()));
  return make_algebroid(std::move(a));
}

AlgPtr tangent_of(const DgcaPtr &R) {
  const int n = (int)R->gens.size();
  if (n == 0 || (int)(1u << n) != R->dim())
    throw Error("tangent algebroid: base is not an exterior algebra");
  std::vector<std::string> lab;
  std::vector<int> deg;
  std::vector<std::vector<Vec>> rho;
  for (int k = 0; k < n; ++k) {
    lab.push_back("d/d" + R->label[R->gens[k]]);
    deg.push_back(-1);
    std::vector<Vec> on(n);
    on[k] = Vec::unit(R->unit);
    rho.push_back(derivation_from_generators(*R, -1, on));
  }
  std::vector<std::vector<Vec>> br(n, std::vector<Vec>(n));
  Vec s;
  const int rd = R->dim();
  for (int k = 0; k < n; ++k)
    for (const auto &[b, c] : R->d[R->gens[k]])
      s.add(k * rd + b, c);
  return algebroid_with_section(R, lab, deg, br, rho, s);
}

// ----------------------------------------------------------- connections

Vec Connection::apply_basis(int u, int v) const {
  const DgModule &m = *a->L;
  const Dgca &r = *m.R;
  const int g = m.gen_of(u), x = m.coef_of(u), h = m.gen_of(v), b = m.coef_of(v);
  Vec out = gen_times(m, a->rho[g][b], h);
  out.axpy(sgn_pow(m.gen_deg[g] * r.deg[b]), m.action(b, nab[g][h]));
  return m.action(x, out);
}

Vec Connection::apply(const Vec &x, const Vec &y) const {
  return bilinear(x, y, [&](int u, int v) { return apply_basis(u, v); });
}

Connection half_bracket_connection(const AlgPtr &a) {
  Connection c{a, a->br};
  for (auto &row : c.nab)
    for (auto &v : row)
      v *= frac(1, 2);
  return c;
}

Connection zero_connection(const AlgPtr &a) {
  const int G = a->L->ngen();
  return Connection{a, std::vector<std::vector<Vec>>(G, std::vector<Vec>(G))};
}

Connection add_tensor(const Connection &c, const std::vector<std::vector<Vec>> &S) {
  Connection out = c;
  for (std::size_t g = 0; g < S.size(); ++g)
    for (std::size_t h = 0; h < S[g].size(); ++h)
      out.nab[g][h] += S[g][h];
  return out;
}

Vec torsion(const Connection &c, const Vec &x, const Vec &y) {
  const DgModule &m = *c.a->L;
  return bilinear(x, y, [&](int u, int v) {
    Vec t = c.apply_basis(u, v);
    t.axpy(-sgn_pow(m.deg[u] * m.deg[v]), c.apply_basis(v, u));
    t -= c.a->bracket_basis(u, v);
    return t;
  });
}

static Vec gen_vec(const DgModule &m, int g) { return Vec::unit(m.idx(g, m.R->unit)); }

Check check_torsion_free(const Connection &c) {
  Check k;
  const DgModule &m = *c.a->L;
  for (int g = 0; g < m.ngen(); ++g)
    for (int h = 0; h < m.ngen(); ++h) {
      Vec t = torsion(c, gen_vec(m, g), gen_vec(m, h));
      if (!t.empty())
        k.fail("torsion", "(" + m.gen_label[g] + "," + m.gen_label[h] + ") = " + t.str(&m.label));
    }
  return k;
}

Connection torsion_free_correction(const Connection &c) {
  const DgModule &m = *c.a->L;
  Connection out = c;
  for (int g = 0; g < m.ngen(); ++g)
    for (int h = 0; h < m.ngen(); ++h)
      out.nab[g][h].axpy(frac(-1, 2), torsion(c, gen_vec(m, g), gen_vec(m, h)));
  return out;
}

Vec curvature(const Connection &c, const Vec &x, const Vec &y, const Vec &z) {
  const DgModule &m = *c.a->L;
  Vec out;
  for (const auto &[u, cu] : x)
    for (const auto &[v, cv] : y) {
      Vec t = c.apply(Vec::unit(u), c.apply(Vec::unit(v), z));
      t.axpy(-sgn_pow(m.deg[u] * m.deg[v]), c.apply(Vec::unit(v), c.apply(Vec::unit(u), z)));
      t -= c.apply(c.a->bracket_basis(u, v), z);
      out.axpy(cu * cv, t);
    }
  return out;
}

bool is_flat(const Connection &c) {
  const DgModule &m = *c.a->L;
  for (int g = 0; g < m.ngen(); ++g)
    for (int h = 0; h < m.ngen(); ++h)
      for (int k = 0; k < m.ngen(); ++k)
        if (!curvature(c, gen_vec(m, g), gen_vec(m, h), gen_vec(m, k)).empty())
          return false;
  return true;
}

Vec atiyah(const Connection &c, const Vec &x, const Vec &y) {
  const DgModule &m = *c.a->L;
  return bilinear(x, y, [&](int u, int v) {
    Vec t = m.diff(c.apply_basis(u, v));
    t -= c.apply(m.d[u], Vec::unit(v));
    t.axpy(-sgn_pow(m.deg[u]), c.apply(Vec::unit(u), m.d[v]));
    return t;
  });
}

AtiyahReport atiyah_cocycle(const Connection &c) {
  Check tf = check_torsion_free(c);
  if (!tf.ok)
    throw Error("atiyah cocycle: connection has torsion at " + tf.witness);
  const DgModule &m = *c.a->L;
  AtiyahReport rep;
  rep.hom = std::make_shared<HomComplex>(c.a->L, 2);
  rep.symmetric = true;
  for (int u = 0; u < m.dim() && rep.symmetric; ++u)
    for (int v = 0; v < m.dim(); ++v) {
      Vec a = atiyah(c, Vec::unit(u), Vec::unit(v));
      Vec b = atiyah(c, Vec::unit(v), Vec::unit(u));
      b *= sgn_pow(m.deg[u] * m.deg[v]);
      if (!(a == b)) {
        rep.symmetric = false;
        break;
      }
    }
  rep.cocycle = rep.hom->coords(
      1, [&](const Word &w) { return atiyah(c, Vec::unit(w[0]), Vec::unit(w[1])); });
  rep.is_cocycle = rep.hom->d(1, rep.cocycle).empty();
  auto p = rep.hom->primitive(1, rep.cocycle);
  rep.class_vanishes = p.has_value();
  if (p)
    rep.primitive = *p;
  return rep;
}

} // namespace linf
