#include "linf/dgca.hpp"

#include <algorithm>
#include <bit>

namespace linf {

Vec LieAlgebra::br(const Vec &x, const Vec &y) const {
  Vec out;
  for (const auto &[i, a] : x)
    for (const auto &[j, b] : y)
      out.axpy(a * b, bracket[i][j]);
  return out;
}

Check LieAlgebra::validate() const {
  Check c;
  const int n = dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(bracket[i][j] + bracket[j][i]).empty())
        c.fail("antisymmetry", "(" + label[i] + "," + label[j] + ")");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Vec ei = Vec::unit(i), ej = Vec::unit(j), ek = Vec::unit(k);
        Vec s = br(ei, bracket[j][k]) + br(ej, bracket[k][i]) + br(ek, bracket[i][j]);
        if (!s.empty())
          c.fail("jacobi", "(" + label[i] + "," + label[j] + "," + label[k] + ")");
      }
  return c;
}

static LieAlgebra blank_lie(std::vector<std::string> labels) {
  LieAlgebra g;
  g.label = std::move(labels);
  int n = g.dim();
  g.bracket.assign(n, std::vector<Vec>(n));
  return g;
}

static void set_br(LieAlgebra &g, int i, int j, const Vec &v) {
  g.bracket[i][j] = v;
  g.bracket[j][i] = -v;
}

LieAlgebra lie_sl2() {
  LieAlgebra g = blank_lie({"e", "h", "f"});
  set_br(g, 1, 0, Vec::unit(0, 2));
  set_br(g, 1, 2, Vec::unit(2, -2));
  set_br(g, 0, 2, Vec::unit(1));
  return g;
}

LieAlgebra lie_aff1() {
  LieAlgebra g = blank_lie({"e1", "e2"});
  set_br(g, 0, 1, Vec::unit(1));
  return g;
}

LieAlgebra lie_abelian(int n) {
  std::vector<std::string> l;
  for (int i = 0; i < n; ++i)
    l.push_back("a" + std::to_string(i + 1));
  return blank_lie(l);
}

LieAlgebra lie_heisenberg() {
  LieAlgebra g = blank_lie({"x", "y", "z"});
  set_br(g, 0, 1, Vec::unit(2));
  return g;
}

Vec Dgca::mult(const Vec &a, const Vec &b) const {
  Vec out;
  for (const auto &[i, x] : a)
    for (const auto &[j, y] : b)
      out.axpy(x * y, mul[i][j]);
  return out;
}

Vec Dgca::diff(const Vec &a) const {
  Vec out;
  for (const auto &[i, x] : a)
    out.axpy(x, d[i]);
  return out;
}

static bool homogeneous(const Vec &v, const std::vector<int> &deg, int want) {
  for (const auto &kv : v)
    if (deg[kv.first] != want)
      return false;
  return true;
}

Check Dgca::validate() const {
  Check c;
  const int m = dim();
  auto pair = [&](int i, int j) { return "(" + label[i] + "," + label[j] + ")"; };
  if ((int)deg.size() != m || (int)mul.size() != m || (int)d.size() != m) {
    c.fail("table shape", "");
    return c;
  }
  if (unit < 0 || unit >= m) {
    c.fail("unit not found", "");
    return c;
  }
  if (deg[unit] != 0)
    c.fail("unit degree", label[unit]);
  if (!d[unit].empty())
    c.fail("d(1)=0", label[unit]);
  for (int i = 0; i < m; ++i) {
    if (!(mul[unit][i] == Vec::unit(i)) || !(mul[i][unit] == Vec::unit(i)))
      c.fail("unit", label[i]);
    if (!homogeneous(d[i], deg, deg[i] + 1))
      c.fail("differential degree", label[i]);
    if (!diff(d[i]).empty())
      c.fail("d^2=0", label[i]);
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (!homogeneous(mul[i][j], deg, deg[i] + deg[j]))
        c.fail("product degree", pair(i, j));
      Vec sw = mul[j][i];
      sw *= sgn_pow(deg[i] * deg[j]);
      if (!(mul[i][j] == sw))
        c.fail("graded commutativity", pair(i, j));
      Vec lhs = diff(mul[i][j]);
      Vec rhs = mult(d[i], Vec::unit(j));
      rhs.axpy(sgn_pow(deg[i]), mult(Vec::unit(i), d[j]));
      if (!(lhs == rhs))
        c.fail("leibniz", pair(i, j));
    }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        if (!(mult(mul[i][j], Vec::unit(k)) == mult(Vec::unit(i), mul[j][k])))
          c.fail("associativity", "(" + label[i] + "," + label[j] + "," + label[k] + ")");
  return c;
}

DgcaPtr make_dgca(Dgca a) {
  if (a.wt.empty())
    a.wt.assign(a.dim(), 0);
  Check c = a.validate();
  if (!c.ok)
    throw AxiomError("dgca: " + c.what + " fails at " + c.witness);
  return std::make_shared<const Dgca>(std::move(a));
}

DgcaPtr dgca_field() {
  Dgca a;
  a.label = {"1"};
  a.deg = {0};
  a.mul = {{Vec::unit(0)}};
  a.d = {Vec()};
  return make_dgca(std::move(a));
}

// Exterior algebra on n degree-one generators; basis = subsets ordered by
// size then lexicographically.
static Dgca exterior_tables(int n, const std::vector<std::string> &gen_labels) {
  std::vector<unsigned> masks;
  for (unsigned s = 0; s < (1u << n); ++s)
    masks.push_back(s);
  std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    if (pa != pb) return pa < pb;
    // lexicographic on sorted index lists
    for (int i = 0;; ++i) {
      bool ia = a >> i & 1, ib = b >> i & 1;
      if (ia != ib) return ia;
    }
  });
  std::vector<int> index(1u << n);
  for (int k = 0; k < (int)masks.size(); ++k)
    index[masks[k]] = k;
  Dgca a;
  const int m = (int)masks.size();
  for (unsigned s : masks) {
    std::string l;
    for (int i = 0; i < n; ++i)
      if (s >> i & 1)
        l += gen_labels[i];
    a.label.push_back(l.empty() ? "1" : l);
    a.deg.push_back(std::popcount(s));
  }
  a.unit = 0;
  a.mul.assign(m, std::vector<Vec>(m));
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      unsigned s = masks[x], t = masks[y];
      if (s & t)
        continue;
      int inv = 0;
      for (int i = 0; i < n; ++i)
        if (s >> i & 1)
          for (int j = 0; j < i; ++j)
            if (t >> j & 1)
              ++inv;
      a.mul[x][y] = Vec::unit(index[s | t], sgn_pow(inv));
    }
  a.d.assign(m, Vec());
  for (int i = 0; i < n; ++i)
    a.gens.push_back(index[1u << i]);
  return a;
}

DgcaPtr dgca_exterior(int n) {
  std::vector<std::string> l;
  for (int i = 0; i < n; ++i)
    l.push_back(n == 1 ? "xi" : "xi" + std::to_string(i + 1));
  return make_dgca(exterior_tables(n, l));
}

std::vector<Vec> derivation_from_generators(const Dgca &a, int degree,
                                            const std::vector<Vec> &on_gens) {
  const int m = a.dim(), n = (int)a.gens.size();
  std::vector<Vec> out(m);
  std::vector<bool> done(m, false);
  done[a.unit] = true;
  // D(xi^i y) = D(xi^i) y + (-1)^degree xi^i D(y), peeling a generator off each basis element
  for (int x = 0; x < m; ++x) {
    if (done[x])
      continue;
    for (int i = 0; i < n && !done[x]; ++i)
      for (int y = 0; y < m; ++y)
        if (done[y] && a.mul[a.gens[i]][y] == Vec::unit(x)) {
          Vec dv = a.mult(on_gens[i], Vec::unit(y));
          dv.axpy(sgn_pow(degree), a.mult(Vec::unit(a.gens[i]), out[y]));
          out[x] = dv;
          done[x] = true;
          break;
        }
    if (!done[x])
      throw Error("derivation: basis element is not a monomial in the generators");
  }
  return out;
}

DgcaPtr dgca_exterior(int n, const std::vector<Vec> &dgen) {
  std::vector<std::string> l;
  for (int i = 0; i < n; ++i)
    l.push_back(n == 1 ? "xi" : "xi" + std::to_string(i + 1));
  Dgca a = exterior_tables(n, l);
  a.d = derivation_from_generators(a, 1, dgen);
  return make_dgca(std::move(a));
}

DgcaPtr ce_dgca(const LieAlgebra &g) {
  Check cg = g.validate();
  if (!cg.ok)
    throw AxiomError("lie algebra: " + cg.what + " fails at " + cg.witness);
  const int n = g.dim();
  std::vector<std::string> l;
  for (int i = 0; i < n; ++i)
    l.push_back("xi" + std::to_string(i + 1));
  Dgca a = exterior_tables(n, l);
  // d xi^k = -1/2 sum_{i,j} c^k_{ij} xi^i xi^j
  std::vector<Vec> dgen(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Q c = g.bracket[i][j].at(k);
        if (c != 0)
          dgen[k].axpy(-c / 2, a.mul[a.gens[i]][a.gens[j]]);
      }
  a.d = derivation_from_generators(a, 1, dgen);
  a.label[0] = "1";
  return make_dgca(std::move(a));
}

DgcaPtr dgca_truncated_poly(int D) {
  if (D < 1)
    throw Error("truncated_poly: D must be positive");
  Dgca a;
  for (int i = 0; i < D; ++i) {
    a.label.push_back(i == 0 ? "1" : i == 1 ? "x" : "x^" + std::to_string(i));
    a.deg.push_back(0);
    a.wt.push_back(i);
  }
  a.mul.assign(D, std::vector<Vec>(D));
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j)
      if (i + j < D)
        a.mul[i][j] = Vec::unit(i + j);
  a.d.assign(D, Vec());
  return make_dgca(std::move(a));
}

Vec DgcaMorphism::apply(const Vec &a) const {
  Vec out;
  for (const auto &[i, c] : a)
    out.axpy(c, map[i]);
  return out;
}

Check DgcaMorphism::validate() const {
  Check c;
  const int m = src->dim();
  if ((int)map.size() != m) {
    c.fail("table shape", "");
    return c;
  }
  if (!(map[src->unit] == Vec::unit(tgt->unit)))
    c.fail("unit", src->label[src->unit]);
  for (int i = 0; i < m; ++i) {
    if (!homogeneous(map[i], tgt->deg, src->deg[i]))
      c.fail("degree", src->label[i]);
    if (!(apply(src->d[i]) == tgt->diff(map[i])))
      c.fail("differential", src->label[i]);
    for (int j = 0; j < m; ++j)
      if (!(apply(src->mul[i][j]) == tgt->mult(map[i], map[j])))
        c.fail("product", "(" + src->label[i] + "," + src->label[j] + ")");
  }
  return c;
}

DgcaMorphism dgca_identity(const DgcaPtr &a) {
  DgcaMorphism f{a, a, {}};
  for (int i = 0; i < a->dim(); ++i)
    f.map.push_back(Vec::unit(i));
  return f;
}

DgcaMorphism dgca_unit_map(const DgcaPtr &a) {
  return DgcaMorphism{dgca_field(), a, {Vec::unit(a->unit)}};
}

DgcaMorphism compose(const DgcaMorphism &f, const DgcaMorphism &g) {
  if (g.tgt.get() != f.src.get() && g.tgt->dim() != f.src->dim())
    throw Error("compose: endpoint mismatch");
  DgcaMorphism h{g.src, f.tgt, {}};
  for (const auto &v : g.map)
    h.map.push_back(f.apply(v));
  return h;
}

} // namespace linf
