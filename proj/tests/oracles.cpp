#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace oracle {

using namespace linf;

// ------------------------------------------------------------ dense algebra

namespace {

// Row-reduces a in place; returns pivot columns.
std::vector<int> rref(Matrix &a) {
  std::vector<int> piv;
  const int rows = (int)a.size(), cols = rows ? (int)a[0].size() : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int p = r;
    while (p < rows && a[p][c] == 0)
      ++p;
    if (p == rows)
      continue;
    std::swap(a[p], a[r]);
    Q inv = 1 / a[r][c];
    for (auto &x : a[r])
      x *= inv;
    for (int i = 0; i < rows; ++i)
      if (i != r && a[i][c] != 0) {
        Q f = a[i][c];
        for (int k = 0; k < cols; ++k)
          a[i][k] -= f * a[r][k];
      }
    piv.push_back(c);
    ++r;
  }
  return piv;
}

} // namespace

int rank(Matrix a) { return (int)rref(a).size(); }

std::optional<std::vector<Q>> solve(Matrix a, std::vector<Q> b) {
  const int rows = (int)a.size();
  const int cols = rows ? (int)a[0].size() : 0;
  for (int i = 0; i < rows; ++i)
    a[i].push_back(b[i]);
  std::vector<int> piv = rref(a);
  if (!piv.empty() && piv.back() == cols)
    return std::nullopt;
  std::vector<Q> x(cols);
  for (std::size_t r = 0; r < piv.size(); ++r)
    x[piv[r]] = a[r][cols];
  return x;
}

Matrix from_columns(const std::vector<Vec> &cols, int rows) {
  Matrix a(rows, std::vector<Q>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (const auto &[i, v] : cols[c])
      a[i][c] = v;
  return a;
}

int koszul(const std::vector<int> &deg, const std::vector<int> &perm) {
  int s = 1;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j] && odd(deg[perm[i]]) && odd(deg[perm[j]]))
        s = -s;
  return s;
}

// ------------------------------------------------------------ CE cohomology

LiePairCe liepair_ce(const LiePair &p) {
  LiePairCe ce;
  ce.k = p.k;
  ce.m = p.m;
  ce.c.assign(p.k, std::vector<std::vector<Q>>(p.k, std::vector<Q>(p.k)));
  ce.rho.assign(p.k, std::vector<std::vector<Q>>(p.m, std::vector<Q>(p.m)));
  for (int i = 0; i < p.k; ++i) {
    for (int j = 0; j < p.k; ++j)
      for (const auto &[z, v] : p.g.bracket[p.m + i][p.m + j])
        ce.c[i][j][z - p.m] = v;
    for (int b = 0; b < p.m; ++b)
      for (const auto &[z, v] : p.g.bracket[p.m + i][b])
        if (z < p.m)
          ce.rho[i][b][z] = v;
  }
  return ce;
}

namespace {

// V = symmetric bilinear maps B x B -> B stored as psi[b1][b2][b]
using Bil = std::vector<std::vector<std::vector<Q>>>;

Bil zero_bil(int m) { return Bil(m, std::vector<std::vector<Q>>(m, std::vector<Q>(m))); }

Bil act(const LiePairCe &ce, int i, const Bil &psi) {
  const int m = ce.m;
  Bil out = zero_bil(m);
  for (int b1 = 0; b1 < m; ++b1)
    for (int b2 = 0; b2 < m; ++b2)
      for (int b = 0; b < m; ++b) {
        Q v = 0;
        for (int t = 0; t < m; ++t) {
          v += psi[b1][b2][t] * ce.rho[i][t][b];
          v -= ce.rho[i][b1][t] * psi[t][b2][b];
          v -= ce.rho[i][b2][t] * psi[b1][t][b];
        }
        out[b1][b2][b] = v;
      }
  return out;
}

std::vector<Q> flatten(const std::vector<Bil> &x) {
  std::vector<Q> out;
  for (const auto &psi : x)
    for (const auto &r : psi)
      for (const auto &c : r)
        out.insert(out.end(), c.begin(), c.end());
  return out;
}

} // namespace

std::pair<bool, bool> ce_class(const LiePairCe &ce, const std::vector<Bil> &phi) {
  const int k = ce.k, m = ce.m;
  // cocycle: a_i phi(a_j) - a_j phi(a_i) - phi([a_i, a_j]) = 0
  bool cocycle = true;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Bil x = act(ce, i, phi[j]), y = act(ce, j, phi[i]);
      for (int b1 = 0; b1 < m; ++b1)
        for (int b2 = 0; b2 < m; ++b2)
          for (int b = 0; b < m; ++b) {
            Q v = x[b1][b2][b] - y[b1][b2][b];
            for (int l = 0; l < k; ++l)
              v -= ce.c[i][j][l] * phi[l][b1][b2][b];
            if (v != 0)
              cocycle = false;
          }
    }
  // exactness: phi = d psi over symmetric psi
  std::vector<std::vector<Q>> cols;
  for (int b1 = 0; b1 < m; ++b1)
    for (int b2 = b1; b2 < m; ++b2)
      for (int b = 0; b < m; ++b) {
        Bil psi = zero_bil(m);
        psi[b1][b2][b] = 1;
        psi[b2][b1][b] = 1;
        std::vector<Bil> d;
        for (int i = 0; i < k; ++i)
          d.push_back(act(ce, i, psi));
        cols.push_back(flatten(d));
      }
  std::vector<Q> rhs = flatten(phi);
  Matrix a(rhs.size(), std::vector<Q>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rhs.size(); ++r)
      a[r][c] = cols[c][r];
  return {cocycle, solve(a, rhs).has_value()};
}

std::vector<Bil> curvature_cochain(const LiePair &p, const LiePairConnection &c) {
  const int m = p.m, n = p.m + p.k;
  // nabla_x applied to a B-vector given densely
  auto nab = [&](const std::vector<Q> &x, const std::vector<Q> &b) {
    std::vector<Q> out(m);
    for (int i = 0; i < n; ++i)
      for (int t = 0; t < m; ++t)
        if (x[i] != 0 && b[t] != 0)
          for (const auto &[z, v] : c.nab[i][t])
            out[z] += x[i] * b[t] * v;
    return out;
  };
  auto unit = [](int dim, int i) {
    std::vector<Q> v(dim);
    v[i] = 1;
    return v;
  };
  std::vector<Bil> phi(p.k, zero_bil(m));
  for (int i = 0; i < p.k; ++i)
    for (int b1 = 0; b1 < m; ++b1)
      for (int b2 = 0; b2 < m; ++b2) {
        std::vector<Q> a = unit(n, m + i), jb1 = unit(n, b1), B2 = unit(m, b2);
        std::vector<Q> br(n);
        for (const auto &[z, v] : p.g.bracket[m + i][b1])
          br[z] = v;
        std::vector<Q> t1 = nab(a, nab(jb1, B2)), t2 = nab(jb1, nab(a, B2)), t3 = nab(br, B2);
        for (int b = 0; b < m; ++b)
          phi[i][b1][b2][b] = t1[b] - t2[b] - t3[b];
      }
  return phi;
}

// ------------------------------------------------------------ envelope

GradedLie graded_lie(const DgLie &g) {
  const DgModule &M = *g.M;
  if (M.rdim() != 1)
    throw Error("graded_lie: base is not the ground field");
  GradedLie out;
  out.deg = M.gen_deg;
  const int n = M.ngen();
  out.br.assign(n, std::vector<std::map<int, Q>>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (const auto &[i, c] : g.br[a][b])
        out.br[a][b][i] = c;
  return out;
}

std::map<Word, Q> normal_form(const GradedLie &g, std::map<Word, Q> x) {
  std::map<Word, Q> done;
  while (!x.empty()) {
    auto it = x.begin();
    Word w = it->first;
    Q c = it->second;
    x.erase(it);
    if (c == 0)
      continue;
    std::size_t i = 0;
    while (i + 1 < w.size() && (w[i] < w[i + 1] || (w[i] == w[i + 1] && !odd(g.deg[w[i]]))))
      ++i;
    if (i + 1 >= w.size()) {
      if ((done[w] += c) == 0)
        done.erase(w);
      continue;
    }
    const int a = w[i], b = w[i + 1];
    auto with = [&](const std::vector<int> &mid) {
      Word v(w.begin(), w.begin() + i);
      v.insert(v.end(), mid.begin(), mid.end());
      v.insert(v.end(), w.begin() + i + 2, w.end());
      return v;
    };
    if (a == b) { // odd square
      for (const auto &[z, cz] : g.br[a][a])
        x[with({z})] += c * cz / 2;
    } else {
      x[with({b, a})] += c * ((odd(g.deg[a]) && odd(g.deg[b])) ? -1 : 1);
      for (const auto &[z, cz] : g.br[a][b])
        x[with({z})] += c * cz;
    }
  }
  return done;
}

std::map<Word, Q> symmetrization(const GradedLie &g, const Word &w) {
  std::vector<int> perm(w.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> deg;
  for (int x : w)
    deg.push_back(g.deg[x]);
  std::map<Word, Q> sum;
  Q count = 0;
  do {
    Word v;
    for (int p : perm)
      v.push_back(w[p]);
    sum[v] += koszul(deg, perm);
    count += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (auto &[v, c] : sum)
    c /= count;
  return normal_form(g, sum);
}

// ------------------------------------------------------------ corpus

namespace {

Q small_q(std::mt19937_64 &rng, bool nonzero = false) {
  static const long num[] = {-2, -1, 1, 2, 3};
  static const long den[] = {1, 1, 1, 2, 3};
  std::uniform_int_distribution<int> z(0, 3), pick(0, 4);
  if (!nonzero && z(rng) == 0)
    return 0;
  return frac(num[pick(rng)], den[pick(rng)]);
}

using Mat = std::vector<Vec>; // columns

// Ad_g on sl2 (basis e, h, f) for g = [[p, q], [r, s]] with ps - qr = 1
Mat sl2_automorphism(std::mt19937_64 &rng) {
  // product of elementary matrices keeps the determinant 1
  Q p = 1, q = small_q(rng), r = 0, s = 1;
  Q t = small_q(rng);
  // [[1, q], [0, 1]] * [[1, 0], [t, 1]]
  p = 1 + q * t;
  r = t;
  s = 1;
  auto ad = [&](Q a, Q b, Q c) { // X = [[b, a], [c, -b]]
    Q m00 = b, m01 = a, m10 = c, m11 = -b;
    // g X g^{-1}, g^{-1} = [[s, -q], [-r, p]]
    Q x00 = p * m00 + q * m10, x01 = p * m01 + q * m11;
    Q x10 = r * m00 + s * m10, x11 = r * m01 + s * m11;
    Q y00 = x00 * s - x01 * r, y01 = -x00 * q + x01 * p;
    Q y10 = x10 * s - x11 * r;
    Vec v;
    v.add(0, y01);
    v.add(1, y00);
    v.add(2, y10);
    return v;
  };
  return {ad(1, 0, 0), ad(0, 1, 0), ad(0, 0, 1)};
}

Mat aff1_automorphism(std::mt19937_64 &rng) {
  Q t = small_q(rng), s = small_q(rng, true);
  return {Vec::unit(0) + t * Vec::unit(1), s * Vec::unit(1)};
}

Mat heisenberg_automorphism(std::mt19937_64 &rng) {
  Q a, b, c, d;
  do {
    a = small_q(rng);
    b = small_q(rng);
    c = small_q(rng);
    d = small_q(rng);
  } while (a * d - b * c == 0);
  Q u = small_q(rng), v = small_q(rng);
  return {a * Vec::unit(0) + c * Vec::unit(1) + u * Vec::unit(2),
          b * Vec::unit(0) + d * Vec::unit(1) + v * Vec::unit(2), (a * d - b * c) * Vec::unit(2)};
}

Mat abelian_automorphism(int n, std::mt19937_64 &rng) {
  while (true) {
    Mat m(n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        m[j].add(i, small_q(rng) + (i == j ? 1 : 0));
    if (rank(from_columns(m, n)) == n)
      return m;
  }
}

Vec mat_apply(const Mat &m, const Vec &x) {
  Vec out;
  for (const auto &[i, c] : x)
    out.axpy(c, m[i]);
  return out;
}

struct Shape {
  std::string name;
  LieAlgebra g;
  std::vector<Vec> sub;                       // basis of the subalgebra in g
  std::function<Mat(std::mt19937_64 &)> aut;
  std::vector<Vec> rho;                       // aff(1) -> sub (coordinates in sub basis), optional
};

std::vector<Shape> shapes() {
  auto u = [](int i) { return Vec::unit(i); };
  auto none = std::vector<Vec>{};
  std::vector<Shape> s;
  s.push_back({"sl2>borel", lie_sl2(), {u(0), u(1)}, sl2_automorphism,
               {frac(1, 2) * u(1), u(0)}});
  s.push_back({"sl2>cartan", lie_sl2(), {u(1)}, sl2_automorphism, none});
  s.push_back({"sl2>nilpotent", lie_sl2(), {u(0)}, sl2_automorphism, none});
  s.push_back({"sl2=sl2", lie_sl2(), {u(0), u(1), u(2)}, sl2_automorphism,
               {frac(1, 2) * u(1), u(0)}});
  s.push_back({"aff1>e1", lie_aff1(), {u(0)}, aff1_automorphism, {u(0), Vec()}});
  s.push_back({"aff1>e2", lie_aff1(), {u(1)}, aff1_automorphism, none});
  s.push_back({"aff1=aff1", lie_aff1(), {u(0), u(1)}, aff1_automorphism, {u(0), u(1)}});
  s.push_back({"heis>xz", lie_heisenberg(), {u(0), u(2)}, heisenberg_automorphism, none});
  s.push_back({"heis>z", lie_heisenberg(), {u(2)}, heisenberg_automorphism, none});
  s.push_back({"ab2>line", lie_abelian(2), {u(0) + u(1)},
               [](std::mt19937_64 &r) { return abelian_automorphism(2, r); }, none});
  return s;
}

// structure constants of the span of sub, in that basis
LieAlgebra sub_algebra(const LieAlgebra &g, const std::vector<Vec> &sub) {
  LieAlgebra h;
  const int k = (int)sub.size();
  for (int i = 0; i < k; ++i)
    h.label.push_back("l" + std::to_string(i + 1));
  h.bracket.assign(k, std::vector<Vec>(k));
  Matrix a = from_columns(sub, g.dim());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Vec b = g.br(sub[i], sub[j]);
      std::vector<Q> rhs(g.dim());
      for (const auto &[z, c] : b)
        rhs[z] = c;
      auto x = solve(a, rhs);
      if (!x)
        throw Error("corpus: subalgebra not closed");
      for (int l = 0; l < k; ++l)
        h.bracket[i][j].add(l, (*x)[l]);
    }
  return h;
}

std::vector<Vec> ad_matrix(const LieAlgebra &g, const Vec &x) {
  std::vector<Vec> D;
  for (int j = 0; j < g.dim(); ++j)
    D.push_back(g.br(x, Vec::unit(j)));
  return D;
}

} // namespace

std::vector<CorpusItem> dgla_corpus(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::vector<Shape> sh = shapes();
  const DgcaPtr bases[3] = {dgca_field(), dgca_exterior(1), ce_dgca(lie_aff1())};
  const char *base_name[3] = {"K", "Lambda", "ce(aff1)"};
  std::vector<CorpusItem> out;
  for (int t = 0; t < count; ++t) {
    const int bi = t % 3;
    const Shape &s = sh[std::uniform_int_distribution<int>(0, (int)sh.size() - 1)(rng)];
    const DgcaPtr &R = bases[bi];
    const int rd = R->dim();
    Mat phi = s.aut(rng);
    LieAlgebra h = sub_algebra(s.g, s.sub);
    std::vector<Vec> img; // f on the basis of h, in g
    for (const auto &v : s.sub)
      img.push_back(mat_apply(phi, v));

    // twisting data in h and its image in g
    std::vector<std::pair<int, std::vector<Vec>>> tw_h, tw_g;
    auto push = [&](int xi, const Vec &x_in_h) {
      if (x_in_h.empty())
        return;
      Vec x_in_g;
      for (const auto &[l, c] : x_in_h)
        x_in_g.axpy(c, img[l]);
      tw_h.push_back({xi, ad_matrix(h, x_in_h)});
      tw_g.push_back({xi, ad_matrix(s.g, x_in_g)});
    };
    if (bi == 1) {
      Vec x;
      for (int l = 0; l < h.dim(); ++l)
        x.add(l, small_q(rng));
      push(R->gens[0], x);
    } else if (bi == 2) {
      if (!s.rho.empty()) {
        push(R->gens[0], s.rho[0]);
        push(R->gens[1], s.rho[1]);
      } else {
        Vec x; // e1 -> x, e2 -> 0 is a Lie morphism for every x
        for (int l = 0; l < h.dim(); ++l)
          x.add(l, small_q(rng));
        push(R->gens[0], x);
      }
    }
    CorpusItem it;
    it.name = std::string(base_name[bi]) + ":" + s.name + "#" + std::to_string(t);
    it.R = R;
    it.L = std::make_shared<DgLie>(dgla(R, h, tw_h));
    it.M = std::make_shared<DgLie>(dgla(R, s.g, tw_g));
    std::vector<Vec> images;
    for (const auto &v : img) {
      Vec w;
      for (const auto &[z, c] : v)
        w.add(z * rd + R->unit, c);
      images.push_back(w);
    }
    ModuleMap f = map_from_generators(it.L->M, it.M->M, 0, images);
    it.f = std::make_shared<DgLieMorphism>(DgLieMorphism{it.L.get(), it.M.get(), f});
    // complement of the image by standard basis vectors
    std::vector<Vec> span = img;
    for (int z = 0; z < s.g.dim(); ++z) {
      std::vector<Vec> trial = span;
      trial.push_back(Vec::unit(z));
      if (rank(from_columns(trial, s.g.dim())) == (int)trial.size()) {
        span = trial;
        it.sigma.push_back(Vec::unit(z * rd + R->unit));
      }
    }
    out.push_back(std::move(it));
  }
  return out;
}

std::map<int, SymMap> random_tails(const ModPtr &L, int max_arity, std::mt19937_64 &rng) {
  std::map<int, SymMap> f;
  const DgModule &M = *L;
  for (int n = 2; n <= max_arity; ++n) {
    std::map<Word, Vec> tab;
    for (const Word &g : sym_words(M.ngen(), n, M.gen_deg)) {
      int d = 0;
      for (int x : g)
        d += M.gen_deg[x];
      Vec v;
      for (int u = 0; u < M.dim(); ++u)
        if (M.deg[u] == d)
          v.add(u, small_q(rng));
      Word q = g;
      for (int &x : q)
        x = M.idx(x, M.R->unit);
      tab[q] = v;
    }
    auto tp = std::make_shared<const std::map<Word, Vec>>(tab);
    f[n] = SymMap(0, [L, tp](const Word &w) {
      return extend_from_generators(*L, *L, 0, w, [&](const Word &g) {
        Word q = g;
        for (int &x : q)
          x = L->idx(x, L->R->unit);
        auto it = tp->find(q);
        return it == tp->end() ? Vec() : it->second;
      });
    });
  }
  return f;
}

// ------------------------------------------------------------ algebroids

FlatExample flat_example() {
  DgLie M = dgla_twist(dgla_tensor(lie_aff1(), dgca_exterior(1)), Vec::unit(3));
  FlatExample ex;
  ex.a = from_dgla(M);
  // generators e1, e1.theta, e2, e2.theta; product of the left-symmetric algebra
  auto prod = [](int x, int y) {
    Vec v;
    if (x == 0 && y == 0)
      v.add(0, 3);
    if (x == 0 && y == 1)
      v.add(1, 1);
    return v;
  };
  std::vector<std::vector<Vec>> nab(4, std::vector<Vec>(4));
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y) {
      const int tx = x % 2, ty = y % 2;
      if (tx + ty > 1)
        continue;
      for (const auto &[k, c] : prod(x / 2, y / 2))
        nab[x][y].add(k * 2 + tx + ty, c);
    }
  ex.c = Connection{ex.a, nab};
  std::vector<std::vector<Vec>> S(4, std::vector<Vec>(4));
  S[0][0] = Vec::unit(2);
  ex.c2 = add_tensor(ex.c, S);
  return ex;
}

std::vector<NamedAlgebroid> algebroid_fixtures() {
  std::vector<NamedAlgebroid> out;
  out.push_back({"sl2 over the ground field", from_dgla(dgla(dgca_field(), lie_sl2()))});
  {
    DgcaPtr R = ce_dgca(lie_aff1());
    LieAlgebra a = lie_aff1();
    std::vector<std::pair<int, std::vector<Vec>>> tw;
    for (int i = 0; i < 2; ++i)
      tw.push_back({R->gens[i], a.bracket[i]});
    out.push_back({"aff1 twisted over ce(aff1)", from_dgla(dgla(R, a, tw))});
  }
  out.push_back({"twisted aff1 (x) Lambda", flat_example().a});
  out.push_back({"tangent of ce(aff1)", tangent_of(ce_dgca(lie_aff1()))});
  out.push_back(
      {"pullback of (aff1, e1)", pullback_algebroid(make_lie_pair(lie_aff1(), {0})).alg});
  out.push_back(
      {"pullback of (sl2, Borel)", pullback_algebroid(make_lie_pair(lie_sl2(), {0, 1})).alg});
  return out;
}

// ------------------------------------------------------------ base change

BaseChangeExample base_change_example() {
  DgcaPtr S = dgca_truncated_poly(7), T = dgca_truncated_poly(2);
  const int sd = S->dim();
  std::vector<Vec> gd(2);
  gd[0] = Vec::unit(1 * sd + 2); // x^2 e1
  ModPtr L = free_module(S, {"e0", "e1"}, {0, 1}, gd, {2, 0});

  DgModule m;
  m.R = S;
  m.label = {"e1", "x.e1"};
  m.deg = {1, 1};
  m.wt = {0, 1};
  m.act.assign(sd, std::vector<Vec>(2));
  m.act[0][0] = Vec::unit(0);
  m.act[0][1] = Vec::unit(1);
  m.act[1][0] = Vec::unit(1);
  m.d.assign(2, Vec());
  ModPtr M = make_module(std::move(m));

  BaseChangeExample ex;
  ex.src = abelian_structure(L, 2);
  ex.tgt = abelian_structure(M, 2);
  ex.f.src = L;
  ex.f.tgt = M;
  ex.f.col.assign(L->dim(), Vec());
  for (int a = 0; a < 2; ++a) // r_a e1 -> x^a e1 for a < 2
    ex.f.col[L->idx(1, a)] = Vec::unit(a);
  ex.phi.src = S;
  ex.phi.tgt = T;
  ex.phi.map.assign(sd, Vec());
  ex.phi.map[0] = Vec::unit(0);
  ex.phi.map[1] = Vec::unit(1);
  return ex;
}

} // namespace oracle
