#include "linf/io.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace linf::io {

namespace {

const json &need(const json &j, const char *key) {
  if (!j.is_object() || !j.contains(key))
    throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

int as_int(const json &j, const std::string &what) {
  if (!j.is_number_integer())
    throw SchemaError("field '" + what + "' must be an integer");
  return j.get<int>();
}

int geti(const json &j, const char *key) { return as_int(need(j, key), key); }

int geti(const json &j, const char *key, int dflt) {
  return j.is_object() && j.contains(key) ? as_int(j.at(key), key) : dflt;
}

std::string gets(const json &j, const char *key, const std::string &dflt = "") {
  if (!j.is_object() || !j.contains(key))
    return dflt;
  if (!j.at(key).is_string())
    throw SchemaError(std::string("field '") + key + "' must be a string");
  return j.at(key).get<std::string>();
}

const json &array_of(const json &j, const char *key) {
  const json &a = need(j, key);
  if (!a.is_array())
    throw SchemaError(std::string("field '") + key + "' must be an array");
  return a;
}

void in_range(const Vec &v, int dim, const std::string &what) {
  for (const auto &[i, c] : v)
    if (i < 0 || i >= dim)
      throw SchemaError(what + ": index " + std::to_string(i) + " out of range");
}

void in_range(int i, int dim, const std::string &what) {
  if (i < 0 || i >= dim)
    throw SchemaError(what + ": index " + std::to_string(i) + " out of range");
}

json word_json(const Word &w) { return json(w); }

Word word_of(const json &j) {
  if (!j.is_array())
    throw SchemaError("word must be an array of indices");
  Word w;
  for (const auto &x : j)
    w.push_back(as_int(x, "word"));
  return w;
}

} // namespace

// ---------------------------------------------------------------- output

json to_json(const Vec &v) {
  json a = json::array();
  for (const auto &[i, c] : v)
    a.push_back({{"coef", qstr(c)}, {"idx", i}});
  return a;
}

json to_json(const Dgca &a) {
  json basis = json::array(), mul = json::array(), diff = json::array();
  for (int i = 0; i < a.dim(); ++i) {
    json b = {{"label", a.label[i]}, {"degree", a.deg[i]}};
    if (!a.wt.empty() && a.wt[i] != 0)
      b["weight"] = a.wt[i];
    basis.push_back(b);
  }
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j)
      if (!a.mul[i][j].empty())
        mul.push_back({i, j, to_json(a.mul[i][j])});
  for (int i = 0; i < a.dim(); ++i)
    if (!a.d[i].empty())
      diff.push_back({i, to_json(a.d[i])});
  json out = {{"basis", basis}, {"unit", a.unit}, {"mul", mul}, {"diff", diff}};
  if (!a.gens.empty())
    out["gens"] = a.gens;
  return out;
}

json to_json(const DgModule &m) {
  json out = {{"base", to_json(*m.R)}};
  json diff = json::array();
  if (m.free) {
    json gens = json::array();
    for (int g = 0; g < m.ngen(); ++g)
      gens.push_back({{"label", m.gen_label[g]}, {"degree", m.gen_deg[g]}});
    out["generators"] = gens;
    for (int g = 0; g < m.ngen(); ++g) {
      const Vec &d = m.d[m.idx(g, m.R->unit)];
      if (!d.empty())
        diff.push_back({g, to_json(d)});
    }
  } else {
    json basis = json::array(), act = json::array();
    for (int v = 0; v < m.dim(); ++v)
      basis.push_back({{"label", m.label[v]}, {"degree", m.deg[v]}});
    for (int r = 0; r < m.rdim(); ++r)
      for (int v = 0; v < m.dim(); ++v)
        if (r != m.R->unit && !m.act[r][v].empty())
          act.push_back({r, v, to_json(m.act[r][v])});
    for (int v = 0; v < m.dim(); ++v)
      if (!m.d[v].empty())
        diff.push_back({v, to_json(m.d[v])});
    out["basis"] = basis;
    out["action"] = act;
  }
  out["diff"] = diff;
  return out;
}

namespace {

// words at which a multilinear map out of L is tabulated
std::vector<std::pair<Word, Word>> table_words(const DgModule &L, int n) {
  std::vector<std::pair<Word, Word>> out;
  if (L.free) {
    for (const Word &g : sym_words(L.ngen(), n, L.gen_deg)) {
      Word q = g;
      for (int &x : q)
        x = L.idx(x, L.R->unit);
      out.push_back({g, q});
    }
  } else {
    for (const Word &q : sym_words(L.dim(), n, L.deg))
      out.push_back({q, q});
  }
  return out;
}

json table_json(const DgModule &L, int n, const std::function<Vec(const Word &)> &f) {
  json entries = json::array();
  for (const auto &[key, q] : table_words(L, n)) {
    Vec v = f(q);
    if (!v.empty())
      entries.push_back({{"word", word_json(key)}, {"value", to_json(v)}});
  }
  return {{"arity", n}, {"entries", entries}};
}

} // namespace

json to_json(const LInftyStructure &s, int cap) {
  json br = json::array();
  for (int n = 2; n <= cap; ++n)
    br.push_back(table_json(*s.L, n, [&](const Word &q) { return s.bracket(n, q); }));
  return {{"module", to_json(*s.L)}, {"cap", cap}, {"brackets", br}};
}

json to_json(const LInftyMorphism &F, int cap) {
  json t = json::array();
  for (int n = 1; n <= cap; ++n)
    t.push_back(table_json(*F.src->L, n, [&](const Word &q) { return F.taylor(n, q); }));
  return {{"src", to_json(*F.src, cap)}, {"tgt", to_json(*F.tgt, cap)}, {"taylor", t}};
}

json to_json(const Check &c) {
  json out = {{"ok", c.ok}};
  if (!c.ok) {
    out["what"] = c.what;
    out["witness"] = c.witness;
    out["failures"] = c.failures;
  }
  return out;
}

// ----------------------------------------------------------------- input

Reader::Reader(std::string dir, Caps caps) : dir_(std::move(dir)), caps_(caps) {}

json Reader::resolve(const json &j) const {
  if (j.is_object() && j.size() == 1 && j.contains("file")) {
    if (!j.at("file").is_string())
      throw SchemaError("field 'file' must be a string");
    std::filesystem::path p(j.at("file").get<std::string>());
    if (p.is_relative())
      p = std::filesystem::path(dir_) / p;
    std::ifstream in(p);
    if (!in)
      throw SchemaError("cannot open referenced file " + p.string());
    try {
      return resolve(json::parse(in));
    } catch (const json::parse_error &e) {
      throw SchemaError("invalid JSON in " + p.string() + ": " + e.what());
    }
  }
  return j;
}

Vec Reader::vec(const json &jin) const {
  json j = resolve(jin);
  if (!j.is_array())
    throw SchemaError("vector must be an array of {coef, idx}");
  Vec v;
  for (const auto &t : j) {
    const json &c = need(t, "coef");
    Q q;
    try {
      q = c.is_string() ? parse_q(c.get<std::string>())
                        : c.is_number_integer() ? Q(c.get<long>()) : throw SchemaError("");
    } catch (const Error &) {
      throw SchemaError("bad coefficient " + c.dump());
    }
    v.add(geti(t, "idx"), q);
  }
  return v;
}

LieAlgebra Reader::lie(const json &jin) const {
  json j = resolve(jin);
  if (j.is_object() && j.contains("named")) {
    std::string n = gets(j, "named");
    if (n == "sl2")
      return lie_sl2();
    if (n == "aff1")
      return lie_aff1();
    if (n == "heisenberg")
      return lie_heisenberg();
    if (n == "abelian")
      return lie_abelian(geti(j, "dim"));
    throw SchemaError("unknown Lie algebra '" + n + "'");
  }
  LieAlgebra g;
  for (const auto &l : array_of(j, "labels"))
    g.label.push_back(l.get<std::string>());
  const int n = g.dim();
  g.bracket.assign(n, std::vector<Vec>(n));
  for (const auto &e : array_of(j, "brackets")) {
    if (!e.is_array() || e.size() != 3)
      throw SchemaError("bracket entry must be [i, j, vector]");
    int a = as_int(e[0], "brackets"), b = as_int(e[1], "brackets");
    in_range(a, n, "lie bracket");
    in_range(b, n, "lie bracket");
    g.bracket[a][b] = vec(e[2]);
    in_range(g.bracket[a][b], n, "lie bracket");
  }
  Check c = g.validate();
  if (!c.ok)
    throw AxiomError("lie algebra: " + c.what + " fails at " + c.witness);
  return g;
}

DgcaPtr Reader::dgca(const json &jin) {
  json j = resolve(jin);
  const std::string key = j.dump();
  if (auto it = dgcas_.find(key); it != dgcas_.end())
    return it->second;
  DgcaPtr out;
  if (j.is_string()) {
    if (j.get<std::string>() != "field")
      throw SchemaError("unknown algebra '" + j.get<std::string>() + "'");
    out = dgca_field();
  } else if (j.is_object() && j.contains("exterior")) {
    out = dgca_exterior(as_int(j.at("exterior"), "exterior"));
  } else if (j.is_object() && j.contains("ce")) {
    out = ce_dgca(lie(j.at("ce")));
  } else if (j.is_object() && j.contains("truncated_poly")) {
    const json &d = j.at("truncated_poly");
    out = dgca_truncated_poly(d.is_null() ? caps_.poly_degree + 1 : as_int(d, "truncated_poly"));
  } else {
    Dgca a;
    for (const auto &b : array_of(j, "basis")) {
      a.label.push_back(gets(b, "label"));
      a.deg.push_back(geti(b, "degree"));
      a.wt.push_back(geti(b, "weight", 0));
    }
    const int n = a.dim();
    if (n == 0)
      throw SchemaError("algebra with empty basis");
    a.unit = geti(j, "unit");
    in_range(a.unit, n, "unit");
    a.mul.assign(n, std::vector<Vec>(n));
    a.d.assign(n, Vec());
    for (const auto &e : array_of(j, "mul")) {
      if (!e.is_array() || e.size() != 3)
        throw SchemaError("mul entry must be [i, j, vector]");
      int x = as_int(e[0], "mul"), y = as_int(e[1], "mul");
      in_range(x, n, "mul");
      in_range(y, n, "mul");
      a.mul[x][y] = vec(e[2]);
      in_range(a.mul[x][y], n, "mul");
    }
    for (int i = 0; i < n; ++i) {
      if (a.mul[a.unit][i].empty())
        a.mul[a.unit][i] = Vec::unit(i);
      if (a.mul[i][a.unit].empty())
        a.mul[i][a.unit] = Vec::unit(i);
    }
    if (j.contains("diff"))
      for (const auto &e : array_of(j, "diff")) {
        if (!e.is_array() || e.size() != 2)
          throw SchemaError("diff entry must be [i, vector]");
        int x = as_int(e[0], "diff");
        in_range(x, n, "diff");
        a.d[x] = vec(e[1]);
        in_range(a.d[x], n, "diff");
      }
    if (j.contains("gens"))
      for (const auto &g : array_of(j, "gens"))
        a.gens.push_back(as_int(g, "gens"));
    out = make_dgca(std::move(a));
  }
  dgcas_[key] = out;
  return out;
}

ModPtr Reader::module(const json &jin) {
  json j = resolve(jin);
  DgcaPtr R = dgca(need(j, "base"));
  if (j.contains("generators")) {
    std::vector<std::string> lab;
    std::vector<int> deg, wt;
    for (const auto &g : array_of(j, "generators")) {
      lab.push_back(gets(g, "label"));
      deg.push_back(geti(g, "degree"));
      wt.push_back(geti(g, "weight", 0));
    }
    const int n = (int)lab.size(), dim = n * R->dim();
    std::vector<Vec> gd(n);
    if (j.contains("diff"))
      for (const auto &e : array_of(j, "diff")) {
        if (!e.is_array() || e.size() != 2)
          throw SchemaError("diff entry must be [generator, vector]");
        int g = as_int(e[0], "diff");
        in_range(g, n, "module diff");
        gd[g] = vec(e[1]);
        in_range(gd[g], dim, "module diff");
      }
    return free_module(R, lab, deg, gd, wt);
  }
  DgModule m;
  m.R = R;
  for (const auto &b : array_of(j, "basis")) {
    m.label.push_back(gets(b, "label"));
    m.deg.push_back(geti(b, "degree"));
    m.wt.push_back(geti(b, "weight", 0));
  }
  const int n = m.dim();
  m.act.assign(R->dim(), std::vector<Vec>(n));
  m.d.assign(n, Vec());
  for (int v = 0; v < n; ++v)
    m.act[R->unit][v] = Vec::unit(v);
  if (j.contains("action"))
    for (const auto &e : array_of(j, "action")) {
      if (!e.is_array() || e.size() != 3)
        throw SchemaError("action entry must be [r, v, vector]");
      int r = as_int(e[0], "action"), v = as_int(e[1], "action");
      in_range(r, R->dim(), "action");
      in_range(v, n, "action");
      m.act[r][v] = vec(e[2]);
      in_range(m.act[r][v], n, "action");
    }
  if (j.contains("diff"))
    for (const auto &e : array_of(j, "diff")) {
      if (!e.is_array() || e.size() != 2)
        throw SchemaError("diff entry must be [v, vector]");
      int v = as_int(e[0], "diff");
      in_range(v, n, "module diff");
      m.d[v] = vec(e[1]);
      in_range(m.d[v], n, "module diff");
    }
  return make_module(std::move(m));
}

namespace {

// arity -> sorted word -> value, words over generators (free) or the Q-basis
using Tables = std::map<int, std::map<Word, Vec>>;

Tables read_tables(const Reader &rd, const json &arr, const DgModule &src, int tgt_dim,
                   int min_arity) {
  Tables t;
  const std::vector<int> &deg = src.free ? src.gen_deg : src.deg;
  const int range = src.free ? src.ngen() : src.dim();
  for (const auto &blk : arr) {
    const int n = geti(blk, "arity");
    if (n < min_arity)
      throw SchemaError("arity " + std::to_string(n) + " below " + std::to_string(min_arity));
    for (const auto &e : array_of(blk, "entries")) {
      Word w = word_of(need(e, "word"));
      if ((int)w.size() != n)
        throw SchemaError("word length differs from arity " + std::to_string(n));
      for (int x : w)
        in_range(x, range, "table word");
      Vec v = rd.vec(need(e, "value"));
      in_range(v, tgt_dim, "table value");
      const int s = normalize_word(w, deg);
      if (s == 0) {
        if (!v.empty())
          throw SchemaError("nonzero value on a word with a repeated odd entry");
        continue;
      }
      if (t[n].count(w))
        throw SchemaError("duplicate table entry " + word_str(w));
      t[n][w] = s * v;
    }
  }
  return t;
}

SymMap map_from_table(const ModPtr &src, const ModPtr &tgt, int degree,
                      std::shared_ptr<const std::map<Word, Vec>> tab) {
  if (src->free)
    return SymMap(degree, [src, tgt, degree, tab](const Word &w) {
      return extend_from_generators(*src, *tgt, degree, w, [&](const Word &g) {
        auto it = tab->find(g);
        return it == tab->end() ? Vec() : it->second;
      });
    });
  return SymMap::table(degree, *tab);
}

} // namespace

SPtr Reader::linfty(const json &jin) {
  json j = resolve(jin);
  if (j.contains("dgla"))
    return decalage(*dgla(j.at("dgla")), geti(j, "cap", caps_.arity));
  auto s = std::make_shared<LInftyStructure>();
  s->L = module(need(j, "module"));
  s->cap = geti(j, "cap", caps_.arity);
  Tables t = j.contains("brackets")
                 ? read_tables(*this, array_of(j, "brackets"), *s->L, s->L->dim(), 2)
                 : Tables{};
  for (auto &[n, tab] : t)
    s->q[n] = map_from_table(s->L, s->L, 1, std::make_shared<const std::map<Word, Vec>>(tab));
  return s;
}

LInftyMorphism Reader::morphism(const json &jin) {
  json j = resolve(jin);
  LInftyMorphism F;
  F.src = linfty(need(j, "src"));
  F.tgt = linfty(need(j, "tgt"));
  F.cap = std::min(F.src->cap, F.tgt->cap);
  Tables t = read_tables(*this, array_of(j, "taylor"), *F.src->L, F.tgt->L->dim(), 1);
  if (!t.count(1))
    throw SchemaError("morphism needs its arity-one component");
  for (auto &[n, tab] : t)
    F.f[n] = map_from_table(F.src->L, F.tgt->L, 0,
                            std::make_shared<const std::map<Word, Vec>>(tab));
  return F;
}

std::shared_ptr<DgLie> Reader::dgla(const json &jin) {
  json j = resolve(jin);
  std::shared_ptr<DgLie> g;
  if (j.contains("tensor")) {
    const json &t = j.at("tensor");
    g = std::make_shared<DgLie>(dgla_tensor(lie(need(t, "lie")), dgca(need(t, "dgca"))));
  } else {
    DgcaPtr R = dgca(need(j, "base"));
    LieAlgebra l = lie(need(j, "lie"));
    std::vector<std::pair<int, std::vector<Vec>>> twist;
    if (j.contains("twist"))
      for (const auto &t : array_of(j, "twist")) {
        int xi = geti(t, "xi");
        in_range(xi, R->dim(), "twist");
        std::vector<Vec> D(l.dim());
        for (const auto &e : array_of(t, "derivation")) {
          int k = as_int(e.at(0), "derivation");
          in_range(k, l.dim(), "derivation");
          D[k] = vec(e.at(1));
          in_range(D[k], l.dim(), "derivation");
        }
        twist.push_back({xi, D});
      }
    g = std::make_shared<DgLie>(linf::dgla(R, l, twist));
  }
  if (j.contains("mc")) {
    Vec X = vec(j.at("mc"));
    in_range(X, g->M->dim(), "mc");
    g = std::make_shared<DgLie>(dgla_twist(*g, X));
  }
  keep_.push_back(g);
  return g;
}

std::shared_ptr<DgLieMorphism> Reader::dgla_morphism(const json &jin) {
  json j = resolve(jin);
  auto s = dgla(need(j, "src")), t = dgla(need(j, "tgt"));
  ModuleMap f = module_map(need(j, "map"), s->M, t->M);
  auto out = std::make_shared<DgLieMorphism>(DgLieMorphism{s.get(), t.get(), f});
  return out;
}

ModuleMap Reader::module_map(const json &jin, const ModPtr &src, const ModPtr &tgt) {
  json j = resolve(jin);
  const int degree = geti(j, "degree", 0);
  if (j.contains("images")) {
    if (!src->free)
      throw SchemaError("generator images need a free source module");
    const json &im = array_of(j, "images");
    if ((int)im.size() != src->ngen())
      throw SchemaError("expected one image per generator");
    std::vector<Vec> g;
    for (const auto &x : im) {
      g.push_back(vec(x));
      in_range(g.back(), tgt->dim(), "map image");
    }
    return map_from_generators(src, tgt, degree, g);
  }
  ModuleMap f;
  f.src = src;
  f.tgt = tgt;
  f.degree = degree;
  f.col.assign(src->dim(), Vec());
  for (const auto &e : array_of(j, "cols")) {
    int i = as_int(e.at(0), "cols");
    in_range(i, src->dim(), "map column");
    f.col[i] = vec(e.at(1));
    in_range(f.col[i], tgt->dim(), "map column");
  }
  return f;
}

DgcaMorphism Reader::dgca_morphism(const json &jin, const DgcaPtr &default_src) {
  json j = resolve(jin);
  DgcaMorphism phi;
  phi.src = j.contains("src") ? dgca(j.at("src")) : default_src;
  phi.tgt = j.contains("tgt") ? dgca(j.at("tgt")) : default_src;
  if (!phi.src || !phi.tgt)
    throw SchemaError("algebra morphism needs src and tgt");
  phi.map.assign(phi.src->dim(), Vec());
  for (const auto &e : array_of(j, "map")) {
    int i = as_int(e.at(0), "map");
    in_range(i, phi.src->dim(), "algebra map");
    phi.map[i] = vec(e.at(1));
    in_range(phi.map[i], phi.tgt->dim(), "algebra map");
  }
  return phi;
}

AlgPtr Reader::algebroid(const json &jin) {
  json j = resolve(jin);
  if (j.contains("dgla"))
    return from_dgla(*dgla(j.at("dgla")));
  if (j.contains("tangent"))
    return tangent_of(dgca(j.at("tangent")));
  if (j.contains("liepair_pullback"))
    return pullback_algebroid(liepair(j.at("liepair_pullback"))).alg;
  DgcaPtr R = dgca(need(j, "base"));
  std::vector<std::string> lab;
  std::vector<int> deg;
  for (const auto &g : array_of(j, "generators")) {
    lab.push_back(gets(g, "label"));
    deg.push_back(geti(g, "degree"));
  }
  const int n = (int)lab.size(), rd = R->dim();
  std::vector<std::vector<Vec>> br(n, std::vector<Vec>(n)), rho(n, std::vector<Vec>(rd));
  if (j.contains("bracket"))
    for (const auto &e : array_of(j, "bracket")) {
      int g = as_int(e.at(0), "bracket"), h = as_int(e.at(1), "bracket");
      in_range(g, n, "bracket");
      in_range(h, n, "bracket");
      br[g][h] = vec(e.at(2));
      in_range(br[g][h], n * rd, "bracket");
    }
  if (j.contains("anchor"))
    for (const auto &e : array_of(j, "anchor")) {
      int g = as_int(e.at(0), "anchor"), a = as_int(e.at(1), "anchor");
      in_range(g, n, "anchor");
      in_range(a, rd, "anchor");
      rho[g][a] = vec(e.at(2));
      in_range(rho[g][a], rd, "anchor");
    }
  if (j.contains("section")) {
    Vec s = vec(j.at("section"));
    in_range(s, n * rd, "section");
    return algebroid_with_section(R, lab, deg, br, rho, s);
  }
  std::vector<Vec> gd(n);
  if (j.contains("diff"))
    for (const auto &e : array_of(j, "diff")) {
      int g = as_int(e.at(0), "diff");
      in_range(g, n, "diff");
      gd[g] = vec(e.at(1));
      in_range(gd[g], n * rd, "diff");
    }
  return make_algebroid(DgLieRinehart{free_module(R, lab, deg, gd), br, rho});
}

Connection Reader::connection(const json *jp, const AlgPtr &a) {
  Connection c = half_bracket_connection(a);
  if (!jp || jp->is_null())
    return c;
  json j = resolve(*jp);
  const int n = a->L->ngen(), dim = a->L->dim();
  auto table = [&](const char *key) {
    std::vector<std::vector<Vec>> t(n, std::vector<Vec>(n));
    for (const auto &e : array_of(j, key)) {
      int g = as_int(e.at(0), key), h = as_int(e.at(1), key);
      in_range(g, n, key);
      in_range(h, n, key);
      t[g][h] = vec(e.at(2));
      in_range(t[g][h], dim, key);
    }
    return t;
  };
  if (j.contains("table"))
    c.nab = table("table");
  if (j.contains("add"))
    c = add_tensor(c, table("add"));
  if (j.value("torsion_free_correction", false))
    c = torsion_free_correction(c);
  return c;
}

LiePair Reader::liepair(const json &jin) const {
  json j = resolve(jin);
  LieAlgebra g = lie(need(j, "lie"));
  std::vector<int> sub;
  for (const auto &x : array_of(j, "sub"))
    sub.push_back(as_int(x, "sub"));
  std::vector<Vec> split;
  if (j.contains("splitting"))
    for (const auto &x : array_of(j, "splitting")) {
      split.push_back(vec(x));
      in_range(split.back(), g.dim(), "splitting");
    }
  return make_lie_pair(g, sub, split);
}

LiePairConnection Reader::liepair_connection(const json *jp, const LiePair &p) const {
  LiePairConnection c = default_connection(p);
  if (!jp || jp->is_null())
    return c;
  json j = resolve(*jp);
  for (const auto &e : array_of(j, "add")) {
    int x = as_int(e.at(0), "add"), b = as_int(e.at(1), "add");
    in_range(x, p.m + p.k, "connection");
    in_range(b, p.m, "connection");
    Vec v = vec(e.at(2));
    in_range(v, p.m, "connection");
    c.nab[x][b] += v;
  }
  return c;
}

// ----------------------------------------------------------------- verbs

namespace {

struct Report {
  json verdicts = json::array();
  json results = json::object();
  json certificates = json::object();
  std::vector<std::string> lines;
  bool failed = false;

  void verdict(const std::string &name, const Check &c) {
    json v = to_json(c);
    v["name"] = name;
    verdicts.push_back(v);
    if (c.ok) {
      lines.push_back("PASS " + name);
    } else {
      failed = true;
      lines.push_back("FAIL " + name + ": " + c.what + " at " + c.witness);
    }
  }
  void verdict(const std::string &name, bool ok, const std::string &what = "",
               const std::string &witness = "") {
    Check c;
    if (!ok)
      c.fail(what, witness);
    verdict(name, c);
  }
  void note(const std::string &key, const json &value) {
    results[key] = value;
    if (value.is_boolean() || value.is_number() || value.is_string())
      lines.push_back("  " + key + " = " + value.dump());
  }
};

using VerbFn = std::function<void(Reader &, const json &, Report &)>;

void arity_within_weight(const Caps &c) {
  if (c.arity > c.weight)
    throw SchemaError("arity cap " + std::to_string(c.arity) + " exceeds weight cap " +
                      std::to_string(c.weight));
}

const json *opt(const json &job, const char *key) {
  return job.contains(key) ? &job.at(key) : nullptr;
}


json coder_json(const Coder &q) {
  json t = json::array();
  for (const auto &[w, v] : q.taylor)
    if (!v.empty())
      t.push_back({{"word", w}, {"value", to_json(v)}});
  return {{"degree", q.degree}, {"taylor", t}};
}

Coder coder_of(const Reader &rd, const json &j, int dim) {
  Coder q;
  q.degree = geti(j, "degree");
  for (const auto &e : array_of(j, "taylor")) {
    Vec v = rd.vec(need(e, "value"));
    in_range(v, dim, "certificate");
    q.taylor[word_of(need(e, "word"))] = v;
  }
  return q;
}

bool same_brackets(const LInftyStructure &a, const LInftyStructure &b, int cap,
                   std::string &witness) {
  for (int n = 2; n <= cap; ++n)
    for (const auto &[key, q] : table_words(*a.L, n))
      if (!(a.bracket(n, q) == b.bracket(n, q))) {
        witness = "arity " + std::to_string(n) + " at " + word_str(key, &a.L->gen_label);
        return false;
      }
  return true;
}

void v_validate(Reader &rd, const json &job, Report &r) {
  const int cap = rd.caps().arity;
  bool any = false;
  if (job.contains("dgca")) {
    any = true;
    r.verdict("dgca axioms", rd.dgca(job.at("dgca"))->validate());
  }
  if (job.contains("module")) {
    any = true;
    r.verdict("module axioms", rd.module(job.at("module"))->validate());
  }
  if (job.contains("linfty")) {
    any = true;
    r.verdict("bracket multilinearity", check_multilinear(*rd.linfty(job.at("linfty")), cap));
  }
  if (job.contains("morphism")) {
    any = true;
    LInftyMorphism F = rd.morphism(job.at("morphism"));
    Check c;
    for (int n = 1; n <= cap && c.ok; ++n)
      c = check_multilinear_map(*F.src->L, *F.tgt->L, F.f[n], n);
    r.verdict("taylor multilinearity", c);
  }
  if (job.contains("dgla")) {
    any = true;
    r.verdict("dg lie axioms", rd.dgla(job.at("dgla"))->validate());
  }
  if (job.contains("dgla_morphism")) {
    any = true;
    r.verdict("dg lie morphism", rd.dgla_morphism(job.at("dgla_morphism"))->validate());
  }
  if (job.contains("algebroid")) {
    any = true;
    AlgPtr a = rd.algebroid(job.at("algebroid"));
    r.verdict("lie-rinehart axioms", a->validate());
    if (job.contains("connection"))
      r.verdict("torsion free", check_torsion_free(rd.connection(&job.at("connection"), a)));
  }
  if (job.contains("liepair")) {
    any = true;
    LiePair p = rd.liepair(job.at("liepair"));
    r.verdict("lie pair connection",
              check_liepair_connection(p, rd.liepair_connection(opt(job, "connection"), p)));
  }
  if (!any)
    throw SchemaError("validate: no object given");
}

void v_check_linfty(Reader &rd, const json &job, Report &r) {
  SPtr s = rd.linfty(need(job, "linfty"));
  const Caps &c = rd.caps();
  r.verdict("multilinearity", check_multilinear(*s, c.arity));
  r.verdict("generalized jacobi", check_linfty(*s, c.arity, {c.exhaustive}));
}

void v_check_morphism(Reader &rd, const json &job, Report &r) {
  LInftyMorphism F = rd.morphism(need(job, "morphism"));
  const Caps &c = rd.caps();
  F.cap = std::min(F.cap, c.arity);
  r.verdict("morphism identities", check_morphism(F, c.arity, {c.exhaustive}));
}

void v_transfer(Reader &rd, const json &job, Report &r) {
  SPtr s = rd.linfty(need(job, "linfty"));
  ModPtr M = rd.module(need(job, "small"));
  const json &cj = need(job, "contraction");
  Contraction c = make_contraction(rd.module_map(need(cj, "f"), M, s->L),
                                   rd.module_map(need(cj, "g"), s->L, M),
                                   rd.module_map(need(cj, "h"), s->L, s->L));
  const int n = rd.caps().arity;
  TransferResult t = homotopy_transfer(s, c, n);
  r.verdict("transferred structure", check_linfty(*t.transferred, n));
  r.verdict("inclusion morphism", check_morphism(t.F, n));
  r.verdict("projection morphism", check_morphism(t.G, n));
  r.results["transferred"] = to_json(*t.transferred, n);
  r.results["F"] = to_json(t.F, n);
  r.results["G"] = to_json(t.G, n);
}

void v_cone(Reader &rd, const json &job, Report &r) {
  auto f = rd.dgla_morphism(need(job, "dgla_morphism"));
  r.verdict("dg lie morphism", f->validate());
  const int n = rd.caps().arity;
  ConeStructure cs = cone_structure(*f, n);
  r.verdict("cone structure", check_linfty(*cs.s, n));
  r.results["cone"] = to_json(*cs.s, n);
}

void v_derived(Reader &rd, const json &job, Report &r) {
  auto f = rd.dgla_morphism(need(job, "dgla_morphism"));
  r.verdict("dg lie morphism", f->validate());
  std::vector<Vec> sigma;
  for (const auto &x : array_of(job, "sigma"))
    sigma.push_back(rd.vec(x));
  std::vector<std::string> labels;
  if (job.contains("labels"))
    labels = job.at("labels").get<std::vector<std::string>>();
  SplittingData sp = make_splitting(*f, sigma, labels);
  const std::string b = gets(job, "branch", "transfer");
  if (b != "transfer" && b != "closed_form")
    throw SchemaError("branch must be 'transfer' or 'closed_form'");
  if (b == "closed_form" && !sp.image_abelian)
    throw SchemaError("closed form needs a splitting with abelian image");
  const int n = rd.caps().arity;
  SPtr s = derived_brackets(sp, n, b == "transfer" ? DerivedBranch::transfer
                                                   : DerivedBranch::closed_form);
  r.verdict("derived structure", check_linfty(*s, n));
  r.note("chain_map_splitting", sp.is_chain_map);
  r.note("image_abelian", sp.image_abelian);
  if (sp.is_chain_map) {
    std::string w;
    r.verdict("higher brackets vanish",
              same_brackets(*s, *abelian_structure(s->L, n), n, w), "nonzero bracket", w);
  }
  if (sp.image_abelian && b == "transfer") {
    std::string w;
    SPtr t = derived_brackets(sp, n, DerivedBranch::closed_form);
    r.verdict("closed form agrees", same_brackets(*s, *t, n, w), "tables differ", w);
  }
  r.results["brackets"] = to_json(*s, n);
}

void v_linearize(Reader &rd, const json &job, Report &r) {
  SPtr s = rd.linfty(need(job, "linfty"));
  const int W = rd.caps().weight;
  const DgModule &L = *s->L;
  if (!L.free)
    throw SchemaError("linearize needs a free module");
  if (job.contains("certificate")) {
    std::vector<Coder> tau;
    for (const auto &x : array_of(need(job, "certificate"), "tau"))
      tau.push_back(coder_of(rd, x, L.dim()));
    if ((int)tau.size() != L.ngen())
      throw SchemaError("certificate needs one coderivation per generator");
    r.verdict("splitting certificate", verify_splitting(*s, W, tau));
    return;
  }
  ObstructionCertificate c = linearization_obstruction(*s, W);
  r.note("solvable", c.solvable);
  r.note("weight_cap", c.weight_cap);
  if (!c.solvable)
    r.note("failing_weight", c.failing_weight);
  r.note("scope", c.scope);
  if (c.solvable) {
    r.verdict("splitting re-verifies", c.verified);
    json tau = json::array();
    for (const auto &q : c.tau)
      tau.push_back(coder_json(q));
    r.certificates["tau"] = tau;
  }
}

struct AlgebroidJob {
  AlgPtr a;
  Connection c;
};

AlgebroidJob algebroid_job(Reader &rd, const json &job) {
  AlgPtr a = rd.algebroid(need(job, "algebroid"));
  return {a, rd.connection(opt(job, "connection"), a)};
}

void v_kapranov(Reader &rd, const json &job, Report &r) {
  arity_within_weight(rd.caps());
  auto [a, c] = algebroid_job(rd, job);
  const int n = rd.caps().arity, W = rd.caps().weight;
  Kapranov k = kapranov_structure(c, n, W);
  r.verdict("kapranov structure", check_linfty(*k.structure, n));
  const DgModule &L = *a->L;
  Check at;
  for (int g = 0; g < L.ngen(); ++g)
    for (int h = g; h < L.ngen(); ++h) {
      Vec x = Vec::unit(L.idx(g, L.R->unit)), y = Vec::unit(L.idx(h, L.R->unit));
      if (!(k.structure->bracket_vecs({x, y}) == -atiyah(c, x, y)))
        at.fail("binary bracket differs from minus the atiyah cocycle",
                "(" + L.gen_label[g] + ", " + L.gen_label[h] + ")");
    }
  r.verdict("binary bracket is minus atiyah", at);
  r.results["brackets"] = to_json(*k.structure, n);
}

void v_atiyah(Reader &rd, const json &job, Report &r) {
  auto [a, c] = algebroid_job(rd, job);
  AtiyahReport rep = atiyah_cocycle(c);
  r.verdict("atiyah cocycle closed", rep.is_cocycle);
  r.note("symmetric", rep.symmetric);
  r.note("class_vanishes", rep.class_vanishes);
  r.results["cocycle"] = to_json(rep.cocycle);
  if (rep.class_vanishes)
    r.certificates["primitive"] = to_json(rep.primitive);
  if (job.contains("certificate")) {
    Vec prim = rd.vec(need(need(job, "certificate"), "primitive"));
    in_range(prim, rep.hom->dim(0), "certificate");
    r.verdict("primitive certificate", rep.hom->d(0, prim) == rep.cocycle,
              "differential of the primitive is not the cocycle");
  }
}

void v_pbw(Reader &rd, const json &job, Report &r) {
  auto [a, c] = algebroid_job(rd, job);
  const int W = rd.caps().weight;
  Pbw p = make_pbw(c, W);
  r.verdict("coalgebra isomorphism", check_pbw_coalgebra(p, W));
  json table = json::array();
  const SymCoalgebra &S = *p.S;
  for (int q = 0; q < S.nwords(); ++q) {
    const int i = S.idx(S.R()->unit, q);
    table.push_back({{"word", S.word(q)}, {"value", to_json(p.map.col(i))}});
  }
  r.results["pbw"] = table;
}

void v_tau_check(Reader &rd, const json &job, Report &r) {
  auto [a, c] = algebroid_job(rd, job);
  TauReport t = tau_splitting_check(c, rd.caps().weight);
  r.verdict("evaluation section", t.evaluation);
  r.verdict("chain map", t.chain_map);
  r.verdict("coderivation square", t.coderivation);
  r.note("weight_cap", t.weight_cap);
}

void v_liepair_kapranov(Reader &rd, const json &job, Report &r) {
  arity_within_weight(rd.caps());
  LiePair p = rd.liepair(need(job, "liepair"));
  LiePairConnection c = rd.liepair_connection(opt(job, "connection"), p);
  const int n = rd.caps().arity, W = rd.caps().weight;
  LiePairKapranov k = kapranov_liepair(p, c, n, W);
  r.verdict("kapranov structure", check_linfty(*k.structure, n));
  Check sq;
  for (int i = 0; i < k.S->dim() && sq.ok; ++i)
    if (!k.dlight.apply(k.dlight.col(i)).empty())
      sq.fail("covariant derivative does not square to zero", k.S->label(i, p.b_label));
  r.verdict("square zero", sq);
  Check un, bin;
  const DgModule &om = *k.omega;
  for (int b = 0; b < p.m; ++b) {
    const int i = k.S->idx(p.ce->unit, k.S->find({b}));
    if (!(k.S->corestrict(k.dlight.col(i)) == om.d[om.idx(b, p.ce->unit)]))
      un.fail("unary part is not the Bott differential", p.b_label[b]);
    for (int b2 = b; b2 < p.m; ++b2) {
      Vec v = k.structure->bracket(2, {om.idx(b, p.ce->unit), om.idx(b2, p.ce->unit)});
      if (!(v == -liepair_r2(k, b, b2)))
        bin.fail("binary bracket differs from the curvature formula",
                 "(" + p.b_label[b] + ", " + p.b_label[b2] + ")");
    }
  }
  r.verdict("unary bracket is Bott", un);
  r.verdict("binary bracket closed form", bin);
  r.results["brackets"] = to_json(*k.structure, n);
}

void v_liepair_atiyah(Reader &rd, const json &job, Report &r) {
  LiePair p = rd.liepair(need(job, "liepair"));
  LiePairAtiyah a = liepair_atiyah_class(p, rd.liepair_connection(opt(job, "connection"), p));
  r.verdict("atiyah cocycle closed", a.is_cocycle);
  r.note("class_vanishes", a.vanishes);
  r.note("cochain_dims", json::array({a.dim_c0, a.dim_c1, a.dim_c2}));
  r.results["cocycle"] = to_json(a.cocycle);
  if (a.vanishes)
    r.certificates["primitive"] = to_json(a.primitive);
  if (job.contains("certificate")) {
    Vec prim = rd.vec(need(need(job, "certificate"), "primitive"));
    in_range(prim, a.dim, "certificate");
    r.verdict("primitive certificate", a.d(prim) == a.cocycle,
              "differential of the primitive is not the cocycle");
  }
}

void v_compare(Reader &rd, const json &job, Report &r) {
  arity_within_weight(rd.caps());
  LiePair p = rd.liepair(need(job, "liepair"));
  LiePairConnection c = rd.liepair_connection(opt(job, "connection"), p);
  ComparisonReport cr = compare_kapranov(p, c, rd.caps().arity, rd.caps().weight);
  r.verdict("P0 chain map", cr.p0_chain);
  r.verdict("P0 quasi-isomorphism", cr.p0_quasi_iso);
  r.verdict("inclusion square", cr.inclusion_square);
  r.verdict("envelope projection chain map", cr.pu_chain);
  r.verdict("coalgebra morphism", cr.pu_coalgebra);
  r.verdict("L-infinity morphism", cr.morphism);
}

// Quasi-isomorphism verdicts of a strict map before and after a base change.
void base_change(Reader &rd, const json &job, Report &r, bool extend) {
  SPtr s = rd.linfty(need(job, "linfty"));
  const int n = rd.caps().arity;
  DgcaMorphism phi = rd.dgca_morphism(need(job, "phi"), s->L->R);
  r.verdict("algebra morphism", phi.validate());
  if (extend ? phi.src != s->L->R : phi.tgt != s->L->R)
    throw SchemaError("base change: algebra map does not match the structure's base");
  Extension es;
  SPtr out = extend ? extend_scalars(s, phi, &es) : restrict_scalars(s, phi);
  r.verdict("base-changed structure", check_linfty(*out, n));
  if (job.contains("quasi_iso")) {
    const json &q = job.at("quasi_iso");
    SPtr t = rd.linfty(need(q, "tgt"));
    ModuleMap f = rd.module_map(need(q, "map"), s->L, t->L);
    const int P = rd.caps().poly_degree;
    Check before = check_quasi_iso(f, P), after;
    if (extend) {
      Extension et;
      SPtr te = extend_scalars(t, phi, &et);
      after = check_quasi_iso(extend_map(f, es, et, phi), P);
    } else {
      SPtr tr = restrict_scalars(t, phi);
      ModuleMap g = f;
      g.src = out->L;
      g.tgt = tr->L;
      after = check_quasi_iso(g, P);
    }
    r.note("quasi_iso_before", before.ok);
    r.note("quasi_iso_after", after.ok);
    if (!before.ok)
      r.results["before_witness"] = before.what + " at " + before.witness;
    if (!after.ok)
      r.results["after_witness"] = after.what + " at " + after.witness;
  }
  r.results["structure"] = to_json(*out, n);
}

const std::map<std::string, VerbFn> &verb_table() {
  static const std::map<std::string, VerbFn> t = {
      {"validate", v_validate},
      {"check-linfty", v_check_linfty},
      {"check-morphism", v_check_morphism},
      {"transfer", v_transfer},
      {"cone", v_cone},
      {"derived", v_derived},
      {"linearize", v_linearize},
      {"kapranov", v_kapranov},
      {"atiyah", v_atiyah},
      {"pbw", v_pbw},
      {"tau-check", v_tau_check},
      {"liepair-kapranov", v_liepair_kapranov},
      {"liepair-atiyah", v_liepair_atiyah},
      {"compare", v_compare},
      {"extend", [](Reader &rd, const json &j, Report &r) { base_change(rd, j, r, true); }},
      {"restrict", [](Reader &rd, const json &j, Report &r) { base_change(rd, j, r, false); }},
  };
  return t;
}

Caps merge_caps(Caps c, const json &job, const json &cli) {
  for (const json *src : {&job, &cli}) {
    if (!src->is_object())
      continue;
    c.arity = geti(*src, "arity", c.arity);
    c.weight = geti(*src, "weight", c.weight);
    c.poly_degree = geti(*src, "poly_degree", c.poly_degree);
    if (src->contains("exhaustive"))
      c.exhaustive = src->at("exhaustive").get<bool>();
  }
  if (c.arity < 1 || c.weight < 1 || c.poly_degree < 1)
    throw SchemaError("caps must be positive");
  return c;
}

Outcome invalid(const std::string &msg) {
  Outcome o;
  o.code = 2;
  o.report = {{"error", msg}};
  o.summary = "INVALID " + msg + "\n";
  return o;
}

} // namespace

const std::vector<std::string> &verbs() {
  static const std::vector<std::string> v = [] {
    std::vector<std::string> out;
    for (const auto &[k, f] : verb_table())
      out.push_back(k);
    return out;
  }();
  return v;
}

Outcome run_job(const json &job, const std::string &dir, Caps caps, const json &cli_caps) {
  try {
    if (!job.is_object())
      throw SchemaError("job must be a JSON object");
    const std::string verb = gets(job, "verb");
    auto it = verb_table().find(verb);
    if (it == verb_table().end())
      throw SchemaError("unknown verb '" + verb + "'");
    Caps c = merge_caps(caps, job.contains("caps") ? job.at("caps") : json::object(), cli_caps);
    Reader rd(dir, c);
    Report r;
    try {
      it->second(rd, job, r);
    } catch (const AxiomError &e) {
      r.verdict("input axioms", false, e.what());
    }
    Outcome o;
    o.code = r.failed ? 1 : 0;
    o.report = {{"verb", verb},
                {"caps",
                 {{"arity", c.arity},
                  {"weight", c.weight},
                  {"poly_degree", c.poly_degree},
                  {"exhaustive", c.exhaustive}}},
                {"verdicts", r.verdicts},
                {"results", r.results}};
    if (c.certificates)
      o.report["certificates"] = r.certificates;
    std::ostringstream s;
    s << verb << ": " << (r.failed ? "FAIL" : "PASS") << "\n";
    for (const auto &l : r.lines)
      s << l << "\n";
    o.summary = s.str();
    return o;
  } catch (const SchemaError &e) {
    return invalid(e.what());
  } catch (const json::exception &e) {
    return invalid(std::string("schema: ") + e.what());
  } catch (const Error &e) {
    return invalid(e.what());
  }
}

Outcome run_file(const std::string &path, Caps caps, const json &cli_caps) {
  std::ifstream in(path);
  if (!in)
    return invalid("cannot open " + path);
  json job;
  try {
    job = json::parse(in);
  } catch (const json::parse_error &e) {
    return invalid(std::string("malformed JSON: ") + e.what());
  }
  std::string dir = std::filesystem::path(path).parent_path().string();
  return run_job(job, dir.empty() ? "." : dir, caps, cli_caps);
}

} // namespace linf::io
