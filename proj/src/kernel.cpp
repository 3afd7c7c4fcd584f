#include "linf/kernel.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace linf {

std::string qstr(const Q &q) { return q.get_str(); }

Q parse_q(const std::string &s) {
  Q q;
  if (q.set_str(s, 10) != 0)
    throw Error("bad rational '" + s + "'");
  if (q.get_den() == 0)
    throw Error("zero denominator in '" + s + "'");
  q.canonicalize();
  return q;
}

void Vec::add(int i, const Q &c) {
  if (c == 0)
    return;
  auto [it, fresh] = c_.try_emplace(i, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0)
      c_.erase(it);
  }
}

void Vec::axpy(const Q &a, const Vec &x) {
  if (a == 0)
    return;
  for (const auto &[i, c] : x.c_)
    add(i, a * c);
}

Vec &Vec::operator*=(const Q &a) {
  if (a == 0) {
    c_.clear();
    return *this;
  }
  for (auto &kv : c_)
    kv.second *= a;
  return *this;
}

Q Vec::at(int i) const {
  auto it = c_.find(i);
  return it == c_.end() ? Q(0) : it->second;
}

std::string Vec::str(const std::vector<std::string> *labels) const {
  if (c_.empty())
    return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto &[i, c] : c_) {
    if (!first)
      os << " + ";
    first = false;
    os << qstr(c) << "*";
    if (labels && i < (int)labels->size())
      os << (*labels)[i];
    else
      os << "#" << i;
  }
  return os.str();
}

int koszul_sign(const std::vector<int> &deg, const std::vector<int> &perm) {
  const int n = (int)deg.size();
  if ((int)perm.size() != n)
    throw Error("koszul_sign: length mismatch");
  std::vector<char> seen(n, 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p])
      throw Error("koszul_sign: not a bijection");
    seen[p] = 1;
  }
  int s = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (perm[i] > perm[j] && odd(deg[perm[i]]) && odd(deg[perm[j]]))
        s = -s;
  return s;
}

std::vector<std::vector<int>> shuffles(const std::vector<int> &blocks) {
  if (blocks.empty())
    throw Error("shuffles: empty block list");
  int n = 0;
  for (int b : blocks) {
    if (b <= 0)
      throw Error("shuffles: zero block size");
    n += b;
  }
  // Assign each position a block label; enumerating label sequences in
  // lexicographic order of the resulting one-line notation.
  std::vector<std::vector<int>> out;
  std::vector<int> label;
  for (int k = 0; k < (int)blocks.size(); ++k)
    label.insert(label.end(), blocks[k], k);
  std::vector<std::vector<int>> perms;
  do {
    std::vector<std::vector<int>> members(blocks.size());
    for (int pos = 0; pos < n; ++pos)
      members[label[pos]].push_back(pos);
    std::vector<int> p;
    p.reserve(n);
    for (auto &m : members)
      p.insert(p.end(), m.begin(), m.end());
    perms.push_back(std::move(p));
  } while (std::next_permutation(label.begin(), label.end()));
  std::sort(perms.begin(), perms.end());
  return perms;
}

Q factorial(int n) {
  Q r = 1;
  for (int i = 2; i <= n; ++i)
    r *= i;
  return r;
}

Q binomial(int n, int k) {
  if (k < 0 || k > n)
    return 0;
  Q r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

Q bernoulli(int n) {
  if (n < 0)
    throw Error("bernoulli: negative index");
  std::vector<Q> b(n + 1);
  b[0] = 1;
  for (int m = 1; m <= n; ++m) {
    Q s = 0;
    for (int k = 0; k < m; ++k)
      s += binomial(m + 1, k) * b[k];
    b[m] = -s / (m + 1);
  }
  return b[n];
}

int normalize_word(Word &w, const std::vector<int> &deg) {
  int s = 1;
  const int n = (int)w.size();
  for (int i = 1; i < n; ++i) {
    int x = w[i];
    int j = i - 1;
    int crossed_odd = 0;
    while (j >= 0 && w[j] > x) {
      if (odd(deg[w[j]]))
        ++crossed_odd;
      w[j + 1] = w[j];
      --j;
    }
    w[j + 1] = x;
    if (odd(deg[x]) && odd(crossed_odd))
      s = -s;
  }
  for (int i = 1; i < n; ++i)
    if (w[i] == w[i - 1] && odd(deg[w[i]]))
      return 0;
  return s;
}

int merge_words(const Word &a, const Word &b, Word &out, const std::vector<int> &deg) {
  out.clear();
  out.reserve(a.size() + b.size());
  int s = 1;
  // parity of odd entries of a not yet emitted
  int odd_left = 0;
  for (int x : a)
    odd_left += odd(deg[x]);
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] <= b[j])) {
      if (j < b.size() && a[i] == b[j] && odd(deg[a[i]]))
        return 0;
      odd_left -= odd(deg[a[i]]);
      out.push_back(a[i++]);
    } else {
      if (odd(deg[b[j]]) && odd(odd_left))
        s = -s;
      out.push_back(b[j++]);
    }
  }
  return s;
}

int word_degree(const Word &w, const std::vector<int> &deg) {
  int d = 0;
  for (int x : w)
    d += deg[x];
  return d;
}

std::string word_str(const Word &w, const std::vector<std::string> *labels) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i)
      os << ",";
    if (labels && w[i] < (int)labels->size())
      os << (*labels)[w[i]];
    else
      os << w[i];
  }
  os << ")";
  return os.str();
}

static void sym_rec(int m, int n, int start, const std::vector<int> &deg, Word &cur,
                    std::vector<Word> &out) {
  if ((int)cur.size() == n) {
    out.push_back(cur);
    return;
  }
  for (int x = start; x < m; ++x) {
    if (!cur.empty() && cur.back() == x && odd(deg[x]))
      continue;
    cur.push_back(x);
    sym_rec(m, n, x, deg, cur, out);
    cur.pop_back();
  }
}

std::vector<Word> sym_words(int m, int n, const std::vector<int> &deg) {
  std::vector<Word> out;
  Word cur;
  sym_rec(m, n, 0, deg, cur, out);
  return out;
}

} // namespace linf
