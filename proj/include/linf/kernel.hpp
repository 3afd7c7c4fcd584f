#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace linf {

using Q = mpq_class;
using Word = std::vector<int>;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raised when an input fails a mathematical axiom; the message names the
// axiom and the witness tuple.
class AxiomError : public Error {
public:
  using Error::Error;
};

inline bool odd(int d) { return (d & 1) != 0; }
inline int sgn_pow(int e) { return odd(e) ? -1 : 1; }

inline Q frac(long a, long b) {
  Q q(a, b);
  q.canonicalize();
  return q;
}
std::string qstr(const Q &q);
Q parse_q(const std::string &s);

// Sparse vector over an integer-indexed basis, exact rational coefficients.
class Vec {
public:
  using Map = std::map<int, Q>;

  Vec() = default;
  static Vec unit(int i, const Q &c = 1) {
    Vec v;
    v.add(i, c);
    return v;
  }

  void add(int i, const Q &c);
  void axpy(const Q &a, const Vec &x);
  Vec &operator+=(const Vec &x) { axpy(1, x); return *this; }
  Vec &operator-=(const Vec &x) { axpy(-1, x); return *this; }
  Vec &operator*=(const Q &a);
  friend Vec operator+(Vec a, const Vec &b) { return a += b; }
  friend Vec operator-(Vec a, const Vec &b) { return a -= b; }
  friend Vec operator*(const Q &a, Vec b) { return b *= a; }
  Vec operator-() const { Vec r = *this; r *= -1; return r; }
  bool operator==(const Vec &o) const { return c_ == o.c_; }

  Q at(int i) const;
  bool empty() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }
  Map::const_iterator begin() const { return c_.begin(); }
  Map::const_iterator end() const { return c_.end(); }
  const Map &terms() const { return c_; }
  std::string str(const std::vector<std::string> *labels = nullptr) const;

private:
  Map c_;
};

// Sign e with x_{p[0]} ... x_{p[n-1]} = e * x_0 ... x_{n-1} (0-based one-line notation).
int koszul_sign(const std::vector<int> &deg, const std::vector<int> &perm);

// Unshuffles for the given block sizes, lexicographic in one-line notation.
std::vector<std::vector<int>> shuffles(const std::vector<int> &blocks);

Q bernoulli(int n);
Q factorial(int n);
Q binomial(int n, int k);

// Sorts w in place and returns the Koszul sign, or 0 when an odd entry repeats.
int normalize_word(Word &w, const std::vector<int> &deg);

// Graded-commutative product of two sorted words; returns sign or 0.
int merge_words(const Word &a, const Word &b, Word &out, const std::vector<int> &deg);

int word_degree(const Word &w, const std::vector<int> &deg);
std::string word_str(const Word &w, const std::vector<std::string> *labels = nullptr);

// All sorted words of length n over 0..m-1 with no repeated odd entry.
std::vector<Word> sym_words(int m, int n, const std::vector<int> &deg);

struct Check {
  bool ok = true;
  std::string what;
  std::string witness;
  long failures = 0;

  void fail(const std::string &w, const std::string &wit) {
    if (ok) {
      ok = false;
      what = w;
      witness = wit;
    }
    ++failures;
  }
};

} // namespace linf
