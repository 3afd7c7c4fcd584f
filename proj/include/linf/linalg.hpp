#pragma once

#include "linf/kernel.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace linf {

// Incremental exact Gaussian elimination. Every stored row has its pivot at
// its smallest index, normalized to 1, and remembers which inputs built it.
class Reducer {
public:
  // Reduces v against the stored rows. On return, v is the residue and
  // comb holds coefficients with v_in = residue + sum comb_j * input_j.
  void reduce(Vec &v, Vec *comb = nullptr) const;

  // Inserts v tagged as input `id`; returns false when v depends on the
  // stored rows, in which case *relation (if given) is a kernel vector.
  bool insert(Vec v, int id, Vec *relation = nullptr);

  bool in_span(Vec v) const;
  int rank() const { return (int)rows_.size(); }
  std::vector<int> pivots() const;

private:
  struct Row {
    Vec v;
    Vec comb;
  };
  std::map<int, Row> rows_;
};

// Column system A x = b, columns given as sparse vectors.
struct LinearSystem {
  std::vector<Vec> cols;

  std::optional<Vec> solve(const Vec &b) const;
  std::vector<Vec> kernel() const;
  int rank() const;
};

// Cohomology of a finite complex with an optional second grading that the
// differential preserves.
class Cohomology {
public:
  Cohomology(std::vector<int> deg, std::vector<Vec> d, std::vector<int> weight = {});

  using Key = std::pair<int, int>;
  int dim(int degree) const;
  int dim(int degree, int weight) const;
  std::map<Key, int> dims() const;
  const std::vector<Vec> &reps(Key k) const;
  std::vector<Key> keys() const;

  bool is_cocycle(const Vec &z) const;
  // Coordinates of a homogeneous cocycle in the chosen representatives.
  Vec coords(const Vec &z, Key k) const;
  // A primitive y with d y = z when z is exact.
  std::optional<Vec> primitive(const Vec &z, Key k) const;
  Key key_of(int basis_index) const;

private:
  struct Piece {
    std::vector<int> idx;
    Reducer image;     // rows tagged by source basis index
    Reducer image_reps; // image rows tagged >=0, reps tagged -1-r
    std::vector<Vec> reps;
  };
  std::vector<int> deg_, wt_;
  std::vector<Vec> d_;
  std::map<Key, Piece> pieces_;
  static const std::vector<Vec> empty_;
};

} // namespace linf
