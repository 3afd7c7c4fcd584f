#include "linf/linalg.hpp"

namespace linf {

void Reducer::reduce(Vec &v, Vec *comb) const {
  if (rows_.empty())
    return;
  auto it = v.begin();
  while (it != v.end()) {
    int p = it->first;
    auto r = rows_.find(p);
    if (r == rows_.end()) {
      ++it;
      continue;
    }
    Q c = it->second;
    v.axpy(-c, r->second.v);
    if (comb)
      comb->axpy(c, r->second.comb);
    it = v.terms().upper_bound(p);
  }
}

bool Reducer::insert(Vec v, int id, Vec *relation) {
  Vec comb;
  reduce(v, &comb);
  if (v.empty()) {
    if (relation) {
      *relation = Vec::unit(id);
      relation->axpy(-1, comb);
    }
    return false;
  }
  Q lead = v.begin()->second;
  int p = v.begin()->first;
  Vec own = Vec::unit(id);
  own.axpy(-1, comb);
  Q inv = 1 / lead;
  v *= inv;
  own *= inv;
  rows_.emplace(p, Row{std::move(v), std::move(own)});
  return true;
}

bool Reducer::in_span(Vec v) const {
  reduce(v);
  return v.empty();
}

std::vector<int> Reducer::pivots() const {
  std::vector<int> out;
  for (const auto &kv : rows_)
    out.push_back(kv.first);
  return out;
}

std::optional<Vec> LinearSystem::solve(const Vec &b) const {
  Reducer red;
  for (int j = 0; j < (int)cols.size(); ++j)
    red.insert(cols[j], j);
  Vec r = b;
  Vec comb;
  red.reduce(r, &comb);
  if (!r.empty())
    return std::nullopt;
  return comb;
}

std::vector<Vec> LinearSystem::kernel() const {
  Reducer red;
  std::vector<Vec> out;
  for (int j = 0; j < (int)cols.size(); ++j) {
    Vec rel;
    if (!red.insert(cols[j], j, &rel))
      out.push_back(std::move(rel));
  }
  return out;
}

int LinearSystem::rank() const {
  Reducer red;
  for (int j = 0; j < (int)cols.size(); ++j)
    red.insert(cols[j], j);
  return red.rank();
}

const std::vector<Vec> Cohomology::empty_;

Cohomology::Cohomology(std::vector<int> deg, std::vector<Vec> d, std::vector<int> weight)
    : deg_(std::move(deg)), wt_(std::move(weight)), d_(std::move(d)) {
  const int n = (int)deg_.size();
  if (wt_.empty())
    wt_.assign(n, 0);
  for (int i = 0; i < n; ++i)
    pieces_[{deg_[i], wt_[i]}].idx.push_back(i);
  // image of d from degree k-1 lands in degree k, same weight
  for (auto &[key, pc] : pieces_) {
    auto src = pieces_.find({key.first - 1, key.second});
    if (src == pieces_.end())
      continue;
    for (int i : src->second.idx) {
      pc.image.insert(d_[i], i);
      pc.image_reps.insert(d_[i], i);
    }
  }
  for (auto &[key, pc] : pieces_) {
    Reducer ker;
    for (int i : pc.idx) {
      Vec rel;
      if (ker.insert(d_[i], i, &rel)) continue;
      if (pc.image_reps.insert(rel, -1 - (int)pc.reps.size()))
        pc.reps.push_back(rel);
    }
  }
}

int Cohomology::dim(int degree) const {
  int s = 0;
  for (const auto &[key, pc] : pieces_)
    if (key.first == degree)
      s += (int)pc.reps.size();
  return s;
}

int Cohomology::dim(int degree, int weight) const {
  auto it = pieces_.find({degree, weight});
  return it == pieces_.end() ? 0 : (int)it->second.reps.size();
}

std::map<Cohomology::Key, int> Cohomology::dims() const {
  std::map<Key, int> out;
  for (const auto &[key, pc] : pieces_)
    out[key] = (int)pc.reps.size();
  return out;
}

std::vector<Cohomology::Key> Cohomology::keys() const {
  std::vector<Key> out;
  for (const auto &kv : pieces_)
    out.push_back(kv.first);
  return out;
}

const std::vector<Vec> &Cohomology::reps(Key k) const {
  auto it = pieces_.find(k);
  return it == pieces_.end() ? empty_ : it->second.reps;
}

Cohomology::Key Cohomology::key_of(int i) const { return {deg_[i], wt_[i]}; }

bool Cohomology::is_cocycle(const Vec &z) const {
  Vec dz;
  for (const auto &[i, c] : z)
    dz.axpy(c, d_[i]);
  return dz.empty();
}

Vec Cohomology::coords(const Vec &z, Key k) const {
  Vec out;
  auto it = pieces_.find(k);
  if (it == pieces_.end())
    return out;
  Vec r = z;
  Vec comb;
  it->second.image_reps.reduce(r, &comb);
  if (!r.empty())
    throw Error("coords: not a cocycle");
  for (const auto &[id, c] : comb)
    if (id < 0)
      out.add(-1 - id, c);
  return out;
}

std::optional<Vec> Cohomology::primitive(const Vec &z, Key k) const {
  auto it = pieces_.find(k);
  if (it == pieces_.end())
    return z.empty() ? std::optional<Vec>(Vec()) : std::nullopt;
  Vec r = z;
  Vec comb;
  it->second.image.reduce(r, &comb);
  if (!r.empty())
    return std::nullopt;
  return comb;
}

} // namespace linf
