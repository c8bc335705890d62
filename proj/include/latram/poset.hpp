#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "latram/errors.hpp"
#include "latram/subset.hpp"

namespace latram {

// A finite partial order on indexed elements 0..size-1, stored as the full
// <= matrix. Covers are never stored: embedding checks need <= queries
// constantly and the posets here are small.
class Poset {
 public:
  Poset() = default;

  // `leq` is row-major size*size, leq[a*size+b] != 0 iff a <= b.
  // Validates all three poset axioms; the diagnostic names the violated one.
  static Poset from_leq_matrix(int size, std::vector<std::uint8_t> leq) {
    if (size < 0) throw invalid_input_error("poset size must be >= 0");
    if (leq.size() != static_cast<std::size_t>(size) * size)
      throw invalid_input_error("leq matrix has wrong shape");
    Poset p;
    p.size_ = size;
    p.leq_ = std::move(leq);
    p.validate();
    return p;
  }

  static Poset chain(int n) {  // C_n
    Poset p = empty_relation(n);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) p.leq_[a * n + b] = 1;
    return p;
  }

  static Poset antichain(int n) {  // A_n
    return empty_relation(n);
  }

  // Q_n as an abstract poset: element i is the subset of [n] with mask i.
  static Poset boolean_lattice(int n) {
    if (n < 0 || n > 20) throw invalid_input_error("boolean_lattice: n out of range");
    int m = 1 << n;
    Poset p = empty_relation(m);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        p.leq_[static_cast<std::size_t>(a) * m + b] =
            mask_subset(static_cast<Mask>(a), static_cast<Mask>(b)) ? 1 : 0;
    return p;
  }

  int size() const { return size_; }

  bool leq(int a, int b) const {
    return leq_[static_cast<std::size_t>(a) * size_ + b] != 0;
  }
  bool less(int a, int b) const { return a != b && leq(a, b); }
  bool comparable(int a, int b) const { return leq(a, b) || leq(b, a); }

  friend bool operator==(const Poset&, const Poset&) = default;

 private:
  static Poset empty_relation(int n) {
    if (n < 0) throw invalid_input_error("poset size must be >= 0");
    Poset p;
    p.size_ = n;
    p.leq_.assign(static_cast<std::size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a) p.leq_[static_cast<std::size_t>(a) * n + a] = 1;
    return p;
  }

  void validate() const {
    for (int a = 0; a < size_; ++a)
      if (!leq(a, a))
        throw invalid_input_error("not a poset: reflexivity fails at element " +
                                  std::to_string(a));
    for (int a = 0; a < size_; ++a)
      for (int b = 0; b < size_; ++b)
        if (a != b && leq(a, b) && leq(b, a))
          throw invalid_input_error(
              "not a poset: antisymmetry fails on pair (" + std::to_string(a) +
              ", " + std::to_string(b) + ")");
    for (int a = 0; a < size_; ++a)
      for (int b = 0; b < size_; ++b) {
        if (!leq(a, b)) continue;
        for (int c = 0; c < size_; ++c)
          if (leq(b, c) && !leq(a, c))
            throw invalid_input_error(
                "not a poset: transitivity fails on chain (" +
                std::to_string(a) + ", " + std::to_string(b) + ", " +
                std::to_string(c) + ")");
      }
  }

  int size_ = 0;
  std::vector<std::uint8_t> leq_;
};

// Per-element height: number of elements in a longest chain of P whose
// maximum element is v (always >= 1). Longest path in the strict-order DAG,
// relaxed along a linear extension (fewer strict predecessors first).
inline std::vector<int> heights_below(const Poset& p) {
  int n = p.size();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int da = 0, db = 0;
    for (int x = 0; x < n; ++x) {
      da += p.less(x, a);
      db += p.less(x, b);
    }
    return da < db;
  });
  std::vector<int> h(n, 0);
  for (int v : order) {
    int hv = 1;
    for (int u = 0; u < n; ++u)
      if (p.less(u, v)) hv = std::max(hv, h[u] + 1);
    h[v] = hv;
  }
  return h;
}

// h(P): number of elements in a largest chain.
inline int height(const Poset& p) {
  auto h = heights_below(p);
  return h.empty() ? 0 : *std::max_element(h.begin(), h.end());
}

// Lexicographic product P x Q: |P| stacked copies of Q. Element (i, j) gets
// index i*|Q| + j, and (p1,q1) <= (p2,q2) iff p1 < p2 strictly, or p1 = p2
// and q1 <= q2.
inline Poset lex_product(const Poset& p, const Poset& q) {
  int np = p.size(), nq = q.size();
  int m = np * nq;
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(m) * m, 0);
  for (int p1 = 0; p1 < np; ++p1)
    for (int q1 = 0; q1 < nq; ++q1)
      for (int p2 = 0; p2 < np; ++p2)
        for (int q2 = 0; q2 < nq; ++q2) {
          bool rel = p.less(p1, p2) || (p1 == p2 && q.leq(q1, q2));
          leq[static_cast<std::size_t>(p1 * nq + q1) * m + (p2 * nq + q2)] =
              rel ? 1 : 0;
        }
  return Poset::from_leq_matrix(m, std::move(leq));
}

// True iff `images` realizes P order-exactly in Q_N: A <= B in P iff
// images[A] subset of images[B]. Equal images make reflection fail, so a
// non-injective table returns false rather than erroring.
inline bool is_embedding(const Poset& p, const std::vector<SubsetMask>& images) {
  if (static_cast<int>(images.size()) != p.size())
    throw invalid_input_error("is_embedding: image count != poset size");
  if (!images.empty()) common_ground(images);
  int n = p.size();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      bool rel = p.leq(a, b);
      bool img = images[a].bits != images[b].bits &&
                 mask_subset(images[a].bits, images[b].bits);
      if (rel != img) return false;
    }
  return true;
}

// Backtracking core shared by copy detection and dim2: place P into Q_N,
// images restricted to cells where `allowed` holds. Linear extension order;
// candidates ascending by popcount then mask value, so the first witness is
// deterministic. Complete: exhausts the space unless the node budget runs
// out (then throws resource_limit_error).
inline std::optional<std::vector<Mask>> find_poset_placement(
    const Poset& p, int N, const std::function<bool(Mask)>& allowed,
    std::uint64_t budget = 200'000'000) {
  int m = p.size();
  if (N < 0 || N > kMaxGround)
    throw invalid_input_error("find_poset_placement: N out of range");
  if (m == 0) return std::vector<Mask>{};
  const std::uint64_t cells = Mask{1} << N;

  // Linear extension: minimal elements first (sort by predecessor count).
  std::vector<int> order(m);
  for (int i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int da = 0, db = 0;
    for (int x = 0; x < m; ++x) {
      da += p.less(x, a);
      db += p.less(x, b);
    }
    if (da != db) return da < db;
    return a < b;
  });

  // Candidate cells ascending by popcount then mask.
  std::vector<Mask> cand;
  cand.reserve(cells);
  for (std::uint64_t s = 0; s < cells; ++s)
    if (allowed(s)) cand.push_back(s);
  std::stable_sort(cand.begin(), cand.end(), [](Mask a, Mask b) {
    int pa = mask_size(a), pb = mask_size(b);
    if (pa != pb) return pa < pb;
    return a < b;
  });

  std::vector<Mask> img(m, 0);
  std::uint64_t nodes = 0;

  std::function<bool(int)> rec = [&](int depth) -> bool {
    if (depth == m) return true;
    int e = order[depth];
    for (Mask c : cand) {
      if (++nodes > budget)
        throw resource_limit_error("find_poset_placement: budget exceeded",
                                   nodes);
      bool ok = true;
      for (int d = 0; d < depth && ok; ++d) {
        int f = order[d];
        if (img[f] == c) { ok = false; break; }
        bool fe = p.leq(f, e), ef = p.leq(e, f);
        bool sub_fe = mask_subset(img[f], c), sub_ef = mask_subset(c, img[f]);
        if (fe != sub_fe || ef != sub_ef) ok = false;
      }
      if (!ok) continue;
      img[e] = c;
      if (rec(depth + 1)) return true;
    }
    return false;
  };

  if (!rec(0)) return std::nullopt;
  return img;
}

// 2-dimension: least n such that Q_n contains a copy of P. The search is
// seeded at max(h(P)-1, ceil(log2 |P|)) since no smaller n can work.
inline int dim2(const Poset& p, std::uint64_t budget = 200'000'000) {
  if (p.size() > 16) throw invalid_input_error("dim2: |P| > 16 not supported");
  if (p.size() == 0) return 0;
  int lg = 0;
  while ((1 << lg) < p.size()) ++lg;
  int n = std::max(height(p) - 1, lg);
  for (;; ++n) {
    if (n > kMaxGround)
      throw resource_limit_error("dim2: exceeded maximum ground size");
    auto hit = find_poset_placement(p, n, [](Mask) { return true; }, budget);
    if (hit) return n;
  }
}

// Embedding of P into Q_n at n = dim2(P), as concrete images.
inline std::vector<Mask> dim2_embedding(const Poset& p,
                                        std::uint64_t budget = 200'000'000) {
  int n = dim2(p, budget);
  auto hit = find_poset_placement(p, n, [](Mask) { return true; }, budget);
  return *hit;  // dim2 just proved it exists
}

}  // namespace latram
