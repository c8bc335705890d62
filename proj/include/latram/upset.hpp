#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <vector>

#include "latram/bigint.hpp"
#include "latram/errors.hpp"
#include "latram/subset.hpp"

namespace latram {

// An upper-closed family of 2^[n] in canonical form: the antichain of its
// minimal elements, sorted ascending by mask value.
struct UpSet {
  int n = 0;
  std::vector<Mask> min_elements;

  bool contains(Mask t) const {
    for (Mask g : min_elements)
      if (mask_subset(g, t)) return true;
    return false;
  }

  bool empty() const { return min_elements.empty(); }

  // Family membership as a bitmask over the 2^n cells; requires n <= 6.
  std::uint64_t family_mask() const {
    if (n > 6) throw invalid_input_error("family_mask: n > 6");
    std::uint64_t out = 0;
    for (Mask t = 0; t < (Mask{1} << n); ++t)
      if (contains(t)) out |= std::uint64_t{1} << t;
    return out;
  }

  std::uint64_t family_size() const {
    std::uint64_t cnt = 0;
    for (Mask t = 0; t < (Mask{1} << n); ++t)
      if (contains(t)) ++cnt;
    return cnt;
  }

  friend bool operator==(const UpSet&, const UpSet&) = default;
};

// True iff no two distinct members are comparable by containment. All masks
// must share one ground size.
inline bool is_antichain(const std::vector<SubsetMask>& family) {
  common_ground(family);
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = i + 1; j < family.size(); ++j)
      if (family[i].comparable_with(family[j])) return false;
  return true;
}

// Canonical upset generated by `generators` inside 2^[n]: keeps only the
// minimal generators, sorted, deduplicated.
inline UpSet upset_close(const std::vector<SubsetMask>& generators, int n) {
  if (n < 0 || n > kMaxGround)
    throw invalid_input_error("upset_close: n out of range");
  for (const auto& g : generators)
    if (!mask_subset(g.bits, full_mask(n)))
      throw invalid_input_error("upset_close: generator outside 2^[n]");
  std::vector<Mask> keep;
  for (const auto& g : generators) {
    bool minimal = true;
    for (const auto& h : generators)
      if (h.bits != g.bits && mask_subset(h.bits, g.bits)) {
        minimal = false;
        break;
      }
    if (minimal) keep.push_back(g.bits);
  }
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  return UpSet{n, std::move(keep)};
}

// Upset of a single family-bitmask cell set (n <= 6): canonical UpSet from a
// membership mask that is already upper closed.
inline UpSet upset_from_family_mask(std::uint64_t family, int n) {
  std::vector<Mask> mins;
  for (Mask t = 0; t < (Mask{1} << n); ++t) {
    if (!(family >> t & 1)) continue;
    bool minimal = true;
    for (int e = 0; e < n && minimal; ++e)
      if ((t >> e & 1) && (family >> (t & ~(Mask{1} << e)) & 1)) minimal = false;
    if (minimal) mins.push_back(t);
  }
  return UpSet{n, std::move(mins)};
}

namespace detail {

// supersets[g] = family bitmask of all cells T >= g in 2^[n]; n <= 6.
inline std::vector<std::uint64_t> superset_masks(int n) {
  if (n < 0 || n > 6) throw invalid_input_error("superset_masks: n out of range");
  const int cells = 1 << n;
  std::vector<std::uint64_t> sup(cells, 0);
  for (int g = cells - 1; g >= 0; --g) {
    std::uint64_t m = std::uint64_t{1} << g;
    for (int e = 0; e < n; ++e)
      if (!(g >> e & 1)) m |= sup[g | (1 << e)];
    sup[g] = m;
  }
  return sup;
}

}  // namespace detail

// Visit every upper-closed family of 2^[n] as a membership bitmask, in the
// canonical enumeration order: DFS over antichains of minimal elements,
// extending by masks larger in sort order and incomparable to all chosen.
// This is lexicographic in the sorted min_elements sequence, starting with
// the empty family.
template <typename Visitor>
void visit_upset_masks(int n, Visitor&& visit) {
  if (n < 0) throw invalid_input_error("visit_upset_masks: n < 0");
  if (n > 6)
    throw resource_limit_error("visit_upset_masks: n > 6 would explode");
  const int cells = 1 << n;
  const auto sup = detail::superset_masks(n);
  std::vector<Mask> chosen;
  std::function<void(std::uint64_t, std::uint64_t, int)> rec =
      [&](std::uint64_t family, std::uint64_t chosen_cells, int next) {
        visit(family, chosen);
        for (int m = next; m < cells; ++m) {
          bool above_chosen = (family >> m & 1) != 0;
          bool below_chosen = (sup[m] & chosen_cells) != 0;
          if (above_chosen || below_chosen) continue;
          chosen.push_back(static_cast<Mask>(m));
          rec(family | sup[m], chosen_cells | (std::uint64_t{1} << m), m + 1);
          chosen.pop_back();
        }
      };
  rec(0, 0, 0);
}

inline std::vector<std::uint64_t> enumerate_upset_masks(int n) {
  std::vector<std::uint64_t> out;
  visit_upset_masks(n, [&](std::uint64_t fam, const std::vector<Mask>&) {
    out.push_back(fam);
  });
  return out;
}

// All upper-closed families of 2^[n] in canonical form, deterministic order
// (lexicographic by sorted min_elements). Length is the Dedekind-type count
// a(n); n <= 6 guards against explosion.
inline std::vector<UpSet> enumerate_upsets(int n) {
  std::vector<UpSet> out;
  visit_upset_masks(n, [&](std::uint64_t, const std::vector<Mask>& chosen) {
    out.push_back(UpSet{n, chosen});
  });
  return out;
}

// a(n): number of distinct antichains of 2^[n] (equivalently, upper-closed
// families). Values: 2, 3, 6, 20, 168, 7581, 7828354, 2414682040998.
//
// For n >= 2 this counts without enumerating at level n, via the split on
// the top two elements: an upset of 2^[n] is a quadruple (a <= b <= d,
// a <= c <= d) of upsets of 2^[n-2], so a(n) = sum over comparable pairs
// (a, d) at level n-2 of |[a, d]|^2, where |[a, d]| is the number of upsets
// between a and d. Interval sizes recurse the same way one level at a time.
inline BigInt count_antichains(int n) {
  if (n < 0) throw invalid_input_error("count_antichains: n < 0");
  if (n > 7)
    throw resource_limit_error("count_antichains: n > 7 not supported");
  if (n == 0) return 2;
  if (n == 1) return 3;

  const int k = n - 2;  // level whose upsets we enumerate (k <= 5)

  // Level lists as membership bitmasks; level j has 2^j cells.
  std::vector<std::vector<std::uint64_t>> lvl(k + 1);
  for (int j = 0; j <= std::min(k, 4); ++j) lvl[j] = enumerate_upset_masks(j);
  if (k == 5) lvl[5] = enumerate_upset_masks(5);

  // Dense index maps for levels <= 4 (masks fit 16 bits).
  std::vector<std::vector<std::uint32_t>> idx(std::min(k, 4) + 1);
  for (int j = 0; j < static_cast<int>(idx.size()); ++j) {
    idx[j].assign(std::size_t{1} << (1 << j), UINT32_MAX);
    for (std::uint32_t i = 0; i < lvl[j].size(); ++i)
      idx[j][lvl[j][i]] = i;
  }

  // I[j][a_i * |lvl_j| + b_i] = number of upsets x with a <= x <= b.
  std::vector<std::vector<std::uint64_t>> I(std::min(k, 4) + 1);
  I[0] = {1, 2, 0, 1};  // pairs over {empty family, full family}
  for (int j = 1; j < static_cast<int>(I.size()); ++j) {
    const auto& L = lvl[j];
    const auto& Lp = lvl[j - 1];
    const auto& Ip = I[j - 1];
    const int half = 1 << (j - 1);
    const std::uint64_t lowbits = (std::uint64_t{1} << half) - 1;
    I[j].assign(L.size() * L.size(), 0);
    for (std::size_t ai = 0; ai < L.size(); ++ai)
      for (std::size_t bi = 0; bi < L.size(); ++bi) {
        std::uint64_t a = L[ai], b = L[bi];
        if ((a & ~b) != 0) continue;
        std::uint64_t a0 = a & lowbits, a1 = a >> half;
        std::uint64_t b0 = b & lowbits, b1 = b >> half;
        std::uint64_t total = 0;
        std::uint32_t b1i = idx[j - 1][b1];
        for (std::uint64_t x0 : Lp) {
          if ((a0 & ~x0) || (x0 & ~b0)) continue;
          total += Ip[idx[j - 1][x0 | a1] * Lp.size() + b1i];
        }
        I[j][ai * L.size() + bi] = total;
      }
  }

  std::uint64_t result = 0;
  if (k <= 4) {
    const auto& L = lvl[k];
    for (std::size_t ai = 0; ai < L.size(); ++ai)
      for (std::size_t bi = 0; bi < L.size(); ++bi) {
        std::uint64_t v = I[k][ai * L.size() + bi];
        result += v * v;
      }
  } else {
    // k == 5: interval sizes computed per pair from the level-4 table.
    const auto& L = lvl[5];
    const auto& L4 = lvl[4];
    const auto& I4 = I[4];
    const std::uint64_t low16 = 0xFFFF;
    for (std::uint64_t b : L) {
      std::uint64_t b0 = b & low16, b1 = b >> 16;
      std::uint32_t b1i = idx[4][b1];
      for (std::uint64_t a : L) {
        if ((a & ~b) != 0) continue;
        std::uint64_t a0 = a & low16, a1 = a >> 16;
        std::uint64_t iv = 0;
        for (std::uint64_t x0 : L4) {
          if ((a0 & ~x0) || (x0 & ~b0)) continue;
          iv += I4[idx[4][x0 | a1] * L4.size() + b1i];
        }
        result += iv * iv;
      }
    }
  }
  return BigInt(result);
}

}  // namespace latram
