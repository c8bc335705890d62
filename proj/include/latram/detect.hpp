#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_set>
#include <vector>

#include "latram/coloring.hpp"
#include "latram/embedding.hpp"
#include "latram/errors.hpp"
#include "latram/poset.hpp"
#include "latram/subset.hpp"
#include "latram/upset.hpp"

namespace latram {

// Pairwise-disjoint blocks X_0,...,X_n generating a Boolean algebra
// { X_0 u U_{i in I} X_i : I subseteq [n] }; X_i nonempty for i >= 1.
struct BooleanAlgebraWitness {
  std::vector<SubsetMask> blocks;

  int dimension() const { return static_cast<int>(blocks.size()) - 1; }

  // All 2^n generated unions, indexed by I.
  std::vector<Mask> unions() const {
    int n = dimension();
    std::vector<Mask> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t I = 0; I < (std::uint64_t{1} << n); ++I) {
      Mask u = blocks[0].bits;
      for (int i = 0; i < n; ++i)
        if (I >> i & 1) u |= blocks[i + 1].bits;
      out.push_back(u);
    }
    return out;
  }

  bool well_formed() const {
    Mask seen = 0;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (i >= 1 && blocks[i].bits == 0) return false;
      if (blocks[i].bits & seen) return false;
      seen |= blocks[i].bits;
    }
    return true;
  }
};

// x_0 >= 0 and x_1..x_n >= 1 spanning the integer cube
// { x_0 + sum_{i in I} x_i : I subseteq [n] }.
struct HilbertCubeWitness {
  std::vector<std::int64_t> x;

  int dimension() const { return static_cast<int>(x.size()) - 1; }

  std::vector<std::int64_t> sums() const {
    int n = dimension();
    std::vector<std::int64_t> out;
    out.reserve(std::size_t{1} << n);
    for (std::uint64_t I = 0; I < (std::uint64_t{1} << n); ++I) {
      std::int64_t s = x[0];
      for (int i = 0; i < n; ++i)
        if (I >> i & 1) s += x[i + 1];
      out.push_back(s);
    }
    return out;
  }
};

// --- copy tables -------------------------------------------------------------

// The distinct copies (unordered image families) of Q_n in Q_N. When
// 2^N <= 64 each copy also gets a 2^N-bit element mask so a monochromatic
// test is two word ops; witness search evaluates that millions of times.
struct QnCopyTable {
  int n = 0;
  int N = 0;
  std::vector<std::vector<Mask>> copies;       // sorted image family
  std::vector<std::uint64_t> element_masks;    // parallel to copies, 2^N <= 64
  bool has_element_masks = false;
};

inline QnCopyTable build_copy_table(int n, int N,
                                    std::uint64_t copy_budget = 5'000'000) {
  BigInt expected = count_embeddings_exact(n, N);
  for (int i = 2; i <= n; ++i) expected /= i;
  if (expected > BigInt(copy_budget))
    throw resource_limit_error("build_copy_table: too many copies of Q_n");

  QnCopyTable t;
  t.n = n;
  t.N = N;
  t.has_element_masks = N <= 6;
  std::unordered_set<std::uint64_t> seen_masks;
  std::unordered_set<std::string> seen_keys;
  visit_embeddings(n, N, [&](const std::vector<Mask>& img) {
    if (t.has_element_masks) {
      std::uint64_t em = 0;
      for (Mask m : img) em |= std::uint64_t{1} << m;
      if (seen_masks.insert(em).second) {
        t.element_masks.push_back(em);
        auto sorted = img;
        std::sort(sorted.begin(), sorted.end());
        t.copies.push_back(std::move(sorted));
      }
    } else {
      auto sorted = img;
      std::sort(sorted.begin(), sorted.end());
      std::string key(reinterpret_cast<const char*>(sorted.data()),
                      sorted.size() * sizeof(Mask));
      if (seen_keys.insert(std::move(key)).second)
        t.copies.push_back(std::move(sorted));
    }
  });
  return t;
}

// --- monochromatic Q_n -----------------------------------------------------

namespace detail {

// avail[j] (bit m): some completion of m over free columns j..N-1 lands on
// the wanted color. Kills branches whose partial images can no longer reach
// the color class.
inline std::vector<std::vector<std::uint64_t>> reach_tables(const Coloring& c,
                                                            int color) {
  const int N = c.ground_size();
  const std::uint64_t cells = c.num_cells();
  const std::size_t words = (cells + 63) / 64;
  std::vector<std::vector<std::uint64_t>> avail(N + 1,
                                                std::vector<std::uint64_t>(words, 0));
  for (std::uint64_t m = 0; m < cells; ++m)
    if (c.color(m) == color) avail[N][m >> 6] |= std::uint64_t{1} << (m & 63);
  for (int j = N - 1; j >= 0; --j) {
    auto& cur = avail[j];
    const auto& nxt = avail[j + 1];
    for (std::uint64_t m = 0; m < cells; ++m) {
      std::uint64_t hit = (nxt[m >> 6] >> (m & 63) & 1) |
                          (nxt[(m | (std::uint64_t{1} << j)) >> 6] >>
                               ((m | (std::uint64_t{1} << j)) & 63) &
                           1);
      if (hit) cur[m >> 6] |= std::uint64_t{1} << (m & 63);
    }
  }
  return avail;
}

}  // namespace detail

// Complete backtracking for a monochromatic copy of Q_n: branches on which
// upset occupies each good-sequence column, pruning prefixes whose partial
// images cannot reach the color class. Returns the lexicographically first
// witness (by upset-index sequence); absent means no copy in that color
// exists anywhere in Q_N.
inline std::optional<Embedding> find_mono_qn(const Coloring& c, int n,
                                             int color,
                                             std::uint64_t budget = 400'000'000) {
  const int N = c.ground_size();
  if (n > N) throw invalid_input_error("find_mono_qn: n > N");
  if (color < 0 || color >= c.num_colors())
    throw invalid_input_error("find_mono_qn: bad color");
  auto alphabet = detail::UpsetAlphabet::build(n);
  const std::size_t cells = std::size_t{1} << n;
  auto avail = detail::reach_tables(c, color);
  auto reachable = [&](int j, Mask m) {
    return (avail[j][m >> 6] >> (m & 63) & 1) != 0;
  };

  std::vector<Mask> img(cells, 0);
  std::uint64_t nodes = 0;
  std::optional<Embedding> found;

  std::function<bool(int, unsigned)> rec = [&](int depth,
                                               unsigned missing) -> bool {
    if (depth == N) {
      if (missing != 0) return false;
      Embedding f{n, N, img};
      found = std::move(f);
      return true;
    }
    if (std::popcount(missing) > N - depth) return false;
    for (std::size_t u = 0; u < alphabet.families.size(); ++u) {
      if (++nodes > budget)
        throw resource_limit_error("find_mono_qn: budget exceeded");
      std::uint64_t fam = alphabet.families[u];
      for (std::size_t s = 0; s < cells; ++s)
        if (fam >> s & 1) img[s] |= Mask{1} << depth;
      bool ok = true;
      for (std::size_t s = 0; s < cells && ok; ++s)
        if (!reachable(depth + 1, img[s])) ok = false;
      unsigned m2 = missing;
      if (int lab = alphabet.principal_label[u]; lab != 0)
        m2 &= ~(1u << (lab - 1));
      if (ok && rec(depth + 1, m2)) return true;
      for (std::size_t s = 0; s < cells; ++s)
        img[s] &= ~(Mask{1} << depth);
    }
    return false;
  };

  rec(0, n == 0 ? 0u : ((1u << n) - 1));
  return found;
}

// Complete backtracking for a monochromatic copy of a general poset P:
// linear extension of P, candidates filtered by already-placed
// comparabilities, all images in the given color.
inline std::optional<std::vector<SubsetMask>> find_poset_copy(
    const Coloring& c, const Poset& p, int color,
    std::uint64_t budget = 200'000'000) {
  if (p.size() > static_cast<int>(c.num_cells()))
    throw invalid_input_error("find_poset_copy: |P| > 2^N");
  if (color < 0 || color >= c.num_colors())
    throw invalid_input_error("find_poset_copy: bad color");
  auto hit = find_poset_placement(
      p, c.ground_size(), [&](Mask s) { return c.color(s) == color; }, budget);
  if (!hit) return std::nullopt;
  return typed_masks(*hit, c.ground_size());
}

// Exact counts of monochromatic copies (unordered image families) per color
// of a 2-coloring, using a prebuilt table. The naive per-copy scan here
// doubles as the test oracle for find_mono_qn.
inline std::pair<std::uint64_t, std::uint64_t> count_mono_qn(
    const Coloring& c, const QnCopyTable& t) {
  std::uint64_t red = 0, blue = 0;
  if (t.has_element_masks && c.ground_size() == t.N) {
    std::uint64_t red_cells = c.class_mask64(kRed);
    std::uint64_t blue_cells = c.class_mask64(kBlue);
    for (std::uint64_t em : t.element_masks) {
      red += (em & red_cells) == em;
      blue += (em & blue_cells) == em;
    }
  } else {
    for (const auto& copy : t.copies) {
      bool all_red = true, all_blue = true;
      for (Mask m : copy) {
        int col = c.color(m);
        all_red &= col == kRed;
        all_blue &= col == kBlue;
      }
      red += all_red;
      blue += all_blue;
    }
  }
  return {red, blue};
}

inline std::pair<std::uint64_t, std::uint64_t> count_mono_qn(
    const Coloring& c, int n, std::uint64_t copy_budget = 5'000'000) {
  if (c.num_colors() != 2)
    throw invalid_input_error("count_mono_qn: k must be 2");
  QnCopyTable t = build_copy_table(n, c.ground_size(), copy_budget);
  return count_mono_qn(c, t);
}

// --- layered subcubes ---------------------------------------------------------

// First S (ascending mask order) with |S| = n such that c is layered on
// 2^S; absent means no such S at this N.
inline std::optional<SubsetMask> find_layered_subcube(const Coloring& c, int n) {
  const int N = c.ground_size();
  if (n > N || N > 20) throw invalid_input_error("find_layered_subcube: need n <= N <= 20");
  for (std::uint64_t s = 0; s < c.num_cells(); ++s) {
    if (mask_size(s) != n) continue;
    if (is_layered_on(c, SubsetMask(s, N))) return SubsetMask(s, N);
  }
  return std::nullopt;
}

// --- Hilbert cubes ---------------------------------------------------------

// Monochromatic affine cube in a coloring of [M]: colors[v-1] is the color
// of the integer v. Exhaustive over x_0 and nondecreasing x_1 <= ... <= x_n;
// sums may coincide, all must lie in [1, M] and share one color.
inline std::optional<std::pair<int, HilbertCubeWitness>> find_mono_hilbert_cube(
    const std::vector<int>& colors, int n) {
  const int M = static_cast<int>(colors.size());
  if (M > 64) throw invalid_input_error("find_mono_hilbert_cube: M > 64");
  if (n > 4) throw invalid_input_error("find_mono_hilbert_cube: n > 4");
  if (M == 0) return std::nullopt;

  std::vector<std::int64_t> xs(n + 1);
  std::function<bool(int, std::int64_t, int)> rec = [&](int i,
                                                        std::int64_t total,
                                                        int color) -> bool {
    if (i > n) return true;
    std::int64_t lo = (i == 1) ? 1 : xs[i - 1];
    for (std::int64_t v = lo; total + v <= M; ++v) {
      xs[i] = v;
      // all sums involving x_i and any subset of x_1..x_{i-1}
      bool ok = true;
      for (std::uint64_t I = 0; I < (std::uint64_t{1} << (i - 1)) && ok; ++I) {
        std::int64_t s = xs[0] + v;
        for (int b = 0; b < i - 1; ++b)
          if (I >> b & 1) s += xs[b + 1];
        if (colors[s - 1] != color) ok = false;
      }
      if (ok && rec(i + 1, total + v, color)) return true;
    }
    return false;
  };

  for (int x0 = 1; x0 <= M; ++x0) {
    xs[0] = x0;
    int color = colors[x0 - 1];
    if (rec(1, x0, color))
      return std::make_pair(color, HilbertCubeWitness{xs});
  }
  return std::nullopt;
}

// --- Boolean algebras -----------------------------------------------------------

// Exhaustive search for a dimension-n Boolean algebra inside `family`
// (subset containment, stricter than a subposet copy). X_0 ranges over
// family members ascending; each further block is the difference Y \ X_0 of
// another member, kept disjoint from the blocks chosen so far, with every
// generated union membership-tested. Intended for n <= 2; larger n only
// arrives via the layered lift.
inline std::optional<BooleanAlgebraWitness> find_boolean_algebra(
    const std::vector<SubsetMask>& family, int n,
    std::uint64_t budget = 100'000'000) {
  int N = common_ground(family);
  if (n < 0 || n > 6) throw invalid_input_error("find_boolean_algebra: n out of range");
  std::vector<Mask> sets = raw_masks(family);
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::unordered_set<Mask> members(sets.begin(), sets.end());

  std::uint64_t steps = 0;
  std::vector<Mask> blocks(n + 1, 0);

  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i > n) return true;
    Mask taken = blocks[0];
    for (int b = 1; b < i; ++b) taken |= blocks[b];
    for (Mask y : sets) {
      if (++steps > budget)
        throw resource_limit_error("find_boolean_algebra: budget exceeded");
      if (!mask_subset(blocks[0], y)) continue;
      Mask xi = y & ~blocks[0];
      if (xi == 0 || (xi & taken) != 0) continue;
      // every union of X_0, X_i and previously chosen blocks must be present
      bool ok = true;
      for (std::uint64_t I = 0; I < (std::uint64_t{1} << (i - 1)) && ok; ++I) {
        Mask u = blocks[0] | xi;
        for (int b = 0; b < i - 1; ++b)
          if (I >> b & 1) u |= blocks[b + 1];
        if (!members.count(u)) ok = false;
      }
      if (!ok) continue;
      blocks[i] = xi;
      if (rec(i + 1)) return true;
    }
    return false;
  };

  for (Mask x0 : sets) {
    if (++steps > budget)
      throw resource_limit_error("find_boolean_algebra: budget exceeded");
    blocks[0] = x0;
    if (rec(1)) {
      BooleanAlgebraWitness w;
      for (Mask b : blocks) w.blocks.emplace_back(b, N);
      return w;
    }
  }
  return std::nullopt;
}

// Re-validate an algebra witness against a family (all generated unions
// present, blocks disjoint and nonempty where required).
inline bool validate_algebra_witness(const BooleanAlgebraWitness& w,
                                     const std::vector<SubsetMask>& family) {
  if (!w.well_formed()) return false;
  std::unordered_set<Mask> members;
  for (const auto& s : family) members.insert(s.bits);
  for (Mask u : w.unions())
    if (!members.count(u)) return false;
  return true;
}

}  // namespace latram
