#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "latram/coloring.hpp"
#include "latram/detect.hpp"
#include "latram/embedding.hpp"
#include "latram/errors.hpp"
#include "latram/poset.hpp"
#include "latram/subset.hpp"

namespace latram {

// Scatter the low bits of `s` onto the set bits of `block`, lowest first
// (software PDEP; portable).
inline Mask deposit_bits(Mask s, Mask block) {
  Mask out = 0;
  int i = 0;
  while (block) {
    Mask low = block & (~block + 1);
    if (s >> i & 1) out |= low;
    block ^= low;
    ++i;
  }
  return out;
}

// Pairwise-disjoint blocks covering [N].
struct GroundPartition {
  std::vector<SubsetMask> blocks;

  // Consecutive ascending blocks of the given sizes; sizes must sum to N.
  static GroundPartition consecutive(const std::vector<int>& sizes, int N) {
    GroundPartition g;
    int at = 0;
    for (int sz : sizes) {
      if (sz < 0) throw invalid_input_error("GroundPartition: negative size");
      g.blocks.emplace_back((full_mask(sz)) << at, N);
      at += sz;
    }
    if (at != N)
      throw invalid_input_error("GroundPartition: sizes do not sum to N");
    return g;
  }

  bool valid_for(int N) const {
    Mask seen = 0;
    for (const auto& b : blocks) {
      if (b.bits & seen) return false;
      seen |= b.bits;
    }
    return seen == full_mask(N);
  }
};

// An order-exact placement of a general poset: images[i] realizes element i.
struct PosetCopy {
  Poset source;
  std::vector<SubsetMask> images;
};

// --- Blob Lemma --------------------------------------------------------------

// Embedding of P x Q_m into Q_N for N = dim2(P) + h(P)*m, built exactly as
// the constructive proof: element (p, S) maps to
//   f(p) u X_1 u ... u X_{h(p)-1} u f_{h(p)}(S),
// where f embeds P into the first dim2(P) coordinates, the X_i are
// consecutive blocks of size m, f_i is the coordinate isomorphism onto X_i,
// and h(p) counts a longest chain of P with maximum element p.
inline PosetCopy blob_embedding(const Poset& p, int m,
                                std::uint64_t budget = 200'000'000) {
  if (m < 1) throw invalid_input_error("blob_embedding: m must be >= 1");
  if (p.size() == 0) throw invalid_input_error("blob_embedding: empty poset");
  const int n0 = dim2(p, budget);
  const auto f = dim2_embedding(p, budget);
  const auto hp = heights_below(p);
  const int h = *std::max_element(hp.begin(), hp.end());
  const int N = n0 + h * m;
  if (N > kMaxGround)
    throw invalid_input_error("blob_embedding: target dimension exceeds 63");

  auto block = [&](int i) -> Mask {  // X_i, i = 1..h
    return full_mask(m) << (n0 + (i - 1) * m);
  };

  const std::size_t q_cells = std::size_t{1} << m;
  std::vector<SubsetMask> images;
  images.reserve(p.size() * q_cells);
  for (int e = 0; e < p.size(); ++e) {
    Mask middle = 0;
    for (int i = 1; i <= hp[e] - 1; ++i) middle |= block(i);
    for (std::size_t s = 0; s < q_cells; ++s) {
      Mask img = f[e] | middle | (static_cast<Mask>(s) << (n0 + (hp[e] - 1) * m));
      images.emplace_back(img, N);
    }
  }

  PosetCopy out{lex_product(p, Poset::boolean_lattice(m)), std::move(images)};
  if (!is_embedding(out.source, out.images))
    throw std::logic_error("blob_embedding: constructed map failed validation");
  return out;
}

// --- Antichain Lemma ---------------------------------------------------------

namespace detail {

// Longest red chain ending at each cell (0 for non-red cells).
inline std::vector<int> red_chain_heights(const Coloring& c, int red_color) {
  const std::uint64_t cells = c.num_cells();
  const int N = c.ground_size();
  std::vector<int> g(cells, 0), below(cells, 0);
  for (std::uint64_t s = 0; s < cells; ++s) {
    int best = 0;
    for (int e = 0; e < N; ++e)
      if (s >> e & 1) best = std::max(best, below[s & ~(std::uint64_t{1} << e)]);
    if (c.color(s) == red_color) g[s] = best + 1;
    below[s] = std::max(best, g[s]);
  }
  return g;
}

}  // namespace detail

// Antichain Lemma, executable: peel the red cells into antichains
// A_1,...,A_l by repeatedly taking minimal elements (so each A_i is minimal
// in A_i u ... u A_l by construction), then push an initial copy of
// Q_{N-l} on the top N-l coordinates through the shifts
//   f_i(Y) = Y            if Y not in A_i+,
//   f_i(Y) = Y u {i}      if Y in A_i+.
// The surviving copy is entirely blue.
inline Embedding antichain_extract_blue(const Coloring& c) {
  if (c.num_colors() != 2)
    throw invalid_input_error("antichain_extract_blue: k must be 2");
  const int N = c.ground_size();
  auto g = detail::red_chain_heights(c, kRed);
  const int ell = *std::max_element(g.begin(), g.end());
  if (ell >= N && N > 0)
    throw not_applicable_error(
        "antichain_extract_blue: red height reaches N; no room left");
  if (N == 0 && ell > 0)
    throw not_applicable_error("antichain_extract_blue: single red cell");

  const int n = N - ell;
  const std::uint64_t cells = c.num_cells();
  Embedding out;
  out.n = n;
  out.N = N;
  out.image.assign(std::size_t{1} << n, 0);
  for (std::size_t s = 0; s < out.image.size(); ++s)
    out.image[s] = static_cast<Mask>(s) << ell;

  std::vector<std::uint8_t> upset(cells);
  for (int i = 1; i <= ell; ++i) {
    // membership of A_i+ in 2^[N]
    for (std::uint64_t y = 0; y < cells; ++y) {
      std::uint8_t in = (g[y] == i) ? 1 : 0;
      for (int e = 0; e < N && !in; ++e)
        if (y >> e & 1) in = upset[y & ~(std::uint64_t{1} << e)];
      upset[y] = in;
    }
    for (auto& img : out.image)
      if (upset[img]) img |= Mask{1} << (i - 1);
  }

  for (Mask img : out.image)
    if (c.color(img) != kBlue)
      throw std::logic_error("antichain_extract_blue: output not all blue");
  // full order check is quadratic in 2^n; skip at sizes where it cannot run
  if (out.image.size() <= 1024 && !is_valid_embedding(out))
    throw std::logic_error("antichain_extract_blue: output not an embedding");
  return out;
}

// Same extraction from an explicit antichain decomposition of the red
// cells. Validates the lemma's hypothesis first: the A_i partition the red
// cells, each is an antichain, and each A_i consists of minimal elements of
// A_i u ... u A_l.
inline Embedding antichain_extract_blue(
    const Coloring& c, const std::vector<std::vector<SubsetMask>>& antichains) {
  if (c.num_colors() != 2)
    throw invalid_input_error("antichain_extract_blue: k must be 2");
  const int N = c.ground_size();
  const int ell = static_cast<int>(antichains.size());
  if (ell >= N)
    throw not_applicable_error("antichain_extract_blue: l must be < N");

  std::vector<int> level(c.num_cells(), 0);
  std::uint64_t reds_seen = 0;
  for (int i = 0; i < ell; ++i) {
    if (!is_antichain(antichains[i]))
      throw invalid_input_error("antichain_extract_blue: A_" +
                                std::to_string(i + 1) + " is not an antichain");
    for (const auto& s : antichains[i]) {
      if (s.ground_size != N)
        throw invalid_input_error("antichain_extract_blue: ground mismatch");
      if (c.color(s.bits) != kRed)
        throw invalid_input_error("antichain_extract_blue: non-red set in A_i");
      if (level[s.bits] != 0)
        throw invalid_input_error("antichain_extract_blue: sets repeat across A_i");
      level[s.bits] = i + 1;
      ++reds_seen;
    }
  }
  for (std::uint64_t s = 0; s < c.num_cells(); ++s)
    if (c.color(s) == kRed && level[s] == 0)
      throw invalid_input_error(
          "antichain_extract_blue: decomposition misses a red set");
  (void)reds_seen;
  // minimality: no member of A_j properly contains a member of A_i, i <= j
  for (std::uint64_t lo = 0; lo < c.num_cells(); ++lo) {
    if (!level[lo]) continue;
    for (std::uint64_t hi = 0; hi < c.num_cells(); ++hi) {
      if (!level[hi] || hi == lo) continue;
      if (mask_subset(lo, hi) && level[lo] >= level[hi])
        throw invalid_input_error(
            "antichain_extract_blue: minimality hypothesis fails");
    }
  }

  const int n = N - ell;
  Embedding out;
  out.n = n;
  out.N = N;
  out.image.assign(std::size_t{1} << n, 0);
  for (std::size_t s = 0; s < out.image.size(); ++s)
    out.image[s] = static_cast<Mask>(s) << ell;

  std::vector<std::uint8_t> upset(c.num_cells());
  for (int i = 1; i <= ell; ++i) {
    for (std::uint64_t y = 0; y < c.num_cells(); ++y) {
      std::uint8_t in = (level[y] == i) ? 1 : 0;
      for (int e = 0; e < N && !in; ++e)
        if (y >> e & 1) in = upset[y & ~(std::uint64_t{1} << e)];
      upset[y] = in;
    }
    for (auto& img : out.image)
      if (upset[img]) img |= Mask{1} << (i - 1);
  }
  for (Mask img : out.image)
    if (c.color(img) != kBlue)
      throw std::logic_error("antichain_extract_blue: output not all blue");
  return out;
}

// --- Theorem strategies ------------------------------------------------------

// R(Q_n, Q_n) <= n^2 + 2n, executed: partition the ground set into blocks
// X_0,...,X_{n+1} of size n; either some B_Y = {Y u X_1 u ... u X_{|Y|} u X}
// is entirely blue, or the first red picks Z_Y assemble a red copy.
inline std::pair<int, Embedding> strategy_qnqn(const Coloring& c, int n) {
  if (n < 1) throw invalid_input_error("strategy_qnqn: n must be >= 1");
  if (c.num_colors() != 2) throw invalid_input_error("strategy_qnqn: k must be 2");
  const int N = n * n + 2 * n;
  if (c.ground_size() != N)
    throw invalid_input_error("strategy_qnqn: coloring must live on Q_{n^2+2n}");

  auto block = [&](int i) -> Mask { return full_mask(n) << (i * n); };  // X_i

  const std::size_t cube = std::size_t{1} << n;
  auto member = [&](Mask y, Mask t) -> Mask {
    // element of B_Y indexed by t (subset of the free block)
    int ysz = mask_size(y);
    if (ysz == 0) return t << n;  // B_empty = 2^{X_1}
    Mask pre = y;
    for (int i = 1; i <= ysz; ++i) pre |= block(i);
    return pre | (t << ((ysz + 1) * n));
  };

  std::vector<Mask> red_pick(cube, 0);
  for (std::size_t y = 0; y < cube; ++y) {
    bool all_blue = true;
    bool have_red = false;
    for (std::size_t t = 0; t < cube; ++t) {
      Mask el = member(static_cast<Mask>(y), static_cast<Mask>(t));
      if (c.color(el) == kRed) {
        all_blue = false;
        if (!have_red) {
          red_pick[y] = el;  // first red in ascending scan
          have_red = true;
        }
      }
    }
    if (all_blue) {
      Embedding f;
      f.n = n;
      f.N = N;
      f.image.assign(cube, 0);
      for (std::size_t t = 0; t < cube; ++t)
        f.image[t] = member(static_cast<Mask>(y), static_cast<Mask>(t));
      for (Mask img : f.image)
        if (c.color(img) != kBlue)
          throw std::logic_error("strategy_qnqn: blue copy validation failed");
      if (!is_valid_embedding(f))
        throw std::logic_error("strategy_qnqn: blue copy not an embedding");
      return {kBlue, std::move(f)};
    }
  }

  Embedding f;
  f.n = n;
  f.N = N;
  f.image = std::move(red_pick);
  for (Mask img : f.image)
    if (c.color(img) != kRed)
      throw std::logic_error("strategy_qnqn: red copy validation failed");
  if (!is_valid_embedding(f))
    throw std::logic_error("strategy_qnqn: red copy not an embedding");
  return {kRed, std::move(f)};
}

// R(Q_2, Q_n) <= 2n+2, executed. Tall red poset: take the endpoints A, B of
// a longest red chain; two incomparable reds inside [A, B] close a red Q_2
// with A and B, otherwise the interval's reds form a chain and the slice
// { Y in [A,B] : a not in Y, b in Y } is blue and wide enough for Q_n.
// Short red poset: peel antichains and extract blue.
inline std::pair<int, Embedding> strategy_q2qn(const Coloring& c, int n) {
  if (n < 1) throw invalid_input_error("strategy_q2qn: n must be >= 1");
  if (c.num_colors() != 2) throw invalid_input_error("strategy_q2qn: k must be 2");
  const int N = 2 * n + 2;
  if (c.ground_size() != N)
    throw invalid_input_error("strategy_q2qn: coloring must live on Q_{2n+2}");

  auto g = detail::red_chain_heights(c, kRed);
  const int ell = *std::max_element(g.begin(), g.end());

  if (ell >= n + 3) {
    // Endpoints of a longest red chain (smallest masks on traceback).
    Mask top = 0;
    for (std::uint64_t s = 0; s < c.num_cells(); ++s)
      if (g[s] == ell) { top = s; break; }
    Mask bottom = top;
    for (int lvl = ell - 1; lvl >= 1; --lvl) {
      for (std::uint64_t s = 0; s < c.num_cells(); ++s)
        if (g[s] == lvl && mask_subset(s, bottom) && s != bottom) {
          bottom = s;
          break;
        }
    }
    const Mask A = bottom, B = top, free = B & ~A;

    // Red elements of the interval [A, B], ascending.
    std::vector<Mask> reds;
    Mask sub = 0;
    while (true) {
      Mask y = A | sub;
      if (c.color(y) == kRed) reds.push_back(y);
      if (sub == free) break;
      sub = (sub - free) & free;
    }
    std::sort(reds.begin(), reds.end());

    for (std::size_t i = 0; i < reds.size(); ++i)
      for (std::size_t j = i + 1; j < reds.size(); ++j)
        if (!mask_comparable(reds[i], reds[j])) {
          Embedding f;
          f.n = 2;
          f.N = N;
          f.image = {A, reds[i], reds[j], B};
          if (!is_valid_embedding(f))
            throw std::logic_error("strategy_q2qn: red Q_2 failed validation");
          return {kRed, std::move(f)};
        }

    // Interval reds form a chain; kill them all with one element of the
    // second chain member and one of B \ A.
    std::sort(reds.begin(), reds.end(),
              [](Mask x, Mask y) { return mask_size(x) < mask_size(y); });
    Mask second = reds.at(1);  // chain has >= n+3 >= 4 members
    Mask a_candidates = second & ~A;
    Mask a_bit = a_candidates & (~a_candidates + 1);
    Mask b_candidates = free & ~a_bit;
    Mask b_bit = b_candidates & (~b_candidates + 1);

    Mask base = A | b_bit;
    Mask coords = free & ~(a_bit | b_bit);
    // first n free coordinates, ascending
    Mask chosen = 0;
    for (int got = 0; got < n; ++got) {
      Mask low = coords & (~coords + 1);
      chosen |= low;
      coords ^= low;
    }
    Embedding f;
    f.n = n;
    f.N = N;
    f.image.assign(std::size_t{1} << n, 0);
    for (std::size_t s = 0; s < f.image.size(); ++s)
      f.image[s] = base | deposit_bits(static_cast<Mask>(s), chosen);
    for (Mask img : f.image)
      if (c.color(img) != kBlue)
        throw std::logic_error("strategy_q2qn: blue slice failed validation");
    if (!is_valid_embedding(f))
      throw std::logic_error("strategy_q2qn: blue slice not an embedding");
    return {kBlue, std::move(f)};
  }

  // Red height <= n+2: antichain extraction leaves a blue Q_{N-ell},
  // restricted to its first n coordinates.
  Embedding big = antichain_extract_blue(c);
  Embedding f;
  f.n = n;
  f.N = N;
  f.image.assign(std::size_t{1} << n, 0);
  for (std::size_t s = 0; s < f.image.size(); ++s) f.image[s] = big.image[s];
  for (Mask img : f.image)
    if (c.color(img) != kBlue)
      throw std::logic_error("strategy_q2qn: blue copy failed validation");
  if (!is_valid_embedding(f))
    throw std::logic_error("strategy_q2qn: blue copy not an embedding");
  return {kBlue, std::move(f)};
}

// The random-coloring strategy behind the 3n log n bound: blocks X_0 of
// size n and X_1..X_{n+1} of even size m; each F(S) scans the middle slice
// of its free block for a red set. Succeeds with a red copy of Q_n or
// reports that some F(S) is entirely blue (strategy inconclusive, not a
// theorem failure).
inline std::optional<Embedding> halfslice_strategy(const Coloring& c, int n,
                                                   int m) {
  if (n < 1 || m < 2 || m % 2 != 0)
    throw invalid_input_error("halfslice_strategy: need n >= 1 and even m >= 2");
  if (c.num_colors() != 2)
    throw invalid_input_error("halfslice_strategy: k must be 2");
  const int N = n + (n + 1) * m;
  if (c.ground_size() != N)
    throw invalid_input_error(
        "halfslice_strategy: coloring dimension mismatch (need n + (n+1)m)");

  auto block = [&](int i) -> Mask {  // X_i, i = 1..n+1
    return full_mask(m) << (n + (i - 1) * m);
  };

  const std::size_t cube = std::size_t{1} << n;
  std::vector<Mask> picks(cube, 0);
  for (std::size_t s = 0; s < cube; ++s) {
    int ssz = mask_size(static_cast<Mask>(s));
    Mask pre = static_cast<Mask>(s);
    for (int i = 1; i <= ssz; ++i) pre |= block(i);
    bool found = false;
    // subsets of the free block X_{|S|+1} of size m/2, ascending mask order
    for (Mask t = 0; t < (Mask{1} << m) && !found; ++t) {
      if (mask_size(t) != m / 2) continue;
      Mask el = pre | (t << (n + ssz * m));
      if (c.color(el) == kRed) {
        picks[s] = el;
        found = true;
      }
    }
    if (!found) return std::nullopt;  // some F(S) is all blue
  }

  Embedding f;
  f.n = n;
  f.N = N;
  f.image = std::move(picks);
  for (Mask img : f.image)
    if (c.color(img) != kRed)
      throw std::logic_error("halfslice_strategy: red copy failed validation");
  if (!is_valid_embedding(f))
    throw std::logic_error("halfslice_strategy: red copy not an embedding");
  return f;
}

// --- layered lift (Hilbert cube -> Boolean algebra) -------------------------

// For a coloring layered on [N]: color the sizes 0..N by layer color, find
// a monochromatic Hilbert cube there, and materialize it as consecutive
// disjoint blocks X_0,...,X_n whose 2^n unions are all one color.
inline std::optional<std::pair<int, BooleanAlgebraWitness>> algebra_from_layered(
    const Coloring& c, int n) {
  const int N = c.ground_size();
  if (!is_layered_on(c, SubsetMask(full_mask(N), N)))
    throw invalid_input_error("algebra_from_layered: coloring is not layered");

  // integer v in [1, N+1] stands for layer size v-1
  std::vector<int> size_colors(N + 1);
  for (int sz = 0; sz <= N; ++sz)
    size_colors[sz] = c.color(full_mask(sz));

  auto cube = find_mono_hilbert_cube(size_colors, n);
  if (!cube) return std::nullopt;
  const auto& [color, hc] = *cube;

  std::vector<int> sizes;
  sizes.push_back(static_cast<int>(hc.x[0] - 1));  // x_0 shifted back to a size
  for (int i = 1; i <= n; ++i) sizes.push_back(static_cast<int>(hc.x[i]));

  BooleanAlgebraWitness w;
  int at = 0;
  for (int sz : sizes) {
    w.blocks.emplace_back(full_mask(sz) << at, N);
    at += sz;
  }
  for (Mask u : w.unions())
    if (c.color(u) != color)
      throw std::logic_error("algebra_from_layered: union not monochromatic");
  return std::make_pair(color, w);
}

// --- symmetric chains --------------------------------------------------------

// Bracketing construction: scanning ground positions left to right, a set
// bit opens and a clear bit closes; the chain through S fixes all matched
// pairs and sweeps the unmatched positions from all-clear to all-set.
// Yields C(N, floor(N/2)) skipless chains symmetric about N/2, ordered by
// length descending then smallest member ascending.
inline std::vector<std::vector<SubsetMask>> symmetric_chain_partition(int N) {
  if (N < 0 || N > 20)
    throw invalid_input_error("symmetric_chain_partition: need 0 <= N <= 20");
  const std::uint64_t cells = std::uint64_t{1} << N;

  // chain id = representative with all unmatched positions clear
  std::vector<std::vector<Mask>> by_rep_members;
  std::vector<std::int64_t> rep_index(cells, -1);
  std::vector<Mask> reps;
  std::vector<int> stack;
  for (std::uint64_t s = 0; s < cells; ++s) {
    stack.clear();
    Mask unmatched_ones = 0;
    for (int pos = 0; pos < N; ++pos) {
      if (s >> pos & 1) {
        stack.push_back(pos);
      } else if (!stack.empty()) {
        stack.pop_back();
      }
    }
    for (int pos : stack) unmatched_ones |= Mask{1} << pos;
    Mask rep = s & ~unmatched_ones;
    if (rep_index[rep] < 0) {
      rep_index[rep] = static_cast<std::int64_t>(reps.size());
      reps.push_back(rep);
      by_rep_members.emplace_back();
    }
    by_rep_members[rep_index[rep]].push_back(s);
  }

  std::vector<std::vector<SubsetMask>> chains;
  chains.reserve(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i) {
    auto& members = by_rep_members[i];
    std::sort(members.begin(), members.end(),
              [](Mask a, Mask b) { return mask_size(a) < mask_size(b); });
    chains.push_back(typed_masks(members, N));
  }
  std::sort(chains.begin(), chains.end(),
            [](const auto& a, const auto& b) {
              if (a.size() != b.size()) return a.size() > b.size();
              return a.front().bits < b.front().bits;
            });
  return chains;
}

// --- lower-bound colorings ----------------------------------------------------

// The antichain lower bound: Q_{N-1} for N = R(A_n, A_n) (binomial formula),
// colored by symmetric chains, first n-1 chains red, rest blue. No color
// class can hold an antichain of n sets since each chain meets an antichain
// at most once.
inline Coloring antichain_lower_coloring(int n) {
  if (n < 2) throw invalid_input_error("antichain_lower_coloring: n must be >= 2");
  int NR = 0;
  while (binomial(NR, NR / 2) < 2 * n - 1) ++NR;
  const int N = NR - 1;
  auto chains = symmetric_chain_partition(N);
  if (chains.size() > static_cast<std::size_t>(2 * n - 2))
    throw invalid_input_error(
        "antichain_lower_coloring: chain count exceeds 2n-2 (formula misuse)");
  Coloring c(N, 2);
  for (std::size_t i = 0; i < chains.size(); ++i)
    for (const auto& s : chains[i])
      c.set_color(s.bits, i < static_cast<std::size_t>(n - 1) ? kRed : kBlue);
  for (int color : {kRed, kBlue})
    if (find_poset_copy(c, Poset::antichain(n), color))
      throw std::logic_error(
          "antichain_lower_coloring: monochromatic antichain slipped through");
  return c;
}

// Theorem 5 lower bound: layered k-coloring of Q_{k-1}, layer i -> color i;
// every color class is an antichain.
inline Coloring multicolor_lower_coloring(int k) {
  if (k < 1 || k > Coloring::kMaxN + 1)
    throw invalid_input_error("multicolor_lower_coloring: k out of range");
  std::vector<int> layers(k);
  for (int i = 0; i < k; ++i) layers[i] = i;
  return layered_coloring(k - 1, layers, k);
}

}  // namespace latram
