#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "latram/bigint.hpp"
#include "latram/errors.hpp"
#include "latram/subset.hpp"

namespace latram {

// Color indices are small ints; by convention color 0 = red, 1 = blue.
inline constexpr int kRed = 0;
inline constexpr int kBlue = 1;

// The seedable PRNG behind every randomized operation. SplitMix64: the
// 64-bit output sequence is part of the reproducibility contract, identical
// on every platform (std:: distributions are not).
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform over [0, bound); bound-agnostic modulo (bias < 2^-40 for the
  // bounds used here, and the exact sequence is what is contracted).
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  double unit() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }
};

// An assignment of one of k colors to every element of 2^[N].
class Coloring {
 public:
  static constexpr int kMaxN = 24;  // 2^N color cells

  Coloring() = default;

  Coloring(int N, int k, int fill = 0) : N_(N), k_(k) {
    if (N < 0 || N > kMaxN) throw invalid_input_error("Coloring: N out of range");
    if (k < 1 || k > 256) throw invalid_input_error("Coloring: k out of range");
    if (fill < 0 || fill >= k) throw invalid_input_error("Coloring: bad fill color");
    cells_.assign(std::size_t{1} << N, static_cast<std::uint8_t>(fill));
  }

  int ground_size() const { return N_; }
  int num_colors() const { return k_; }
  std::uint64_t num_cells() const { return std::uint64_t{1} << N_; }

  int color(Mask s) const { return cells_[s]; }

  void set_color(Mask s, int t) {
    if (t < 0 || t >= k_) throw invalid_input_error("set_color: color out of range");
    cells_[s] = static_cast<std::uint8_t>(t);
  }

  const std::vector<std::uint8_t>& cells() const { return cells_; }

  // Cells of color t as a bitmask; requires N <= 6.
  std::uint64_t class_mask64(int t) const {
    if (N_ > 6) throw invalid_input_error("class_mask64: N > 6");
    std::uint64_t m = 0;
    for (std::uint64_t s = 0; s < num_cells(); ++s)
      if (cells_[s] == t) m |= std::uint64_t{1} << s;
    return m;
  }

  std::vector<Mask> class_members(int t) const {
    std::vector<Mask> out;
    for (std::uint64_t s = 0; s < num_cells(); ++s)
      if (cells_[s] == t) out.push_back(s);
    return out;
  }

  friend bool operator==(const Coloring&, const Coloring&) = default;

 private:
  int N_ = 0;
  int k_ = 1;
  std::vector<std::uint8_t> cells_;
};

// cell[S] = layer_colors[|S|]. k defaults to max used color + 1.
inline Coloring layered_coloring(int N, const std::vector<int>& layer_colors,
                                 int k = 0) {
  if (static_cast<int>(layer_colors.size()) != N + 1)
    throw invalid_input_error("layered_coloring: need exactly N+1 layer colors");
  int maxc = 0;
  for (int c : layer_colors) {
    if (c < 0) throw invalid_input_error("layered_coloring: negative color");
    maxc = std::max(maxc, c);
  }
  if (k == 0) k = maxc + 1;
  if (k <= maxc) throw invalid_input_error("layered_coloring: k too small");
  Coloring c(N, k);
  for (std::uint64_t s = 0; s < c.num_cells(); ++s)
    c.set_color(s, layer_colors[mask_size(s)]);
  return c;
}

// True iff c is layered on 2^S: for each size i, all i-subsets of S share
// one color.
inline bool is_layered_on(const Coloring& c, const SubsetMask& S) {
  if (S.ground_size != c.ground_size())
    throw invalid_input_error("is_layered_on: ground size mismatch");
  int first_color[kMaxGround + 2];
  std::fill(first_color, first_color + S.size() + 1, -1);
  Mask sub = 0;
  while (true) {  // iterate all submasks of S.bits, ascending from 0
    int sz = mask_size(sub);
    int col = c.color(sub);
    if (first_color[sz] < 0)
      first_color[sz] = col;
    else if (first_color[sz] != col)
      return false;
    if (sub == S.bits) break;
    sub = (sub - S.bits) & S.bits;
  }
  return true;
}

// Every cell independent uniform over [0, k), deterministic in the seed:
// cell S gets the (S+1)-th SplitMix64 output mod k.
inline Coloring random_coloring(int N, int k, std::uint64_t seed) {
  if (k < 2) throw invalid_input_error("random_coloring: k must be >= 2");
  Coloring c(N, k);
  SplitMix64 rng(seed);
  for (std::uint64_t s = 0; s < c.num_cells(); ++s)
    c.set_color(s, static_cast<int>(rng.below(static_cast<std::uint64_t>(k))));
  return c;
}

// Exact Lubell mass of a family in 2^[N]: sum over members of 1/C(N,|S|).
using LubellMass = BigRat;

inline LubellMass lubell_mass(const std::vector<SubsetMask>& family, int N) {
  std::vector<Mask> seen;
  seen.reserve(family.size());
  for (const auto& s : family) {
    if (!mask_subset(s.bits, full_mask(N)))
      throw invalid_input_error("lubell_mass: member outside 2^[N]");
    seen.push_back(s.bits);
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
    throw invalid_input_error("lubell_mass: duplicate set in family");
  LubellMass total = 0;
  for (Mask m : seen) total += LubellMass(1, binomial(N, mask_size(m)));
  return total;
}

inline LubellMass lubell_mass_of_class(const Coloring& c, int t) {
  LubellMass total = 0;
  int N = c.ground_size();
  for (std::uint64_t s = 0; s < c.num_cells(); ++s)
    if (c.color(s) == t) total += LubellMass(1, binomial(N, mask_size(s)));
  return total;
}

// cell'[S] = 1 - cell[complement of S]; an involution on 2-colorings. Its
// fixed points are exactly the colorings with the complement symmetry the
// Q_6 witness satisfies.
inline Coloring complement_recolor(const Coloring& c) {
  if (c.num_colors() != 2)
    throw invalid_input_error("complement_recolor: k must be 2");
  int N = c.ground_size();
  Coloring out(N, 2);
  Mask full = full_mask(N);
  for (std::uint64_t s = 0; s < c.num_cells(); ++s)
    out.set_color(s, 1 - c.color(full & ~s));
  return out;
}

}  // namespace latram
