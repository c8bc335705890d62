#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "latram/errors.hpp"

namespace latram {

// Raw machine-word subset of a ground set [N] = {1,...,N}, N <= 63.
// Bit i (0-based) set  <=>  ground element i+1 is in the set, so subset
// order is exactly bitwise containment.
using Mask = std::uint64_t;

inline constexpr int kMaxGround = 63;

constexpr Mask full_mask(int n) {
  return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1;
}

constexpr bool mask_subset(Mask a, Mask b) { return (a & ~b) == 0; }

constexpr bool mask_comparable(Mask a, Mask b) {
  return mask_subset(a, b) || mask_subset(b, a);
}

inline int mask_size(Mask m) { return std::popcount(m); }

// One element of Q_N with its ground size attached; the checked type used
// at API boundaries. Hot loops work on raw Mask.
struct SubsetMask {
  Mask bits = 0;
  int ground_size = 0;

  SubsetMask() = default;

  SubsetMask(Mask b, int n) : bits(b), ground_size(n) {
    if (n < 0 || n > kMaxGround)
      throw invalid_input_error("SubsetMask: ground size must be in [0, 63]");
    if (!mask_subset(b, full_mask(n)))
      throw invalid_input_error(
          "SubsetMask: bit set at position >= ground size");
  }

  // Build from 1-based ground elements, e.g. SubsetMask::of({2,3}, 6).
  static SubsetMask of(std::initializer_list<int> elems, int n) {
    Mask b = 0;
    for (int e : elems) {
      if (e < 1 || e > n)
        throw invalid_input_error("SubsetMask::of: element outside [1, N]");
      b |= Mask{1} << (e - 1);
    }
    return SubsetMask(b, n);
  }

  int size() const { return mask_size(bits); }
  bool subset_of(const SubsetMask& o) const { return mask_subset(bits, o.bits); }
  bool comparable_with(const SubsetMask& o) const {
    return mask_comparable(bits, o.bits);
  }

  friend bool operator==(const SubsetMask&, const SubsetMask&) = default;
  // Sort key: mask value. Families always share one ground size.
  friend bool operator<(const SubsetMask& a, const SubsetMask& b) {
    return a.bits < b.bits;
  }
};

// "{1,3,5}" (1-based elements, ascending); "{}" for the empty set.
inline std::string set_to_string(Mask m) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < 64; ++i) {
    if (m >> i & 1) {
      if (!first) out += ',';
      out += std::to_string(i + 1);
      first = false;
    }
  }
  out += '}';
  return out;
}

inline std::string set_to_string(const SubsetMask& s) {
  return set_to_string(s.bits);
}

// Shared ground size of a family; throws on mixed ground sizes.
inline int common_ground(const std::vector<SubsetMask>& family) {
  if (family.empty()) return 0;
  int n = family.front().ground_size;
  for (const auto& s : family)
    if (s.ground_size != n)
      throw invalid_input_error("family mixes ground sizes");
  return n;
}

inline std::vector<Mask> raw_masks(const std::vector<SubsetMask>& family) {
  std::vector<Mask> out;
  out.reserve(family.size());
  for (const auto& s : family) out.push_back(s.bits);
  return out;
}

inline std::vector<SubsetMask> typed_masks(const std::vector<Mask>& masks,
                                           int n) {
  std::vector<SubsetMask> out;
  out.reserve(masks.size());
  for (Mask m : masks) out.emplace_back(m, n);
  return out;
}

}  // namespace latram
