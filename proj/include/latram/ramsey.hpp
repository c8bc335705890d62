#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "latram/coloring.hpp"
#include "latram/construct.hpp"
#include "latram/detect.hpp"
#include "latram/embedding.hpp"
#include "latram/errors.hpp"
#include "latram/poset.hpp"
#include "latram/subset.hpp"

namespace latram {

// Verdict of an exhaustive arrowing scan at one dimension N. holds == false
// comes with an independently re-validated counterexample coloring.
struct RamseyVerdict {
  int N = 0;
  bool holds = false;
  std::optional<Coloring> counterexample;
  std::uint64_t colorings_checked = 0;
  bool symmetry_reduced = false;
};

struct ScanOptions {
  int workers = 1;
  std::uint64_t start_index = 0;  // resume point in the coloring enumeration
  std::optional<std::uint64_t> max_colorings;  // scan budget
  // Called with a resume-safe index (everything below is fully scanned).
  std::function<void(std::uint64_t)> progress;
  std::uint64_t chunk_size = 1 << 14;
};

namespace detail {

// Monochromatic-target detector specialized for scans: candidate order and
// Q_n copy masks are precomputed once, then each coloring is a bitmask.
class TargetDetector {
 public:
  TargetDetector(const Poset& p, int N) : poset_(p) {
    if (N > 6)
      throw invalid_input_error("arrowing scans require 2^N <= 64 cells");
    int sz = p.size();
    int lg = 0;
    while ((1 << lg) < sz) ++lg;
    if ((1 << lg) == sz && lg <= N && p == Poset::boolean_lattice(lg)) {
      QnCopyTable t = build_copy_table(lg, N);
      copy_masks_ = std::move(t.element_masks);
      is_qn_ = true;
    }
    cells_sorted_.reserve(std::size_t{1} << N);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << N); ++s)
      cells_sorted_.push_back(s);
    std::sort(cells_sorted_.begin(), cells_sorted_.end(), [](Mask a, Mask b) {
      int pa = mask_size(a), pb = mask_size(b);
      if (pa != pb) return pa < pb;
      return a < b;
    });
    order_.resize(sz);
    for (int i = 0; i < sz; ++i) order_[i] = i;
    std::sort(order_.begin(), order_.end(), [&](int a, int b) {
      int da = 0, db = 0;
      for (int x = 0; x < sz; ++x) {
        da += p.less(x, a);
        db += p.less(x, b);
      }
      if (da != db) return da < db;
      return a < b;
    });
  }

  // Does `cells` (bitmask of allowed cells) contain a copy of the target?
  bool has_copy(std::uint64_t cells) const {
    if (is_qn_) {
      for (std::uint64_t em : copy_masks_)
        if ((em & cells) == em) return true;
      return false;
    }
    img_.assign(poset_.size(), 0);
    return place(0, cells);
  }

 private:
  bool place(int depth, std::uint64_t cells) const {
    if (depth == poset_.size()) return true;
    int e = order_[depth];
    for (Mask c : cells_sorted_) {
      if (!(cells >> c & 1)) continue;
      bool ok = true;
      for (int d = 0; d < depth && ok; ++d) {
        int f = order_[d];
        if (img_[f] == c) { ok = false; break; }
        if (poset_.leq(f, e) != mask_subset(img_[f], c) ||
            poset_.leq(e, f) != mask_subset(c, img_[f]))
          ok = false;
      }
      if (!ok) continue;
      img_[e] = c;
      if (place(depth + 1, cells)) return true;
    }
    return false;
  }

  Poset poset_;
  bool is_qn_ = false;
  std::vector<std::uint64_t> copy_masks_;
  std::vector<Mask> cells_sorted_;
  std::vector<int> order_;
  mutable std::vector<Mask> img_;
};

inline Coloring coloring_from_bits(int N, std::uint64_t bits) {
  Coloring c(N, 2);
  for (std::uint64_t s = 0; s < c.num_cells(); ++s)
    c.set_color(s, static_cast<int>(bits >> s & 1));
  return c;
}

}  // namespace detail

// Exhaustive arrowing at dimension N: does every red/blue coloring of Q_N
// contain a red copy of `red_target` or a blue copy of `blue_target`?
// Colorings are enumerated as integers (bit S = color of cell S). When the
// two targets are equal, color-swap symmetry fixes the color of the empty
// set and scans half the space; any counterexample is re-validated without
// the symmetry assumption. Deterministic: the counterexample, if any, is
// the first in index order.
inline RamseyVerdict arrowing(int N, const Poset& red_target,
                              const Poset& blue_target,
                              const ScanOptions& opt = {}) {
  if (N < 0 || N > 5)
    throw invalid_input_error("arrowing: exhaustive scan needs N <= 5");
  const std::uint64_t cells = std::uint64_t{1} << N;
  const bool swap_symmetry = red_target == blue_target;
  // bit for cell 0 (the empty set) fixed to red (= 0) under symmetry
  const std::uint64_t total_raw =
      (cells >= 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << cells);
  const std::uint64_t total = swap_symmetry ? total_raw / 2 : total_raw;

  detail::TargetDetector red_det(red_target, N);
  detail::TargetDetector blue_det(blue_target, N);
  const std::uint64_t full_cells =
      cells >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cells) - 1;

  // index -> coloring bits: with symmetry the fixed bit 0 is spliced out
  auto bits_of = [&](std::uint64_t idx) -> std::uint64_t {
    return swap_symmetry ? (idx << 1) : idx;
  };
  auto good = [&](std::uint64_t idx) -> bool {
    std::uint64_t blue_cells = bits_of(idx);
    std::uint64_t red_cells = full_cells & ~blue_cells;
    return red_det.has_copy(red_cells) || blue_det.has_copy(blue_cells);
  };

  const std::uint64_t begin = opt.start_index;
  std::uint64_t end = total;
  if (opt.max_colorings && begin + *opt.max_colorings < total)
    end = begin + *opt.max_colorings;

  std::atomic<std::uint64_t> next_chunk{begin};
  std::atomic<std::uint64_t> found_at{~std::uint64_t{0}};
  std::mutex done_mutex;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> done_ranges;
  std::uint64_t watermark = begin;

  int workers = std::max(1, opt.workers);
  auto run = [&]() {
    while (true) {
      std::uint64_t lo = next_chunk.fetch_add(opt.chunk_size);
      if (lo >= end) break;
      if (lo > found_at.load(std::memory_order_relaxed)) break;
      std::uint64_t hi = std::min(end, lo + opt.chunk_size);
      std::uint64_t local_found = ~std::uint64_t{0};
      for (std::uint64_t idx = lo; idx < hi; ++idx) {
        if (!good(idx)) {
          local_found = idx;
          break;
        }
      }
      if (local_found != ~std::uint64_t{0}) {
        std::uint64_t cur = found_at.load();
        while (local_found < cur &&
               !found_at.compare_exchange_weak(cur, local_found)) {
        }
      }
      std::lock_guard<std::mutex> lk(done_mutex);
      done_ranges.emplace_back(lo, hi);
      std::sort(done_ranges.begin(), done_ranges.end());
      while (!done_ranges.empty() && done_ranges.front().first == watermark) {
        watermark = done_ranges.front().second;
        done_ranges.erase(done_ranges.begin());
      }
      if (opt.progress) opt.progress(watermark);
    }
  };

  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }

  RamseyVerdict v;
  v.N = N;
  v.symmetry_reduced = swap_symmetry;
  std::uint64_t hit = found_at.load();
  if (hit != ~std::uint64_t{0}) {
    v.holds = false;
    v.colorings_checked = hit - begin + 1;
    Coloring cex = detail::coloring_from_bits(N, bits_of(hit));
    // re-validate without any symmetry assumption
    detail::TargetDetector rv(red_target, N), bv(blue_target, N);
    std::uint64_t blue_cells = bits_of(hit);
    if (rv.has_copy(full_cells & ~blue_cells) || bv.has_copy(blue_cells))
      throw std::logic_error("arrowing: counterexample failed re-validation");
    v.counterexample = std::move(cex);
    return v;
  }
  if (end < total)
    throw resource_limit_error("arrowing: scan budget exhausted, verdict unknown",
                               end - begin);
  v.holds = true;
  v.colorings_checked = end - begin;
  return v;
}

// R(P, P2): least N <= N_max with arrowing(N) true, having confirmed
// arrowing(N-1) false along the way.
inline int ramsey_number(const Poset& p, const Poset& p2, int N_max,
                         const ScanOptions& opt = {}) {
  for (int N = 0; N <= N_max; ++N) {
    ScanOptions o = opt;
    o.start_index = 0;
    RamseyVerdict v = arrowing(N, p, p2, o);
    if (v.holds) return N;
  }
  throw resource_limit_error("ramsey_number: undecided within N_max");
}

// Multicolor arrowing and the multicolor Ramsey number. Exhaustive mode
// enumerates k^(2^N) colorings (tiny scales only); lower-bound-only mode
// certifies the layered construction on Q_{k-1} and reports k as a lower
// bound without an exact value.
struct MulticolorVerdict {
  int value = 0;
  bool exact = false;  // false: `value` is only a certified lower bound
};

inline bool multicolor_arrowing(int N, const Poset& p, int k,
                                std::uint64_t budget = 200'000'000) {
  const std::uint64_t cells = std::uint64_t{1} << N;
  if (N > 6) throw invalid_input_error("multicolor_arrowing: N too large");
  double logtotal = static_cast<double>(cells) * std::log2(double(k));
  if (logtotal > 40)
    throw resource_limit_error("multicolor_arrowing: k^(2^N) too large");
  std::uint64_t total = 1;
  for (std::uint64_t i = 0; i < cells; ++i) total *= static_cast<std::uint64_t>(k);
  if (total > budget)
    throw resource_limit_error("multicolor_arrowing: k^(2^N) exceeds budget");

  detail::TargetDetector det(p, N);
  std::vector<int> digits(cells, 0);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    bool mono = false;
    for (int t = 0; t < k && !mono; ++t) {
      std::uint64_t cls = 0;
      for (std::uint64_t s = 0; s < cells; ++s)
        if (digits[s] == t) cls |= std::uint64_t{1} << s;
      if (det.has_copy(cls)) mono = true;
    }
    if (!mono) return false;
    // increment base-k counter
    for (std::uint64_t s = 0; s < cells; ++s) {
      if (++digits[s] < k) break;
      digits[s] = 0;
    }
  }
  return true;
}

inline MulticolorVerdict multicolor_ramsey(const Poset& p, int k, int N_max,
                                           bool lower_bound_only = false,
                                           std::uint64_t budget = 200'000'000) {
  if (k < 1) throw invalid_input_error("multicolor_ramsey: k must be >= 1");
  if (lower_bound_only) {
    Coloring c = multicolor_lower_coloring(k);
    for (int t = 0; t < k; ++t)
      if (find_poset_copy(c, p, t))
        throw invalid_input_error(
            "multicolor_ramsey: layered lower bound needs a non-antichain P");
    return {k, false};
  }
  for (int N = 0; N <= N_max; ++N)
    if (multicolor_arrowing(N, p, k, budget)) return {N, true};
  throw resource_limit_error("multicolor_ramsey: undecided within N_max");
}

// --- witness search ----------------------------------------------------------

// Annealing schedule knobs; every randomized choice flows from the seed via
// SplitMix64, so runs are reproducible. Defaults are the documented ones.
struct AnnealParams {
  double t0 = 1.5;             // initial temperature
  double cooling = 0.99997;    // geometric factor per step
  double t_floor = 0.02;       // reheat to t0 when T sinks below
  std::uint64_t restart_after = 300'000;  // steps without improvement
  bool symmetric = false;       // search only complement-symmetric colorings
};

// Local search for a 2-coloring of Q_N with zero monochromatic copies of
// Q_n: simulated annealing over cell flips with the copy counts maintained
// incrementally, optionally restricted to the subspace fixed by
// complement_recolor. A success is re-validated against the independent
// per-copy oracle before being returned; absence after `budget` steps is a
// normal outcome, not an error.
inline std::optional<Coloring> witness_search(
    int N, int n, std::uint64_t budget, std::uint64_t seed,
    const AnnealParams& params = {},
    const std::atomic<bool>* cancel = nullptr) {
  if (N > 6)
    throw invalid_input_error("witness_search: needs 2^N <= 64 cells");
  if (n > N) throw invalid_input_error("witness_search: n > N");

  QnCopyTable table = build_copy_table(n, N);
  const int cells = 1 << N;
  const int copy_size = 1 << n;
  const std::uint64_t all_cells =
      cells >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cells) - 1;

  std::vector<std::vector<std::uint32_t>> incidence(cells);
  for (std::uint32_t ci = 0; ci < table.element_masks.size(); ++ci) {
    std::uint64_t em = table.element_masks[ci];
    while (em) {
      int v = std::countr_zero(em);
      incidence[v].push_back(ci);
      em &= em - 1;
    }
  }

  SplitMix64 rng(seed);
  std::uint64_t blue = 0;
  std::vector<std::uint8_t> red_count(table.element_masks.size(), 0);
  std::int64_t objective = 0;

  auto comp_cell = [&](int v) { return static_cast<int>((cells - 1) ^ v); };

  auto recompute = [&]() {
    objective = 0;
    for (std::size_t ci = 0; ci < table.element_masks.size(); ++ci) {
      std::uint64_t em = table.element_masks[ci];
      red_count[ci] =
          static_cast<std::uint8_t>(std::popcount(em & all_cells & ~blue));
      if (red_count[ci] == copy_size || red_count[ci] == 0) ++objective;
    }
  };

  auto flip_one = [&](int v) -> std::int64_t {
    std::int64_t delta = 0;
    bool to_blue = !(blue >> v & 1);
    for (std::uint32_t ci : incidence[v]) {
      std::uint8_t before = red_count[ci];
      std::uint8_t after = to_blue ? before - 1 : before + 1;
      red_count[ci] = after;
      bool was_mono = before == copy_size || before == 0;
      bool is_mono = after == copy_size || after == 0;
      delta += static_cast<std::int64_t>(is_mono) -
               static_cast<std::int64_t>(was_mono);
    }
    blue ^= std::uint64_t{1} << v;
    return delta;
  };

  auto randomize = [&]() {
    if (params.symmetric) {
      blue = 0;
      for (int v = 0; v < cells; ++v) {
        int w = comp_cell(v);
        if (v > w) continue;
        bool b = rng.next() & 1;
        if (b) blue |= std::uint64_t{1} << v;
        if (!b) blue |= std::uint64_t{1} << w;
      }
    } else {
      blue = rng.next() & all_cells;
    }
    recompute();
  };

  auto as_coloring = [&]() {
    Coloring c(N, 2);
    for (int v = 0; v < cells; ++v)
      c.set_color(static_cast<Mask>(v), static_cast<int>(blue >> v & 1));
    return c;
  };

  auto validated = [&](const Coloring& c) {
    auto [r, b] = count_mono_qn(c, table);  // independent per-copy scan
    return r == 0 && b == 0;
  };

  randomize();
  double T = params.t0;
  std::int64_t best = objective;
  std::uint64_t since_improved = 0;

  for (std::uint64_t step = 0; step < budget; ++step) {
    if (objective == 0) {
      Coloring c = as_coloring();
      if (!validated(c))
        throw std::logic_error("witness_search: incremental state diverged");
      return c;
    }
    if (cancel && (step & 0xFFF) == 0 &&
        cancel->load(std::memory_order_relaxed))
      return std::nullopt;

    int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(cells)));
    std::int64_t delta = flip_one(v);
    int w = -1;
    if (params.symmetric) {
      w = comp_cell(v);
      delta += flip_one(w);
    }
    bool accept = delta <= 0 ||
                  rng.unit() < std::exp(-static_cast<double>(delta) / T);
    if (accept) {
      objective += delta;
    } else {
      flip_one(v);
      if (w >= 0) flip_one(w);
    }

    if (objective < best) {
      best = objective;
      since_improved = 0;
    } else if (++since_improved >= params.restart_after) {
      randomize();
      T = params.t0;
      best = objective;
      since_improved = 0;
      continue;
    }
    T *= params.cooling;
    if (T < params.t_floor) T = params.t0;
  }
  if (objective == 0) {
    Coloring c = as_coloring();
    if (validated(c)) return c;
  }
  return std::nullopt;
}

}  // namespace latram
