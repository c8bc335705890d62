#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "latram/bigint.hpp"
#include "latram/errors.hpp"
#include "latram/poset.hpp"
#include "latram/subset.hpp"
#include "latram/upset.hpp"

namespace latram {

// An embedding of Q_n into Q_N stored as its image table: image[S] is the
// target cell of source mask S, order-preserving and order-reflecting.
struct Embedding {
  int n = 0;
  int N = 0;
  std::vector<Mask> image;  // size 2^n, indexed by source mask

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

// A length-N sequence of upsets of 2^[n] in which every principal upset
// {i}+ appears: the characteristic-vector side of the bijection.
struct GoodSequence {
  int n = 0;
  std::vector<UpSet> entries;

  friend bool operator==(const GoodSequence&, const GoodSequence&) = default;
};

// The (I, phi) form of a copy: a coordinate set I with |I| = n and an
// inclusion-preserving map phi from 2^I into 2^([N] \ I). phi is indexed by
// the compressed rank of Y within I (bit i of the index <=> the i-th
// smallest element of I is in Y).
struct PhiDecomposition {
  int n = 0;
  int N = 0;
  Mask index_set = 0;      // I
  std::vector<Mask> phi;   // size 2^n, values disjoint from I
};

inline void check_embedding_shape(const Embedding& f) {
  if (f.n < 0 || f.N < 0 || f.n > kMaxGround || f.N > kMaxGround)
    throw invalid_input_error("embedding: dimensions out of range");
  if (f.image.size() != (std::size_t{1} << f.n))
    throw invalid_input_error("embedding: image table has wrong size");
  for (Mask m : f.image)
    if (!mask_subset(m, full_mask(f.N)))
      throw invalid_input_error("embedding: image outside 2^[N]");
}

// Full validity: injective and order-exact. Quadratic in 2^n.
inline bool is_valid_embedding(const Embedding& f) {
  check_embedding_shape(f);
  const std::size_t cells = std::size_t{1} << f.n;
  for (std::size_t a = 0; a < cells; ++a)
    for (std::size_t b = 0; b < cells; ++b) {
      if (a == b) continue;
      bool src = mask_subset(static_cast<Mask>(a), static_cast<Mask>(b));
      bool dst = f.image[a] != f.image[b] && mask_subset(f.image[a], f.image[b]);
      if (src != dst) return false;
    }
  return true;
}

// U_j(f) = { S : j in f(S) }, for j = 1..N. For a valid embedding every
// entry is upper closed and every {i}+ occurs (Claim 1 of the bijection).
inline GoodSequence characteristic_vector(const Embedding& f) {
  check_embedding_shape(f);
  const std::size_t cells = std::size_t{1} << f.n;
  GoodSequence out;
  out.n = f.n;
  out.entries.reserve(f.N);
  std::vector<std::uint8_t> member(cells);
  for (int j = 0; j < f.N; ++j) {
    for (std::size_t s = 0; s < cells; ++s)
      member[s] = (f.image[s] >> j) & 1;
    std::vector<Mask> mins;
    for (std::size_t s = 0; s < cells; ++s) {
      if (!member[s]) continue;
      bool minimal = true;
      for (int e = 0; e < f.n && minimal; ++e)
        if ((s >> e & 1) && member[s & ~(std::size_t{1} << e)]) minimal = false;
      if (minimal) mins.push_back(static_cast<Mask>(s));
    }
    out.entries.push_back(UpSet{f.n, std::move(mins)});
  }
  return out;
}

inline bool is_principal(const UpSet& u, int label) {
  return u.min_elements.size() == 1 &&
         u.min_elements[0] == (Mask{1} << (label - 1));
}

// True iff every principal upset {i}+, i = 1..n, occurs among the entries.
// All entries must share one n.
inline bool is_good(const std::vector<UpSet>& entries, int n) {
  for (const auto& u : entries)
    if (u.n != n) throw invalid_input_error("is_good: mixed dimensions");
  for (int i = 1; i <= n; ++i) {
    bool found = false;
    for (const auto& u : entries)
      if (is_principal(u, i)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

// The inverse bijection: f(S) = { j : S in U_j }. Rejects non-good input.
inline Embedding embedding_from_sequence(const GoodSequence& s) {
  if (s.n < 0 || s.n > kMaxGround)
    throw invalid_input_error("embedding_from_sequence: bad n");
  if (static_cast<int>(s.entries.size()) > kMaxGround)
    throw invalid_input_error("embedding_from_sequence: N > 63");
  if (!is_good(s.entries, s.n))
    throw invalid_input_error(
        "embedding_from_sequence: sequence is not good (missing some {i}+)");
  Embedding f;
  f.n = s.n;
  f.N = static_cast<int>(s.entries.size());
  f.image.assign(std::size_t{1} << s.n, 0);
  for (int j = 0; j < f.N; ++j) {
    const UpSet& u = s.entries[j];
    for (Mask t = 0; t < (Mask{1} << s.n); ++t)
      if (u.contains(t)) f.image[t] |= Mask{1} << j;
  }
  return f;
}

// Canonical (I, phi): I collects the first occurrence of each {i}+ in the
// characteristic vector; phi reads the non-I part off the image table.
inline PhiDecomposition decompose_embedding(const Embedding& f) {
  GoodSequence cv = characteristic_vector(f);
  std::vector<int> pos(f.n, -1);  // pos[i-1] = first column equal to {i}+
  for (int j = 0; j < f.N; ++j)
    for (int i = 1; i <= f.n; ++i)
      if (pos[i - 1] < 0 && is_principal(cv.entries[j], i)) pos[i - 1] = j;
  for (int i = 0; i < f.n; ++i)
    if (pos[i] < 0)
      throw invalid_input_error(
          "decompose_embedding: input is not a valid embedding");

  Mask I = 0;
  for (int i = 0; i < f.n; ++i) I |= Mask{1} << pos[i];

  // label_of[rank of element within I] = source coordinate i
  std::vector<int> label_of(f.n);
  {
    std::vector<int> elems;
    for (int j = 0; j < f.N; ++j)
      if (I >> j & 1) elems.push_back(j);
    for (int i = 0; i < f.n; ++i) {
      int r = static_cast<int>(std::lower_bound(elems.begin(), elems.end(),
                                                pos[i]) -
                               elems.begin());
      label_of[r] = i;
    }
  }

  PhiDecomposition d;
  d.n = f.n;
  d.N = f.N;
  d.index_set = I;
  d.phi.assign(std::size_t{1} << f.n, 0);
  for (std::size_t y = 0; y < d.phi.size(); ++y) {
    Mask src = 0;
    for (int r = 0; r < f.n; ++r)
      if (y >> r & 1) src |= Mask{1} << label_of[r];
    d.phi[y] = f.image[src] & ~I;
  }
  return d;
}

// The family { Y u phi(Y) : Y subseteq I }. Validates the decomposition
// invariants and that the result really is a copy of 2^[|I|].
inline std::vector<SubsetMask> recompose_phi(const PhiDecomposition& d) {
  if (d.n < 0 || d.n > 20 || d.N < 0 || d.N > kMaxGround)
    throw invalid_input_error("recompose_phi: dimensions out of range");
  if (mask_size(d.index_set) != d.n)
    throw invalid_input_error("recompose_phi: |I| != n");
  if (d.phi.size() != (std::size_t{1} << d.n))
    throw invalid_input_error("recompose_phi: phi table has wrong size");
  for (Mask v : d.phi) {
    if (v & d.index_set)
      throw invalid_input_error("recompose_phi: phi value meets I");
    if (!mask_subset(v, full_mask(d.N)))
      throw invalid_input_error("recompose_phi: phi value outside 2^[N]");
  }
  // Inclusion preservation: immediate successors suffice.
  for (std::size_t y = 0; y < d.phi.size(); ++y)
    for (int r = 0; r < d.n; ++r) {
      if (y >> r & 1) continue;
      if (!mask_subset(d.phi[y], d.phi[y | (std::size_t{1} << r)]))
        throw invalid_input_error("recompose_phi: phi not inclusion preserving");
    }

  // Expand compressed Y indices to subsets of I, in index order.
  std::vector<int> elems;
  for (int j = 0; j < d.N; ++j)
    if (d.index_set >> j & 1) elems.push_back(j);
  std::vector<SubsetMask> family;
  family.reserve(d.phi.size());
  for (std::size_t y = 0; y < d.phi.size(); ++y) {
    Mask Y = 0;
    for (int r = 0; r < d.n; ++r)
      if (y >> r & 1) Y |= Mask{1} << elems[r];
    family.emplace_back(Y | d.phi[y], d.N);
  }
  if (!is_embedding(Poset::boolean_lattice(d.n), family))
    throw invalid_input_error("recompose_phi: result is not a copy of Q_n");
  return family;
}

// --- counting -------------------------------------------------------------

// Number of sequences of `remaining` upsets (alphabet size a) that still
// realize `missing` prescribed principal upsets at least once each:
// sum_k (-1)^k C(missing,k) (a-k)^remaining.
inline BigInt good_completions(const BigInt& a, int missing, int remaining) {
  BigInt total = 0;
  for (int k = 0; k <= missing; ++k) {
    BigInt term = binomial(missing, k) * big_pow(a - k, remaining);
    if (k & 1)
      total -= term;
    else
      total += term;
  }
  return total;
}

// e(n, N): exact number of embeddings of Q_n into Q_N, by
// inclusion-exclusion over which principal upsets are missing from a word
// of length N over the a(n) upsets.
inline BigInt count_embeddings_exact(int n, int N) {
  if (n < 0 || N < 0) throw invalid_input_error("count_embeddings_exact: negative input");
  if (n > 7)
    throw resource_limit_error("count_embeddings_exact: n > 7 (a(n) unknown)");
  if (n > N) return 0;
  return good_completions(count_antichains(n), n, N);
}

// The sandwich N!/(N-n)! (a(n)-n)^(N-n) <= e(n,N) <= N!/(N-n)! a(n)^(N-n).
inline std::pair<BigInt, BigInt> count_embeddings_bounds(int n, int N) {
  if (n < 0 || N < 0 || n > N)
    throw invalid_input_error("count_embeddings_bounds: need 0 <= n <= N");
  if (n > 7) throw resource_limit_error("count_embeddings_bounds: n > 7");
  BigInt a = count_antichains(n);
  BigInt placements = falling_factorial(N, n);
  BigInt lower = placements * big_pow(a - n, N - n);
  BigInt upper = placements * big_pow(a, N - n);
  return {lower, upper};
}

// --- enumeration ----------------------------------------------------------

namespace detail {

struct UpsetAlphabet {
  int n = 0;
  std::vector<std::uint64_t> families;  // family masks, enumeration order
  std::vector<int> principal_label;     // 0 if not principal, else i in 1..n

  static UpsetAlphabet build(int n) {
    if (n > 6)
      throw resource_limit_error("embedding enumeration: n > 6 infeasible");
    UpsetAlphabet a;
    a.n = n;
    a.families = enumerate_upset_masks(n);
    a.principal_label.assign(a.families.size(), 0);
    auto sup = superset_masks(n);
    for (int i = 1; i <= n; ++i) {
      std::uint64_t fam = sup[std::size_t{1} << (i - 1)];
      for (std::size_t u = 0; u < a.families.size(); ++u)
        if (a.families[u] == fam) a.principal_label[u] = i;
    }
    return a;
  }
};

}  // namespace detail

struct EnumOptions {
  // Guard on the sequence space a(n)^N when enumerating the full range.
  std::uint64_t node_budget = 500'000'000;
  std::optional<std::uint64_t> max_items;
};

// DFS over good sequences in lexicographic order (entries ordered as in
// enumerate_upsets). Calls visit(images) for every embedding; images is a
// scratch buffer of size 2^n the visitor must copy if it keeps it.
// Returns the number of embeddings visited. Throws resource_limit_error
// carrying the partial count if the node budget is exhausted.
template <typename Visitor>
std::uint64_t visit_embeddings(int n, int N, Visitor&& visit,
                               const EnumOptions& opt = {}) {
  if (n < 0 || N < 0 || N > kMaxGround)
    throw invalid_input_error("visit_embeddings: bad dimensions");
  if (n > N) return 0;
  auto alphabet = detail::UpsetAlphabet::build(n);
  const std::size_t cells = std::size_t{1} << n;
  const std::size_t a = alphabet.families.size();

  std::vector<Mask> img(cells, 0);
  std::uint64_t emitted = 0, nodes = 0;
  bool stop = false;

  // missing: bitmask over labels 1..n of principals not yet placed
  std::function<void(int, unsigned)> rec = [&](int depth, unsigned missing) {
    if (stop) return;
    if (depth == N) {
      if (missing == 0) {
        ++emitted;
        visit(const_cast<const std::vector<Mask>&>(img));
        if (opt.max_items && emitted >= *opt.max_items) stop = true;
      }
      return;
    }
    if (std::popcount(missing) > N - depth) return;  // goodness unreachable
    for (std::size_t u = 0; u < a && !stop; ++u) {
      if (++nodes > opt.node_budget)
        throw resource_limit_error("visit_embeddings: node budget exceeded",
                                   emitted);
      std::uint64_t fam = alphabet.families[u];
      for (std::size_t s = 0; s < cells; ++s)
        if (fam >> s & 1) img[s] |= Mask{1} << depth;
      unsigned m2 = missing;
      if (int lab = alphabet.principal_label[u]; lab != 0)
        m2 &= ~(1u << (lab - 1));
      rec(depth + 1, m2);
      for (std::size_t s = 0; s < cells; ++s)
        img[s] &= ~(Mask{1} << depth);
    }
  };
  rec(0, n == 0 ? 0u : ((1u << n) - 1));
  return emitted;
}

// Rank <-> sequence. Rank is the position in the lexicographic order of all
// good sequences. These power deterministic range partitioning.
inline std::vector<std::uint32_t> unrank_good_sequence(int n, int N,
                                                       BigInt rank) {
  auto alphabet = detail::UpsetAlphabet::build(n);
  BigInt a = static_cast<std::uint64_t>(alphabet.families.size());
  unsigned missing = n == 0 ? 0u : ((1u << n) - 1);
  std::vector<std::uint32_t> seq;
  seq.reserve(N);
  for (int j = 0; j < N; ++j) {
    bool placed = false;
    for (std::size_t u = 0; u < alphabet.families.size(); ++u) {
      unsigned m2 = missing;
      if (int lab = alphabet.principal_label[u]; lab != 0)
        m2 &= ~(1u << (lab - 1));
      BigInt cnt = good_completions(a, std::popcount(m2), N - j - 1);
      if (rank < cnt) {
        seq.push_back(static_cast<std::uint32_t>(u));
        missing = m2;
        placed = true;
        break;
      }
      rank -= cnt;
    }
    if (!placed)
      throw invalid_input_error("unrank_good_sequence: rank out of range");
  }
  return seq;
}

inline BigInt rank_of_good_sequence(int n, int N,
                                    const std::vector<std::uint32_t>& seq) {
  if (static_cast<int>(seq.size()) != N)
    throw invalid_input_error("rank_of_good_sequence: wrong length");
  auto alphabet = detail::UpsetAlphabet::build(n);
  BigInt a = static_cast<std::uint64_t>(alphabet.families.size());
  unsigned missing = n == 0 ? 0u : ((1u << n) - 1);
  BigInt rank = 0;
  for (int j = 0; j < N; ++j) {
    if (seq[j] >= alphabet.families.size())
      throw invalid_input_error("rank_of_good_sequence: bad letter");
    for (std::uint32_t u = 0; u < seq[j]; ++u) {
      unsigned m2 = missing;
      if (int lab = alphabet.principal_label[u]; lab != 0)
        m2 &= ~(1u << (lab - 1));
      rank += good_completions(a, std::popcount(m2), N - j - 1);
    }
    if (int lab = alphabet.principal_label[seq[j]]; lab != 0)
      missing &= ~(1u << (lab - 1));
  }
  if (missing != 0)
    throw invalid_input_error("rank_of_good_sequence: sequence not good");
  return rank;
}

inline Embedding embedding_from_indices(int n, int N,
                                        const std::vector<std::uint32_t>& seq,
                                        const detail::UpsetAlphabet& alphabet) {
  Embedding f;
  f.n = n;
  f.N = N;
  f.image.assign(std::size_t{1} << n, 0);
  for (int j = 0; j < N; ++j) {
    std::uint64_t fam = alphabet.families[seq[j]];
    for (std::size_t s = 0; s < f.image.size(); ++s)
      if (fam >> s & 1) f.image[s] |= Mask{1} << j;
  }
  return f;
}

// A single-consumer stream over an embedding rank range [first, last).
// Parallel consumers partition [0, e(n,N)) into disjoint ranges.
class EmbeddingStream {
 public:
  // Full range; refuses to start if the sequence space outruns the budget
  // and no explicit range was given.
  EmbeddingStream(int n, int N, const EnumOptions& opt = {})
      : EmbeddingStream(n, N, 0, count_embeddings_exact(n, N)) {
    if (n <= 6) {
      BigInt space = big_pow(count_antichains(n), N);
      if (space > BigInt(opt.node_budget) && !opt.max_items)
        throw resource_limit_error(
            "enumerate_embeddings: a(n)^N exceeds budget; supply a rank range "
            "or a first-K limit");
    }
    if (opt.max_items) {
      BigInt lim = BigInt(*opt.max_items);
      if (end_ - next_ > lim) end_ = next_ + lim;
    }
  }

  EmbeddingStream(int n, int N, BigInt first, BigInt last)
      : n_(n), N_(N), next_(std::move(first)), end_(std::move(last)),
        alphabet_(detail::UpsetAlphabet::build(n)) {
    if (n > N && end_ > 0)
      throw invalid_input_error("EmbeddingStream: n > N has no embeddings");
  }

  bool done() const { return next_ >= end_; }

  Embedding next() {
    if (done()) throw invalid_input_error("EmbeddingStream: exhausted");
    auto seq = unrank_good_sequence(n_, N_, next_);
    ++next_;
    return embedding_from_indices(n_, N_, seq, alphabet_);
  }

  BigInt remaining() const { return end_ - next_; }

 private:
  int n_, N_;
  BigInt next_, end_;
  detail::UpsetAlphabet alphabet_;
};

}  // namespace latram
