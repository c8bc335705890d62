#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "latram/coloring.hpp"
#include "latram/embedding.hpp"
#include "latram/errors.hpp"
#include "latram/poset.hpp"
#include "latram/subset.hpp"

namespace latram {

using json = nlohmann::json;

// --- canonical output ------------------------------------------------------

// Canonical JSON: nlohmann's default object ordering (sorted keys), compact
// dump, lowercase hex everywhere. Digests and golden tests rely on this
// being byte-stable.
inline std::string canonical_dump(const json& j) { return j.dump(); }

// FNV-1a 64-bit over the canonical output; the stable result digest
// recorded in run records. Not cryptographic.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex_u64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

inline std::string digest(std::string_view canonical_output) {
  return hex_u64(fnv1a64(canonical_output));
}

// --- hex -------------------------------------------------------------------

inline std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out += digits[b >> 4];
    out += digits[b & 0xF];
  }
  return out;
}

inline std::vector<std::uint8_t> from_hex(const std::string& hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;  // readers accept either case
    throw invalid_input_error("bad hex digit");
  };
  if (hex.size() % 2) throw invalid_input_error("odd hex length");
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 |
                                       nibble(hex[2 * i + 1]));
  return out;
}

// --- poset -----------------------------------------------------------------

// {"size": m, "leq": [[i, j], ...]}: all strict pairs i <= j, i != j;
// reflexive closure implied. Loading validates the axioms.
inline json poset_to_json(const Poset& p) {
  json pairs = json::array();
  for (int a = 0; a < p.size(); ++a)
    for (int b = 0; b < p.size(); ++b)
      if (a != b && p.leq(a, b)) pairs.push_back(json::array({a, b}));
  return json{{"size", p.size()}, {"leq", pairs}};
}

inline Poset poset_from_json(const json& j) {
  if (!j.is_object() || !j.contains("size") || !j.contains("leq"))
    throw invalid_input_error("poset json: need {size, leq}");
  int size = j.at("size").get<int>();
  if (size < 0 || size > 4096) throw invalid_input_error("poset json: bad size");
  std::vector<std::uint8_t> leq(static_cast<std::size_t>(size) * size, 0);
  for (int a = 0; a < size; ++a) leq[static_cast<std::size_t>(a) * size + a] = 1;
  for (const auto& pr : j.at("leq")) {
    if (!pr.is_array() || pr.size() != 2)
      throw invalid_input_error("poset json: leq entries must be [i, j]");
    int a = pr[0].get<int>(), b = pr[1].get<int>();
    if (a < 0 || b < 0 || a >= size || b >= size)
      throw invalid_input_error("poset json: index out of range");
    if (a == b) throw invalid_input_error("poset json: strict pairs only");
    leq[static_cast<std::size_t>(a) * size + b] = 1;
  }
  return Poset::from_leq_matrix(size, std::move(leq));  // names violated axiom
}

// --- coloring ---------------------------------------------------------------

// {"N": N, "k": k, "cells_hex": "..."}; for k = 2 the packed bit array
// little-endian (bit S = color of mask S), else one byte per cell.
inline json coloring_to_json(const Coloring& c) {
  std::vector<std::uint8_t> bytes;
  if (c.num_colors() == 2) {
    bytes.assign((c.num_cells() + 7) / 8, 0);
    for (std::uint64_t s = 0; s < c.num_cells(); ++s)
      if (c.color(s)) bytes[s >> 3] |= static_cast<std::uint8_t>(1u << (s & 7));
  } else {
    bytes.assign(c.cells().begin(), c.cells().end());
  }
  return json{{"N", c.ground_size()}, {"k", c.num_colors()},
              {"cells_hex", to_hex(bytes)}};
}

inline Coloring coloring_from_json(const json& j) {
  if (!j.is_object() || !j.contains("N") || !j.contains("k") ||
      !j.contains("cells_hex"))
    throw invalid_input_error("coloring json: need {N, k, cells_hex}");
  int N = j.at("N").get<int>();
  int k = j.at("k").get<int>();
  auto bytes = from_hex(j.at("cells_hex").get<std::string>());
  Coloring c(N, k);
  if (k == 2) {
    if (bytes.size() != (c.num_cells() + 7) / 8)
      throw invalid_input_error("coloring json: wrong packed length");
    for (std::uint64_t s = 0; s < c.num_cells(); ++s)
      c.set_color(s, bytes[s >> 3] >> (s & 7) & 1);
  } else {
    if (bytes.size() != c.num_cells())
      throw invalid_input_error("coloring json: wrong cell count");
    for (std::uint64_t s = 0; s < c.num_cells(); ++s) c.set_color(s, bytes[s]);
  }
  return c;
}

// --- embeddings and sequences ------------------------------------------------

// {"n": n, "N": N, "image": [m_0, ..., m_{2^n-1}]}, index = source mask.
inline json embedding_to_json(const Embedding& f) {
  json img = json::array();
  for (Mask m : f.image) img.push_back(m);
  return json{{"N", f.N}, {"image", img}, {"n", f.n}};
}

inline Embedding embedding_from_json(const json& j) {
  Embedding f;
  f.n = j.at("n").get<int>();
  f.N = j.at("N").get<int>();
  for (const auto& v : j.at("image"))
    f.image.push_back(v.get<std::uint64_t>());
  check_embedding_shape(f);
  return f;
}

// {"n": n, "entries": [[minimal masks], ...]}.
inline json good_sequence_to_json(const GoodSequence& s) {
  json entries = json::array();
  for (const auto& u : s.entries) {
    json mins = json::array();
    for (Mask m : u.min_elements) mins.push_back(m);
    entries.push_back(mins);
  }
  return json{{"entries", entries}, {"n", s.n}};
}

inline GoodSequence good_sequence_from_json(const json& j) {
  GoodSequence s;
  s.n = j.at("n").get<int>();
  for (const auto& e : j.at("entries")) {
    std::vector<SubsetMask> gens;
    for (const auto& v : e)
      gens.emplace_back(v.get<std::uint64_t>(), s.n);
    s.entries.push_back(upset_close(gens, s.n));
  }
  return s;
}

// --- set families -------------------------------------------------------------

// {"N": N, "sets": [masks...]} — the CLI's family input format.
inline json family_to_json(const std::vector<SubsetMask>& family, int N) {
  json sets = json::array();
  for (const auto& s : family) sets.push_back(s.bits);
  return json{{"N", N}, {"sets", sets}};
}

inline std::pair<std::vector<SubsetMask>, int> family_from_json(const json& j) {
  int N = j.at("N").get<int>();
  std::vector<SubsetMask> family;
  for (const auto& v : j.at("sets"))
    family.emplace_back(v.get<std::uint64_t>(), N);
  return {family, N};
}

// --- files -------------------------------------------------------------------

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input_error("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw invalid_input_error("bad json in " + path + ": " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw invalid_input_error("cannot write file: " + path);
  out << text;
}

}  // namespace latram
