#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pir/database.hpp"

namespace pir {

// A per-record block-selector vector: length k, entries in {0..n-1}, not all
// zero, entry sum divisible by n-1. These index the linear combinations a
// server returns in the star-paired scheme.
using SelectorVec = std::vector<uint8_t>;

// A (server, selector) pair; one response string per vertex.
struct PairVertex {
  uint32_t server = 0;  // 1..n
  SelectorVec sel;

  bool operator==(const PairVertex&) const = default;
  auto operator<=>(const PairVertex&) const = default;
};

// One connected piece of the pairing graph: either an isolated vertex (the
// response string is the wanted block on its own) or a star whose center
// pairs with each of its n-1 leaves.
struct PairComponent {
  std::vector<PairVertex> members;       // sorted
  std::optional<PairVertex> center;      // engaged part (v_ell = 0) for stars
};

// Bipartite graph on {1..n} x selectors for a fixed target record ell.
// part1 holds the vertices with sel[ell-1] != 0 (each of degree <= 1),
// part2 the rest; every non-isolated component is a star centered in part2
// with exactly n-1 leaves.
struct PairingGraph {
  uint32_t n = 0;
  uint32_t k = 0;
  RecordId ell;

  std::vector<SelectorVec> selectors;            // lexicographic
  std::vector<PairVertex> part1;                 // sorted
  std::vector<PairVertex> part2;                 // sorted
  std::vector<std::pair<PairVertex, PairVertex>> edges;  // (leaf, center)
  std::vector<PairComponent> components;         // sorted by smallest member

  size_t selector_index(const SelectorVec& sel) const;
  size_t part1_index(const PairVertex& v) const;
  // Index into components of the component containing v.
  size_t component_of(const PairVertex& v) const;
  size_t isolated_count() const;
};

// All valid selector vectors for (n, k) in lexicographic order; the count is
// (n^k - 1) / (n - 1).
std::vector<SelectorVec> enumerate_selectors(uint32_t n, uint32_t k);

// The part2 endpoint paired with a part1 vertex, or nullopt if the vertex is
// isolated (its ell entry is the only nonzero one). Throws if the vertex is
// not in part1.
std::optional<PairVertex> pair_target(RecordId ell, const PairVertex& v,
                                      uint32_t n, uint32_t k);

PairingGraph build_pairing_graph(uint32_t n, uint32_t k, RecordId ell);

std::string selector_label(const SelectorVec& sel);
std::string vertex_label(const PairVertex& v);

// Graphviz rendering with vertices labeled "(r,v1v2...vk)".
std::string to_dot(const PairingGraph& g);

}  // namespace pir
