#pragma once

// 0/1 colorability: every edge must hold exactly one vertex valued 1.
// A hypergraph with no such assignment is a KS set.

#include <cstdint>
#include <optional>
#include <vector>

#include "ks/mmp.hpp"

namespace ks {

/// Value per vertex id; ids outside the vertex set hold 0.
struct Coloring {
  std::vector<std::uint8_t> value;
};

/// Exactly one 1 per edge.
bool is_valid_coloring(const Hypergraph& h, const Coloring& c);

struct ColorResult {
  bool colorable = false;
  std::optional<Coloring> witness;
};

ColorResult is_colorable(const Hypergraph& h);

inline bool is_ks(const Hypergraph& h) { return !is_colorable(h).colorable; }

/// Non-colorable, and colorable again after removing any single edge.
bool is_critical(const Hypergraph& h);

/// Every vertex has even degree and the edge count is odd.
bool has_parity_proof(const Hypergraph& h);

struct KsVerdict {
  bool colorable = false;
  std::optional<Coloring> witness;
  std::optional<bool> critical;  // only for non-colorable inputs
  bool parity = false;
};

KsVerdict classify(const Hypergraph& h, bool check_criticality);

}  // namespace ks
