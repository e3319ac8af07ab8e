#pragma once

// Drawing source for a hypergraph around one of its loops: the loop as a
// regular polygon, other edges as smooth cubic curves through their vertices.

#include <cstddef>
#include <map>
#include <string>

#include "ks/loops.hpp"

namespace ks {

enum class LayoutBackend { Asymptote, Svg };

struct Point {
  double x = 0;
  double y = 0;
};

struct LayoutConfig {
  double tension = 1.0;  // must be > 0
  double curl = 1.0;
  std::map<std::size_t, double> edge_tension;  // by edge index
  std::map<std::size_t, double> edge_curl;
  double radius = 100.0;
  double column_spacing = 18.0;
  std::size_t column_height = 4;  // free vertices per vertical line
  std::map<VertexId, Point> free_positions;  // overrides the column placement
  LayoutBackend backend = LayoutBackend::Asymptote;
};

struct Layout {
  std::map<VertexId, Point> position;
};

/// Coordinates only; y grows upwards.
Layout place_vertices(const Hypergraph& h, const Loop& loop, const LayoutConfig& cfg);

/// Throws std::invalid_argument for an invalid loop or non-positive tension.
std::string emit_layout(const Hypergraph& h, const Loop& loop, const LayoutConfig& cfg);

}  // namespace ks
