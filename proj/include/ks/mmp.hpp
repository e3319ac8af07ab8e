#pragma once

// MMP hypergraphs: data model, the ASCII line format, validation,
// renormalization and connectivity.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ks {

using VertexId = std::uint32_t;

/// Number of single characters in the vertex alphabet before '+' prefixes kick in.
std::size_t alphabet_size();

/// Encodes a vertex id: '1'..'9', 'A'..'Z', 'a'..'z', the punctuation block,
/// then the same list behind one '+', then '++', and so on.
std::string vertex_name(VertexId id);

class MmpError : public std::runtime_error {
 public:
  MmpError(const std::string& what, std::size_t column)
      : std::runtime_error(what + " (column " + std::to_string(column) + ")"), column_(column) {}
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t column_;
};

/// An ordered list of edges over vertex ids. The vertex set is the union of
/// the edges; ids may have gaps (allowed by the text format) until
/// renormalize() closes them. Immutable after construction.
class Hypergraph {
 public:
  Hypergraph() = default;
  explicit Hypergraph(std::vector<std::vector<VertexId>> edges, std::string label = {});

  std::size_t edge_count() const { return edges_.size(); }
  /// Distinct vertices actually used by edges.
  std::size_t vertex_count() const { return vertex_count_; }
  /// One past the largest id in use.
  std::size_t id_space() const { return id_space_; }

  std::span<const VertexId> edge(std::size_t i) const { return edges_[i]; }
  /// The same edge with its vertices in increasing order.
  std::span<const VertexId> sorted_edge(std::size_t i) const { return sorted_[i]; }
  const std::vector<std::vector<VertexId>>& edges() const { return edges_; }

  const std::string& label() const { return label_; }

  /// Ids in use, increasing.
  std::vector<VertexId> vertices() const;
  /// Degree indexed by id (0 for unused ids).
  std::vector<std::size_t> degrees() const;

  Hypergraph without_edge(std::size_t index) const;
  /// Keeps the listed edges, in the listed order.
  Hypergraph select_edges(std::span<const std::size_t> indices) const;

  friend bool operator==(const Hypergraph& a, const Hypergraph& b) { return a.edges_ == b.edges_; }

 private:
  std::vector<std::vector<VertexId>> edges_;
  std::vector<std::vector<VertexId>> sorted_;
  std::size_t vertex_count_ = 0;
  std::size_t id_space_ = 0;
  std::string label_;
};

struct ParseOptions {
  /// Skip empty edge tokens and accept a missing final '.'.
  bool lenient = false;
  /// Reject hypergraphs that break the MMP conditions; off for grammar-only parsing.
  bool validate = true;
};

/// Parses one MMP line. Throws MmpError on grammar errors and on MMP
/// condition violations.
Hypergraph parse_mmp(std::string_view line, ParseOptions opts = {});

/// Parses a newline-separated file body, skipping blank lines.
std::vector<Hypergraph> parse_mmp_lines(std::istream& in, ParseOptions opts = {});

std::string serialize_mmp(const Hypergraph& h);

enum class Condition {
  EdgeTooSmall,        // (ii) every edge has at least 3 vertices
  IntersectionTooLarge,  // (iii) edges sharing k vertices each hold at least k + 2
  DuplicateEdge,
  RepeatedVertex,
};

struct Violation {
  Condition condition;
  std::size_t first_edge = 0;
  std::size_t second_edge = 0;  // same as first_edge for single-edge conditions
  std::string message;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate_mmp(const Hypergraph& h);

/// Renames vertices to 0..k-1 in order of first appearance, edges scanned left to right.
Hypergraph renormalize(const Hypergraph& h);

/// True iff the edge-intersection graph has one component (an empty
/// hypergraph is not connected).
bool is_connected(const Hypergraph& h);

}  // namespace ks
