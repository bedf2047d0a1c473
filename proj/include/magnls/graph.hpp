#pragma once

#include <cstddef>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace magnls {

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the graph-description parser; carries the offending line.
class ParseError : public GraphError {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

enum class EdgeKind { finite, half_line };

inline constexpr std::size_t no_vertex = std::numeric_limits<std::size_t>::max();

/// An edge of a metric graph. Finite edges are parameterized by x in
/// [0, length] running from `from` to `to`. Half-lines are parameterized by
/// x in [0, inf) starting at `from`; `to` is `no_vertex`.
struct Edge {
  std::string id;
  std::size_t from = 0;
  std::size_t to = no_vertex;
  EdgeKind kind = EdgeKind::finite;
  double length = 0.0;  // +inf for half-lines
  double A = 0.0;       // constant magnetic potential along the orientation

  bool is_half_line() const noexcept { return kind == EdgeKind::half_line; }
  bool is_loop() const noexcept { return kind == EdgeKind::finite && from == to; }
};

/// Connected metric graph with finite edges, half-lines and a constant
/// magnetic potential per edge. Immutable once constructed.
class MetricGraph {
 public:
  MetricGraph(std::vector<std::string> vertices, std::vector<Edge> edges);

  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  std::size_t vertex_index(std::string_view id) const;
  std::size_t edge_index(std::string_view id) const;

  std::size_t finite_edge_count() const noexcept;
  std::size_t half_line_count() const noexcept;
  bool is_compact() const noexcept { return half_line_count() == 0; }

  /// Number of edge endpoints at a vertex (a loop counts twice).
  std::size_t degree(std::size_t v) const;

  /// Copy with the magnetic potential of one edge replaced.
  MetricGraph with_potential(std::size_t e, double A) const;

 private:
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
};

/// A closed, edge-simple walk. `sign` is +1 when the edge is traversed along
/// its orientation (from -> to) and -1 otherwise.
struct CycleStep {
  std::size_t edge;
  int sign;
};

struct Cycle {
  std::vector<CycleStep> steps;
  double length = 0.0;

  bool contains(std::size_t e) const noexcept;
};

struct CycleBasis {
  std::vector<Cycle> cycles;
  int betti = 0;
};

/// Parse the line-oriented graph-description format:
///
///   vertex <id>
///   edge <id> <v_from> <v_to> length=<float> [A=<float>]
///   halfline <id> <v> [A=<float>]
///
/// `#` starts a comment. Missing `A` defaults to 0.
MetricGraph parse_graph(std::string_view text);
MetricGraph load_graph(const std::string& path);
std::string format_graph(const MetricGraph& g);

/// First Betti number |E| - |V*| + 1, where every half-line contributes an
/// implicit terminal vertex.
int betti_number(const MetricGraph& g);

/// Fundamental cycles of a deterministic BFS spanning tree (vertices and
/// edges visited in declaration order).
CycleBasis cycle_basis(const MetricGraph& g);

/// Vertex where walking `step` starts and ends.
std::size_t step_tail(const MetricGraph& g, const CycleStep& step);
std::size_t step_head(const MetricGraph& g, const CycleStep& step);

namespace generators {

/// Loop of length 2L and one half-line at a single vertex.
MetricGraph tadpole(double half_loop, double A_loop = 0.0);
/// Two half-lines joined at one vertex (the real line).
MetricGraph line();
MetricGraph half_line();
MetricGraph figure_eight(double l1, double l2, double A1 = 0.0, double A2 = 0.0);
MetricGraph interval(double length);

/// Build a graph from a spec such as `tadpole:L=1,A=0.5`, `line`,
/// `halfline`, `figure-eight:2,3` or `interval:1`.
MetricGraph from_spec(std::string_view spec);

/// Random connected graph: a random tree plus extra finite edges (loops and
/// multi-edges allowed), random lengths in [1, 3], random A in [-2, 2] and up
/// to two half-lines.
MetricGraph random_graph(std::mt19937_64& rng, std::size_t max_vertices = 5, std::size_t extra_edges = 3,
                         bool with_half_lines = true);

}  // namespace generators

}  // namespace magnls
