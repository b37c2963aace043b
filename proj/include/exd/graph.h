#ifndef EXD_GRAPH_H_
#define EXD_GRAPH_H_

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace exd {

using VertexId = int;
using EdgeId = int;

// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<VertexId>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Relative tolerance used for every distance/radius comparison.
inline constexpr double kDistanceTolerance = 1e-9;

// True iff `dist` lies within `radius` up to kDistanceTolerance (relative).
inline bool WithinRadius(double dist, double radius) {
  return dist <= radius + kDistanceTolerance * radius;
}

struct Edge {
  VertexId u;
  VertexId v;

  VertexId Other(VertexId x) const { return x == u ? v : u; }
};

struct Arc {
  VertexId to;
  EdgeId edge;
};

// Undirected multigraph with unit capacities and optional nonnegative edge
// lengths. Adjacency is stored in CSR form; the object is immutable after
// construction.
class Graph {
 public:
  Graph() = default;
  // Throws DomainError on self-loops or endpoints outside [0, n).
  Graph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Arc> neighbors(VertexId v) const {
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }
  int degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_lengths() const { return lengths_.has_value(); }
  // Throws ConfigError when no lengths are assigned.
  std::span<const double> lengths() const;
  double length(EdgeId e) const { return lengths()[e]; }
  double TotalLength() const;

  // Copy of this graph carrying `lengths` (one per edge, each >= 0).
  Graph WithLengths(std::vector<double> lengths) const;
  Graph WithoutLengths() const;

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<int> offsets_{0};
  std::vector<Arc> arcs_;
  std::optional<std::vector<double>> lengths_;
};

// Integral nonnegative vertex mass A.
class NodeWeighting {
 public:
  NodeWeighting() = default;
  explicit NodeWeighting(std::vector<std::int64_t> mass);

  static NodeWeighting Degrees(const Graph& g);
  static NodeWeighting Uniform(int n, std::int64_t value = 1);

  int size() const { return static_cast<int>(mass_.size()); }
  std::int64_t operator[](VertexId v) const { return mass_[v]; }
  std::span<const std::int64_t> values() const { return mass_; }

  std::int64_t total() const { return total_; }
  std::int64_t MassOf(std::span<const VertexId> s) const;
  // A_S: zero outside s.
  NodeWeighting Restricted(std::span<const VertexId> s) const;
  VertexSet Support() const;

 private:
  std::vector<std::int64_t> mass_;
  std::int64_t total_ = 0;
};

struct Cut {
  VertexSet side;
  std::vector<EdgeId> boundary;
};

// Multi-source label-setting shortest paths over the assigned lengths.
// Vertices farther than `limit` (beyond tolerance) are left at +inf.
std::vector<double> ShortestPaths(const Graph& g, std::span<const VertexId> sources,
                                  double limit = kInfinity);
std::vector<double> ShortestPaths(const Graph& g, VertexId source,
                                  double limit = kInfinity);

// { v : dist(center, v) <= radius }.
VertexSet Ball(const Graph& g, VertexId center, double radius);

// Edges with exactly one endpoint in `s`, by ascending edge id.
std::vector<EdgeId> Boundary(const Graph& g, std::span<const VertexId> s);
Cut MakeCut(const Graph& g, VertexSet side);

// Connected components of g minus `removed`, ordered by smallest member.
std::vector<VertexSet> Components(const Graph& g, std::span<const EdgeId> removed = {});
bool IsConnected(const Graph& g);

// D_A(u, v) = A(u) A(v) / |A|. Throws DomainError when |A| = 0.
double ProductDemand(const NodeWeighting& a, VertexId u, VertexId v);

// G[S] with dense ids; maps translate back to the parent graph.
struct Subgraph {
  Graph graph;
  std::vector<VertexId> to_parent_vertex;
  std::vector<EdgeId> to_parent_edge;
};
Subgraph InducedSubgraph(const Graph& g, std::span<const VertexId> s);

std::vector<bool> Membership(int n, std::span<const VertexId> s);
VertexSet Complement(int n, std::span<const VertexId> s);

// Edge-list text: `u v [length]` per line, `#` comments. A `# vertices N`
// comment fixes the vertex count (otherwise max id + 1).
Graph ReadEdgeList(std::istream& in);
void WriteEdgeList(std::ostream& out, const Graph& g);

// Node weighting text: `v mass` per line; absent vertices have mass 0.
NodeWeighting ReadNodeWeighting(std::istream& in, int vertex_count);
void WriteNodeWeighting(std::ostream& out, const NodeWeighting& a);

}  // namespace exd

#endif  // EXD_GRAPH_H_
