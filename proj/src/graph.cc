#include "exd/graph.h"

#include <algorithm>
#include <functional>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <utility>

#include "exd/errors.h"

namespace exd {

Graph::Graph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ < 0) throw DomainError("negative vertex count");
  std::vector<int> degree(vertex_count_, 0);
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= vertex_count_ || e.v >= vertex_count_) {
      throw DomainError("edge endpoint out of range");
    }
    if (e.u == e.v) throw DomainError("self-loop at vertex " + std::to_string(e.u));
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(vertex_count_ + 1, 0);
  for (int v = 0; v < vertex_count_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  arcs_.resize(offsets_.back());
  std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < edge_count(); ++id) {
    const Edge& e = edges_[id];
    arcs_[fill[e.u]++] = {e.v, id};
    arcs_[fill[e.v]++] = {e.u, id};
  }
}

std::span<const double> Graph::lengths() const {
  if (!lengths_) throw ConfigError("graph has no edge lengths assigned");
  return *lengths_;
}

double Graph::TotalLength() const {
  auto l = lengths();
  return std::accumulate(l.begin(), l.end(), 0.0);
}

Graph Graph::WithLengths(std::vector<double> lengths) const {
  if (static_cast<int>(lengths.size()) != edge_count()) {
    throw DomainError("length vector size does not match edge count");
  }
  for (double x : lengths) {
    if (!(x >= 0.0)) throw DomainError("edge lengths must be nonnegative");
  }
  Graph copy = *this;
  copy.lengths_ = std::move(lengths);
  return copy;
}

Graph Graph::WithoutLengths() const {
  Graph copy = *this;
  copy.lengths_.reset();
  return copy;
}

NodeWeighting::NodeWeighting(std::vector<std::int64_t> mass) : mass_(std::move(mass)) {
  for (std::int64_t m : mass_) {
    if (m < 0) throw DomainError("node weighting must be nonnegative");
    total_ += m;
  }
}

NodeWeighting NodeWeighting::Degrees(const Graph& g) {
  std::vector<std::int64_t> mass(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) mass[v] = g.degree(v);
  return NodeWeighting(std::move(mass));
}

NodeWeighting NodeWeighting::Uniform(int n, std::int64_t value) {
  return NodeWeighting(std::vector<std::int64_t>(n, value));
}

std::int64_t NodeWeighting::MassOf(std::span<const VertexId> s) const {
  std::int64_t sum = 0;
  for (VertexId v : s) sum += mass_[v];
  return sum;
}

NodeWeighting NodeWeighting::Restricted(std::span<const VertexId> s) const {
  std::vector<std::int64_t> mass(mass_.size(), 0);
  for (VertexId v : s) mass[v] = mass_[v];
  return NodeWeighting(std::move(mass));
}

VertexSet NodeWeighting::Support() const {
  VertexSet out;
  for (VertexId v = 0; v < size(); ++v) {
    if (mass_[v] > 0) out.push_back(v);
  }
  return out;
}

std::vector<double> ShortestPaths(const Graph& g, std::span<const VertexId> sources,
                                  double limit) {
  auto len = g.lengths();
  std::vector<double> dist(g.vertex_count(), kInfinity);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (VertexId s : sources) {
    dist[s] = 0.0;
    heap.push({0.0, s});
  }
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (d > dist[x]) continue;
    for (const Arc& arc : g.neighbors(x)) {
      double nd = d + len[arc.edge];
      if (nd < dist[arc.to] && WithinRadius(nd, limit)) {
        dist[arc.to] = nd;
        heap.push({nd, arc.to});
      }
    }
  }
  return dist;
}

std::vector<double> ShortestPaths(const Graph& g, VertexId source, double limit) {
  VertexId s[] = {source};
  return ShortestPaths(g, s, limit);
}

VertexSet Ball(const Graph& g, VertexId center, double radius) {
  if (radius < 0) throw DomainError("ball radius must be nonnegative");
  auto dist = ShortestPaths(g, center, radius);
  VertexSet out;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (WithinRadius(dist[v], radius)) out.push_back(v);
  }
  return out;
}

std::vector<bool> Membership(int n, std::span<const VertexId> s) {
  std::vector<bool> in(n, false);
  for (VertexId v : s) in[v] = true;
  return in;
}

VertexSet Complement(int n, std::span<const VertexId> s) {
  auto in = Membership(n, s);
  VertexSet out;
  for (VertexId v = 0; v < n; ++v) {
    if (!in[v]) out.push_back(v);
  }
  return out;
}

std::vector<EdgeId> Boundary(const Graph& g, std::span<const VertexId> s) {
  auto in = Membership(g.vertex_count(), s);
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (in[g.edge(e).u] != in[g.edge(e).v]) out.push_back(e);
  }
  return out;
}

Cut MakeCut(const Graph& g, VertexSet side) {
  std::sort(side.begin(), side.end());
  side.erase(std::unique(side.begin(), side.end()), side.end());
  auto boundary = Boundary(g, side);
  return {std::move(side), std::move(boundary)};
}

std::vector<VertexSet> Components(const Graph& g, std::span<const EdgeId> removed) {
  std::vector<bool> gone(g.edge_count(), false);
  for (EdgeId e : removed) gone[e] = true;
  std::vector<int> label(g.vertex_count(), -1);
  std::vector<VertexSet> out;
  std::vector<VertexId> stack;
  for (VertexId root = 0; root < g.vertex_count(); ++root) {
    if (label[root] >= 0) continue;
    int id = static_cast<int>(out.size());
    out.emplace_back();
    label[root] = id;
    stack.push_back(root);
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      out[id].push_back(x);
      for (const Arc& arc : g.neighbors(x)) {
        if (gone[arc.edge] || label[arc.to] >= 0) continue;
        label[arc.to] = id;
        stack.push_back(arc.to);
      }
    }
    std::sort(out[id].begin(), out[id].end());
  }
  return out;
}

bool IsConnected(const Graph& g) { return Components(g).size() <= 1; }

double ProductDemand(const NodeWeighting& a, VertexId u, VertexId v) {
  if (a.total() == 0) throw DomainError("product demand undefined for |A| = 0");
  return static_cast<double>(a[u]) * static_cast<double>(a[v]) /
         static_cast<double>(a.total());
}

Subgraph InducedSubgraph(const Graph& g, std::span<const VertexId> s) {
  std::vector<VertexId> local(g.vertex_count(), -1);
  Subgraph sub;
  sub.to_parent_vertex.assign(s.begin(), s.end());
  std::sort(sub.to_parent_vertex.begin(), sub.to_parent_vertex.end());
  for (std::size_t i = 0; i < sub.to_parent_vertex.size(); ++i) {
    local[sub.to_parent_vertex[i]] = static_cast<VertexId>(i);
  }
  std::vector<Edge> edges;
  std::vector<double> lengths;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    if (local[edge.u] < 0 || local[edge.v] < 0) continue;
    edges.push_back({local[edge.u], local[edge.v]});
    sub.to_parent_edge.push_back(e);
    if (g.has_lengths()) lengths.push_back(g.length(e));
  }
  sub.graph = Graph(static_cast<int>(sub.to_parent_vertex.size()), std::move(edges));
  if (g.has_lengths()) sub.graph = sub.graph.WithLengths(std::move(lengths));
  return sub;
}

namespace {

// Strips a trailing comment; returns false for blank lines.
bool Payload(std::string& line) {
  auto hash = line.find('#');
  if (hash != std::string::npos) line.resize(hash);
  return line.find_first_not_of(" \t\r") != std::string::npos;
}

}  // namespace

Graph ReadEdgeList(std::istream& in) {
  std::vector<Edge> edges;
  std::vector<double> lengths;
  int declared = -1;
  int max_id = -1;
  std::optional<bool> with_lengths;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.rfind("# vertices", 0) == 0) {
      std::istringstream header(line.substr(10));
      if (!(header >> declared) || declared < 0) {
        throw ParseError("bad vertex count directive", lineno);
      }
      continue;
    }
    if (!Payload(line)) continue;
    std::istringstream fields(line);
    long long u = 0, v = 0;
    if (!(fields >> u >> v)) throw ParseError("expected `u v [length]`", lineno);
    double length = 0.0;
    bool has_length = static_cast<bool>(fields >> length);
    if (!has_length && !fields.eof()) throw ParseError("malformed length", lineno);
    std::string extra;
    if (has_length && (fields >> extra)) throw ParseError("trailing fields", lineno);
    if (with_lengths && *with_lengths != has_length) {
      throw ParseError("length column present on some lines only", lineno);
    }
    with_lengths = has_length;
    if (u < 0 || v < 0 || u > std::numeric_limits<int>::max() / 2 ||
        v > std::numeric_limits<int>::max() / 2) {
      throw ParseError("vertex id out of range", lineno);
    }
    if (u == v) throw ParseError("self-loop", lineno);
    if (has_length && !(length >= 0.0)) throw ParseError("negative length", lineno);
    edges.push_back({static_cast<VertexId>(u), static_cast<VertexId>(v)});
    if (has_length) lengths.push_back(length);
    max_id = std::max<int>(max_id, static_cast<int>(std::max(u, v)));
  }
  int n = std::max(declared, max_id + 1);
  if (declared >= 0 && max_id >= declared) {
    throw ParseError("vertex id exceeds declared vertex count", 0);
  }
  Graph g(n, std::move(edges));
  if (with_lengths.value_or(false)) g = g.WithLengths(std::move(lengths));
  return g;
}

void WriteEdgeList(std::ostream& out, const Graph& g) {
  out << "# vertices " << g.vertex_count() << "\n";
  auto old_precision = out.precision(17);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    out << g.edge(e).u << ' ' << g.edge(e).v;
    if (g.has_lengths()) out << ' ' << g.length(e);
    out << '\n';
  }
  out.precision(old_precision);
}

NodeWeighting ReadNodeWeighting(std::istream& in, int vertex_count) {
  std::vector<std::int64_t> mass(vertex_count, 0);
  std::vector<bool> seen(vertex_count, false);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (!Payload(line)) continue;
    std::istringstream fields(line);
    long long v = 0, m = 0;
    if (!(fields >> v >> m)) throw ParseError("expected `v mass`", lineno);
    std::string extra;
    if (fields >> extra) throw ParseError("trailing fields", lineno);
    if (v < 0 || v >= vertex_count) throw ParseError("vertex id out of range", lineno);
    if (m < 0) throw ParseError("negative mass", lineno);
    if (seen[v]) throw ParseError("duplicate vertex", lineno);
    seen[v] = true;
    mass[v] = m;
  }
  return NodeWeighting(std::move(mass));
}

void WriteNodeWeighting(std::ostream& out, const NodeWeighting& a) {
  for (VertexId v = 0; v < a.size(); ++v) {
    if (a[v] != 0) out << v << ' ' << a[v] << '\n';
  }
}

}  // namespace exd
