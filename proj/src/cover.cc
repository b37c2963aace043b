#include "exd/cover.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "exd/errors.h"

namespace exd {
namespace {

struct Growth {
  double cut = 0.0;     // capacity of residual edges leaving the ball
  double volume = 0.0;  // seed + capacity-weighted length inside the ball
};

// State of one region-growing step at radius r. `capacity` weights every
// edge by 1 + l_e / W so the count and the l-weight of the cut are both
// charged against the volume.
Growth Evaluate(const Graph& g, std::span<const double> capacity,
                const std::vector<double>& dist, const std::vector<bool>& absorbed,
                double seed, double r) {
  Growth out;
  out.volume = seed;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    VertexId x = g.edge(e).u, y = g.edge(e).v;
    if (absorbed[x] || absorbed[y]) continue;
    if (dist[x] > dist[y]) std::swap(x, y);
    bool in_x = WithinRadius(dist[x], r);
    bool in_y = WithinRadius(dist[y], r);
    double len = g.length(e);
    if (in_y) {
      out.volume += capacity[e] * len;
    } else if (in_x) {
      out.volume += capacity[e] * std::clamp(r - dist[x], 0.0, len);
      out.cut += capacity[e];
    }
  }
  return out;
}

bool Cheap(const Growth& gr, double rate) {
  return gr.cut <= rate * gr.volume * (1.0 + kDistanceTolerance);
}

// Smallest r in [R, 2R) satisfying the growth condition.
double ChooseRadius(const Graph& g, std::span<const double> capacity,
                    const std::vector<double>& dist, const std::vector<bool>& absorbed,
                    double seed, double radius, double rate) {
  std::vector<double> breaks{radius};
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    if (!absorbed[v] && dist[v] > radius && dist[v] < 2.0 * radius) breaks.push_back(dist[v]);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  double fallback = radius;
  double fallback_ratio = kInfinity;
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    double left = breaks[k];
    double right = k + 1 < breaks.size() ? breaks[k + 1] : 2.0 * radius;
    Growth at = Evaluate(g, capacity, dist, absorbed, seed, left);
    if (Cheap(at, rate)) return left;
    // Inside the piece the ball is fixed and the volume grows at the rate of
    // the cut, so the condition is met at a closed-form radius.
    if (at.cut > 0.0) {
      double r = left + (at.cut / rate - at.volume) / at.cut;
      if (r < right) {
        Growth check = Evaluate(g, capacity, dist, absorbed, seed, r);
        if (Cheap(check, rate)) return r;
      }
    }
    double ratio = at.volume > 0 ? at.cut / at.volume : kInfinity;
    if (ratio < fallback_ratio) {
      fallback_ratio = ratio;
      fallback = left;
    }
  }
  // Unreachable in exact arithmetic; CheckCover reports any resulting excess.
  return fallback;
}

}  // namespace

VertexSet ClusterCover::Covered() const {
  VertexSet out;
  for (const auto& s : clusters) out.insert(out.end(), s.begin(), s.end());
  std::sort(out.begin(), out.end());
  return out;
}

double CoverCutBound(std::size_t terminal_count, double total_length, double radius) {
  return kCoverConstant * std::log2(static_cast<double>(terminal_count) + 1.0) *
         total_length / radius;
}

ClusterCover Cluster(const Graph& g, std::span<const VertexId> terminals, double radius) {
  if (!(radius > 0.0)) throw DomainError("cluster radius must be positive");
  if (terminals.empty()) throw ContractError("cluster needs at least one terminal");
  {
    std::vector<VertexId> sorted(terminals.begin(), terminals.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ContractError("cluster terminals must be distinct");
    }
  }
  auto len = g.lengths();
  const double total = g.TotalLength();
  std::vector<double> capacity(g.edge_count(), 1.0);
  if (total > 0.0) {
    for (EdgeId e = 0; e < g.edge_count(); ++e) capacity[e] += len[e] / total;
  }
  double weighted_total = 0.0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) weighted_total += capacity[e] * len[e];
  const double count = static_cast<double>(terminals.size());
  const double seed = weighted_total / count;
  const double rate = std::log(count + 1.0) / radius;

  ClusterCover cover;
  cover.terminals.assign(terminals.begin(), terminals.end());
  cover.radius = radius;
  std::vector<bool> absorbed(g.vertex_count(), false);
  for (VertexId t : terminals) {
    auto dist = ShortestPaths(g, t, 2.0 * radius);
    double r = ChooseRadius(g, capacity, dist, absorbed, seed, radius, rate);
    VertexSet cluster;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (!absorbed[v] && WithinRadius(dist[v], r)) cluster.push_back(v);
    }
    for (VertexId v : cluster) absorbed[v] = true;
    cover.clusters.push_back(std::move(cluster));
    cover.grown_radius.push_back(r);
  }

  std::vector<bool> cut(g.edge_count(), false);
  for (const auto& s : cover.clusters) {
    if (s.empty()) continue;
    for (EdgeId e : Boundary(g, s)) {
      cut[e] = true;
      ++cover.boundary_count;
      cover.boundary_weight += len[e];
    }
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (cut[e]) cover.boundary.push_back(e);
  }
  return cover;
}

void CheckCover(const Graph& g, const ClusterCover& cover) {
  auto fail = [](const std::string& what) { throw InvariantViolation("cluster: " + what); };
  if (cover.clusters.size() != cover.terminals.size()) fail("clusters not aligned with terminals");
  std::vector<int> owner(g.vertex_count(), -1);
  for (std::size_t i = 0; i < cover.clusters.size(); ++i) {
    for (VertexId v : cover.clusters[i]) {
      if (owner[v] >= 0) fail("clusters are not disjoint (vertex " + std::to_string(v) + ")");
      owner[v] = static_cast<int>(i);
    }
  }
  for (std::size_t i = 0; i < cover.terminals.size(); ++i) {
    for (VertexId v : Ball(g, cover.terminals[i], cover.radius)) {
      if (owner[v] < 0) {
        fail("covering: vertex " + std::to_string(v) + " of B(" +
             std::to_string(cover.terminals[i]) + ", R) is unclustered");
      }
    }
    auto reach = Membership(g.vertex_count(), Ball(g, cover.terminals[i], 2.0 * cover.radius));
    for (VertexId v : cover.clusters[i]) {
      if (!reach[v]) fail("diameter: cluster " + std::to_string(i) + " leaves B(v_i, 2R)");
    }
  }
  const double total = g.TotalLength();
  const double bound = CoverCutBound(cover.terminals.size(), total, cover.radius);
  const double slack = 1.0 + 1e-9;
  if (cover.boundary_count > bound * slack + 1e-9) {
    std::ostringstream msg;
    msg << "cut size: sum |delta(S)| = " << cover.boundary_count << " exceeds " << bound;
    fail(msg.str());
  }
  if (total <= 1.0 + 1e-12 && cover.boundary_weight > bound * slack + 1e-12) {
    std::ostringstream msg;
    msg << "cut size: boundary length " << cover.boundary_weight << " exceeds " << bound;
    fail(msg.str());
  }
}

Net BuildNet(const Graph& g, std::span<const VertexId> candidates, double delta) {
  if (candidates.empty()) throw ContractError("net needs at least one candidate");
  if (!(delta > 0.0)) throw DomainError("packing radius must be positive");
  std::vector<VertexId> order(candidates.begin(), candidates.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  std::vector<bool> taken(g.vertex_count(), false);
  Net net;
  net.packing_radius = delta;
  for (VertexId x : order) {
    VertexSet ball = Ball(g, x, delta);
    if (std::any_of(ball.begin(), ball.end(), [&](VertexId v) { return taken[v]; })) continue;
    for (VertexId v : ball) taken[v] = true;
    net.centers.push_back(x);
  }
  return net;
}

void CheckNet(const Graph& g, std::span<const VertexId> candidates, const Net& net) {
  std::vector<int> owner(g.vertex_count(), -1);
  for (VertexId x : net.centers) {
    for (VertexId v : Ball(g, x, net.packing_radius)) {
      if (owner[v] >= 0) {
        throw InvariantViolation("net: balls around " + std::to_string(owner[v]) + " and " +
                                 std::to_string(x) + " intersect");
      }
      owner[v] = x;
    }
  }
  std::vector<bool> covered(g.vertex_count(), false);
  for (VertexId x : net.centers) {
    for (VertexId v : Ball(g, x, 2.0 * net.packing_radius)) covered[v] = true;
  }
  for (VertexId c : candidates) {
    if (!covered[c]) {
      throw InvariantViolation("net: candidate " + std::to_string(c) +
                               " is outside every 2-delta ball");
    }
  }
}

}  // namespace exd
