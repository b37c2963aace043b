// Multiplicative-weights approximation of the maximum concurrent flow for
// the A-product demand (Garg-Koenemann with Fleischer's grouping of
// commodities by source). Each phase routes one full copy of the demand on
// shortest-path trees under the current weights; the averaged flow gives an
// upper bound on kappa and every weight vector a lower bound through weak
// duality. The loop stops once the two bounds are within 1 + epsilon.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>

#include "exd/errors.h"
#include "exd/flow_lp.h"
#include "flow_internal.h"

namespace exd {
namespace {

struct Tree {
  std::vector<double> dist;
  std::vector<int> parent_arc;  // 2e or 2e + 1 into the vertex; -1 at root
  std::vector<VertexId> order;  // settle order
};

// Dijkstra over strictly positive weights with parent arcs.
void ShortestPathTree(const Graph& g, std::span<const double> weight, VertexId source,
                      Tree& tree) {
  int n = g.vertex_count();
  tree.dist.assign(n, kInfinity);
  tree.parent_arc.assign(n, -1);
  tree.order.clear();
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  tree.dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, x] = heap.top();
    heap.pop();
    if (d > tree.dist[x]) continue;
    tree.order.push_back(x);
    for (const Arc& arc : g.neighbors(x)) {
      double nd = d + weight[arc.edge];
      if (nd < tree.dist[arc.to]) {
        tree.dist[arc.to] = nd;
        // Direction u->v is arc 2e, v->u is 2e + 1.
        tree.parent_arc[arc.to] = 2 * arc.edge + (g.edge(arc.edge).u == x ? 0 : 1);
        heap.push({nd, arc.to});
      }
    }
  }
}

}  // namespace

ConcurrentFlow SolveMwu(const Graph& g, const NodeWeighting& a, double epsilon) {
  if (!(epsilon > 0.0) || epsilon > 0.5) throw DomainError("MWU needs 0 < epsilon <= 1/2");
  auto problem = internal::BuildProblem(g, a);
  const int m = g.edge_count();
  const int commodities = static_cast<int>(problem.sources.size());

  ConcurrentFlow best;
  best.primal.epsilon = epsilon;
  best.primal.sources = problem.sources;
  best.primal.arc_flow.assign(commodities, std::vector<double>(2 * m, 0.0));
  if (commodities == 0 || m == 0) {
    best.dual.lengths.assign(m, m > 0 ? 1.0 / m : 0.0);
    best.dual.objective = 0.0;
    return best;
  }

  const double step = epsilon / 2.0;
  const double cap = 10.0 / (epsilon * epsilon) * m * std::max(1.0, std::log2(m));
  std::vector<double> weight(m, 1.0);
  std::vector<double> total_load(m, 0.0);
  std::vector<std::vector<double>> sum_flow(commodities, std::vector<double>(2 * m, 0.0));
  std::vector<double> remaining, below, tree_load(m, 0.0);
  Tree tree;
  double lower = 0.0, upper = kInfinity;
  long long steps = 0;
  int phases = 0;

  while (true) {
    for (int k = 0; k < commodities; ++k) {
      const auto& sinks = problem.sinks[k];
      remaining.assign(sinks.size(), 0.0);
      for (std::size_t i = 0; i < sinks.size(); ++i) remaining[i] = sinks[i].demand;
      double left = std::accumulate(remaining.begin(), remaining.end(), 0.0);
      const double total = left;
      while (left > 1e-12 * total) {
        ShortestPathTree(g, weight, problem.sources[k], tree);
        below.assign(g.vertex_count(), 0.0);
        for (std::size_t i = 0; i < sinks.size(); ++i) below[sinks[i].vertex] += remaining[i];
        // Accumulate subtree demand bottom-up in reverse settle order.
        double max_load = 0.0;
        for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
          int arc = tree.parent_arc[*it];
          if (arc < 0) continue;
          const Edge& e = g.edge(arc / 2);
          VertexId parent = (arc % 2 == 0) ? e.u : e.v;
          below[parent] += below[*it];
          max_load = std::max(max_load, below[*it]);
        }
        double sigma = max_load > 1.0 ? 1.0 / max_load : 1.0;
        for (VertexId v : tree.order) {
          int arc = tree.parent_arc[v];
          if (arc < 0 || below[v] == 0.0) continue;
          double f = sigma * below[v];
          sum_flow[k][arc] += f;
          total_load[arc / 2] += f;
          weight[arc / 2] *= 1.0 + step * f;
        }
        for (double& r : remaining) r *= 1.0 - sigma;
        left = sigma >= 1.0 ? 0.0 : left * (1.0 - sigma);
        ++steps;
      }
    }
    ++phases;

    // Keep weights in range; only ratios matter.
    double wmax = *std::max_element(weight.begin(), weight.end());
    for (double& w : weight) w = std::max(w / wmax, 1e-300);

    double phase_upper = *std::max_element(total_load.begin(), total_load.end()) / phases;
    double wsum = std::accumulate(weight.begin(), weight.end(), 0.0);
    std::vector<double> normalized(weight);
    for (double& w : normalized) w /= wsum;
    double phase_lower = DemandWeightedDistance(g, a, normalized);
    if (phase_lower > lower) {
      lower = phase_lower;
      best.dual.lengths = normalized;
      best.dual.objective = phase_lower;
    }
    if (phase_upper < upper) {
      upper = phase_upper;
      best.primal.kappa = phase_upper;
      for (int k = 0; k < commodities; ++k) {
        for (int arc = 0; arc < 2 * m; ++arc) best.primal.arc_flow[k][arc] = sum_flow[k][arc] / phases;
      }
    }
    if (lower * (1.0 + epsilon) >= upper) return best;
    if (steps > cap) {
      throw SolverError("MWU did not converge within the iteration cap", std::move(best));
    }
  }
}

}  // namespace exd
