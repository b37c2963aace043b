#include "exd/flow_lp.h"

#include <algorithm>
#include <cmath>

#include "exd/errors.h"
#include "flow_internal.h"

namespace exd {

namespace internal {

GroupedDemand BuildProblem(const Graph& g, const NodeWeighting& a) {
  if (a.size() != g.vertex_count()) throw DomainError("weighting size does not match graph");
  if (a.total() == 0) throw DomainError("product demand undefined for |A| = 0");
  VertexSet support = a.Support();
  if (support.size() > 1) {
    auto comps = Components(g);
    std::vector<int> label(g.vertex_count());
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (VertexId v : comps[c]) label[v] = static_cast<int>(c);
    }
    for (VertexId v : support) {
      if (label[v] != label[support.front()]) {
        throw InfeasibleError("demand crosses connected components; split the graph first");
      }
    }
  }
  GroupedDemand problem;
  for (std::size_t i = 0; i + 1 < support.size(); ++i) {
    problem.sources.push_back(support[i]);
    auto& sinks = problem.sinks.emplace_back();
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      sinks.push_back({support[j], ProductDemand(a, support[i], support[j])});
    }
  }
  return problem;
}

}  // namespace internal

const char* SolverName(SolverKind kind) {
  return kind == SolverKind::kExact ? "exact" : "mwu";
}

std::vector<double> FlowCertificate::EdgeLoads(int edge_count) const {
  std::vector<double> load(edge_count, 0.0);
  for (const auto& flow : arc_flow) {
    for (int e = 0; e < edge_count; ++e) load[e] += flow[2 * e] + flow[2 * e + 1];
  }
  return load;
}

double DemandWeightedDistance(const Graph& g, const NodeWeighting& a,
                              std::span<const double> lengths) {
  if (a.total() == 0) return 0.0;
  Graph metric = g.WithLengths({lengths.begin(), lengths.end()});
  VertexSet support = a.Support();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < support.size(); ++i) {
    auto dist = ShortestPaths(metric, support[i]);
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      sum += ProductDemand(a, support[i], support[j]) * dist[support[j]];
    }
  }
  return sum;
}

double MaxConservationViolation(const Graph& g, const NodeWeighting& a,
                                const FlowCertificate& cert) {
  auto problem = internal::BuildProblem(g, a);
  double worst = 0.0;
  for (std::size_t k = 0; k < problem.sources.size(); ++k) {
    std::vector<double> expected(g.vertex_count(), 0.0);
    double supply = 0.0;
    for (const auto& sink : problem.sinks[k]) {
      expected[sink.vertex] -= sink.demand;
      supply += sink.demand;
    }
    expected[problem.sources[k]] += supply;
    std::vector<double> net(g.vertex_count(), 0.0);
    const auto& flow = cert.arc_flow.at(k);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      double forward = flow[2 * e] - flow[2 * e + 1];
      net[g.edge(e).u] += forward;
      net[g.edge(e).v] -= forward;
    }
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      worst = std::max(worst, std::abs(net[v] - expected[v]) / supply);
    }
  }
  return worst;
}

ConcurrentFlow Solve(const Graph& g, const NodeWeighting& a, const SolverOptions& options) {
  return options.kind == SolverKind::kExact ? SolveExact(g, a)
                                            : SolveMwu(g, a, options.epsilon);
}

GateResult RoutabilityGate(const Graph& g, const NodeWeighting& a, double phi,
                           const SolverOptions& options) {
  if (!(phi > 0.0)) throw DomainError("phi must be positive");
  ConcurrentFlow flow = Solve(g, a, options);
  if (flow.dual.objective >= 1.0 / phi) {
    return NotExpanding{std::move(flow.dual), flow.primal.kappa};
  }
  return Expanding{std::move(flow.primal), std::move(flow.dual)};
}

}  // namespace exd
