#ifndef EXD_FLOW_LP_H_
#define EXD_FLOW_LP_H_

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "exd/graph.h"

namespace exd {

// Routing of the A-product demand with commodities grouped by source.
//
// Commodity k has source sources[k] = supp(A)[k] and carries the unordered
// pairs {sources[k], t} for every support vertex t after it in ascending
// order, so every pair is routed exactly once. arc_flow[k][2e] is the flow
// of commodity k on edge e in direction u->v, arc_flow[k][2e + 1] is v->u.
struct FlowCertificate {
  double kappa = 0.0;    // max edge load of arc_flow
  double epsilon = 0.0;  // relative accuracy the solver was run at
  std::vector<VertexId> sources;
  std::vector<std::vector<double>> arc_flow;

  // Total flow over both directions and all commodities, per edge.
  std::vector<double> EdgeLoads(int edge_count) const;
};

// Dual of the concurrent flow LP: lengths with sum <= 1, and the
// demand-weighted shortest path distance they induce.
struct DualLengths {
  std::vector<double> lengths;
  double objective = 0.0;
};

struct ConcurrentFlow {
  FlowCertificate primal;
  DualLengths dual;
};

enum class SolverKind { kExact, kMwu };

const char* SolverName(SolverKind kind);

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, ConcurrentFlow best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const ConcurrentFlow& best() const { return best_; }

 private:
  ConcurrentFlow best_;
};

// sum over unordered pairs {u,v} of D_A(u,v) * dist_l(u,v), using `lengths`.
double DemandWeightedDistance(const Graph& g, const NodeWeighting& a,
                              std::span<const double> lengths);

// Largest violation of per-commodity conservation, relative to the
// commodity's total supply.
double MaxConservationViolation(const Graph& g, const NodeWeighting& a,
                                const FlowCertificate& cert);

// Optimal congestion via the compact source-grouped LP. Small instances only.
ConcurrentFlow SolveExact(const Graph& g, const NodeWeighting& a);

// Multiplicative-weights approximation: returns kappa within (1 +/- epsilon)
// of optimal and a dual with objective >= kappa / (1 + epsilon).
// Throws SolverError (carrying the best certificates) at the iteration cap.
ConcurrentFlow SolveMwu(const Graph& g, const NodeWeighting& a, double epsilon);

struct SolverOptions {
  SolverKind kind = SolverKind::kExact;
  double epsilon = 0.05;
};

ConcurrentFlow Solve(const Graph& g, const NodeWeighting& a, const SolverOptions& options);

struct Expanding {
  FlowCertificate certificate;
  DualLengths dual;
};
struct NotExpanding {
  // Normalized to sum 1 with objective >= 1/phi.
  DualLengths dual;
  double kappa_upper = 0.0;
};
using GateResult = std::variant<Expanding, NotExpanding>;

// Decides whether D_A is routable below congestion 1/phi. NotExpanding is
// returned only when the dual certifies objective >= 1/phi; otherwise the
// primal certificate is returned (kappa < 1/phi for exact solves, kappa <
// 1/(phi(1 - epsilon)) for MWU).
GateResult RoutabilityGate(const Graph& g, const NodeWeighting& a, double phi,
                           const SolverOptions& options);

}  // namespace exd

#endif  // EXD_FLOW_LP_H_
