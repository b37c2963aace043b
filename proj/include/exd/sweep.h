#ifndef EXD_SWEEP_H_
#define EXD_SWEEP_H_

#include <optional>
#include <vector>

#include "exd/graph.h"

namespace exd {

// Smallest x in supp(A) whose ball of radius 1/(4 phi |A|) carries at least
// half of the mass.
std::optional<VertexId> HeavyCore(const Graph& g, const NodeWeighting& a, double phi);

// Quantities checked on every sweep; all sums are over the prefix family.
struct SweepDiagnostics {
  double numerator = 0.0;       // sum over edges of |pi(u) - pi(v)|
  double denominator = 0.0;     // sum over pairs of D(u,v) |pi(u) - pi(v)|
  double edge_telescope = 0.0;  // sum_k |delta(S_k)| (pi_k - pi_{k+1})
  double demand_telescope = 0.0;  // sum_k D(S_k, V - S_k) (pi_k - pi_{k+1})
  double best_ratio = 0.0;      // min_k |delta(S_k)| / D(S_k, V - S_k)
  int best_prefix = 0;          // argmin k (prefix length)
};

struct SweepResult {
  VertexSet side;          // S'
  std::vector<EdgeId> boundary;
  double sparsity = 0.0;   // |delta(S')| / min{A(S'), A(V - S')}
  std::vector<double> pi;  // dist_l(v, K)
  std::vector<VertexId> order;  // descending pi, ties by ascending id
  bool complemented = false;    // side is V minus the argmin prefix
  SweepDiagnostics diagnostics;
};

// Threshold cut over pi(v) = dist_l(v, K). Preconditions (ContractError on
// failure): sum l <= 1, sum D dist_l >= 1/phi, A(K) >= |A|/3 and
// diam_l(K) <= 1/(2 phi |A|). Guarantees sparsity <= 12 phi; the
// intermediate inequalities are asserted per call (InvariantViolation).
SweepResult SweepCut(const Graph& g, const NodeWeighting& a, const VertexSet& core, double phi);

}  // namespace exd

#endif  // EXD_SWEEP_H_
