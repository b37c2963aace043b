#ifndef EXD_VERIFY_H_
#define EXD_VERIFY_H_

#include <optional>
#include <string>
#include <vector>

#include "exd/decomp.h"
#include "exd/graph.h"

namespace exd {

enum class Verdict { kCertified, kFailed, kUnverified };
const char* VerdictName(Verdict v);

struct ExpansionReport {
  VertexSet component;
  Verdict verdict = Verdict::kUnverified;
  double kappa_product = 0.0;       // exact congestion of D_A; 0 for trivial demands
  double flow_expanding_at = 0.0;   // 1 / (2 kappa); infinite for trivial demands
  std::optional<double> cut_expanding_at;
  double duality_gap = 0.0;         // |kappa - dual objective|
  double conservation = 0.0;        // worst relative conservation error
};

struct VerifyOptions {
  int exact_vertex_limit = 256;  // larger components are reported unverified
  int brute_force_limit = 14;    // cut enumeration up to this many vertices
};

// Solves the exact LP on a connected (g, a) and certifies (phi/2)-flow
// expansion iff kappa <= 1/phi, with 1e-6 relative slack.
ExpansionReport CheckFlowExpansion(const Graph& g, const NodeWeighting& a, double phi,
                                   const VerifyOptions& options = {});

// min over S of |delta(S)| / min{A(S), A(V - S)}, skipping cuts with a
// massless side; infinite if none remain. Throws SizeError for n > 20.
double BruteForceCutExpansion(const Graph& g, const NodeWeighting& a);

struct TwoHopResult {
  std::vector<std::vector<double>> load;  // symmetric, per vertex pair
  double max_ratio = 0.0;                 // max load / D_A over pairs with capacity
};

// Routes a symmetric demand through every intermediate z in proportion to
// A(z) / |A|. Throws ContractError unless the demand respects A, and
// InvariantViolation if some pair carries more than 2 D_A (+1e-9 relative).
TwoHopResult TwoHopRoute(const NodeWeighting& a, const std::vector<std::vector<double>>& demand);

struct OverheadReport {
  std::size_t cut_size = 0;
  double ratio = 0.0;        // |C| / (phi |A| log2 |A|); 0 when C is empty
  double beta_bound = 0.0;   // beta(|A|) with the shipped constant
  double realized_beta = 0.0;  // max over audit subtrees of cut / (phi |A_U| log2 |A_U|)
  double bound = 0.0;          // phi beta |A| log2 |A|
};

// Replays the audit tree against the graph: recomputes every level's cut
// and the scale checks (IntegrityError on mismatch) and checks the per-level
// and subtree bounds (InvariantViolation). Bounds are skipped for baseline
// runs, which carry no guarantee.
OverheadReport AuditOverhead(const Graph& g, const NodeWeighting& a, const Decomposition& d);

struct DecompositionReport {
  std::vector<ExpansionReport> components;
  int certified = 0;
  int failed = 0;
  int unverified = 0;
  double certified_phi = 0.0;
  OverheadReport overhead;
};

// Full check of a decomposition: overhead audit plus an expansion report for
// every component of G - C at CertifiedPhi(d).
DecompositionReport VerifyDecomposition(const Graph& g, const NodeWeighting& a,
                                        const Decomposition& d,
                                        const VerifyOptions& options = {});

}  // namespace exd

#endif  // EXD_VERIFY_H_
