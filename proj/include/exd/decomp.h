#ifndef EXD_DECOMP_H_
#define EXD_DECOMP_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exd/cover.h"
#include "exd/flow_lp.h"
#include "exd/graph.h"

namespace exd {

// Audited constants of the per-level and total cut bounds. Region growing
// gives c0 <= 4 * kCoverConstant (about 22.2); both ship with headroom.
inline constexpr double kBalancedConstant = 64.0;  // c0
inline constexpr double kTotalConstant = 64.0;     // c1

// Radius and mass scales for one recursion level.
//   gamma = exp(sqrt(log2 log2 |A|)), L = ceil(log_gamma log2 |A|) + 1,
//   delta_i = 1 / (4 phi |A| 8^i) for 0 <= i <= L,
//   a_j = |A| / 2^(gamma^j) for -1 <= j <= L.
struct ScaleParams {
  std::int64_t total_mass = 0;
  double phi = 0.0;
  double gamma = 1.0;
  int levels = 1;  // L
  std::vector<double> deltas;           // index i
  std::vector<double> mass_thresholds;  // index j + 1

  double Delta(int i) const { return deltas.at(i); }
  double MassThreshold(int j) const { return mass_thresholds.at(j + 1); }
};

// Throws ContractError for total_mass < 2. For |A| = 2 the formulas
// degenerate (gamma = 1); L is set to 1 there and the heavy case always
// applies, so the scales are never consulted.
ScaleParams ComputeScales(std::int64_t total_mass, double phi);

// beta(|A|) = c1 8^L L^2 gamma^2 (1 for |A| <= 2 is never needed; see cc).
double Beta(std::int64_t total_mass);
// phi * beta(|A|) * |A| * log2 |A|; zero for |A| <= 1.
double TotalCutBound(std::int64_t total_mass, double phi);

// Smallest i >= 1 with log2(|A| / m_i) <= gamma * log2(|A| / m_{i-1}), where
// ball_mass[i] = A(B(x, delta_i)); -1 when no i in [1, size - 1] qualifies.
int RadiusScale(std::span<const double> ball_mass, double total_mass, double gamma);
// j with mass in (a_j, a_{j-1}] and -1 <= j <= L + 1; returns L + 2 when
// mass <= a_{L+1}.
int MassScale(double mass, const ScaleParams& sp);

struct VertexScales {
  std::vector<int> radius_scale;  // per vertex, 0 outside supp(A)
  std::vector<int> mass_scale;
  std::map<std::pair<int, int>, VertexSet> classes;
  std::pair<int, int> winner{0, 0};
  std::int64_t winner_mass = 0;
};

// Requires that no heavy core exists. Throws InvariantViolation if any scale
// falls outside [1, L] or the winning class is lighter than |A| / L^2.
VertexScales ComputeVertexScales(const Graph& g, const NodeWeighting& a, const ScaleParams& sp);

struct BalancedStep {
  Net net;
  ClusterCover cover;
  std::vector<EdgeId> removed;  // union of cluster boundaries
  VertexSet remainder;          // V - V(S)
};

// Net over the winning class at radius delta_{i*}, clustered at R = 2
// delta_{i*}. Asserts the progress, per-cluster mass, net size, and
// per-level boundary bounds.
BalancedStep RunBalancedStep(const Graph& g, const NodeWeighting& a, const ScaleParams& sp,
                             const VertexScales& vs);

enum class StepKind { kBase, kExpanding, kHeavy, kBalanced, kBaselineCut };
const char* StepName(StepKind kind);

// One call of the recursion on a connected induced subgraph. Vertex and
// edge ids are those of the input graph.
struct AuditNode {
  int id = 0;
  int parent = -1;
  int depth = 0;
  StepKind kind = StepKind::kBase;
  VertexSet vertices;
  std::int64_t mass = 0;
  std::string solver;
  double kappa_upper = 0.0;     // primal bound from the gate (0 if not run)
  double dual_objective = 0.0;  // certified lower bound from the gate
  std::string certificate_digest;
  // Heavy and baseline cuts.
  VertexSet side;
  double sparsity = 0.0;
  // Balanced steps.
  int levels = 0;
  double gamma = 0.0;
  int radius_scale = 0;  // i*
  int mass_scale = 0;    // j*
  std::int64_t winner_mass = 0;
  std::vector<VertexId> net;
  std::vector<VertexSet> clusters;
  std::vector<EdgeId> cut_edges;  // removed at this level
  double level_bound = 0.0;       // bound that cut_edges.size() must respect
  std::vector<int> children;
};

struct Decomposition {
  double phi = 0.0;      // requested
  double run_phi = 0.0;  // used by the recursion (inflated if requested)
  std::string solver;    // "auto", "exact" or "mwu"
  double epsilon = 0.0;
  std::int64_t total_mass = 0;
  std::vector<EdgeId> removed;  // C, ascending
  std::vector<VertexSet> components;
  std::vector<AuditNode> audit;  // preorder; top-level nodes have parent -1
  int max_depth = 0;
};

struct DecompOptions {
  std::optional<SolverKind> solver;  // unset: exact up to exact_vertex_limit
  double epsilon = 0.05;
  bool inflate_phi = false;
  int exact_vertex_limit = 256;
};

// Splits g into connected components, restricts A, and decomposes each.
Decomposition Decompose(const Graph& g, const NodeWeighting& a, double phi,
                        const DecompOptions& options = {});
// Cut-and-recurse baseline: the best sweep cut over distance-from-root
// orderings of the dual metric, applied recursively.
Decomposition CutAndRecurse(const Graph& g, const NodeWeighting& a, double phi,
                            const DecompOptions& options = {});

// Expansion level certified for components under these options:
// phi for exact solves, phi (1 - epsilon) when MWU may be used.
double CertifiedPhi(const Decomposition& d);

// Cut file: `# exd-cut v1` header then `u v` per removed edge.
void WriteCut(std::ostream& out, const Graph& g, const Decomposition& d);
// Returns edge ids; each listed pair consumes one matching parallel edge.
std::vector<EdgeId> ReadCut(std::istream& in, const Graph& g);

// Audit file: `# exd-audit v1` header then one JSON document.
void WriteAudit(std::ostream& out, const Decomposition& d);
Decomposition ReadAudit(std::istream& in);

}  // namespace exd

#endif  // EXD_DECOMP_H_
