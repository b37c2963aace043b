#ifndef EXD_COVER_H_
#define EXD_COVER_H_

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "exd/graph.h"

namespace exd {

// Audited constant of the cut-size bound
//   sum_S |delta(S)| <= kCoverConstant * log2(|T| + 1) * W / R,
// where W is the total edge length. The same bound holds for the l-weight of
// the boundaries whenever W <= 1. Region growing gives 8 ln 2.
inline constexpr double kCoverConstant = 8.0 * std::numbers::ln2;

// Disjoint clusters aligned with the terminals that produced them.
struct ClusterCover {
  std::vector<VertexId> terminals;
  std::vector<VertexSet> clusters;  // clusters[i] grown around terminals[i]
  std::vector<double> grown_radius; // r_i in [R, 2R)
  double radius = 0.0;              // R
  std::vector<EdgeId> boundary;     // union of delta(S), ascending
  long long boundary_count = 0;     // sum_S |delta(S)| (edges may repeat)
  double boundary_weight = 0.0;     // sum_S l(delta(S))

  VertexSet Covered() const;
};

// Sequential region growing: terminal i takes B(v_i, r_i) minus all earlier
// clusters, with r_i the smallest radius in [R, 2R) whose new boundary is
// cheap relative to the residual volume. Throws DomainError for R <= 0.
ClusterCover Cluster(const Graph& g, std::span<const VertexId> terminals, double radius);

double CoverCutBound(std::size_t terminal_count, double total_length, double radius);

// Throws InvariantViolation naming the first failed guarantee: disjointness,
// covering of every B(v, R), S_i within B(v_i, 2R), and the cut-size bounds.
void CheckCover(const Graph& g, const ClusterCover& cover);

// Maximal packing of delta-balls around candidates.
struct Net {
  std::vector<VertexId> centers;
  double packing_radius = 0.0;
};

// Greedy over candidates in ascending id order: admit x iff B(x, delta) is
// disjoint from every admitted ball.
Net BuildNet(const Graph& g, std::span<const VertexId> candidates, double delta);

// Disjoint packing balls and every candidate inside some B(x, 2 delta).
void CheckNet(const Graph& g, std::span<const VertexId> candidates, const Net& net);

}  // namespace exd

#endif  // EXD_COVER_H_
