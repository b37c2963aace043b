#ifndef EXD_SRC_FLOW_INTERNAL_H_
#define EXD_SRC_FLOW_INTERNAL_H_

#include <vector>

#include "exd/graph.h"

namespace exd::internal {

struct Sink {
  VertexId vertex;
  double demand;
};

// Source-grouped product demand: commodity k ships D_A(sources[k], t) to each
// later support vertex t. Pairs with zero demand never appear.
struct GroupedDemand {
  std::vector<VertexId> sources;
  std::vector<std::vector<Sink>> sinks;
};

// Throws DomainError for |A| = 0 and InfeasibleError when the support spans
// more than one connected component.
GroupedDemand BuildProblem(const Graph& g, const NodeWeighting& a);

}  // namespace exd::internal

#endif  // EXD_SRC_FLOW_INTERNAL_H_
