#include "exd/sweep.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "exd/errors.h"
#include "exd/flow_lp.h"

namespace exd {
namespace {

bool Close(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

[[noreturn]] void Violated(const std::string& what, double lhs, double rhs) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "sweep cut: " << what << " (" << lhs << " vs " << rhs << ")";
  throw InvariantViolation(msg.str());
}

[[noreturn]] void Precondition(const std::string& what, double lhs, double rhs) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "sweep cut precondition violated: " << what << " (" << lhs << " vs " << rhs << ")";
  throw ContractError(msg.str());
}

}  // namespace

std::optional<VertexId> HeavyCore(const Graph& g, const NodeWeighting& a, double phi) {
  if (!(phi > 0.0) || a.total() <= 0) throw DomainError("heavy core needs phi > 0 and |A| > 0");
  const double radius = 1.0 / (4.0 * phi * static_cast<double>(a.total()));
  for (VertexId x : a.Support()) {
    if (2 * a.MassOf(Ball(g, x, radius)) >= a.total()) return x;
  }
  return std::nullopt;
}

SweepResult SweepCut(const Graph& g, const NodeWeighting& a, const VertexSet& core, double phi) {
  if (!(phi > 0.0)) throw DomainError("phi must be positive");
  if (core.empty()) throw ContractError("sweep cut needs a nonempty core");
  const int n = g.vertex_count();
  const double mass = static_cast<double>(a.total());
  auto len = g.lengths();

  const double total_length = g.TotalLength();
  if (total_length > 1.0 + 1e-9) Precondition("sum of lengths <= 1", total_length, 1.0);
  const double spread = DemandWeightedDistance(g, a, len);
  if (spread < (1.0 / phi) * (1.0 - 1e-9)) Precondition("sum D dist >= 1/phi", spread, 1.0 / phi);
  if (3 * a.MassOf(core) < a.total()) {
    Precondition("A(K) >= |A|/3", static_cast<double>(a.MassOf(core)), mass / 3.0);
  }
  const double diam_limit = 1.0 / (2.0 * phi * mass);
  auto in_core = Membership(n, core);
  for (VertexId k : core) {
    auto dist = ShortestPaths(g, k);
    for (VertexId other : core) {
      if (!WithinRadius(dist[other], diam_limit)) {
        Precondition("diam(K) <= 1/(2 phi |A|)", dist[other], diam_limit);
      }
    }
  }

  SweepResult result;
  result.pi = ShortestPaths(g, core);
  for (VertexId v = 0; v < n; ++v) {
    if (!std::isfinite(result.pi[v])) Precondition("graph connected", result.pi[v], 0.0);
  }
  const auto& pi = result.pi;
  result.order.resize(n);
  for (VertexId v = 0; v < n; ++v) result.order[v] = v;
  std::sort(result.order.begin(), result.order.end(), [&](VertexId x, VertexId y) {
    return pi[x] != pi[y] ? pi[x] > pi[y] : x < y;
  });

  SweepDiagnostics& diag = result.diagnostics;
  for (const Edge& e : g.edges()) diag.numerator += std::abs(pi[e.u] - pi[e.v]);
  VertexSet support = a.Support();
  for (std::size_t i = 0; i < support.size(); ++i) {
    for (std::size_t j = i + 1; j < support.size(); ++j) {
      diag.denominator += ProductDemand(a, support[i], support[j]) *
                          std::abs(pi[support[i]] - pi[support[j]]);
    }
  }

  std::vector<bool> in_prefix(n, false);
  long long cut = 0;
  std::int64_t prefix_mass = 0;
  diag.best_ratio = kInfinity;
  for (int k = 1; k < n; ++k) {
    VertexId v = result.order[k - 1];
    in_prefix[v] = true;
    for (const Arc& arc : g.neighbors(v)) cut += in_prefix[arc.to] ? -1 : 1;
    prefix_mass += a[v];
    double crossing = static_cast<double>(prefix_mass) * (mass - prefix_mass) / mass;
    double gap = pi[v] - pi[result.order[k]];
    diag.edge_telescope += static_cast<double>(cut) * gap;
    diag.demand_telescope += crossing * gap;
    if (crossing <= 0.0) continue;
    double ratio = static_cast<double>(cut) / crossing;
    if (ratio < diag.best_ratio) {
      diag.best_ratio = ratio;
      diag.best_prefix = k;
    }
  }
  if (diag.best_prefix == 0) throw ContractError("sweep cut needs mass on both sides");

  if (diag.numerator > total_length + 1e-9 * std::max(1.0, total_length)) {
    Violated("numerator <= sum of lengths", diag.numerator, total_length);
  }
  if (diag.denominator < (1.0 / (12.0 * phi)) * (1.0 - 1e-9)) {
    Violated("denominator >= 1/(12 phi)", diag.denominator, 1.0 / (12.0 * phi));
  }
  if (!Close(diag.edge_telescope, diag.numerator)) {
    Violated("edge telescoping identity", diag.edge_telescope, diag.numerator);
  }
  if (!Close(diag.demand_telescope, diag.denominator)) {
    Violated("demand telescoping identity", diag.demand_telescope, diag.denominator);
  }
  if (diag.best_ratio > (diag.numerator / diag.denominator) * (1.0 + 1e-9)) {
    Violated("averaging bound", diag.best_ratio, diag.numerator / diag.denominator);
  }

  VertexSet prefix(result.order.begin(), result.order.begin() + diag.best_prefix);
  std::sort(prefix.begin(), prefix.end());
  bool touches_core = std::any_of(prefix.begin(), prefix.end(), [&](VertexId v) { return in_core[v]; });
  result.complemented = !touches_core;
  result.side = touches_core ? prefix : Complement(n, prefix);
  result.boundary = Boundary(g, result.side);
  std::int64_t side_mass = a.MassOf(result.side);
  double light = static_cast<double>(std::min(side_mass, a.total() - side_mass));
  result.sparsity = static_cast<double>(result.boundary.size()) / light;
  if (result.sparsity > 12.0 * phi * (1.0 + 1e-9)) {
    Violated("sparsity <= 12 phi", result.sparsity, 12.0 * phi);
  }
  return result;
}

}  // namespace exd
