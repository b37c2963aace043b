#include "exd/verify.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "exd/errors.h"
#include "exd/flow_lp.h"

namespace exd {
namespace {

constexpr double kSlack = 1.0 + 1e-9;

bool Close(double x, double y) {
  return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
}

[[noreturn]] void Mismatch(int id, const std::string& what) {
  throw IntegrityError("audit node " + std::to_string(id) + ": " + what);
}

[[noreturn]] void Exceeds(int id, const std::string& what, double lhs, double rhs) {
  std::ostringstream msg;
  msg.precision(17);
  msg << "audit node " << id << ": " << what << " (" << lhs << " vs " << rhs << ")";
  throw InvariantViolation(msg.str());
}

NodeWeighting LocalWeights(const NodeWeighting& a, const Subgraph& sub) {
  std::vector<std::int64_t> mass(sub.graph.vertex_count());
  for (VertexId v = 0; v < sub.graph.vertex_count(); ++v) mass[v] = a[sub.to_parent_vertex[v]];
  return NodeWeighting(std::move(mass));
}

// Edges of the node's subgraph with exactly one endpoint in `in_side`, in
// input ids.
std::vector<EdgeId> BoundaryWithin(const Subgraph& sub,
                                   const std::vector<bool>& in_side) {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < sub.graph.edge_count(); ++e) {
    const Edge& edge = sub.graph.edge(e);
    if (in_side[sub.to_parent_vertex[edge.u]] != in_side[sub.to_parent_vertex[edge.v]]) {
      out.push_back(sub.to_parent_edge[e]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VertexSet> PiecesOf(const Graph& g, const std::vector<VertexSet>& parts) {
  std::vector<VertexSet> pieces;
  for (const VertexSet& part : parts) {
    if (part.empty()) continue;
    Subgraph sub = InducedSubgraph(g, part);
    for (const VertexSet& comp : Components(sub.graph)) {
      VertexSet mapped;
      for (VertexId v : comp) mapped.push_back(sub.to_parent_vertex[v]);
      std::sort(mapped.begin(), mapped.end());
      pieces.push_back(std::move(mapped));
    }
  }
  std::sort(pieces.begin(), pieces.end());
  return pieces;
}

VertexSet Difference(const VertexSet& all, const VertexSet& remove) {
  VertexSet out;
  std::set_difference(all.begin(), all.end(), remove.begin(), remove.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace

const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kCertified: return "certified";
    case Verdict::kFailed: return "failed";
    case Verdict::kUnverified: return "unverified";
  }
  return "?";
}

ExpansionReport CheckFlowExpansion(const Graph& g, const NodeWeighting& a, double phi,
                                   const VerifyOptions& options) {
  if (!(phi > 0.0)) throw DomainError("phi must be positive");
  ExpansionReport report;
  report.component = Complement(g.vertex_count(), {});
  if (a.total() <= 1 || a.Support().size() <= 1) {
    report.verdict = Verdict::kCertified;
    report.flow_expanding_at = kInfinity;
    if (g.vertex_count() <= options.brute_force_limit) {
      report.cut_expanding_at = BruteForceCutExpansion(g, a);
    }
    return report;
  }
  if (!IsConnected(g)) throw ContractError("expansion check needs a connected component");
  if (g.vertex_count() > options.exact_vertex_limit) return report;

  ConcurrentFlow flow = SolveExact(g, a);
  const double kappa = flow.primal.kappa;
  report.kappa_product = kappa;
  report.flow_expanding_at = 1.0 / (2.0 * kappa);
  report.duality_gap = std::abs(kappa - flow.dual.objective);
  report.conservation = MaxConservationViolation(g, a, flow.primal);
  const double tol = 1e-6 * std::max(1.0, kappa);
  bool sound = report.duality_gap <= tol && report.conservation <= 1e-9;
  report.verdict = sound && kappa <= 1.0 / phi + tol ? Verdict::kCertified : Verdict::kFailed;
  if (g.vertex_count() <= options.brute_force_limit) {
    report.cut_expanding_at = BruteForceCutExpansion(g, a);
  }
  return report;
}

double BruteForceCutExpansion(const Graph& g, const NodeWeighting& a) {
  const int n = g.vertex_count();
  if (n > 20) throw SizeError("brute-force cut enumeration limited to 20 vertices");
  if (n <= 1) return kInfinity;
  const std::int64_t total = a.total();
  // Vertex n - 1 stays outside S, so each cut is seen once; Gray code order
  // changes one vertex per step.
  std::vector<bool> in(n, false);
  long long cut = 0;
  std::int64_t mass = 0;
  double best = kInfinity;
  const std::uint32_t limit = 1u << (n - 1);
  for (std::uint32_t step = 1; step < limit; ++step) {
    VertexId v = std::countr_zero(step);
    in[v] = !in[v];
    long long inside = 0, outside = 0;
    for (const Arc& arc : g.neighbors(v)) (in[arc.to] ? inside : outside) += 1;
    cut += in[v] ? outside - inside : inside - outside;
    mass += in[v] ? a[v] : -a[v];
    std::int64_t light = std::min(mass, total - mass);
    if (light <= 0) continue;
    best = std::min(best, static_cast<double>(cut) / static_cast<double>(light));
  }
  return best;
}

TwoHopResult TwoHopRoute(const NodeWeighting& a, const std::vector<std::vector<double>>& demand) {
  const int n = a.size();
  if (static_cast<int>(demand.size()) != n) throw DomainError("demand size does not match A");
  const double total = static_cast<double>(a.total());
  for (int x = 0; x < n; ++x) {
    if (static_cast<int>(demand[x].size()) != n) throw DomainError("demand must be square");
    double row = 0.0;
    for (int y = 0; y < n; ++y) {
      double d = demand[x][y];
      if (d < 0.0 || (x == y && d != 0.0) || !Close(d, demand[y][x])) {
        throw ContractError("demand must be symmetric, nonnegative, and zero on the diagonal");
      }
      row += d;
    }
    if (row > static_cast<double>(a[x]) * kSlack + 1e-12) {
      throw ContractError("demand does not respect A at vertex " + std::to_string(x));
    }
  }
  TwoHopResult out;
  out.load.assign(n, std::vector<double>(n, 0.0));
  if (total <= 0.0) return out;
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      if (demand[x][y] == 0.0) continue;
      for (int z = 0; z < n; ++z) {
        double share = demand[x][y] * static_cast<double>(a[z]) / total;
        if (z != x) out.load[std::min(x, z)][std::max(x, z)] += share;
        if (z != y) out.load[std::min(y, z)][std::max(y, z)] += share;
      }
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      out.load[y][x] = out.load[x][y];
      double cap = ProductDemand(a, x, y);
      double ratio = cap > 0.0 ? out.load[x][y] / cap : (out.load[x][y] > 0.0 ? kInfinity : 0.0);
      out.max_ratio = std::max(out.max_ratio, ratio);
    }
  }
  if (out.max_ratio > 2.0 + 1e-9) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "two-hop routing exceeds twice the product capacity (" << out.max_ratio << ")";
    throw InvariantViolation(msg.str());
  }
  return out;
}

OverheadReport AuditOverhead(const Graph& g, const NodeWeighting& a, const Decomposition& d) {
  if (a.size() != g.vertex_count()) throw DomainError("weighting size does not match graph");
  if (d.total_mass != a.total()) throw IntegrityError("audit total mass differs from A");
  const double phi = d.run_phi;
  const auto& audit = d.audit;
  bool baseline = std::any_of(audit.begin(), audit.end(), [](const AuditNode& node) {
    return node.kind == StepKind::kBaselineCut;
  });

  std::vector<VertexSet> roots;
  for (std::size_t id = 0; id < audit.size(); ++id) {
    const AuditNode& node = audit[id];
    if (node.id != static_cast<int>(id)) Mismatch(node.id, "ids out of order");
    if (node.parent < 0) roots.push_back(node.vertices);
    if (node.parent >= static_cast<int>(id)) Mismatch(node.id, "parent after child");
    if (!std::is_sorted(node.vertices.begin(), node.vertices.end()) || node.vertices.empty()) {
      Mismatch(node.id, "vertex set not sorted or empty");
    }
    if (node.mass != a.MassOf(node.vertices)) Mismatch(node.id, "mass differs from A");
    Subgraph sub = InducedSubgraph(g, node.vertices);
    if (!IsConnected(sub.graph)) Mismatch(node.id, "vertex set not connected");

    std::vector<VertexSet> parts;
    std::vector<EdgeId> cut;
    std::size_t boundary_sum = 0;
    switch (node.kind) {
      case StepKind::kBase:
      case StepKind::kExpanding:
        if (!node.children.empty() || !node.cut_edges.empty()) Mismatch(node.id, "leaf with cuts");
        continue;
      case StepKind::kHeavy:
      case StepKind::kBaselineCut: {
        if (!std::includes(node.vertices.begin(), node.vertices.end(), node.side.begin(),
                           node.side.end()) || node.side.empty() ||
            node.side.size() == node.vertices.size()) {
          Mismatch(node.id, "cut side is not a proper subset");
        }
        cut = BoundaryWithin(sub, Membership(g.vertex_count(), node.side));
        boundary_sum = cut.size();
        parts = {node.side, Difference(node.vertices, node.side)};
        std::int64_t side_mass = a.MassOf(node.side);
        double light = static_cast<double>(std::min(side_mass, node.mass - side_mass));
        if (node.kind == StepKind::kHeavy) {
          double bound = 12.0 * phi * light;
          if (!Close(bound, node.level_bound)) Mismatch(node.id, "heavy level bound");
          if (static_cast<double>(cut.size()) > bound * kSlack) {
            Exceeds(node.id, "heavy cut exceeds 12 phi min{A(S'), A(V - S')}",
                    static_cast<double>(cut.size()), bound);
          }
        }
        break;
      }
      case StepKind::kBalanced: {
        ScaleParams sp = ComputeScales(node.mass, phi);
        if (sp.levels != node.levels || !Close(sp.gamma, node.gamma)) {
          Mismatch(node.id, "scale parameters");
        }
        const int i = node.radius_scale, j = node.mass_scale;
        if (i < 1 || i > sp.levels || j < 1 || j > sp.levels) {
          Exceeds(node.id, "winning scale outside [1, L]", i, j);
        }
        const double total = static_cast<double>(node.mass);
        const double levels_sq = static_cast<double>(sp.levels) * sp.levels;
        if (static_cast<double>(node.winner_mass) * levels_sq < total) {
          Exceeds(node.id, "A(V_{i*,j*}) < |A| / L^2", node.winner_mass, total / levels_sq);
        }
        std::vector<bool> seen(g.vertex_count(), false);
        std::vector<bool> in_node = Membership(g.vertex_count(), node.vertices);
        VertexSet covered;
        std::vector<bool> cut_mark(g.edge_count(), false);
        for (const VertexSet& s : node.clusters) {
          for (VertexId v : s) {
            if (!in_node[v] || seen[v]) Mismatch(node.id, "clusters overlap or leave the node");
            seen[v] = true;
          }
          covered.insert(covered.end(), s.begin(), s.end());
          auto boundary = BoundaryWithin(sub, Membership(g.vertex_count(), s));
          boundary_sum += boundary.size();
          for (EdgeId e : boundary) cut_mark[e] = true;
          double m = static_cast<double>(a.MassOf(s));
          if (m > sp.MassThreshold(j - 2) * kSlack) {
            Exceeds(node.id, "cluster mass above a_{j*-2}", m, sp.MassThreshold(j - 2));
          }
        }
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
          if (cut_mark[e]) cut.push_back(e);
        }
        std::sort(covered.begin(), covered.end());
        double covered_mass = static_cast<double>(a.MassOf(covered));
        if (covered_mass * levels_sq < total) {
          Exceeds(node.id, "clusters carry less than |A| / L^2", covered_mass, total / levels_sq);
        }
        double net = static_cast<double>(node.net.size());
        if (net * sp.MassThreshold(j) > total * kSlack) {
          Exceeds(node.id, "net larger than |A| / a_{j*}", net, total / sp.MassThreshold(j));
        }
        double bound = kBalancedConstant * phi * std::pow(8.0, sp.levels) * sp.gamma * sp.gamma *
                       total * std::pow(sp.gamma, j - 2);
        if (!Close(bound, node.level_bound)) Mismatch(node.id, "balanced level bound");
        if (static_cast<double>(boundary_sum) > bound * kSlack) {
          Exceeds(node.id, "balanced cut exceeds its level bound",
                  static_cast<double>(boundary_sum), bound);
        }
        parts = node.clusters;
        parts.push_back(Difference(node.vertices, covered));
        break;
      }
    }
    if (cut != node.cut_edges) Mismatch(node.id, "recomputed cut edges differ");
    std::vector<VertexSet> children;
    for (int c : node.children) {
      if (c <= node.id || c >= static_cast<int>(audit.size()) ||
          audit[c].parent != node.id) {
        Mismatch(node.id, "child links");
      }
      children.push_back(audit[c].vertices);
    }
    if (children != PiecesOf(g, parts)) Mismatch(node.id, "children differ from the split");
  }

  // Subtree totals, children after parents in preorder.
  std::vector<double> subtree(audit.size(), 0.0);
  OverheadReport report;
  for (std::size_t k = audit.size(); k-- > 0;) {
    const AuditNode& node = audit[k];
    subtree[k] += static_cast<double>(node.cut_edges.size());
    if (node.parent >= 0) subtree[node.parent] += subtree[k];
    if (node.mass >= 2 && subtree[k] > 0.0) {
      double scale = phi * static_cast<double>(node.mass) * std::log2(node.mass);
      report.realized_beta = std::max(report.realized_beta, subtree[k] / scale);
    }
    if (!baseline && subtree[k] > TotalCutBound(node.mass, phi) * kSlack) {
      Exceeds(node.id, "subtree cut exceeds phi beta |A| log2 |A|", subtree[k],
              TotalCutBound(node.mass, phi));
    }
  }

  std::vector<bool> marked(g.edge_count(), false);
  for (const AuditNode& node : audit) {
    for (EdgeId e : node.cut_edges) marked[e] = true;
  }
  std::vector<EdgeId> removed;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (marked[e]) removed.push_back(e);
  }
  if (removed != d.removed) throw IntegrityError("removed edges differ from the audit tree");
  std::sort(roots.begin(), roots.end());
  if (roots != Components(g)) throw IntegrityError("top-level nodes are not the components of G");
  if (Components(g, d.removed) != d.components) {
    throw IntegrityError("component list differs from G - C");
  }

  report.cut_size = d.removed.size();
  report.beta_bound = Beta(a.total());
  report.bound = TotalCutBound(a.total(), phi);
  if (a.total() >= 2 && !d.removed.empty()) {
    double total = static_cast<double>(a.total());
    report.ratio = static_cast<double>(d.removed.size()) / (d.phi * total * std::log2(total));
  }
  if (!baseline && static_cast<double>(report.cut_size) > report.bound * kSlack) {
    Exceeds(-1, "|C| exceeds phi beta |A| log2 |A|", report.cut_size, report.bound);
  }
  return report;
}

DecompositionReport VerifyDecomposition(const Graph& g, const NodeWeighting& a,
                                        const Decomposition& d, const VerifyOptions& options) {
  DecompositionReport report;
  report.overhead = AuditOverhead(g, a, d);
  report.certified_phi = CertifiedPhi(d);
  for (const VertexSet& comp : Components(g, d.removed)) {
    Subgraph sub = InducedSubgraph(g, comp);
    ExpansionReport r =
        CheckFlowExpansion(sub.graph, LocalWeights(a, sub), report.certified_phi, options);
    r.component = comp;
    switch (r.verdict) {
      case Verdict::kCertified: ++report.certified; break;
      case Verdict::kFailed: ++report.failed; break;
      case Verdict::kUnverified: ++report.unverified; break;
    }
    report.components.push_back(std::move(r));
  }
  return report;
}

}  // namespace exd
