#include "exd/decomp.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "exd/errors.h"
#include "exd/sweep.h"
#include "json.hpp"

namespace exd {
namespace {

using Json = nlohmann::ordered_json;

std::string Digest(const DualLengths& dual, double kappa) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](double x) {
    auto bits = std::bit_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (double l : dual.lengths) mix(l);
  mix(dual.objective);
  mix(kappa);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

template <typename T>
std::vector<T> ToParent(std::span<const T> local, const std::vector<T>& map) {
  std::vector<T> out;
  out.reserve(local.size());
  for (T x : local) out.push_back(map[x]);
  std::sort(out.begin(), out.end());
  return out;
}

// Best prefix over distance-from-root orderings, every support vertex tried
// as the root. Returns the sorted prefix.
VertexSet BaselineSide(const Graph& g, const NodeWeighting& a, double* ratio) {
  const int n = g.vertex_count();
  const double mass = static_cast<double>(a.total());
  VertexSet best;
  *ratio = kInfinity;
  std::vector<VertexId> order(n);
  std::vector<bool> in_prefix(n);
  for (VertexId root : a.Support()) {
    auto pi = ShortestPaths(g, root);
    for (VertexId v = 0; v < n; ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](VertexId x, VertexId y) {
      return pi[x] != pi[y] ? pi[x] > pi[y] : x < y;
    });
    std::fill(in_prefix.begin(), in_prefix.end(), false);
    long long cut = 0;
    std::int64_t prefix_mass = 0;
    for (int k = 1; k < n; ++k) {
      VertexId v = order[k - 1];
      in_prefix[v] = true;
      for (const Arc& arc : g.neighbors(v)) cut += in_prefix[arc.to] ? -1 : 1;
      prefix_mass += a[v];
      double crossing = static_cast<double>(prefix_mass) * (mass - prefix_mass) / mass;
      if (crossing <= 0.0) continue;
      double r = static_cast<double>(cut) / crossing;
      if (r < *ratio) {
        *ratio = r;
        best.assign(order.begin(), order.begin() + k);
      }
    }
  }
  std::sort(best.begin(), best.end());
  return best;
}

class Recursion {
 public:
  Recursion(const Graph& g, const NodeWeighting& a, Decomposition& out,
            const DecompOptions& options, bool baseline)
      : g_(g), a_(a), out_(out), options_(options), baseline_(baseline) {}

  // Splits each part into connected components and recurses on them in
  // order of their smallest vertex.
  void RunParts(const std::vector<VertexSet>& parts, int parent, int depth) {
    std::vector<VertexSet> pieces;
    for (const VertexSet& part : parts) {
      if (part.empty()) continue;
      Subgraph sub = InducedSubgraph(g_, part);
      for (const VertexSet& comp : Components(sub.graph)) {
        pieces.push_back(ToParent<VertexId>(comp, sub.to_parent_vertex));
      }
    }
    std::sort(pieces.begin(), pieces.end());
    for (VertexSet& piece : pieces) RunNode(std::move(piece), parent, depth);
  }

 private:
  void RunNode(VertexSet vertices, int parent, int depth) {
    const int id = static_cast<int>(out_.audit.size());
    {
      AuditNode& node = out_.audit.emplace_back();
      node.id = id;
      node.parent = parent;
      node.depth = depth;
      node.vertices = std::move(vertices);
      node.mass = a_.MassOf(node.vertices);
    }
    if (parent >= 0) out_.audit[parent].children.push_back(id);
    out_.max_depth = std::max(out_.max_depth, depth);
    std::vector<VertexSet> parts;
    try {
      parts = Step(id);
    } catch (const InvariantViolation& e) {
      throw Annotate(e.what(), id);
    } catch (const ContractError& e) {
      throw Annotate(e.what(), id);
    }
    if (!parts.empty()) RunParts(parts, id, depth + 1);
  }

  InvariantViolation Annotate(const std::string& what, int id) const {
    if (what.find("[audit node") != std::string::npos) return InvariantViolation(what);
    const AuditNode& node = out_.audit[id];
    std::ostringstream msg;
    msg << what << " [audit node " << id << ", depth " << node.depth << ", |V| = "
        << node.vertices.size() << ", |A| = " << node.mass << "]";
    return InvariantViolation(msg.str());
  }

  // Runs one call on the node's induced subgraph. Returns the vertex sets
  // (input ids) to recurse on; empty for leaves.
  std::vector<VertexSet> Step(int id) {
    Subgraph sub = InducedSubgraph(g_, out_.audit[id].vertices);
    const Graph& local = sub.graph;
    const auto& to_vertex = sub.to_parent_vertex;
    std::vector<std::int64_t> mass(local.vertex_count());
    for (VertexId v = 0; v < local.vertex_count(); ++v) mass[v] = a_[to_vertex[v]];
    NodeWeighting a(std::move(mass));
    const double phi = out_.run_phi;

    if (a.total() <= 1 || a.Support().size() <= 1 || local.edge_count() == 0) {
      out_.audit[id].kind = StepKind::kBase;
      return {};
    }

    SolverOptions solver{SolverKind::kExact, options_.epsilon};
    if (options_.solver) {
      solver.kind = *options_.solver;
    } else if (local.vertex_count() > options_.exact_vertex_limit) {
      solver.kind = SolverKind::kMwu;
    }
    GateResult gate = Gate(local, a, phi, solver);
    {
      AuditNode& node = out_.audit[id];
      node.solver = SolverName(solver.kind);
      if (auto* yes = std::get_if<Expanding>(&gate)) {
        node.kind = StepKind::kExpanding;
        node.kappa_upper = yes->certificate.kappa;
        node.dual_objective = yes->dual.objective;
        node.certificate_digest = Digest(yes->dual, yes->certificate.kappa);
        spdlog::debug("node {}: expanding, kappa {}", id, node.kappa_upper);
        return {};
      }
      auto& no = std::get<NotExpanding>(gate);
      node.kappa_upper = no.kappa_upper;
      node.dual_objective = no.dual.objective;
      node.certificate_digest = Digest(no.dual, no.kappa_upper);
    }
    const NotExpanding& cert = std::get<NotExpanding>(gate);
    Graph metric = local.WithLengths(cert.dual.lengths);
    const std::int64_t total = a.total();

    if (baseline_) {
      double ratio = 0.0;
      VertexSet side = BaselineSide(metric, a, &ratio);
      if (side.empty()) throw InvariantViolation("baseline found no cut with mass on both sides");
      AuditNode& node = out_.audit[id];
      node.kind = StepKind::kBaselineCut;
      node.cut_edges = ToParent<EdgeId>(Boundary(local, side), sub.to_parent_edge);
      std::int64_t side_mass = a.MassOf(side);
      node.sparsity = static_cast<double>(node.cut_edges.size()) /
                      static_cast<double>(std::min(side_mass, total - side_mass));
      node.side = ToParent<VertexId>(side, to_vertex);
      spdlog::debug("node {}: baseline cut of {} edges", id, node.cut_edges.size());
      VertexSet rest = Complement(local.vertex_count(), side);
      return {node.side, ToParent<VertexId>(rest, to_vertex)};
    }

    if (auto x = HeavyCore(metric, a, phi)) {
      VertexSet core = Ball(metric, *x, 1.0 / (4.0 * phi * static_cast<double>(total)));
      SweepResult sweep = SweepCut(metric, a, core, phi);
      AuditNode& node = out_.audit[id];
      node.kind = StepKind::kHeavy;
      node.cut_edges = ToParent<EdgeId>(sweep.boundary, sub.to_parent_edge);
      node.sparsity = sweep.sparsity;
      std::int64_t side_mass = a.MassOf(sweep.side);
      node.level_bound =
          12.0 * phi * static_cast<double>(std::min(side_mass, total - side_mass));
      node.side = ToParent<VertexId>(sweep.side, to_vertex);
      spdlog::debug("node {}: heavy core at {}, cut {} edges", id, to_vertex[*x],
                    node.cut_edges.size());
      VertexSet rest = Complement(local.vertex_count(), sweep.side);
      return {node.side, ToParent<VertexId>(rest, to_vertex)};
    }

    ScaleParams sp = ComputeScales(total, phi);
    VertexScales vs = ComputeVertexScales(metric, a, sp);
    BalancedStep step = RunBalancedStep(metric, a, sp, vs);
    AuditNode& node = out_.audit[id];
    node.kind = StepKind::kBalanced;
    node.levels = sp.levels;
    node.gamma = sp.gamma;
    node.radius_scale = vs.winner.first;
    node.mass_scale = vs.winner.second;
    node.winner_mass = vs.winner_mass;
    node.net = ToParent<VertexId>(step.net.centers, to_vertex);
    std::vector<VertexSet> parts;
    for (const VertexSet& s : step.cover.clusters) {
      if (s.empty()) continue;
      node.clusters.push_back(ToParent<VertexId>(s, to_vertex));
      parts.push_back(node.clusters.back());
    }
    node.cut_edges = ToParent<EdgeId>(step.removed, sub.to_parent_edge);
    node.level_bound = kBalancedConstant * phi * std::pow(8.0, sp.levels) * sp.gamma * sp.gamma *
                       static_cast<double>(total) * std::pow(sp.gamma, node.mass_scale - 2);
    spdlog::debug("node {}: balanced (i*, j*) = ({}, {}), {} clusters, cut {} edges", id,
                  node.radius_scale, node.mass_scale, node.clusters.size(),
                  node.cut_edges.size());
    parts.push_back(ToParent<VertexId>(step.remainder, to_vertex));
    return parts;
  }

  // An MWU run that hits its iteration cap still certifies NotExpanding when
  // its best dual does; otherwise the call falls back to the exact LP.
  GateResult Gate(const Graph& g, const NodeWeighting& a, double phi, SolverOptions& solver) {
    try {
      return RoutabilityGate(g, a, phi, solver);
    } catch (const SolverError& e) {
      if (solver.kind != SolverKind::kMwu) throw InvariantViolation(e.what());
      if (e.best().dual.objective >= 1.0 / phi) {
        return NotExpanding{e.best().dual, e.best().primal.kappa};
      }
      spdlog::warn("{}; retrying with the exact LP", e.what());
      solver.kind = SolverKind::kExact;
      return RoutabilityGate(g, a, phi, solver);
    }
  }

  const Graph& g_;
  const NodeWeighting& a_;
  Decomposition& out_;
  const DecompOptions& options_;
  bool baseline_;
};

Decomposition Run(const Graph& g, const NodeWeighting& a, double phi,
                  const DecompOptions& options, bool baseline) {
  if (!(phi > 0.0)) throw DomainError("phi must be positive");
  if (a.size() != g.vertex_count()) throw DomainError("weighting size does not match graph");
  if (!(options.epsilon >= 0.0 && options.epsilon < 1.0)) {
    throw DomainError("epsilon must lie in [0, 1)");
  }
  Decomposition d;
  d.phi = phi;
  d.run_phi = options.inflate_phi ? phi / (1.0 - options.epsilon) : phi;
  d.solver = options.solver ? SolverName(*options.solver) : "auto";
  d.epsilon = options.epsilon;
  d.total_mass = a.total();
  Graph plain = g.WithoutLengths();
  Recursion recursion(plain, a, d, options, baseline);
  recursion.RunParts({Complement(g.vertex_count(), {})}, -1, 0);

  std::vector<bool> cut(g.edge_count(), false);
  for (const AuditNode& node : d.audit) {
    for (EdgeId e : node.cut_edges) cut[e] = true;
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    if (cut[e]) d.removed.push_back(e);
  }
  d.components = Components(plain, d.removed);

  std::vector<VertexSet> leaves;
  for (const AuditNode& node : d.audit) {
    if (node.children.empty()) leaves.push_back(node.vertices);
  }
  std::sort(leaves.begin(), leaves.end());
  if (leaves != d.components) {
    throw InvariantViolation("recursion leaves differ from the components of G - C");
  }
  return d;
}

const char* kKindNames[] = {"base", "expanding", "heavy", "balanced", "baseline-cut"};

StepKind KindFromName(const std::string& name) {
  for (int k = 0; k < 5; ++k) {
    if (name == kKindNames[k]) return static_cast<StepKind>(k);
  }
  throw ParseError("unknown step kind '" + name + "'", 0);
}

}  // namespace

const char* StepName(StepKind kind) { return kKindNames[static_cast<int>(kind)]; }

Decomposition Decompose(const Graph& g, const NodeWeighting& a, double phi,
                        const DecompOptions& options) {
  return Run(g, a, phi, options, false);
}

Decomposition CutAndRecurse(const Graph& g, const NodeWeighting& a, double phi,
                            const DecompOptions& options) {
  return Run(g, a, phi, options, true);
}

double CertifiedPhi(const Decomposition& d) {
  double phi = d.run_phi;
  for (const AuditNode& node : d.audit) {
    if (node.kind == StepKind::kExpanding && node.solver == "mwu") {
      phi = std::min(phi, d.run_phi * (1.0 - d.epsilon));
    }
  }
  return phi;
}

void WriteCut(std::ostream& out, const Graph& g, const Decomposition& d) {
  out << "# exd-cut v1\n";
  out << "# vertices " << g.vertex_count() << " edges " << d.removed.size() << "\n";
  for (EdgeId e : d.removed) out << g.edge(e).u << ' ' << g.edge(e).v << '\n';
}

std::vector<EdgeId> ReadCut(std::istream& in, const Graph& g) {
  std::map<std::pair<VertexId, VertexId>, std::vector<EdgeId>> pool;
  for (EdgeId e = g.edge_count() - 1; e >= 0; --e) {
    pool[{std::min(g.edge(e).u, g.edge(e).v), std::max(g.edge(e).u, g.edge(e).v)}].push_back(e);
  }
  std::vector<EdgeId> out;
  std::string line;
  int number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (number == 1) {
      if (line != "# exd-cut v1") throw ParseError("missing '# exd-cut v1' header", number);
      header = true;
      continue;
    }
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    long long u, v;
    if (!(fields >> u)) continue;
    std::string extra;
    if (!(fields >> v) || (fields >> extra)) throw ParseError("expected 'u v'", number);
    if (u < 0 || v < 0 || u >= g.vertex_count() || v >= g.vertex_count()) {
      throw ParseError("vertex out of range", number);
    }
    auto it = pool.find({static_cast<VertexId>(std::min(u, v)), static_cast<VertexId>(std::max(u, v))});
    if (it == pool.end() || it->second.empty()) {
      throw ParseError("cut edge is not in the graph", number);
    }
    out.push_back(it->second.back());
    it->second.pop_back();
  }
  if (!header) throw ParseError("missing '# exd-cut v1' header", 1);
  std::sort(out.begin(), out.end());
  return out;
}

void WriteAudit(std::ostream& out, const Decomposition& d) {
  Json doc;
  doc["phi"] = d.phi;
  doc["run_phi"] = d.run_phi;
  doc["solver"] = d.solver;
  doc["epsilon"] = d.epsilon;
  doc["total_mass"] = d.total_mass;
  doc["max_depth"] = d.max_depth;
  doc["removed"] = d.removed;
  doc["components"] = d.components;
  Json nodes = Json::array();
  for (const AuditNode& node : d.audit) {
    Json j;
    j["id"] = node.id;
    j["parent"] = node.parent;
    j["depth"] = node.depth;
    j["kind"] = StepName(node.kind);
    j["vertices"] = node.vertices;
    j["mass"] = node.mass;
    j["solver"] = node.solver;
    j["kappa_upper"] = node.kappa_upper;
    j["dual_objective"] = node.dual_objective;
    j["certificate_digest"] = node.certificate_digest;
    j["side"] = node.side;
    j["sparsity"] = node.sparsity;
    j["levels"] = node.levels;
    j["gamma"] = node.gamma;
    j["radius_scale"] = node.radius_scale;
    j["mass_scale"] = node.mass_scale;
    j["winner_mass"] = node.winner_mass;
    j["net"] = node.net;
    j["clusters"] = node.clusters;
    j["cut_edges"] = node.cut_edges;
    j["level_bound"] = node.level_bound;
    j["children"] = node.children;
    nodes.push_back(std::move(j));
  }
  doc["audit"] = std::move(nodes);
  out << "# exd-audit v1\n" << doc.dump(1) << "\n";
}

Decomposition ReadAudit(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header != "# exd-audit v1") {
    throw ParseError("missing '# exd-audit v1' header", 1);
  }
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("audit JSON: ") + e.what(), 0);
  }
  Decomposition d;
  try {
    d.phi = doc.at("phi");
    d.run_phi = doc.at("run_phi");
    d.solver = doc.at("solver");
    d.epsilon = doc.at("epsilon");
    d.total_mass = doc.at("total_mass");
    d.max_depth = doc.at("max_depth");
    d.removed = doc.at("removed").get<std::vector<EdgeId>>();
    d.components = doc.at("components").get<std::vector<VertexSet>>();
    for (const Json& j : doc.at("audit")) {
      AuditNode& node = d.audit.emplace_back();
      node.id = j.at("id");
      node.parent = j.at("parent");
      node.depth = j.at("depth");
      node.kind = KindFromName(j.at("kind"));
      node.vertices = j.at("vertices").get<VertexSet>();
      node.mass = j.at("mass");
      node.solver = j.at("solver");
      node.kappa_upper = j.at("kappa_upper");
      node.dual_objective = j.at("dual_objective");
      node.certificate_digest = j.at("certificate_digest");
      node.side = j.at("side").get<VertexSet>();
      node.sparsity = j.at("sparsity");
      node.levels = j.at("levels");
      node.gamma = j.at("gamma");
      node.radius_scale = j.at("radius_scale");
      node.mass_scale = j.at("mass_scale");
      node.winner_mass = j.at("winner_mass");
      node.net = j.at("net").get<std::vector<VertexId>>();
      node.clusters = j.at("clusters").get<std::vector<VertexSet>>();
      node.cut_edges = j.at("cut_edges").get<std::vector<EdgeId>>();
      node.level_bound = j.at("level_bound");
      node.children = j.at("children").get<std::vector<int>>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("audit schema: ") + e.what(), 0);
  }
  return d;
}

}  // namespace exd
