// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "exd/cover.h"
#include "exd/decomp.h"
#include "exd/errors.h"
#include "exd/flow_lp.h"
#include "exd/generators.h"
#include "exd/sweep.h"
#include "exd/verify.h"
#include "oracles.h"

using namespace exd;

namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

bool Close(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

struct Outcome {
  bool pass = true;
  std::string detail;
  std::string first_problem;

  void Fail(const std::string& what) {
    if (pass) first_problem = what;
    pass = false;
  }
};

const char* kCorpus =
    "hypercube:3-7,"
    "grid:3x3,grid:4x4,grid:5x5,grid:6x6,grid:8x8,grid:2x8,grid:4x8,"
    "regular:16:3:1,regular:24:3:2,regular:32:3:3,regular:32:4:4,"
    "regular:48:3:5,regular:48:4:6,regular:64:3:7,regular:64:4:8,"
    "dumbbell:3-12";
const std::vector<double> kPhiGrid{2.0, 0.5, 0.125, 0.03125};

struct CorpusRun {
  std::string name;
  Graph graph;
  NodeWeighting a;
  double phi = 0.0;
  Decomposition d;
  DecompositionReport report;
  std::string error;
  std::string cut_text;
  std::string audit_text;
};

std::string CutText(const Graph& g, const Decomposition& d) {
  std::ostringstream out;
  WriteCut(out, g, d);
  return out.str();
}

std::string AuditText(const Decomposition& d) {
  std::ostringstream out;
  WriteAudit(out, d);
  return out.str();
}

std::vector<CorpusRun> RunCorpus(double* seconds) {
  auto start = Clock::now();
  std::vector<CorpusRun> runs;
  for (CorpusEntry& entry : ParseCorpus(kCorpus, 1)) {
    for (double phi : kPhiGrid) {
      CorpusRun run;
      run.name = entry.name;
      run.graph = entry.graph;
      run.a = NodeWeighting::Degrees(entry.graph);
      run.phi = phi;
      try {
        run.d = Decompose(run.graph, run.a, phi);
        run.report = VerifyDecomposition(run.graph, run.a, run.d);
        run.cut_text = CutText(run.graph, run.d);
        run.audit_text = AuditText(run.d);
      } catch (const std::exception& e) {
        run.error = e.what();
      }
      runs.push_back(std::move(run));
    }
  }
  *seconds = Seconds(start);
  return runs;
}

std::string RunLabel(const CorpusRun& run) {
  std::ostringstream out;
  out << run.name << " phi=" << run.phi;
  return out.str();
}

Outcome ComponentExpansion(const std::vector<CorpusRun>& runs, double seconds) {
  Outcome o;
  std::size_t instances = 0, components = 0, unverified = 0, strict = 0;
  std::string last;
  for (const CorpusRun& run : runs) {
    if (run.name != last) ++instances, last = run.name;
    if (!run.error.empty()) {
      o.Fail(RunLabel(run) + ": " + run.error);
      continue;
    }
    double phi = run.report.certified_phi;
    for (const ExpansionReport& c : run.report.components) {
      ++components;
      if (c.verdict == Verdict::kUnverified) {
        ++unverified;
        continue;
      }
      if (c.kappa_product > 2.0 / phi + 1e-6) o.Fail(RunLabel(run) + ": component not expanding");
      if (c.verdict == Verdict::kCertified) ++strict;
    }
  }
  if (instances < 30) o.Fail("corpus has fewer than 30 instances");
  if (unverified > 0.05 * components) o.Fail("more than 5% of components unverified");
  if (seconds > 1800) o.Fail("corpus run exceeded 30 minutes");
  std::ostringstream d;
  d << instances << " instances x " << kPhiGrid.size() << " phi, " << components
    << " components, " << unverified << " unverified, " << strict
    << " within kappa <= 1/phi, " << static_cast<int>(seconds) << " s";
  o.detail = d.str();
  return o;
}

Outcome OverheadBound(const std::vector<CorpusRun>& runs) {
  Outcome o;
  double worst_ratio = 0.0, worst_beta = 0.0, worst_fill = 0.0;
  for (const CorpusRun& run : runs) {
    if (!run.error.empty()) {
      o.Fail(RunLabel(run) + ": " + run.error);
      continue;
    }
    double bound = TotalCutBound(run.a.total(), run.phi);
    if (static_cast<double>(run.d.removed.size()) > bound) o.Fail(RunLabel(run) + ": |C| over bound");
    if (bound > 0) worst_fill = std::max(worst_fill, run.d.removed.size() / bound);
    try {
      OverheadReport again = AuditOverhead(run.graph, run.a, run.d);
      if (again.cut_size != run.d.removed.size()) o.Fail(RunLabel(run) + ": audit cut size");
      if (!Close(again.bound, bound)) o.Fail(RunLabel(run) + ": audit bound differs");
      worst_ratio = std::max(worst_ratio, again.ratio);
      worst_beta = std::max(worst_beta, again.realized_beta);
    } catch (const std::exception& e) {
      o.Fail(RunLabel(run) + ": " + e.what());
    }
  }
  std::ostringstream d;
  d << runs.size() << " runs audited, max |C|/(phi |A| log2 |A|) = " << worst_ratio
    << ", max realized beta = " << worst_beta << ", max |C| / bound = " << worst_fill;
  o.detail = d.str();
  return o;
}

Outcome SweepGuarantee() {
  Outcome o;
  Rng rng(1001);
  int done = 0, attempts = 0;
  double worst = 0.0;
  while (done < 1000 && attempts < 100000) {
    ++attempts;
    int n = 3 + static_cast<int>(rng.Below(14));
    Graph g = oracle::RandomConnected(n, static_cast<int>(rng.Below(2 * n)), rng);
    std::vector<std::int64_t> mass(n);
    for (auto& x : mass) x = static_cast<std::int64_t>(rng.Below(3));
    mass[rng.Below(n)] += 2 + static_cast<std::int64_t>(rng.Below(3 * n));
    NodeWeighting a(mass);
    if (a.Support().size() < 2) continue;
    auto flow = SolveExact(g, a);
    Graph metric = g.WithLengths(flow.dual.lengths);
    double phi = (1.0 + 3.0 * rng.Unit()) / flow.dual.objective;
    auto x = HeavyCore(metric, a, phi);
    if (!x) continue;
    VertexSet core = Ball(metric, *x, 1.0 / (4.0 * phi * a.total()));
    ++done;
    try {
      SweepResult r = SweepCut(metric, a, core, phi);
      const SweepDiagnostics& s = r.diagnostics;
      if (s.numerator > 1.0 + 1e-9) o.Fail("numerator above 1");
      if (s.denominator < (1.0 / (12.0 * phi)) * (1 - 1e-9)) o.Fail("denominator below 1/(12 phi)");
      if (!Close(s.edge_telescope, s.numerator)) o.Fail("edge telescoping");
      if (!Close(s.demand_telescope, s.denominator)) o.Fail("demand telescoping");
      std::uint32_t mask = 0;
      for (VertexId v : r.side) mask |= 1u << v;
      std::int64_t side = oracle::MaskMass(a, mask);
      double sparsity = oracle::CutCount(g, mask) /
                        static_cast<double>(std::min(side, a.total() - side));
      if (!Close(sparsity, r.sparsity)) o.Fail("reported sparsity differs from recount");
      if (sparsity > 12.0 * phi * (1 + 1e-9)) o.Fail("sparsity above 12 phi");
      worst = std::max(worst, sparsity / phi);
    } catch (const std::exception& e) {
      o.Fail(e.what());
    }
  }
  if (done < 1000) o.Fail("could not generate 1000 heavy-case instances");
  std::ostringstream d;
  d << done << " instances, max sparsity / phi = " << worst;
  o.detail = d.str();
  return o;
}

std::vector<std::vector<double>> AllPairs(const Graph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInfinity));
  for (int v = 0; v < n; ++v) d[v][v] = 0.0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.edge(e);
    d[u][v] = d[v][u] = std::min(d[u][v], g.length(e));
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

Outcome CoverGuarantee() {
  Outcome o;
  Rng rng(2002);
  int done = 0;
  double worst = 0.0;
  while (done < 1000) {
    int n = 2 + static_cast<int>(rng.Below(15));
    Graph g = oracle::RandomConnected(n, static_cast<int>(rng.Below(2 * n)), rng);
    NodeWeighting a = oracle::RandomWeights(n, 3, rng);
    if (a.Support().size() < 2) continue;
    Graph metric = g.WithLengths(SolveExact(g, a).dual.lengths);
    auto dist = AllPairs(metric);
    std::vector<VertexId> terminals;
    for (int v = 0; v < n; ++v) {
      if (rng.Below(3) == 0) terminals.push_back(v);
    }
    if (terminals.empty()) terminals.push_back(static_cast<int>(rng.Below(n)));
    double radius = std::exp(std::log(1e-3) * rng.Unit());
    ++done;
    try {
      ClusterCover cover = Cluster(metric, terminals, radius);
      std::vector<int> owner(n, -1);
      for (std::size_t i = 0; i < cover.clusters.size(); ++i) {
        for (VertexId v : cover.clusters[i]) {
          if (owner[v] != -1) o.Fail("clusters overlap");
          owner[v] = static_cast<int>(i);
          if (dist[terminals[i]][v] > 2.0 * radius * (1 + 1e-9)) o.Fail("cluster radius above 2R");
        }
      }
      for (VertexId t : terminals) {
        for (int v = 0; v < n; ++v) {
          if (dist[t][v] <= radius * (1 - 1e-9) && owner[v] < 0) o.Fail("R-ball not covered");
        }
      }
      double weight = 0.0;
      for (EdgeId e = 0; e < metric.edge_count(); ++e) {
        auto [u, v] = metric.edge(e);
        if (owner[u] != owner[v] && (owner[u] >= 0 || owner[v] >= 0)) weight += metric.length(e);
      }
      double scale = std::log2(terminals.size() + 1.0) * metric.TotalLength() / radius;
      if (weight > kCoverConstant * scale * (1 + 1e-9)) o.Fail("boundary weight above bound");
      if (scale > 0) worst = std::max(worst, weight / scale);
    } catch (const std::exception& e) {
      o.Fail(e.what());
    }
  }
  std::ostringstream d;
  d << done << " triples, max weight / (log2(|T|+1) sum l / R) = " << worst << " (limit "
    << kCoverConstant << ")";
  o.detail = d.str();
  return o;
}

Outcome Duality(const std::vector<CorpusRun>& runs) {
  Outcome o;
  std::size_t checked = 0;
  double worst_gap = 0.0;
  for (const CorpusRun& run : runs) {
    for (const ExpansionReport& c : run.report.components) {
      if (c.verdict == Verdict::kUnverified || c.component.size() > 256 || c.kappa_product == 0.0) {
        continue;
      }
      ++checked;
      double rel = c.duality_gap / std::max(1.0, c.kappa_product);
      worst_gap = std::max(worst_gap, rel);
      if (rel > 1e-6) o.Fail(RunLabel(run) + ": duality gap");
    }
  }
  Rng rng(3003);
  int shared = 0;
  double worst_mwu = 0.0;
  while (shared < 200) {
    int n = 3 + static_cast<int>(rng.Below(30));
    Graph g = oracle::RandomConnected(n, static_cast<int>(rng.Below(2 * n)), rng);
    NodeWeighting a = oracle::RandomWeights(n, 4, rng);
    if (a.Support().size() < 2) continue;
    ++shared;
    double exact = SolveExact(g, a).primal.kappa;
    for (double eps : {0.1, 0.05}) {
      try {
        double mwu = SolveMwu(g, a, eps).primal.kappa;
        double rel = std::abs(mwu - exact) / exact;
        worst_mwu = std::max(worst_mwu, rel / eps);
        if (rel > eps) o.Fail("MWU outside (1 +- eps)");
      } catch (const std::exception& e) {
        o.Fail(e.what());
      }
    }
  }
  std::ostringstream d;
  d << checked << " corpus components, max relative gap " << worst_gap << "; " << shared
    << " MWU instances, max |error| / (eps kappa) = " << worst_mwu;
  o.detail = d.str();
  return o;
}

Outcome TwoHopAndCuts(const std::vector<CorpusRun>& runs) {
  Outcome o;
  Rng rng(4004);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    int n = 2 + static_cast<int>(rng.Below(11));
    NodeWeighting a = oracle::RandomWeights(n, 5, rng);
    std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
    if (trial % 5 == 0) {
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
          if (u != v) d[u][v] = static_cast<double>(a[u]) * a[v] / a.total();
    } else {
      std::vector<double> room(n);
      for (int v = 0; v < n; ++v) room[v] = static_cast<double>(a[v]);
      std::vector<std::pair<int, int>> pairs;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
      for (std::size_t k = pairs.size(); k > 1; --k) std::swap(pairs[k - 1], pairs[rng.Below(k)]);
      for (auto [u, v] : pairs) {
        double x = std::min(room[u], room[v]) * rng.Unit();
        d[u][v] = d[v][u] = x;
        room[u] -= x;
        room[v] -= x;
      }
    }
    try {
      TwoHopResult r = TwoHopRoute(a, d);
      worst = std::max(worst, r.max_ratio);
      if (r.max_ratio > 2.0 + 1e-9) o.Fail("two-hop load above 2 D_A");
    } catch (const std::exception& e) {
      o.Fail(e.what());
    }
  }

  int cut_checks = 0;
  auto check = [&](const std::string& label, double cut, double flow) {
    ++cut_checks;
    if (cut < flow * (1 - 1e-9)) o.Fail(label + ": cut expansion below flow expansion");
  };
  for (const CorpusRun& run : runs) {
    for (const ExpansionReport& c : run.report.components) {
      if (c.cut_expanding_at) check(RunLabel(run), *c.cut_expanding_at, c.flow_expanding_at);
    }
  }
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + static_cast<int>(rng.Below(13));
    Graph g = oracle::RandomConnected(n, static_cast<int>(rng.Below(2 * n)), rng);
    NodeWeighting a = oracle::RandomWeights(n, 4, rng);
    if (a.Support().size() < 2) continue;
    double flow = 1.0 / (2.0 * SolveExact(g, a).primal.kappa);
    check("random n=" + std::to_string(n), BruteForceCutExpansion(g, a), flow);
  }
  std::ostringstream d;
  d << "500 demands, max load ratio " << worst << "; " << cut_checks
    << " cut-vs-flow comparisons";
  o.detail = d.str();
  return o;
}

Outcome ScaleValidity(const std::vector<CorpusRun>& runs) {
  Outcome o;
  int balanced = 0;
  auto check_step = [&](const std::string& label, std::int64_t mass, double phi, int i, int j,
                        std::int64_t winner_mass, const std::vector<std::int64_t>& cluster_mass,
                        std::size_t net_size) {
    ScaleParams sp = ComputeScales(mass, phi);
    const int levels = sp.levels;
    if (i < 1 || i > levels || j < 1 || j > levels) o.Fail(label + ": scale outside [1, L]");
    if (winner_mass * levels * levels < mass) o.Fail(label + ": winning class below |A|/L^2");
    for (std::int64_t m : cluster_mass) {
      if (m > sp.MassThreshold(j - 2) * (1 + 1e-9)) o.Fail(label + ": cluster above a_{j-2}");
    }
    if (net_size * sp.MassThreshold(j) > mass * (1 + 1e-9)) o.Fail(label + ": net above |A|/a_j");
  };

  for (const CorpusRun& run : runs) {
    for (const AuditNode& node : run.d.audit) {
      if (node.kind != StepKind::kBalanced) continue;
      ++balanced;
      std::vector<std::int64_t> masses;
      for (const VertexSet& c : node.clusters) masses.push_back(run.a.MassOf(c));
      check_step(RunLabel(run), node.mass, run.d.run_phi, node.radius_scale, node.mass_scale,
                 node.winner_mass, masses, node.net.size());
    }
  }

  // Direct calls with every per-vertex scale exposed.
  Rng rng(7007);
  int direct = 0, vertices = 0;
  for (int trial = 0; trial < 20000 && direct < 100; ++trial) {
    int n = 8 + static_cast<int>(rng.Below(14));
    Graph g = oracle::RandomConnected(n, static_cast<int>(rng.Below(n)), rng);
    NodeWeighting a = NodeWeighting::Uniform(n);
    auto flow = SolveExact(g, a);
    Graph metric = g.WithLengths(flow.dual.lengths);
    double phi = (1.0 + 8.0 * rng.Unit()) / flow.dual.objective;
    if (HeavyCore(metric, a, phi)) continue;
    ++direct;
    std::string label = "direct trial " + std::to_string(trial);
    try {
      ScaleParams sp = ComputeScales(a.total(), phi);
      VertexScales vs = ComputeVertexScales(metric, a, sp);
      for (VertexId v : a.Support()) {
        ++vertices;
        if (vs.radius_scale[v] < 1 || vs.radius_scale[v] > sp.levels || vs.mass_scale[v] < 1 ||
            vs.mass_scale[v] > sp.levels) {
          o.Fail(label + ": vertex scale outside [1, L]");
        }
      }
      BalancedStep step = RunBalancedStep(metric, a, sp, vs);
      std::vector<std::int64_t> masses;
      for (const VertexSet& c : step.cover.clusters) masses.push_back(a.MassOf(c));
      check_step(label, a.total(), phi, vs.winner.first, vs.winner.second, vs.winner_mass, masses,
                 step.net.centers.size());
    } catch (const std::exception& e) {
      o.Fail(label + ": " + e.what());
    }
  }
  if (direct == 0) o.Fail("no balanced instances generated");
  std::ostringstream d;
  d << balanced << " balanced steps in corpus runs, " << direct << " direct steps covering "
    << vertices << " vertex scales";
  o.detail = d.str();
  return o;
}

Outcome BaselineComparison() {
  Outcome o;
  std::ostringstream d;
  d << "|C| and overhead ratio, ED vs baseline:";
  for (double scale : {1.0, 3.0}) {
    d << " phi = " << scale << "/log2 n {";
    for (int dim = 4; dim <= 8; ++dim) {
      Graph g = Hypercube(dim);
      NodeWeighting a = NodeWeighting::Degrees(g);
      double phi = scale / dim;
      std::string label = "hypercube-" + std::to_string(dim) + " phi=" + std::to_string(phi);
      try {
        Decomposition ed = Decompose(g, a, phi);
        Decomposition base = CutAndRecurse(g, a, phi);
        DecompositionReport er = VerifyDecomposition(g, a, ed);
        DecompositionReport br = VerifyDecomposition(g, a, base);
        if (er.failed + er.unverified > 0) o.Fail(label + ": ED not verified");
        if (br.failed + br.unverified > 0) o.Fail(label + ": baseline not verified");
        d << " Q" << dim << " " << ed.removed.size() << "/" << base.removed.size() << " "
          << er.overhead.ratio << "/" << br.overhead.ratio << ";";
      } catch (const std::exception& e) {
        o.Fail(label + ": " + e.what());
      }
    }
    d << " }";
  }
  o.detail = d.str();
  return o;
}

Outcome Determinism(const std::vector<CorpusRun>& runs) {
  Outcome o;
  int compared = 0;
  for (const CorpusRun& run : runs) {
    if (!run.error.empty()) continue;
    try {
      Decomposition again = Decompose(run.graph, run.a, run.phi);
      ++compared;
      if (CutText(run.graph, again) != run.cut_text) o.Fail(RunLabel(run) + ": cut file differs");
      if (AuditText(again) != run.audit_text) o.Fail(RunLabel(run) + ": audit differs");
    } catch (const std::exception& e) {
      o.Fail(RunLabel(run) + ": " + e.what());
    }
  }
  o.detail = std::to_string(compared) + " runs repeated, cut and audit bytes compared";
  return o;
}

}  // namespace

int main() {
  double corpus_seconds = 0.0;
  std::vector<CorpusRun> runs = RunCorpus(&corpus_seconds);

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {"component expansion", [&] { return ComponentExpansion(runs, corpus_seconds); }},
      {"overhead bound", [&] { return OverheadBound(runs); }},
      {"sweep cut", [] { return SweepGuarantee(); }},
      {"cover", [] { return CoverGuarantee(); }},
      {"lp duality", [&] { return Duality(runs); }},
      {"two-hop routing and cut expansion", [&] { return TwoHopAndCuts(runs); }},
      {"scale validity", [&] { return ScaleValidity(runs); }},
      {"baseline comparison", [] { return BaselineComparison(); }},
      {"determinism", [&] { return Determinism(runs); }},
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto start = Clock::now();
    Outcome o = criteria[k].run();
    std::printf("criterion %zu (%s): %s  %s [%.1f s]\n", k + 1, criteria[k].name,
                o.pass ? "PASS" : "FAIL", o.detail.c_str(), Seconds(start));
    if (!o.pass) {
      std::printf("  first problem: %s\n", o.first_problem.c_str());
      ++failed;
    }
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
