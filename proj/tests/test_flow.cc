#include <numeric>

#include "doctest.h"
#include "exd/errors.h"
#include "exd/flow_lp.h"
#include "exd/generators.h"
#include "oracles.h"

using namespace exd;

namespace {

Graph K2() { return Hypercube(1); }
Graph Path3() { return Graph(3, {{0, 1}, {1, 2}}); }

// Demand-weighted distance with Floyd-Warshall instead of Dijkstra.
double SpreadByFloyd(const Graph& g, const NodeWeighting& a, std::span<const double> len) {
  const int n = g.vertex_count();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, kInfinity));
  for (int v = 0; v < n; ++v) d[v][v] = 0.0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    auto [u, v] = g.edge(e);
    d[u][v] = d[v][u] = std::min(d[u][v], len[e]);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  double sum = 0.0;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) sum += static_cast<double>(a[u]) * a[v] / a.total() * d[u][v];
  return sum;
}

void CheckCertificates(const Graph& g, const NodeWeighting& a, const ConcurrentFlow& f,
                       double epsilon) {
  double sum = std::accumulate(f.dual.lengths.begin(), f.dual.lengths.end(), 0.0);
  CHECK(sum <= 1.0 + 1e-12);
  for (double l : f.dual.lengths) CHECK(l >= 0.0);
  CHECK(f.dual.objective == doctest::Approx(SpreadByFloyd(g, a, f.dual.lengths)).epsilon(1e-9));
  // Weak duality.
  CHECK(f.dual.objective <= f.primal.kappa * (1.0 + 1e-9));
  CHECK(MaxConservationViolation(g, a, f.primal) <= 1e-9);
  for (double load : f.primal.EdgeLoads(g.edge_count())) {
    CHECK(load <= f.primal.kappa * (1.0 + epsilon) + 1e-12);
  }
}

}  // namespace

TEST_CASE("exact LP examples") {
  auto k2 = SolveExact(K2(), NodeWeighting({1, 1}));
  CHECK(k2.primal.kappa == doctest::Approx(0.5).epsilon(1e-9));
  auto path = SolveExact(Path3(), NodeWeighting({1, 1, 1}));
  CHECK(path.primal.kappa == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(oracle::MetricLpKappa(Path3(), NodeWeighting({1, 1, 1})) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  auto cycle = SolveExact(Hypercube(2), NodeWeighting::Uniform(4));
  CHECK(cycle.primal.kappa == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(oracle::MetricLpKappa(Hypercube(2), NodeWeighting::Uniform(4)) ==
        doctest::Approx(0.5).epsilon(1e-9));
  for (const auto* f : {&k2, &path, &cycle}) {
    CHECK(std::abs(f->primal.kappa - f->dual.objective) <= 1e-6 * std::max(1.0, f->primal.kappa));
  }
}

TEST_CASE("exact LP rejects demand across components") {
  Graph two(4, {{0, 1}, {2, 3}});
  CHECK_THROWS_AS(SolveExact(two, NodeWeighting::Uniform(4)), InfeasibleError);
  CHECK_THROWS_AS(SolveExact(K2(), NodeWeighting({0, 0})), DomainError);
  // Demand confined to one component is fine.
  auto f = SolveExact(two, NodeWeighting({1, 1, 0, 0}));
  CHECK(f.primal.kappa == doctest::Approx(0.5));
}

TEST_CASE("MWU examples") {
  auto a = SolveMwu(K2(), NodeWeighting({1, 1}), 0.1);
  CHECK(a.primal.kappa >= 0.45);
  CHECK(a.primal.kappa <= 0.55);
  auto b = SolveMwu(K2(), NodeWeighting({1, 1}), 0.01);
  CHECK(b.primal.kappa >= 0.495);
  CHECK(b.primal.kappa <= 0.505);
  auto c = SolveMwu(Path3(), NodeWeighting({1, 1, 1}), 0.05);
  CHECK(c.primal.kappa >= 0.633);
  CHECK(c.primal.kappa <= 0.70);
  CHECK(c.dual.objective >= (1.0 - 0.05) * c.primal.kappa);
  CHECK_THROWS_AS(SolveMwu(K2(), NodeWeighting({1, 1}), 0.0), DomainError);
  CHECK_THROWS_AS(SolveMwu(K2(), NodeWeighting({1, 1}), 0.6), DomainError);
}

TEST_CASE("routability gate") {
  SolverOptions exact;
  auto yes = RoutabilityGate(K2(), NodeWeighting({1, 1}), 1.0, exact);
  CHECK(std::holds_alternative<Expanding>(yes));
  auto no = RoutabilityGate(K2(), NodeWeighting({1, 1}), 4.0, exact);
  REQUIRE(std::holds_alternative<NotExpanding>(no));
  const auto& dual = std::get<NotExpanding>(no).dual;
  CHECK(std::accumulate(dual.lengths.begin(), dual.lengths.end(), 0.0) <= 1.0 + 1e-12);
  CHECK(dual.objective >= 0.25);
  auto path = RoutabilityGate(Path3(), NodeWeighting({1, 1, 1}), 3.0, exact);
  CHECK(std::holds_alternative<NotExpanding>(path));
  CHECK_THROWS_AS(RoutabilityGate(K2(), NodeWeighting({1, 1}), 0.0, exact), DomainError);
}

TEST_CASE("property: certificates on random graphs") {
  Rng rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng.Below(7));
    Graph g = oracle::RandomConnected(n, static_cast<int>(rng.Below(n + 2)), rng);
    NodeWeighting a = oracle::RandomWeights(n, 4, rng);
    if (a.Support().size() < 2) continue;
    auto exact = SolveExact(g, a);
    CheckCertificates(g, a, exact, 1e-9);
    CHECK(std::abs(exact.primal.kappa - exact.dual.objective) <=
          1e-6 * std::max(1.0, exact.primal.kappa));
    CHECK(exact.primal.kappa == doctest::Approx(oracle::MetricLpKappa(g, a)).epsilon(1e-6));

    for (double eps : {0.1, 0.05}) {
      auto mwu = SolveMwu(g, a, eps);
      CheckCertificates(g, a, mwu, eps);
      CHECK(mwu.primal.kappa <= exact.primal.kappa * (1.0 + eps));
      CHECK(mwu.primal.kappa >= exact.primal.kappa * (1.0 - 1e-9));
      CHECK(mwu.dual.objective >= exact.primal.kappa / (1.0 + eps));
    }

    double phi = 0.5 / exact.primal.kappa + rng.Unit();
    auto gate = RoutabilityGate(g, a, phi, {});
    if (auto* no = std::get_if<NotExpanding>(&gate)) {
      CHECK(SpreadByFloyd(g, a, no->dual.lengths) >= (1.0 / phi) * (1.0 - 1e-6));
    } else {
      CHECK(std::get<Expanding>(gate).certificate.kappa < 1.0 / phi + 1e-9);
    }
  }
}
