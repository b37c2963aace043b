#include <algorithm>
#include <cmath>
#include <sstream>

#include "exd/decomp.h"
#include "exd/errors.h"

namespace exd {

ScaleParams ComputeScales(std::int64_t total_mass, double phi) {
  if (total_mass < 2) throw ContractError("scales need |A| >= 2");
  if (!(phi > 0.0)) throw DomainError("phi must be positive");
  ScaleParams sp;
  sp.total_mass = total_mass;
  sp.phi = phi;
  const double mass = static_cast<double>(total_mass);
  const double log_mass = std::log2(mass);
  sp.gamma = std::exp(std::sqrt(std::max(0.0, std::log2(log_mass))));
  if (total_mass == 2) {
    sp.levels = 1;
  } else {
    sp.levels = static_cast<int>(std::ceil(std::log(log_mass) / std::log(sp.gamma))) + 1;
    if (!(std::pow(sp.gamma, sp.levels) > log_mass)) {
      throw InvariantViolation("scales: gamma^L <= log2 |A|");
    }
  }
  for (int i = 0; i <= sp.levels; ++i) {
    sp.deltas.push_back(1.0 / (4.0 * phi * mass * std::pow(8.0, i)));
  }
  // a_{-1} .. a_{L+1}; the extra entry lets MassScale detect overflow.
  for (int j = -1; j <= sp.levels + 1; ++j) {
    sp.mass_thresholds.push_back(mass * std::exp2(-std::pow(sp.gamma, j)));
  }
  return sp;
}

double Beta(std::int64_t total_mass) {
  ScaleParams sp = ComputeScales(std::max<std::int64_t>(total_mass, 2), 1.0);
  double levels = sp.levels;
  return kTotalConstant * std::pow(8.0, levels) * levels * levels * sp.gamma * sp.gamma;
}

double TotalCutBound(std::int64_t total_mass, double phi) {
  if (total_mass <= 1) return 0.0;
  double mass = static_cast<double>(total_mass);
  return phi * Beta(total_mass) * mass * std::log2(mass);
}

int RadiusScale(std::span<const double> ball_mass, double total_mass, double gamma) {
  for (std::size_t i = 1; i < ball_mass.size(); ++i) {
    double now = std::log2(total_mass / ball_mass[i]);
    double before = gamma * std::log2(total_mass / ball_mass[i - 1]);
    if (now <= before + 1e-9 * std::max(1.0, std::abs(before))) return static_cast<int>(i);
  }
  return -1;
}

int MassScale(double mass, const ScaleParams& sp) {
  if (mass > sp.MassThreshold(-1)) return -1;
  for (int j = 0; j <= sp.levels + 1; ++j) {
    if (mass > sp.MassThreshold(j)) return j;
  }
  return sp.levels + 2;
}

VertexScales ComputeVertexScales(const Graph& g, const NodeWeighting& a, const ScaleParams& sp) {
  const int levels = sp.levels;
  const double total = static_cast<double>(a.total());
  VertexScales vs;
  vs.radius_scale.assign(g.vertex_count(), 0);
  vs.mass_scale.assign(g.vertex_count(), 0);
  std::vector<double> ball_mass(levels + 1);
  for (VertexId x : a.Support()) {
    auto dist = ShortestPaths(g, x, sp.Delta(0));
    std::fill(ball_mass.begin(), ball_mass.end(), 0.0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (a[v] == 0) continue;
      for (int i = 0; i <= levels && WithinRadius(dist[v], sp.Delta(i)); ++i) {
        ball_mass[i] += static_cast<double>(a[v]);
      }
    }
    if (2.0 * ball_mass[0] >= total) {
      throw ContractError("vertex scales called while a heavy core exists");
    }
    int i = RadiusScale(ball_mass, total, sp.gamma);
    if (i < 1 || i > levels) {
      std::ostringstream msg;
      msg << "radius scale of vertex " << x << " outside [1, " << levels << "]";
      throw InvariantViolation(msg.str());
    }
    int j = MassScale(ball_mass[i], sp);
    if (j < 1 || j > levels) {
      std::ostringstream msg;
      msg << "mass scale of vertex " << x << " is " << j << ", outside [1, " << levels << "]";
      throw InvariantViolation(msg.str());
    }
    vs.radius_scale[x] = i;
    vs.mass_scale[x] = j;
    vs.classes[{i, j}].push_back(x);
  }
  for (const auto& [key, members] : vs.classes) {
    std::int64_t mass = a.MassOf(members);
    if (mass > vs.winner_mass) {
      vs.winner_mass = mass;
      vs.winner = key;
    }
  }
  if (vs.winner_mass * static_cast<std::int64_t>(levels) * levels < a.total()) {
    throw InvariantViolation("winning scale class lighter than |A| / L^2");
  }
  return vs;
}

BalancedStep RunBalancedStep(const Graph& g, const NodeWeighting& a, const ScaleParams& sp,
                             const VertexScales& vs) {
  auto [i_star, j_star] = vs.winner;
  const VertexSet& candidates = vs.classes.at(vs.winner);
  const double total = static_cast<double>(a.total());
  const double delta = sp.Delta(i_star);

  BalancedStep step;
  step.net = BuildNet(g, candidates, delta);
  CheckNet(g, candidates, step.net);
  step.cover = Cluster(g, step.net.centers, 2.0 * delta);
  CheckCover(g, step.cover);
  step.removed = step.cover.boundary;
  step.remainder = Complement(g.vertex_count(), step.cover.Covered());

  auto fail = [&](const std::string& what, double lhs, double rhs) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "balanced step: " << what << " (" << lhs << " vs " << rhs << ")";
    throw InvariantViolation(msg.str());
  };
  const double slack = 1.0 + 1e-9;
  double covered = static_cast<double>(a.MassOf(step.cover.Covered()));
  double levels_sq = static_cast<double>(sp.levels) * sp.levels;
  if (covered * levels_sq < total) fail("A(V(S)) >= |A| / L^2", covered, total / levels_sq);
  const double cluster_cap = sp.MassThreshold(j_star - 2);
  for (const auto& s : step.cover.clusters) {
    double m = static_cast<double>(a.MassOf(s));
    if (m > cluster_cap * slack) fail("cluster mass <= a_{j*-2}", m, cluster_cap);
  }
  double net_size = static_cast<double>(step.net.centers.size());
  if (net_size * sp.MassThreshold(j_star) > total * slack) {
    fail("|N| <= |A| / a_{j*}", net_size, total / sp.MassThreshold(j_star));
  }
  double bound = kBalancedConstant * sp.phi * std::pow(8.0, sp.levels) * sp.gamma * sp.gamma *
                 total * std::pow(sp.gamma, j_star - 2);
  if (static_cast<double>(step.cover.boundary_count) > bound * slack) {
    fail("sum |delta(S)| <= c0 phi 8^L gamma^2 |A| log(|A| / a_{j*-2})",
         static_cast<double>(step.cover.boundary_count), bound);
  }
  return step;
}

}  // namespace exd
