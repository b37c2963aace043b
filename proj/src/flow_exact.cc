#include <algorithm>
#include <cmath>
#include <numeric>

#include "Highs.h"
#include "exd/errors.h"
#include "exd/flow_lp.h"
#include "flow_internal.h"

namespace exd {
namespace {

// Columns: f[k][arc] for every commodity and arc, then kappa.
// Rows: conservation for every (commodity, vertex), then one capacity row
// per edge: sum_k f[k][2e] + f[k][2e+1] - kappa <= 0.
HighsLp BuildLp(const Graph& g, const internal::GroupedDemand& problem) {
  const int n = g.vertex_count();
  const int m = g.edge_count();
  const int commodities = static_cast<int>(problem.sources.size());
  const int arcs = 2 * m;
  const int cons_rows = commodities * n;

  HighsLp lp;
  lp.num_col_ = commodities * arcs + 1;
  lp.num_row_ = cons_rows + m;
  lp.sense_ = ObjSense::kMinimize;
  lp.col_cost_.assign(lp.num_col_, 0.0);
  lp.col_cost_.back() = 1.0;
  lp.col_lower_.assign(lp.num_col_, 0.0);
  lp.col_upper_.assign(lp.num_col_, kHighsInf);

  lp.row_lower_.assign(lp.num_row_, 0.0);
  lp.row_upper_.assign(lp.num_row_, 0.0);
  for (int k = 0; k < commodities; ++k) {
    double supply = 0.0;
    for (const auto& sink : problem.sinks[k]) {
      lp.row_lower_[k * n + sink.vertex] = lp.row_upper_[k * n + sink.vertex] = -sink.demand;
      supply += sink.demand;
    }
    int row = k * n + problem.sources[k];
    lp.row_lower_[row] = lp.row_upper_[row] = supply;
  }
  for (int e = 0; e < m; ++e) lp.row_lower_[cons_rows + e] = -kHighsInf;

  auto& a = lp.a_matrix_;
  a.format_ = MatrixFormat::kColwise;
  a.num_col_ = lp.num_col_;
  a.num_row_ = lp.num_row_;
  a.start_.assign(1, 0);
  a.start_.reserve(lp.num_col_ + 1);
  a.index_.reserve(3 * static_cast<std::size_t>(commodities) * arcs + m);
  a.value_.reserve(a.index_.capacity());
  for (int k = 0; k < commodities; ++k) {
    for (int e = 0; e < m; ++e) {
      const Edge& edge = g.edge(e);
      for (int dir = 0; dir < 2; ++dir) {
        VertexId tail = dir == 0 ? edge.u : edge.v;
        VertexId head = dir == 0 ? edge.v : edge.u;
        // Row indices must be ascending within a column.
        std::pair<int, double> entries[3] = {
            {k * n + tail, 1.0}, {k * n + head, -1.0}, {cons_rows + e, 1.0}};
        std::sort(std::begin(entries), std::end(entries));
        for (auto [row, value] : entries) {
          a.index_.push_back(row);
          a.value_.push_back(value);
        }
        a.start_.push_back(static_cast<HighsInt>(a.index_.size()));
      }
    }
  }
  for (int e = 0; e < m; ++e) {
    a.index_.push_back(cons_rows + e);
    a.value_.push_back(-1.0);
  }
  a.start_.push_back(static_cast<HighsInt>(a.index_.size()));
  return lp;
}

}  // namespace

ConcurrentFlow SolveExact(const Graph& g, const NodeWeighting& a) {
  auto problem = internal::BuildProblem(g, a);
  const int n = g.vertex_count();
  const int m = g.edge_count();
  ConcurrentFlow out;
  out.primal.sources = problem.sources;
  if (problem.sources.empty() || m == 0) {
    out.dual.lengths.assign(m, m > 0 ? 1.0 / m : 0.0);
    return out;
  }

  Highs highs;
  highs.setOptionValue("output_flag", false);
  highs.setOptionValue("threads", 1);
  highs.setOptionValue("random_seed", 0);
  // Interior point with crossover is far faster than simplex on these
  // degenerate multicommodity LPs and still returns a vertex solution.
  highs.setOptionValue("solver", std::string("ipm"));
  highs.setOptionValue("run_crossover", std::string("on"));
  highs.setOptionValue("primal_feasibility_tolerance", 1e-10);
  highs.setOptionValue("dual_feasibility_tolerance", 1e-10);
  if (highs.passModel(BuildLp(g, problem)) != HighsStatus::kOk) {
    throw SolverError("exact LP: model rejected", out);
  }
  highs.run();
  if (highs.getModelStatus() != HighsModelStatus::kOptimal) {
    highs.setOptionValue("solver", std::string("simplex"));
    highs.clearSolver();
    highs.run();
  }
  if (highs.getModelStatus() != HighsModelStatus::kOptimal) {
    throw SolverError("exact LP: " + highs.modelStatusToString(highs.getModelStatus()), out);
  }
  const HighsSolution& sol = highs.getSolution();
  const int commodities = static_cast<int>(problem.sources.size());
  const int cons_rows = commodities * n;

  out.primal.arc_flow.resize(commodities);
  for (int k = 0; k < commodities; ++k) {
    auto first = sol.col_value.begin() + static_cast<std::ptrdiff_t>(k) * 2 * m;
    out.primal.arc_flow[k].assign(first, first + 2 * m);
    for (double& f : out.primal.arc_flow[k]) f = std::max(f, 0.0);
  }
  auto loads = out.primal.EdgeLoads(m);
  out.primal.kappa = *std::max_element(loads.begin(), loads.end());

  std::vector<double> lengths(m);
  for (int e = 0; e < m; ++e) lengths[e] = std::abs(sol.row_dual[cons_rows + e]);
  double sum = std::accumulate(lengths.begin(), lengths.end(), 0.0);
  if (!(sum > 0.0)) throw SolverError("exact LP: degenerate dual", out);
  for (double& l : lengths) l /= sum;
  out.dual.objective = DemandWeightedDistance(g, a, lengths);
  out.dual.lengths = std::move(lengths);
  return out;
}

}  // namespace exd
