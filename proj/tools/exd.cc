// Command-line front end: decompose, verify, bench, generate.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "exd/decomp.h"
#include "exd/errors.h"
#include "exd/generators.h"
#include "exd/verify.h"

namespace fs = std::filesystem;
using namespace exd;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitInvariant = 3;

struct Common {
  std::string graph;
  std::string weights;
  double phi = 0.0;
  std::string solver;
  double epsilon = 0.05;
  bool inflate_phi = false;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
};

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  return in;
}

std::ofstream OpenOutput(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

// Parse errors carry the file name so the line number is actionable.
template <typename F>
auto Parsing(const std::string& path, F&& read) {
  try {
    return read();
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

Graph LoadGraph(const std::string& path) {
  auto in = OpenInput(path);
  return Parsing(path, [&] { return ReadEdgeList(in); });
}

NodeWeighting LoadWeights(const std::string& path, const Graph& g) {
  if (path.empty()) return NodeWeighting::Degrees(g);
  auto in = OpenInput(path);
  return Parsing(path, [&] { return ReadNodeWeighting(in, g.vertex_count()); });
}

DecompOptions MakeOptions(const Common& c) {
  DecompOptions options;
  options.epsilon = c.epsilon;
  options.inflate_phi = c.inflate_phi;
  if (c.solver == "exact") options.solver = SolverKind::kExact;
  if (c.solver == "mwu") options.solver = SolverKind::kMwu;
  if (c.solver == "mwu" && !(c.epsilon > 0.0)) throw ConfigError("mwu needs --epsilon > 0");
  return options;
}

std::string Stem(const std::string& path) { return fs::path(path).stem().string(); }

std::string Fixed(double x) {
  if (std::isinf(x)) return "inf";
  std::ostringstream s;
  s.precision(12);
  s << x;
  return s.str();
}

int Decompose(const Common& c, bool baseline) {
  Graph g = LoadGraph(c.graph);
  NodeWeighting a = LoadWeights(c.weights, g);
  DecompOptions options = MakeOptions(c);
  auto d = baseline ? CutAndRecurse(g, a, c.phi, options) : exd::Decompose(g, a, c.phi, options);
  fs::path dir(c.out_dir);
  fs::path cut_path = dir / (Stem(c.graph) + ".cut");
  fs::path audit_path = dir / (Stem(c.graph) + ".audit.json");
  {
    auto out = OpenOutput(cut_path);
    WriteCut(out, g, d);
  }
  {
    auto out = OpenOutput(audit_path);
    WriteAudit(out, d);
  }
  std::cout << "removed " << d.removed.size() << " of " << g.edge_count() << " edges, "
            << d.components.size() << " components, depth " << d.max_depth << "\n"
            << "cut: " << cut_path.string() << "\naudit: " << audit_path.string() << "\n";
  return 0;
}

int Verify(const Common& c, const std::string& cut_path, const std::string& audit_path,
           bool strict, int exact_limit) {
  Graph g = LoadGraph(c.graph);
  NodeWeighting a = LoadWeights(c.weights, g);
  std::vector<EdgeId> cut;
  {
    auto in = OpenInput(cut_path);
    cut = Parsing(cut_path, [&] { return ReadCut(in, g); });
  }
  Decomposition d;
  {
    auto in = OpenInput(audit_path);
    d = Parsing(audit_path, [&] { return ReadAudit(in); });
  }
  if (cut != d.removed) throw IntegrityError("cut file does not match the audit's removed edges");
  VerifyOptions options;
  options.exact_vertex_limit = exact_limit;
  DecompositionReport report = VerifyDecomposition(g, a, d, options);
  std::cout << "# exd-verify v1\n"
            << "cut_size " << report.overhead.cut_size << "\n"
            << "bound " << Fixed(report.overhead.bound) << "\n"
            << "overhead_ratio " << Fixed(report.overhead.ratio) << "\n"
            << "realized_beta " << Fixed(report.overhead.realized_beta) << "\n"
            << "beta_bound " << Fixed(report.overhead.beta_bound) << "\n"
            << "certified_phi " << Fixed(report.certified_phi) << "\n"
            << "components " << report.components.size() << " certified " << report.certified
            << " failed " << report.failed << " unverified " << report.unverified << "\n";
  for (const auto& r : report.components) {
    std::cout << "component first=" << r.component.front() << " size=" << r.component.size()
              << " verdict=" << VerdictName(r.verdict) << " kappa=" << Fixed(r.kappa_product)
              << " flow_expanding_at=" << Fixed(r.flow_expanding_at);
    if (r.cut_expanding_at) std::cout << " cut_expanding_at=" << Fixed(*r.cut_expanding_at);
    std::cout << "\n";
  }
  if (report.failed > 0) {
    spdlog::error("{} component(s) failed the expansion check", report.failed);
    return kExitInvariant;
  }
  if (report.unverified > 0) {
    spdlog::warn("{} component(s) too large for the exact check", report.unverified);
    if (strict) return kExitInvariant;
  }
  return 0;
}

std::vector<double> PhiGrid(const std::vector<double>& given) {
  if (!given.empty()) return given;
  std::vector<double> grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(std::ldexp(1.0, -k));
  return grid;
}

int Bench(const Common& c, const std::string& corpus, const std::vector<double>& phis,
          const std::string& csv, bool verify) {
  std::ofstream file;
  if (!csv.empty()) file = OpenOutput(csv);
  std::ostream& out = csv.empty() ? std::cout : file;
  out << "instance,n,m,phi,algorithm,cut,ratio,seconds,depth,certified,failed,unverified\n";
  DecompOptions options = MakeOptions(c);
  int failures = 0;
  for (const CorpusEntry& entry : ParseCorpus(corpus, c.seed)) {
    NodeWeighting a = NodeWeighting::Degrees(entry.graph);
    for (double phi : PhiGrid(phis)) {
      for (bool baseline : {false, true}) {
        auto start = std::chrono::steady_clock::now();
        auto d = baseline ? CutAndRecurse(entry.graph, a, phi, options)
                          : exd::Decompose(entry.graph, a, phi, options);
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        auto overhead = AuditOverhead(entry.graph, a, d);
        std::string counts = ",,";
        if (verify) {
          auto report = VerifyDecomposition(entry.graph, a, d);
          failures += report.failed;
          counts = std::to_string(report.certified) + "," + std::to_string(report.failed) + "," +
                   std::to_string(report.unverified);
        }
        out << entry.name << ',' << entry.graph.vertex_count() << ','
            << entry.graph.edge_count() << ',' << Fixed(phi) << ','
            << (baseline ? "baseline" : "ed") << ',' << d.removed.size() << ','
            << Fixed(overhead.ratio) << ',' << Fixed(seconds) << ',' << d.max_depth << ','
            << counts << "\n";
        out.flush();
      }
    }
  }
  return failures > 0 ? kExitInvariant : 0;
}

int Generate(const std::string& corpus, std::uint64_t seed, const std::string& out_dir) {
  for (const CorpusEntry& entry : ParseCorpus(corpus, seed)) {
    fs::path path = fs::path(out_dir) / (entry.name + ".el");
    auto out = OpenOutput(path);
    WriteEdgeList(out, entry.graph);
    std::cout << path.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_st("exd"));
  spdlog::set_level(spdlog::level::warn);
  spdlog::cfg::load_env_levels();  // SPDLOG_LEVEL=debug etc.

  CLI::App app{"Flow-expander decompositions with independent verification"};
  app.require_subcommand(1);
  Common c;
  auto add_graph = [&](CLI::App* cmd) {
    cmd->add_option("--graph", c.graph, "edge list (u v per line)")->required();
    cmd->add_option("--weights", c.weights, "node weighting (default: degrees)");
  };
  auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--solver", c.solver, "force the LP solver for every call")
        ->check(CLI::IsMember({"exact", "mwu"}));
    cmd->add_option("--epsilon", c.epsilon, "MWU accuracy")->check(CLI::Range(0.0, 0.5));
    cmd->add_flag("--inflate-phi", c.inflate_phi, "run at phi / (1 - epsilon)");
    cmd->add_option("--seed", c.seed, "seed for generated instances");
  };

  auto* decompose = app.add_subcommand("decompose", "decompose a graph");
  add_graph(decompose);
  add_solver(decompose);
  decompose->add_option("--phi", c.phi, "target expansion")->required()->check(CLI::PositiveNumber);
  decompose->add_option("--out-dir", c.out_dir, "where to write .cut and .audit.json");
  bool baseline = false;
  decompose->add_flag("--baseline", baseline, "use the cut-and-recurse baseline");

  auto* verify = app.add_subcommand("verify", "check a stored decomposition");
  add_graph(verify);
  std::string cut_path, audit_path;
  bool strict = false;
  int exact_limit = 256;
  verify->add_option("--cut", cut_path, "cut file")->required();
  verify->add_option("--audit", audit_path, "audit file")->required();
  verify->add_flag("--strict", strict, "treat unverified components as failures");
  verify->add_option("--exact-limit", exact_limit, "largest component solved exactly");

  auto* bench = app.add_subcommand("bench", "compare against the cut-and-recurse baseline");
  add_solver(bench);
  std::string corpus, csv;
  std::vector<double> phis;
  bool bench_verify = false;
  bench->add_option("--corpus", corpus, "e.g. hypercube:3-8,grid:4x4")->required();
  bench->add_option("--phi", phis, "phi grid (default 2^-k, k = 0..10)");
  bench->add_option("--csv", csv, "output file (default stdout)");
  bench->add_flag("--verify", bench_verify, "run the exact expansion checker on every run");

  auto* generate = app.add_subcommand("generate", "write corpus graphs as edge lists");
  generate->add_option("--corpus", corpus, "corpus specification")->required();
  generate->add_option("--seed", c.seed, "seed for random instances");
  generate->add_option("--out-dir", c.out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*decompose) return Decompose(c, baseline);
    if (*verify) return Verify(c, cut_path, audit_path, strict, exact_limit);
    if (*bench) return Bench(c, corpus, phis, csv, bench_verify);
    if (*generate) return Generate(corpus, c.seed, c.out_dir);
  } catch (const ParseError& e) {
    spdlog::error("parse error: {}", e.what());
    return kExitParse;
  } catch (const InvariantViolation& e) {
    spdlog::error("invariant violation: {}", e.what());
    return kExitInvariant;
  } catch (const IntegrityError& e) {
    spdlog::error("integrity error: {}", e.what());
    return kExitInvariant;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
