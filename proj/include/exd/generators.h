#ifndef EXD_GENERATORS_H_
#define EXD_GENERATORS_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "exd/graph.h"

namespace exd {

// All seeded generators draw from std::mt19937_64, whose output sequence is
// fixed by the C++ standard. Bounded integers are derived by rejection so the
// stream is reproducible on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, bound).
  std::uint64_t Below(std::uint64_t bound);
  // Uniform in [0, 1) with 53 random bits.
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

// Q_dim: vertex i adjacent to i ^ (1 << b). 1 <= dim <= 16.
Graph Hypercube(int dim);
Graph GridGraph(int rows, int cols);
// Simple d-regular graph on n vertices (pairing model with restarts).
Graph RandomRegular(int n, int d, std::uint64_t seed);
// Two k-cliques joined by a single bridge between vertex 0 and vertex k.
Graph Dumbbell(int k);

// Named corpus entry, e.g. "hypercube:3", "grid:4x5", "regular:32:3:7",
// "dumbbell:4". Ranges like "hypercube:3-6" expand to several entries.
struct CorpusEntry {
  std::string name;
  Graph graph;
};
std::vector<CorpusEntry> ParseCorpus(const std::string& spec, std::uint64_t seed);

}  // namespace exd

#endif  // EXD_GENERATORS_H_
