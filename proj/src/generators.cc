#include "exd/generators.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <utility>

#include "exd/errors.h"

namespace exd {

std::uint64_t Rng::Below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("empty range");
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

Graph Hypercube(int dim) {
  if (dim < 1 || dim > 16) throw DomainError("hypercube dimension must be in [1, 16]");
  int n = 1 << dim;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(dim) * n / 2);
  for (int v = 0; v < n; ++v) {
    for (int b = 0; b < dim; ++b) {
      int w = v ^ (1 << b);
      if (v < w) edges.push_back({v, w});
    }
  }
  return Graph(n, std::move(edges));
}

Graph GridGraph(int rows, int cols) {
  if (rows < 1 || cols < 1) throw DomainError("grid dimensions must be positive");
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      int v = r * cols + c;
      if (c + 1 < cols) edges.push_back({v, v + 1});
      if (r + 1 < rows) edges.push_back({v, v + cols});
    }
  }
  return Graph(rows * cols, std::move(edges));
}

Graph RandomRegular(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 0 || d >= n) throw DomainError("need 0 <= d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0) throw DomainError("n * d must be even");
  Rng rng(seed);
  constexpr int kMaxRestarts = 100000;
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    std::vector<VertexId> points;
    points.reserve(static_cast<std::size_t>(n) * d);
    for (int v = 0; v < n; ++v) {
      for (int k = 0; k < d; ++k) points.push_back(v);
    }
    // Fisher-Yates, then pair consecutive points.
    for (std::size_t i = points.size(); i > 1; --i) {
      std::swap(points[i - 1], points[rng.Below(i)]);
    }
    std::set<std::pair<VertexId, VertexId>> seen;
    std::vector<Edge> edges;
    bool simple = true;
    for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
      VertexId u = std::min(points[i], points[i + 1]);
      VertexId v = std::max(points[i], points[i + 1]);
      if (u == v || !seen.insert({u, v}).second) {
        simple = false;
        break;
      }
      edges.push_back({u, v});
    }
    if (!simple) continue;
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    return Graph(n, std::move(edges));
  }
  throw DomainError("failed to sample a simple regular graph");
}

Graph Dumbbell(int k) {
  if (k < 1) throw DomainError("dumbbell clique size must be positive");
  std::vector<Edge> edges;
  for (int side = 0; side < 2; ++side) {
    int base = side * k;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) edges.push_back({base + i, base + j});
    }
  }
  edges.push_back({0, k});
  return Graph(2 * k, std::move(edges));
}

namespace {

std::vector<std::string> Split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int ToInt(const std::string& s) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw DomainError("bad integer in corpus spec: " + s);
  }
  if (used != s.size()) throw DomainError("bad integer in corpus spec: " + s);
  return value;
}

// "a" or "a-b".
std::pair<int, int> ToRange(const std::string& s) {
  auto dash = s.find('-');
  if (dash == std::string::npos) {
    int v = ToInt(s);
    return {v, v};
  }
  return {ToInt(s.substr(0, dash)), ToInt(s.substr(dash + 1))};
}

}  // namespace

std::vector<CorpusEntry> ParseCorpus(const std::string& spec, std::uint64_t seed) {
  std::vector<CorpusEntry> out;
  for (const std::string& item : Split(spec, ',')) {
    auto parts = Split(item, ':');
    if (parts.size() < 2) throw DomainError("bad corpus entry: " + item);
    const std::string& kind = parts[0];
    if (kind == "hypercube" && parts.size() == 2) {
      auto [lo, hi] = ToRange(parts[1]);
      for (int d = lo; d <= hi; ++d) {
        out.push_back({"hypercube-" + std::to_string(d), Hypercube(d)});
      }
    } else if (kind == "grid" && parts.size() == 2) {
      auto dims = Split(parts[1], 'x');
      if (dims.size() != 2) throw DomainError("grid entry needs RxC: " + item);
      int r = ToInt(dims[0]), c = ToInt(dims[1]);
      out.push_back({"grid-" + dims[0] + "x" + dims[1], GridGraph(r, c)});
    } else if (kind == "regular" && (parts.size() == 3 || parts.size() == 4)) {
      int n = ToInt(parts[1]), d = ToInt(parts[2]);
      std::uint64_t s = parts.size() == 4 ? static_cast<std::uint64_t>(ToInt(parts[3])) : seed;
      out.push_back({"regular-" + parts[1] + "-" + parts[2] + "-s" + std::to_string(s),
                     RandomRegular(n, d, s)});
    } else if (kind == "dumbbell" && parts.size() == 2) {
      auto [lo, hi] = ToRange(parts[1]);
      for (int k = lo; k <= hi; ++k) {
        out.push_back({"dumbbell-" + std::to_string(k), Dumbbell(k)});
      }
    } else {
      throw DomainError("unknown corpus entry: " + item);
    }
  }
  return out;
}

}  // namespace exd
