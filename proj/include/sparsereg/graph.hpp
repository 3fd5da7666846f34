#pragma once

#include <vector>

namespace sparsereg {

struct WeightedEdge {
  int u = 0;
  int v = 0;
  long weight = 1;
};

/// Simple undirected graph; vertices are 0..vertices-1.
struct WeightedGraph {
  int vertices = 0;
  std::vector<WeightedEdge> edges;

  long total_weight() const {
    long s = 0;
    for (const auto& e : edges) s += e.weight;
    return s;
  }
};

}  // namespace sparsereg
