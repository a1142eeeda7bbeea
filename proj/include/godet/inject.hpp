#pragma once

#include <cstdint>
#include <vector>

#include "godet/graph.hpp"

namespace godet {

enum class InjectionKind { structural, attribute };

struct InjectionResult {
  Graph graph;
  std::vector<int> y;  // 1 = injected outlier
  InjectionKind kind;
};

/// Samples clique_count disjoint groups of clique_size nodes (seeded,
/// uniform) and adds all missing intra-group edges. Features untouched.
InjectionResult gen_structural_outliers(const Graph& g, std::size_t clique_size,
                                        std::size_t clique_count, std::uint64_t seed);

/// Samples target_count distinct nodes; each target's features are
/// overwritten with those of the most distant of pool_size sampled
/// candidates (pre-injection features, lowest-id tie-break). Edges
/// untouched.
InjectionResult gen_attribute_outliers(const Graph& g, std::size_t target_count,
                                       std::size_t pool_size, std::uint64_t seed);

constexpr std::size_t kDefaultCandidatePool = 50;

}  // namespace godet
