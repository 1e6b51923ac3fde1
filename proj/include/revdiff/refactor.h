#ifndef REVDIFF_REFACTOR_H_
#define REVDIFF_REFACTOR_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string_view>
#include <vector>

namespace revdiff {

// A match edge between 1-based old and new sentence indices. The canonical
// edge order is (old_idx, new_idx) ascending.
struct Edge {
  std::size_t old_idx = 0;
  std::size_t new_idx = 0;

  auto operator<=>(const Edge&) const = default;
};

// (a - c)(b - d) < 0. Edges that share an endpoint never cross.
bool crossing_of(Edge e1, Edge e2);

// Edge -> every edge it crosses, both in canonical order. Edges without
// crossings are absent.
using CrossingMap = std::map<Edge, std::vector<Edge>>;

// Pairwise O(E^2) construction.
CrossingMap find_crossings(std::span<const Edge> edges);

// Number of crossing pairs by inversion counting over new indices, O(E log E).
std::uint64_t count_crossings(std::span<const Edge> edges);

enum class Direction { kUp, kDown };

std::string_view to_string(Direction d);

// kUp iff new_idx < old_idx.
Direction refactor_direction(Edge e);

struct RemovedEdge {
  Edge edge;
  Direction direction = Direction::kDown;
  // Crossings the edge still had when it was picked.
  std::size_t crossings = 0;
};

struct RefactorSet {
  std::vector<RemovedEdge> removed;  // in removal order

  std::vector<Edge> edges() const;
};

// Greedy crossing elimination: repeatedly remove the edge with the most
// crossings, then the longest |new - old|, then an upward mover, then the
// first in canonical order.
RefactorSet identify_refactors(std::span<const Edge> edges);

// Largest input accepted by min_removal_bruteforce.
inline constexpr std::size_t kBruteforceEdgeLimit = 20;

// Smallest edge subset whose removal leaves no crossings; among equal sizes
// the lexicographically first in canonical order. Exponential.
std::vector<Edge> min_removal_bruteforce(std::span<const Edge> edges);

}  // namespace revdiff

#endif  // REVDIFF_REFACTOR_H_
