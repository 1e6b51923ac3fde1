#include "revdiff/refactor.h"

#include <algorithm>
#include <cstdint>
#include <set>

#include "revdiff/error.h"

namespace revdiff {

namespace {

std::ptrdiff_t signed_index(std::size_t v) { return static_cast<std::ptrdiff_t>(v); }

std::size_t distance(Edge e) {
  return e.new_idx > e.old_idx ? e.new_idx - e.old_idx : e.old_idx - e.new_idx;
}

std::vector<Edge> canonical(std::span<const Edge> edges) {
  std::vector<Edge> out(edges.begin(), edges.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Fenwick tree over 1-based positions.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t pos) {
    for (; pos < tree_.size(); pos += pos & (~pos + 1)) ++tree_[pos];
  }
  std::uint64_t prefix(std::size_t pos) const {
    std::uint64_t s = 0;
    for (; pos > 0; pos -= pos & (~pos + 1)) s += tree_[pos];
    return s;
  }

 private:
  std::vector<std::uint64_t> tree_;
};

}  // namespace

bool crossing_of(Edge e1, Edge e2) {
  const auto da = signed_index(e1.old_idx) - signed_index(e2.old_idx);
  const auto db = signed_index(e1.new_idx) - signed_index(e2.new_idx);
  return (da < 0 && db > 0) || (da > 0 && db < 0);
}

CrossingMap find_crossings(std::span<const Edge> edges) {
  const std::vector<Edge> sorted = canonical(edges);
  CrossingMap map;
  for (std::size_t a = 0; a < sorted.size(); ++a) {
    for (std::size_t b = a + 1; b < sorted.size(); ++b) {
      if (!crossing_of(sorted[a], sorted[b])) continue;
      map[sorted[a]].push_back(sorted[b]);
      map[sorted[b]].push_back(sorted[a]);
    }
  }
  for (auto& [edge, partners] : map) std::sort(partners.begin(), partners.end());
  return map;
}

std::uint64_t count_crossings(std::span<const Edge> edges) {
  const std::vector<Edge> sorted = canonical(edges);
  std::size_t max_new = 0;
  for (const auto& e : sorted) max_new = std::max(max_new, e.new_idx);
  // Visiting edges by ascending old index (then new), an earlier edge crosses
  // the current one iff its new index is strictly larger. Earlier edges with
  // the same old index have a smaller or equal new index, so they never count.
  Fenwick seen(max_new + 1);
  std::uint64_t total = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const std::size_t pos = sorted[k].new_idx + 1;
    total += static_cast<std::uint64_t>(k) - seen.prefix(pos);
    seen.add(pos);
  }
  return total;
}

std::string_view to_string(Direction d) { return d == Direction::kUp ? "up" : "down"; }

Direction refactor_direction(Edge e) {
  return e.new_idx < e.old_idx ? Direction::kUp : Direction::kDown;
}

std::vector<Edge> RefactorSet::edges() const {
  std::vector<Edge> out;
  out.reserve(removed.size());
  for (const auto& r : removed) out.push_back(r.edge);
  return out;
}

RefactorSet identify_refactors(std::span<const Edge> edges) {
  std::map<Edge, std::set<Edge>> live;
  for (const auto& [edge, partners] : find_crossings(edges)) {
    live[edge] = std::set<Edge>(partners.begin(), partners.end());
  }

  RefactorSet result;
  std::vector<Edge> candidates;
  while (!live.empty()) {
    std::size_t most = 0;
    for (const auto& [edge, partners] : live) most = std::max(most, partners.size());
    candidates.clear();
    for (const auto& [edge, partners] : live) {
      if (partners.size() == most) candidates.push_back(edge);
    }
    if (candidates.size() > 1) {
      std::size_t longest = 0;
      for (const auto& e : candidates) longest = std::max(longest, distance(e));
      std::erase_if(candidates, [&](const Edge& e) { return distance(e) != longest; });
      if (candidates.size() > 1 &&
          std::any_of(candidates.begin(), candidates.end(), [](const Edge& e) {
            return refactor_direction(e) == Direction::kUp;
          })) {
        std::erase_if(candidates, [](const Edge& e) {
          return refactor_direction(e) != Direction::kUp;
        });
      }
    }
    const Edge pick = candidates.front();
    result.removed.push_back({pick, refactor_direction(pick), most});
    for (const Edge& partner : live[pick]) {
      auto it = live.find(partner);
      it->second.erase(pick);
      if (it->second.empty()) live.erase(it);
    }
    live.erase(pick);
  }
  return result;
}

std::vector<Edge> min_removal_bruteforce(std::span<const Edge> edges) {
  const std::vector<Edge> sorted = canonical(edges);
  const std::size_t n = sorted.size();
  if (n > kBruteforceEdgeLimit) {
    throw InvalidArgument("brute-force refactor search is limited to " +
                          std::to_string(kBruteforceEdgeLimit) + " edges");
  }
  std::vector<std::pair<std::size_t, std::size_t>> crossing_pairs;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (crossing_of(sorted[a], sorted[b])) crossing_pairs.emplace_back(a, b);
    }
  }
  auto clears_all = [&](std::uint32_t removed) {
    for (const auto& [a, b] : crossing_pairs) {
      if (((removed >> a) & 1u) == 0 && ((removed >> b) & 1u) == 0) return false;
    }
    return true;
  };

  // Combinations of each size in lexicographic order of edge positions.
  for (std::size_t k = 0; k <= n; ++k) {
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      std::uint32_t mask = 0;
      for (std::size_t p : pick) mask |= 1u << p;
      if (clears_all(mask)) {
        std::vector<Edge> out;
        for (std::size_t p : pick) out.push_back(sorted[p]);
        return out;
      }
      std::size_t i = k;
      while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t r = i; r < k; ++r) pick[r] = pick[r - 1] + 1;
    }
  }
  return sorted;
}

}  // namespace revdiff
