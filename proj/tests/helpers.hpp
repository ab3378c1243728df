#ifndef DTOP_TESTS_HELPERS_HPP
#define DTOP_TESTS_HELPERS_HPP

#include <algorithm>
#include <numeric>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include <dtop/image.hpp>
#include <dtop/maps.hpp>

namespace helpers {

inline dtop::DigitalImage cycle(int n) {
  std::vector<std::pair<dtop::VertexId, dtop::VertexId>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return dtop::DigitalImage(n, edges);
}

inline dtop::DigitalImage complete(int n) {
  std::vector<std::pair<dtop::VertexId, dtop::VertexId>> edges;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) edges.emplace_back(a, b);
  return dtop::DigitalImage(n, edges);
}

inline dtop::DigitalImage path(int n) {
  std::vector<std::pair<dtop::VertexId, dtop::VertexId>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return dtop::DigitalImage(n, edges);
}

inline dtop::DigitalImage discrete(int n) { return dtop::DigitalImage(n); }

// The 6-point image: a 5-cycle 0..4 with the extra point 5 adjacent to 3 and 0.
inline dtop::DigitalImage five_twist() {
  return dtop::DigitalImage(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {3, 5}, {5, 0}});
}

inline dtop::DigitalImage random_image(std::mt19937& rng, int n) {
  std::vector<std::pair<dtop::VertexId, dtop::VertexId>> edges;
  std::bernoulli_distribution coin(0.5);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (coin(rng)) edges.emplace_back(a, b);
  return dtop::DigitalImage(n, edges);
}

// Independent count of isomorphism classes of graphs on n vertices: canonical
// form = minimum edge mask over all vertex permutations, counted into a set.
inline int count_unlabeled_graphs(int n) {
  const int npairs = n * (n - 1) / 2;
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  auto index_of = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    for (size_t i = 0; i < pairs.size(); ++i)
      if (pairs[i] == std::make_pair(a, b)) return static_cast<int>(i);
    return -1;
  };
  std::set<unsigned> canon;
  std::vector<int> perm(n);
  for (unsigned mask = 0; mask < (1u << npairs); ++mask) {
    unsigned best = mask;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      unsigned relabeled = 0;
      for (int i = 0; i < npairs; ++i)
        if (mask >> i & 1u) relabeled |= 1u << index_of(perm[pairs[i].first], perm[pairs[i].second]);
      best = std::min(best, relabeled);
    } while (std::next_permutation(perm.begin(), perm.end()));
    canon.insert(best);
  }
  return static_cast<int>(canon.size());
}

// Random NP-continuous multiplication table on Z, by backtracking with
// shuffled candidate values. The product rule is restated directly here.
inline std::vector<dtop::VertexId> random_continuous_mult(std::mt19937& rng,
                                                          const dtop::DigitalImage& Z,
                                                          dtop::NPCategory cat) {
  const int n = Z.size();
  std::vector<dtop::VertexId> table(static_cast<size_t>(n) * n, -1);
  auto cell_adjacent = [&](int c1, int c2) {
    int a = c1 / n, b = c1 % n, c = c2 / n, d = c2 % n;
    if (cat == dtop::NPCategory::np1) {
      return (a == c && Z.adjacent(b, d)) || (b == d && Z.adjacent(a, c));
    }
    return Z.adjacent(a, c) && Z.adjacent(b, d);
  };
  std::vector<dtop::VertexId> order(n);
  std::function<bool(int)> rec = [&](int cell) -> bool {
    if (cell == n * n) return true;
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (dtop::VertexId v : order) {
      bool ok = true;
      for (int prev = 0; prev < cell && ok; ++prev)
        if (cell_adjacent(prev, cell)) ok = Z.adjacent(table[static_cast<size_t>(prev)], v);
      if (!ok) continue;
      table[static_cast<size_t>(cell)] = v;
      if (rec(cell + 1)) return true;
    }
    table[static_cast<size_t>(cell)] = -1;
    return false;
  };
  rec(0);  // a constant table always exists, so this cannot fail
  return table;
}

// Exhaustive isomorphism oracle over all vertex permutations.
inline bool isomorphic_brute_force(const dtop::DigitalImage& a, const dtop::DigitalImage& b) {
  if (a.size() != b.size()) return false;
  const int n = a.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      for (int y = 0; y < n && ok; ++y)
        ok = a.adjacent(x, y) == b.adjacent(perm[x], perm[y]);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace helpers

#endif
