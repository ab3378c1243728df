#ifndef DTOP_IMAGE_HPP
#define DTOP_IMAGE_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "core.hpp"

namespace dtop {

// A digital image: a finite set of points with a reflexive, symmetric
// adjacency relation. Equivalently a finite reflexive graph. Immutable
// after construction, so instances can be shared freely across threads.
class DigitalImage {
 public:
  explicit DigitalImage(int n, const std::vector<std::pair<VertexId, VertexId>>& edges = {})
      : n_(n) {
    if (n < 1) fail(Errc::zero_vertices, "a digital image needs at least one vertex");
    words_ = static_cast<size_t>((n + 63) / 64);
    bits_.assign(static_cast<size_t>(n) * words_, 0);
    for (VertexId v = 0; v < n; ++v) set(v, v);  // reflexive
    for (auto [a, b] : edges) {
      if (a < 0 || a >= n || b < 0 || b >= n)
        fail(Errc::edge_out_of_range, "edge (" + std::to_string(a) + "," + std::to_string(b) +
                                          ") out of range for image of " + std::to_string(n) +
                                          " vertices");
      set(a, b);
      set(b, a);
    }
    finish();
  }

  int size() const { return n_; }

  bool adjacent(VertexId a, VertexId b) const {
    check(a);
    check(b);
    return adj(a, b);
  }

  // Unchecked adjacency test for inner loops.
  bool adj(VertexId a, VertexId b) const {
    return (bits_[static_cast<size_t>(a) * words_ + static_cast<size_t>(b >> 6)] >>
            (b & 63)) & 1u;
  }

  // Closed neighborhood N[v] (includes v), ascending.
  const std::vector<VertexId>& neighborhood(VertexId v) const {
    check(v);
    return nbrs_[static_cast<size_t>(v)];
  }

  // Non-loop degree. Every vertex has a loop, so loops carry no information
  // and are excluded here (used for isomorphism pruning).
  int degree(VertexId v) const {
    check(v);
    return static_cast<int>(nbrs_[static_cast<size_t>(v)].size()) - 1;
  }

  // Adjacency row as bit words; used for fast neighborhood intersections.
  const std::uint64_t* row(VertexId v) const { return bits_.data() + static_cast<size_t>(v) * words_; }
  size_t row_words() const { return words_; }

  bool complete() const { return complete_; }

  // Non-loop edges a < b, ascending.
  std::vector<std::pair<VertexId, VertexId>> edges() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    for (VertexId a = 0; a < n_; ++a)
      for (VertexId b = a + 1; b < n_; ++b)
        if (adj(a, b)) out.emplace_back(a, b);
    return out;
  }

  friend bool operator==(const DigitalImage& x, const DigitalImage& y) {
    return x.n_ == y.n_ && x.bits_ == y.bits_;
  }
  friend bool operator!=(const DigitalImage& x, const DigitalImage& y) { return !(x == y); }

 private:
  void set(VertexId a, VertexId b) {
    bits_[static_cast<size_t>(a) * words_ + static_cast<size_t>(b >> 6)] |= std::uint64_t{1}
                                                                            << (b & 63);
  }
  void check(VertexId v) const {
    if (v < 0 || v >= n_)
      fail(Errc::vertex_out_of_range,
           "vertex " + std::to_string(v) + " out of range [0," + std::to_string(n_) + ")");
  }
  void finish() {
    nbrs_.resize(static_cast<size_t>(n_));
    for (VertexId v = 0; v < n_; ++v) {
      nbrs_[static_cast<size_t>(v)].clear();
      for (VertexId u = 0; u < n_; ++u)
        if (adj(v, u)) nbrs_[static_cast<size_t>(v)].push_back(u);
    }
    complete_ = true;
    for (VertexId v = 0; v < n_ && complete_; ++v)
      complete_ = nbrs_[static_cast<size_t>(v)].size() == static_cast<size_t>(n_);
  }

  int n_;
  size_t words_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::vector<VertexId>> nbrs_;
  bool complete_ = false;
};

using ImagePtr = std::shared_ptr<const DigitalImage>;

inline ImagePtr share(DigitalImage img) { return std::make_shared<const DigitalImage>(std::move(img)); }

inline DigitalImage make_image(int n, const std::vector<std::pair<VertexId, VertexId>>& edges = {}) {
  return DigitalImage(n, edges);
}

// Disjoint blocks covering all vertices.
struct VertexPartition {
  std::vector<std::vector<VertexId>> blocks;
};

inline VertexPartition components(const DigitalImage& img) {
  const int n = img.size();
  std::vector<int> block_of(static_cast<size_t>(n), -1);
  VertexPartition part;
  for (VertexId s = 0; s < n; ++s) {
    if (block_of[static_cast<size_t>(s)] >= 0) continue;
    std::vector<VertexId> block{s};
    block_of[static_cast<size_t>(s)] = static_cast<int>(part.blocks.size());
    for (size_t i = 0; i < block.size(); ++i)
      for (VertexId u : img.neighborhood(block[i]))
        if (block_of[static_cast<size_t>(u)] < 0) {
          block_of[static_cast<size_t>(u)] = static_cast<int>(part.blocks.size());
          block.push_back(u);
        }
    std::sort(block.begin(), block.end());
    part.blocks.push_back(std::move(block));
  }
  return part;
}

inline bool is_connected(const DigitalImage& img) { return components(img).blocks.size() == 1; }

// Component of a single vertex, ascending.
inline std::vector<VertexId> component_of(const DigitalImage& img, VertexId v) {
  for (auto& block : components(img).blocks)
    if (std::binary_search(block.begin(), block.end(), v)) return block;
  fail(Errc::vertex_out_of_range, "vertex " + std::to_string(v) + " not in image");
}

// Image induced on a subset of vertices (ascending order gives the new labels).
inline DigitalImage induced_subimage(const DigitalImage& img, const std::vector<VertexId>& verts) {
  const int m = static_cast<int>(verts.size());
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (img.adjacent(verts[static_cast<size_t>(i)], verts[static_cast<size_t>(j)]))
        edges.emplace_back(i, j);
  return DigitalImage(m, edges);
}

namespace detail {

inline std::vector<int> degree_signature(const DigitalImage& img, VertexId v) {
  std::vector<int> sig;
  for (VertexId u : img.neighborhood(v))
    if (u != v) sig.push_back(img.degree(u));
  std::sort(sig.begin(), sig.end());
  return sig;
}

inline bool iso_backtrack(const DigitalImage& a, const DigitalImage& b, std::vector<VertexId>& map,
                          std::vector<bool>& used, VertexId v,
                          const std::vector<std::vector<int>>& sig_a,
                          const std::vector<std::vector<int>>& sig_b) {
  const int n = a.size();
  if (v == n) return true;
  for (VertexId u = 0; u < n; ++u) {
    if (used[static_cast<size_t>(u)]) continue;
    if (a.degree(v) != b.degree(u)) continue;
    if (sig_a[static_cast<size_t>(v)] != sig_b[static_cast<size_t>(u)]) continue;
    bool ok = true;
    for (VertexId w = 0; w < v && ok; ++w)
      ok = a.adj(v, w) == b.adj(u, map[static_cast<size_t>(w)]);
    if (!ok) continue;
    map[static_cast<size_t>(v)] = u;
    used[static_cast<size_t>(u)] = true;
    if (iso_backtrack(a, b, map, used, v + 1, sig_a, sig_b)) return true;
    used[static_cast<size_t>(u)] = false;
  }
  return false;
}

}  // namespace detail

// Some adjacency-preserving bijection with adjacency-preserving inverse, or
// absent. Deterministic: backtracking in vertex order, candidates ascending.
inline std::optional<std::vector<VertexId>> graph_isomorphism(const DigitalImage& a,
                                                              const DigitalImage& b) {
  if (a.size() != b.size()) return std::nullopt;
  const int n = a.size();
  std::vector<int> da, db;
  for (VertexId v = 0; v < n; ++v) da.push_back(a.degree(v));
  for (VertexId v = 0; v < n; ++v) db.push_back(b.degree(v));
  {
    auto sa = da, sb = db;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  std::vector<std::vector<int>> sig_a, sig_b;
  for (VertexId v = 0; v < n; ++v) sig_a.push_back(detail::degree_signature(a, v));
  for (VertexId v = 0; v < n; ++v) sig_b.push_back(detail::degree_signature(b, v));
  std::vector<VertexId> map(static_cast<size_t>(n), -1);
  std::vector<bool> used(static_cast<size_t>(n), false);
  if (detail::iso_backtrack(a, b, map, used, 0, sig_a, sig_b)) return map;
  return std::nullopt;
}

inline constexpr int enumerate_images_default_cap = 7;

// One representative per isomorphism class of reflexive graphs on n vertices.
// Iterates upper-triangle edge bitmasks and keeps a mask only if it is the
// lexicographic minimum over all vertex permutations of its relabelings.
inline std::vector<DigitalImage> enumerate_images(int n, int cap = enumerate_images_default_cap) {
  if (n < 1) fail(Errc::zero_vertices, "need n >= 1");
  if (n > cap)
    fail(Errc::cap_exceeded, "enumerate_images: n=" + std::to_string(n) + " exceeds cap " +
                                 std::to_string(cap));
  const int npairs = n * (n - 1) / 2;
  std::vector<std::pair<VertexId, VertexId>> pairs;
  std::vector<std::vector<int>> pair_index(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), -1));
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = a + 1; b < n; ++b) {
      pair_index[static_cast<size_t>(a)][static_cast<size_t>(b)] = static_cast<int>(pairs.size());
      pair_index[static_cast<size_t>(b)][static_cast<size_t>(a)] = static_cast<int>(pairs.size());
      pairs.emplace_back(a, b);
    }
  std::vector<DigitalImage> out;
  std::vector<VertexId> perm(static_cast<size_t>(n));
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << npairs); ++mask) {
    std::iota(perm.begin(), perm.end(), 0);
    bool minimal = true;
    do {
      std::uint32_t relabeled = 0;
      for (int i = 0; i < npairs; ++i)
        if (mask >> i & 1u) {
          auto [a, b] = pairs[static_cast<size_t>(i)];
          relabeled |= std::uint32_t{1}
                       << pair_index[static_cast<size_t>(perm[static_cast<size_t>(a)])]
                                    [static_cast<size_t>(perm[static_cast<size_t>(b)])];
        }
      if (relabeled < mask) {
        minimal = false;
        break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!minimal) continue;
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int i = 0; i < npairs; ++i)
      if (mask >> i & 1u) edges.push_back(pairs[static_cast<size_t>(i)]);
    out.emplace_back(n, edges);
  }
  return out;
}

}  // namespace dtop

#endif
