#ifndef DTOP_GROUP_HPP
#define DTOP_GROUP_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "core.hpp"
#include "hspace.hpp"
#include "image.hpp"
#include "maps.hpp"

namespace dtop {

// A finite group as a multiplication table, validated at construction.
struct GroupStructure {
  int n = 0;
  std::vector<VertexId> mul;  // row-major
  VertexId identity = 0;
  std::vector<VertexId> inv;

  VertexId at(VertexId a, VertexId b) const { return mul[static_cast<size_t>(a) * n + b]; }
};

inline GroupStructure make_group(const std::vector<VertexId>& mul) {
  int n = 0;
  while (static_cast<size_t>(n) * n < mul.size()) ++n;
  if (static_cast<size_t>(n) * n != mul.size() || n == 0)
    fail(Errc::size_mismatch, "group table must be a nonempty n*n table");
  for (VertexId v : mul)
    if (v < 0 || v >= n) fail(Errc::vertex_out_of_range, "group table value out of range");
  auto at = [&](VertexId a, VertexId b) { return mul[static_cast<size_t>(a) * n + b]; };
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = 0; b < n; ++b)
      for (VertexId c = 0; c < n; ++c)
        if (at(at(a, b), c) != at(a, at(b, c)))
          fail(Errc::not_associative, "table is not associative at (" + std::to_string(a) + "," +
                                          std::to_string(b) + "," + std::to_string(c) + ")");
  VertexId e = -1;
  for (VertexId cand = 0; cand < n && e < 0; ++cand) {
    bool ok = true;
    for (VertexId x = 0; x < n && ok; ++x) ok = at(cand, x) == x && at(x, cand) == x;
    if (ok) e = cand;
  }
  if (e < 0) fail(Errc::no_identity, "table has no two-sided identity");
  std::vector<VertexId> inv(static_cast<size_t>(n), -1);
  for (VertexId a = 0; a < n; ++a) {
    for (VertexId b = 0; b < n; ++b)
      if (at(a, b) == e && at(b, a) == e) {
        inv[static_cast<size_t>(a)] = b;
        break;
      }
    if (inv[static_cast<size_t>(a)] < 0)
      fail(Errc::no_inverse, "element " + std::to_string(a) + " has no two-sided inverse");
  }
  return GroupStructure{n, mul, e, std::move(inv)};
}

// Cayley graph: vertex set G, a ~ b iff a b^-1 in S or b a^-1 in S, plus
// the reflexive loops of the digital convention (whether or not e is in S).
inline DigitalImage cayley_graph(const GroupStructure& G, const std::vector<VertexId>& subset) {
  for (VertexId s : subset)
    if (s < 0 || s >= G.n) fail(Errc::bad_subset, "subset element out of range");
  std::vector<bool> in_s(static_cast<size_t>(G.n), false);
  for (VertexId s : subset) in_s[static_cast<size_t>(s)] = true;
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId a = 0; a < G.n; ++a)
    for (VertexId b = a + 1; b < G.n; ++b)
      if (in_s[static_cast<size_t>(G.at(a, G.inv[static_cast<size_t>(b)]))] ||
          in_s[static_cast<size_t>(G.at(b, G.inv[static_cast<size_t>(a)]))])
        edges.emplace_back(a, b);
  return DigitalImage(G.n, edges);
}

struct DtgCheck {
  bool ok = false;
  // on failure, one witness: either a product-adjacent argument pair whose
  // products are non-adjacent, or an edge broken by inversion
  std::optional<std::array<VertexId, 4>> mult_witness;
  std::optional<std::pair<VertexId, VertexId>> inv_witness;
};

// True iff the group multiplication is NP-continuous on the image and
// inversion is continuous. For NP1 successes, additionally cross-checks
// that every right-translation is a graph automorphism.
inline DtgCheck is_digital_topological_group(const DigitalImage& img, const GroupStructure& G,
                                             NPCategory cat) {
  if (img.size() != G.n) fail(Errc::size_mismatch, "image size differs from group order");
  DtgCheck out;
  if (auto w = detail::continuity_violation(img, G.mul, cat)) {
    out.mult_witness = w;
    return out;
  }
  for (VertexId a = 0; a < G.n; ++a)
    for (VertexId b : img.neighborhood(a))
      if (!img.adj(G.inv[static_cast<size_t>(a)], G.inv[static_cast<size_t>(b)])) {
        out.inv_witness = std::make_pair(a, b);
        return out;
      }
  out.ok = true;
  if (cat == NPCategory::np1)
    for (VertexId x = 0; x < G.n; ++x)
      for (VertexId a = 0; a < G.n; ++a)
        for (VertexId b = 0; b < G.n; ++b)
          if (img.adj(a, b) != img.adj(G.at(a, x), G.at(b, x)))
            fail(Errc::structure_violation, "right translation is not an automorphism");
  return out;
}

struct DigitalTopologicalGroup {
  ImagePtr image;
  GroupStructure group;
  NPCategory category = NPCategory::np1;
};

inline DigitalTopologicalGroup make_dtg(ImagePtr image, GroupStructure group, NPCategory cat) {
  auto check = is_digital_topological_group(*image, group, cat);
  if (!check.ok)
    fail(Errc::discontinuous_multiplication,
         "group operations are not continuous on this image");
  return DigitalTopologicalGroup{std::move(image), std::move(group), cat};
}

// Points adjacent to the group identity, identity excluded.
inline std::vector<VertexId> identity_neighborhood(const DigitalTopologicalGroup& dtg) {
  std::vector<VertexId> out;
  for (VertexId s : dtg.image->neighborhood(dtg.group.identity))
    if (s != dtg.group.identity) out.push_back(s);
  return out;
}

// The image equals (same labels, same edges) the Cayley graph of the group
// with respect to the identity neighborhood.
inline bool cayley_reconstruction_check(const DigitalTopologicalGroup& dtg) {
  return cayley_graph(dtg.group, identity_neighborhood(dtg)) == *dtg.image;
}

inline bool generates(const GroupStructure& G, const std::vector<VertexId>& subset) {
  for (VertexId s : subset)
    if (s < 0 || s >= G.n) fail(Errc::bad_subset, "subset element out of range");
  std::vector<bool> seen(static_cast<size_t>(G.n), false);
  std::vector<VertexId> stack{G.identity};
  seen[static_cast<size_t>(G.identity)] = true;
  for (VertexId s : subset)
    if (!seen[static_cast<size_t>(s)]) {
      seen[static_cast<size_t>(s)] = true;
      stack.push_back(s);
    }
  // closure under multiplication; inverses come for free in a finite group
  size_t count = stack.size();
  for (size_t i = 0; i < stack.size(); ++i)
    for (size_t j = 0; j < stack.size(); ++j) {
      VertexId p = G.at(stack[i], stack[j]);
      if (!seen[static_cast<size_t>(p)]) {
        seen[static_cast<size_t>(p)] = true;
        stack.push_back(p);
        ++count;
      }
    }
  return count == static_cast<size_t>(G.n);
}

struct Np2GroupClassification {
  bool accepted = false;           // cluster graph with equal cluster sizes
  bool connected = false;
  bool components_complete = false;
  bool equal_sizes = false;
};

// The images of NP2 digital topological groups are exactly the cluster
// graphs (disjoint unions of complete graphs) with isomorphic clusters;
// connected ones are exactly the complete graphs.
inline Np2GroupClassification classify_np2_group_image(const DigitalImage& img) {
  Np2GroupClassification out;
  auto part = components(img);
  out.connected = part.blocks.size() == 1;
  out.components_complete = true;
  out.equal_sizes = true;
  size_t size0 = part.blocks.front().size();
  for (const auto& block : part.blocks) {
    if (block.size() != size0) out.equal_sizes = false;
    for (size_t i = 0; i < block.size() && out.components_complete; ++i)
      for (size_t j = i + 1; j < block.size(); ++j)
        if (!img.adjacent(block[i], block[j])) {
          out.components_complete = false;
          break;
        }
  }
  out.accepted = out.components_complete && out.equal_sizes;
  return out;
}

// Every digital topological group is an H-space with the same table.
inline HSpaceStructure hspace_from_group(const DigitalTopologicalGroup& dtg,
                                         std::uint64_t budget = default_budget) {
  HSpaceStructure out = make_hspace(dtg.image, dtg.group.identity, dtg.group.mul, dtg.category);
  HSpaceReport rep = verify_hspace(out, budget);
  if (rep.is_hspace != Status::yes || !rep.unital || !is_associative(out))
    fail(Errc::structure_violation, "group table failed H-space verification");
  out.report = rep;
  return out;
}

namespace detail {

inline std::vector<VertexId> canonical_group_table(const GroupStructure& G) {
  // minimum relabeling over permutations fixing the identity slot 0
  const int n = G.n;
  std::vector<VertexId> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<VertexId> best = G.mul, cand(static_cast<size_t>(n) * n);
  do {
    if (perm[0] != 0) continue;
    for (VertexId a = 0; a < n; ++a)
      for (VertexId b = 0; b < n; ++b)
        cand[static_cast<size_t>(perm[static_cast<size_t>(a)]) * n +
             perm[static_cast<size_t>(b)]] = perm[static_cast<size_t>(G.at(a, b))];
    if (cand < best) best = cand;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

inline constexpr int enumerate_groups_default_cap = 6;

// One table per isomorphism class of groups of order n, identity at 0:
// backtracking over Latin squares with first row and column fixed, an
// associativity filter at the leaves, and dedup by canonical relabeling.
inline std::vector<GroupStructure> enumerate_groups(int n,
                                                    int cap = enumerate_groups_default_cap) {
  if (n < 1) fail(Errc::zero_vertices, "need n >= 1");
  if (n > cap)
    fail(Errc::cap_exceeded,
         "enumerate_groups: n=" + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  std::vector<VertexId> table(static_cast<size_t>(n) * n, -1);
  for (VertexId x = 0; x < n; ++x) {
    table[static_cast<size_t>(x)] = x;                       // row of the identity
    table[static_cast<size_t>(x) * n] = x;                   // column of the identity
  }
  std::set<std::vector<VertexId>> canon;
  std::function<void(int)> rec = [&](int cell) {
    if (cell == n * n) {
      auto at = [&](VertexId a, VertexId b) { return table[static_cast<size_t>(a) * n + b]; };
      for (VertexId a = 0; a < n; ++a)
        for (VertexId b = 0; b < n; ++b)
          for (VertexId c = 0; c < n; ++c)
            if (at(at(a, b), c) != at(a, at(b, c))) return;
      canon.insert(detail::canonical_group_table(make_group(table)));
      return;
    }
    int a = cell / n, b = cell % n;
    if (table[static_cast<size_t>(cell)] >= 0) {
      rec(cell + 1);
      return;
    }
    for (VertexId v = 0; v < n; ++v) {
      bool ok = true;
      for (VertexId b2 = 0; b2 < b && ok; ++b2) ok = table[static_cast<size_t>(a) * n + b2] != v;
      for (VertexId a2 = 0; a2 < a && ok; ++a2) ok = table[static_cast<size_t>(a2) * n + b] != v;
      if (!ok) continue;
      table[static_cast<size_t>(cell)] = v;
      rec(cell + 1);
      table[static_cast<size_t>(cell)] = -1;
    }
  };
  rec(0);
  std::vector<GroupStructure> out;
  for (const auto& t : canon) out.push_back(make_group(t));
  return out;
}

}  // namespace dtop

#endif
