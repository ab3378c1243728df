#ifndef DTOP_HOMOTOPY_HPP
#define DTOP_HOMOTOPY_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "core.hpp"
#include "image.hpp"
#include "maps.hpp"

namespace dtop {

enum class Status { yes, no, inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::yes: return "YES";
    case Status::no: return "NO";
    default: return "INCONCLUSIVE";
  }
}

// A homotopy as a chain of continuous maps, consecutive ones related by a
// single step of the category. chain.front() and chain.back() are the two
// maps being connected; length m+1 means an m-step homotopy.
struct HomotopyCertificate {
  std::vector<DigitalMap> chain;
  NPCategory category;
};

// Tri-state result. YES carries a certificate. NO means the single-step
// component of the source map was exhausted within budget; it is a proof,
// never a timeout. INCONCLUSIVE means the node budget was consumed.
struct HomotopyVerdict {
  Status status = Status::inconclusive;
  std::optional<HomotopyCertificate> certificate;
  std::uint64_t explored = 0;
  std::uint64_t budget = 0;
};

inline constexpr std::uint64_t default_budget = 1'000'000;

// Single-step relation between continuous maps with common domain/codomain:
//   NP1: f(a) ~ g(a) for every a;
//   NP2: a ~ b implies f(a) ~ g(b) for every pair.
inline bool single_step_homotopic(const DigitalMap& f, const DigitalMap& g, NPCategory cat) {
  if (f.domain() != g.domain() || f.codomain() != g.codomain())
    fail(Errc::domain_mismatch, "single_step_homotopic needs a common domain and codomain");
  const DigitalImage& X = f.domain();
  const DigitalImage& Y = f.codomain();
  if (cat == NPCategory::np1) {
    for (VertexId a = 0; a < X.size(); ++a)
      if (!Y.adj(f(a), g(a))) return false;
    return true;
  }
  for (VertexId a = 0; a < X.size(); ++a)
    for (VertexId b : X.neighborhood(a))
      if (!Y.adj(f(a), g(b))) return false;
  return true;
}

namespace detail {

using Table = std::vector<VertexId>;

struct TableHash {
  size_t operator()(const Table& t) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (VertexId v : t) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<size_t>(h);
  }
};

using TableSet = std::unordered_set<Table, TableHash>;
using ParentMap = std::unordered_map<Table, Table, TableHash>;

// Fixed map space for one search: all continuous maps dom -> cod, with an
// optional basepoint restriction (pointed searches).
struct StepContext {
  const DigitalImage* dom;
  const DigitalImage* cod;
  NPCategory cat;
  std::optional<std::pair<VertexId, VertexId>> base;
};

// Enumerates, in lexicographic order, every continuous table g != f such
// that f -> g is a single step of the category. The per-vertex candidate
// set is N[f(v)] for NP1 and the intersection of N[f(a)] over a in N[v]
// for NP2; pairwise continuity of g is enforced by backtracking.
template <typename Fn>
void for_each_step_neighbor(const StepContext& ctx, const Table& f, Fn&& fn) {
  const DigitalImage& X = *ctx.dom;
  const DigitalImage& Y = *ctx.cod;
  const int n = X.size();
  const size_t w = Y.row_words();
  std::vector<std::uint64_t> cand(static_cast<size_t>(n) * w);
  for (VertexId v = 0; v < n; ++v) {
    std::uint64_t* cv = cand.data() + static_cast<size_t>(v) * w;
    const std::uint64_t* base_row = Y.row(f[static_cast<size_t>(v)]);
    for (size_t i = 0; i < w; ++i) cv[i] = base_row[i];
    if (ctx.cat == NPCategory::np2)
      for (VertexId a : X.neighborhood(v)) {
        if (a == v) continue;
        const std::uint64_t* r = Y.row(f[static_cast<size_t>(a)]);
        for (size_t i = 0; i < w; ++i) cv[i] &= r[i];
      }
    if (ctx.base && v == ctx.base->first) {
      VertexId b = ctx.base->second;
      for (size_t i = 0; i < w; ++i) {
        std::uint64_t keep = (i == static_cast<size_t>(b >> 6)) ? (std::uint64_t{1} << (b & 63)) : 0;
        cv[i] &= keep;
      }
    }
  }
  std::vector<std::vector<VertexId>> lists(static_cast<size_t>(n));
  for (VertexId v = 0; v < n; ++v) {
    const std::uint64_t* cv = cand.data() + static_cast<size_t>(v) * w;
    for (VertexId y = 0; y < Y.size(); ++y)
      if (cv[static_cast<size_t>(y >> 6)] >> (y & 63) & 1u) lists[static_cast<size_t>(v)].push_back(y);
    if (lists[static_cast<size_t>(v)].empty()) return;
  }
  std::vector<std::vector<VertexId>> earlier(static_cast<size_t>(n));
  for (VertexId v = 0; v < n; ++v)
    for (VertexId u : X.neighborhood(v))
      if (u < v) earlier[static_cast<size_t>(v)].push_back(u);
  Table g(static_cast<size_t>(n));
  std::function<bool(int)> rec = [&](int v) -> bool {
    if (v == n) {
      if (g == f) return true;
      return fn(static_cast<const Table&>(g));
    }
    for (VertexId y : lists[static_cast<size_t>(v)]) {
      bool ok = true;
      for (VertexId u : earlier[static_cast<size_t>(v)])
        if (!Y.adj(g[static_cast<size_t>(u)], y)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      g[static_cast<size_t>(v)] = y;
      if (!rec(v + 1)) return false;
    }
    return true;
  };
  rec(0);
}

inline std::vector<Table> walk_back(const ParentMap& parent, Table node) {
  std::vector<Table> path{node};
  while (true) {
    const Table& p = parent.at(path.back());
    if (p == path.back()) break;
    path.push_back(p);
  }
  std::reverse(path.begin(), path.end());
  return path;  // start ... node
}

struct ComponentResult {
  bool complete = false;
  std::vector<Table> order;  // discovery order, order[0] = start
  ParentMap parent;
  std::uint64_t explored = 0;
};

// Breadth-first exploration of the single-step component of start.
// Deterministic: FIFO expansion, neighbors generated in lexicographic order.
// Stops early when pred(table) holds for a discovered node (hit returned).
inline ComponentResult explore_component(const StepContext& ctx, const Table& start,
                                         std::uint64_t budget,
                                         const std::function<bool(const Table&)>& pred = nullptr,
                                         std::optional<Table>* hit = nullptr) {
  ComponentResult res;
  if (budget == 0) return res;
  res.parent[start] = start;
  res.order.push_back(start);
  res.explored = 1;
  if (pred && pred(start)) {
    if (hit) *hit = start;
    res.complete = true;
    return res;
  }
  std::deque<Table> queue{start};
  bool stopped = false;
  while (!queue.empty() && !stopped) {
    Table u = std::move(queue.front());
    queue.pop_front();
    for_each_step_neighbor(ctx, u, [&](const Table& t) {
      if (res.parent.count(t)) return true;
      if (res.explored >= budget) {
        stopped = true;
        return false;
      }
      res.parent.emplace(t, u);
      res.order.push_back(t);
      ++res.explored;
      if (pred && pred(t)) {
        if (hit) *hit = t;
        stopped = true;
        return false;
      }
      queue.push_back(t);
      return true;
    });
  }
  res.complete = !stopped || (hit && hit->has_value());
  return res;
}

struct ReachResult {
  Status status = Status::inconclusive;
  std::vector<Table> chain;  // f ... g when YES
  std::uint64_t explored = 0;
};

// Decides whether g is reachable from f in the single-step graph.
// Breadth-first from f, so a YES chain has the fewest possible steps; NO
// means the component of f was exhausted without reaching g.
inline ReachResult search_target(const StepContext& ctx, const Table& f, const Table& g,
                                 std::uint64_t budget) {
  ReachResult res;
  if (f == g) {
    res.status = Status::yes;
    res.chain = {f};
    res.explored = 1;
    return res;
  }
  std::optional<Table> hit;
  auto comp = explore_component(ctx, f, budget, [&](const Table& t) { return t == g; }, &hit);
  res.explored = comp.explored;
  if (hit) {
    res.status = Status::yes;
    res.chain = walk_back(comp.parent, *hit);
  } else if (comp.complete) {
    res.status = Status::no;
  } else {
    res.explored = budget;
  }
  return res;
}

inline void require_continuous(const DigitalMap& f, const char* who) {
  if (!is_continuous(f)) fail(Errc::not_continuous, std::string(who) + ": map is not continuous");
}

inline StepContext context_for(const DigitalMap& f, NPCategory cat,
                               std::optional<std::pair<VertexId, VertexId>> base = std::nullopt) {
  return StepContext{&f.domain(), &f.codomain(), cat, base};
}

inline HomotopyCertificate chain_to_certificate(const std::vector<Table>& chain,
                                                const ImagePtr& dom, const ImagePtr& cod,
                                                NPCategory cat) {
  HomotopyCertificate cert{{}, cat};
  cert.chain.reserve(chain.size());
  for (const Table& t : chain) cert.chain.emplace_back(dom, cod, t);
  return cert;
}

}  // namespace detail

inline HomotopyVerdict homotopic(const DigitalMap& f, const DigitalMap& g, NPCategory cat,
                                 std::uint64_t budget = default_budget) {
  if (f.domain() != g.domain() || f.codomain() != g.codomain())
    fail(Errc::domain_mismatch, "homotopic needs a common domain and codomain");
  detail::require_continuous(f, "homotopic");
  detail::require_continuous(g, "homotopic");
  auto ctx = detail::context_for(f, cat);
  auto r = detail::search_target(ctx, f.values(), g.values(), budget);
  HomotopyVerdict v{r.status, std::nullopt, r.explored, budget};
  if (r.status == Status::yes)
    v.certificate = detail::chain_to_certificate(r.chain, f.domain_ptr(), f.codomain_ptr(), cat);
  return v;
}

inline HomotopyVerdict pointed_homotopic(const DigitalMap& f, const DigitalMap& g, NPCategory cat,
                                         VertexId base_dom, VertexId base_cod,
                                         std::uint64_t budget = default_budget) {
  if (f.domain() != g.domain() || f.codomain() != g.codomain())
    fail(Errc::domain_mismatch, "pointed_homotopic needs a common domain and codomain");
  if (base_dom < 0 || base_dom >= f.domain().size() || base_cod < 0 ||
      base_cod >= f.codomain().size())
    fail(Errc::vertex_out_of_range, "pointed_homotopic: basepoint out of range");
  if (f(base_dom) != base_cod || g(base_dom) != base_cod)
    fail(Errc::not_pointed, "pointed_homotopic: maps must send the basepoint to the basepoint");
  detail::require_continuous(f, "pointed_homotopic");
  detail::require_continuous(g, "pointed_homotopic");
  auto ctx = detail::context_for(f, cat, std::make_pair(base_dom, base_cod));
  auto r = detail::search_target(ctx, f.values(), g.values(), budget);
  HomotopyVerdict v{r.status, std::nullopt, r.explored, budget};
  if (r.status == Status::yes)
    v.certificate = detail::chain_to_certificate(r.chain, f.domain_ptr(), f.codomain_ptr(), cat);
  return v;
}

// The full homotopy class of f, if the budget suffices.
struct HomotopyClass {
  bool complete = false;  // false = INCONCLUSIVE at budget
  std::vector<DigitalMap> maps;  // BFS discovery order, maps[0] = f
  std::uint64_t explored = 0;
  std::uint64_t budget = 0;
};

inline HomotopyClass homotopy_class(const DigitalMap& f, NPCategory cat,
                                    std::uint64_t budget = default_budget) {
  detail::require_continuous(f, "homotopy_class");
  auto ctx = detail::context_for(f, cat);
  auto r = detail::explore_component(ctx, f.values(), budget);
  HomotopyClass out;
  out.complete = r.complete;
  out.explored = r.explored;
  out.budget = budget;
  out.maps.reserve(r.order.size());
  for (auto& t : r.order) out.maps.emplace_back(f.domain_ptr(), f.codomain_ptr(), t);
  return out;
}

namespace detail {

// Shared shape of the three identity-class predicate searches.
// When the predicate hits, the verdict is `on_hit` and the certificate is
// the chain from the identity to the witness.
inline HomotopyVerdict identity_predicate_search(const ImagePtr& img, NPCategory cat,
                                                 std::uint64_t budget,
                                                 const std::function<bool(const Table&)>& pred,
                                                 Status on_hit, Status on_exhausted) {
  DigitalMap id = identity_map(img);
  StepContext ctx{img.get(), img.get(), cat, std::nullopt};
  std::optional<Table> hit;
  auto r = explore_component(ctx, id.values(), budget, pred, &hit);
  HomotopyVerdict v;
  v.budget = budget;
  v.explored = r.explored;
  if (hit) {
    v.status = on_hit;
    v.certificate = chain_to_certificate(walk_back(r.parent, *hit), img, img, cat);
  } else if (r.complete) {
    v.status = on_exhausted;
  } else {
    v.status = Status::inconclusive;
    v.explored = budget;
  }
  return v;
}

inline bool table_constant(const Table& t) {
  for (VertexId v : t)
    if (v != t[0]) return false;
  return true;
}

inline bool table_surjective(const Table& t) {
  std::vector<bool> seen(t.size(), false);
  size_t count = 0;
  for (VertexId v : t)
    if (!seen[static_cast<size_t>(v)]) {
      seen[static_cast<size_t>(v)] = true;
      ++count;
    }
  return count == t.size();
}

inline bool table_identity(const Table& t) {
  for (size_t i = 0; i < t.size(); ++i)
    if (t[i] != static_cast<VertexId>(i)) return false;
  return true;
}

}  // namespace detail

// YES iff the identity is homotopic to some constant map; the certificate
// ends at the witnessing constant.
inline HomotopyVerdict is_contractible(const ImagePtr& img, NPCategory cat,
                                       std::uint64_t budget = default_budget) {
  return detail::identity_predicate_search(
      img, cat, budget, [](const detail::Table& t) { return detail::table_constant(t); },
      Status::yes, Status::no);
}

// YES iff every map in the homotopy class of the identity is surjective.
// NO carries the non-surjective witness at the end of the certificate.
inline HomotopyVerdict is_irreducible(const ImagePtr& img, NPCategory cat,
                                      std::uint64_t budget = default_budget) {
  return detail::identity_predicate_search(
      img, cat, budget, [](const detail::Table& t) { return !detail::table_surjective(t); },
      Status::no, Status::yes);
}

// YES iff the homotopy class of the identity is {identity}.
inline HomotopyVerdict is_rigid(const ImagePtr& img, NPCategory cat,
                                std::uint64_t budget = default_budget) {
  return detail::identity_predicate_search(
      img, cat, budget, [](const detail::Table& t) { return !detail::table_identity(t); },
      Status::no, Status::yes);
}

struct EquivalenceResult {
  Status status = Status::inconclusive;
  std::optional<DigitalMap> to;    // f : X -> Y
  std::optional<DigitalMap> from;  // g : Y -> X
  std::optional<HomotopyCertificate> cert_to_from;  // f.g ~ id_Y
  std::optional<HomotopyCertificate> cert_from_to;  // g.f ~ id_X
  std::uint64_t explored = 0;
  std::uint64_t budget = 0;
};

// Searches pairs of continuous maps (pointed when basepoints are given).
// YES returns witnesses with both round-trip certificates; NO only when the
// full pair space was exhausted with all round-trips decided NO.
inline EquivalenceResult homotopy_equivalent(
    const ImagePtr& X, const ImagePtr& Y, NPCategory cat, std::uint64_t budget = default_budget,
    std::optional<std::pair<VertexId, VertexId>> basepoints = std::nullopt) {
  EquivalenceResult out;
  out.budget = budget;
  if (basepoints) {
    if (basepoints->first < 0 || basepoints->first >= X->size() || basepoints->second < 0 ||
        basepoints->second >= Y->size())
      fail(Errc::vertex_out_of_range, "homotopy_equivalent: basepoint out of range");
  }
  DigitalMap idX = identity_map(X), idY = identity_map(Y);
  std::optional<std::pair<VertexId, VertexId>> baseX, baseY;
  if (basepoints) {
    baseX = std::make_pair(basepoints->first, basepoints->first);
    baseY = std::make_pair(basepoints->second, basepoints->second);
  }
  detail::StepContext ctxX{X.get(), X.get(), cat, baseX};
  detail::StepContext ctxY{Y.get(), Y.get(), cat, baseY};
  auto compX = detail::explore_component(ctxX, idX.values(), budget);
  auto compY = detail::explore_component(ctxY, idY.values(), budget);
  out.explored = compX.explored + compY.explored;
  if (!compX.complete || !compY.complete) {
    out.explored = budget;
    return out;  // cannot certify NO without the full identity classes
  }
  detail::TableSet classX, classY;
  for (auto& t : compX.order) classX.insert(t);
  for (auto& t : compY.order) classY.insert(t);

  std::vector<detail::Table> fs, gs;
  for_each_continuous_map(X, Y, [&](const detail::Table& t) {
    if (!basepoints || t[static_cast<size_t>(basepoints->first)] == basepoints->second)
      fs.push_back(t);
    return true;
  });
  for_each_continuous_map(Y, X, [&](const detail::Table& t) {
    if (!basepoints || t[static_cast<size_t>(basepoints->second)] == basepoints->first)
      gs.push_back(t);
    return true;
  });
  const int nx = X->size();
  detail::Table gf(static_cast<size_t>(nx)), fg(static_cast<size_t>(Y->size()));
  for (const auto& ft : fs)
    for (const auto& gt : gs) {
      for (size_t x = 0; x < ft.size(); ++x) gf[x] = gt[static_cast<size_t>(ft[x])];
      if (!classX.count(gf)) continue;
      for (size_t y = 0; y < gt.size(); ++y) fg[y] = ft[static_cast<size_t>(gt[y])];
      if (!classY.count(fg)) continue;
      out.status = Status::yes;
      out.to = DigitalMap(X, Y, ft);
      out.from = DigitalMap(Y, X, gt);
      DigitalMap fgm(Y, Y, fg), gfm(X, X, gf);
      auto vy = homotopic(fgm, idY, cat, budget);
      auto vx = homotopic(gfm, idX, cat, budget);
      out.cert_to_from = vy.certificate;
      out.cert_from_to = vx.certificate;
      return out;
    }
  out.status = Status::no;
  return out;
}

// Definitional re-check of a certificate: endpoints, continuity of every
// stage, the single-step relation between consecutive stages, and (when a
// basepoint pair is supplied) pointedness of every stage.
inline bool verify_certificate(const HomotopyCertificate& cert, const DigitalMap& f,
                               const DigitalMap& g,
                               std::optional<std::pair<VertexId, VertexId>> base = std::nullopt) {
  if (cert.chain.empty()) return false;
  if (cert.chain.front() != f || cert.chain.back() != g) return false;
  for (const DigitalMap& h : cert.chain) {
    if (h.domain() != f.domain() || h.codomain() != f.codomain()) return false;
    if (!is_continuous(h)) return false;
    if (base && h(base->first) != base->second) return false;
  }
  for (size_t i = 0; i + 1 < cert.chain.size(); ++i)
    if (!single_step_homotopic(cert.chain[i], cert.chain[i + 1], cert.category)) return false;
  return true;
}

}  // namespace dtop

#endif
