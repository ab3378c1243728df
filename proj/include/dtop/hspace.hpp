#ifndef DTOP_HSPACE_HPP
#define DTOP_HSPACE_HPP

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "core.hpp"
#include "homotopy.hpp"
#include "image.hpp"
#include "maps.hpp"

namespace dtop {

struct HSpaceReport {
  Status is_hspace = Status::inconclusive;  // both unit laws hold up to homotopy
  bool unital = false;                      // both unit laws hold exactly
  Status pointed = Status::inconclusive;    // both unit-law homotopies can be made pointed
  bool left_unit_exact = false;             // mult(e,x) = x for all x
  bool right_unit_exact = false;            // mult(x,e) = x for all x
};

// A candidate H-space (X, e, mult) in one category. The multiplication is a
// row-major n*n table; continuity and the unit laws are decided by
// verify_hspace, which callers may cache in `report`.
struct HSpaceStructure {
  ImagePtr image;
  VertexId basepoint = 0;
  std::vector<VertexId> mult;
  NPCategory category = NPCategory::np1;
  std::optional<HSpaceReport> report;

  VertexId at(VertexId a, VertexId b) const {
    return mult[static_cast<size_t>(a) * image->size() + static_cast<size_t>(b)];
  }
};

inline HSpaceStructure make_hspace(ImagePtr image, VertexId e, std::vector<VertexId> mult,
                                   NPCategory cat) {
  detail::check_mult_table(*image, mult);
  if (e < 0 || e >= image->size())
    fail(Errc::vertex_out_of_range, "basepoint " + std::to_string(e) + " out of range");
  return HSpaceStructure{std::move(image), e, std::move(mult), cat, std::nullopt};
}

// A binary operation with no unit assumed, continuous in its category.
struct MagmaStructure {
  ImagePtr image;
  std::vector<VertexId> table;
  NPCategory category = NPCategory::np1;
};

inline MagmaStructure make_magma(ImagePtr image, std::vector<VertexId> table, NPCategory cat) {
  detail::check_mult_table(*image, table);
  return MagmaStructure{std::move(image), std::move(table), cat};
}

namespace detail {

// First product-adjacent pair of arguments whose images are non-adjacent,
// as (a, b, c, d) with (a,b) ~ (c,d), or absent when the table is continuous.
inline std::optional<std::array<VertexId, 4>> continuity_violation(
    const DigitalImage& X, const std::vector<VertexId>& mult, NPCategory cat) {
  const int n = X.size();
  auto at = [&](VertexId a, VertexId b) { return mult[static_cast<size_t>(a) * n + b]; };
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = 0; b < n; ++b) {
      if (cat == NPCategory::np1) {
        for (VertexId a2 : X.neighborhood(a))
          if (!X.adj(at(a, b), at(a2, b))) return std::array<VertexId, 4>{a, b, a2, b};
        for (VertexId b2 : X.neighborhood(b))
          if (!X.adj(at(a, b), at(a, b2))) return std::array<VertexId, 4>{a, b, a, b2};
      } else {
        for (VertexId a2 : X.neighborhood(a))
          for (VertexId b2 : X.neighborhood(b))
            if (!X.adj(at(a, b), at(a2, b2))) return std::array<VertexId, 4>{a, b, a2, b2};
      }
    }
  return std::nullopt;
}

inline void require_np_continuous(const DigitalImage& X, const std::vector<VertexId>& mult,
                                  NPCategory cat, const char* who) {
  if (auto w = continuity_violation(X, mult, cat))
    fail(Errc::discontinuous_multiplication,
         std::string(who) + ": multiplication not NP" + std::to_string(level(cat)) +
             "-continuous: (" + std::to_string((*w)[0]) + "," + std::to_string((*w)[1]) +
             ") ~ (" + std::to_string((*w)[2]) + "," + std::to_string((*w)[3]) +
             ") but the products are not adjacent");
}

inline Status combine_laws(Status a, Status b) {
  if (a == Status::yes && b == Status::yes) return Status::yes;
  if (a == Status::no || b == Status::no) return Status::no;
  return Status::inconclusive;
}

}  // namespace detail

// Decides the H-space axioms for (X, e, mult): NP-continuity of the
// multiplication (an error with witness if it fails), then the two unit-law
// homotopies mult(.,e) ~ id and mult(e,.) ~ id, their pointed versions, and
// the exact unit tests.
inline HSpaceReport verify_hspace(const ImagePtr& X, VertexId e,
                                  const std::vector<VertexId>& mult, NPCategory cat,
                                  std::uint64_t budget = default_budget) {
  detail::check_mult_table(*X, mult);
  if (e < 0 || e >= X->size()) fail(Errc::vertex_out_of_range, "basepoint out of range");
  detail::require_np_continuous(*X, mult, cat, "verify_hspace");
  const int n = X->size();
  DigitalMap mu_e = left_mult(X, mult, e);    // mult(e, .)    = mult o (c_e, id)
  DigitalMap nu_e = right_mult(X, mult, e);   // mult(., e)    = mult o (id, c_e)
  DigitalMap id = identity_map(X);
  HSpaceReport rep;
  rep.left_unit_exact = mu_e == id;
  rep.right_unit_exact = nu_e == id;
  rep.unital = rep.left_unit_exact && rep.right_unit_exact;
  auto left_law = homotopic(mu_e, id, cat, budget);
  auto right_law = homotopic(nu_e, id, cat, budget);
  rep.is_hspace = detail::combine_laws(left_law.status, right_law.status);
  if (mult[static_cast<size_t>(e) * n + e] != e) {
    // the slices are not pointed maps, so no pointed homotopy exists
    rep.pointed = Status::no;
  } else {
    auto pl = pointed_homotopic(mu_e, id, cat, e, e, budget);
    auto pr = pointed_homotopic(nu_e, id, cat, e, e, budget);
    rep.pointed = detail::combine_laws(pl.status, pr.status);
  }
  return rep;
}

inline HSpaceReport verify_hspace(const HSpaceStructure& H, std::uint64_t budget = default_budget) {
  if (H.report) return *H.report;
  return verify_hspace(H.image, H.basepoint, H.mult, H.category, budget);
}

inline const HSpaceReport& ensure_verified(HSpaceStructure& H,
                                           std::uint64_t budget = default_budget) {
  if (!H.report) H.report = verify_hspace(H.image, H.basepoint, H.mult, H.category, budget);
  return *H.report;
}

// The two triple-product composites mult(mult(x,y),z) and mult(x,mult(y,z))
// as maps out of the NP product of three copies of X.
inline std::pair<DigitalMap, DigitalMap> associativity_composites(const HSpaceStructure& H) {
  const int n = H.image->size();
  ProductImage prod({H.image, H.image, H.image}, level(H.category));
  const int total = prod.carrier()->size();
  std::vector<VertexId> left(static_cast<size_t>(total)), right(static_cast<size_t>(total));
  for (VertexId r = 0; r < total; ++r) {
    VertexId z = r % n, y = (r / n) % n, x = r / (n * n);
    left[static_cast<size_t>(r)] = H.at(H.at(x, y), z);
    right[static_cast<size_t>(r)] = H.at(x, H.at(y, z));
  }
  return {DigitalMap(prod.carrier(), H.image, std::move(left)),
          DigitalMap(prod.carrier(), H.image, std::move(right))};
}

inline HomotopyVerdict is_homotopy_associative(const HSpaceStructure& H,
                                               std::uint64_t budget = default_budget) {
  auto [left, right] = associativity_composites(H);
  return homotopic(left, right, H.category, budget);
}

inline bool is_associative(const HSpaceStructure& H) {
  const int n = H.image->size();
  for (VertexId x = 0; x < n; ++x)
    for (VertexId y = 0; y < n; ++y)
      for (VertexId z = 0; z < n; ++z)
        if (H.at(H.at(x, y), z) != H.at(x, H.at(y, z))) return false;
  return true;
}

// The two self-map composites x |-> mult(mult(x,p(x)),q(x)) and
// x |-> mult(x,mult(p(x),q(x))); distinguishing them up to (pointed)
// homotopy witnesses a failure of (pointed) homotopy-associativity.
inline std::pair<DigitalMap, DigitalMap> associator_probe(const HSpaceStructure& H,
                                                          const DigitalMap& p,
                                                          const DigitalMap& q) {
  if (p.domain() != *H.image || p.codomain() != *H.image || q.domain() != *H.image ||
      q.codomain() != *H.image)
    fail(Errc::domain_mismatch, "associator_probe needs self-maps of the H-space image");
  if (!is_continuous(p) || !is_continuous(q))
    fail(Errc::not_continuous, "associator_probe needs continuous probes");
  const int n = H.image->size();
  std::vector<VertexId> first(static_cast<size_t>(n)), second(static_cast<size_t>(n));
  for (VertexId x = 0; x < n; ++x) {
    first[static_cast<size_t>(x)] = H.at(H.at(x, p(x)), q(x));
    second[static_cast<size_t>(x)] = H.at(x, H.at(p(x), q(x)));
  }
  return {DigitalMap(H.image, H.image, std::move(first)),
          DigitalMap(H.image, H.image, std::move(second))};
}

// Exact left and right inverse maps: beta(x) is the unique y with
// mult(x,y) = e, alpha(x) the unique y with mult(y,x) = e. Requires every
// translation to be a bijection (automatic for connected irreducible
// H-spaces, and for groups). Deliberately an error on disconnected images.
inline std::pair<DigitalMap, DigitalMap> find_exact_inverses(const HSpaceStructure& H) {
  if (!is_connected(*H.image)) fail(Errc::not_connected, "find_exact_inverses needs a connected image");
  const int n = H.image->size();
  const VertexId e = H.basepoint;
  std::vector<VertexId> alpha(static_cast<size_t>(n), -1), beta(static_cast<size_t>(n), -1);
  for (VertexId x = 0; x < n; ++x) {
    for (VertexId y = 0; y < n; ++y) {
      if (H.at(x, y) == e) {
        if (beta[static_cast<size_t>(x)] >= 0)
          fail(Errc::multiplication_not_invertible,
               "left translation by " + std::to_string(x) + " is not a bijection");
        beta[static_cast<size_t>(x)] = y;
      }
      if (H.at(y, x) == e) {
        if (alpha[static_cast<size_t>(x)] >= 0)
          fail(Errc::multiplication_not_invertible,
               "right translation by " + std::to_string(x) + " is not a bijection");
        alpha[static_cast<size_t>(x)] = y;
      }
    }
    if (beta[static_cast<size_t>(x)] < 0 || alpha[static_cast<size_t>(x)] < 0)
      fail(Errc::multiplication_not_invertible,
           "no inverse element for " + std::to_string(x));
  }
  DigitalMap a(H.image, H.image, std::move(alpha)), b(H.image, H.image, std::move(beta));
  if (!is_continuous(a) || !is_continuous(b))
    fail(Errc::structure_violation, "exact inverse map is not continuous");
  return {std::move(a), std::move(b)};
}

struct HomotopyInverseResult {
  Status status = Status::inconclusive;
  std::optional<DigitalMap> witness;                // the inverse map found
  std::optional<HomotopyCertificate> certificate;   // composite ~ c_e
  std::uint64_t explored = 0;
  std::uint64_t budget = 0;
};

namespace detail {

// In NP1 a pair (h, id) at distinct adjacent points x ~ y is adjacent only
// when the first coordinates agree, so the pair map is continuous iff h is
// constant across every edge. In NP2 it is always continuous.
inline bool inverse_pair_continuous(const DigitalImage& X, const Table& h, NPCategory cat) {
  if (cat == NPCategory::np2) return true;
  for (VertexId x = 0; x < X.size(); ++x)
    for (VertexId y : X.neighborhood(x))
      if (y != x && h[static_cast<size_t>(x)] != h[static_cast<size_t>(y)]) return false;
  return true;
}

inline HomotopyInverseResult homotopy_inverse_search(const HSpaceStructure& H, bool left,
                                                     std::uint64_t budget) {
  const int n = H.image->size();
  const VertexId e = H.basepoint;
  HomotopyInverseResult out;
  out.budget = budget;
  StepContext ctx{H.image.get(), H.image.get(), H.category, std::nullopt};
  Table ce(static_cast<size_t>(n), e);
  auto comp = explore_component(ctx, ce, budget);
  out.explored = comp.explored;
  if (!comp.complete) {
    out.explored = budget;
    return out;
  }
  TableSet class_ce;
  for (auto& t : comp.order) class_ce.insert(t);

  auto composite_of = [&](const Table& h) {
    Table m(static_cast<size_t>(n));
    for (VertexId x = 0; x < n; ++x)
      m[static_cast<size_t>(x)] =
          left ? H.at(h[static_cast<size_t>(x)], x) : H.at(x, h[static_cast<size_t>(x)]);
    return m;
  };
  auto finish = [&](const Table& h, const Table& m) {
    out.status = Status::yes;
    out.witness = DigitalMap(H.image, H.image, h);
    DigitalMap mm(H.image, H.image, m);
    DigitalMap cem(H.image, H.image, ce);
    auto v = homotopic(mm, cem, H.category, budget);
    out.certificate = v.certificate;
  };

  if (H.category == NPCategory::np2) {
    // exact inverses short-circuit: the composite is c_e on the nose
    std::optional<Table> exact;
    std::vector<std::vector<VertexId>> cand(static_cast<size_t>(n));
    for (VertexId x = 0; x < n; ++x)
      for (VertexId y = 0; y < n; ++y)
        if ((left ? H.at(y, x) : H.at(x, y)) == e) cand[static_cast<size_t>(x)].push_back(y);
    Table h(static_cast<size_t>(n));
    std::function<bool(int)> rec = [&](int v) -> bool {
      if (v == n) {
        exact = h;
        return false;
      }
      for (VertexId y : cand[static_cast<size_t>(v)]) {
        bool ok = true;
        for (VertexId u : H.image->neighborhood(v))
          if (u < v && !H.image->adj(h[static_cast<size_t>(u)], y)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        h[static_cast<size_t>(v)] = y;
        if (!rec(v + 1)) return false;
      }
      return true;
    };
    rec(0);
    if (exact) {
      finish(*exact, composite_of(*exact));
      return out;
    }
  }

  bool found = false;
  for_each_continuous_map(H.image, H.image, [&](const Table& h) {
    if (!inverse_pair_continuous(*H.image, h, H.category)) return true;
    Table m = composite_of(h);
    if (!class_ce.count(m)) return true;
    finish(h, m);
    found = true;
    return false;
  });
  if (!found) out.status = Status::no;
  return out;
}

}  // namespace detail

// Searches continuous self-maps for a left homotopy-inverse: the pair
// (alpha, id) must be continuous into the NP product (an explicit check in
// NP1, where even exact inverses fail it), and mult o (alpha, id) ~ c_e.
inline HomotopyInverseResult has_left_homotopy_inverse(const HSpaceStructure& H,
                                                       std::uint64_t budget = default_budget) {
  return detail::homotopy_inverse_search(H, true, budget);
}

inline HomotopyInverseResult has_right_homotopy_inverse(const HSpaceStructure& H,
                                                        std::uint64_t budget = default_budget) {
  return detail::homotopy_inverse_search(H, false, budget);
}

struct HEquivalenceResult {
  Status status = Status::inconclusive;
  std::optional<DigitalMap> to;    // f : (X,e_X) -> (Y,e_Y)
  std::optional<DigitalMap> from;  // g : (Y,e_Y) -> (X,e_X)
  std::optional<HomotopyCertificate> cert_round_to;    // f.g ~ id_Y
  std::optional<HomotopyCertificate> cert_round_from;  // g.f ~ id_X
  std::optional<HomotopyCertificate> cert_mult_to;     // f.mult_X ~ mult_Y.(f x f)
  std::optional<HomotopyCertificate> cert_mult_from;   // g.mult_Y ~ mult_X.(g x g)
  std::uint64_t explored = 0;
  std::uint64_t budget = 0;
};

// H-equivalence: pointed continuous maps f, g whose round trips are
// homotopic to the identities and which intertwine the multiplications up
// to homotopy. The four homotopies are unpointed by default;
// pointed_homotopies = true decides the pointed variant instead.
inline HEquivalenceResult h_equivalent(const HSpaceStructure& A, const HSpaceStructure& B,
                                       std::uint64_t budget = default_budget,
                                       bool pointed_homotopies = false) {
  if (A.category != B.category) fail(Errc::domain_mismatch, "h_equivalent needs one category");
  const NPCategory cat = A.category;
  if (verify_hspace(A, budget).is_hspace != Status::yes ||
      verify_hspace(B, budget).is_hspace != Status::yes)
    fail(Errc::structure_violation, "h_equivalent needs verified H-spaces");
  const ImagePtr& X = A.image;
  const ImagePtr& Y = B.image;
  const VertexId eX = A.basepoint, eY = B.basepoint;
  HEquivalenceResult out;
  out.budget = budget;

  std::optional<std::pair<VertexId, VertexId>> baseX, baseY;
  if (pointed_homotopies) {
    baseX = std::make_pair(eX, eX);
    baseY = std::make_pair(eY, eY);
  }
  detail::StepContext ctxX{X.get(), X.get(), cat, baseX};
  detail::StepContext ctxY{Y.get(), Y.get(), cat, baseY};
  auto compX = detail::explore_component(ctxX, identity_map(X).values(), budget);
  auto compY = detail::explore_component(ctxY, identity_map(Y).values(), budget);
  out.explored = compX.explored + compY.explored;
  if (!compX.complete || !compY.complete) {
    out.explored = budget;
    return out;
  }
  detail::TableSet classX, classY;
  for (auto& t : compX.order) classX.insert(t);
  for (auto& t : compY.order) classY.insert(t);

  ProductImage prodX({X, X}, level(cat)), prodY({Y, Y}, level(cat));
  const int nx = X->size(), ny = Y->size();
  const VertexId pbaseX = eX * nx + eX, pbaseY = eY * ny + eY;

  std::vector<detail::Table> fs, gs;
  for_each_continuous_map(X, Y, [&](const detail::Table& t) {
    if (t[static_cast<size_t>(eX)] == eY) fs.push_back(t);
    return true;
  });
  for_each_continuous_map(Y, X, [&](const detail::Table& t) {
    if (t[static_cast<size_t>(eY)] == eX) gs.push_back(t);
    return true;
  });

  auto decide = [&](const DigitalMap& u, const DigitalMap& v,
                    std::optional<std::pair<VertexId, VertexId>> pb) -> HomotopyVerdict {
    if (pb) {
      if (u(pb->first) != pb->second || v(pb->first) != pb->second)
        return HomotopyVerdict{Status::no, std::nullopt, 0, budget};
      return pointed_homotopic(u, v, cat, pb->first, pb->second, budget);
    }
    return homotopic(u, v, cat, budget);
  };

  bool saw_inconclusive = false;
  detail::Table gf(static_cast<size_t>(nx)), fg(static_cast<size_t>(ny));
  for (const auto& ft : fs)
    for (const auto& gt : gs) {
      for (size_t x = 0; x < ft.size(); ++x) gf[x] = gt[static_cast<size_t>(ft[x])];
      if (!classX.count(gf)) continue;
      for (size_t y = 0; y < gt.size(); ++y) fg[y] = ft[static_cast<size_t>(gt[y])];
      if (!classY.count(fg)) continue;
      // f.mult_X and mult_Y.(f x f) as maps on the product of X
      std::vector<VertexId> m3a(static_cast<size_t>(nx * nx)), m3b(static_cast<size_t>(nx * nx));
      for (VertexId r = 0; r < nx * nx; ++r) {
        m3a[static_cast<size_t>(r)] = ft[static_cast<size_t>(A.mult[static_cast<size_t>(r)])];
        m3b[static_cast<size_t>(r)] =
            B.mult[static_cast<size_t>(ft[static_cast<size_t>(r / nx)]) * ny +
                   ft[static_cast<size_t>(r % nx)]];
      }
      DigitalMap m3am(prodX.carrier(), Y, m3a), m3bm(prodX.carrier(), Y, m3b);
      auto v3 = decide(m3am, m3bm, pointed_homotopies
                                       ? std::optional(std::make_pair(pbaseX, eY))
                                       : std::nullopt);
      if (v3.status == Status::inconclusive) saw_inconclusive = true;
      if (v3.status != Status::yes) continue;
      std::vector<VertexId> m4a(static_cast<size_t>(ny * ny)), m4b(static_cast<size_t>(ny * ny));
      for (VertexId r = 0; r < ny * ny; ++r) {
        m4a[static_cast<size_t>(r)] = gt[static_cast<size_t>(B.mult[static_cast<size_t>(r)])];
        m4b[static_cast<size_t>(r)] =
            A.mult[static_cast<size_t>(gt[static_cast<size_t>(r / ny)]) * nx +
                   gt[static_cast<size_t>(r % ny)]];
      }
      DigitalMap m4am(prodY.carrier(), X, m4a), m4bm(prodY.carrier(), X, m4b);
      auto v4 = decide(m4am, m4bm, pointed_homotopies
                                       ? std::optional(std::make_pair(pbaseY, eX))
                                       : std::nullopt);
      if (v4.status == Status::inconclusive) saw_inconclusive = true;
      if (v4.status != Status::yes) continue;

      out.status = Status::yes;
      out.to = DigitalMap(X, Y, ft);
      out.from = DigitalMap(Y, X, gt);
      auto vy = decide(DigitalMap(Y, Y, fg), identity_map(Y), baseY);
      auto vx = decide(DigitalMap(X, X, gf), identity_map(X), baseX);
      out.cert_round_to = vy.certificate;
      out.cert_round_from = vx.certificate;
      out.cert_mult_to = v3.certificate;
      out.cert_mult_from = v4.certificate;
      return out;
    }
  out.status = saw_inconclusive ? Status::inconclusive : Status::no;
  return out;
}

namespace detail {

// mult_Y = f o mult_X o (g x g); shared by transport_structure and the
// reduction pipeline (which feeds it retraction equivalences).
inline HSpaceStructure transported(const HSpaceStructure& H, const DigitalMap& f,
                                   const DigitalMap& g) {
  const ImagePtr& Y = f.codomain_ptr();
  const int ny = Y->size();
  std::vector<VertexId> mult(static_cast<size_t>(ny) * ny);
  for (VertexId u = 0; u < ny; ++u)
    for (VertexId v = 0; v < ny; ++v)
      mult[static_cast<size_t>(u) * ny + v] = f(H.at(g(u), g(v)));
  return make_hspace(Y, f(H.basepoint), std::move(mult), H.category);
}

}  // namespace detail

// Structure transport along a pointed homotopy equivalence (f, g):
// mult_Y = f o mult_X o (g x g) on (Y, f(e_X)). The result is verified and
// the H-equivalence conditions for (f, g) are checked.
inline HSpaceStructure transport_structure(const HSpaceStructure& H, const DigitalMap& f,
                                           const DigitalMap& g,
                                           std::uint64_t budget = default_budget) {
  const ImagePtr& X = H.image;
  if (f.domain() != *X || g.codomain() != *X || f.codomain() != g.domain())
    fail(Errc::domain_mismatch, "transport_structure: maps must run X -> Y and Y -> X");
  if (!is_continuous(f) || !is_continuous(g))
    fail(Errc::not_continuous, "transport_structure needs continuous maps");
  const VertexId eY = f(H.basepoint);
  if (g(eY) != H.basepoint)
    fail(Errc::not_pointed, "transport_structure: g(f(e)) must equal e");
  DigitalMap idX = identity_map(X), idY = identity_map(f.codomain_ptr());
  auto vgf = homotopic(compose(g, f), idX, H.category, budget);
  auto vfg = homotopic(compose(f, g), idY, H.category, budget);
  if (vgf.status == Status::inconclusive || vfg.status == Status::inconclusive)
    fail(Errc::cap_exceeded, "transport_structure: round trips undecided at budget");
  if (vgf.status != Status::yes || vfg.status != Status::yes)
    fail(Errc::not_homotopy_equivalence, "transport_structure: (f,g) is not a homotopy equivalence");

  HSpaceStructure out = detail::transported(H, f, g);
  HSpaceReport rep = verify_hspace(out, budget);
  if (rep.is_hspace == Status::inconclusive)
    fail(Errc::cap_exceeded, "transport_structure: unit laws undecided at budget");
  if (rep.is_hspace != Status::yes)
    fail(Errc::structure_violation, "transport_structure: transported table is not an H-space");
  out.report = rep;

  // the transported structure is H-equivalent to H via (f, g)
  const int nx = X->size(), ny = out.image->size();
  ProductImage prodX({X, X}, level(H.category)), prodY({out.image, out.image}, level(H.category));
  std::vector<VertexId> m3a(static_cast<size_t>(nx * nx)), m3b(static_cast<size_t>(nx * nx));
  for (VertexId r = 0; r < nx * nx; ++r) {
    m3a[static_cast<size_t>(r)] = f(H.mult[static_cast<size_t>(r)]);
    m3b[static_cast<size_t>(r)] = out.mult[static_cast<size_t>(f(r / nx)) * ny + f(r % nx)];
  }
  std::vector<VertexId> m4a(static_cast<size_t>(ny * ny)), m4b(static_cast<size_t>(ny * ny));
  for (VertexId r = 0; r < ny * ny; ++r) {
    m4a[static_cast<size_t>(r)] = g(out.mult[static_cast<size_t>(r)]);
    m4b[static_cast<size_t>(r)] = H.mult[static_cast<size_t>(g(r / ny)) * nx + g(r % ny)];
  }
  auto v3 = homotopic(DigitalMap(prodX.carrier(), out.image, m3a),
                      DigitalMap(prodX.carrier(), out.image, m3b), H.category, budget);
  auto v4 = homotopic(DigitalMap(prodY.carrier(), X, m4a), DigitalMap(prodY.carrier(), X, m4b),
                      H.category, budget);
  if (v3.status == Status::inconclusive || v4.status == Status::inconclusive)
    fail(Errc::cap_exceeded, "transport_structure: H-equivalence conditions undecided at budget");
  if (v3.status != Status::yes || v4.status != Status::yes)
    fail(Errc::structure_violation, "transport_structure: multiplications fail to intertwine");
  return out;
}

namespace detail {

// Replaces H by an H-space on a smaller image whenever the identity is
// homotopic to a non-surjection: iterating such a witness yields an
// idempotent retraction r with r ~ id, and transporting along
// (corestriction of r, inclusion) shrinks the image.
inline bool reduction_step(HSpaceStructure& H, std::uint64_t budget) {
  auto virr = is_irreducible(H.image, H.category, budget);
  if (virr.status == Status::inconclusive)
    fail(Errc::cap_exceeded, "reduction: irreducibility undecided at budget");
  if (virr.status == Status::yes) return false;
  const Table& w = virr.certificate->chain.back().values();
  const int n = H.image->size();

  auto image_set = [&](const Table& t) {
    std::vector<VertexId> img;
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (VertexId v : t)
      if (!seen[static_cast<size_t>(v)]) {
        seen[static_cast<size_t>(v)] = true;
        img.push_back(v);
      }
    std::sort(img.begin(), img.end());
    return img;
  };
  auto power_compose = [&](const Table& a, const Table& b) {
    Table r(static_cast<size_t>(n));
    for (VertexId x = 0; x < n; ++x) r[static_cast<size_t>(x)] = a[static_cast<size_t>(b[static_cast<size_t>(x)])];
    return r;
  };

  Table wk = w;
  std::vector<VertexId> img = image_set(wk);
  int k0 = 1;
  while (true) {
    Table next = power_compose(w, wk);
    std::vector<VertexId> img2 = image_set(next);
    if (img2 == img) break;
    wk = std::move(next);
    img = std::move(img2);
    ++k0;
  }
  // restriction of w to the stable image is a permutation; take the power
  // that makes it the identity, giving an idempotent retraction
  int ord = 1;
  {
    // the restriction of w to the stable image permutes it, so some power
    // is the identity there; the bound only guards against corrupt input
    Table sigma = w, acc = w;
    auto is_id_on = [&](const Table& t) {
      for (VertexId v : img)
        if (t[static_cast<size_t>(v)] != v) return false;
      return true;
    };
    while (!is_id_on(acc)) {
      acc = power_compose(acc, sigma);
      if (++ord > 100000)
        fail(Errc::structure_violation, "reduction: witness does not permute its stable image");
    }
  }
  int m = ((k0 + ord - 1) / ord) * ord;
  Table retraction = w;
  for (int i = 1; i < m; ++i) retraction = power_compose(w, retraction);

  std::vector<VertexId> pos(static_cast<size_t>(n), -1);
  for (size_t i = 0; i < img.size(); ++i) pos[static_cast<size_t>(img[i])] = static_cast<VertexId>(i);
  ImagePtr Y = share(induced_subimage(*H.image, img));
  Table f_table(static_cast<size_t>(n));
  for (VertexId x = 0; x < n; ++x)
    f_table[static_cast<size_t>(x)] = pos[static_cast<size_t>(retraction[static_cast<size_t>(x)])];
  Table g_table(img.begin(), img.end());
  DigitalMap f(H.image, Y, f_table);
  DigitalMap g(Y, H.image, g_table);
  HSpaceStructure next = transported(H, f, g);
  HSpaceReport rep = verify_hspace(next, budget);
  if (rep.is_hspace == Status::inconclusive)
    fail(Errc::cap_exceeded, "reduction: unit laws undecided at budget");
  if (rep.is_hspace != Status::yes)
    fail(Errc::structure_violation, "reduction: transported table is not an H-space");
  next.report = rep;
  H = std::move(next);
  return true;
}

}  // namespace detail

// Reduces a connected H-space to an irreducible one, then normalizes it to
// a left-unital structure (X, p, tau) with p = mult(e,e) and
// tau = mult o (inverse of left translation by e, twice). When mult is
// symmetric at e the result is unital.
inline HSpaceStructure left_unital_reduction(const HSpaceStructure& H,
                                             std::uint64_t budget = default_budget) {
  if (!is_connected(*H.image))
    fail(Errc::not_connected, "left_unital_reduction needs a connected image");
  if (verify_hspace(H, budget).is_hspace != Status::yes)
    fail(Errc::structure_violation, "left_unital_reduction needs a verified H-space");
  HSpaceStructure cur = H;
  while (detail::reduction_step(cur, budget)) {
  }
  const int n = cur.image->size();
  const VertexId e = cur.basepoint;
  DigitalMap mu_e = left_mult(cur.image, cur.mult, e);
  std::vector<VertexId> inv(static_cast<size_t>(n), -1);
  for (VertexId y = 0; y < n; ++y) {
    VertexId v = mu_e(y);
    if (inv[static_cast<size_t>(v)] >= 0)
      fail(Errc::multiplication_not_invertible, "left translation by the basepoint is not a bijection");
    inv[static_cast<size_t>(v)] = y;
  }
  DigitalMap mu_e_inv(cur.image, cur.image, inv);
  if (!is_continuous(mu_e_inv))
    fail(Errc::structure_violation, "inverse of the basepoint translation is not continuous");
  const VertexId p = cur.at(e, e);
  std::vector<VertexId> tau(static_cast<size_t>(n) * n);
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = 0; b < n; ++b)
      tau[static_cast<size_t>(a) * n + b] = cur.at(mu_e_inv(a), mu_e_inv(b));
  HSpaceStructure out = make_hspace(cur.image, p, std::move(tau), cur.category);
  for (VertexId a = 0; a < n; ++a)
    if (out.at(p, a) != a) fail(Errc::structure_violation, "reduction output is not left-unital");
  bool symmetric_at_e = true;
  for (VertexId x = 0; x < n && symmetric_at_e; ++x) symmetric_at_e = cur.at(e, x) == cur.at(x, e);
  if (symmetric_at_e)
    for (VertexId a = 0; a < n; ++a)
      if (out.at(a, p) != a) fail(Errc::structure_violation, "symmetric reduction output is not unital");
  HSpaceReport rep = verify_hspace(out, budget);
  if (rep.is_hspace != Status::yes)
    fail(Errc::structure_violation, "reduction output failed verification");
  out.report = rep;
  return out;
}

// Adjoins an isolated unit to a magma: X = Z + {e} with e = |Z|, the magma
// table on Z x Z and projections when one argument is e. Always a unital
// H-space.
inline HSpaceStructure magma_point_extension(const MagmaStructure& M,
                                             std::uint64_t budget = default_budget) {
  detail::require_np_continuous(*M.image, M.table, M.category, "magma_point_extension");
  const int nz = M.image->size();
  const int n = nz + 1;
  const VertexId e = nz;
  std::vector<std::pair<VertexId, VertexId>> edges = M.image->edges();
  ImagePtr X = share(DigitalImage(n, edges));
  std::vector<VertexId> mult(static_cast<size_t>(n) * n);
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = 0; b < n; ++b) {
      VertexId v;
      if (a == e)
        v = b;
      else if (b == e)
        v = a;
      else
        v = M.table[static_cast<size_t>(a) * nz + b];
      mult[static_cast<size_t>(a) * n + b] = v;
    }
  HSpaceStructure out = make_hspace(X, e, std::move(mult), M.category);
  HSpaceReport rep = verify_hspace(out, budget);
  if (rep.is_hspace != Status::yes || !rep.unital)
    fail(Errc::structure_violation, "magma extension failed verification");
  out.report = rep;
  return out;
}

// The classification shape of an irreducible NP2 H-space: an isolated exact
// unit e, the rest Z, a subset A of Z x Z that is a union of NP2-components
// of the product, and a magma table tau agreeing with mult on A.
// tau, a_pairs and z_default use Z labels 0..|Z|-1 (ascending original
// vertices); z_vertices maps them back.
struct Np2Decomposition {
  std::vector<VertexId> z_vertices;
  ImagePtr z_image;  // null when Z is empty
  std::vector<std::pair<VertexId, VertexId>> a_pairs;
  std::vector<VertexId> tau;
  VertexId z_default = -1;
};

inline Np2Decomposition decompose_np2(const HSpaceStructure& H,
                                      std::uint64_t budget = default_budget) {
  if (H.category != NPCategory::np2)
    fail(Errc::not_category2, "decompose_np2 applies to category 2 structures");
  if (verify_hspace(H, budget).is_hspace != Status::yes)
    fail(Errc::structure_violation, "decompose_np2 needs a verified H-space");
  const int n = H.image->size();
  const VertexId e = H.basepoint;
  Np2Decomposition out;
  if (n == 1) return out;  // Z empty

  // the classification shape: an isolated exact unit. Irreducible
  // structures always have it; magma extensions do as well.
  bool isolated = component_of(*H.image, e) == std::vector<VertexId>{e};
  bool exact_unit = true;
  for (VertexId x = 0; x < n && exact_unit; ++x)
    exact_unit = H.at(e, x) == x && H.at(x, e) == x;
  if (!isolated || !exact_unit) {
    auto virr = is_irreducible(H.image, NPCategory::np2, budget);
    if (virr.status == Status::inconclusive)
      fail(Errc::cap_exceeded, "decompose_np2: irreducibility undecided at budget");
    if (virr.status == Status::no)
      fail(Errc::not_irreducible,
           "decompose_np2: structure is reducible and the basepoint is not an isolated exact unit");
    fail(Errc::structure_violation,
         "decompose_np2: irreducible structure without an isolated exact unit");
  }

  std::vector<VertexId> zi(static_cast<size_t>(n), -1);
  for (VertexId v = 0; v < n; ++v)
    if (v != e) {
      zi[static_cast<size_t>(v)] = static_cast<VertexId>(out.z_vertices.size());
      out.z_vertices.push_back(v);
    }
  const int m = static_cast<int>(out.z_vertices.size());
  out.z_image = share(induced_subimage(*H.image, out.z_vertices));
  out.z_default = 0;  // least-index vertex of Z

  // A = preimage of Z, restricted to Z x Z; must be a union of components
  std::vector<bool> in_a(static_cast<size_t>(m) * m, false);
  for (VertexId u = 0; u < m; ++u)
    for (VertexId v = 0; v < m; ++v)
      if (H.at(out.z_vertices[static_cast<size_t>(u)], out.z_vertices[static_cast<size_t>(v)]) != e)
        in_a[static_cast<size_t>(u) * m + v] = true;
  ProductImage prod({out.z_image, out.z_image}, 2);
  for (const auto& block : components(*prod.carrier()).blocks) {
    bool any = false, all = true;
    for (VertexId r : block) {
      if (in_a[static_cast<size_t>(r)])
        any = true;
      else
        all = false;
    }
    if (any && !all)
      fail(Errc::structure_violation, "decompose_np2: A is not a union of product components");
  }

  out.tau.assign(static_cast<size_t>(m) * m, out.z_default);
  for (VertexId u = 0; u < m; ++u)
    for (VertexId v = 0; v < m; ++v)
      if (in_a[static_cast<size_t>(u) * m + v]) {
        out.a_pairs.emplace_back(u, v);
        out.tau[static_cast<size_t>(u) * m + v] =
            zi[static_cast<size_t>(H.at(out.z_vertices[static_cast<size_t>(u)],
                                        out.z_vertices[static_cast<size_t>(v)]))];
      }
  if (detail::continuity_violation(*out.z_image, out.tau, NPCategory::np2))
    fail(Errc::structure_violation, "decompose_np2: extracted magma is not continuous");
  return out;
}

// Piecewise reconstruction from a decomposition; inverse of decompose_np2.
inline std::vector<VertexId> reconstruct_multiplication(const Np2Decomposition& d, int n,
                                                        VertexId e) {
  std::vector<VertexId> zi(static_cast<size_t>(n), -1);
  for (size_t i = 0; i < d.z_vertices.size(); ++i)
    zi[static_cast<size_t>(d.z_vertices[i])] = static_cast<VertexId>(i);
  const int m = static_cast<int>(d.z_vertices.size());
  std::vector<bool> in_a(static_cast<size_t>(m) * m, false);
  for (auto [u, v] : d.a_pairs) in_a[static_cast<size_t>(u) * m + v] = true;
  std::vector<VertexId> mult(static_cast<size_t>(n) * n);
  for (VertexId x = 0; x < n; ++x)
    for (VertexId y = 0; y < n; ++y) {
      VertexId val;
      if (x == e)
        val = y;
      else if (y == e)
        val = x;
      else {
        VertexId u = zi[static_cast<size_t>(x)], v = zi[static_cast<size_t>(y)];
        val = in_a[static_cast<size_t>(u) * m + v]
                  ? d.z_vertices[static_cast<size_t>(d.tau[static_cast<size_t>(u) * m + v])]
                  : e;
      }
      mult[static_cast<size_t>(x) * n + y] = val;
    }
  return mult;
}

inline constexpr int hspace_search_default_cap = 5;

// Exhaustive backtracking over multiplication tables on (X, e): the
// basepoint row and column are filled first and pruned against the homotopy
// class of the identity (the unit laws constrain only those slices), then
// the remaining cells are filled with incremental NP-continuity checks.
// Every leaf is a verified H-space; the visitor may return false to stop.
// Returns the number of structures visited.
template <typename Visitor>
std::uint64_t for_each_hspace_multiplication(const ImagePtr& X, VertexId e, NPCategory cat,
                                             Visitor&& visit,
                                             int size_cap = hspace_search_default_cap,
                                             std::uint64_t class_budget = default_budget) {
  const int n = X->size();
  if (e < 0 || e >= n) fail(Errc::vertex_out_of_range, "basepoint out of range");
  if (n > size_cap)
    fail(Errc::cap_exceeded, "hspace search: image size " + std::to_string(n) +
                                 " exceeds cap " + std::to_string(size_cap));
  detail::StepContext selfspace{X.get(), X.get(), cat, std::nullopt};
  detail::Table id_table(static_cast<size_t>(n));
  std::iota(id_table.begin(), id_table.end(), 0);
  auto comp = detail::explore_component(selfspace, id_table, class_budget);
  if (!comp.complete)
    fail(Errc::cap_exceeded, "hspace search: identity class undecided at budget");
  detail::TableSet class_id;
  for (auto& t : comp.order) class_id.insert(t);
  detail::StepContext pointed_space{X.get(), X.get(), cat, std::make_pair(e, e)};
  auto pcomp = detail::explore_component(pointed_space, id_table, class_budget);
  if (!pcomp.complete)
    fail(Errc::cap_exceeded, "hspace search: pointed identity class undecided at budget");
  detail::TableSet pclass_id;
  for (auto& t : pcomp.order) pclass_id.insert(t);

  // cell fill order: basepoint row, basepoint column, rest row-major
  std::vector<VertexId> cells;
  for (VertexId b = 0; b < n; ++b) cells.push_back(e * n + b);
  for (VertexId a = 0; a < n; ++a)
    if (a != e) cells.push_back(a * n + e);
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = 0; b < n; ++b)
      if (a != e && b != e) cells.push_back(a * n + b);
  const int total = n * n;

  // earlier product-neighbors of each cell in fill order
  ProductImage prod({X, X}, level(cat));
  std::vector<std::vector<VertexId>> earlier(static_cast<size_t>(total));
  if (!X->complete()) {
    std::vector<int> pos(static_cast<size_t>(total));
    for (int i = 0; i < total; ++i) pos[static_cast<size_t>(cells[static_cast<size_t>(i)])] = i;
    for (int i = 0; i < total; ++i)
      for (VertexId c : prod.carrier()->neighborhood(cells[static_cast<size_t>(i)]))
        if (pos[static_cast<size_t>(c)] < i) earlier[static_cast<size_t>(i)].push_back(c);
  }

  std::vector<VertexId> mult(static_cast<size_t>(total), 0);
  HSpaceReport report;
  report.is_hspace = Status::yes;
  std::uint64_t count = 0;
  const bool complete_image = X->complete();

  detail::Table mu_e(static_cast<size_t>(n)), nu_e(static_cast<size_t>(n));
  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i == total) {
      ++count;
      return visit(static_cast<const std::vector<VertexId>&>(mult), report);
    }
    const VertexId cell = cells[static_cast<size_t>(i)];
    for (VertexId val = 0; val < n; ++val) {
      if (!complete_image) {
        bool ok = true;
        for (VertexId c : earlier[static_cast<size_t>(i)])
          if (!X->adj(mult[static_cast<size_t>(c)], val)) {
            ok = false;
            break;
          }
        if (!ok) continue;
      }
      mult[static_cast<size_t>(cell)] = val;
      if (i == n - 1) {
        // basepoint row complete: mult(e,.) must be homotopic to id
        for (VertexId b = 0; b < n; ++b) mu_e[static_cast<size_t>(b)] = mult[static_cast<size_t>(e) * n + b];
        if (!class_id.count(mu_e)) continue;
      }
      if (i == 2 * n - 2) {
        for (VertexId a = 0; a < n; ++a) nu_e[static_cast<size_t>(a)] = mult[static_cast<size_t>(a) * n + e];
        if (!class_id.count(nu_e)) continue;
        report.left_unit_exact = mu_e == id_table;
        report.right_unit_exact = nu_e == id_table;
        report.unital = report.left_unit_exact && report.right_unit_exact;
        report.pointed = (mult[static_cast<size_t>(e) * n + e] == e && pclass_id.count(mu_e) &&
                          pclass_id.count(nu_e))
                             ? Status::yes
                             : Status::no;
      }
      if (!rec(i + 1)) return false;
    }
    return true;
  };
  rec(0);
  return count;
}

inline std::vector<HSpaceStructure> search_hspace_multiplications(
    const ImagePtr& X, VertexId e, NPCategory cat, std::size_t max_results = SIZE_MAX,
    int size_cap = hspace_search_default_cap, std::uint64_t class_budget = default_budget) {
  std::vector<HSpaceStructure> out;
  for_each_hspace_multiplication(
      X, e, cat,
      [&](const std::vector<VertexId>& mult, const HSpaceReport& rep) {
        HSpaceStructure H = make_hspace(X, e, mult, cat);
        H.report = rep;
        out.push_back(std::move(H));
        return out.size() < max_results;
      },
      size_cap, class_budget);
  return out;
}

// ---- fixtures -----------------------------------------------------------

using FixtureValue = std::variant<DigitalImage, DigitalMap, HSpaceStructure, MagmaStructure>;

namespace detail {

inline ImagePtr five_twist_image_ptr() {
  return share(DigitalImage(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {3, 5}, {5, 0}}));
}

inline std::vector<VertexId> five_twist_mult(bool pointed_variant) {
  // vertices 0..4 are the 5-cycle, 5 is the twin of 4 (adjacent to 3 and 0)
  std::vector<VertexId> t(36);
  auto at = [&](VertexId a, VertexId b) -> VertexId& { return t[static_cast<size_t>(a) * 6 + b]; };
  for (VertexId i = 0; i < 5; ++i)
    for (VertexId j = 0; j < 5; ++j) at(i, j) = (i + j) % 5;
  for (VertexId i = 0; i < 5; ++i) at(i, 5) = at(5, i) = (i + 4) % 5;
  at(5, 5) = 3;
  if (pointed_variant) at(0, 5) = at(5, 0) = 5;  // the unit acts exactly
  return t;
}

inline std::vector<VertexId> cyclic_table(int n) {
  std::vector<VertexId> t(static_cast<size_t>(n) * n);
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = 0; b < n; ++b) t[static_cast<size_t>(a) * n + b] = (a + b) % n;
  return t;
}

}  // namespace detail

// Bit-exact tables of the worked examples. Names:
//   five_twist_image, five_twist_mu, five_twist_tau, rho, d1, d4,
//   z5_cycle_group, disjoint_c5_point, two_point_constant, z4_k4_group
inline FixtureValue fixture(const std::string& name) {
  if (name == "five_twist_image") return *detail::five_twist_image_ptr();
  if (name == "five_twist_mu")
    return make_hspace(detail::five_twist_image_ptr(), 0, detail::five_twist_mult(false),
                       NPCategory::np1);
  if (name == "five_twist_tau")
    return make_hspace(detail::five_twist_image_ptr(), 0, detail::five_twist_mult(true),
                       NPCategory::np1);
  if (name == "rho") {
    auto w = detail::five_twist_image_ptr();
    return DigitalMap(w, w, {0, 1, 2, 3, 4, 4});
  }
  if (name == "d1") {
    auto w = detail::five_twist_image_ptr();
    return DigitalMap(w, w, {0, 1, 1, 1, 1, 1});
  }
  if (name == "d4") {
    auto w = detail::five_twist_image_ptr();
    return DigitalMap(w, w, {0, 4, 4, 4, 4, 4});
  }
  if (name == "z5_cycle_group") {
    ImagePtr c5 = share(DigitalImage(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}));
    return make_hspace(c5, 0, detail::cyclic_table(5), NPCategory::np1);
  }
  if (name == "disjoint_c5_point") {
    ImagePtr x = share(DigitalImage(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}}));
    std::vector<VertexId> t(36);
    for (VertexId a = 0; a < 6; ++a)
      for (VertexId b = 0; b < 6; ++b) {
        VertexId v;
        if (a == 5)
          v = b;
        else if (b == 5)
          v = a;
        else
          v = (a + b) % 5;
        t[static_cast<size_t>(a) * 6 + b] = v;
      }
    return make_hspace(x, 5, std::move(t), NPCategory::np1);
  }
  if (name == "two_point_constant") {
    ImagePtr k2 = share(DigitalImage(2, {{0, 1}}));
    return make_hspace(k2, 0, {0, 0, 0, 0}, NPCategory::np2);
  }
  if (name == "z4_k4_group") {
    ImagePtr k4 = share(DigitalImage(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
    return make_hspace(k4, 0, detail::cyclic_table(4), NPCategory::np1);
  }
  fail(Errc::unknown_fixture, "unknown fixture: " + name);
}

}  // namespace dtop

#endif
