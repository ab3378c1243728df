#ifndef DTOP_MAPS_HPP
#define DTOP_MAPS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "core.hpp"
#include "image.hpp"

namespace dtop {

// A total function between two digital images, stored as a value table.
class DigitalMap {
 public:
  DigitalMap(ImagePtr dom, ImagePtr cod, std::vector<VertexId> values)
      : dom_(std::move(dom)), cod_(std::move(cod)), values_(std::move(values)) {
    if (!dom_ || !cod_) fail(Errc::domain_mismatch, "map needs domain and codomain images");
    if (static_cast<int>(values_.size()) != dom_->size())
      fail(Errc::domain_mismatch, "map table has " + std::to_string(values_.size()) +
                                      " entries for domain of " + std::to_string(dom_->size()));
    for (VertexId y : values_)
      if (y < 0 || y >= cod_->size())
        fail(Errc::vertex_out_of_range, "map value " + std::to_string(y) + " outside codomain");
  }

  const DigitalImage& domain() const { return *dom_; }
  const DigitalImage& codomain() const { return *cod_; }
  const ImagePtr& domain_ptr() const { return dom_; }
  const ImagePtr& codomain_ptr() const { return cod_; }
  VertexId operator()(VertexId x) const { return values_[static_cast<size_t>(x)]; }
  const std::vector<VertexId>& values() const { return values_; }

  friend bool operator==(const DigitalMap& f, const DigitalMap& g) {
    return *f.dom_ == *g.dom_ && *f.cod_ == *g.cod_ && f.values_ == g.values_;
  }
  friend bool operator!=(const DigitalMap& f, const DigitalMap& g) { return !(f == g); }

 private:
  ImagePtr dom_, cod_;
  std::vector<VertexId> values_;
};

inline bool is_continuous(const DigitalMap& f) {
  const DigitalImage& X = f.domain();
  const DigitalImage& Y = f.codomain();
  for (VertexId a = 0; a < X.size(); ++a)
    for (VertexId b : X.neighborhood(a))
      if (!Y.adj(f(a), f(b))) return false;
  return true;
}

// NP_u product of a list of images: tuples are adjacent when their
// coordinates differ in at most u positions and are adjacent wherever they
// differ. Carrier vertices are mixed-radix ranks, last factor fastest.
class ProductImage {
 public:
  ProductImage(std::vector<ImagePtr> factors, int u) : factors_(std::move(factors)), u_(u) {
    const int k = static_cast<int>(factors_.size());
    if (k < 1) fail(Errc::bad_level, "product needs at least one factor");
    if (u < 1 || u > k)
      fail(Errc::bad_level,
           "NP level " + std::to_string(u) + " invalid for " + std::to_string(k) + " factors");
    long long total = 1;
    for (auto& f : factors_) {
      total *= f->size();
      if (total > (1 << 22)) fail(Errc::cap_exceeded, "product carrier too large");
    }
    const int n = static_cast<int>(total);
    std::vector<std::pair<VertexId, VertexId>> edges;
    std::vector<VertexId> s(static_cast<size_t>(k)), t(static_cast<size_t>(k));
    for (VertexId r1 = 0; r1 < n; ++r1) {
      unrank_into(r1, s);
      for (VertexId r2 = r1 + 1; r2 < n; ++r2) {
        unrank_into(r2, t);
        int diffs = 0;
        bool ok = true;
        for (int i = 0; i < k && ok; ++i)
          if (s[static_cast<size_t>(i)] != t[static_cast<size_t>(i)]) {
            ++diffs;
            ok = diffs <= u && factors_[static_cast<size_t>(i)]->adj(s[static_cast<size_t>(i)],
                                                                     t[static_cast<size_t>(i)]);
          }
        if (ok) edges.emplace_back(r1, r2);
      }
    }
    carrier_ = share(DigitalImage(n, edges));
  }

  const ImagePtr& carrier() const { return carrier_; }
  const std::vector<ImagePtr>& factors() const { return factors_; }
  int np_level() const { return u_; }

  VertexId rank(const std::vector<VertexId>& tuple) const {
    VertexId r = 0;
    for (size_t i = 0; i < factors_.size(); ++i) r = r * factors_[i]->size() + tuple[i];
    return r;
  }

  std::vector<VertexId> unrank(VertexId r) const {
    std::vector<VertexId> t(factors_.size());
    unrank_into(r, t);
    return t;
  }

 private:
  void unrank_into(VertexId r, std::vector<VertexId>& t) const {
    for (size_t i = factors_.size(); i-- > 0;) {
      t[i] = r % factors_[i]->size();
      r /= factors_[i]->size();
    }
  }

  std::vector<ImagePtr> factors_;
  int u_;
  ImagePtr carrier_;
};

inline ProductImage np_product(std::vector<ImagePtr> factors, int u) {
  return ProductImage(std::move(factors), u);
}
inline ProductImage np_product(const ImagePtr& x, const ImagePtr& y, NPCategory cat) {
  return ProductImage({x, y}, level(cat));
}

inline DigitalMap compose(const DigitalMap& g, const DigitalMap& f) {
  if (f.codomain() != g.domain())
    fail(Errc::domain_mismatch, "compose: codomain of inner map differs from domain of outer map");
  std::vector<VertexId> values(f.values().size());
  for (size_t x = 0; x < values.size(); ++x) values[x] = g(f(static_cast<VertexId>(x)));
  return DigitalMap(f.domain_ptr(), g.codomain_ptr(), std::move(values));
}

inline DigitalMap identity_map(const ImagePtr& img) {
  std::vector<VertexId> values(static_cast<size_t>(img->size()));
  std::iota(values.begin(), values.end(), 0);
  return DigitalMap(img, img, std::move(values));
}

inline DigitalMap constant_map(const ImagePtr& dom, const ImagePtr& cod, VertexId c) {
  if (c < 0 || c >= cod->size()) fail(Errc::vertex_out_of_range, "constant outside codomain");
  return DigitalMap(dom, cod, std::vector<VertexId>(static_cast<size_t>(dom->size()), c));
}

struct PairMapResult {
  DigitalMap map;        // into the NP product carrier of (cod, cod)
  bool continuous;       // always true for NP2; an explicit check for NP1
};

// x |-> (f(x), g(x)) into NP_cat(Y,Y). For cat=2 this is always continuous
// when f and g are; for cat=1 it may not be (the diagonal fails), so the
// flag reports an explicit check instead of erroring.
inline PairMapResult pair_map(const DigitalMap& f, const DigitalMap& g, NPCategory cat) {
  if (f.domain() != g.domain() || f.codomain() != g.codomain())
    fail(Errc::domain_mismatch, "pair_map needs a common domain and codomain");
  ProductImage prod({f.codomain_ptr(), f.codomain_ptr()}, level(cat));
  const int m = f.codomain().size();
  std::vector<VertexId> values(static_cast<size_t>(f.domain().size()));
  for (VertexId x = 0; x < f.domain().size(); ++x) values[static_cast<size_t>(x)] = f(x) * m + g(x);
  DigitalMap pm(f.domain_ptr(), prod.carrier(), std::move(values));
  bool cont = is_continuous(pm);
  return PairMapResult{std::move(pm), cont};
}

// (x1,x2) |-> (f1(x1), f2(x2)) between NP_cat products; continuous in both
// categories for continuous inputs.
inline DigitalMap cross_map(const DigitalMap& f1, const DigitalMap& f2, NPCategory cat) {
  if (!is_continuous(f1) || !is_continuous(f2))
    fail(Errc::not_continuous, "cross_map requires continuous factors");
  ProductImage dom({f1.domain_ptr(), f2.domain_ptr()}, level(cat));
  ProductImage cod({f1.codomain_ptr(), f2.codomain_ptr()}, level(cat));
  const int n2 = f2.domain().size();
  const int m2 = f2.codomain().size();
  std::vector<VertexId> values(static_cast<size_t>(dom.carrier()->size()));
  for (VertexId r = 0; r < dom.carrier()->size(); ++r)
    values[static_cast<size_t>(r)] = f1(r / n2) * m2 + f2(r % n2);
  return DigitalMap(dom.carrier(), cod.carrier(), std::move(values));
}

namespace detail {

inline void check_mult_table(const DigitalImage& img, const std::vector<VertexId>& mult) {
  const int n = img.size();
  if (static_cast<int>(mult.size()) != n * n)
    fail(Errc::size_mismatch, "multiplication table must have n*n entries");
  for (VertexId v : mult)
    if (v < 0 || v >= n) fail(Errc::vertex_out_of_range, "multiplication value out of range");
}

}  // namespace detail

// Slice maps of a multiplication table: left_mult(x)(y) = mult(x,y) and
// right_mult(x)(y) = mult(y,x).
inline DigitalMap left_mult(const ImagePtr& img, const std::vector<VertexId>& mult, VertexId x) {
  detail::check_mult_table(*img, mult);
  const int n = img->size();
  if (x < 0 || x >= n) fail(Errc::vertex_out_of_range, "left_mult point out of range");
  std::vector<VertexId> values(static_cast<size_t>(n));
  for (VertexId y = 0; y < n; ++y) values[static_cast<size_t>(y)] = mult[static_cast<size_t>(x) * n + y];
  return DigitalMap(img, img, std::move(values));
}

inline DigitalMap right_mult(const ImagePtr& img, const std::vector<VertexId>& mult, VertexId x) {
  detail::check_mult_table(*img, mult);
  const int n = img->size();
  if (x < 0 || x >= n) fail(Errc::vertex_out_of_range, "right_mult point out of range");
  std::vector<VertexId> values(static_cast<size_t>(n));
  for (VertexId y = 0; y < n; ++y) values[static_cast<size_t>(y)] = mult[static_cast<size_t>(y) * n + x];
  return DigitalMap(img, img, std::move(values));
}

// View a multiplication table as a map out of the NP product carrier, so
// one continuity checker serves all arities.
inline DigitalMap mult_as_map(const ImagePtr& img, const std::vector<VertexId>& mult,
                              NPCategory cat) {
  detail::check_mult_table(*img, mult);
  ProductImage prod({img, img}, level(cat));
  return DigitalMap(prod.carrier(), img, std::vector<VertexId>(mult));
}

inline constexpr int enumerate_maps_default_cap = 8;

// Every continuous map X -> Y exactly once, lexicographic in the value
// table, by backtracking vertex-by-vertex with edge-consistency pruning.
template <typename Visitor>
void for_each_continuous_map(const ImagePtr& X, const ImagePtr& Y, Visitor&& visit) {
  const int n = X->size();
  std::vector<VertexId> table(static_cast<size_t>(n), 0);
  // earlier neighbors of each vertex, for incremental continuity checks
  std::vector<std::vector<VertexId>> earlier(static_cast<size_t>(n));
  for (VertexId v = 0; v < n; ++v)
    for (VertexId u : X->neighborhood(v))
      if (u < v) earlier[static_cast<size_t>(v)].push_back(u);
  const DigitalImage& cod = *Y;
  std::function<bool(int)> rec = [&](int v) -> bool {
    if (v == n) return visit(static_cast<const std::vector<VertexId>&>(table));
    for (VertexId y = 0; y < cod.size(); ++y) {
      bool ok = true;
      for (VertexId u : earlier[static_cast<size_t>(v)])
        if (!cod.adj(table[static_cast<size_t>(u)], y)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      table[static_cast<size_t>(v)] = y;
      if (!rec(v + 1)) return false;
    }
    return true;
  };
  rec(0);
}

inline std::vector<DigitalMap> enumerate_continuous_maps(const ImagePtr& X, const ImagePtr& Y,
                                                         int cap = enumerate_maps_default_cap) {
  if (X->size() > cap)
    fail(Errc::cap_exceeded,
         "enumerate_continuous_maps: domain size " + std::to_string(X->size()) + " exceeds cap");
  std::vector<DigitalMap> out;
  for_each_continuous_map(X, Y, [&](const std::vector<VertexId>& t) {
    out.emplace_back(X, Y, t);
    return true;
  });
  return out;
}

}  // namespace dtop

#endif
