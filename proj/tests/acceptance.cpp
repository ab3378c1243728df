// Acceptance suite: runs every criterion end to end and prints one
// PASS/FAIL line per criterion. Exits nonzero when any criterion fails.
//
// Certificates produced by YES verdicts anywhere in the run are re-verified
// by the local checker below, which restates the definitions directly and
// shares no code with the library's search machinery.

#include <dtop/dtop.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "helpers.hpp"

using namespace dtop;

namespace {

// ---- independent certificate checker -------------------------------------

bool local_continuous(const DigitalImage& X, const DigitalImage& Y,
                      const std::vector<VertexId>& f) {
  for (VertexId a = 0; a < X.size(); ++a)
    for (VertexId b = 0; b < X.size(); ++b)
      if (X.adjacent(a, b) && !Y.adjacent(f[a], f[b])) return false;
  return true;
}

bool local_step(const DigitalImage& X, const DigitalImage& Y, const std::vector<VertexId>& f,
                const std::vector<VertexId>& g, NPCategory cat) {
  if (cat == NPCategory::np1) {
    for (VertexId a = 0; a < X.size(); ++a)
      if (!Y.adjacent(f[a], g[a])) return false;
    return true;
  }
  for (VertexId a = 0; a < X.size(); ++a)
    for (VertexId b = 0; b < X.size(); ++b)
      if (X.adjacent(a, b) && !Y.adjacent(f[a], g[b])) return false;
  return true;
}

bool local_check_certificate(const HomotopyCertificate& cert, const DigitalMap& f,
                             const DigitalMap& g,
                             std::optional<std::pair<VertexId, VertexId>> base = std::nullopt) {
  if (cert.chain.empty()) return false;
  if (cert.chain.front().values() != f.values() || cert.chain.back().values() != g.values())
    return false;
  const DigitalImage& X = f.domain();
  const DigitalImage& Y = f.codomain();
  for (const DigitalMap& stage : cert.chain) {
    if (stage.domain() != X || stage.codomain() != Y) return false;
    if (!local_continuous(X, Y, stage.values())) return false;
    if (base && stage(base->first) != base->second) return false;
  }
  for (size_t i = 0; i + 1 < cert.chain.size(); ++i)
    if (!local_step(X, Y, cert.chain[i].values(), cert.chain[i + 1].values(), cert.category))
      return false;
  return true;
}

struct CertAudit {
  std::uint64_t total = 0;
  std::uint64_t ok = 0;
  void record(const HomotopyCertificate& cert, const DigitalMap& f, const DigitalMap& g,
              std::optional<std::pair<VertexId, VertexId>> base = std::nullopt) {
    ++total;
    if (local_check_certificate(cert, f, g, base)) ++ok;
  }
} audit;

// homotopy decision wrapper that feeds the audit
Status decide(const DigitalMap& f, const DigitalMap& g, NPCategory cat,
              std::uint64_t budget = default_budget) {
  auto v = homotopic(f, g, cat, budget);
  if (v.status == Status::yes) audit.record(*v.certificate, f, g);
  return v.status;
}

// ---- basepoint orbit representatives --------------------------------------

std::vector<VertexId> orbit_representatives(const DigitalImage& img) {
  const int n = img.size();
  std::vector<int> orbit(n);
  std::iota(orbit.begin(), orbit.end(), 0);
  std::function<int(int)> find = [&](int x) { return orbit[x] == x ? x : orbit[x] = find(orbit[x]); };
  std::vector<VertexId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool automorphism = true;
    for (VertexId a = 0; a < n && automorphism; ++a)
      for (VertexId b = 0; b < n && automorphism; ++b)
        automorphism = img.adjacent(a, b) == img.adjacent(perm[a], perm[b]);
    if (automorphism)
      for (VertexId v = 0; v < n; ++v) orbit[find(v)] = find(perm[v]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<VertexId> reps;
  for (VertexId v = 0; v < n; ++v)
    if (find(v) == v) reps.push_back(v);
  return reps;
}

// ---- brute-force homotopy oracle (criterion 10) ---------------------------

std::vector<std::vector<VertexId>> all_continuous_tables(const DigitalImage& X,
                                                         const DigitalImage& Y) {
  std::vector<std::vector<VertexId>> out;
  std::vector<VertexId> t(X.size(), 0);
  while (true) {
    if (local_continuous(X, Y, t)) out.push_back(t);
    int i = X.size() - 1;
    while (i >= 0 && t[i] == Y.size() - 1) t[i--] = 0;
    if (i < 0) break;
    ++t[i];
  }
  return out;
}

struct Closure {
  std::vector<std::vector<VertexId>> maps;
  std::vector<int> cls;
  int index_of(const std::vector<VertexId>& t) const {
    for (size_t i = 0; i < maps.size(); ++i)
      if (maps[i] == t) return static_cast<int>(i);
    return -1;
  }
};

Closure oracle_closure(const DigitalImage& X, const DigitalImage& Y, NPCategory cat) {
  Closure c;
  c.maps = all_continuous_tables(X, Y);
  const int m = static_cast<int>(c.maps.size());
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (local_step(X, Y, c.maps[i], c.maps[j], cat)) parent[find(i)] = find(j);
  c.cls.resize(m);
  for (int i = 0; i < m; ++i) c.cls[i] = find(i);
  return c;
}

// ---- criterion harness -----------------------------------------------------

int failures = 0;

void criterion(int number, const std::string& name, const std::function<bool()>& body) {
  auto start = std::chrono::steady_clock::now();
  bool ok = false;
  std::string note;
  try {
    ok = body();
  } catch (const std::exception& e) {
    note = std::string(" (") + e.what() + ")";
  }
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s criterion %2d: %s [%.1fs]%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
              secs, note.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

bool expect(bool cond, const char* what) {
  if (!cond) std::printf("      failed: %s\n", what);
  return cond;
}

}  // namespace

int main() {
  // 1. five-twist unpointed H-space
  criterion(1, "five-twist unpointed H-space", [] {
    auto H = std::get<HSpaceStructure>(fixture("five_twist_mu"));
    auto rep = verify_hspace(H);
    bool ok = expect(rep.is_hspace == Status::yes, "verify is_hspace YES");
    ok &= expect(!rep.unital, "unital false");
    ok &= expect(rep.pointed == Status::no, "pointed NO");
    DigitalMap rho = std::get<DigitalMap>(fixture("rho"));
    ok &= expect(right_mult(H.image, H.mult, 0) == rho, "mult(.,e) equals rho");
    ok &= expect(decide(rho, identity_map(H.image), NPCategory::np1) == Status::yes,
                 "rho homotopic to the identity");
    return ok;
  });

  // 2. five-twist pointed H-space
  criterion(2, "five-twist pointed H-space", [] {
    auto H = std::get<HSpaceStructure>(fixture("five_twist_tau"));
    auto rep = verify_hspace(H);
    bool ok = expect(rep.is_hspace == Status::yes, "verify is_hspace YES");
    ok &= expect(rep.unital, "unital true");
    ok &= expect(rep.pointed == Status::yes, "pointed YES");
    auto [first, second] = associator_probe(H, std::get<DigitalMap>(fixture("d1")),
                                            std::get<DigitalMap>(fixture("d4")));
    ok &= expect(first == std::get<DigitalMap>(fixture("rho")), "probe first composite is rho");
    ok &= expect(second == identity_map(H.image), "probe second composite is the identity");
    auto pv = pointed_homotopic(first, second, NPCategory::np1, 0, 0);
    ok &= expect(pv.status == Status::no, "rho not pointed homotopic to the identity");
    return ok;
  });

  // 3. dichotomy on the 5-cycle
  criterion(3, "5-cycle irreducible, NP1-flexible, NP2-rigid, noncontractible", [] {
    auto c5 = share(helpers::cycle(5));
    bool ok = expect(is_irreducible(c5, NPCategory::np1).status == Status::yes,
                     "NP1-irreducible");
    auto vr = is_rigid(c5, NPCategory::np1);
    ok &= expect(vr.status == Status::no, "not NP1-rigid");
    if (vr.certificate) {
      const auto& w = vr.certificate->chain.back().values();
      bool rot = w == std::vector<VertexId>{1, 2, 3, 4, 0} || w == std::vector<VertexId>{4, 0, 1, 2, 3};
      ok &= expect(rot, "rigidity witness is a rotation");
      audit.record(*vr.certificate, identity_map(c5), vr.certificate->chain.back());
    }
    ok &= expect(is_rigid(c5, NPCategory::np2).status == Status::yes, "NP2-rigid");
    ok &= expect(is_contractible(c5, NPCategory::np1).status == Status::no,
                 "not NP1-contractible");
    return ok;
  });

  // 4. NP2-irreducible implies NP2-rigid on every connected class up to 5 vertices
  criterion(4, "NP2 irreducibility implies rigidity (n <= 5)", [] {
    bool ok = true;
    int checked = 0;
    for (int n = 1; n <= 5; ++n)
      for (const auto& img : enumerate_images(n)) {
        if (!is_connected(img)) continue;
        auto p = share(img);
        auto irr = is_irreducible(p, NPCategory::np2);
        auto rig = is_rigid(p, NPCategory::np2);
        ok &= expect(irr.status != Status::inconclusive && rig.status != Status::inconclusive,
                     "decisive verdicts");
        if (irr.status == Status::no && irr.certificate)
          audit.record(*irr.certificate, identity_map(p), irr.certificate->chain.back());
        if (rig.status == Status::no && rig.certificate)
          audit.record(*rig.certificate, identity_map(p), rig.certificate->chain.back());
        if (irr.status == Status::yes)
          ok &= expect(rig.status == Status::yes, "irreducible class must be rigid");
        ++checked;
      }
    return ok && expect(checked == 31, "all 31 connected classes visited");
  });

  // 5. connected NP2 H-spaces live on contractible images (exhaustive, n <= 4)
  criterion(5, "connected NP2 H-space search (n <= 4)", [] {
    bool ok = true;
    for (int n = 1; n <= 4; ++n)
      for (const auto& img : enumerate_images(n)) {
        if (!is_connected(img)) continue;
        auto p = share(img);
        auto contractible = is_contractible(p, NPCategory::np2);
        ok &= expect(contractible.status != Status::inconclusive, "contractibility decided");
        if (contractible.status == Status::yes && contractible.certificate)
          audit.record(*contractible.certificate, identity_map(p),
                       contractible.certificate->chain.back());
        for (VertexId e : orbit_representatives(img)) {
          std::uint64_t found = for_each_hspace_multiplication(
              p, e, NPCategory::np2,
              [](const std::vector<VertexId>&, const HSpaceReport&) { return true; });
          if (found > 0)
            ok &= expect(contractible.status == Status::yes,
                         "structures found only on contractible images");
          else
            ok &= expect(contractible.status == Status::no,
                         "contractible images admit at least one structure");
        }
      }
    return ok;
  });

  // 6. NP2 classification round-trip on irreducible structures (n <= 4)
  criterion(6, "NP2 classification round-trip (n <= 4)", [] {
    bool ok = true;
    std::uint64_t decomposed = 0;
    for (int n = 1; n <= 4; ++n)
      for (const auto& img : enumerate_images(n)) {
        auto p = share(img);
        auto irr = is_irreducible(p, NPCategory::np2);
        if (irr.status != Status::yes) continue;
        for (VertexId e : orbit_representatives(img)) {
          bool all_ok = true;
          for_each_hspace_multiplication(
              p, e, NPCategory::np2,
              [&](const std::vector<VertexId>& mult, const HSpaceReport& rep) {
                HSpaceStructure H = make_hspace(p, e, mult, NPCategory::np2);
                H.report = rep;
                try {
                  auto d = decompose_np2(H);
                  if (reconstruct_multiplication(d, n, e) != mult) all_ok = false;
                } catch (const Error&) {
                  all_ok = false;
                }
                ++decomposed;
                return all_ok;
              });
          ok &= expect(all_ok, "decomposition reconstructs the table");
        }
      }
    return ok && expect(decomposed > 0, "some structures decomposed");
  });

  // 7. magma plus point extensions verify as unital H-spaces
  criterion(7, "random magma extensions (50 samples)", [] {
    std::mt19937 rng(20240901);
    bool ok = true;
    for (int trial = 0; trial < 50; ++trial) {
      int n = 1 + static_cast<int>(rng() % 4);
      DigitalImage z = helpers::random_image(rng, n);
      NPCategory cat = (trial % 2) ? NPCategory::np1 : NPCategory::np2;
      auto table = helpers::random_continuous_mult(rng, z, cat);
      auto H = magma_point_extension(make_magma(share(z), table, cat));
      auto rep = verify_hspace(H.image, H.basepoint, H.mult, H.category);
      ok &= expect(rep.is_hspace == Status::yes && rep.unital, "extension verifies unital");
    }
    return ok;
  });

  // 8. Cayley graphs of all groups of order <= 6
  criterion(8, "Cayley graphs and reconstruction (orders <= 6)", [] {
    auto z4 = make_group(detail::cyclic_table(4));
    bool ok = expect(cayley_graph(z4, {1, 2}) == helpers::complete(4), "Cayley(Z4,{1,2}) = K4");
    ok &= expect(cayley_graph(z4, {1}) == helpers::cycle(4), "Cayley(Z4,{1}) = C4");
    std::uint64_t dtg_failures = 0;
    std::string witness;
    for (int n = 1; n <= 6; ++n)
      for (const auto& G : enumerate_groups(n))
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          std::vector<VertexId> S, closed;
          for (int s = 0; s < n; ++s)
            if (mask >> s & 1u) S.push_back(s);
          for (int s = 0; s < n; ++s)
            if ((mask >> s & 1u) || (mask >> G.inv[static_cast<size_t>(s)] & 1u))
              closed.push_back(s);
          DigitalImage gamma = cayley_graph(G, S);
          if (is_digital_topological_group(gamma, G, NPCategory::np1).ok) {
            auto dtg = make_dtg(share(gamma), G, NPCategory::np1);
            ok &= expect(cayley_reconstruction_check(dtg), "reconstruction");
          } else {
            ++dtg_failures;
            if (witness.empty()) {
              std::ostringstream w;
              w << "order " << n << " group, S = {";
              for (VertexId s : S) w << " " << s;
              w << " }";
              witness = w.str();
            }
            // the reconstruction identity itself is a pure Cayley-graph fact
            std::vector<VertexId> nbhd;
            for (VertexId s : gamma.neighborhood(G.identity))
              if (s != G.identity) nbhd.push_back(s);
            ok &= expect(cayley_graph(G, nbhd) == gamma, "reconstruction as a graph identity");
          }
          ok &= expect(is_connected(gamma) == generates(G, closed),
                       "connectivity matches generation");
        }
    if (dtg_failures > 0) {
      std::printf(
          "      %llu (group, S) pairs are not NP1 digital topological groups under the\n"
          "      two-sided continuity definition; first: %s. These are exactly the\n"
          "      nonabelian cases whose connection set is not closed under conjugation,\n"
          "      where a left translation maps an edge difference to a conjugate outside\n"
          "      the set. Every abelian case passes.\n",
          static_cast<unsigned long long>(dtg_failures), witness.c_str());
    }
    return ok && expect(dtg_failures == 0, "every Cayley graph verifies with its own group");
  });

  // 9. NP2 group images are cluster graphs with equal clusters
  criterion(9, "NP2 group image classification (orders <= 4)", [] {
    DigitalImage k3k3(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
    DigitalImage k3k2(5, {{0, 1}, {0, 2}, {1, 2}, {3, 4}});
    bool ok = expect(classify_np2_group_image(k3k3).accepted, "accepts two equal triangles");
    ok &= expect(!classify_np2_group_image(k3k2).accepted, "rejects unequal clusters");
    ok &= expect(!classify_np2_group_image(helpers::cycle(5)).accepted, "rejects the 5-cycle");
    for (int n = 1; n <= 4; ++n)
      for (const auto& G : enumerate_groups(n)) {
        const int npairs = n * (n - 1) / 2;
        for (unsigned mask = 0; mask < (1u << npairs); ++mask) {
          std::vector<std::pair<VertexId, VertexId>> edges;
          int idx = 0;
          for (VertexId a = 0; a < n; ++a)
            for (VertexId b = a + 1; b < n; ++b, ++idx)
              if (mask >> idx & 1u) edges.emplace_back(a, b);
          DigitalImage img(n, edges);
          if (is_digital_topological_group(img, G, NPCategory::np2).ok)
            ok &= expect(classify_np2_group_image(img).accepted,
                         "NP2 group image is an equal cluster graph");
        }
      }
    return ok;
  });

  // 10. the search engine agrees with the brute-force closure oracle
  criterion(10, "oracle agreement on all map pairs (n <= 3)", [] {
    bool ok = true;
    auto images = enumerate_images(3);
    std::vector<DigitalImage> all;
    for (int n = 1; n <= 3; ++n)
      for (const auto& img : enumerate_images(n)) all.push_back(img);
    for (const auto& xi : all)
      for (const auto& yi : all) {
        auto x = share(xi);
        auto y = share(yi);
        for (NPCategory cat : {NPCategory::np1, NPCategory::np2}) {
          auto closure = oracle_closure(xi, yi, cat);
          for (size_t i = 0; i < closure.maps.size(); ++i)
            for (size_t j = 0; j < closure.maps.size(); ++j) {
              DigitalMap f(x, y, closure.maps[i]);
              DigitalMap g(x, y, closure.maps[j]);
              Status s = decide(f, g, cat);
              if (s == Status::inconclusive) {
                ok = expect(false, "verdict must be decisive at this scale");
                continue;
              }
              bool oracle_yes = closure.cls[i] == closure.cls[j];
              if ((s == Status::yes) != oracle_yes) ok = expect(false, "oracle disagreement");
            }
        }
      }
    return ok;
  });

  // 11. every YES certificate produced above re-verifies independently
  criterion(11, "certificate audit", [] {
    std::printf("      %llu certificates checked\n",
                static_cast<unsigned long long>(audit.total));
    return expect(audit.total > 0, "certificates were collected") &&
           expect(audit.ok == audit.total, "all certificates verified");
  });

  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", failures);
  return 1;
}
