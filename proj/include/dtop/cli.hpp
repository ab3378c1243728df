#ifndef DTOP_CLI_HPP
#define DTOP_CLI_HPP

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "group.hpp"
#include "homotopy.hpp"
#include "hspace.hpp"
#include "image.hpp"
#include "io.hpp"
#include "maps.hpp"

// Batch front end. Exit codes: 0 = YES/true, 1 = NO/false,
// 2 = INCONCLUSIVE, 64 = usage error, 65 = parse error, 70 = failed
// precondition or internal error.

namespace dtop {

namespace cli_detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Printer {
  std::ostream& out;
  bool records;
  void kv(const std::string& k, const std::string& v) const {
    out << k << (records ? "=" : ": ") << v << "\n";
  }
  void kv(const std::string& k, const char* v) const { kv(k, std::string(v)); }
  void kv(const std::string& k, bool v) const { kv(k, v ? std::string("true") : std::string("false")); }
  void kv(const std::string& k, std::uint64_t v) const { kv(k, std::to_string(v)); }
  void kv(const std::string& k, int v) const { kv(k, std::to_string(v)); }
};

inline ImagePtr load_image(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, path + ": cannot open");
  return share(parse_image(in, path));
}

inline DigitalMap load_map(const std::string& path, const ImagePtr& dom, const ImagePtr& cod) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, path + ": cannot open");
  MapData md = parse_map(in, path);
  if (md.n_dom != dom->size() || md.n_cod != cod->size())
    throw UsageError(path + ": map is " + std::to_string(md.n_dom) + " -> " +
                     std::to_string(md.n_cod) + " but the images have " +
                     std::to_string(dom->size()) + " and " + std::to_string(cod->size()) +
                     " vertices");
  return DigitalMap(dom, cod, md.values);
}

inline MultData load_mult(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, path + ": cannot open");
  return parse_mult(in, path);
}

inline GroupData load_group(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, path + ": cannot open");
  return parse_group(in, path);
}

inline HSpaceStructure load_hspace(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, path + ": cannot open");
  return parse_hspace(in, path);
}

inline void write_dot(const std::string& path, const DigitalImage& img) {
  std::ofstream out(path);
  if (!out) throw UsageError(path + ": cannot write");
  print_dot(out, img);
}

inline int status_code(Status s) {
  switch (s) {
    case Status::yes: return 0;
    case Status::no: return 1;
    default: return 2;
  }
}

inline void print_verdict(const Printer& p, const HomotopyVerdict& v, bool with_certificate) {
  p.kv("status", to_string(v.status));
  p.kv("explored", v.explored);
  p.kv("budget", v.budget);
  if (v.certificate) p.kv("steps", static_cast<std::uint64_t>(v.certificate->chain.size() - 1));
  if (with_certificate && v.certificate) print_certificate(p.out, *v.certificate);
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using cli_detail::Printer;
  using cli_detail::UsageError;

  CLI::App app{"decision procedures for digital images, homotopy, H-spaces and digital groups"};
  app.require_subcommand(1);

  struct Bag {
    std::string path1, path2, path3, path4;
    int cat = 1;
    std::uint64_t budget = default_budget;
    std::string format = "text";
    bool certificate = false;
    bool pointed = false;
    bool connected_only = false;
    int base = -1, base2 = -1, base_cod = -1;
    std::vector<int> subset;
    std::string dot;
    std::size_t limit = 10;
    int size_cap = hspace_search_default_cap;
    int count = 1;
    std::string name;
  } bag;

  auto add_common = [&](CLI::App* sc, bool with_cat = true) {
    sc->add_option("--budget", bag.budget, "node budget for homotopy searches")
        ->check(CLI::PositiveNumber);
    sc->add_option("--format", bag.format, "output format")
        ->check(CLI::IsMember({"text", "records"}));
    if (with_cat)
      sc->add_option("--cat", bag.cat, "NP category (1 or 2)")->check(CLI::IsMember({1, 2}));
  };

  enum class Verb {
    none, continuity, homotopic, pointed_homotopic, contractible, irreducible, rigid, equiv,
    hspace_verify, hspace_assoc, hspace_inverses, hspace_hequiv, hspace_transport, hspace_reduce,
    hspace_search, np2_decompose, magma_extend, cayley, dtg_verify, np2_classify, fixture_verb,
    enumerate_verb
  };
  Verb verb = Verb::none;

  {
    auto* sc = app.add_subcommand("continuity", "decide continuity of a map between two images");
    sc->add_option("domain", bag.path1)->required();
    sc->add_option("codomain", bag.path2)->required();
    sc->add_option("map", bag.path3)->required();
    add_common(sc, false);
    sc->callback([&] { verb = Verb::continuity; });
  }
  {
    auto* sc = app.add_subcommand("homotopic", "decide homotopy of two maps");
    sc->add_option("domain", bag.path1)->required();
    sc->add_option("codomain", bag.path2)->required();
    sc->add_option("f", bag.path3)->required();
    sc->add_option("g", bag.path4)->required();
    sc->add_flag("--certificate", bag.certificate, "print the step chain on YES");
    add_common(sc);
    sc->callback([&] { verb = Verb::homotopic; });
  }
  {
    auto* sc = app.add_subcommand("pointed-homotopic", "decide pointed homotopy of two maps");
    sc->add_option("domain", bag.path1)->required();
    sc->add_option("codomain", bag.path2)->required();
    sc->add_option("f", bag.path3)->required();
    sc->add_option("g", bag.path4)->required();
    sc->add_option("--base", bag.base, "domain basepoint")->required();
    sc->add_option("--base-cod", bag.base_cod, "codomain basepoint (default f(base))");
    sc->add_flag("--certificate", bag.certificate, "print the step chain on YES");
    add_common(sc);
    sc->callback([&] { verb = Verb::pointed_homotopic; });
  }
  for (auto [name, v, help] :
       {std::tuple<const char*, Verb, const char*>{"contractible", Verb::contractible,
                                                   "is the identity homotopic to a constant"},
        {"irreducible", Verb::irreducible, "is every map homotopic to the identity surjective"},
        {"rigid", Verb::rigid, "is the identity homotopic only to itself"}}) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("image", bag.path1)->required();
    sc->add_flag("--certificate", bag.certificate, "print the witness chain");
    add_common(sc);
    sc->callback([&verb, v = v] { verb = v; });
  }
  {
    auto* sc = app.add_subcommand("equiv", "decide homotopy equivalence of two images");
    sc->add_option("x", bag.path1)->required();
    sc->add_option("y", bag.path2)->required();
    sc->add_option("--base", bag.base, "basepoint in x (pointed mode with --base2)");
    sc->add_option("--base2", bag.base2, "basepoint in y");
    sc->add_flag("--certificate", bag.certificate, "print witness maps and certificates");
    add_common(sc);
    sc->callback([&] { verb = Verb::equiv; });
  }
  {
    auto* sc = app.add_subcommand("hspace-verify", "verify the H-space axioms");
    sc->add_option("hspace", bag.path1)->required();
    add_common(sc, false);
    sc->callback([&] { verb = Verb::hspace_verify; });
  }
  {
    auto* sc = app.add_subcommand("hspace-assoc", "decide (homotopy-)associativity");
    sc->add_option("hspace", bag.path1)->required();
    sc->add_flag("--certificate", bag.certificate, "print the homotopy chain on YES");
    add_common(sc, false);
    sc->callback([&] { verb = Verb::hspace_assoc; });
  }
  {
    auto* sc = app.add_subcommand("hspace-inverses", "exact and homotopy inverses");
    sc->add_option("hspace", bag.path1)->required();
    sc->add_flag("--certificate", bag.certificate, "print witness maps");
    add_common(sc, false);
    sc->callback([&] { verb = Verb::hspace_inverses; });
  }
  {
    auto* sc = app.add_subcommand("hspace-hequiv", "decide H-equivalence of two H-spaces");
    sc->add_option("first", bag.path1)->required();
    sc->add_option("second", bag.path2)->required();
    sc->add_flag("--pointed", bag.pointed, "require pointed homotopies");
    sc->add_flag("--certificate", bag.certificate, "print witness maps");
    add_common(sc, false);
    sc->callback([&] { verb = Verb::hspace_hequiv; });
  }
  {
    auto* sc = app.add_subcommand("hspace-transport", "transport a structure along an equivalence");
    sc->add_option("hspace", bag.path1)->required();
    sc->add_option("forward", bag.path2, "map file X -> Y")->required();
    sc->add_option("backward", bag.path3, "map file Y -> X")->required();
    sc->add_option("target", bag.path4, "image file for Y")->required();
    add_common(sc, false);
    sc->callback([&] { verb = Verb::hspace_transport; });
  }
  {
    auto* sc = app.add_subcommand("hspace-reduce", "left-unital irreducible reduction");
    sc->add_option("hspace", bag.path1)->required();
    add_common(sc, false);
    sc->callback([&] { verb = Verb::hspace_reduce; });
  }
  {
    auto* sc = app.add_subcommand("hspace-search", "enumerate H-space multiplications");
    sc->add_option("image", bag.path1)->required();
    sc->add_option("--base", bag.base, "basepoint")->required();
    sc->add_option("--limit", bag.limit, "print at most this many structures");
    sc->add_option("--size-cap", bag.size_cap, "refuse images larger than this");
    add_common(sc);
    sc->callback([&] { verb = Verb::hspace_search; });
  }
  {
    auto* sc = app.add_subcommand("np2-decompose", "unit-plus-magma decomposition");
    sc->add_option("hspace", bag.path1)->required();
    add_common(sc, false);
    sc->callback([&] { verb = Verb::np2_decompose; });
  }
  {
    auto* sc = app.add_subcommand("magma-extend", "adjoin an isolated unit to a magma");
    sc->add_option("image", bag.path1)->required();
    sc->add_option("mult", bag.path2)->required();
    add_common(sc);
    sc->callback([&] { verb = Verb::magma_extend; });
  }
  {
    auto* sc = app.add_subcommand("cayley", "Cayley graph of a group");
    sc->add_option("group", bag.path1)->required();
    sc->add_option("--subset", bag.subset, "connection set (overrides the file's subset line)");
    sc->add_option("--dot", bag.dot, "also write a dot file");
    add_common(sc, false);
    sc->callback([&] { verb = Verb::cayley; });
  }
  {
    auto* sc = app.add_subcommand("dtg-verify", "is the image a digital topological group");
    sc->add_option("group", bag.path1)->required();
    sc->add_option("image", bag.path2)->required();
    add_common(sc);
    sc->callback([&] { verb = Verb::dtg_verify; });
  }
  {
    auto* sc = app.add_subcommand("np2-classify", "cluster-graph classification of an image");
    sc->add_option("image", bag.path1)->required();
    add_common(sc, false);
    sc->callback([&] { verb = Verb::np2_classify; });
  }
  {
    auto* sc = app.add_subcommand("fixture", "print a named example");
    sc->add_option("name", bag.name)->required();
    sc->add_option("--dot", bag.dot, "also write a dot file (image fixtures)");
    add_common(sc, false);
    sc->callback([&] { verb = Verb::fixture_verb; });
  }
  {
    auto* sc = app.add_subcommand("enumerate", "all images on n vertices up to isomorphism");
    sc->add_option("n", bag.count)->required()->check(CLI::PositiveNumber);
    sc->add_flag("--connected", bag.connected_only, "connected images only");
    add_common(sc, false);
    sc->callback([&] { verb = Verb::enumerate_verb; });
  }

  std::vector<const char*> argv;
  argv.push_back("dtop");
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      int rc = app.exit(e, out, err);
      return rc == 0 ? 0 : 64;
    }

    Printer p{out, bag.format == "records"};
    const NPCategory cat = static_cast<NPCategory>(bag.cat);

    switch (verb) {
      case Verb::continuity: {
        auto dom = cli_detail::load_image(bag.path1);
        auto cod = cli_detail::load_image(bag.path2);
        DigitalMap f = cli_detail::load_map(bag.path3, dom, cod);
        bool cont = is_continuous(f);
        p.kv("continuous", cont);
        return cont ? 0 : 1;
      }
      case Verb::homotopic: {
        auto dom = cli_detail::load_image(bag.path1);
        auto cod = cli_detail::load_image(bag.path2);
        DigitalMap f = cli_detail::load_map(bag.path3, dom, cod);
        DigitalMap g = cli_detail::load_map(bag.path4, dom, cod);
        auto v = homotopic(f, g, cat, bag.budget);
        cli_detail::print_verdict(p, v, bag.certificate);
        return cli_detail::status_code(v.status);
      }
      case Verb::pointed_homotopic: {
        auto dom = cli_detail::load_image(bag.path1);
        auto cod = cli_detail::load_image(bag.path2);
        DigitalMap f = cli_detail::load_map(bag.path3, dom, cod);
        DigitalMap g = cli_detail::load_map(bag.path4, dom, cod);
        if (bag.base < 0 || bag.base >= dom->size()) throw UsageError("--base out of range");
        VertexId bc = bag.base_cod >= 0 ? bag.base_cod : f(bag.base);
        auto v = pointed_homotopic(f, g, cat, bag.base, bc, bag.budget);
        cli_detail::print_verdict(p, v, bag.certificate);
        return cli_detail::status_code(v.status);
      }
      case Verb::contractible:
      case Verb::irreducible:
      case Verb::rigid: {
        auto img = cli_detail::load_image(bag.path1);
        HomotopyVerdict v;
        if (verb == Verb::contractible) v = is_contractible(img, cat, bag.budget);
        if (verb == Verb::irreducible) v = is_irreducible(img, cat, bag.budget);
        if (verb == Verb::rigid) v = is_rigid(img, cat, bag.budget);
        cli_detail::print_verdict(p, v, bag.certificate);
        return cli_detail::status_code(v.status);
      }
      case Verb::equiv: {
        auto x = cli_detail::load_image(bag.path1);
        auto y = cli_detail::load_image(bag.path2);
        std::optional<std::pair<VertexId, VertexId>> bases;
        if (bag.base >= 0 || bag.base2 >= 0) {
          if (bag.base < 0 || bag.base2 < 0)
            throw UsageError("pointed equivalence needs both --base and --base2");
          bases = std::make_pair(bag.base, bag.base2);
        }
        auto r = homotopy_equivalent(x, y, cat, bag.budget, bases);
        p.kv("status", to_string(r.status));
        p.kv("explored", r.explored);
        p.kv("budget", r.budget);
        if (r.status == Status::yes && bag.certificate) {
          p.out << "# forward map\n";
          print_map(p.out, *r.to);
          p.out << "# backward map\n";
          print_map(p.out, *r.from);
          if (r.cert_to_from) print_certificate(p.out, *r.cert_to_from);
          if (r.cert_from_to) print_certificate(p.out, *r.cert_from_to);
        }
        return cli_detail::status_code(r.status);
      }
      case Verb::hspace_verify: {
        auto H = cli_detail::load_hspace(bag.path1);
        auto rep = verify_hspace(H, bag.budget);
        p.kv("is_hspace", to_string(rep.is_hspace));
        p.kv("unital", rep.unital);
        p.kv("pointed", to_string(rep.pointed));
        p.kv("left_unit_exact", rep.left_unit_exact);
        p.kv("right_unit_exact", rep.right_unit_exact);
        return cli_detail::status_code(rep.is_hspace);
      }
      case Verb::hspace_assoc: {
        auto H = cli_detail::load_hspace(bag.path1);
        p.kv("exact", is_associative(H));
        auto v = is_homotopy_associative(H, bag.budget);
        cli_detail::print_verdict(p, v, bag.certificate);
        return cli_detail::status_code(v.status);
      }
      case Verb::hspace_inverses: {
        auto H = cli_detail::load_hspace(bag.path1);
        try {
          auto [alpha, beta] = find_exact_inverses(H);
          p.kv("exact_inverses", std::string("found"));
          if (bag.certificate) {
            p.out << "# exact left inverse\n";
            print_map(p.out, alpha);
            p.out << "# exact right inverse\n";
            print_map(p.out, beta);
          }
        } catch (const Error& e) {
          p.kv("exact_inverses", std::string("none"));
          p.kv("exact_inverses_reason", std::string(e.what()));
        }
        auto left = has_left_homotopy_inverse(H, bag.budget);
        auto right = has_right_homotopy_inverse(H, bag.budget);
        p.kv("left_status", to_string(left.status));
        p.kv("right_status", to_string(right.status));
        if (bag.certificate && left.witness) {
          p.out << "# left homotopy-inverse\n";
          print_map(p.out, *left.witness);
        }
        if (bag.certificate && right.witness) {
          p.out << "# right homotopy-inverse\n";
          print_map(p.out, *right.witness);
        }
        if (left.status == Status::yes && right.status == Status::yes) return 0;
        if (left.status == Status::no || right.status == Status::no) return 1;
        return 2;
      }
      case Verb::hspace_hequiv: {
        auto A = cli_detail::load_hspace(bag.path1);
        auto B = cli_detail::load_hspace(bag.path2);
        auto r = h_equivalent(A, B, bag.budget, bag.pointed);
        p.kv("status", to_string(r.status));
        p.kv("explored", r.explored);
        if (r.status == Status::yes && bag.certificate) {
          p.out << "# forward map\n";
          print_map(p.out, *r.to);
          p.out << "# backward map\n";
          print_map(p.out, *r.from);
        }
        return cli_detail::status_code(r.status);
      }
      case Verb::hspace_transport: {
        auto H = cli_detail::load_hspace(bag.path1);
        auto Y = cli_detail::load_image(bag.path4);
        DigitalMap f = cli_detail::load_map(bag.path2, H.image, Y);
        DigitalMap g = cli_detail::load_map(bag.path3, Y, H.image);
        auto outH = transport_structure(H, f, g, bag.budget);
        print_hspace(p.out, outH);
        return 0;
      }
      case Verb::hspace_reduce: {
        auto H = cli_detail::load_hspace(bag.path1);
        auto outH = left_unital_reduction(H, bag.budget);
        print_hspace(p.out, outH);
        return 0;
      }
      case Verb::hspace_search: {
        auto img = cli_detail::load_image(bag.path1);
        if (bag.base < 0 || bag.base >= img->size()) throw UsageError("--base out of range");
        std::vector<HSpaceStructure> found;
        bool exhausted = true;
        for_each_hspace_multiplication(
            img, bag.base, cat,
            [&](const std::vector<VertexId>& mult, const HSpaceReport&) {
              if (found.size() < bag.limit) {
                found.push_back(make_hspace(img, bag.base, mult, cat));
                return true;
              }
              exhausted = false;
              return false;
            },
            bag.size_cap, bag.budget);
        p.kv("found", static_cast<std::uint64_t>(found.size()));
        p.kv("exhausted", exhausted);
        for (const auto& H : found) print_mult(p.out, img->size(), H.mult);
        return found.empty() ? 1 : 0;
      }
      case Verb::np2_decompose: {
        auto H = cli_detail::load_hspace(bag.path1);
        auto d = decompose_np2(H, bag.budget);
        p.kv("z_size", static_cast<std::uint64_t>(d.z_vertices.size()));
        {
          std::string zs;
          for (VertexId v : d.z_vertices) zs += (zs.empty() ? "" : " ") + std::to_string(v);
          p.kv("z_vertices", zs);
        }
        p.kv("z_default", d.z_default);
        p.kv("a_pairs", static_cast<std::uint64_t>(d.a_pairs.size()));
        if (d.z_image) {
          print_image(p.out, *d.z_image);
          print_mult(p.out, d.z_image->size(), d.tau);
          for (auto [u, v] : d.a_pairs) p.out << "pair " << u << " " << v << "\n";
        }
        return 0;
      }
      case Verb::magma_extend: {
        auto z = cli_detail::load_image(bag.path1);
        MultData md = cli_detail::load_mult(bag.path2);
        if (md.n != z->size()) throw UsageError("multiplication size differs from the image");
        auto H = magma_point_extension(make_magma(z, md.table, cat), bag.budget);
        print_hspace(p.out, H);
        return 0;
      }
      case Verb::cayley: {
        GroupData gd = cli_detail::load_group(bag.path1);
        std::vector<VertexId> subset;
        if (!bag.subset.empty())
          subset.assign(bag.subset.begin(), bag.subset.end());
        else if (gd.subset)
          subset = *gd.subset;
        DigitalImage gamma = cayley_graph(gd.group, subset);
        print_image(p.out, gamma);
        if (!bag.dot.empty()) cli_detail::write_dot(bag.dot, gamma);
        return 0;
      }
      case Verb::dtg_verify: {
        GroupData gd = cli_detail::load_group(bag.path1);
        auto img = cli_detail::load_image(bag.path2);
        auto check = is_digital_topological_group(*img, gd.group, cat);
        p.kv("dtg", check.ok);
        if (check.mult_witness) {
          const auto& w = *check.mult_witness;
          p.kv("mult_witness", std::to_string(w[0]) + " " + std::to_string(w[1]) + " " +
                                   std::to_string(w[2]) + " " + std::to_string(w[3]));
        }
        if (check.inv_witness)
          p.kv("inv_witness", std::to_string(check.inv_witness->first) + " " +
                                  std::to_string(check.inv_witness->second));
        return check.ok ? 0 : 1;
      }
      case Verb::np2_classify: {
        auto img = cli_detail::load_image(bag.path1);
        auto r = classify_np2_group_image(*img);
        p.kv("accepted", r.accepted);
        p.kv("connected", r.connected);
        p.kv("components_complete", r.components_complete);
        p.kv("equal_sizes", r.equal_sizes);
        return r.accepted ? 0 : 1;
      }
      case Verb::fixture_verb: {
        FixtureValue v = fixture(bag.name);
        if (auto* img = std::get_if<DigitalImage>(&v)) {
          print_image(p.out, *img);
          if (!bag.dot.empty()) cli_detail::write_dot(bag.dot, *img);
        } else if (auto* map = std::get_if<DigitalMap>(&v)) {
          print_map(p.out, *map);
        } else if (auto* hs = std::get_if<HSpaceStructure>(&v)) {
          print_hspace(p.out, *hs);
          if (!bag.dot.empty()) cli_detail::write_dot(bag.dot, *hs->image);
        } else if (auto* mg = std::get_if<MagmaStructure>(&v)) {
          print_image(p.out, *mg->image);
          print_mult(p.out, mg->image->size(), mg->table);
        }
        return 0;
      }
      case Verb::enumerate_verb: {
        auto images = enumerate_images(bag.count);
        std::vector<DigitalImage> kept;
        for (auto& img : images)
          if (!bag.connected_only || is_connected(img)) kept.push_back(std::move(img));
        p.kv("count", static_cast<std::uint64_t>(kept.size()));
        for (const auto& img : kept) print_image(p.out, img);
        return 0;
      }
      case Verb::none: break;
    }
    err << "error: no verb selected\n";
    return 64;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 64;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == Errc::parse_error ? 65 : 70;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 70;
  }
}

}  // namespace dtop

#endif
