#ifndef DTOP_IO_HPP
#define DTOP_IO_HPP

#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "group.hpp"
#include "homotopy.hpp"
#include "hspace.hpp"
#include "image.hpp"
#include "maps.hpp"

// Text formats. '#' starts a comment, tokens are whitespace-separated
// decimals. Blocks:
//   image:          image <n>          then edge <a> <b> lines (loops implied)
//   map:            map <n_dom> <n_cod> then f <x> <y> lines, total on the domain
//   multiplication: mul <n>            then n*n lines m <a> <b> <c>
//   group:          group <n>          then n*n lines g <a> <b> <c>,
//                                      optional subset <s1> <s2> ...
//   H-space:        image block, base <e>, cat <1|2>, multiplication block
//   certificate:    steps <m>, then m+1 blocks step <i> followed by a map block

namespace dtop {

namespace detail {

struct TokenLines {
  std::string file;
  std::vector<std::pair<int, std::vector<std::string>>> rows;
  size_t idx = 0;

  static TokenLines read(std::istream& in, std::string name) {
    TokenLines tl;
    tl.file = std::move(name);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
      ++no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      std::vector<std::string> toks;
      std::string t;
      while (ss >> t) toks.push_back(t);
      if (!toks.empty()) tl.rows.emplace_back(no, std::move(toks));
    }
    return tl;
  }

  bool done() const { return idx >= rows.size(); }
  const std::string* peek_keyword() const { return done() ? nullptr : &rows[idx].second[0]; }
  int line() const {
    if (!done()) return rows[idx].first;
    return rows.empty() ? 0 : rows.back().first;
  }
  [[noreturn]] void error(const std::string& msg) const {
    fail(Errc::parse_error, file + ":" + std::to_string(line()) + ": " + msg);
  }
  int to_int(const std::string& s) const {
    size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      error("expected an integer, got '" + s + "'");
    }
    if (used != s.size()) error("expected an integer, got '" + s + "'");
    return v;
  }
  std::vector<int> take(const std::string& keyword, size_t nargs) {
    if (done()) error("expected '" + keyword + "' but the input ended");
    const auto& toks = rows[idx].second;
    if (toks[0] != keyword) error("expected '" + keyword + "', got '" + toks[0] + "'");
    if (toks.size() != nargs + 1)
      error("'" + keyword + "' expects " + std::to_string(nargs) + " argument(s)");
    std::vector<int> args;
    for (size_t i = 1; i < toks.size(); ++i) args.push_back(to_int(toks[i]));
    ++idx;
    return args;
  }
  void expect_end() const {
    if (!done()) error("unexpected trailing '" + rows[idx].second[0] + "'");
  }
};

inline DigitalImage parse_image_block(TokenLines& tl) {
  auto head = tl.take("image", 1);
  std::vector<std::pair<VertexId, VertexId>> edges;
  while (!tl.done() && *tl.peek_keyword() == "edge") {
    auto e = tl.take("edge", 2);
    edges.emplace_back(e[0], e[1]);
  }
  try {
    return DigitalImage(head[0], edges);
  } catch (const Error& e) {
    tl.error(e.what());
  }
}

inline std::vector<VertexId> parse_mult_block(TokenLines& tl, const std::string& keyword,
                                              const std::string& cell) {
  auto head = tl.take(keyword, 1);
  const int n = head[0];
  if (n < 1) tl.error("table needs at least one element");
  std::vector<VertexId> table(static_cast<size_t>(n) * n, -1);
  for (int i = 0; i < n * n; ++i) {
    auto row = tl.take(cell, 3);
    if (row[0] < 0 || row[0] >= n || row[1] < 0 || row[1] >= n || row[2] < 0 || row[2] >= n)
      tl.error("table entry out of range");
    VertexId& slot = table[static_cast<size_t>(row[0]) * n + row[1]];
    if (slot >= 0) tl.error("duplicate table entry");
    slot = row[2];
  }
  return table;
}

}  // namespace detail

inline DigitalImage parse_image(std::istream& in, const std::string& name = "<input>") {
  auto tl = detail::TokenLines::read(in, name);
  DigitalImage img = detail::parse_image_block(tl);
  tl.expect_end();
  return img;
}

inline void print_image(std::ostream& out, const DigitalImage& img) {
  out << "image " << img.size() << "\n";
  for (auto [a, b] : img.edges()) out << "edge " << a << " " << b << "\n";
}

struct MapData {
  int n_dom = 0;
  int n_cod = 0;
  std::vector<VertexId> values;
};

inline MapData parse_map(std::istream& in, const std::string& name = "<input>") {
  auto tl = detail::TokenLines::read(in, name);
  auto head = tl.take("map", 2);
  MapData md;
  md.n_dom = head[0];
  md.n_cod = head[1];
  if (md.n_dom < 1 || md.n_cod < 1) tl.error("map needs nonempty domain and codomain");
  md.values.assign(static_cast<size_t>(md.n_dom), -1);
  for (int i = 0; i < md.n_dom; ++i) {
    auto row = tl.take("f", 2);
    if (row[0] < 0 || row[0] >= md.n_dom) tl.error("map argument out of range");
    if (row[1] < 0 || row[1] >= md.n_cod) tl.error("map value out of range");
    if (md.values[static_cast<size_t>(row[0])] >= 0) tl.error("duplicate map entry");
    md.values[static_cast<size_t>(row[0])] = row[1];
  }
  tl.expect_end();
  return md;
}

inline void print_map(std::ostream& out, const DigitalMap& f) {
  out << "map " << f.domain().size() << " " << f.codomain().size() << "\n";
  for (VertexId x = 0; x < f.domain().size(); ++x) out << "f " << x << " " << f(x) << "\n";
}

struct MultData {
  int n = 0;
  std::vector<VertexId> table;
};

inline MultData parse_mult(std::istream& in, const std::string& name = "<input>") {
  auto tl = detail::TokenLines::read(in, name);
  MultData md;
  md.table = detail::parse_mult_block(tl, "mul", "m");
  md.n = 0;
  while (static_cast<size_t>(md.n) * md.n < md.table.size()) ++md.n;
  tl.expect_end();
  return md;
}

inline void print_mult(std::ostream& out, int n, const std::vector<VertexId>& table) {
  out << "mul " << n << "\n";
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b = 0; b < n; ++b)
      out << "m " << a << " " << b << " " << table[static_cast<size_t>(a) * n + b] << "\n";
}

struct GroupData {
  GroupStructure group;
  std::optional<std::vector<VertexId>> subset;
};

inline GroupData parse_group(std::istream& in, const std::string& name = "<input>") {
  auto tl = detail::TokenLines::read(in, name);
  GroupData gd;
  std::vector<VertexId> table = detail::parse_mult_block(tl, "group", "g");
  try {
    gd.group = make_group(table);
  } catch (const Error& e) {
    tl.error(e.what());
  }
  if (!tl.done() && *tl.peek_keyword() == "subset") {
    const auto& toks = tl.rows[tl.idx].second;
    std::vector<VertexId> subset;
    for (size_t i = 1; i < toks.size(); ++i) {
      int s = tl.to_int(toks[i]);
      if (s < 0 || s >= gd.group.n) tl.error("subset element out of range");
      subset.push_back(s);
    }
    ++tl.idx;
    gd.subset = std::move(subset);
  }
  tl.expect_end();
  return gd;
}

inline void print_group(std::ostream& out, const GroupStructure& G,
                        const std::optional<std::vector<VertexId>>& subset = std::nullopt) {
  out << "group " << G.n << "\n";
  for (VertexId a = 0; a < G.n; ++a)
    for (VertexId b = 0; b < G.n; ++b) out << "g " << a << " " << b << " " << G.at(a, b) << "\n";
  if (subset) {
    out << "subset";
    for (VertexId s : *subset) out << " " << s;
    out << "\n";
  }
}

inline HSpaceStructure parse_hspace(std::istream& in, const std::string& name = "<input>") {
  auto tl = detail::TokenLines::read(in, name);
  DigitalImage img = detail::parse_image_block(tl);
  auto base = tl.take("base", 1);
  auto cat = tl.take("cat", 1);
  if (cat[0] != 1 && cat[0] != 2) tl.error("cat must be 1 or 2");
  std::vector<VertexId> mult = detail::parse_mult_block(tl, "mul", "m");
  tl.expect_end();
  if (static_cast<size_t>(img.size()) * img.size() != mult.size())
    tl.error("multiplication size differs from the image");
  try {
    return make_hspace(share(std::move(img)), base[0], std::move(mult),
                       static_cast<NPCategory>(cat[0]));
  } catch (const Error& e) {
    tl.error(e.what());
  }
}

inline void print_hspace(std::ostream& out, const HSpaceStructure& H) {
  print_image(out, *H.image);
  out << "base " << H.basepoint << "\n";
  out << "cat " << level(H.category) << "\n";
  print_mult(out, H.image->size(), H.mult);
}

struct CertificateData {
  int n_dom = 0;
  int n_cod = 0;
  std::vector<std::vector<VertexId>> stages;
};

inline CertificateData parse_certificate(std::istream& in, const std::string& name = "<input>") {
  auto tl = detail::TokenLines::read(in, name);
  auto head = tl.take("steps", 1);
  if (head[0] < 0) tl.error("steps must be nonnegative");
  CertificateData cd;
  for (int i = 0; i <= head[0]; ++i) {
    auto s = tl.take("step", 1);
    if (s[0] != i) tl.error("stages must be numbered consecutively from 0");
    auto mh = tl.take("map", 2);
    if (i == 0) {
      cd.n_dom = mh[0];
      cd.n_cod = mh[1];
    } else if (mh[0] != cd.n_dom || mh[1] != cd.n_cod) {
      tl.error("stage sizes differ");
    }
    std::vector<VertexId> values(static_cast<size_t>(cd.n_dom), -1);
    for (int x = 0; x < cd.n_dom; ++x) {
      auto row = tl.take("f", 2);
      if (row[0] < 0 || row[0] >= cd.n_dom || row[1] < 0 || row[1] >= cd.n_cod)
        tl.error("map entry out of range");
      if (values[static_cast<size_t>(row[0])] >= 0) tl.error("duplicate map entry");
      values[static_cast<size_t>(row[0])] = row[1];
    }
    cd.stages.push_back(std::move(values));
  }
  tl.expect_end();
  return cd;
}

inline void print_certificate(std::ostream& out, const HomotopyCertificate& cert) {
  out << "steps " << cert.chain.size() - 1 << "\n";
  for (size_t i = 0; i < cert.chain.size(); ++i) {
    out << "step " << i << "\n";
    print_map(out, cert.chain[i]);
  }
}

inline void print_dot(std::ostream& out, const DigitalImage& img) {
  out << "graph {\n";
  for (VertexId v = 0; v < img.size(); ++v) out << "  " << v << ";\n";
  for (auto [a, b] : img.edges()) out << "  " << a << " -- " << b << ";\n";
  out << "}\n";
}

}  // namespace dtop

#endif
