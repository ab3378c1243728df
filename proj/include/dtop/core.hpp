#ifndef DTOP_CORE_HPP
#define DTOP_CORE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dtop {

// Vertices of a digital image are dense integers 0..n-1.
using VertexId = int;

// Which normal product adjacency (and matching homotopy relation) is in play.
// Threaded through every decision procedure.
enum class NPCategory : int { np1 = 1, np2 = 2 };

constexpr int level(NPCategory c) { return static_cast<int>(c); }

enum class Errc {
  zero_vertices,
  edge_out_of_range,
  vertex_out_of_range,
  bad_level,
  domain_mismatch,
  not_pointed,
  not_continuous,
  cap_exceeded,
  unknown_fixture,
  discontinuous_multiplication,
  not_irreducible,
  not_connected,
  multiplication_not_invertible,
  not_associative,
  no_identity,
  no_inverse,
  bad_subset,
  size_mismatch,
  not_category2,
  structure_violation,
  not_homotopy_equivalence,
  parse_error,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline NPCategory np_category_from_int(int i) {
  if (i != 1 && i != 2) fail(Errc::bad_level, "NP category must be 1 or 2, got " + std::to_string(i));
  return static_cast<NPCategory>(i);
}

}  // namespace dtop

#endif
