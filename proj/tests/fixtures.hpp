#pragma once

#include <map>
#include <string>

#include "atm/garside.hpp"
#include "atm/presentation.hpp"

namespace atm::fixtures {

inline Presentation affine_a2() {
  Presentation p =
      parse_presentation("generators: a b c\nm: a b = 3\nm: b c = 3\nm: a c = 3\n");
  p.name = "affine-A2";
  return p;
}

// the irreducible 3-generator heap: l(a,b)=2, other pairs free
inline Presentation heap3() { return build_heap(3, {{0, 1}}); }

// shared Garside structures; computed once per binary
inline const GarsideStructure& garside(const Presentation& p) {
  static std::map<std::string, GarsideStructure> cache;
  auto it = cache.find(p.name);
  if (it == cache.end()) it = cache.emplace(p.name, GarsideStructure::compute(p)).first;
  return it->second;
}

}  // namespace atm::fixtures
