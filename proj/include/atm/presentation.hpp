#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "atm/errors.hpp"

namespace atm {

// A word is a sequence of generator indices, one byte per letter. Canonical
// representatives are the lexicographically least members of their class, so
// byte-wise comparison of words follows generator order.
using Word = std::string;

inline constexpr int coxeter_infinity = 0;  // stands for l(a,b) = oo

// Monoid presentation in the generalized form: an alphabet plus a finite set
// of length-preserving relation pairs (u, v) with u = v in the monoid. The
// Coxeter front-end expands l(a,b) = m into the pair (abab..., baba...) of
// length m; families that are not Coxeter-shaped (dual braid monoids) feed
// relation pairs directly. All downstream modules consume the pair form.
struct Presentation {
  std::vector<std::string> symbols;
  std::vector<std::pair<Word, Word>> relations;

  // Present when the monoid was given by a Coxeter-length matrix; entries are
  // >= 2 or coxeter_infinity. Kept for irreducibility and reporting.
  std::optional<std::vector<std::vector<int>>> coxeter;

  std::string name;  // family tag or file name, for reports

  int rank() const { return static_cast<int>(symbols.size()); }

  int symbol_index(const std::string& s) const;
  std::string word_to_string(const Word& w) const;
  Word parse_word(const std::string& text) const;

  // longest relation side, 0 when free
  int max_relation_length() const;

  void validate() const;
};

// Partition of the generators into classes on which every valuation is
// constant (the classes of the closure of the odd-finite-length relation).
struct ParamClasses {
  std::vector<std::vector<int>> classes;  // generator indices, each sorted
  std::vector<int> class_of;              // generator -> class id
  int count() const { return static_cast<int>(classes.size()); }
};

// --- construction -----------------------------------------------------------

Presentation parse_presentation(const std::string& text);
Presentation presentation_from_coxeter(std::vector<std::string> symbols,
                                       std::vector<std::vector<int>> coxeter,
                                       std::string name = "");

Presentation build_braid(int strands);
Presentation build_heap(int n, const std::vector<std::pair<int, int>>& commuting);
Presentation build_dihedral(int m);
Presentation build_free(int n);
Presentation build_dual_a(int strands);
Presentation build_free_product(const Presentation& left, const Presentation& right);

// CLI family syntax: braid:4, heap:3:ab, dihedral:5, free:3, dual-a:4.
// free-product is resolved by the CLI before reaching here.
Presentation build_family(const std::string& family_spec);

// --- queries ----------------------------------------------------------------

struct IrreducibilityReport {
  bool irreducible = false;
  std::vector<std::vector<int>> components;  // generator indices per component
};

IrreducibilityReport is_irreducible(const Presentation& p);
ParamClasses param_classes(const Presentation& p);

inline void require_irreducible(const Presentation& p, const char* op) {
  if (!is_irreducible(p).irreducible)
    fail(errc::reducible_monoid, std::string(op) + ": presentation is reducible");
}

}  // namespace atm
