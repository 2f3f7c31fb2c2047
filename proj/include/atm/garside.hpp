#pragma once

#include <boost/dynamic_bitset.hpp>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "atm/numeric.hpp"
#include "atm/presentation.hpp"
#include "atm/words.hpp"

namespace atm {

using Bitset = boost::dynamic_bitset<>;

// An element in greedy normal form: blocks of non-unit simple indices with
// arrow holding between consecutive blocks. The unit is the empty block list
// and has height 1 (its normal form is the singleton (e)).
struct Element {
  std::vector<int> blocks;

  bool is_unit() const { return blocks.empty(); }
  int height() const { return blocks.empty() ? 1 : static_cast<int>(blocks.size()); }
  bool operator==(const Element& o) const { return blocks == o.blocks; }
  bool operator<(const Element& o) const { return blocks < o.blocks; }
};

struct GarsideOptions {
  std::size_t max_simples = 5000;
  std::size_t word_cap = default_word_cap;
};

struct CharneyGraph {
  std::vector<int> vertices;             // simple indices
  std::vector<std::vector<int>> edges;   // adjacency, positions into `vertices`
  bool strongly_connected = false;
  int scc_count = 0;
};

struct AxiomCheck {
  std::string axiom;
  bool pass;
  std::string note;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool two_generator_spherical = false;  // CLT caveat case
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// The smallest Garside subset S of the monoid together with the divisibility
// and normality combinatorics computed over it. Simples are indexed in
// (length, lexicographic) order; index 0 is the unit.
class GarsideStructure {
 public:
  static GarsideStructure compute(const Presentation& p, GarsideOptions opts = {});

  const Presentation& presentation() const { return *pres_; }
  WordContext& words() const { return *ctx_; }

  // --- simples ---------------------------------------------------------------
  int size() const { return static_cast<int>(simples_.size()); }
  const Word& word(int i) const { return simples_[i]; }
  int length(int i) const { return static_cast<int>(simples_[i].size()); }
  int index_of(const Word& canonical_word) const;  // -1 when not simple
  int simple_of_generator(int g) const { return gen_simple_[g]; }
  std::optional<int> delta() const { return delta_; }
  bool spherical() const { return delta_.has_value(); }

  // --- divisibility tables -----------------------------------------------------
  bool left_divides_simple(int i, int j) const { return left_div_[j].test(i); }
  bool right_divides_simple(int i, int j) const { return right_div_[j].test(i); }
  const Bitset& left_divisors(int j) const { return left_div_[j]; }
  int join_simple(int i, int j) const { return join_[i][j]; }  // -1 when none
  int left_quotient(int i, int j) const;                        // i \ j for i <=_l j

  // E(x) = {u != e | x.u in S} as a bitset over S; D(x) = its minimal elements
  const Bitset& e_set(int x) const { return e_set_[x]; }
  Bitset d_set_simple(int x) const;
  // x.u as a simple index, or -1 when the product is not simple
  int product_simple(int x, int u) const { return prod_[x][u]; }

  // --- normality ---------------------------------------------------------------
  bool arrow(int x, int y) const;
  // normal form (h, r) of the product x.y of two simples; r may be the unit
  std::pair<int, int> pair_normal(int x, int y) const;

  // --- elements ----------------------------------------------------------------
  Element unit_element() const { return Element{}; }
  Element simple_element(int i) const { return i == 0 ? Element{} : Element{{i}}; }
  Element normal_form(const Word& w) const;
  Element multiply(const Element& a, const Element& b) const;
  Element multiply_by_simple(Element a, int s) const;
  Word element_word(const Element& x) const;
  int element_length(const Element& x) const;
  std::string element_to_string(const Element& x) const;  // blocks joined by " | "

  // residual of x through the blocks of y: empty word iff x <=_l y; the join
  // x v y is y extended by the residual. nullopt when no common multiple.
  std::optional<Word> division_residual(const Element& x, const Element& y) const;
  bool divides(const Element& x, const Element& y) const;
  std::optional<Element> join(const Element& x, const Element& y) const;
  // residual q = s \ (r v s) of a word through one simple; nullopt when no join
  std::optional<Word> block_residual(const Word& r, int s) const;

  // --- generator sets ------------------------------------------------------------
  std::vector<int> left_set(int x) const;    // L(x)
  std::vector<int> letter_set(int x) const;  // letters of any representative
  std::vector<int> right_set(int x) const;   // R(x)
  bool normality_criterion(int x, int y) const;  // L(y) subset of R(x)

  // --- structure ----------------------------------------------------------------
  CharneyGraph charney_graph() const;  // requires irreducibility
  bool is_type_fc() const;
  AxiomReport check_axioms(std::uint64_t seed = 1) const;

  std::size_t lcm_bound_hits() const { return ctx_->bound_hits(); }

 private:
  GarsideStructure() = default;
  void build_tables(std::size_t join_bound);

  std::shared_ptr<const Presentation> pres_;
  std::unique_ptr<WordContext> ctx_;
  std::vector<Word> simples_;
  std::unordered_map<Word, int> index_;
  std::vector<int> gen_simple_;
  std::optional<int> delta_;

  std::vector<Bitset> left_div_;   // left_div_[j][i] : s_i <=_l s_j
  std::vector<Bitset> right_div_;  // right_div_[j][i] : s_i <=_r s_j
  std::vector<std::vector<int>> join_;
  std::vector<std::vector<int>> lq_;    // lq_[i][j] = i \ j
  std::vector<std::vector<int>> prod_;  // prod_[x][u] = x.u when simple
  std::vector<Bitset> e_set_;
  bool fc_ = true;
};

// every element of length <= maxlen, as normal forms (unit first), by DFS
// over the normal-sequence graph
std::vector<Element> elements_up_to_length(const GarsideStructure& g, int maxlen);

// multiplicative weight of a simple under per-generator weights (empty =
// uniform weight 1)
Rat simple_weight(const GarsideStructure& g, const std::vector<Rat>& gen_weights, int simple);

}  // namespace atm
