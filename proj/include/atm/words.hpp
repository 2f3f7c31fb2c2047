#pragma once

#include <atomic>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "atm/presentation.hpp"

namespace atm {

inline constexpr std::size_t default_word_cap = 16;

// Word-problem engine for bounded-length words, by breadth-first closure under
// single relation-pair substitutions. The equivalence class of a word is
// computed once and memoized member-by-member, so repeated queries against the
// same classes are hash lookups. Memoized results are shared across threads
// (concurrent reads, serialized writes); answers are identical either way.
class WordContext {
 public:
  explicit WordContext(const Presentation& p, std::size_t cap = default_word_cap);

  const Presentation& presentation() const { return pres_; }

  std::size_t cap() const { return cap_; }
  void raise_cap(std::size_t cap);

  // canonical representative (lexicographic minimum of the class)
  Word canonical(const Word& w);

  // all members of the class of w
  const std::vector<Word>& word_class(const Word& w);

  bool equal(const Word& u, const Word& v);

  // u <=_l v, and the quotient z with u.z = v when it holds
  std::optional<Word> left_divides(const Word& u, const Word& v);
  std::optional<Word> right_divides(const Word& u, const Word& v);

  Word left_gcd(const Word& u, const Word& v);

  // least common left multiple among classes of length <= bound, or nullopt.
  // Distinct minimal common multiples of equal length violate the semilattice
  // property and raise a structural error.
  std::optional<Word> left_lcm_bounded(const Word& u, const Word& v, std::size_t bound);

  // number of lcm searches that hit the bound without an answer (treated as
  // "no common multiple"; audit trail for the bounded-search policy)
  std::size_t bound_hits() const { return bound_hits_; }
  void record_bound_hit() { ++bound_hits_; }

  std::size_t class_count() const;

 private:
  struct ClassData {
    Word canonical;
    std::vector<Word> members;
  };

  int class_id(const Word& w);

  const Presentation& pres_;
  std::size_t cap_;
  std::vector<std::pair<Word, Word>> rules_;  // both directions of every relation
  std::deque<ClassData> classes_;             // stable references for word_class()
  std::unordered_map<Word, int> word2class_;
  std::atomic<std::size_t> bound_hits_{0};
  mutable std::shared_mutex mutex_;
};

}  // namespace atm
