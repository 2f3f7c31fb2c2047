#include "atm/words.hpp"

#include <algorithm>
#include <queue>
#include <unordered_set>

namespace atm {

WordContext::WordContext(const Presentation& p, std::size_t cap) : pres_(p), cap_(cap) {
  for (const auto& [u, v] : p.relations) {
    rules_.emplace_back(u, v);
    rules_.emplace_back(v, u);
  }
}

void WordContext::raise_cap(std::size_t cap) {
  std::unique_lock lock(mutex_);
  cap_ = std::max(cap_, cap);
}

std::size_t WordContext::class_count() const {
  std::shared_lock lock(mutex_);
  return classes_.size();
}

int WordContext::class_id(const Word& w) {
  {
    std::shared_lock lock(mutex_);
    auto it = word2class_.find(w);
    if (it != word2class_.end()) return it->second;
    if (w.size() > cap_)
      fail(errc::cap_exceeded, "word too long for raw closure (length " +
                                   std::to_string(w.size()) + " > cap " + std::to_string(cap_) + ")");
  }

  // full closure under single-relation substitutions at every position
  std::unordered_set<Word> seen{w};
  std::queue<Word> queue;
  queue.push(w);
  while (!queue.empty()) {
    Word m = std::move(queue.front());
    queue.pop();
    for (const auto& [lhs, rhs] : rules_) {
      if (lhs.size() > m.size()) continue;
      for (std::size_t pos = 0; pos + lhs.size() <= m.size(); ++pos) {
        if (m.compare(pos, lhs.size(), lhs) != 0) continue;
        Word cand = m;
        cand.replace(pos, lhs.size(), rhs);
        if (seen.insert(cand).second) queue.push(cand);
      }
    }
  }

  ClassData data;
  data.members.assign(seen.begin(), seen.end());
  std::sort(data.members.begin(), data.members.end());
  data.canonical = data.members.front();

  std::unique_lock lock(mutex_);
  auto it = word2class_.find(w);
  if (it != word2class_.end()) return it->second;  // lost a race, reuse
  int id = static_cast<int>(classes_.size());
  classes_.push_back(std::move(data));
  for (const auto& m : classes_.back().members) word2class_.emplace(m, id);
  return id;
}

Word WordContext::canonical(const Word& w) {
  int id = class_id(w);
  std::shared_lock lock(mutex_);
  return classes_[id].canonical;
}

const std::vector<Word>& WordContext::word_class(const Word& w) {
  int id = class_id(w);
  std::shared_lock lock(mutex_);
  return classes_[id].members;
}

bool WordContext::equal(const Word& u, const Word& v) {
  if (u.size() != v.size()) return false;
  return class_id(u) == class_id(v);
}

std::optional<Word> WordContext::left_divides(const Word& u, const Word& v) {
  if (u.size() > v.size()) return std::nullopt;
  if (u.empty()) return v;
  const auto& us = word_class(u);
  const auto& vs = word_class(v);
  for (const auto& m : vs) {
    Word prefix = m.substr(0, u.size());
    if (std::binary_search(us.begin(), us.end(), prefix)) return canonical(m.substr(u.size()));
  }
  return std::nullopt;
}

std::optional<Word> WordContext::right_divides(const Word& u, const Word& v) {
  if (u.size() > v.size()) return std::nullopt;
  if (u.empty()) return v;
  const auto& us = word_class(u);
  const auto& vs = word_class(v);
  for (const auto& m : vs) {
    Word suffix = m.substr(m.size() - u.size());
    if (std::binary_search(us.begin(), us.end(), suffix)) return canonical(m.substr(0, m.size() - u.size()));
  }
  return std::nullopt;
}

Word WordContext::left_gcd(const Word& u, const Word& v) {
  // common left divisors are prefixes of members of both classes
  std::unordered_set<Word> divs_u;
  for (const auto& m : word_class(u))
    for (std::size_t len = 0; len <= m.size(); ++len) divs_u.insert(canonical(m.substr(0, len)));
  Word best;  // epsilon always divides
  std::vector<Word> best_ties;
  for (const auto& m : word_class(v)) {
    for (std::size_t len = 1; len <= m.size(); ++len) {
      Word c = canonical(m.substr(0, len));
      if (!divs_u.count(c)) break;  // prefixes of a fixed member are nested
      if (c.size() > best.size()) {
        best = c;
        best_ties.assign(1, c);
      } else if (c.size() == best.size() && c != best &&
                 std::find(best_ties.begin(), best_ties.end(), c) == best_ties.end()) {
        best_ties.push_back(c);
      }
    }
  }
  if (best_ties.size() > 1)
    fail(errc::structural_error, "two maximal common left divisors; semilattice property violated");
  return best;
}

std::optional<Word> WordContext::left_lcm_bounded(const Word& u, const Word& v, std::size_t bound) {
  if (bound > cap_)
    fail(errc::cap_exceeded, "lcm bound " + std::to_string(bound) + " above the word cap " +
                                 std::to_string(cap_) + "; raise the cap first");
  const Word& base = u.size() >= v.size() ? u : v;
  const Word& other = u.size() >= v.size() ? v : u;

  // breadth-first over canonical multiples of `base`, in length order
  std::vector<Word> level{canonical(base)};
  std::unordered_set<Word> visited(level.begin(), level.end());
  int n = pres_.rank();
  while (true) {
    std::vector<Word> hits;
    for (const auto& z : level)
      if (left_divides(other, z)) hits.push_back(z);
    if (!hits.empty()) {
      std::sort(hits.begin(), hits.end());
      hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
      if (hits.size() > 1)
        fail(errc::structural_error,
             "two incomparable minimal common multiples of equal length; semilattice property violated");
      return hits.front();
    }
    if (level.empty() || level.front().size() >= bound) {
      ++bound_hits_;
      return std::nullopt;
    }
    std::vector<Word> next;
    for (const auto& z : level)
      for (int g = 0; g < n; ++g) {
        Word c = canonical(z + static_cast<char>(g));
        if (visited.insert(c).second) next.push_back(c);
      }
    level = std::move(next);
  }
}

}  // namespace atm
