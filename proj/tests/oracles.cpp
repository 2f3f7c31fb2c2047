#include "oracles.hpp"

#include <algorithm>

#include "atm/mobius.hpp"

namespace atm::oracle {

BfsEnumeration enumerate_classes(const Presentation& p, WordContext& ctx, int max_len) {
  BfsEnumeration out;
  out.by_length.resize(max_len + 1);
  out.by_length[0].push_back(Word{});
  for (int k = 1; k <= max_len; ++k) {
    std::vector<Word> next;
    for (const auto& w : out.by_length[k - 1])
      for (int g = 0; g < p.rank(); ++g) next.push_back(ctx.canonical(w + static_cast<char>(g)));
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    out.by_length[k] = std::move(next);
  }
  return out;
}

bool brute_arrow(const GarsideStructure& g, int x, int y) {
  WordContext& ctx = g.words();
  Word xy = g.word(x) + g.word(y);
  ctx.raise_cap(xy.size());
  Word join;  // unit
  for (int z = 0; z < g.size(); ++z) {
    if (!ctx.left_divides(g.word(z), xy)) continue;
    auto j = ctx.left_lcm_bounded(join, g.word(z), xy.size());
    if (!j) return false;  // cannot happen: both divide xy
    join = *j;
  }
  return ctx.equal(join, g.word(x));
}

std::vector<int> brute_normal_form(const GarsideStructure& g, const Word& w) {
  WordContext& ctx = g.words();
  ctx.raise_cap(std::max(ctx.cap(), w.size()));
  std::vector<int> blocks;
  Word rest = ctx.canonical(w);
  while (!rest.empty()) {
    Word head;  // join of all simple divisors of rest
    for (int z = 1; z < g.size(); ++z) {
      if (!ctx.left_divides(g.word(z), rest)) continue;
      auto j = ctx.left_lcm_bounded(head, g.word(z), rest.size());
      head = *j;  // exists: both divide rest
    }
    blocks.push_back(g.index_of(ctx.canonical(head)));
    rest = *ctx.left_divides(head, rest);
  }
  return blocks;
}

double chain_cylinder_mass(const BoundaryChain& bc, const std::vector<int>& blocks) {
  if (blocks.empty()) return 0.0;  // C_e carries no boundary mass
  double mass = bc.h[blocks[0]];
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    double step = 0;
    for (const auto& [y, q] : bc.rows[blocks[i - 1]])
      if (y == blocks[i]) step = q;
    mass *= step;
  }
  return mass;
}

double brute_measure_check(const GarsideStructure& g, const BoundaryChain& bc, const Element& x) {
  double total = 0;
  for (const auto& y : garside_base(g, x)) total += chain_cylinder_mass(bc, y.blocks);
  return total;
}

Rat weighted_count(const Presentation& p, const BfsEnumeration& e, const std::vector<Rat>& w,
                   int k) {
  (void)p;
  Rat total = 0;
  for (const auto& word : e.by_length[k]) {
    Rat prod = 1;
    for (char c : word) prod *= w.empty() ? Rat(1) : w[static_cast<unsigned char>(c)];
    total += prod;
  }
  return total;
}

}  // namespace atm::oracle
