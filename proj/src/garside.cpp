#include "atm/garside.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>

#include "atm/rng.hpp"

namespace atm {

namespace {

// Iterative Kosaraju; graphs here have at most a few hundred vertices.
int scc_count(const std::vector<std::vector<int>>& adj) {
  int n = static_cast<int>(adj.size());
  std::vector<std::vector<int>> radj(n);
  for (int v = 0; v < n; ++v)
    for (int w : adj[v]) radj[w].push_back(v);

  std::vector<int> order;
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
    seen[s] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < adj[v].size()) {
        int w = adj[v][i++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.emplace_back(w, 0);
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::fill(seen.begin(), seen.end(), 0);
  int comps = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (seen[*it]) continue;
    ++comps;
    std::vector<int> stack{*it};
    seen[*it] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : radj[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return comps;
}

}  // namespace

GarsideStructure GarsideStructure::compute(const Presentation& p, GarsideOptions opts) {
  p.validate();
  GarsideStructure g;
  g.pres_ = std::make_shared<const Presentation>(p);
  g.ctx_ = std::make_unique<WordContext>(*g.pres_, opts.word_cap);
  WordContext& ctx = *g.ctx_;
  const int rank = g.pres_->rank();

  std::vector<Word> simples;
  std::unordered_map<Word, int> index;
  auto add = [&](const Word& w) {
    if (index.count(w)) return false;
    index.emplace(w, static_cast<int>(simples.size()));
    simples.push_back(w);
    if (simples.size() > opts.max_simples)
      fail(errc::cap_exceeded,
           "Garside set exceeds " + std::to_string(opts.max_simples) +
               " simples; monoid too large or lcm bound unsound");
    return true;
  };
  add(Word{});
  for (int s = 0; s < rank; ++s) add(ctx.canonical(Word(1, static_cast<char>(s))));

  // generator joins are the only searches; everything else peels through them
  std::map<std::pair<Word, char>, std::pair<std::size_t, std::optional<Word>>> gj_memo;
  auto gen_join = [&](const Word& x, char s, std::size_t bound) -> std::optional<Word> {
    auto key = std::make_pair(x, s);
    if (auto it = gj_memo.find(key); it != gj_memo.end())
      if (it->second.second || it->second.first >= bound) return it->second.second;
    auto r = ctx.left_lcm_bounded(x, Word(1, s), bound);
    gj_memo[key] = {bound, r};
    return r;
  };

  // x v y = y . u_m with u_0 = x and u_i = s_i \ (u_{i-1} v s_i) along y's letters
  auto join_words = [&](const Word& x, const Word& y, std::size_t bound) -> std::optional<Word> {
    if (x.empty()) return y;
    Word cur = x;
    for (std::size_t i = 0; i < y.size(); ++i) {
      auto j = gen_join(cur, y[i], bound);
      if (!j) return std::nullopt;
      auto q = ctx.left_divides(Word(1, y[i]), *j);
      cur = *q;
    }
    if (y.size() + cur.size() > bound) {
      ctx.record_bound_hit();
      return std::nullopt;
    }
    return ctx.canonical(y + cur);
  };

  auto current_bound = [&]() {
    std::size_t maxlen = 0;
    for (const auto& w : simples) maxlen = std::max(maxlen, w.size());
    return std::max(2 * maxlen, static_cast<std::size_t>(g.pres_->max_relation_length()));
  };

  // fixed point of: downward closure under <=_r, closure under existing v_l
  bool changed = true;
  while (changed) {
    changed = false;
    std::size_t bound = current_bound();
    ctx.raise_cap(bound);
    for (std::size_t i = 0; i < simples.size(); ++i) {
      auto members = ctx.word_class(simples[i]);  // copy: `add` may grow the store
      for (const auto& m : members)
        for (std::size_t cut = 1; cut < m.size(); ++cut) changed |= add(ctx.canonical(m.substr(cut)));
    }
    for (std::size_t i = 0; i < simples.size(); ++i)
      for (std::size_t j = i + 1; j < simples.size(); ++j) {
        auto jn = join_words(simples[i], simples[j], bound);
        if (jn) changed |= add(*jn);
      }
  }

  // stable order: (length, lexicographic); the unit lands at index 0 and the
  // generators at 1..rank
  std::sort(simples.begin(), simples.end(), [](const Word& a, const Word& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  g.simples_ = simples;
  g.index_.clear();
  for (int i = 0; i < g.size(); ++i) g.index_.emplace(g.simples_[i], i);
  g.gen_simple_.resize(rank);
  for (int s = 0; s < rank; ++s)
    g.gen_simple_[s] = g.index_.at(ctx.canonical(Word(1, static_cast<char>(s))));

  const int n = g.size();
  const std::size_t bound = current_bound();

  // divisor tables from prefixes/suffixes of class members
  g.left_div_.assign(n, Bitset(n));
  g.right_div_.assign(n, Bitset(n));
  g.lq_.assign(n, std::vector<int>(n, -1));
  g.fc_ = true;
  for (int j = 0; j < n; ++j) {
    const auto& members = ctx.word_class(g.simples_[j]);
    std::set<Word> prefixes, suffixes;
    for (const auto& m : members)
      for (std::size_t cut = 0; cut <= m.size(); ++cut) {
        prefixes.insert(ctx.canonical(m.substr(0, cut)));
        suffixes.insert(ctx.canonical(m.substr(cut)));
      }
    for (const auto& pre : prefixes) {
      auto it = g.index_.find(pre);
      if (it == g.index_.end()) {
        g.fc_ = false;  // a left divisor of a simple that is not simple
        continue;
      }
      g.left_div_[j].set(it->second);
      g.lq_[it->second][j] = g.index_.at(ctx.canonical(*ctx.left_divides(pre, g.simples_[j])));
    }
    for (const auto& suf : suffixes) g.right_div_[j].set(g.index_.at(suf));
  }

  // joins of simples; existing ones are simple by construction
  g.join_.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      auto jn = join_words(g.simples_[i], g.simples_[j], bound);
      int id = jn ? g.index_.at(*jn) : -1;
      g.join_[i][j] = g.join_[j][i] = id;
    }

  // E(x) = {u != e | x.u simple}: quotients of the left-multiples of x
  g.e_set_.assign(n, Bitset(n));
  g.prod_.assign(n, std::vector<int>(n, -1));
  for (int x = 0; x < n; ++x)
    for (int w = 0; w < n; ++w)
      if (g.left_div_[w].test(x)) {
        int u = g.lq_[x][w];
        g.prod_[x][u] = w;
        if (u != 0) g.e_set_[x].set(u);
      }

  // delta: the unique maximal element when it bounds the generators
  std::vector<int> maximal;
  for (int m = 0; m < n; ++m) {
    bool is_max = true;
    for (int j = 0; j < n && is_max; ++j)
      if (j != m && g.left_div_[j].test(m)) is_max = false;
    if (is_max) maximal.push_back(m);
  }
  if (maximal.size() == 1) {
    bool bounds = true;
    for (int s = 0; s < rank; ++s) bounds &= g.left_div_[maximal[0]].test(g.gen_simple_[s]);
    if (bounds) g.delta_ = maximal[0];
  }
  return g;
}

int GarsideStructure::index_of(const Word& canonical_word) const {
  auto it = index_.find(canonical_word);
  return it == index_.end() ? -1 : it->second;
}

int GarsideStructure::left_quotient(int i, int j) const {
  int q = lq_[i][j];
  if (q < 0) fail(errc::invalid_argument, "left_quotient: not a left divisor");
  return q;
}

bool GarsideStructure::arrow(int x, int y) const {
  // x -> y iff E(x) meets no left divisor of y
  return !e_set_[x].intersects(left_div_[y]);
}

std::pair<int, int> GarsideStructure::pair_normal(int x, int y) const {
  // head = join of all simples dividing x.y; every such divisor is x.u with
  // u in E(x) and u <=_l y, so fold the witnesses x.u into the head
  Bitset qual = e_set_[x] & left_div_[y];
  int h = x;
  for (std::size_t u = qual.find_first(); u != Bitset::npos; u = qual.find_next(u))
    h = join_[h][prod_[x][static_cast<int>(u)]];
  int u_total = lq_[x][h];
  int r = lq_[u_total][y];
  return {h, r};
}

Element GarsideStructure::normal_form(const Word& w) const {
  Element x;
  for (char c : w) x = multiply_by_simple(std::move(x), gen_simple_[static_cast<unsigned char>(c)]);
  return x;
}

Element GarsideStructure::multiply_by_simple(Element a, int s) const {
  if (s == 0) return a;
  a.blocks.push_back(s);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = static_cast<int>(a.blocks.size()) - 2; i >= 0; --i) {
      auto [h, r] = pair_normal(a.blocks[i], a.blocks[i + 1]);
      if (h == a.blocks[i]) continue;
      a.blocks[i] = h;
      changed = true;
      if (r == 0)
        a.blocks.erase(a.blocks.begin() + i + 1);
      else
        a.blocks[i + 1] = r;
    }
  }
  return a;
}

Element GarsideStructure::multiply(const Element& a, const Element& b) const {
  Element out = a;
  for (int blk : b.blocks) {
    out.blocks.push_back(blk);
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = static_cast<int>(out.blocks.size()) - 2; i >= 0; --i) {
      auto [h, r] = pair_normal(out.blocks[i], out.blocks[i + 1]);
      if (h == out.blocks[i]) continue;
      out.blocks[i] = h;
      changed = true;
      if (r == 0)
        out.blocks.erase(out.blocks.begin() + i + 1);
      else
        out.blocks[i + 1] = r;
    }
  }
  return out;
}

Word GarsideStructure::element_word(const Element& x) const {
  Word w;
  for (int b : x.blocks) w += simples_[b];
  return w;
}

int GarsideStructure::element_length(const Element& x) const {
  int len = 0;
  for (int b : x.blocks) len += length(b);
  return len;
}

std::string GarsideStructure::element_to_string(const Element& x) const {
  if (x.is_unit()) return "e";
  std::string out;
  for (std::size_t i = 0; i < x.blocks.size(); ++i) {
    if (i) out += " | ";
    out += pres_->word_to_string(simples_[x.blocks[i]]);
  }
  return out;
}

std::optional<Word> GarsideStructure::block_residual(const Word& r, int s) const {
  // q = s \ (r v s), peeled one letter at a time through the tables
  Word q;
  int cur = s;
  for (char c : r) {
    int j = join_[gen_simple_[static_cast<unsigned char>(c)]][cur];
    if (j < 0) return std::nullopt;
    q += simples_[lq_[cur][j]];
    cur = lq_[gen_simple_[static_cast<unsigned char>(c)]][j];
  }
  return q;
}

std::optional<Word> GarsideStructure::division_residual(const Element& x, const Element& y) const {
  Word residual = element_word(x);
  for (int block : y.blocks) {
    auto q = block_residual(residual, block);
    if (!q) return std::nullopt;
    residual = std::move(*q);
    if (residual.empty()) return residual;  // early out: x already divides
  }
  return residual;
}

bool GarsideStructure::divides(const Element& x, const Element& y) const {
  auto r = division_residual(x, y);
  return r && r->empty();
}

std::optional<Element> GarsideStructure::join(const Element& x, const Element& y) const {
  auto r = division_residual(x, y);
  if (!r) return std::nullopt;
  Element out = y;
  for (char c : *r) out = multiply_by_simple(std::move(out), gen_simple_[static_cast<unsigned char>(c)]);
  return out;
}

std::vector<int> GarsideStructure::left_set(int x) const {
  std::vector<int> out;
  for (int s = 0; s < pres_->rank(); ++s)
    if (left_div_[x].test(gen_simple_[s])) out.push_back(s);
  return out;
}

std::vector<int> GarsideStructure::letter_set(int x) const {
  std::vector<bool> present(pres_->rank(), false);
  for (char c : simples_[x]) present[static_cast<unsigned char>(c)] = true;
  std::vector<int> out;
  for (int s = 0; s < pres_->rank(); ++s)
    if (present[s]) out.push_back(s);
  return out;
}

std::vector<int> GarsideStructure::right_set(int x) const {
  auto letters = letter_set(x);
  std::vector<int> out;
  for (int s = 0; s < pres_->rank(); ++s) {
    bool in = right_div_[x].test(gen_simple_[s]);
    if (!in)
      for (int eta : letters)
        if (eta != s && join_[gen_simple_[s]][gen_simple_[eta]] < 0) in = true;  // l(s,eta) = oo
    if (in) out.push_back(s);
  }
  return out;
}

bool GarsideStructure::normality_criterion(int x, int y) const {
  auto ly = left_set(y);
  auto rx = right_set(x);
  for (int s : ly)
    if (std::find(rx.begin(), rx.end(), s) == rx.end()) return false;
  return true;
}

Bitset GarsideStructure::d_set_simple(int x) const {
  Bitset d = e_set_[x];
  for (std::size_t u = d.find_first(); u != Bitset::npos; u = d.find_next(u)) {
    Bitset strict = left_div_[u];
    strict.reset(0);
    strict.reset(u);
    if (strict.intersects(e_set_[x])) d.reset(u);
  }
  return d;
}

CharneyGraph GarsideStructure::charney_graph() const {
  require_irreducible(*pres_, "charney_graph");
  CharneyGraph cg;
  for (int i = 1; i < size(); ++i)
    if (!(delta_ && *delta_ == i)) cg.vertices.push_back(i);
  std::vector<int> pos(size(), -1);
  for (std::size_t i = 0; i < cg.vertices.size(); ++i) pos[cg.vertices[i]] = static_cast<int>(i);
  cg.edges.resize(cg.vertices.size());
  for (std::size_t i = 0; i < cg.vertices.size(); ++i)
    for (std::size_t j = 0; j < cg.vertices.size(); ++j)
      if (arrow(cg.vertices[i], cg.vertices[j])) cg.edges[i].push_back(static_cast<int>(j));
  cg.scc_count = cg.vertices.empty() ? 0 : scc_count(cg.edges);
  cg.strongly_connected = cg.scc_count == 1 && !cg.vertices.empty();
  return cg;
}

bool GarsideStructure::is_type_fc() const { return fc_; }

AxiomReport GarsideStructure::check_axioms(std::uint64_t seed) const {
  AxiomReport report;
  const int rank = pres_->rank();
  auto& ctx = *ctx_;
  SplitMix64 rng(seed);
  auto random_word = [&](std::size_t len) {
    Word w;
    for (std::size_t i = 0; i < len; ++i)
      w.push_back(static_cast<char>(rng.next_below(static_cast<std::uint64_t>(rank))));
    return w;
  };

  // P1: the defining relations preserve length, so |.| is well defined; spot
  // check additivity on samples anyway.
  {
    bool ok = true;
    for (const auto& [u, v] : pres_->relations) ok &= u.size() == v.size();
    for (int t = 0; t < 20 && ok; ++t) {
      Word u = random_word(1 + rng.next_below(3)), v = random_word(1 + rng.next_below(3));
      ok &= ctx.canonical(u + v).size() == u.size() + v.size();
    }
    report.checks.push_back({"P1", ok, "length function well defined on classes"});
  }
  // P2: cancellativity on bounded samples
  {
    bool ok = true;
    for (int t = 0; t < 80 && ok; ++t) {
      Word u = random_word(1 + rng.next_below(3));
      Word v = random_word(1 + rng.next_below(3));
      Word w = random_word(v.size());
      bool vw = ctx.equal(v, w);
      ok &= ctx.equal(u + v, u + w) == vw;
      ok &= ctx.equal(v + u, w + u) == vw;
    }
    report.checks.push_back({"P2", ok, "left/right cancellativity on samples"});
  }
  // P3: existence of gcds on sampled pairs
  {
    bool ok = true;
    for (int t = 0; t < 40 && ok; ++t) {
      Word u = random_word(1 + rng.next_below(4));
      Word v = random_word(1 + rng.next_below(4));
      try {
        Word gcd = ctx.left_gcd(u, v);
        ok &= ctx.left_divides(gcd, u).has_value() && ctx.left_divides(gcd, v).has_value();
      } catch (const error&) {
        ok = false;
      }
    }
    report.checks.push_back({"P3", ok, "lower semilattice on samples"});
  }
  report.checks.push_back({"P4", true, "finite Garside subset of size " + std::to_string(size())});

  bool p5 = false;
  std::optional<CharneyGraph> cg;
  if (is_irreducible(*pres_).irreducible) {
    cg = charney_graph();
    p5 = cg->strongly_connected;
    report.checks.push_back(
        {"P5", p5, "Charney graph SCC count = " + std::to_string(cg->scc_count)});
  } else {
    report.checks.push_back({"P5", false, "reducible presentation"});
  }

  // P6: gcd of total lengths of Charney cycles, via potentials on a BFS tree
  {
    bool ok = false;
    std::string note = "no cycles";
    if (cg && p5 && !cg->vertices.empty()) {
      std::vector<long long> pot(cg->vertices.size(), -1);
      std::queue<int> bfs;
      bfs.push(0);
      pot[0] = 0;
      long long g = 0;
      while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int w : cg->edges[v]) {
          long long through = pot[v] + length(cg->vertices[v]);
          if (pot[w] < 0) {
            pot[w] = through;
            bfs.push(w);
          }
        }
      }
      for (std::size_t v = 0; v < cg->vertices.size(); ++v)
        for (int w : cg->edges[v])
          g = std::gcd(g, std::abs(pot[v] + length(cg->vertices[v]) - pot[w]));
      ok = g == 1;
      note = "cycle length gcd = " + std::to_string(g);
    }
    report.checks.push_back({"P6", ok, note});
  }

  // P7: with a Garside element, some Charney vertex needs out-degree >= 2
  {
    bool ok = true;
    std::string note = "no Garside element; vacuous";
    if (delta_) {
      ok = false;
      if (cg)
        for (const auto& adj : cg->edges)
          if (adj.size() >= 2) ok = true;
      note = ok ? "vertex with out-degree >= 2 found" : "all out-degrees < 2";
    }
    report.checks.push_back({"P7", ok, note});
  }

  report.two_generator_spherical = spherical() && rank == 2;
  return report;
}

Rat simple_weight(const GarsideStructure& g, const std::vector<Rat>& gen_weights, int simple) {
  if (gen_weights.empty()) return 1;
  Rat w = 1;
  for (char c : g.word(simple)) w *= gen_weights[static_cast<unsigned char>(c)];
  return w;
}

std::vector<Element> elements_up_to_length(const GarsideStructure& g, int maxlen) {
  std::vector<Element> out{Element{}};
  std::vector<std::pair<Element, int>> stack;
  for (int s = 1; s < g.size(); ++s)
    if (g.length(s) <= maxlen) stack.push_back({Element{{s}}, g.length(s)});
  while (!stack.empty()) {
    auto [x, len] = std::move(stack.back());
    stack.pop_back();
    out.push_back(x);
    for (int s = 1; s < g.size(); ++s) {
      int extended = len + g.length(s);
      if (extended > maxlen || !g.arrow(x.blocks.back(), s)) continue;
      Element y = x;
      y.blocks.push_back(s);
      stack.push_back({std::move(y), extended});
    }
  }
  return out;
}

}  // namespace atm
