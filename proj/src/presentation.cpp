#include "atm/presentation.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace atm {

namespace {

Word alternating(int first, int second, int length) {
  Word w;
  w.reserve(length);
  for (int i = 0; i < length; ++i) w.push_back(static_cast<char>(i % 2 == 0 ? first : second));
  return w;
}

std::string default_symbol(int i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "g" + std::to_string(i);
}

}  // namespace

int Presentation::symbol_index(const std::string& s) const {
  for (int i = 0; i < rank(); ++i)
    if (symbols[i] == s) return i;
  fail(errc::invalid_argument, "unknown generator '" + s + "'");
}

std::string Presentation::word_to_string(const Word& w) const {
  if (w.empty()) return "e";
  bool multi = false;
  for (const auto& s : symbols) multi |= s.size() > 1;
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (multi && i > 0) out += '.';
    out += symbols[static_cast<unsigned char>(w[i])];
  }
  return out;
}

Word Presentation::parse_word(const std::string& text) const {
  Word w;
  if (text == "e" || text.empty()) return w;
  if (text.find('.') != std::string::npos) {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, '.')) w.push_back(static_cast<char>(symbol_index(part)));
  } else {
    for (char c : text) w.push_back(static_cast<char>(symbol_index(std::string(1, c))));
  }
  return w;
}

int Presentation::max_relation_length() const {
  size_t m = 0;
  for (const auto& [u, v] : relations) m = std::max(m, u.size());
  return static_cast<int>(m);
}

void Presentation::validate() const {
  if (symbols.empty()) fail(errc::parse_error, "presentation needs at least one generator");
  std::set<std::string> seen;
  for (const auto& s : symbols) {
    if (s.empty()) fail(errc::parse_error, "empty generator symbol");
    if (!seen.insert(s).second) fail(errc::parse_error, "duplicate generator '" + s + "'");
  }
  for (const auto& [u, v] : relations) {
    if (u.size() != v.size())
      fail(errc::parse_error, "relation sides have different lengths; relations must preserve length");
    if (u == v) fail(errc::parse_error, "trivial relation");
    for (char c : u + v)
      if (static_cast<unsigned char>(c) >= symbols.size()) fail(errc::parse_error, "relation letter out of range");
  }
  if (coxeter) {
    const auto& m = *coxeter;
    for (int i = 0; i < rank(); ++i)
      for (int j = 0; j < rank(); ++j) {
        if (m[i][j] != m[j][i]) fail(errc::parse_error, "Coxeter matrix must be symmetric");
        if (i != j && m[i][j] != coxeter_infinity && m[i][j] < 2)
          fail(errc::parse_error, "Coxeter length below 2");
      }
  }
}

Presentation presentation_from_coxeter(std::vector<std::string> symbols,
                                       std::vector<std::vector<int>> coxeter, std::string name) {
  Presentation p;
  p.symbols = std::move(symbols);
  p.name = std::move(name);
  int n = p.rank();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int m = coxeter[i][j];
      if (m == coxeter_infinity) continue;
      p.relations.emplace_back(alternating(i, j, m), alternating(j, i, m));
    }
  p.coxeter = std::move(coxeter);
  p.validate();
  return p;
}

Presentation parse_presentation(const std::string& text) {
  std::vector<std::string> symbols;
  // pair -> value, to detect conflicting duplicates
  std::map<std::pair<int, int>, int> entries;
  bool saw_generators = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto syntax = [&](const std::string& msg) {
    fail(errc::parse_error, "line " + std::to_string(lineno) + ": " + msg);
  };

  auto index_of = [&](const std::string& s) {
    auto it = std::find(symbols.begin(), symbols.end(), s);
    if (it == symbols.end()) syntax("unknown generator '" + s + "'");
    return static_cast<int>(it - symbols.begin());
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;
    if (head == "generators:") {
      if (saw_generators) syntax("duplicate generators: line");
      saw_generators = true;
      std::string s;
      while (ls >> s) symbols.push_back(s);
      if (symbols.empty()) syntax("no generators listed");
    } else if (head == "m:") {
      if (!saw_generators) syntax("m: before generators:");
      std::string a, b, eq, val;
      if (!(ls >> a >> b >> eq >> val) || eq != "=") syntax("expected 'm: <sym> <sym> = <int|inf>'");
      int i = index_of(a), j = index_of(b);
      if (i == j) continue;  // values on the diagonal are irrelevant
      int m;
      if (val == "inf") {
        m = coxeter_infinity;
      } else {
        try {
          m = std::stoi(val);
        } catch (...) {
          syntax("bad length value '" + val + "'");
        }
        if (m < 2) syntax("Coxeter length must be >= 2 (or inf)");
      }
      auto key = std::minmax(i, j);
      auto [it, inserted] = entries.emplace(key, m);
      if (!inserted && it->second != m) syntax("conflicting lengths for pair " + a + " " + b);
    } else {
      syntax("unknown directive '" + head + "'");
    }
  }
  if (!saw_generators) fail(errc::parse_error, "missing 'generators:' line");

  int n = static_cast<int>(symbols.size());
  std::vector<std::vector<int>> cox(n, std::vector<int>(n, coxeter_infinity));
  for (auto& [key, m] : entries) cox[key.first][key.second] = cox[key.second][key.first] = m;
  return presentation_from_coxeter(std::move(symbols), std::move(cox), "file");
}

Presentation build_braid(int strands) {
  if (strands < 2) fail(errc::invalid_argument, "braid: need at least 2 strands");
  int n = strands - 1;
  std::vector<std::string> symbols;
  for (int i = 0; i < n; ++i) symbols.push_back(default_symbol(i));
  std::vector<std::vector<int>> cox(n, std::vector<int>(n, 2));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(i - j) == 1) cox[i][j] = 3;
  return presentation_from_coxeter(std::move(symbols), std::move(cox),
                                   "braid:" + std::to_string(strands));
}

Presentation build_heap(int n, const std::vector<std::pair<int, int>>& commuting) {
  if (n < 1) fail(errc::invalid_argument, "heap: need at least one generator");
  std::vector<std::string> symbols;
  for (int i = 0; i < n; ++i) symbols.push_back(default_symbol(i));
  std::vector<std::vector<int>> cox(n, std::vector<int>(n, coxeter_infinity));
  for (auto [i, j] : commuting) {
    if (i < 0 || j < 0 || i >= n || j >= n || i == j)
      fail(errc::invalid_argument, "heap: bad commuting pair");
    cox[i][j] = cox[j][i] = 2;
  }
  return presentation_from_coxeter(std::move(symbols), std::move(cox), "heap:" + std::to_string(n));
}

Presentation build_dihedral(int m) {
  if (m < 3) fail(errc::invalid_argument, "dihedral: need m >= 3");
  std::vector<std::vector<int>> cox{{2, m}, {m, 2}};
  cox[0][0] = cox[1][1] = 2;  // diagonal ignored
  return presentation_from_coxeter({"a", "b"}, std::move(cox), "dihedral:" + std::to_string(m));
}

Presentation build_free(int n) {
  if (n < 1) fail(errc::invalid_argument, "free: need at least one generator");
  std::vector<std::string> symbols;
  for (int i = 0; i < n; ++i) symbols.push_back(default_symbol(i));
  std::vector<std::vector<int>> cox(n, std::vector<int>(n, coxeter_infinity));
  return presentation_from_coxeter(std::move(symbols), std::move(cox), "free:" + std::to_string(n));
}

Presentation build_dual_a(int strands) {
  if (strands < 2) fail(errc::invalid_argument, "dual-a: need at least 2 strands");
  int n = strands;
  Presentation p;
  p.name = "dual-a:" + std::to_string(n);
  std::map<std::pair<int, int>, int> id;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      id[{i, j}] = p.rank();
      p.symbols.push_back("s" + std::to_string(i) + std::to_string(j));
    }
  auto g = [&](int i, int j) { return static_cast<char>(id.at({i, j})); };
  auto pair2 = [](char x, char y) { return Word{x, y}; };
  // s_ij s_jk = s_jk s_ik = s_ik s_ij for i < j < k
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = j + 1; k <= n; ++k) {
        p.relations.emplace_back(pair2(g(i, j), g(j, k)), pair2(g(j, k), g(i, k)));
        p.relations.emplace_back(pair2(g(j, k), g(i, k)), pair2(g(i, k), g(i, j)));
      }
  // commutations for disjoint (i<j<k<l) and nested (i<k<l<j) pairs
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
          bool disjoint = (i < j && j < k && k < l);
          bool nested = (i < k && k < l && l < j);
          if (disjoint || nested)
            p.relations.emplace_back(pair2(g(i, j), g(k, l)), pair2(g(k, l), g(i, j)));
        }
  p.validate();
  return p;
}

Presentation build_free_product(const Presentation& left, const Presentation& right) {
  Presentation p;
  p.name = "free-product(" + left.name + "," + right.name + ")";
  p.symbols = left.symbols;
  std::set<std::string> used(p.symbols.begin(), p.symbols.end());
  for (const auto& s : right.symbols) {
    std::string t = s;
    while (used.count(t)) t += "'";
    used.insert(t);
    p.symbols.push_back(t);
  }
  p.relations = left.relations;
  int off = left.rank();
  for (const auto& [u, v] : right.relations) {
    Word su, sv;
    for (char c : u) su.push_back(static_cast<char>(c + off));
    for (char c : v) sv.push_back(static_cast<char>(c + off));
    p.relations.emplace_back(su, sv);
  }
  // cross pairs are free: no relations, and the Coxeter form survives only
  // if both factors carried one
  if (left.coxeter && right.coxeter) {
    int n = p.rank();
    std::vector<std::vector<int>> cox(n, std::vector<int>(n, coxeter_infinity));
    for (int i = 0; i < left.rank(); ++i)
      for (int j = 0; j < left.rank(); ++j) cox[i][j] = (*left.coxeter)[i][j];
    for (int i = 0; i < right.rank(); ++i)
      for (int j = 0; j < right.rank(); ++j) cox[off + i][off + j] = (*right.coxeter)[i][j];
    p.coxeter = std::move(cox);
  }
  p.validate();
  return p;
}

Presentation build_family(const std::string& family_spec) {
  auto colon = family_spec.find(':');
  std::string family = family_spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : family_spec.substr(colon + 1);
  auto int_arg = [&](const std::string& s) {
    try {
      return std::stoi(s);
    } catch (...) {
      fail(errc::invalid_argument, "bad family parameter '" + s + "'");
    }
  };
  if (family == "braid") return build_braid(int_arg(args));
  if (family == "dihedral") return build_dihedral(int_arg(args));
  if (family == "free") return build_free(int_arg(args));
  if (family == "dual-a" || family == "dual_a") return build_dual_a(int_arg(args));
  if (family == "heap") {
    auto second = args.find(':');
    int n = int_arg(args.substr(0, second));
    std::vector<std::pair<int, int>> commuting;
    if (second != std::string::npos) {
      std::stringstream ss(args.substr(second + 1));
      std::string pair;
      while (std::getline(ss, pair, ',')) {
        if (pair.size() != 2) fail(errc::invalid_argument, "heap pair must be two letters, e.g. ab");
        commuting.emplace_back(pair[0] - 'a', pair[1] - 'a');
      }
    }
    return build_heap(n, commuting);
  }
  fail(errc::invalid_argument, "unknown family '" + family + "'");
}

IrreducibilityReport is_irreducible(const Presentation& p) {
  int n = p.rank();
  // Edge iff the generators do not merely commute: for the Coxeter form this
  // is l(a,b) != 2; in the pair form, a pure commutation (ab, ba) with no
  // other shared relation is the only edgeless case.
  std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
  if (p.coxeter) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) edge[i][j] = (*p.coxeter)[i][j] != 2;
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        bool commutation_only = true;
        bool touched = false;
        for (const auto& [u, v] : p.relations) {
          bool has_i = u.find(static_cast<char>(i)) != Word::npos ||
                       v.find(static_cast<char>(i)) != Word::npos;
          bool has_j = u.find(static_cast<char>(j)) != Word::npos ||
                       v.find(static_cast<char>(j)) != Word::npos;
          if (!(has_i && has_j)) continue;
          touched = true;
          Word ij{static_cast<char>(i), static_cast<char>(j)};
          Word ji{static_cast<char>(j), static_cast<char>(i)};
          bool is_comm = (u == ij && v == ji) || (u == ji && v == ij);
          if (!is_comm) commutation_only = false;
        }
        bool e = !touched || !commutation_only;
        edge[i][j] = edge[j][i] = e;
      }
  }

  IrreducibilityReport report;
  std::vector<int> comp(n, -1);
  int ncomp = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    std::vector<int> stack{s};
    comp[s] = ncomp;
    report.components.emplace_back();
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      report.components.back().push_back(v);
      for (int w = 0; w < n; ++w)
        if (edge[v][w] && comp[w] == -1) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
    }
    std::sort(report.components.back().begin(), report.components.back().end());
    ++ncomp;
  }
  report.irreducible = ncomp == 1;
  return report;
}

ParamClasses param_classes(const Presentation& p) {
  int n = p.rank();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };

  for (const auto& [u, v] : p.relations) {
    std::vector<int> diff(n, 0);
    for (char c : u) ++diff[static_cast<unsigned char>(c)];
    for (char c : v) --diff[static_cast<unsigned char>(c)];
    std::vector<int> plus, minus;
    for (int i = 0; i < n; ++i) {
      if (diff[i] > 0) plus.insert(plus.end(), diff[i], i);
      if (diff[i] < 0) minus.insert(minus.end(), -diff[i], i);
    }
    if (plus.empty()) continue;  // balanced relation constrains nothing
    if (plus.size() == 1 && minus.size() == 1) {
      parent[find(plus[0])] = find(minus[0]);
      continue;
    }
    fail(errc::structural_error,
         "relation imposes a non-binary weight constraint; valuation classes undefined");
  }

  ParamClasses pc;
  pc.class_of.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (pc.class_of[r] == -1) {
      pc.class_of[r] = pc.count();
      pc.classes.emplace_back();
    }
    pc.class_of[i] = pc.class_of[r];
    pc.classes[pc.class_of[r]].push_back(i);
  }
  return pc;
}

}  // namespace atm
