#include "atm/mobius.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "atm/cwg.hpp"

namespace atm {

Rat MobiusPolynomial::eval(const Rat& t) const {
  Rat acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double MobiusPolynomial::eval(double t) const {
  double acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + to_double(*it);
  return acc;
}

double MobiusPolynomial::derivative(double t) const {
  double acc = 0;
  for (int k = degree(); k >= 1; --k) acc = acc * t + k * to_double(coeffs[k]);
  return acc;
}

std::string MobiusPolynomial::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (int k = 0; k <= degree(); ++k) {
    if (coeffs[k] == 0) continue;
    Rat c = coeffs[k];
    if (first) {
      out << c.str();
      first = false;
    } else {
      out << (c > 0 ? " + " : " - ") << Rat(c > 0 ? c : -c).str();
    }
    if (k >= 1) out << "*T" << (k > 1 ? "^" + std::to_string(k) : "");
  }
  if (first) out << "0";
  return out.str();
}

std::vector<int> d_set(const GarsideStructure& g, int simple) {
  Bitset bits = g.d_set_simple(simple);
  std::vector<int> out;
  for (std::size_t u = bits.find_first(); u != Bitset::npos; u = bits.find_next(u))
    out.push_back(static_cast<int>(u));
  return out;
}

int join_of_subset(const GarsideStructure& g, int u, const std::vector<int>& members,
                   unsigned mask) {
  // vee of {z_i} equals u \ (vee of {u.z_i}); all joins stay inside S
  int w = u;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (!(mask & (1u << i))) continue;
    int uz = g.product_simple(u, members[i]);
    if (uz < 0) return -1;
    w = g.join_simple(w, uz);
    if (w < 0) return -1;
  }
  return g.left_quotient(u, w);
}

std::vector<Element> garside_base(const GarsideStructure& g, const Element& x, int len_cap) {
  std::vector<Element> out;
  if (x.is_unit()) {
    // every cylinder C_y with y simple is minimal in the full space
    for (int s = 0; s < g.size(); ++s)
      if (len_cap < 0 || g.length(s) <= len_cap) out.push_back(g.simple_element(s));
    return out;
  }
  int max_height = x.height();
  Word root = g.element_word(x);

  // depth-first over normal sequences; a branch closes the moment the
  // residual of x empties, which is exactly the minimal-cylinder condition
  struct Node {
    Element y;
    Word residual;
    int len;
  };
  std::vector<Node> stack{{Element{}, root, 0}};
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    for (int s = 1; s < g.size(); ++s) {
      if (!node.y.blocks.empty() && !g.arrow(node.y.blocks.back(), s)) continue;
      int len = node.len + g.length(s);
      if (len_cap >= 0 && len > len_cap) continue;
      auto q = g.block_residual(node.residual, s);
      if (!q) continue;
      Element y = node.y;
      y.blocks.push_back(s);
      if (q->empty()) {
        out.push_back(std::move(y));
      } else if (y.height() < max_height) {
        stack.push_back({std::move(y), std::move(*q), len});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Rat graded_mobius(const GarsideStructure& g, const ElementFn& f, const Element& x) {
  int u = x.is_unit() ? 0 : x.blocks.back();
  std::vector<int> d = d_set(g, u);
  if (d.size() > 30) fail(errc::cap_exceeded, "D(x) too large for subset enumeration");
  Rat total = 0;
  for (unsigned mask = 0; mask < (1u << d.size()); ++mask) {
    int vd = join_of_subset(g, u, d, mask);
    if (vd < 0) continue;  // join does not exist; subset not admissible
    Rat term = f(g.multiply(x, g.simple_element(vd)));
    total += (__builtin_popcount(mask) % 2 == 0) ? term : -term;
  }
  return total;
}

Rat inverse_graded_mobius(const GarsideStructure& g, const ElementFn& h, const Element& x,
                          int support_cap) {
  Rat total = 0;
  for (const auto& y : garside_base(g, x, support_cap)) total += h(y);
  return total;
}

MobiusPolynomial mobius_polynomial(const GarsideStructure& g, const std::vector<Rat>& gen_weights,
                                   MobiusRange range) {
  int n = g.size();
  int max_deg = 0;
  for (int i = 0; i < n; ++i) max_deg = std::max(max_deg, g.length(i));
  MobiusPolynomial mu;
  mu.coeffs.assign(max_deg + 1, Rat(0));

  if (range == MobiusRange::generators) {
    int rank = g.presentation().rank();
    if (rank > 30) fail(errc::cap_exceeded, "too many generators for subset enumeration");
    for (unsigned mask = 0; mask < (1u << rank); ++mask) {
      int w = 0;  // unit; vee of the empty set
      bool ok = true;
      for (int s = 0; s < rank && ok; ++s)
        if (mask & (1u << s)) {
          w = g.join_simple(w, g.simple_of_generator(s));
          ok = w >= 0;
        }
      if (!ok) continue;
      Rat term = simple_weight(g, gen_weights, w);
      mu.coeffs[g.length(w)] += (__builtin_popcount(mask) % 2 == 0) ? term : -term;
    }
  } else {
    // c(z) = signed count of subsets of S\{e} with join exactly z; every
    // subset of the divisors of z has an existing join, so the alternating
    // sums telescope along the divisibility lattice
    std::vector<Rat> c(n, Rat(0));
    c[0] = 1;
    for (int z = 1; z < n; ++z) {
      Rat acc = 0;
      const Bitset& div = g.left_divisors(z);
      for (std::size_t y = div.find_first(); y != Bitset::npos; y = div.find_next(y))
        if (static_cast<int>(y) != z) acc += c[y];
      c[z] = -acc;
    }
    for (int z = 0; z < n; ++z) mu.coeffs[g.length(z)] += c[z] * simple_weight(g, gen_weights, z);
  }
  while (mu.coeffs.size() > 1 && mu.coeffs.back() == 0) mu.coeffs.pop_back();
  if (mu.coeffs[0] != 1) fail(errc::structural_error, "Mobius polynomial has constant term != 1");
  return mu;
}

std::vector<Rat> growth_coefficients(const GarsideStructure& g, const std::vector<Rat>& gen_weights,
                                     int k_max) {
  if (k_max > 10000) fail(errc::invalid_argument, "k_max too large");
  MobiusPolynomial mu = mobius_polynomial(g, gen_weights);
  std::vector<Rat> lam(k_max + 1);
  lam[0] = 1;
  for (int k = 1; k <= k_max; ++k) {
    Rat acc = 0;
    for (int j = 1; j <= std::min(k, mu.degree()); ++j) acc += mu.coeffs[j] * lam[k - j];
    lam[k] = -acc;
  }

  // independent route: Z_omega(k) = w- . M^{k-1} . w+ over the weighted CWG
  if (g.presentation().rank() >= 2 && is_irreducible(g.presentation()).irreducible) {
    Cwg cwg = build_cwg(g, gen_weights);
    for (int k = 0; k <= k_max; ++k)
      if (partition_function_exact(cwg, k) != lam[k])
        fail(errc::inconsistency,
             "growth series and matrix powers disagree at k=" + std::to_string(k));
  }
  return lam;
}

double smallest_root_p0(const MobiusPolynomial& mu) {
  // scan (0,1) for the first sign change, then bisect and polish
  double prev_t = 0.0, prev_v = mu.eval(0.0);  // constant term 1 > 0
  double lo = -1, hi = -1;
  for (int i = 1; i <= 4096; ++i) {
    double t = i / 4096.0;
    double v = mu.eval(t);
    if (v == 0.0) {
      lo = hi = t;
      break;
    }
    if ((prev_v > 0) != (v > 0)) {
      lo = prev_t;
      hi = t;
      break;
    }
    prev_t = t;
    prev_v = v;
  }
  if (lo < 0)
    fail(errc::structural_error, "Mobius polynomial has no root in (0,1); violated hypothesis");
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    double mid = 0.5 * (lo + hi);
    double v = mu.eval(mid);
    if (v == 0.0) return mid;
    if ((mu.eval(lo) > 0) == (v > 0))
      lo = mid;
    else
      hi = mid;
  }
  double root = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    double d = mu.derivative(root);
    if (d == 0) break;
    double step = mu.eval(root) / d;
    root -= step;
    if (std::abs(step) < 1e-17) break;
  }
  if (std::abs(mu.eval(root)) > 1e-10)
    fail(errc::structural_error, "root polish failed to converge");
  return root;
}

double smallest_root_p0(const GarsideStructure& g) {
  require_irreducible(g.presentation(), "smallest_root_p0");
  if (g.presentation().rank() < 2)
    fail(errc::invalid_argument, "smallest_root_p0: need at least two generators");
  return smallest_root_p0(mobius_polynomial(g));
}

}  // namespace atm
