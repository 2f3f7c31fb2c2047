#pragma once

#include <functional>
#include <string>
#include <vector>

#include "atm/garside.hpp"
#include "atm/numeric.hpp"

namespace atm {

// Exact polynomial, coefficient of T^k at index k. Unweighted Mobius
// polynomials have integer coefficients with constant term 1.
struct MobiusPolynomial {
  std::vector<Rat> coeffs;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  Rat eval(const Rat& t) const;
  double eval(double t) const;
  double derivative(double t) const;
  std::string to_string() const;
  bool operator==(const MobiusPolynomial& o) const { return coeffs == o.coeffs; }
};

// which index set the alternating sum ranges over
enum class MobiusRange { generators, simples };

// D(x): minimal elements of E(x) = {u != e | tau(x.u) <= tau(x)}, taken on the
// last block of x. Members are simple for simples x; returned as simple ids.
std::vector<int> d_set(const GarsideStructure& g, int simple);

// join of a subset of E(u)-members over u, as a simple id; -1 when the join
// does not exist. subset indexes into `members`.
int join_of_subset(const GarsideStructure& g, int u, const std::vector<int>& members,
                   unsigned mask);

// A[x]: the Garside base of the full visual cylinder of x. When len_cap >= 0
// only members of length <= len_cap are produced (enough for sums against
// functions supported on short elements; the full set is exponential in the
// height of x).
std::vector<Element> garside_base(const GarsideStructure& g, const Element& x, int len_cap = -1);

using ElementFn = std::function<Rat(const Element&)>;

// graded Mobius transform: T f(x) = sum over join-admissible subsets D of
// D(x) of (-1)^|D| f(x . vee D)
Rat graded_mobius(const GarsideStructure& g, const ElementFn& f, const Element& x);

// inverse transform: T* h(x) = sum over A[x] of h; h must vanish on elements
// longer than support_cap
Rat inverse_graded_mobius(const GarsideStructure& g, const ElementFn& h, const Element& x,
                          int support_cap);

// Mobius polynomial of the weighted monoid; gen_weights empty means uniform.
// The generator range is the default; the simples range is the alternating
// sum over join-admissible subsets of S\{e}, evaluated by recursion on the
// divisibility lattice. Both invert the growth series.
MobiusPolynomial mobius_polynomial(const GarsideStructure& g,
                                   const std::vector<Rat>& gen_weights = {},
                                   MobiusRange range = MobiusRange::generators);

// weighted growth coefficients Z_omega(0..k_max) by exact series inversion of
// the Mobius polynomial, cross-checked against CWG matrix powers
std::vector<Rat> growth_coefficients(const GarsideStructure& g, const std::vector<Rat>& gen_weights,
                                     int k_max);

// unique root of smallest modulus of the Mobius polynomial: simple, real, in
// (0,1) for irreducible monoids with at least two generators
double smallest_root_p0(const MobiusPolynomial& mu);
double smallest_root_p0(const GarsideStructure& g);

}  // namespace atm
