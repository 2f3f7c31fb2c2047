#pragma once

#include <optional>
#include <vector>

#include "atm/cwg.hpp"
#include "atm/garside.hpp"
#include "atm/numeric.hpp"

namespace atm {

// Positive multiplicative weight, given on generators. Kept exact when the
// weights are rational; spectral normalizations (Perron eigenvalue, p0) force
// the double representation.
struct Valuation {
  std::vector<double> w;
  std::optional<std::vector<Rat>> exact;

  static Valuation uniform(int rank, double value);
  static Valuation rational(std::vector<Rat> weights);

  int rank() const { return static_cast<int>(w.size()); }
  double of_word(const Word& word) const;
  double of_simple(const GarsideStructure& g, int s) const { return of_word(g.word(s)); }
  // exact weights when present, else the (exact) dyadic values of the doubles
  std::vector<Rat> as_rats() const;

  // well-definedness: equal products across every defining relation
  void validate(const Presentation& p) const;
};

struct MobiusValuationReport {
  bool mobius = false;
  bool degenerate_direction = false;  // h = delta at Delta (spherical only)
  std::vector<double> h;              // graded Mobius transform on S
  std::optional<std::vector<Rat>> h_exact;
};

// h = T f on the simples; f is Mobius when h(e) = 0 and h > 0 off the unit
MobiusValuationReport is_mobius_valuation(const GarsideStructure& g, const Valuation& f);

// f = omega / lambda with lambda the Perron eigenvalue of the weighted CWG;
// lands on the Mobius representative of the half-line of omega
Valuation normalize_to_mobius(const GarsideStructure& g, const Valuation& omega);

// Boundary process of a Mobius valuation: initial law h on S\{e}, transitions
// P_{x,y} = 1(x->y) f(x) h(y)/h(x), stationary theta, speedup kappa.
struct BoundaryChain {
  std::vector<double> f;  // per-simple valuation values
  std::vector<double> h;
  std::vector<std::vector<std::pair<int, double>>> rows;  // over simple ids
  std::vector<double> theta;
  double kappa = 0;
  bool spherical = false;
  std::optional<int> delta;
};

BoundaryChain boundary_chain(const GarsideStructure& g, const Valuation& f);

// kappa, cross-checked against the CWG stationary measure via the
// aggregation identity pi(x,i) = theta(x)/kappa
double speedup(const GarsideStructure& g, const Valuation& f, const BoundaryChain& bc,
               double tol = 1e-10);
double speedup_aggregation_gap(const GarsideStructure& g, const Valuation& f,
                               const BoundaryChain& bc);

// j steps of the boundary chain; the output is a normal sequence
std::vector<int> sample_boundary_prefix(const BoundaryChain& bc, int j, std::uint64_t seed,
                                        std::uint64_t walker = 0);

// the uniform measure: f = p0^{|.|}
BoundaryChain uniform_measure(const GarsideStructure& g);
Valuation uniform_mobius_valuation(const GarsideStructure& g);

}  // namespace atm
