#pragma once

#include <map>
#include <optional>
#include <vector>

#include "atm/garside.hpp"
#include "atm/numeric.hpp"

namespace atm {

// Conditioned weighted graph (M, w-, w+): non-negative matrix with a unique
// simple dominant eigenvalue and initial/final weight vectors positive enough
// to see it. For a monoid, states are (x, i) with x a non-unit simple and
// 1 <= i <= |x|; paths of k-1 edges correspond to elements of length k.
struct Cwg {
  struct State {
    int simple;  // -1 for raw matrices
    int pos;     // 1-based position inside the block
  };

  std::vector<State> states;
  std::vector<std::vector<std::pair<int, Rat>>> rows;  // sparse, exact weights
  std::vector<Rat> w_minus, w_plus;

  bool from_monoid = false;
  bool spherical = false;
  int delta_block = 0;  // #J_Delta, leading states, when spherical

  int size() const { return static_cast<int>(states.size()); }
  int state_index(int simple, int pos) const;  // monoid CWGs only

  double weight(int i, int j) const;  // dense accessor, 0 when absent
};

// weighted CWG of an irreducible monoid with >= 2 generators; empty weights
// mean the uniform valuation
Cwg build_cwg(const GarsideStructure& g, const std::vector<Rat>& gen_weights = {});

// raw CWG from a dense matrix (absorbing-chain interop, tests)
Cwg make_cwg(const std::vector<std::vector<Rat>>& m, const std::vector<Rat>& w_minus,
             const std::vector<Rat>& w_plus);

struct PerronData {
  double lambda = 0;
  std::vector<double> left, right;  // normalized so that left . right = 1
  std::vector<double> pi;           // pi(i) = left(i) right(i)
  enum class SpectralCase { A, B } spectral_case = SpectralCase::A;
  int block_size = 0;  // K, the transient block in Case B
  int iterations = 0;
};

PerronData perron(const Cwg& c, double tol = 1e-14, long max_iter = 1000000);

// Z(k) = w- . M^{k-1} . w+ for k >= 1 (elements of length k); Z(0) = 1
Rat partition_function_exact(const Cwg& c, int k);
double partition_function(const Cwg& c, int k);

struct LimitChain {
  std::vector<double> h;                                 // initial law
  std::vector<std::vector<std::pair<int, double>>> rows; // stochastic matrix
  std::vector<bool> reachable;                           // r(i) != 0
};

LimitChain limit_chain(const Cwg& c, const PerronData& pd);

// law of the first j+1 states of a path with k edges under the weighted
// distribution; exact forward weights against backward vectors
std::map<std::vector<int>, double> window_distribution(const Cwg& c, int k, int j);

double asymptotic_mean(const PerronData& pd, const std::vector<double>& f);

struct VarianceReport {
  double sigma2 = 0;        // spectral variance (explicit eigenvalue formula)
  double sigma2_fd = 0;     // finite-difference cross-check on log lambda(u)
  double gamma = 0;
  bool degenerate = false;  // sigma2 below tolerance
};

VarianceReport asymptotic_variance(const Cwg& c, const PerronData& pd,
                                   const std::vector<double>& f, double cross_tol = 1e-6);

}  // namespace atm
