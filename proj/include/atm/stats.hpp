#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atm/cwg.hpp"
#include "atm/garside.hpp"
#include "atm/measures.hpp"
#include "atm/rng.hpp"

namespace atm {

// Normal-additive statistic: per-simple values summed along the normal form.
struct Statistic {
  std::string name;
  std::vector<double> per_simple;  // indexed by simple id; entry 0 unused

  double of_blocks(const std::vector<int>& blocks) const;
  double of_element(const Element& x) const { return of_blocks(x.blocks); }
  // lift to CWG states: F(x) at (x,|x|), zero elsewhere
  std::vector<double> lift(const Cwg& c, const GarsideStructure& g) const;
};

Statistic height_statistic(const GarsideStructure& g);
// occurrences of one generator, counted on canonical words of the simples
Statistic generator_count_statistic(const GarsideStructure& g, int gen);

// Exact sampling from the weighted distribution on elements of length k:
// integer-scaled backward dynamic programming over the CWG, then sequential
// transition draws. No truncation, no bias; identical output for any thread
// count (stream = sample index).
class ExactSampler {
 public:
  ExactSampler(const Cwg& c, int k);

  int length() const { return k_; }
  const Int& total_weight() const { return total_; }

  // normal form of the sampled element, as simple ids
  std::vector<int> sample_blocks(SplitMix64& rng) const;

 private:
  const Cwg& c_;
  int k_;
  Int total_;
  std::vector<Int> init_cum_;                   // over states
  std::vector<std::vector<std::vector<Int>>> cum_;  // [letter j][state] partial sums
};

std::vector<Element> sample_exact(const GarsideStructure& g, const Cwg& c, int k, int count,
                                  std::uint64_t seed, int threads = 1);

struct ExperimentReport {
  std::string monoid, statistic;
  int k = 0;
  long count = 0;
  std::uint64_t seed = 0;
  double mean_ratio = 0;        // mean of F/|x|
  double gamma = 0;             // spectral target
  double clt_variance = 0;      // empirical variance of (F - k gamma)/sqrt(k)
  double sigma2 = 0;            // spectral target s^2
  double sigma2_fd = 0;         // finite-difference cross value
  double ks_statistic = 0;      // vs N(0, s^2); 0 when degenerate
  bool degenerate = false;
  bool length_proportional = false;   // CLT hypothesis violated
  bool two_generator_spherical = false;
  double kappa = 0;
  double runtime_seconds = 0;
  std::vector<double> values;  // per-sample statistic values, walker order
  std::vector<int> heights;    // per-sample heights, walker order
};

ExperimentReport concentration_experiment(const GarsideStructure& g, const Valuation& omega,
                                          const Statistic& stat, int k, long count,
                                          std::uint64_t seed, int threads = 1);

struct DeltaMethodReport {
  double kappa = 0;
  double variance_target = 0;  // s^2 kappa^4 by the delta method
  double variance_empirical = 0;
  double mass_at_kappa = 0;    // degenerate case: all mass at kappa
  bool degenerate = false;
};

// inverse-ratio CLT: sqrt(k) (k/tau - kappa) against N(0, s^2 kappa^4)
DeltaMethodReport delta_method_check(const ExperimentReport& report, const Statistic& stat);

void write_csv(const ExperimentReport& rep, const GarsideStructure& g, const Cwg& c,
               const std::string& path);

double ks_distance_normal(std::vector<double> values, double mean, double variance);

}  // namespace atm
