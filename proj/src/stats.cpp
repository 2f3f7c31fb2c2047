#include "atm/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "json.hpp"

namespace atm {

double Statistic::of_blocks(const std::vector<int>& blocks) const {
  double acc = 0;
  for (int b : blocks) acc += per_simple[b];
  return acc;
}

std::vector<double> Statistic::lift(const Cwg& c, const GarsideStructure& g) const {
  std::vector<double> out(c.size(), 0.0);
  for (int i = 0; i < c.size(); ++i) {
    auto [s, pos] = c.states[i];
    if (pos == g.length(s)) out[i] = per_simple[s];
  }
  return out;
}

Statistic height_statistic(const GarsideStructure& g) {
  Statistic st;
  st.name = "height";
  st.per_simple.assign(g.size(), 1.0);
  st.per_simple[0] = 0.0;
  return st;
}

Statistic generator_count_statistic(const GarsideStructure& g, int gen) {
  Statistic st;
  st.name = "count:" + g.presentation().symbols[gen];
  st.per_simple.assign(g.size(), 0.0);
  for (int s = 1; s < g.size(); ++s) {
    int n = 0;
    for (char c : g.word(s))
      if (static_cast<unsigned char>(c) == static_cast<unsigned>(gen)) ++n;
    st.per_simple[s] = n;
  }
  return st;
}

ExactSampler::ExactSampler(const Cwg& c, int k) : c_(c), k_(k) {
  if (k < 1) fail(errc::invalid_argument, "sampler needs length >= 1");
  int n = c.size();

  // scale every weight by the common denominator so path weights are integers
  Int denom_lcm = 1;
  auto fold = [&](const Rat& r) {
    Int d = boost::multiprecision::denominator(r);
    denom_lcm = boost::multiprecision::lcm(denom_lcm, d);
  };
  for (const auto& row : c.rows)
    for (const auto& [j, w] : row) fold(w);
  for (const auto& w : c.w_minus) fold(w);
  for (const auto& w : c.w_plus) fold(w);
  auto scaled = [&](const Rat& r) {
    return Int(boost::multiprecision::numerator(r) * (denom_lcm / boost::multiprecision::denominator(r)));
  };

  // backward weights b[j](s) of completions from position j, 0-indexed letters
  std::vector<Int> b(n), prev(n);
  for (int s = 0; s < n; ++s) b[s] = scaled(c.w_plus[s]);
  cum_.assign(std::max(0, k - 1), {});
  for (int j = k - 2; j >= 0; --j) {
    cum_[j].resize(n);
    prev.assign(n, 0);
    for (int s = 0; s < n; ++s) {
      auto& sums = cum_[j][s];
      sums.reserve(c.rows[s].size());
      Int acc = 0;
      for (const auto& [t, w] : c.rows[s]) {
        acc += scaled(w) * b[t];
        sums.push_back(acc);
      }
      prev[s] = acc;
    }
    b.swap(prev);
  }
  init_cum_.resize(n);
  total_ = 0;
  for (int s = 0; s < n; ++s) {
    total_ += scaled(c.w_minus[s]) * b[s];
    init_cum_[s] = total_;
  }
  if (total_ == 0) fail(errc::structural_error, "no elements of the requested length");
}

std::vector<int> ExactSampler::sample_blocks(SplitMix64& rng) const {
  Int r = rng.next_below(total_);
  int s = static_cast<int>(std::upper_bound(init_cum_.begin(), init_cum_.end(), r) -
                           init_cum_.begin());
  std::vector<int> blocks{c_.states[s].simple};
  for (int j = 0; j + 1 < k_; ++j) {
    const auto& sums = cum_[j][s];
    Int t = rng.next_below(sums.back());
    int idx = static_cast<int>(std::upper_bound(sums.begin(), sums.end(), t) - sums.begin());
    s = c_.rows[s][idx].first;
    if (c_.states[s].pos == 1) blocks.push_back(c_.states[s].simple);
  }
  return blocks;
}

namespace {

template <typename Fn>
void run_walkers(long count, int threads, Fn&& body) {
  if (threads <= 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  long chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    long lo = t * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (long i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

std::vector<Element> sample_exact(const GarsideStructure& g, const Cwg& c, int k, int count,
                                  std::uint64_t seed, int threads) {
  (void)g;
  ExactSampler sampler(c, k);
  std::vector<Element> out(count);
  run_walkers(count, threads, [&](long i) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(i));
    out[i] = Element{sampler.sample_blocks(rng)};
  });
  return out;
}

double ks_distance_normal(std::vector<double> values, double mean, double variance) {
  std::sort(values.begin(), values.end());
  double sd = std::sqrt(variance);
  double n = static_cast<double>(values.size());
  double d = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double z = (values[i] - mean) / sd;
    double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
    d = std::max(d, std::abs((i + 1) / n - cdf));
    d = std::max(d, std::abs(cdf - i / n));
  }
  return d;
}

ExperimentReport concentration_experiment(const GarsideStructure& g, const Valuation& omega,
                                          const Statistic& stat, int k, long count,
                                          std::uint64_t seed, int threads) {
  require_irreducible(g.presentation(), "concentration_experiment");
  if (g.presentation().rank() < 2)
    fail(errc::invalid_argument, "concentration_experiment: need at least two generators");
  auto t0 = std::chrono::steady_clock::now();

  ExperimentReport rep;
  rep.monoid = g.presentation().name;
  rep.statistic = stat.name;
  rep.k = k;
  rep.count = count;
  rep.seed = seed;
  rep.two_generator_spherical = g.spherical() && g.presentation().rank() == 2;

  // CLT hypothesis: F not proportional to length on S minus unit and Delta
  {
    bool prop = true;
    double ratio = 0;
    bool have = false;
    for (int s = 1; s < g.size(); ++s) {
      if (g.delta() && *g.delta() == s) continue;
      double r = stat.per_simple[s] / g.length(s);
      if (!have) {
        ratio = r;
        have = true;
      } else if (std::abs(r - ratio) > 1e-12) {
        prop = false;
      }
    }
    rep.length_proportional = prop;
  }

  Cwg c = build_cwg(g, omega.as_rats());
  PerronData pd = perron(c);
  auto lifted = stat.lift(c, g);
  rep.gamma = asymptotic_mean(pd, lifted);
  VarianceReport var = asymptotic_variance(c, pd, lifted);
  rep.sigma2 = var.sigma2;
  rep.sigma2_fd = var.sigma2_fd;
  rep.degenerate = var.degenerate;

  BoundaryChain bc = boundary_chain(g, normalize_to_mobius(g, omega));
  rep.kappa = bc.kappa;

  ExactSampler sampler(c, k);
  rep.values.resize(count);
  std::vector<int> heights(count);
  run_walkers(count, threads, [&](long i) {
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(i));
    auto blocks = sampler.sample_blocks(rng);
    rep.values[i] = stat.of_blocks(blocks);
    heights[i] = static_cast<int>(blocks.size());
  });
  rep.heights = std::move(heights);

  double mean = 0;
  for (double v : rep.values) mean += v;
  mean /= count;
  rep.mean_ratio = mean / k;

  std::vector<double> norm(count);
  double nmean = 0;
  for (long i = 0; i < count; ++i) {
    norm[i] = (rep.values[i] - k * rep.gamma) / std::sqrt(static_cast<double>(k));
    nmean += norm[i];
  }
  nmean /= count;
  double nvar = 0;
  for (double v : norm) nvar += (v - nmean) * (v - nmean);
  rep.clt_variance = nvar / (count - 1);
  if (!rep.degenerate && rep.sigma2 > 0) rep.ks_statistic = ks_distance_normal(norm, 0.0, rep.sigma2);

  rep.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

DeltaMethodReport delta_method_check(const ExperimentReport& report, const Statistic& stat) {
  if (stat.name != "height")
    fail(errc::invalid_argument, "delta method check is about the height ratio");
  DeltaMethodReport out;
  out.kappa = report.kappa;
  out.degenerate = report.degenerate;
  // sqrt(k)(tau/k - gamma) -> N(0, s^2); k/tau = 1/(tau/k), so the delta
  // method scales the variance by kappa^4
  out.variance_target = report.sigma2 * std::pow(report.kappa, 4.0);
  double k = report.k;
  std::vector<double> y;
  y.reserve(report.values.size());
  long at_kappa = 0;
  for (double tau : report.values) {
    double v = std::sqrt(k) * (k / tau - report.kappa);
    y.push_back(v);
    if (std::abs(k / tau - report.kappa) < 1e-12) ++at_kappa;
  }
  out.mass_at_kappa = static_cast<double>(at_kappa) / y.size();
  double mean = 0;
  for (double v : y) mean += v;
  mean /= y.size();
  double var = 0;
  for (double v : y) var += (v - mean) * (v - mean);
  out.variance_empirical = var / (y.size() - 1);
  return out;
}

void write_csv(const ExperimentReport& rep, const GarsideStructure& g, const Cwg& c,
               const std::string& path) {
  (void)g;
  (void)c;
  std::ofstream csv(path);
  if (!csv) fail(errc::io_error, "cannot open " + path);
  csv << "sample_id,length,height,stat_value,normalized_value\n";
  for (std::size_t i = 0; i < rep.values.size(); ++i) {
    double norm = (rep.values[i] - rep.k * rep.gamma) / std::sqrt(static_cast<double>(rep.k));
    csv << i << ',' << rep.k << ',' << rep.heights[i] << ',' << rep.values[i] << ',' << norm
        << '\n';
  }

  nlohmann::json j{{"monoid", rep.monoid},
                   {"statistic", rep.statistic},
                   {"k", rep.k},
                   {"count", rep.count},
                   {"seed", rep.seed},
                   {"gamma", rep.gamma},
                   {"kappa", rep.kappa},
                   {"sigma2", rep.sigma2},
                   {"sigma2_fd", rep.sigma2_fd},
                   {"mean_ratio", rep.mean_ratio},
                   {"clt_variance", rep.clt_variance},
                   {"ks_statistic", rep.ks_statistic},
                   {"degenerate", rep.degenerate},
                   {"length_proportional", rep.length_proportional},
                   {"two_generator_spherical", rep.two_generator_spherical},
                   {"runtime_seconds", rep.runtime_seconds}};
  std::ofstream sidecar(path + ".jsonl");
  if (!sidecar) fail(errc::io_error, "cannot open " + path + ".jsonl");
  sidecar << j.dump() << '\n';
}

}  // namespace atm
