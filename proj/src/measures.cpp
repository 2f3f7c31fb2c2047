#include "atm/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "atm/mobius.hpp"
#include "atm/rng.hpp"

namespace atm {

Valuation Valuation::uniform(int rank, double value) {
  Valuation v;
  v.w.assign(rank, value);
  return v;
}

Valuation Valuation::rational(std::vector<Rat> weights) {
  Valuation v;
  for (const auto& r : weights) {
    if (r <= 0) fail(errc::invalid_argument, "valuation weights must be positive");
    v.w.push_back(to_double(r));
  }
  v.exact = std::move(weights);
  return v;
}

double Valuation::of_word(const Word& word) const {
  double acc = 1;
  for (char c : word) acc *= w[static_cast<unsigned char>(c)];
  return acc;
}

std::vector<Rat> Valuation::as_rats() const {
  if (exact) return *exact;
  std::vector<Rat> out;
  out.reserve(w.size());
  for (double x : w) out.emplace_back(x);
  return out;
}

void Valuation::validate(const Presentation& p) const {
  if (static_cast<int>(w.size()) != p.rank())
    fail(errc::invalid_argument, "valuation size does not match the alphabet");
  for (double x : w)
    if (!(x > 0)) fail(errc::invalid_argument, "valuation weights must be positive");
  for (const auto& [u, v] : p.relations) {
    if (exact) {
      Rat pu = 1, pv = 1;
      for (char c : u) pu *= (*exact)[static_cast<unsigned char>(c)];
      for (char c : v) pv *= (*exact)[static_cast<unsigned char>(c)];
      if (pu != pv)
        fail(errc::invalid_argument, "valuation not constant on relation classes");
    } else {
      double pu = of_word(u), pv = of_word(v);
      if (std::abs(pu - pv) > 1e-9 * std::max(pu, pv))
        fail(errc::invalid_argument, "valuation not constant on relation classes");
    }
  }
}

namespace {

// T f on a simple, through D(u) and the join tables
double transform_simple(const GarsideStructure& g, const Valuation& f, int u) {
  auto d = d_set(g, u);
  double total = 0;
  for (unsigned mask = 0; mask < (1u << d.size()); ++mask) {
    int vd = join_of_subset(g, u, d, mask);
    if (vd < 0) continue;
    int prod = g.product_simple(u, vd);
    double term = f.of_simple(g, prod);
    total += (__builtin_popcount(mask) % 2 == 0) ? term : -term;
  }
  return total;
}

Rat transform_simple_exact(const GarsideStructure& g, const std::vector<Rat>& weights, int u) {
  auto d = d_set(g, u);
  Rat total = 0;
  for (unsigned mask = 0; mask < (1u << d.size()); ++mask) {
    int vd = join_of_subset(g, u, d, mask);
    if (vd < 0) continue;
    Rat term = simple_weight(g, weights, g.product_simple(u, vd));
    total += (__builtin_popcount(mask) % 2 == 0) ? term : -term;
  }
  return total;
}

}  // namespace

MobiusValuationReport is_mobius_valuation(const GarsideStructure& g, const Valuation& f) {
  f.validate(g.presentation());
  MobiusValuationReport rep;
  rep.h.resize(g.size());
  for (int u = 0; u < g.size(); ++u) rep.h[u] = transform_simple(g, f, u);
  if (f.exact) {
    rep.h_exact.emplace(g.size());
    for (int u = 0; u < g.size(); ++u) (*rep.h_exact)[u] = transform_simple_exact(g, *f.exact, u);
  }

  bool h_e_zero = f.exact ? (*rep.h_exact)[0] == 0 : std::abs(rep.h[0]) <= 1e-10;
  bool positive = true;
  for (int u = 1; u < g.size(); ++u) positive &= rep.h[u] > 1e-12;
  rep.mobius = h_e_zero && positive;

  if (!rep.mobius && h_e_zero && g.spherical()) {
    // Lemma-3 dichotomy: the degenerate direction puts all mass on Delta
    bool delta_one = std::abs(rep.h[*g.delta()] - 1.0) <= 1e-9;
    bool rest_zero = true;
    for (int u = 1; u < g.size(); ++u)
      if (u != *g.delta()) rest_zero &= std::abs(rep.h[u]) <= 1e-9;
    rep.degenerate_direction = delta_one && rest_zero;
  }
  return rep;
}

Valuation normalize_to_mobius(const GarsideStructure& g, const Valuation& omega) {
  omega.validate(g.presentation());
  Cwg c = build_cwg(g, omega.as_rats());
  PerronData pd = perron(c);
  Valuation f;
  f.w.resize(omega.rank());
  for (int s = 0; s < omega.rank(); ++s) f.w[s] = omega.w[s] / pd.lambda;
  return f;
}

BoundaryChain boundary_chain(const GarsideStructure& g, const Valuation& f) {
  auto rep = is_mobius_valuation(g, f);
  if (!rep.mobius)
    fail(errc::invalid_argument,
         rep.degenerate_direction ? "degenerate valuation (measure concentrates at Delta^infty)"
                                  : "valuation is not Mobius");
  require_irreducible(g.presentation(), "boundary_chain");

  BoundaryChain bc;
  bc.spherical = g.spherical();
  bc.delta = g.delta();
  bc.h = rep.h;
  bc.f.resize(g.size());
  for (int u = 0; u < g.size(); ++u) bc.f[u] = f.of_simple(g, u);

  int n = g.size();
  bc.rows.resize(n);
  for (int x = 1; x < n; ++x)
    for (int y = 1; y < n; ++y)
      if (g.arrow(x, y)) bc.rows[x].emplace_back(y, bc.f[x] * bc.h[y] / bc.h[x]);

  // stationary law by power iteration on the transpose, restricted to the
  // ergodic component (Delta is transient in the spherical case)
  std::vector<char> ergodic(n, 1);
  ergodic[0] = 0;
  if (bc.delta) ergodic[*bc.delta] = 0;
  std::vector<double> theta(n, 0.0);
  int live = 0;
  for (int x = 1; x < n; ++x)
    if (ergodic[x]) ++live;
  for (int x = 1; x < n; ++x)
    if (ergodic[x]) theta[x] = 1.0 / live;
  std::vector<double> next(n);
  for (long it = 0; it < 1000000; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int x = 1; x < n; ++x) {
      if (!ergodic[x]) continue;
      for (const auto& [y, p] : bc.rows[x])
        if (ergodic[y]) next[y] += theta[x] * p;
    }
    double sum = std::accumulate(next.begin(), next.end(), 0.0);
    double delta = 0;
    for (int x = 0; x < n; ++x) {
      next[x] /= sum;
      delta = std::max(delta, std::abs(next[x] - theta[x]));
    }
    theta.swap(next);
    if (delta < 1e-15) break;
  }
  bc.theta = std::move(theta);

  bc.kappa = 0;
  for (int x = 1; x < n; ++x) bc.kappa += g.length(x) * bc.theta[x];
  return bc;
}

double speedup_aggregation_gap(const GarsideStructure& g, const Valuation& f,
                               const BoundaryChain& bc) {
  Cwg c = build_cwg(g, f.as_rats());
  PerronData pd = perron(c);
  double gap = 0;
  for (int i = 0; i < c.size(); ++i) {
    double expected = bc.theta[c.states[i].simple] / bc.kappa;
    gap = std::max(gap, std::abs(pd.pi[i] - expected));
  }
  return gap;
}

double speedup(const GarsideStructure& g, const Valuation& f, const BoundaryChain& bc,
               double tol) {
  if (speedup_aggregation_gap(g, f, bc) > tol)
    fail(errc::inconsistency, "speedup aggregation check failed");
  return bc.kappa;
}

std::vector<int> sample_boundary_prefix(const BoundaryChain& bc, int j, std::uint64_t seed,
                                        std::uint64_t walker) {
  if (j < 1) fail(errc::invalid_argument, "prefix length must be >= 1");
  SplitMix64 rng = SplitMix64::stream(seed, walker);
  std::vector<int> out;
  auto draw = [&](const std::vector<std::pair<int, double>>& dist) {
    double u = rng.next_double();
    double acc = 0;
    for (const auto& [x, p] : dist) {
      acc += p;
      if (u < acc) return x;
    }
    return dist.back().first;
  };
  std::vector<std::pair<int, double>> init;
  for (int x = 1; x < static_cast<int>(bc.h.size()); ++x) init.emplace_back(x, bc.h[x]);
  out.push_back(draw(init));
  for (int step = 1; step < j; ++step) out.push_back(draw(bc.rows[out.back()]));
  return out;
}

Valuation uniform_mobius_valuation(const GarsideStructure& g) {
  double p0 = smallest_root_p0(g);
  return Valuation::uniform(g.presentation().rank(), p0);
}

BoundaryChain uniform_measure(const GarsideStructure& g) {
  return boundary_chain(g, uniform_mobius_valuation(g));
}

}  // namespace atm
