// Acceptance suite: one test case per criterion, each printing a PASS/FAIL
// line with the measured numbers. Tolerances are pinned here, in code.

#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "atm/mobius.hpp"
#include "atm/stats.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace atm;

namespace {

struct Verdict {
  int criterion;
  bool ok = true;
  std::string detail;

  void note(bool cond, const std::string& what) {
    ok &= cond;
    if (!cond) detail += (detail.empty() ? "" : "; ") + what;
  }
  ~Verdict() {
    std::printf("[criterion %2d] %s%s%s\n", criterion, ok ? "PASS" : "FAIL",
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
  }
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

std::vector<std::pair<std::string, Presentation>> inversion_monoids() {
  return {{"braid(3)", build_braid(3)},
          {"braid(4)", build_braid(4)},
          {"A~2", fixtures::affine_a2()},
          {"heap(3)", fixtures::heap3()},
          {"dual_a(3)", build_dual_a(3)}};
}

// weights constant on valuation classes, pseudo-random but fixed
std::vector<Rat> random_class_valuation(const Presentation& p, std::uint64_t seed) {
  auto pc = param_classes(p);
  SplitMix64 rng(seed);
  std::vector<Rat> per_class;
  for (int c = 0; c < pc.count(); ++c)
    per_class.emplace_back(1 + rng.next_below(5ULL), 1 + rng.next_below(4ULL));
  std::vector<Rat> w(p.rank());
  for (int s = 0; s < p.rank(); ++s) w[s] = per_class[pc.class_of[s]];
  return w;
}

const ExperimentReport& shared_run(const std::string& which) {
  static std::map<std::string, ExperimentReport> cache;
  auto it = cache.find(which);
  if (it == cache.end()) {
    Presentation p = which == "braid(3)" ? build_braid(3) : fixtures::affine_a2();
    const auto& g = fixtures::garside(p);
    Valuation omega = Valuation::rational(std::vector<Rat>(p.rank(), Rat(1)));
    it = cache
             .emplace(which, concentration_experiment(g, omega, height_statistic(g), 300,
                                                      100000, 42, 4))
             .first;
  }
  return it->second;
}

// KS against the normal evaluated at lattice midpoints; diagnostic only
double ks_midpoint(std::vector<double> values, double variance, double spacing) {
  std::sort(values.begin(), values.end());
  double sd = std::sqrt(variance), n = static_cast<double>(values.size());
  double d = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double z = (values[i] + spacing / 2) / sd;
    double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
    d = std::max(d, std::abs((i + 1) / n - cdf));
  }
  return d;
}

}  // namespace

TEST_CASE("criterion 1: affine A2 fixture") {
  Verdict v{1};
  double t0 = now_seconds();
  Presentation p = fixtures::affine_a2();
  auto g = GarsideStructure::compute(p);  // fresh, to time it honestly
  auto& ctx = g.words();

  v.note(g.size() == 16, "|S| != 16");
  std::set<Word> expected;
  for (const char* w : {"", "a", "b", "c", "ab", "ac", "ba", "bc", "ca", "cb", "aba", "bcb",
                        "cac", "abcb", "bcac", "caba"})
    expected.insert(ctx.canonical(p.parse_word(w)));
  std::set<Word> got;
  for (int i = 0; i < g.size(); ++i) got.insert(g.word(i));
  v.note(got == expected, "S differs from the known 16 simples");

  v.note(g.index_of(ctx.canonical(p.parse_word("caba"))) >= 0, "caba not simple");
  v.note(g.index_of(ctx.canonical(p.parse_word("cab"))) == -1, "cab wrongly simple");

  Element abc = g.normal_form(p.parse_word("abc"));
  v.note(g.element_to_string(abc) == "ab | c", "normal_form(abc) != (ab, c)");
  Element abcb = g.normal_form(p.parse_word("abcb"));
  v.note(abcb.height() == 1 && g.element_to_string(abcb) == "abcb",
         "normal_form(abcb) != (abcb)");

  std::set<std::string> dab;
  for (int u : d_set(g, g.index_of(ctx.canonical(p.parse_word("ab")))))
    dab.insert(p.word_to_string(g.word(u)));
  v.note(dab == std::set<std::string>{"a", "cb"}, "D(ab) != {a, cb}");
  v.note(!g.is_type_fc(), "A~2 reported FC");

  double dt = now_seconds() - t0;
  v.note(dt < 10.0, "runtime above 10 s");
  v.detail += (v.detail.empty() ? "" : "; ") + std::string("runtime ") +
              std::to_string(dt).substr(0, 5) + " s";
  CHECK(v.ok);
}

TEST_CASE("criterion 2: Mobius inversion on 200 random rational functions") {
  Verdict v{2};
  double t0 = now_seconds();
  const int support_len = 6;
  const int functions_per_monoid = 40;  // 5 monoids x 40 = 200 functions

  for (auto& [name, p] : inversion_monoids()) {
    const auto& g = fixtures::garside(p);
    auto support = elements_up_to_length(g, support_len);
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < support.size(); ++i) index[support[i].blocks] = i;

    // Garside bases restricted to the support, shared across all functions
    std::map<std::vector<int>, std::vector<int>> base_cache;
    auto base_of = [&](const Element& z) -> const std::vector<int>& {
      auto it = base_cache.find(z.blocks);
      if (it == base_cache.end()) {
        std::vector<int> ids;
        for (const auto& y : garside_base(g, z, support_len)) {
          auto found = index.find(y.blocks);
          if (found != index.end()) ids.push_back(found->second);
        }
        it = base_cache.emplace(z.blocks, std::move(ids)).first;
      }
      return it->second;
    };

    SplitMix64 rng(777);
    bool monoid_ok = true;
    for (int trial = 0; trial < functions_per_monoid && monoid_ok; ++trial) {
      std::vector<Rat> h(support.size());
      for (auto& x : h)
        x = Rat(static_cast<long>(rng.next_below(19ULL)) - 9, 1 + rng.next_below(6ULL));
      ElementFn hf = [&](const Element& x) {
        auto it = index.find(x.blocks);
        return it == index.end() ? Rat(0) : h[it->second];
      };
      ElementFn t_star_h = [&](const Element& x) {
        Rat acc = 0;
        for (int idx : base_of(x)) acc += h[idx];
        return acc;
      };
      // T(T* h) = h and T*(T h) = h, exactly, on the whole support
      for (std::size_t i = 0; i < support.size(); ++i) {
        if (graded_mobius(g, t_star_h, support[i]) != h[i]) monoid_ok = false;
        Rat back = 0;
        for (int idx : base_of(support[i])) back += graded_mobius(g, hf, support[idx]);
        if (back != h[i]) monoid_ok = false;
        if (!monoid_ok) break;
      }
    }
    v.note(monoid_ok, name + ": inversion identity violated");
  }
  double dt = now_seconds() - t0;
  v.note(dt < 60.0, "runtime above 60 s");
  v.detail += (v.detail.empty() ? "" : "; ") + std::string("runtime ") +
              std::to_string(dt).substr(0, 5) + " s";
  CHECK(v.ok);
}

TEST_CASE("criterion 3: growth series cross-checks") {
  Verdict v{3};
  auto monoids = inversion_monoids();
  monoids.push_back({"free(2)", build_free(2)});
  for (auto& [name, p] : monoids) {
    const auto& g = fixtures::garside(p);
    auto enumerated = oracle::enumerate_classes(p, g.words(), 6);
    for (int variant = 0; variant < 2; ++variant) {
      std::vector<Rat> w =
          variant == 0 ? std::vector<Rat>{} : random_class_valuation(p, 1000 + variant);
      bool inv_vs_matrix = true;
      std::vector<Rat> lam;
      try {
        lam = growth_coefficients(g, w, 30);  // internally checks vs w- M^{k-1} w+
      } catch (const error&) {
        inv_vs_matrix = false;
      }
      v.note(inv_vs_matrix, name + ": series inversion vs matrix powers");
      if (!inv_vs_matrix) continue;
      for (int k = 0; k <= 6; ++k)
        v.note(lam[k] == oracle::weighted_count(p, enumerated, w, k),
               name + ": BFS mismatch at k=" + std::to_string(k));
    }
  }
  CHECK(v.ok);
}

TEST_CASE("criterion 4: 1/p0 equals the Perron eigenvalue") {
  Verdict v{4};
  std::vector<std::pair<std::string, Presentation>> monoids{
      {"braid(3)", build_braid(3)},
      {"braid(4)", build_braid(4)},
      {"braid(5)", build_braid(5)},
      {"A~2", fixtures::affine_a2()},
      {"heap(3)", fixtures::heap3()},
      {"dihedral(4)", build_dihedral(4)},
      {"dihedral(5)", build_dihedral(5)},
      {"dihedral(6)", build_dihedral(6)},
      {"dual_a(3)", build_dual_a(3)},
      {"dual_a(4)", build_dual_a(4)},
      {"free(2)", build_free(2)},
      {"free(1)*braid(3)", build_free_product(build_free(1), build_braid(3))}};
  for (auto& [name, p] : monoids) {
    const auto& g = fixtures::garside(p);
    double p0 = smallest_root_p0(g);
    PerronData pd = perron(build_cwg(g));
    v.note(std::abs(1.0 / p0 - pd.lambda) <= 1e-10,
           name + ": |1/p0 - lambda| = " + std::to_string(std::abs(1.0 / p0 - pd.lambda)));
  }
  double p0 = smallest_root_p0(fixtures::garside(build_braid(3)));
  v.note(std::abs(p0 - (std::sqrt(5.0) - 1) / 2) <= 1e-12, "braid(3) p0 vs (sqrt5-1)/2");
  CHECK(v.ok);
}

TEST_CASE("criterion 5: Charney graphs strongly connected") {
  Verdict v{5};
  std::vector<std::pair<std::string, Presentation>> monoids{
      {"braid(3)", build_braid(3)},     {"braid(4)", build_braid(4)},
      {"braid(5)", build_braid(5)},     {"A~2", fixtures::affine_a2()},
      {"heap(3)", fixtures::heap3()},   {"dihedral(4)", build_dihedral(4)},
      {"dihedral(5)", build_dihedral(5)}, {"dihedral(6)", build_dihedral(6)},
      {"dual_a(3)", build_dual_a(3)},   {"dual_a(4)", build_dual_a(4)}};
  for (auto& [name, p] : monoids)
    v.note(fixtures::garside(p).charney_graph().strongly_connected, name + ": not SCC");

  bool refused = false;
  try {
    fixtures::garside(build_heap(2, {{0, 1}})).charney_graph();
  } catch (const error& e) {
    refused = e.code() == errc::reducible_monoid;
  }
  v.note(refused, "reducible heap(2) not refused with the typed error");
  CHECK(v.ok);
}

TEST_CASE("criterion 6: boundary chain identities") {
  Verdict v{6};
  for (auto& [name, p] : std::vector<std::pair<std::string, Presentation>>{
           {"braid(3)", build_braid(3)},
           {"A~2", fixtures::affine_a2()},
           {"heap(3)", fixtures::heap3()},
           {"dihedral(5)", build_dihedral(5)},
           {"dual_a(4)", build_dual_a(4)}}) {
    const auto& g = fixtures::garside(p);
    Valuation f = uniform_mobius_valuation(g);
    auto rep = is_mobius_valuation(g, f);
    v.note(std::abs(rep.h[0]) <= 1e-10, name + ": h(e) too large");
    bool positive = true;
    for (int u = 1; u < g.size(); ++u) positive &= rep.h[u] > 0;
    v.note(positive, name + ": h not positive off the unit");

    BoundaryChain bc = boundary_chain(g, f);
    for (int x = 1; x < g.size(); ++x) {
      double rowsum = 0;
      for (const auto& [y, q] : bc.rows[x]) rowsum += q;
      if (std::abs(rowsum - 1) > 1e-12) {
        v.note(false, name + ": row sum off at " + p.word_to_string(g.word(x)));
        break;
      }
    }

    Cwg c = build_cwg(g, f.as_rats());
    PerronData pd = perron(c);
    LimitChain lc = limit_chain(c, pd);
    std::vector<double> pi_next(c.size(), 0.0);
    for (int i = 0; i < c.size(); ++i)
      for (const auto& [j, q] : lc.rows[i]) pi_next[j] += pd.pi[i] * q;
    double pi_gap = 0;
    for (int i = 0; i < c.size(); ++i) pi_gap = std::max(pi_gap, std::abs(pi_next[i] - pd.pi[i]));
    v.note(pi_gap <= 1e-12, name + ": pi P != pi (gap " + std::to_string(pi_gap) + ")");

    double agg = speedup_aggregation_gap(g, f, bc);
    v.note(agg <= 1e-10, name + ": aggregation gap " + std::to_string(agg));
  }
  CHECK(v.ok);
}

TEST_CASE("criterion 7: convergence of weighted distributions") {
  Verdict v{7};
  for (auto& [name, p] : std::vector<std::pair<std::string, Presentation>>{
           {"braid(3)", build_braid(3)}, {"A~2", fixtures::affine_a2()}}) {
    const auto& g = fixtures::garside(p);
    Cwg c = build_cwg(g);
    double lambda = perron(c).lambda;
    double worst = 0;
    for (const auto& x : elements_up_to_length(g, 3)) {
      int len = g.element_length(x);
      Rat z80 = partition_function_exact(c, 80);
      Rat z80m = partition_function_exact(c, 80 - len);
      double mk = to_double(Rat(z80m / z80));
      worst = std::max(worst, std::abs(mk - std::pow(lambda, -len)));
    }
    v.note(worst <= 1e-3, name + ": gap " + std::to_string(worst));
    v.detail += (v.detail.empty() ? "" : "; ") + name + " gap " + std::to_string(worst);
  }
  CHECK(v.ok);
}

TEST_CASE("criterion 8: exact sampler versus full enumeration") {
  Verdict v{8};
  double t0 = now_seconds();
  for (auto& [name, p, k] : std::vector<std::tuple<std::string, Presentation, int>>{
           {"braid(3)", build_braid(3), 6}, {"A~2", fixtures::affine_a2(), 5}}) {
    const auto& g = fixtures::garside(p);
    Cwg c = build_cwg(g);
    auto enumerated = oracle::enumerate_classes(p, g.words(), k);

    // the transition weights are exact: the sampler's total mass equals Z_k
    ExactSampler sampler(c, k);
    v.note(Rat(sampler.total_weight()) == partition_function_exact(c, k),
           name + ": total weight != Z_k");
    for (int kk = 1; kk <= k; ++kk)
      v.note(Rat(ExactSampler(c, kk).total_weight()) == partition_function_exact(c, kk),
             name + ": total weight != Z at k=" + std::to_string(kk));

    const long n = 1000000;
    auto elems = sample_exact(g, c, k, n, 4242, 4);
    std::map<std::vector<int>, long> counts;
    for (const auto& x : elems) ++counts[x.blocks];
    v.note(static_cast<long>(counts.size()) == enumerated.count(k),
           name + ": some classes never sampled");
    double chi2 = 0;
    double expected = static_cast<double>(n) / enumerated.count(k);
    for (const auto& [key, cnt] : counts)
      chi2 += (cnt - expected) * (cnt - expected) / expected;
    boost::math::chi_squared dist(enumerated.count(k) - 1);
    double pval = 1.0 - boost::math::cdf(dist, chi2);
    v.note(pval > 0.001, name + ": chi-square p = " + std::to_string(pval));
    v.detail += (v.detail.empty() ? "" : "; ") + name + " p=" + std::to_string(pval).substr(0, 6);
  }
  double dt = now_seconds() - t0;
  v.note(dt < 120.0, "runtime above 2 min");
  CHECK(v.ok);
}

TEST_CASE("criterion 9: concentration of the height ratio") {
  Verdict v{9};
  double t0 = now_seconds();
  for (const std::string& name : {"braid(3)", "A~2"}) {
    const auto& rep = shared_run(name);
    double gap = std::abs(rep.mean_ratio - 1.0 / rep.kappa);
    v.note(gap <= 0.005, name + ": |mean - 1/kappa| = " + std::to_string(gap));
    v.detail += (v.detail.empty() ? "" : "; ") + name + " gap " + std::to_string(gap).substr(0, 8);
  }
  v.note(now_seconds() - t0 < 300.0, "runtime above 5 min");
  CHECK(v.ok);
}

TEST_CASE("criterion 10: central limit behavior") {
  Verdict v{10};
  for (const std::string& name : {"braid(3)", "A~2"}) {
    const auto& rep = shared_run(name);
    double rel = std::abs(rep.clt_variance / rep.sigma2 - 1);
    v.note(rel <= 0.10, name + ": variance off by " + std::to_string(rel));
    v.note(std::abs(rep.sigma2 - rep.sigma2_fd) <= 1e-6 * std::max(1.0, rep.sigma2),
           name + ": dual variance routes disagree");
    // Plain KS against the continuous normal. The height is integer valued,
    // so the empirical CDF carries atoms of mass ~phi(0)/(s sqrt(k)) and the
    // sup-distance cannot fall below half the largest atom (~0.039 for
    // braid(3) at k=300) for any implementation or sample count; the 0.02
    // threshold is not attainable and this sub-check reports the honest
    // value. The midpoint-corrected distance is printed for diagnosis.
    std::vector<double> norm(rep.values.size());
    for (std::size_t i = 0; i < rep.values.size(); ++i)
      norm[i] = (rep.values[i] - rep.k * rep.gamma) / std::sqrt(static_cast<double>(rep.k));
    double ks = ks_distance_normal(norm, 0.0, rep.sigma2);
    double ks_mid = ks_midpoint(norm, rep.sigma2, 1.0 / std::sqrt(static_cast<double>(rep.k)));
    double atom_bound = 0.3989422804 / (std::sqrt(rep.sigma2) * std::sqrt((double)rep.k)) / 2;
    v.note(ks <= 0.02, name + ": KS = " + std::to_string(ks) +
                           " (lattice lower bound ~" + std::to_string(atom_bound) +
                           ", midpoint-corrected " + std::to_string(ks_mid) + ")");
  }
  {  // free(2): degenerate case reports sigma^2 = 0 exactly
    const auto& g = fixtures::garside(build_free(2));
    auto rep = concentration_experiment(g, Valuation::rational({Rat(1), Rat(1)}),
                                        height_statistic(g), 300, 20000, 42, 4);
    v.note(rep.sigma2 == 0.0 && rep.degenerate, "free(2) sigma^2 not exactly 0");
  }
  CHECK(v.ok);
}

TEST_CASE("criterion 11: axiom suite") {
  Verdict v{11};
  {
    auto rep = fixtures::garside(build_dual_a(3)).check_axioms();
    v.note(rep.all_pass(), "dual_a(3) axioms fail");
  }
  {
    auto rep =
        fixtures::garside(build_free_product(build_free(1), build_braid(3))).check_axioms();
    v.note(rep.all_pass(), "free(1)*braid(3) axioms fail");
  }
  for (int m : {4, 5, 6}) {
    auto rep = fixtures::garside(build_dihedral(m)).check_axioms();
    v.note(rep.all_pass(), "dihedral axioms fail at m=" + std::to_string(m));
    v.note(rep.two_generator_spherical,
           "dihedral(" + std::to_string(m) + ") caveat not reported");
  }
  CHECK(v.ok);
}
