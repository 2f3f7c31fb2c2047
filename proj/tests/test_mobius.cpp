#include <algorithm>
#include <cmath>
#include <map>

#include "atm/mobius.hpp"
#include "atm/rng.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace atm;

namespace {

std::set<std::string> d_set_words(const GarsideStructure& g, int simple) {
  std::set<std::string> out;
  for (int u : d_set(g, simple)) out.insert(g.presentation().word_to_string(g.word(u)));
  return out;
}

// uniform valuation p^{|x|} as an exact rational function of elements
ElementFn power_valuation(const GarsideStructure& g, const Rat& p) {
  return [&g, p](const Element& x) {
    Rat acc = 1;
    for (int i = 0; i < g.element_length(x); ++i) acc *= p;
    return acc;
  };
}

}  // namespace

TEST_SUITE_BEGIN("mobius");

TEST_CASE("D sets") {
  Presentation a2 = fixtures::affine_a2();
  const auto& g = fixtures::garside(a2);
  CHECK(d_set_words(g, g.index_of(a2.parse_word("ab"))) == std::set<std::string>{"a", "cb"});
  CHECK(d_set_words(g, 0) == std::set<std::string>{"a", "b", "c"});  // D(e) = Sigma

  Presentation b3 = build_braid(3);
  const auto& gb = fixtures::garside(b3);
  CHECK(d_set(gb, *gb.delta()).empty());
  CHECK(d_set_words(gb, 0) == std::set<std::string>{"a", "b"});

  // FC monoids: D(x) = {sigma | tau(x sigma) = tau(x)}, a subset of Sigma
  for (const Presentation& p : {build_braid(3), build_braid(4), fixtures::heap3()}) {
    const auto& gg = fixtures::garside(p);
    for (int x = 1; x < gg.size(); ++x) {
      std::set<int> expected;
      for (int s = 0; s < p.rank(); ++s) {
        Element xs = gg.multiply_by_simple(gg.simple_element(x), gg.simple_of_generator(s));
        if (xs.height() == 1) expected.insert(gg.simple_of_generator(s));
      }
      auto got = d_set(gg, x);
      CHECK(std::set<int>(got.begin(), got.end()) == expected);
    }
  }
}

TEST_CASE("Garside bases") {
  Presentation b3 = build_braid(3);
  const auto& g = fixtures::garside(b3);

  // simple x: A[x] = {y in S | x <=_l y}
  for (int x = 1; x < g.size(); ++x) {
    auto base = garside_base(g, g.simple_element(x));
    std::vector<Element> expected;
    for (int y = 1; y < g.size(); ++y)
      if (g.left_divides_simple(x, y)) expected.push_back(g.simple_element(y));
    std::sort(expected.begin(), expected.end());
    CHECK(base == expected);
  }

  // A[e] is the full set of simples: C_e = {e} obstructs no cylinder
  auto base_e = garside_base(g, g.unit_element());
  CHECK(base_e.size() == static_cast<std::size_t>(g.size()));

  // FC: A[x] = {y | x <=_l y, tau(y) = tau(x)}
  SplitMix64 rng(31);
  for (int t = 0; t < 20; ++t) {
    Word w;
    for (int i = 0; i < 4; ++i) w.push_back(static_cast<char>(rng.next_below(2ULL)));
    Element x = g.normal_form(w);
    if (x.is_unit()) continue;
    for (const auto& y : garside_base(g, x)) {
      CHECK(y.height() == x.height());
      CHECK(g.divides(x, y));
    }
  }
}

TEST_CASE("cylinders over A[x] tile the upper set") {
  SplitMix64 rng(41);
  for (const Presentation& p : {build_braid(3), fixtures::affine_a2()}) {
    const auto& g = fixtures::garside(p);
    auto elements_by_height = elements_up_to_length(g, 3);
    std::vector<Element> xs;
    for (const auto& x : elements_by_height)
      if (x.height() <= 3) xs.push_back(x);
    for (int t = 0; t < 25 && t < static_cast<int>(xs.size()); ++t) {
      const Element& x = xs[rng.next_below(xs.size())];
      auto base = garside_base(g, x);
      int len_cap = g.element_length(x) + 4;
      for (const auto& y : elements_up_to_length(g, len_cap)) {
        // y lies in C_z iff z's blocks are a prefix of y's
        int covers = 0;
        for (const auto& z : base) {
          if (z.blocks.size() > y.blocks.size()) continue;
          if (std::equal(z.blocks.begin(), z.blocks.end(), y.blocks.begin())) ++covers;
          if (z.is_unit() && !y.is_unit()) --covers;  // C_e = {e} only
        }
        CHECK(covers == (g.divides(x, y) ? 1 : 0));
      }
    }
  }
}

TEST_CASE("graded transform examples") {
  Presentation b3 = build_braid(3);
  const auto& g = fixtures::garside(b3);

  ElementFn one = [](const Element&) { return Rat(1); };
  CHECK(graded_mobius(g, one, g.simple_element(*g.delta())) == 1);  // D(Delta) empty

  // T f(e) = mu(p) for f = p^{|x|}
  Rat p(2, 5);
  Rat expected = mobius_polynomial(g).eval(p);
  CHECK(graded_mobius(g, power_valuation(g, p), g.unit_element()) == expected);

  // h = indicator of e: T* h(e) = 1
  ElementFn ind_e = [](const Element& x) { return Rat(x.is_unit() ? 1 : 0); };
  CHECK(inverse_graded_mobius(g, ind_e, g.unit_element(), 0) == 1);

  // at the uniform root the transform vanishes at the unit
  double p0 = smallest_root_p0(g);
  double val = 1 - 2 * p0 + std::pow(p0, 3);
  CHECK(std::abs(val) < 1e-12);
}

TEST_CASE("T and T* invert each other (sampled)") {
  for (const Presentation& p : {build_braid(3), fixtures::heap3()}) {
    const auto& g = fixtures::garside(p);
    auto support = elements_up_to_length(g, 5);
    std::map<std::vector<int>, int> index;
    for (std::size_t i = 0; i < support.size(); ++i) index[support[i].blocks] = i;
    SplitMix64 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<Rat> values(support.size());
      for (auto& v : values)
        v = Rat(static_cast<long>(rng.next_below(19ULL)) - 9, 1 + rng.next_below(7ULL));
      ElementFn h = [&](const Element& x) {
        auto it = index.find(x.blocks);
        return it == index.end() ? Rat(0) : values[it->second];
      };
      ElementFn t_star_h = [&](const Element& x) { return inverse_graded_mobius(g, h, x, 5); };
      ElementFn t_h = [&](const Element& x) { return graded_mobius(g, h, x); };
      for (int probe = 0; probe < 12; ++probe) {
        const Element& x = support[rng.next_below(support.size())];
        CHECK(graded_mobius(g, t_star_h, x) == h(x));
        CHECK(inverse_graded_mobius(g, t_h, x, 5 + 4) == h(x));
      }
    }
  }
}

TEST_CASE("Mobius polynomials") {
  CHECK(mobius_polynomial(fixtures::garside(build_braid(3))).to_string() == "1 - 2*T + 1*T^3");
  CHECK(mobius_polynomial(fixtures::garside(build_free(2))).to_string() == "1 - 2*T");
  CHECK(mobius_polynomial(fixtures::garside(fixtures::heap3())).to_string() ==
        "1 - 3*T + 1*T^2");
  CHECK(mobius_polynomial(fixtures::garside(fixtures::affine_a2())).to_string() ==
        "1 - 3*T + 3*T^3");

  // the generator range and the simples range agree as polynomials
  for (const Presentation& p : {build_braid(3), build_braid(4), fixtures::affine_a2(),
                                fixtures::heap3(), build_dual_a(3), build_dihedral(5)}) {
    const auto& g = fixtures::garside(p);
    CHECK(mobius_polynomial(g, {}, MobiusRange::generators) ==
          mobius_polynomial(g, {}, MobiusRange::simples));
    std::vector<Rat> w;
    for (int i = 0; i < p.rank(); ++i) w.emplace_back(i + 1, 2);
    CHECK(mobius_polynomial(g, w, MobiusRange::generators) ==
          mobius_polynomial(g, w, MobiusRange::simples));
  }
}

TEST_CASE("growth coefficients") {
  auto lam = growth_coefficients(fixtures::garside(build_free(2)), {}, 10);
  for (int k = 0; k <= 10; ++k) CHECK(lam[k] == Rat(Int(1) << k));

  for (const Presentation& p : {build_braid(3), fixtures::affine_a2()}) {
    const auto& g = fixtures::garside(p);
    auto enumerated = oracle::enumerate_classes(p, g.words(), 6);
    auto growth = growth_coefficients(g, {}, 6);
    for (int k = 0; k <= 6; ++k) CHECK(growth[k] == Rat(enumerated.count(k)));
  }
}

TEST_CASE("smallest root") {
  const auto& g = fixtures::garside(build_braid(3));
  double p0 = smallest_root_p0(g);
  CHECK(std::abs(p0 - (std::sqrt(5.0) - 1) / 2) < 1e-12);
  CHECK(std::abs(smallest_root_p0(fixtures::garside(build_free(2))) - 0.5) < 1e-15);
  CHECK(std::abs(smallest_root_p0(fixtures::garside(build_dual_a(3))) - 0.5) < 1e-12);
  CHECK_THROWS_AS(smallest_root_p0(fixtures::garside(build_free(1))), error);
}

TEST_SUITE_END();
