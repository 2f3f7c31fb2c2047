// atm: analyze Artin-Tits style monoid presentations: Garside combinatorics,
// Mobius polynomials, boundary measures, exact sampling and CLT experiments.
//
// stdout carries data, stderr carries diagnostics; --json mirrors reports as
// a single JSON document. Typed errors map to distinct exit codes (see
// --help).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "atm/mobius.hpp"
#include "atm/stats.hpp"

using namespace atm;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string spec_file;
  std::string family;
  std::uint64_t seed = 12345;
  int threads = 0;
  bool as_json = false;
  std::size_t cap = default_word_cap;
  std::size_t max_simples = 5000;
  double tol = 1e-14;
  long max_iter = 1000000;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("spec", a.spec_file, "monoid spec file");
  cmd->add_option("--family", a.family,
                  "built-in family: braid:4, heap:3:ab, dihedral:5, free:3, dual-a:4, "
                  "free-product:<spec>,<spec>");
  cmd->add_option("--seed", a.seed, "RNG seed");
  cmd->add_option("--threads", a.threads, "worker threads (0 = hardware)");
  cmd->add_flag("--json", a.as_json, "emit the report as JSON");
  cmd->add_option("--cap", a.cap, "raw word-closure length cap");
  cmd->add_option("--max-simples", a.max_simples, "Garside set size cap");
  cmd->add_option("--tol", a.tol, "power-iteration tolerance");
  cmd->add_option("--max-iter", a.max_iter, "power-iteration iteration cap");
}

Presentation resolve_spec_arg(const std::string& arg) {
  std::ifstream in(arg);
  if (in) {
    std::stringstream buf;
    buf << in.rdbuf();
    Presentation p = parse_presentation(buf.str());
    p.name = arg;
    return p;
  }
  return build_family(arg);
}

Presentation load_presentation(const CommonArgs& a) {
  if (!a.spec_file.empty()) {
    std::ifstream in(a.spec_file);
    if (!in) fail(errc::io_error, "cannot read spec file " + a.spec_file);
    std::stringstream buf;
    buf << in.rdbuf();
    Presentation p = parse_presentation(buf.str());
    p.name = a.spec_file;
    return p;
  }
  if (a.family.empty()) fail(errc::invalid_argument, "need a spec file or --family");
  if (a.family.rfind("free-product:", 0) == 0) {
    std::string rest = a.family.substr(13);
    auto comma = rest.find(',');
    if (comma == std::string::npos)
      fail(errc::invalid_argument, "free-product needs two comma-separated specs");
    return build_free_product(resolve_spec_arg(rest.substr(0, comma)),
                              resolve_spec_arg(rest.substr(comma + 1)));
  }
  return build_family(a.family);
}

GarsideStructure garside_of(const CommonArgs& a, const Presentation& p) {
  GarsideOptions opts;
  opts.word_cap = a.cap;
  opts.max_simples = a.max_simples;
  return GarsideStructure::compute(p, opts);
}

Rat parse_rat(const std::string& s) {
  if (auto slash = s.find('/'); slash != std::string::npos)
    return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    Int den = 1;
    for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
    return Rat(Int(digits), den);
  }
  return Rat(Int(s));
}

// "a=1/2,b=0.7"; unmentioned generators default to weight 1
Valuation parse_valuation(const Presentation& p, const std::string& text) {
  std::vector<Rat> weights(p.rank(), Rat(1));
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) fail(errc::invalid_argument, "valuation entry needs sym=value");
    weights[p.symbol_index(item.substr(0, eq))] = parse_rat(item.substr(eq + 1));
  }
  Valuation v = Valuation::rational(std::move(weights));
  v.validate(p);
  return v;
}

int thread_count(const CommonArgs& a) {
  if (a.threads > 0) return a.threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void dump_matrix(const Cwg& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io_error, "cannot open " + path);
  for (int i = 0; i < c.size(); ++i)
    for (const auto& [j, w] : c.rows[i]) out << i << ' ' << j << ' ' << Rat(w).str() << '\n';
}

int cmd_analyze(const CommonArgs& a) {
  Presentation p = load_presentation(a);
  auto irr = is_irreducible(p);
  GarsideStructure g = garside_of(a, p);
  auto pc = param_classes(p);
  auto axioms = g.check_axioms(a.seed);

  json out{{"monoid", p.name},
           {"generators", p.symbols},
           {"irreducible", irr.irreducible},
           {"simples", g.size()},
           {"spherical", g.spherical()},
           {"type_fc", g.is_type_fc()},
           {"valuation_classes", pc.count()}};
  if (g.spherical()) out["delta"] = p.word_to_string(g.word(*g.delta()));

  if (irr.irreducible) {
    auto cg = g.charney_graph();
    out["charney_strongly_connected"] = cg.strongly_connected;
    if (p.rank() >= 2) {
      auto mu = mobius_polynomial(g);
      double p0 = smallest_root_p0(mu);
      Cwg c = build_cwg(g);
      PerronData pd = perron(c, a.tol, a.max_iter);
      BoundaryChain bc = uniform_measure(g);
      out["mobius_polynomial"] = mu.to_string();
      out["p0"] = p0;
      out["lambda"] = pd.lambda;
      out["kappa"] = bc.kappa;
      out["cwg_states"] = c.size();
      out["spectral_case"] = pd.spectral_case == PerronData::SpectralCase::A ? "A" : "B";
    }
  }
  json ax = json::array();
  for (const auto& chk : axioms.checks)
    ax.push_back({{"axiom", chk.axiom}, {"pass", chk.pass}, {"note", chk.note}});
  out["axioms"] = ax;
  out["two_generator_spherical_caveat"] = axioms.two_generator_spherical;

  if (a.as_json) {
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  std::cout << "monoid: " << p.name << "\n";
  std::cout << "generators:";
  for (const auto& s : p.symbols) std::cout << ' ' << s;
  std::cout << "\nirreducible: " << (irr.irreducible ? "yes" : "no") << "\n";
  std::cout << "|S|: " << g.size() << "\n";
  std::cout << "spherical: " << (g.spherical() ? "yes" : "no");
  if (g.spherical()) std::cout << "  (Delta = " << p.word_to_string(g.word(*g.delta())) << ")";
  std::cout << "\ntype FC: " << (g.is_type_fc() ? "yes" : "no") << "\n";
  std::cout << "valuation classes (K): " << pc.count() << "\n";
  if (out.contains("charney_strongly_connected"))
    std::cout << "Charney graph strongly connected: "
              << (out["charney_strongly_connected"].get<bool>() ? "yes" : "no") << "\n";
  if (out.contains("p0")) {
    std::cout << "mobius polynomial: " << out["mobius_polynomial"].get<std::string>() << "\n";
    std::printf("p0: %.12f\nlambda: %.12f\nkappa (uniform): %.12f\n", out["p0"].get<double>(),
                out["lambda"].get<double>(), out["kappa"].get<double>());
    std::cout << "spectral case: " << out["spectral_case"].get<std::string>() << "\n";
  }
  for (const auto& chk : axioms.checks)
    std::cout << chk.axiom << ": " << (chk.pass ? "pass" : "FAIL") << "  (" << chk.note << ")\n";
  if (axioms.two_generator_spherical)
    std::cout << "note: spherical with two generators; the CLT excludes statistics in the "
                 "span of length and the alternating block function\n";
  return 0;
}

int cmd_garside(const CommonArgs& a, bool dump, const std::string& matrix_path) {
  Presentation p = load_presentation(a);
  GarsideStructure g = garside_of(a, p);
  if (!matrix_path.empty()) dump_matrix(build_cwg(g), matrix_path);
  if (a.as_json) {
    json simples = json::array(), edges = json::array();
    for (int i = 0; i < g.size(); ++i)
      simples.push_back(
          {{"index", i}, {"word", p.word_to_string(g.word(i))}, {"length", g.length(i)}});
    for (int x = 0; x < g.size(); ++x)
      for (int y = 0; y < g.size(); ++y)
        if (g.arrow(x, y)) edges.push_back({x, y});
    std::cout << json{{"monoid", p.name}, {"simples", simples}, {"arrows", edges}}.dump(2)
              << '\n';
    return 0;
  }
  std::cout << "|S| = " << g.size() << "\n";
  if (dump) {
    for (int i = 0; i < g.size(); ++i)
      std::cout << i << '\t' << p.word_to_string(g.word(i)) << '\t' << g.length(i) << '\n';
    std::cout << "arrows:\n";
    for (int x = 0; x < g.size(); ++x)
      for (int y = 0; y < g.size(); ++y)
        if (g.arrow(x, y)) std::cout << x << ' ' << y << '\n';
  }
  return 0;
}

int cmd_normal_form(const CommonArgs& a, const std::string& word_text) {
  Presentation p = load_presentation(a);
  GarsideStructure g = garside_of(a, p);
  Element x = g.normal_form(p.parse_word(word_text));
  if (a.as_json) {
    json blocks = json::array();
    for (int b : x.blocks) blocks.push_back(p.word_to_string(g.word(b)));
    std::cout << json{{"word", word_text},
                      {"normal_form", blocks},
                      {"height", x.height()},
                      {"length", g.element_length(x)}}
                     .dump(2)
              << '\n';
    return 0;
  }
  std::cout << g.element_to_string(x) << "\n";
  std::cout << "height: " << x.height() << "  length: " << g.element_length(x) << "\n";
  return 0;
}

int cmd_mobius(const CommonArgs& a, int k_max, const std::string& valuation) {
  Presentation p = load_presentation(a);
  GarsideStructure g = garside_of(a, p);
  std::vector<Rat> w;
  if (!valuation.empty()) w = *parse_valuation(p, valuation).exact;
  auto mu = mobius_polynomial(g, w);
  auto growth = growth_coefficients(g, w, k_max);
  double p0 = valuation.empty() && p.rank() >= 2 && is_irreducible(p).irreducible
                  ? smallest_root_p0(mu)
                  : 0.0;
  if (a.as_json) {
    json coeffs = json::array(), lam = json::array();
    for (const auto& c : mu.coeffs) coeffs.push_back(c.str());
    for (const auto& z : growth) lam.push_back(z.str());
    json out{{"monoid", p.name}, {"mobius_coefficients", coeffs}, {"growth", lam}};
    if (p0 > 0) out["p0"] = p0;
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  std::cout << "mobius polynomial: " << mu.to_string() << "\n";
  if (p0 > 0) std::printf("p0: %.12f\n", p0);
  std::cout << "k,lambda_k\n";
  for (std::size_t k = 0; k < growth.size(); ++k) std::cout << k << ',' << growth[k].str() << '\n';
  return 0;
}

int cmd_measure(const CommonArgs& a, const std::string& valuation, bool uniform, int prefix,
                long count) {
  Presentation p = load_presentation(a);
  GarsideStructure g = garside_of(a, p);
  BoundaryChain bc;
  if (uniform || valuation.empty()) {
    bc = uniform_measure(g);
  } else {
    Valuation omega = parse_valuation(p, valuation);
    bc = boundary_chain(g, normalize_to_mobius(g, omega));
  }
  if (a.as_json) {
    json lines = json::array();
    for (long i = 0; i < count; ++i) {
      auto blocks = sample_boundary_prefix(bc, prefix, a.seed, static_cast<std::uint64_t>(i));
      json seq = json::array();
      for (int b : blocks) seq.push_back(p.word_to_string(g.word(b)));
      lines.push_back(seq);
    }
    std::cout << json{{"monoid", p.name}, {"kappa", bc.kappa}, {"samples", lines}}.dump(2)
              << '\n';
    return 0;
  }
  for (long i = 0; i < count; ++i) {
    auto blocks = sample_boundary_prefix(bc, prefix, a.seed, static_cast<std::uint64_t>(i));
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      if (j) std::cout << " | ";
      std::cout << p.word_to_string(g.word(blocks[j]));
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_sample(const CommonArgs& a, int length, long count, const std::string& valuation) {
  Presentation p = load_presentation(a);
  GarsideStructure g = garside_of(a, p);
  std::vector<Rat> w(p.rank(), Rat(1));
  if (!valuation.empty()) w = *parse_valuation(p, valuation).exact;
  Cwg c = build_cwg(g, w);
  auto elems =
      sample_exact(g, c, length, static_cast<int>(count), a.seed, thread_count(a));
  for (const auto& x : elems) std::cout << g.element_to_string(x) << '\n';
  return 0;
}

int cmd_stats(const CommonArgs& a, int length, long count, const std::string& stat_name,
              const std::string& valuation, const std::string& out_path) {
  Presentation p = load_presentation(a);
  GarsideStructure g = garside_of(a, p);
  Valuation omega = valuation.empty() ? Valuation::rational(std::vector<Rat>(p.rank(), Rat(1)))
                                      : parse_valuation(p, valuation);
  Statistic stat;
  if (stat_name == "height") {
    stat = height_statistic(g);
  } else if (stat_name.rfind("count:", 0) == 0) {
    stat = generator_count_statistic(g, p.symbol_index(stat_name.substr(6)));
  } else {
    fail(errc::invalid_argument, "unknown statistic '" + stat_name + "'");
  }
  auto rep = concentration_experiment(g, omega, stat, length, count, a.seed, thread_count(a));
  if (!out_path.empty()) write_csv(rep, g, build_cwg(g, omega.as_rats()), out_path);

  json out{{"monoid", p.name},
           {"statistic", rep.statistic},
           {"k", rep.k},
           {"count", rep.count},
           {"seed", rep.seed},
           {"mean_ratio", rep.mean_ratio},
           {"gamma", rep.gamma},
           {"kappa", rep.kappa},
           {"clt_variance", rep.clt_variance},
           {"sigma2", rep.sigma2},
           {"sigma2_fd", rep.sigma2_fd},
           {"ks_statistic", rep.ks_statistic},
           {"degenerate", rep.degenerate},
           {"length_proportional", rep.length_proportional},
           {"two_generator_spherical", rep.two_generator_spherical},
           {"runtime_seconds", rep.runtime_seconds}};
  if (a.as_json) {
    std::cout << out.dump(2) << '\n';
  } else {
    std::printf("statistic %s, k=%d, count=%ld, seed=%llu\n", rep.statistic.c_str(), rep.k,
                rep.count, static_cast<unsigned long long>(rep.seed));
    std::printf("mean F/k        %.6f   (gamma %.6f)\n", rep.mean_ratio, rep.gamma);
    std::printf("CLT variance    %.6f   (s^2 %.6f, fd %.6f)\n", rep.clt_variance, rep.sigma2,
                rep.sigma2_fd);
    std::printf("KS vs N(0,s^2)  %.4f\n", rep.ks_statistic);
    if (rep.degenerate) std::printf("degenerate: s^2 = 0\n");
    if (rep.length_proportional)
      std::printf("note: statistic proportional to length; CLT hypothesis void\n");
    if (rep.two_generator_spherical)
      std::printf("note: spherical with two generators (CLT caveat class)\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"atm: Garside combinatorics, boundary measures and asymptotics of "
               "finitely presented monoids"};
  app.require_subcommand(1);
  app.footer("exit codes: 0 ok, 2 parse error, 3 invalid argument, 4 cap exceeded, "
             "5 reducible monoid, 6 structural error, 7 internal inconsistency, 8 io error");

  CommonArgs a;
  bool dump = false;
  std::string word_text, valuation, stat_name = "height", out_path, matrix_path;
  int k_max = 30, prefix = 8, length = 100;
  long count = 10;
  bool uniform = false;

  auto* analyze = app.add_subcommand("analyze", "structure, polynomial and spectral report");
  add_common(analyze, a);

  auto* garside = app.add_subcommand("garside", "Garside set and arrow relation");
  add_common(garside, a);
  garside->add_flag("--dump", dump, "list simples and arrow edges");
  garside->add_option("--dump-matrix", matrix_path, "write the CWG matrix (row col value)");

  auto* nf = app.add_subcommand("normal-form", "greedy normal form of a word");
  add_common(nf, a);
  nf->add_option("word", word_text, "input word (symbols, '.'-separated if multi-char)");

  auto* mobius = app.add_subcommand("mobius", "Mobius polynomial, p0, growth coefficients");
  add_common(mobius, a);
  mobius->add_option("--k-max", k_max, "growth coefficients up to this length");
  mobius->add_option("--valuation", valuation, "weights, e.g. a=1/2,b=2");

  auto* measure = app.add_subcommand("measure", "sample boundary-chain prefixes");
  add_common(measure, a);
  measure->add_option("--valuation", valuation, "weights; normalized to the Mobius point");
  measure->add_flag("--uniform", uniform, "use the uniform measure (default)");
  measure->add_option("--prefix", prefix, "prefix length j");
  measure->add_option("--count", count, "number of samples");

  auto* sample = app.add_subcommand("sample", "exact samples from the weighted length-k law");
  add_common(sample, a);
  sample->add_option("--length", length, "element length k")->required();
  sample->add_option("--count", count, "number of samples");
  sample->add_option("--valuation", valuation, "rational weights");

  auto* stats = app.add_subcommand("stats", "concentration / CLT experiment");
  add_common(stats, a);
  stats->add_option("--length", length, "element length k")->required();
  stats->add_option("--count", count, "number of samples")->required();
  stats->add_option("--stat", stat_name, "height | count:<sym>");
  stats->add_option("--valuation", valuation, "rational weights");
  stats->add_option("--out", out_path, "CSV output path (JSONL sidecar alongside)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(a);
    if (garside->parsed()) return cmd_garside(a, dump, matrix_path);
    if (nf->parsed()) {
      // with --family the first positional is the word, not a spec file
      if (word_text.empty() && !a.family.empty() && !a.spec_file.empty()) {
        word_text = a.spec_file;
        a.spec_file.clear();
      }
      if (word_text.empty()) fail(errc::invalid_argument, "normal-form needs a word");
      return cmd_normal_form(a, word_text);
    }
    if (mobius->parsed()) return cmd_mobius(a, k_max, valuation);
    if (measure->parsed()) return cmd_measure(a, valuation, uniform, prefix, count);
    if (sample->parsed()) return cmd_sample(a, length, count, valuation);
    if (stats->parsed()) return cmd_stats(a, length, count, stat_name, valuation, out_path);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
