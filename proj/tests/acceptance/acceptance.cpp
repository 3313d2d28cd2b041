// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Details of the first few violations go to stderr.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sublin/approx_bias.hpp"
#include "sublin/approx_ls.hpp"
#include "sublin/dimacs.hpp"
#include "sublin/generators.hpp"
#include "sublin/hash_family.hpp"
#include "sublin/oracle.hpp"
#include "sublin/planar.hpp"
#include "sublin/tree_decomposition.hpp"
#include "sublin/tree_dp.hpp"
#include "testkit.hpp"

namespace sublin {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string summary;
  int reported = 0;

  void fail(const std::string& what) {
    pass = false;
    if (reported++ < 5) std::cerr << "  violation: " << what << "\n";
  }
};

// ⌈(√2/2)·opt⌉ exactly: least c with 2c² >= opt².
std::uint64_t sqrt2_bound(std::uint64_t opt) {
  auto c = static_cast<std::uint64_t>(std::floor(static_cast<double>(opt) / std::sqrt(2.0)));
  while (c > 0 && 2 * (c - 1) * (c - 1) >= opt * opt) --c;
  while (2 * c * c < opt * opt) ++c;
  return c;
}

std::uint64_t ceil_frac(std::uint64_t num, std::uint64_t den, std::uint64_t x) { return (num * x + den - 1) / den; }

// 1 ------------------------------------------------------------------------

Outcome ratio_suites() {
  Outcome out;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::vector<Formula> corpus;
  for (int i = 0; i < 500; ++i) corpus.push_back(testkit::random_ratio_instance(rng, 20));
  for (Formula& f : testkit::adversarial_cases()) corpus.push_back(std::move(f));

  std::uint64_t fallbacks = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const Formula& f = corpus[i];
    const std::uint64_t m = f.num_clauses();
    const std::uint64_t opt = exact_maxsat(f).opt;
    const auto half = half_approx(f);
    const auto ls = ls_solve(f);
    const auto chou = chou_solve(f);
    fallbacks += ls.search.fallback;
    const std::string id = "instance " + std::to_string(i);
    if (half.satisfied < (m + 1) / 2 || testkit::naive_count(f, half.assignment) != half.satisfied)
      out.fail(id + ": half " + std::to_string(half.satisfied) + " < ceil(m/2)");
    if (ls.satisfied < ceil_frac(618, 1000, opt) || testkit::naive_count(f, ls.assignment) != ls.satisfied)
      out.fail(id + ": ls " + std::to_string(ls.satisfied) + " vs opt " + std::to_string(opt));
    if (chou.satisfied < sqrt2_bound(opt) || testkit::naive_count(f, chou.assignment) != chou.satisfied)
      out.fail(id + ": chou " + std::to_string(chou.satisfied) + " vs opt " + std::to_string(opt));
  }
  const double secs = seconds_since(t0);
  if (secs > 300) out.fail("suite took " + std::to_string(secs) + " s");
  std::ostringstream s;
  s << corpus.size() << " instances, " << fallbacks << " ls fallbacks, " << std::fixed << std::setprecision(1) << secs
    << " s";
  out.summary = s.str();
  return out;
}

// 2 ------------------------------------------------------------------------

Formula random_two_satisfiable(std::mt19937_64& rng) {
  const auto n = static_cast<Var>(3 + draw(rng, 10));
  std::vector<std::vector<Literal>> clauses;
  const auto m = static_cast<std::uint32_t>(n + draw(rng, 3 * n));
  for (std::uint32_t j = 0; j < m; ++j) {
    const auto width = static_cast<std::uint32_t>(1 + draw(rng, std::min<Var>(n, 4)));
    std::vector<Literal> c;
    std::vector<Var> pool(n);
    for (Var v = 0; v < n; ++v) pool[v] = v + 1;
    for (std::uint32_t i = 0; i < width; ++i) {
      std::swap(pool[i], pool[i + draw(rng, n - i)]);
      c.emplace_back(pool[i], width > 1 && (rng() & 1u));
    }
    clauses.push_back(c);
  }
  return Formula(n, clauses);
}

// F' of the 0.618 transform, materialized.
Formula transformed(const Formula& f) {
  const TwoSatTransform t(f);
  std::vector<std::vector<Literal>> clauses;
  to_two_satisfiable(t).scan([&](const TwoSatItem& item) {
    if (item.kind != TwoSatItem::Kind::clause) return;
    std::vector<Literal> c;
    for (std::size_t i = 0; i < item.width(); ++i) c.push_back(item.literal(i));
    clauses.push_back(c);
  });
  return Formula(f.num_vars(), clauses);
}

Rational scaled_to_rational(const ExactInt& v, std::uint32_t r) {
  return Rational(boost::multiprecision::cpp_int(v.str())) / Rational(boost::multiprecision::cpp_int(1) << r);
}

Outcome expectation_bounds() {
  Outcome out;
  std::mt19937_64 rng(777);
  const Rational p618(618, 1000);
  int checked3 = 0;
  for (int i = 0; i < 200; ++i) {
    // Half generated directly, half produced by the transform itself.
    Formula f = random_two_satisfiable(rng);
    if (i % 2 == 1) f = transformed(testkit::random_ratio_instance(rng, 12));
    for (ClauseIndex j = 0; j < f.num_clauses(); ++j)
      if (f.width(j) == 1 && f.clause(j)[0].negative()) out.fail("generator produced a negative unit");
    const Rational e = expected_satisfied(f, p618);
    if (e < p618 * f.num_clauses()) out.fail("2-satisfiable instance " + std::to_string(i) + " below 0.618 m");
    ++checked3;
  }

  int checked4 = 0;
  int attempts = 0;
  while (checked4 < 200 && attempts < 200000) {
    ++attempts;
    const Formula raw = testkit::random_ratio_instance(rng, 10);
    const BiasProfile prof = bias_profile(raw);
    std::vector<std::vector<Literal>> flipped;
    const ExplicitVarSet neg(prof.neg_vars);
    to_positively_biased(raw, neg).scan([&](const auto& c) {
      std::vector<Literal> lits;
      for (std::size_t i = 0; i < c.width(); ++i) lits.push_back(c.literal(i));
      flipped.push_back(lits);
    });
    const Formula f(raw.num_vars(), flipped);
    const BiasTotals t = bias_totals(f);
    const std::uint32_t r = t.scale_bits;
    const Rational b_f = scaled_to_rational(t.b_f, r);
    const Rational b_star = scaled_to_rational(t.b_star, r);
    const Rational m(t.m);
    if (b_f > b_star || 3 * b_f > m || b_star == 0) continue;
    ++checked4;
    const Rational p = (m - b_f) / (2 * m - 4 * b_f);
    const Rational bound = scaled_to_rational(t.random_sum, r) + b_f * b_f / (4 * b_star);
    if (expected_satisfied(f, p) < bound) {
      std::ostringstream s;
      s << "positively biased instance " << checked4 << ": E=" << expected_satisfied(f, p) << " < " << bound;
      out.fail(s.str());
    }
  }
  if (checked4 < 200) out.fail("only " + std::to_string(checked4) + " qualifying biased instances generated");
  out.summary = std::to_string(checked3) + " 2-satisfiable + " + std::to_string(checked4) + " biased instances";
  return out;
}

// 3 ------------------------------------------------------------------------

Outcome derandomization() {
  Outcome out;
  std::mt19937_64 rng(31337);
  int cases = 0;
  for (std::uint64_t q : {5u, 7u}) {
    for (std::uint32_t k : {1u, 2u}) {
      for (auto [a, b] : {std::pair<std::uint64_t, std::uint64_t>{1, 2}, {2, 3}, {3, 5}, {1, 1}}) {
        for (int rep = 0; rep < 12; ++rep) {
          const auto n = static_cast<Var>(std::max<std::uint64_t>(k, 1 + draw(rng, 4)));
          const auto m = static_cast<std::uint32_t>(1 + draw(rng, 4));
          // Clause width up to k: k-wise independence covers each clause.
          const auto width = static_cast<std::uint32_t>(1 + draw(rng, std::min<Var>(k, n)));
          const Formula f = random_cnf(n, m, width, rng);
          HashFamilySpec spec;
          spec.n = n;
          spec.k = k;
          spec.a = a;
          spec.b = b;
          spec.q = q;
          Rational total = 0;
          std::uint64_t members = 0;
          enum_family(spec).scan([&](const HashFunction& h) {
            total += eval_assignment(f, assignment_from_hash(h, n));
            ++members;
          });
          const Rational mean = total / members;
          const Rational expect = expected_satisfied(f, Rational(spec.threshold(), q));
          if (members != spec.family_size() || mean != expect) {
            std::ostringstream s;
            s << "q=" << q << " k=" << k << " a/b=" << a << "/" << b << ": mean " << mean << " != " << expect;
            out.fail(s.str());
          }
          ++cases;
        }
      }
    }
  }
  out.summary = std::to_string(cases) + " (q, k, formula) cases, exact rational equality";
  return out;
}

// 4 ------------------------------------------------------------------------

std::vector<Formula> planar_corpus(int count, std::uint64_t seed, std::uint32_t max_vars) {
  std::vector<Formula> out;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < count; ++i) {
    PlanarOptions o;
    o.kind = static_cast<PlanarKind>(i % 3);
    o.seed = rng();
    o.all_positive = draw(rng, 4) == 0;
    if (o.kind == PlanarKind::grid) {
      o.width = static_cast<std::uint32_t>(2 + draw(rng, 4));
      o.height = static_cast<std::uint32_t>(2 + draw(rng, max_vars / o.width - 1));
      o.height = std::min(o.height, max_vars / o.width);
    } else {
      o.width = static_cast<std::uint32_t>(4 + draw(rng, max_vars - 3));
    }
    out.push_back(gen_planar_instance(o).formula);
  }
  return out;
}

Outcome partition_properties() {
  Outcome out;
  int runs = 0;
  std::uint64_t parts_total = 0;
  for (const Formula& f : planar_corpus(50, 4242, 60)) {
    for (std::uint32_t k : {2u, 3u, 4u}) {
      const auto parts = collect_parts(partition(f, k));
      const PartitionReport r = verify_partition(f, parts, k);
      ++runs;
      parts_total += parts.size();
      // Re-check the numbers directly as well.
      const std::uint64_t m = f.num_clauses();
      std::uint64_t retained = 0;
      std::vector<int> owner(f.num_vars() + 1, -1);
      bool disjoint = true;
      bool span_ok = true;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        retained += parts[i].clauses.size();
        for (Var v : parts[i].vars) {
          if (owner[v] != -1) disjoint = false;
          owner[v] = static_cast<int>(i);
        }
        if (parts[i].last_level - parts[i].first_level + 1 > 2 * k - 3) span_ok = false;
      }
      const bool retention = retained * k >= (k - 2) * m;
      if (!r.ok() || !disjoint || !span_ok || !retention || r.loss_sum > 2 * m || r.max_level_span > 2 * k - 3) {
        out.fail("n=" + std::to_string(f.num_vars()) + " m=" + std::to_string(m) + " k=" + std::to_string(k) +
                 ": disjoint=" + std::to_string(r.disjoint && disjoint) + " retained=" + std::to_string(retained) +
                 " loss_sum=" + std::to_string(r.loss_sum) + " span=" + std::to_string(r.max_level_span));
      }
    }
  }
  out.summary = std::to_string(runs) + " partitions, " + std::to_string(parts_total) + " parts";
  return out;
}

// 5 ------------------------------------------------------------------------

Outcome dp_exactness() {
  Outcome out;
  std::mt19937_64 rng(5150);
  std::uint32_t max_width = 0;
  for (int i = 0; i < 200; ++i) {
    Formula f;
    if (i % 4 == 3) {
      f = planar_corpus(1, rng(), 15).front();
    } else {
      const auto n = static_cast<Var>(2 + draw(rng, 14));
      const auto width = static_cast<std::uint32_t>(1 + draw(rng, std::min<Var>(3, n)));
      f = random_cnf(n, static_cast<std::uint32_t>(1 + draw(rng, 2 * n)), width, rng);
    }
    const Graph g = incidence_graph(f).graph();
    const TreeDecomposition td = tree_decompose(g);
    const TreeDecomposition rb = rebalance(td);
    max_width = std::max(max_width, rb.width());
    const std::uint64_t opt = exact_maxsat(f).opt;
    const DpResult a = bdtw_maxsat(td, f);
    const DpResult b = bdtw_maxsat(rb, f);
    if (!validate_td(g, td).ok() || !validate_td(g, rb).ok()) out.fail("instance " + std::to_string(i) + ": invalid td");
    if (a.count != opt || b.count != opt || eval_assignment(f, a.assignment) != opt ||
        eval_assignment(f, b.assignment) != opt) {
      out.fail("instance " + std::to_string(i) + ": dp " + std::to_string(a.count) + "/" + std::to_string(b.count) +
               " vs opt " + std::to_string(opt));
    }
  }
  out.summary = "200 instances, max rebalanced width " + std::to_string(max_width);
  return out;
}

// 6 ------------------------------------------------------------------------

Outcome ptas_bound() {
  Outcome out;
  double slowest = 0;
  int runs = 0;
  for (const Formula& f : planar_corpus(50, 6060, 20)) {
    const std::uint64_t opt = exact_maxsat(f).opt;
    for (std::uint64_t den : {2u, 3u, 4u}) {
      const auto t0 = Clock::now();
      const PtasResult r = planar_ptas(f, 1, den);
      const double secs = seconds_since(t0);
      slowest = std::max(slowest, secs);
      ++runs;
      const std::uint64_t bound = ceil_frac(den - 1, den, opt);
      if (r.satisfied < bound || eval_assignment(f, r.assignment) != r.satisfied || secs > 30) {
        out.fail("n=" + std::to_string(f.num_vars()) + " eps=1/" + std::to_string(den) + ": " +
                 std::to_string(r.satisfied) + " < " + std::to_string(bound) + " (" + std::to_string(secs) + " s)");
      }
    }
  }
  std::ostringstream s;
  s << runs << " runs, slowest " << std::fixed << std::setprecision(3) << slowest << " s";
  out.summary = s.str();
  return out;
}

// 7 ------------------------------------------------------------------------

Outcome space_scaling() {
  Outcome out;
  std::vector<double> ns;
  std::vector<double> logs;
  std::vector<double> ls_peak;
  std::vector<double> chou_peak;
  std::vector<double> part_peak;
  for (int e = 8; e <= 14; ++e) {
    PlanarOptions o;
    o.kind = PlanarKind::chain;
    o.width = 1u << e;
    o.seed = static_cast<std::uint64_t>(e);
    const Formula f = gen_planar_instance(o).formula;
    ns.push_back(std::ldexp(1.0, e));
    logs.push_back(e);
    ls_peak.push_back(static_cast<double>(meter_scope("ls", [&] { return ls_solve(f); }).second.peak_aux_cells));
    chou_peak.push_back(static_cast<double>(meter_scope("chou", [&] { return chou_solve(f); }).second.peak_aux_cells));
    part_peak.push_back(static_cast<double>(meter_scope("partition", [&] {
                                              const PartitionStream s = partition(f, 3);
                                              s.scan([](const PartView&) {});
                                            }).peak_aux_cells));
  }
  std::ostringstream s;
  s << std::setprecision(3);
  auto check_log = [&](const char* name, const std::vector<double>& y) {
    const testkit::Fit log_fit = testkit::fit_line(logs, y);
    const testkit::Fit lin_fit = testkit::fit_line(ns, y);
    s << name << " log-resid " << log_fit.max_rel_residual << " lin-resid " << lin_fit.max_rel_residual << "; ";
    if (log_fit.max_rel_residual >= 0.2) out.fail(std::string(name) + " does not fit a + b log n");
    if (lin_fit.max_rel_residual < log_fit.max_rel_residual) out.fail(std::string(name) + " fits linear better");
  };
  check_log("ls", ls_peak);
  check_log("chou", chou_peak);

  // a + c·√n·log n, with the same intercept term as the log model; it
  // must also beat a linear model.
  std::vector<double> xs;
  for (std::size_t i = 0; i < ns.size(); ++i) xs.push_back(std::sqrt(ns[i]) * logs[i]);
  const testkit::Fit part_fit = testkit::fit_line(xs, part_peak);
  const testkit::Fit part_lin = testkit::fit_line(ns, part_peak);
  s << "partition c=" << part_fit.b << " resid " << part_fit.max_rel_residual << " lin-resid "
    << part_lin.max_rel_residual;
  if (part_fit.b <= 0 || part_fit.max_rel_residual >= 0.2) out.fail("partition peak does not fit a + c sqrt(n) log n");
  if (part_lin.max_rel_residual < part_fit.max_rel_residual) out.fail("partition fits linear better");
  std::cerr << "  peaks (n: ls, chou, partition):";
  for (std::size_t i = 0; i < ns.size(); ++i)
    std::cerr << " " << ns[i] << ":" << ls_peak[i] << "," << chou_peak[i] << "," << part_peak[i];
  std::cerr << "\n";
  out.summary = s.str();
  return out;
}

// 8 ------------------------------------------------------------------------

#ifdef SUBLIN_CLI_PATH
std::string run_capture(const std::string& cmd, int& status) {
  std::string out;
  FILE* pipe = ::popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) {
    status = -1;
    return out;
  }
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  status = ::pclose(pipe);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string without_timestamp(const std::string& text) {
  auto j = nlohmann::ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) return "<invalid json>" + text;
  j.erase("timestamp");
  return j.dump();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  Outcome out;
  const fs::path dir = fs::temp_directory_path() / "sublin-acceptance-determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = SUBLIN_CLI_PATH;

  // Inputs: a random formula and generated planar instances.
  std::mt19937_64 rng(8);
  {
    std::ofstream(dir / "rand.cnf") << serialize_dimacs(testkit::random_ratio_instance(rng, 16));
  }
  const std::string rand = (dir / "rand.cnf").string();
  const std::string grid = (dir / "grid.cnf").string();
  const std::string chain = (dir / "chain.cnf").string();
  const std::vector<std::string> commands = {
      "gen-planar --kind grid --size 4x4 --seed 11 --out " + grid,
      "gen-planar --kind chain --size 40 --seed 3 --out " + chain,
      "gen-planar --kind tree --size 18 --seed 5 --no-extras --out " + (dir / "tree.cnf").string(),
      "solve --alg half " + rand,
      "solve --alg ls --oracle " + rand,
      "solve --alg chou --oracle " + rand,
      "solve --alg exact " + rand,
      "--jobs 3 solve --alg exact " + rand,
      "solve --alg planar-ptas --eps 1/3 --oracle " + grid,
      "solve --alg planar-ptas --eps 0.25 " + chain,
      "bias " + rand,
      "partition --k 3 --out-dir " + (dir / "parts").string() + " " + chain,
      "partition --k 2 " + grid,
      "hashfam --n 6 --k 2 --a 618 --b 1000 --show 5",
      "oracle " + rand,
      "--jobs 4 oracle " + rand,
      "solve --alg ls " + (dir / "missing.cnf").string(),
  };
  int runs = 0;
  for (const std::string& c : commands) {
    int s1 = 0;
    int s2 = 0;
    const std::string a = run_capture(cli + " " + c, s1);
    const std::string gen1 = c.rfind("gen-planar", 0) == 0 ? slurp(c.substr(c.rfind(' ') + 1)) : "";
    const std::string parts1 = fs::exists(dir / "parts" / "part-0001.cnf") ? slurp(dir / "parts" / "part-0001.cnf") : "";
    const std::string b = run_capture(cli + " " + c, s2);
    const std::string gen2 = c.rfind("gen-planar", 0) == 0 ? slurp(c.substr(c.rfind(' ') + 1)) : "";
    const std::string parts2 = fs::exists(dir / "parts" / "part-0001.cnf") ? slurp(dir / "parts" / "part-0001.cnf") : "";
    ++runs;
    if (a.empty() || s1 != s2 || without_timestamp(a) != without_timestamp(b) || gen1 != gen2 || parts1 != parts2)
      out.fail("non-deterministic: sublin " + c);
  }
  fs::remove_all(dir);
  out.summary = std::to_string(runs) + " commands run twice";
  return out;
}
#else
Outcome determinism() {
  Outcome out;
  out.fail("CLI not built");
  out.summary = "CLI not built";
  return out;
}
#endif

}  // namespace
}  // namespace sublin

int main() {
  using namespace sublin;
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"ratio suites", ratio_suites},
      {"expectation bounds", expectation_bounds},
      {"derandomization soundness", derandomization},
      {"partition properties", partition_properties},
      {"dp exactness", dp_exactness},
      {"ptas bound", ptas_bound},
      {"space scaling", space_scaling},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
      o.summary = "aborted";
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << " (" << criteria[i].name << "): "
              << o.summary << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
