#include "sublin_cli/cli.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sublin/approx_bias.hpp"
#include "sublin/approx_ls.hpp"
#include "sublin/dimacs.hpp"
#include "sublin/errors.hpp"
#include "sublin/generators.hpp"
#include "sublin/hash_family.hpp"
#include "sublin/oracle.hpp"
#include "sublin/planar.hpp"
#include "sublin/space.hpp"
#include "sublin/tree_dp.hpp"

namespace sublin::cli {

using Json = nlohmann::ordered_json;

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace {

struct Options {
  unsigned jobs = 1;
  // solve
  std::string alg = "ls";
  std::string eps = "1/2";
  bool oracle = false;
  std::string file;
  // partition
  std::uint32_t k = 3;
  std::string out_dir;
  // hashfam
  std::uint64_t n = 0;
  std::uint32_t hk = 0;
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t q = 0;
  std::uint32_t show = 4;
  // gen-planar
  std::string kind = "chain";
  std::string size = "8";
  std::uint64_t seed = 1;
  std::string out;
  bool positive = false;
  bool no_extras = false;
};

Json space_json(const SpaceReport& r) {
  Json passes = Json::object();
  for (std::size_t i = 0; i < r.producers; ++i) passes[r.pass_counts[i].label] = r.pass_counts[i].passes;
  return Json{{"peak_aux_cells", r.peak_aux_cells}, {"passes", passes}, {"wall_ops", r.wall_ops}};
}

Json literals_json(const Assignment& phi) {
  Json lits = Json::array();
  for (Var v = 1; v <= phi.size(); ++v) {
    if (!phi.is_set(v)) continue;
    lits.push_back(phi.value(v) ? static_cast<std::int64_t>(v) : -static_cast<std::int64_t>(v));
  }
  return lits;
}

struct Loaded {
  Formula formula;
  Json instance;
};

Loaded load(const std::string& path) {
  ParseResult parsed = read_dimacs_file(path);
  Loaded out{std::move(parsed.formula), Json::object()};
  out.instance["file"] = std::filesystem::path(path).filename().string();
  out.instance["hash"] = "fnv1a64:" + fnv1a_hex(serialize_dimacs(out.formula));
  out.instance["num_vars"] = out.formula.num_vars();
  out.instance["num_clauses"] = out.formula.num_clauses();
  out.instance["max_width"] = out.formula.max_width();
  out.instance["warnings"] = parsed.warnings;
  return out;
}

// Parses "p/q" or a decimal such as "0.25" into a reduced fraction.
std::pair<std::uint64_t, std::uint64_t> parse_fraction(const std::string& text) {
  auto bad = [&]() { return InputError("bad epsilon '" + text + "' (use p/q or a decimal)"); };
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::size_t used = 0;
      num = std::stoull(text.substr(0, slash), &used);
      if (used != slash) throw bad();
      const std::string rest = text.substr(slash + 1);
      den = std::stoull(rest, &used);
      if (used != rest.size()) throw bad();
    } else {
      const auto dot = text.find('.');
      const std::string whole = text.substr(0, dot);
      const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
      if (frac.size() > 12 || (whole.empty() && frac.empty())) throw bad();
      for (char c : whole + frac)
        if (c < '0' || c > '9') throw bad();
      for (char c : whole + frac) num = num * 10 + static_cast<std::uint64_t>(c - '0');
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    }
  } catch (const std::logic_error&) {
    throw bad();
  }
  if (den == 0) throw bad();
  const std::uint64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

void audit(const Formula& f, const Assignment& phi, std::uint64_t claimed) {
  const std::uint64_t recomputed = eval_assignment(f, phi);
  if (recomputed != claimed) {
    throw InvariantError("satisfied count " + std::to_string(claimed) + " disagrees with re-evaluation " +
                         std::to_string(recomputed));
  }
}

Json cmd_solve(const Options& o) {
  const Loaded in = load(o.file);
  const Formula& f = in.formula;
  Json report{{"command", "solve"}, {"algorithm", o.alg}, {"instance", in.instance}};
  Assignment phi;
  std::uint64_t satisfied = 0;
  SpaceReport space;
  Json extras = Json::object();

  if (o.alg == "half") {
    auto [r, s] = meter_scope("half", [&] { return half_approx(f); });
    phi = r.assignment;
    satisfied = r.satisfied;
    space = s;
    extras["all_ones"] = r.all_ones;
  } else if (o.alg == "ls") {
    auto [r, s] = meter_scope("ls", [&] { return ls_solve(f); });
    phi = r.assignment;
    satisfied = r.satisfied;
    space = s;
    extras["m_prime"] = r.m_prime;
    extras["flipped_vars"] = r.flipped_vars;
    extras["threshold"] = r.search.threshold;
    extras["target"] = r.search.target;
    extras["family_index"] = r.search.family_index;
    extras["candidates"] = r.search.candidates;
    extras["q"] = r.search.q;
    extras["t"] = r.search.t;
    extras["fallback"] = r.search.fallback;
  } else if (o.alg == "chou") {
    auto [r, s] = meter_scope("chou", [&] { return chou_solve(f); });
    phi = r.assignment;
    satisfied = r.satisfied;
    space = s;
    const std::uint32_t scale = r.totals.scale_bits;
    extras["branch"] = r.bias_branch ? "all-ones" : (r.search.degenerate ? "degenerate" : "search");
    extras["b_f"] = dyadic_to_decimal(r.totals.b_f, scale);
    extras["b_star"] = dyadic_to_decimal(r.totals.b_star, scale);
    extras["flipped_vars"] = r.flipped_vars;
    if (!r.bias_branch && !r.search.degenerate) {
      extras["a"] = r.search.a;
      extras["b"] = r.search.b;
      extras["q"] = r.search.q;
      extras["t"] = r.search.t;
      extras["expectation_target"] = r.search.expectation_target;
      extras["slack_target"] = r.search.slack_target;
      extras["target"] = r.search.target;
      extras["family_index"] = r.search.family_index;
      extras["candidates"] = r.search.candidates;
      extras["all_ones_won"] = r.search.all_ones_won;
      extras["fallback"] = r.search.fallback;
    }
  } else if (o.alg == "planar-ptas") {
    const auto [num, den] = parse_fraction(o.eps);
    auto [r, s] = meter_scope("planar-ptas", [&] { return planar_ptas(f, num, den); });
    phi = r.assignment;
    satisfied = r.satisfied;
    space = s;
    const EulerCheck euler = euler_check(f);
    extras["eps"] = std::to_string(num) + "/" + std::to_string(den);
    extras["k"] = r.k;
    extras["depth"] = r.depth0;
    extras["shallow"] = r.shallow;
    extras["chosen_residue"] = r.chosen_residue;
    extras["clause_loss"] = r.clause_loss;
    extras["retained"] = r.retained;
    extras["parts_optimum"] = r.parts_optimum;
    extras["planarity"] = {{"trusted", true}, {"euler_plausible", euler.plausible}};
    Json parts = Json::array();
    for (const PartStat& p : r.parts) {
      parts.push_back({{"clauses", p.clauses},
                       {"vars", p.vars},
                       {"width", p.width},
                       {"depth", p.depth},
                       {"nodes", p.nodes},
                       {"optimum", p.optimum},
                       {"dp_node_visits", p.node_visits}});
    }
    extras["part_count"] = r.parts.size();
    extras["parts"] = parts;
  } else if (o.alg == "exact") {
    auto [r, s] = meter_scope("exact", [&] { return exact_maxsat(f, o.jobs); });
    phi = r.witness;
    satisfied = r.opt;
    space = s;
  } else {
    throw InputError("unknown algorithm '" + o.alg + "'");
  }

  audit(f, phi, satisfied);
  report["satisfied"] = satisfied;
  if (o.oracle) {
    const ExactResult opt = exact_maxsat(f, o.jobs);
    report["oracle"] = {{"opt", opt.opt},
                        {"ratio", opt.opt == 0 ? 1.0 : static_cast<double>(satisfied) / static_cast<double>(opt.opt)}};
  }
  report["assignment"] = literals_json(phi);
  report["space"] = space_json(space);
  report["extras"] = extras;
  return report;
}

Json cmd_bias(const Options& o) {
  const Loaded in = load(o.file);
  auto [profile, space] = meter_scope("bias", [&] { return bias_profile(in.formula); });
  const std::uint32_t r = profile.totals.scale_bits;
  auto exact = [&](const ExactInt& v) { return Json{{"scaled", v.str()}, {"decimal", dyadic_to_decimal(v, r)}}; };
  Json per_var = Json::array();
  for (Var v = 1; v <= in.formula.num_vars(); ++v) {
    Json e = exact(profile.per_var[v - 1]);
    per_var.push_back(Json{{"var", v}, {"scaled", e["scaled"]}, {"decimal", e["decimal"]}});
  }
  Json histogram = Json::object();
  for (auto [w, c] : profile.histogram) histogram[std::to_string(w)] = c;
  return Json{{"command", "bias"},
              {"instance", in.instance},
              {"scale_bits", r},
              {"per_var", per_var},
              {"b_f", exact(profile.totals.b_f)},
              {"b_star", exact(profile.totals.b_star)},
              {"histogram", histogram},
              {"neg_vars", profile.neg_vars},
              {"branch", profile.totals.b_f > profile.totals.b_star ? "all-ones" : "search"},
              {"space", space_json(space)}};
}

Json cmd_partition(const Options& o) {
  const Loaded in = load(o.file);
  const Formula& f = in.formula;
  std::vector<PartData> parts;
  std::uint32_t chosen = 0;
  std::uint64_t loss = 0;
  std::uint32_t depth = 0;
  bool shallow = false;
  Json losses = Json::array();
  const SpaceReport space = meter_scope("partition", [&] {
    const PartitionStream stream = partition(f, o.k);
    const DeletionBand& band = stream.band();
    chosen = band.chosen;
    loss = band.clause_loss;
    depth = stream.depth0();
    shallow = band.shallow;
    for (std::uint64_t l : band.losses) losses.push_back(l);
    // Parts are copied out as they stream by; the copy is output.
    stream.scan([&](const PartView& p) {
      PartData d;
      d.clauses.assign(p.clauses.begin(), p.clauses.end());
      d.vars.assign(p.vars.begin(), p.vars.end());
      d.first_level = p.first_level;
      d.last_level = p.last_level;
      parts.push_back(std::move(d));
    });
  });
  const PartitionReport check = verify_partition(f, parts, o.k);
  const EulerCheck euler = euler_check(f);

  Json part_list = Json::array();
  if (!o.out_dir.empty()) std::filesystem::create_directories(o.out_dir);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    Json p{{"index", i + 1},
           {"clauses", parts[i].clauses.size()},
           {"vars", parts[i].vars.size()},
           {"first_level", parts[i].first_level},
           {"last_level", parts[i].last_level}};
    if (!o.out_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "part-%04zu.cnf", i + 1);
      const auto path = std::filesystem::path(o.out_dir) / name;
      std::ofstream file(path, std::ios::binary);
      if (!file) throw InputError("cannot write " + path.string());
      file << serialize_dimacs(part_formula(f, parts[i]),
                               {"part " + std::to_string(i + 1) + " of " + std::to_string(parts.size())});
      p["file"] = name;
    }
    part_list.push_back(p);
  }
  return Json{{"command", "partition"},
              {"instance", in.instance},
              {"k", o.k},
              {"depth", depth},
              {"shallow", shallow},
              {"chosen_residue", chosen},
              {"clause_loss", loss},
              {"residue_losses", losses},
              {"report",
               {{"parts", check.parts},
                {"disjoint", check.disjoint},
                {"witness_var", check.witness_var},
                {"retained", check.retained},
                {"retained_bound", check.retained_bound},
                {"retained_ok", check.retained_ok},
                {"max_level_span", check.max_level_span},
                {"span_ok", check.span_ok},
                {"loss_sum", check.loss_sum},
                {"loss_sum_ok", check.loss_sum_ok},
                {"ok", check.ok()}}},
              {"planarity", {{"trusted", true}, {"euler_plausible", euler.plausible}}},
              {"parts", part_list},
              {"space", space_json(space)}};
}

Json cmd_hashfam(const Options& o) {
  HashFamilySpec spec;
  spec.n = o.n;
  spec.k = o.hk;
  spec.a = o.a;
  spec.b = o.b;
  spec.q = o.q != 0 ? o.q : smallest_prime_geq(std::max<std::uint64_t>({o.n, o.b, 2}));
  spec.validate();
  Json members = Json::array();
  std::uint32_t shown = 0;
  const SpaceReport space = meter_scope("hashfam", [&] {
    enum_family(spec).scan([&](const HashFunction& h) {
      if (shown >= o.show) return false;
      Json coeffs = Json::array();
      for (std::uint32_t i = 0; i < spec.k; ++i) coeffs.push_back(h.coeff(i));
      std::string bits;
      for (Var v = 1; v <= spec.n && v <= 64; ++v) bits += h.bit(v) ? '1' : '0';
      members.push_back({{"index", h.index()}, {"coeffs", coeffs}, {"bits", bits}});
      ++shown;
      return true;
    });
  });
  const std::uint64_t size = spec.family_size();
  return Json{{"command", "hashfam"},
              {"n", spec.n},
              {"k", spec.k},
              {"a", spec.a},
              {"b", spec.b},
              {"q", spec.q},
              {"t", spec.threshold()},
              {"marginal", std::to_string(spec.threshold()) + "/" + std::to_string(spec.q)},
              {"family_size", size == 0 ? Json("overflow") : Json(size)},
              {"members", members},
              {"space", space_json(space)}};
}

Json cmd_gen_planar(const Options& o) {
  PlanarOptions p;
  p.kind = parse_planar_kind(o.kind);
  parse_size(o.size, p.width, p.height);
  if (p.kind != PlanarKind::grid && p.height != 1) throw InputError("only grids take a WxH size");
  p.seed = o.seed;
  p.all_positive = o.positive;
  p.extras = !o.no_extras;
  const GeneratedInstance g = gen_planar_instance(p);
  const std::string text = serialize_dimacs(
      g.formula, {"generated: kind=" + o.kind + " size=" + o.size + " seed=" + std::to_string(o.seed),
                  "certificate: " + g.certificate});
  if (o.out.empty()) throw InputError("--out is required");
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw InputError("cannot write " + o.out);
  file << text;
  return Json{{"command", "gen-planar"},
              {"kind", o.kind},
              {"size", o.size},
              {"seed", o.seed},
              {"file", std::filesystem::path(o.out).filename().string()},
              {"hash", "fnv1a64:" + fnv1a_hex(serialize_dimacs(g.formula))},
              {"num_vars", g.formula.num_vars()},
              {"num_clauses", g.formula.num_clauses()},
              {"certificate", g.certificate}};
}

Json cmd_oracle(const Options& o) {
  const Loaded in = load(o.file);
  const ExactResult r = exact_maxsat(in.formula, o.jobs);
  audit(in.formula, r.witness, r.opt);
  return Json{{"command", "oracle"}, {"instance", in.instance}, {"opt", r.opt}, {"witness", literals_json(r.witness)}};
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  Options o;
  CLI::App app{"Space-metered Max-SAT approximation toolkit", "sublin"};
  app.require_subcommand(1);
  app.add_option("--jobs", o.jobs, "worker threads for the exact oracle")->check(CLI::Range(1u, 256u));

  auto* solve = app.add_subcommand("solve", "run an approximation algorithm on a DIMACS file");
  solve->add_option("--alg", o.alg, "half | ls | chou | planar-ptas | exact")
      ->check(CLI::IsMember({"half", "ls", "chou", "planar-ptas", "exact"}));
  solve->add_option("--eps", o.eps, "epsilon for planar-ptas, p/q or decimal");
  solve->add_flag("--oracle", o.oracle, "compare against the exact optimum");
  solve->add_option("file", o.file, "DIMACS CNF file")->required();

  auto* bias = app.add_subcommand("bias", "dump the bias profile");
  bias->add_option("file", o.file)->required();

  auto* part = app.add_subcommand("partition", "partition a planar instance");
  part->add_option("--k", o.k, "band modulus (>= 2)")->required();
  part->add_option("--out-dir", o.out_dir, "write parts as numbered DIMACS files here");
  part->add_option("file", o.file)->required();

  auto* hash = app.add_subcommand("hashfam", "describe a k-universal family");
  hash->add_option("--n", o.n)->required();
  hash->add_option("--k", o.hk)->required();
  hash->add_option("--a", o.a)->required();
  hash->add_option("--b", o.b)->required();
  hash->add_option("--q", o.q, "field size (default: least prime >= max(n, b))");
  hash->add_option("--show", o.show, "members to list");

  auto* gen = app.add_subcommand("gen-planar", "generate a planar instance");
  gen->add_option("--kind", o.kind, "chain | grid | tree")->check(CLI::IsMember({"chain", "grid", "tree"}));
  gen->add_option("--size", o.size, "N, or WxH for grids");
  gen->add_option("--seed", o.seed);
  gen->add_option("--out", o.out)->required();
  gen->add_flag("--positive", o.positive, "all literals positive");
  gen->add_flag("--no-extras", o.no_extras, "no unit or face clauses");

  auto* orc = app.add_subcommand("oracle", "exact optimum by enumeration");
  orc->add_option("file", o.file)->required();

  Json report;
  int code = kOk;
  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::ParseError& e) {
      throw InputError(e.what());
    }
    Json body;
    if (*solve) body = cmd_solve(o);
    if (*bias) body = cmd_bias(o);
    if (*part) body = cmd_partition(o);
    if (*hash) body = cmd_hashfam(o);
    if (*gen) body = cmd_gen_planar(o);
    if (*orc) body = cmd_oracle(o);
    report = Json{{"schema_version", kSchemaVersion}};
    for (auto& [key, value] : body.items()) report[key] = value;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    report = Json{{"schema_version", kSchemaVersion}, {"error", {{"kind", "input"}, {"message", e.what()}}}};
    code = kInputError;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    report = Json{{"schema_version", kSchemaVersion}, {"error", {{"kind", "invariant"}, {"message", e.what()}}}};
    code = kInvariantError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    report = Json{{"schema_version", kSchemaVersion}, {"error", {{"kind", "internal"}, {"message", e.what()}}}};
    code = kInvariantError;
  }
  const double elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  report["timestamp"] = {{"utc", utc_now()}, {"elapsed_ms", elapsed}};
  out << report.dump(2) << "\n";
  return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace sublin::cli
