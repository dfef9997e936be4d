#include "residua/cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "residua/construct.h"
#include "residua/error.h"
#include "residua/oracle.h"
#include "residua/tree.h"

namespace residua {

nlohmann::json RunConfig::to_json() const {
  return {{"seed", seed},
          {"probes", probes},
          {"levels", levels},
          {"kappa", residua::format(kappa)},
          {"format", format},
          {"out", out.empty() ? nlohmann::json(nullptr) : nlohmann::json(out)}};
}

namespace {

nlohmann::json header(const std::string& command, const Expr& e, const RunConfig& cfg) {
  return {{"tool", "residua"}, {"version", kVersion}, {"command", command}, {"expr", print_expr(e)}, {"config", cfg.to_json()}};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string element_list(const std::vector<Element>& xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + to_text(xs[i]);
  return s + "}";
}

nlohmann::json elements_json(const std::vector<Element>& xs) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& x : xs) a.push_back(to_text(x));
  return a;
}

struct Outcome {
  std::string artifact;
  int code = exit_code::ok;
};

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed, const char* command) {
  for (const char* f : allowed)
    if (cfg.format == f) return;
  throw PreconditionError(std::string("--format ") + cfg.format + " is not available for " + command);
}

Outcome cmd_depth(const Expr& e, const RunConfig& cfg) {
  require_format(cfg, {"text", "json"}, "depth");
  DepthInterval d = depth_interval(e);
  if (cfg.format == "json") {
    nlohmann::json j = header("depth", e, cfg);
    j["depth"] = d.to_json();
    return {dump(j)};
  }
  std::ostringstream s;
  s << "[" << format(d.lower) << ", " << format(d.upper) << "]\n";
  s << "lower: " << format(d.lower) << "\n";
  s << "upper: " << format(d.upper) << "\n";
  s << "claimed: " << (d.paper_claimed ? format(*d.paper_claimed) : "none") << "\n";
  if (!d.claim_source.empty()) s << "source: " << d.claim_source << "\n";
  if (d.discrepancy) s << "discrepancy: yes\n";
  for (const auto& f : d.flags) s << "note: " << f << "\n";
  return {s.str()};
}

Outcome cmd_verify(const Expr& e, const RunConfig& cfg) {
  require_format(cfg, {"text", "json"}, "verify");
  ChainSchema chain = build_chain(e).with_kappa(cfg.kappa);
  VerifyOptions opt;
  opt.levels = cfg.levels;
  opt.probes = cfg.probes;
  opt.seed = cfg.seed;
  ChainCertificate cert = verify_prefix(chain, opt);
  nlohmann::json j = header("verify", e, cfg);
  j["chain"] = {{"label", chain.label()}, {"length", format(chain.length())}};
  j["certificate"] = to_json(cert);
  int code = exit_code::ok;
  if (cert.verdict == Verdict::Fail) code = exit_code::fail;
  if (cert.verdict == Verdict::Inconclusive) code = exit_code::inconclusive;
  return {dump(j), code};
}

Outcome cmd_tree(const Expr& e, const RunConfig& cfg, std::uint64_t block) {
  ChainSchema chain = build_chain(e);
  TreeTruncation tr = truncate(coset_tree(chain), cfg.levels, block);
  if (cfg.format == "dot") {
    return {"// residua " + std::string(kVersion) + " tree " + print_expr(e) + " config " + cfg.to_json().dump() + "\n" + to_dot(tr)};
  }
  if (cfg.format == "json") {
    nlohmann::json j = header("tree", e, cfg);
    j["block"] = block;
    j["tree"] = to_json(tr);
    return {dump(j)};
  }
  std::ostringstream s;
  s << "tree of " << print_expr(e) << ", block " << block << ", levels 0.." << tr.depth << "\n";
  for (std::size_t i = 0; i < tr.sizes.size(); ++i) s << "level " << i << ": " << tr.sizes[i] << "\n";
  return {s.str()};
}

Outcome cmd_oracle(const std::string& sub, const Expr& e, const RunConfig& cfg, std::uint64_t max_index) {
  require_format(cfg, {"text", "json"}, "oracle");
  GroupPtr g = build_group(e);
  if (!g->is_finite()) throw CapExceeded(g->name() + " is infinite; the oracle handles finite groups of order at most " + std::to_string(kOracleCap));
  nlohmann::json j = header("oracle " + sub, e, cfg);
  std::ostringstream s;
  if (sub == "lattice") {
    SubgroupLattice lat = all_subgroups(g);
    j["lattice"] = lat.to_json();
    for (const auto& h : lat.subgroups) s << "order " << h.count() << ": " << element_list(lat.table.to_elements(h)) << "\n";
  } else if (sub == "core") {
    auto core = core_up_to_index(g, max_index);
    j["max_index"] = max_index;
    j["core"] = {{"order", core.size()}, {"trivial", core.size() == 1}, {"elements", elements_json(core)}};
    s << "core below index " << max_index << ": " << (core.size() == 1 ? "trivial " : "") << element_list(core) << "\n";
  } else if (sub == "min-kappa") {
    const auto k = min_kappa(g);
    j["min_kappa"] = k;
    s << k << "\n";
  } else {
    const Ordinal d = depth_exact_finite(g);
    j["depth"] = format(d);
    s << format(d) << "\n";
  }
  return {cfg.format == "json" ? dump(j) : s.str()};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Residual finiteness depths, chains and coset trees", "residua"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunConfig cfg;
  std::string expr_text;
  std::string kappa_text = "aleph0";
  std::uint64_t block = 0;
  std::uint64_t max_index = 2;

  auto common = [&](CLI::App* sc, bool tree) {
    sc->add_option("expr", expr_text, "group expression, e.g. \"wreath(C(2), Z)\"")->required();
    sc->add_option("--seed", cfg.seed, "probe seed (default 0, or RESIDUA_SEED)");
    sc->add_option("--probes", cfg.probes, "random probe words")->capture_default_str();
    sc->add_option("--levels", cfg.levels, "finite levels per block")->capture_default_str();
    sc->add_option("--kappa", kappa_text, "index bound: an integer or aleph0")->capture_default_str();
    sc->add_option("--format", cfg.format, "output format")
        ->check(tree ? CLI::IsMember({"text", "json", "dot"}) : CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    sc->add_option("--out", cfg.out, "write the artifact here instead of stdout");
  };

  auto* depth = app.add_subcommand("depth", "bounds on the residual-finiteness depth");
  common(depth, false);
  auto* verify = app.add_subcommand("verify", "verify a prefix of the registered chain and emit a certificate");
  common(verify, false);
  auto* tree = app.add_subcommand("tree", "emit a truncation of the coset tree");
  common(tree, true);
  tree->add_option("--block", block, "which w-block to expand")->capture_default_str();
  auto* oracle = app.add_subcommand("oracle", "brute-force answers for small finite groups");
  oracle->require_subcommand(1);
  std::vector<std::pair<std::string, CLI::App*>> oracle_subs;
  for (const char* name : {"lattice", "core", "min-kappa", "depth"}) {
    auto* sc = oracle->add_subcommand(name);
    common(sc, false);
    if (std::string(name) == "core") sc->add_option("--max-index", max_index, "intersect subgroups of index below this")->required();
    oracle_subs.emplace_back(name, sc);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::usage;
  }

  CLI::App* active = nullptr;
  for (auto* sc : {depth, verify, tree})
    if (sc->parsed()) active = sc;
  std::string oracle_sub;
  for (auto& [name, sc] : oracle_subs)
    if (sc->parsed()) {
      active = sc;
      oracle_sub = name;
    }

  if (active->count("--seed") == 0) {
    if (const char* env = std::getenv("RESIDUA_SEED")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (*env == '\0' || *end != '\0') {
        err << "residua: error: RESIDUA_SEED must be a non-negative integer, got '" << env << "'\n";
        return exit_code::usage;
      }
      cfg.seed = v;
    }
  }

  try {
    cfg.kappa = parse_cardinal(kappa_text);
    ExprPtr e = parse_expr(expr_text);
    Outcome res;
    if (depth->parsed()) res = cmd_depth(*e, cfg);
    else if (verify->parsed()) res = cmd_verify(*e, cfg);
    else if (tree->parsed()) res = cmd_tree(*e, cfg, block);
    else res = cmd_oracle(oracle_sub, *e, cfg, max_index);

    if (cfg.out.empty()) {
      out << res.artifact;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f || !(f << res.artifact)) {
        err << "residua: error: cannot write " << cfg.out << "\n";
        return exit_code::usage;
      }
    }
    return res.code;
  } catch (const ParseError& e) {
    err << "residua: error: " << e.what() << "\n";
    if (!e.expected().empty()) {
      err << "  expected one of:";
      for (const auto& t : e.expected()) err << " " << t;
      err << "\n";
    }
    return exit_code::usage;
  } catch (const Unregistered& e) {
    err << "residua: error: " << e.what() << "\n";
    return exit_code::unregistered;
  } catch (const NotMaterializable& e) {
    err << "residua: error: " << e.what() << "\n";
    return exit_code::not_materializable;
  } catch (const CapExceeded& e) {
    err << "residua: error: " << e.what() << "\n";
    return exit_code::cap_exceeded;
  } catch (const Error& e) {
    err << "residua: error: " << e.what() << "\n";
    return exit_code::usage;
  }
}

}  // namespace residua
