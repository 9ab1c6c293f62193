#include "edsq/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>

#include "edsq/claims.hpp"
#include "edsq/error.hpp"

namespace edsq {

namespace {

struct Table {
  std::vector<std::string> cols;
  std::vector<std::vector<Json>> rows;

  void row(std::vector<Json> r) { rows.push_back(std::move(r)); }

  void print(std::ostream& out, bool json) const {
    if (json) {
      for (const auto& r : rows) {
        Json j;
        for (std::size_t i = 0; i < cols.size(); ++i) j[cols[i]] = r[i];
        out << j.dump() << '\n';
      }
      return;
    }
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << cols[i];
    out << '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        out << (i ? "\t" : "") << (r[i].is_string() ? r[i].get<std::string>() : r[i].dump());
      }
      out << '\n';
    }
  }
};

Json strings(const std::vector<Int>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(big(x));
  return out;
}

Mode parse_mode(const std::string& s) {
  if (s == "exact") return Mode::Exact;
  if (s == "scan") return Mode::Scan;
  fail_argument("unknown mode '" + s + "' (exact|scan)");
}

std::vector<u64> parse_list(const std::string& key, const std::string& text) {
  std::vector<u64> out;
  for (const auto& s : split(text, ',')) out.push_back(parse_u64(key, s));
  return out;
}

std::vector<std::tuple<u64, u64, u64>> parse_triples(const std::string& text) {
  std::vector<std::tuple<u64, u64, u64>> out;
  for (const auto& t : split(text, ';')) {
    const auto v = parse_list("triples", t);
    if (v.size() != 3) fail_argument("triples: expected i,j,k groups separated by ';'");
    out.emplace_back(v[0], v[1], v[2]);
  }
  return out;
}

// P' = multiple * Q, with Q as the base when it is integral.
std::unique_ptr<DivisionSequence> sequence_for(const RunConfig& cfg, u64 multiple) {
  const Curve c = cfg.curve();
  const Point Q = cfg.generator();
  if (!on_curve(c, Q)) fail_argument("generator is not on the curve");
  if (multiple < 1) fail_argument("multiple must be >= 1");
  if (multiple == 1) return std::make_unique<DivisionSequence>(c, Q, cfg.budget());
  return std::make_unique<DivisionSequence>(c, Q, multiple, cfg.budget());
}

int emit(const Report& rep, std::ostream& out, bool json) {
  if (json) {
    rep.write_jsonl(out);
  } else {
    rep.write_tsv(out);
  }
  return rep.all_pass() ? kExitOk : kExitFalsified;
}

struct Options {
  std::string config_path;
  std::vector<std::string> sets;
  bool json = false;

  u64 n = 7, max = 10, bound = 0, cross = 100, multiple = 1, ell = 5, limit = 10'000, count = 200, seed = 1,
      n_bound = 60, k = 1;
  unsigned t = 2;
  std::string mode = "exact";
  std::string claim;
  std::string delta = "1/2";
  std::string densities;
  std::string m_values = "1,2,3,9";
  std::string places = "3,5,7";
  std::string triples = "1,1,2;1,2,3;1,2,4;2,2,4";
  std::string grid = "1000,3000,10000,30000";
  std::string relax;
  std::string variant;
  double eps = 0.1;
  bool raw = true;
};

RunConfig load_config(const Options& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : RunConfig::load(o.config_path);
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail_argument("--set expects key=value");
    cfg.set(s.substr(0, eq), s.substr(eq + 1));
  }
  return cfg;
}

// ---- subcommands ----

int cmd_point(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const Point A = scalar_mul(cfg.curve(), Int(to_int(o.n)), cfg.generator());
  Table t{{"n", "x", "y"}, {}};
  if (A.is_infinity()) {
    t.row({o.n, "O", "O"});
  } else {
    t.row({o.n, big(A.x()), big(A.y())});
  }
  t.print(out, o.json);
  return kExitOk;
}

int cmd_divseq(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const auto seq = sequence_for(cfg, o.multiple);
  const Mode mode = parse_mode(o.mode);
  Table t{{"n", "d", "support", "support_complete", "primitive", "primitive_complete"}, {}};
  for (u64 n = 1; n <= o.max; ++n) {
    const DivTerm d = div_term(*seq, n, mode);
    t.row({n, big(d.d), strings(d.support), d.support_complete, strings(d.primitive_primes), d.primitive_complete});
  }
  t.print(out, o.json);
  return kExitOk;
}

int cmd_apparition(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const auto seq = sequence_for(cfg, o.multiple);
  const u64 X = o.bound ? o.bound : cfg.scan_bound;
  const ApparitionTable table = apparition_scan(*seq, X, 60, default_workers());
  Table t{{"p", "reduction", "rank"}, {}};
  for (u64 p : primes_up_to(X)) {
    if (table.is_bad(p)) {
      const auto r = table.rank(p);
      t.row({p, "bad", r ? Json(*r) : Json("unknown")});
    } else {
      t.row({p, "good", *table.rank(p)});
    }
  }
  t.print(out, o.json);
  return kExitOk;
}

int cmd_primitive(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const auto seq = sequence_for(cfg, o.multiple);
  const Mode mode = parse_mode(o.mode);
  const PrimitiveInfo& info = seq->primitive(o.n, mode);
  Table t{{"n", "mode", "primes", "unsplit_pieces", "count_at_least", "count_exact"}, {}};
  t.row({o.n, mode_name(mode), strings(info.primes), info.cofactors.size(), info.count_at_least(),
         info.count_exact()});
  t.print(out, o.json);
  return kExitOk;
}

int cmd_mu(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const auto seq = sequence_for(cfg, o.multiple);
  const MuValue m = mu(*seq, o.ell, parse_mode(o.mode));
  Table t{{"ell", "lower", "upper", "exact", "attained_at"}, {}};
  t.row({o.ell, big(m.lower), big(m.upper), m.exact, m.attained_at});
  t.print(out, o.json);
  return kExitOk;
}

int cmd_build_seq(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const BuildContext ctx(cfg.curve(), cfg.generator(), cfg.build_options());
  const SeqState st = build_sequences(ctx, cfg.relax_policy());
  if (o.json) {
    for (const auto& e : st.entries) out << to_json(e.cert).dump() << '\n';
    return kExitOk;
  }
  Table t{{"i", "r", "ell", "policy", "candidates", "checks"}, {}};
  for (const auto& e : st.entries) {
    std::string checks;
    for (const auto& c : e.cert.checks) checks += (checks.empty() ? "" : ",") + c.condition + ":" + c.evidence;
    t.row({e.i, e.r, e.ell, e.cert.policy, e.cert.candidates_tried, checks});
  }
  t.print(out, false);
  return kExitOk;
}

void write_set_file(const std::string& path, const PrimeSet& s) {
  std::ofstream f(path);
  if (!f) fail_argument("cannot write '" + path + "'");
  write_prime_set(f, s);
}

int cmd_tsets(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const BuildContext ctx(cfg.curve(), cfg.generator(), cfg.build_options());
  const RelaxPolicy relax = cfg.relax_policy();
  const SeqState st = build_sequences(ctx, relax);
  const auto ts = build_tsets(ctx, st, cfg.ell_bound, relax);
  Table t{{"r", "family", "value"}, {}};
  for (const auto& s : ts) {
    for (const auto& [name, set] : {std::pair{"T1", &s.T1}, {"T2a", &s.T2a}, {"T2b", &s.T2b}, {"T2c", &s.T2c}}) {
      for (u64 p : *set) t.row({s.r, name, p});
    }
    for (const auto& u : s.unresolved) t.row({s.r, "unresolved:" + u.family, u.index});
    if (!cfg.tsets_out.empty()) {
      write_set_file(cfg.tsets_out + ".T1." + std::to_string(s.r), s.T1);
      write_set_file(cfg.tsets_out + ".T2." + std::to_string(s.r), s.T2());
    }
  }
  t.print(out, o.json);
  return kExitOk;
}

int cmd_partition(const RunConfig& cfg, const Options& o, std::ostream& out) {
  std::vector<ComputableReal> deltas;
  for (const auto& d : cfg.densities) deltas.push_back(ComputableReal::parse(d));
  const u64 X = cfg.density_bound;
  const PartitionResult res = partition(deltas, X);
  Table t{{"part", "delta", "count", "density"}, {}};
  for (std::size_t i = 0; i < res.parts.size(); ++i) {
    const Rat emp = empirical_density(res.parts[i], X);
    t.row({i + 1, deltas[i].description(), res.parts[i].size(), emp.get_d()});
  }
  t.print(out, o.json);
  if (!cfg.manifest_out.empty()) {
    std::ofstream f(cfg.manifest_out);
    if (!f) fail_argument("cannot write '" + cfg.manifest_out + "'");
    write_manifest(f, res.parts);
  }
  // Disjointness and cover are by construction; a broken one is a falsified claim.
  PrimeSet all;
  std::size_t total = 0;
  for (const auto& p : res.parts) {
    all = set_union(all, p);
    total += p.size();
  }
  const PrimeSet universe = primes_up_to(X);
  return all == universe && total == universe.size() ? kExitOk : kExitFalsified;
}

int cmd_assemble(const RunConfig& cfg, const Options& o, std::ostream& out) {
  return emit(claim_assembly(cfg), out, o.json);
}

int cmd_verify(const RunConfig& cfg, const Options& o, std::ostream& out) {
  const std::string& c = o.claim;
  const u64 bound = o.bound;
  auto relax_or = [&](const char* fallback) { return RelaxPolicy::parse(o.relax.empty() ? fallback : o.relax); };
  Report rep;
  if (c == "group-law") {
    rep = claim_group_law(cfg, o.count, o.seed);
  } else if (c == "known-multiples") {
    rep = claim_known_multiples(cfg, o.max);
  } else if (c == "divisibility") {
    rep = claim_divisibility(cfg, o.max);
  } else if (c == "gcd-support") {
    rep = claim_gcd_support(cfg, o.max);
  } else if (c == "apparition") {
    rep = claim_apparition(cfg, bound ? bound : 10'000, o.cross);
  } else if (c == "primitive-count") {
    rep = claim_primitive_count(cfg, o.multiple, o.t, o.max);
  } else if (c == "density") {
    rep = claim_density(o.delta, bound ? bound : cfg.density_bound);
  } else if (c == "partition") {
    rep = claim_partition(cfg.densities, cfg.density_bound);
  } else if (c == "assembly") {
    rep = claim_assembly(cfg);
  } else if (c == "section") {
    rep = claim_section(cfg, o.n_bound);
  } else if (c == "disjointness") {
    rep = claim_disjointness(cfg);
  } else if (c == "xdifference") {
    rep = claim_xdifference(cfg, parse_list("m", o.m_values), o.raw);
  } else if (c == "b-oracle") {
    rep = verify_B_oracle(o.limit);
  } else if (c == "b-predicate") {
    rep = claim_b_predicate(cfg, relax_or("desk"));
  } else if (c == "addition") {
    rep = claim_addition(cfg, relax_or("desk"), parse_triples(o.triples));
  } else if (c == "convergence") {
    rep = claim_convergence(cfg, parse_list("places", o.places));
  } else {
    std::string names;
    for (const auto& n : claim_names()) names += (names.empty() ? "" : ", ") + n;
    fail_argument("unknown claim '" + c + "' (" + names + ")");
  }
  return emit(rep, out, o.json);
}

int cmd_diagnose(const RunConfig& cfg_in, const Options& o, std::ostream& out) {
  std::vector<u64> grid = parse_list("grid", o.grid);
  if (grid.empty()) fail_argument("grid: empty");
  std::sort(grid.begin(), grid.end());
  RunConfig cfg = cfg_in;
  cfg.scan_bound = grid.back();
  const BuildContext ctx(cfg.curve(), cfg.generator(), cfg.build_options());
  const ApparitionTable& table = ctx.table();
  const Curve& c = ctx.params().curve;

  const unsigned tmax = std::max(2u, o.t);
  std::map<u64, unsigned> omega;  // good p -> omega(#E(F_p))
  for (const auto& [p, r] : table.entries) omega[p] = reduce_stats(c, p).omega;

  Table t{{"section", "X", "key", "value"}, {}};
  for (u64 X : grid) {
    const u64 pi = prime_pi(X);
    u64 prime_rank = 0;
    std::vector<u64> below(tmax + 1, 0);
    for (const auto& [p, r] : table.entries) {
      if (p > X) break;
      if (is_prime_u64(r)) ++prime_rank;
      for (unsigned s = 2; s <= tmax; ++s) {
        if (omega[p] < s) ++below[s];
      }
    }
    t.row({"ratio", X, "primes", pi});
    t.row({"ratio", X, "primitive-for-prime-index", static_cast<double>(prime_rank) / static_cast<double>(pi)});
    for (unsigned s = 2; s <= tmax; ++s) {
      t.row({"ratio", X, "omega-below-" + std::to_string(s), static_cast<double>(below[s]) / static_cast<double>(pi)});
    }
  }
  {
    u64 above = 0, total = 0;
    for (u64 ell : primes_up_to(cfg.ell_bound)) {
      const MuValue m = mu(ctx.sequence(), ell, Mode::Scan);
      ++total;
      if (m.upper.get_d() > o.eps) ++above;
    }
    t.row({"mu", cfg.ell_bound, "share-above-" + std::to_string(o.eps).substr(0, 4),
           total ? static_cast<double>(above) / static_cast<double>(total) : 0.0});
  }
  std::map<unsigned, u64> hist;
  for (const auto& [p, w] : omega) ++hist[w];
  for (const auto& [w, n] : hist) t.row({"omega-histogram", grid.back(), w, n});
  t.print(out, o.json);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Elliptic divisibility sequences, prime sequences and density checks", "edsq"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--config", o.config_path, "key=value configuration file");
  app.add_option("--set", o.sets, "override one config key (key=value), repeatable");
  app.add_flag("--json", o.json, "JSON-lines instead of TSV");

  auto* point = app.add_subcommand("point", "nQ by the group law");
  point->add_option("--n", o.n, "multiple")->required();

  auto* divseq = app.add_subcommand("divseq", "d_n with support and primitive primes");
  divseq->add_option("--max", o.max, "last index");
  divseq->add_option("--multiple", o.multiple, "use P' = multiple * Q");
  divseq->add_option("--mode", o.mode, "exact|scan");

  auto* app_cmd = app.add_subcommand("apparition", "rank of apparition per prime");
  app_cmd->add_option("--bound", o.bound, "prime bound (default scan_bound)");
  app_cmd->add_option("--multiple", o.multiple, "use P' = multiple * Q");

  auto* prim = app.add_subcommand("primitive", "primitive primes of d_n");
  prim->add_option("--n", o.n, "index")->required();
  prim->add_option("--multiple", o.multiple, "use P' = multiple * Q");
  prim->add_option("--mode", o.mode, "exact|scan");

  auto* mu_cmd = app.add_subcommand("mu", "sup of the prime-counting ratio of supp(d_l)");
  mu_cmd->add_option("--ell", o.ell, "index")->required();
  mu_cmd->add_option("--multiple", o.multiple, "use P' = multiple * Q");
  mu_cmd->add_option("--mode", o.mode, "exact|scan");

  auto* build = app.add_subcommand("build-seq", "prime sequences with certificates");
  auto* tsets = app.add_subcommand("tsets", "T-sets of each branch");
  for (auto* sc : {build, tsets}) {
    sc->add_option("--variant", o.variant, "discrete|model");
    sc->add_option("--relax", o.relax, "strict|desk");
  }

  auto* part = app.add_subcommand("partition", "t-way partition of the primes");
  part->add_option("--densities", o.densities, "comma-separated densities summing to 1");
  part->add_option("--bound", o.bound, "prime bound");

  auto* assemble = app.add_subcommand("assemble", "ring assembly on the truncated universe");
  assemble->add_option("--relax", o.relax, "strict|desk");

  auto* verify = app.add_subcommand("verify", "check one claim");
  verify->add_option("claim", o.claim, "claim name")->required();
  verify->add_option("--max", o.max, "largest index");
  verify->add_option("--count", o.count, "number of random identities");
  verify->add_option("--seed", o.seed, "random seed");
  verify->add_option("--bound", o.bound, "prime bound");
  verify->add_option("--cross", o.cross, "direct cross-check bound");
  verify->add_option("--multiple", o.multiple, "use P' = multiple * Q");
  verify->add_option("--t", o.t, "required primitive count");
  verify->add_option("--m", o.m_values, "m values, comma-separated");
  verify->add_flag("--raw,!--no-raw", o.raw, "use Q itself rather than its z-multiple");
  verify->add_option("--delta", o.delta, "target density");
  verify->add_option("--densities", o.densities, "comma-separated densities");
  verify->add_option("--places", o.places, "finite places, comma-separated");
  verify->add_option("--triples", o.triples, "i,j,k;i,j,k;...");
  verify->add_option("--limit", o.limit, "B-oracle limit");
  verify->add_option("--relax", o.relax, "strict|desk");
  verify->add_option("--n-bound", o.n_bound, "section index bound");

  auto* diag = app.add_subcommand("diagnose-density", "counting ratios expected to tend to zero");
  diag->add_option("--grid", o.grid, "X values, comma-separated");
  diag->add_option("--eps", o.eps, "threshold for mu");
  diag->add_option("--t", o.t, "largest omega threshold");

  auto* show = app.add_subcommand("config", "print the canonical configuration");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    RunConfig cfg = load_config(o);
    if (!o.variant.empty()) cfg.set("variant", o.variant);
    if (!o.relax.empty()) cfg.set("relax", o.relax);
    if (!o.densities.empty()) cfg.set("densities", o.densities);
    if (part->parsed() && o.bound) cfg.density_bound = o.bound;

    if (point->parsed()) return cmd_point(cfg, o, out);
    if (divseq->parsed()) return cmd_divseq(cfg, o, out);
    if (app_cmd->parsed()) return cmd_apparition(cfg, o, out);
    if (prim->parsed()) return cmd_primitive(cfg, o, out);
    if (mu_cmd->parsed()) return cmd_mu(cfg, o, out);
    if (build->parsed()) return cmd_build_seq(cfg, o, out);
    if (tsets->parsed()) return cmd_tsets(cfg, o, out);
    if (part->parsed()) return cmd_partition(cfg, o, out);
    if (assemble->parsed()) return cmd_assemble(cfg, o, out);
    if (verify->parsed()) return cmd_verify(cfg, o, out);
    if (diag->parsed()) return cmd_diagnose(cfg, o, out);
    if (show->parsed()) {
      out << cfg.canonical();
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "edsq: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::InvalidArgument:
        return kExitBadArgs;
      case ErrorKind::BudgetExhausted:
        return kExitBudget;
      case ErrorKind::Falsified:
        return kExitFalsified;
    }
  }
  return kExitBadArgs;
}

}  // namespace edsq
