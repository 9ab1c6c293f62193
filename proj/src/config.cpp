#include "edsq/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "edsq/error.hpp"

namespace edsq {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Int parse_int(const std::string& key, const std::string& text) {
  Int v;
  if (text.empty() || v.set_str(text, 10) != 0) fail_argument(key + ": not an integer: '" + text + "'");
  return v;
}

std::string join(const std::vector<std::string>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? std::string(1, sep) : "") + v[i];
  return s;
}

}  // namespace

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

u64 parse_u64(const std::string& key, const std::string& text) {
  u64 v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    fail_argument(key + ": not a non-negative integer: '" + text + "'");
  }
  return v;
}

Rat parse_rat(const std::string& key, const std::string& text) {
  Rat v;
  if (text.empty() || v.set_str(text, 10) != 0 || v.get_den() == 0) {
    fail_argument(key + ": not a rational: '" + text + "'");
  }
  v.canonicalize();
  return v;
}

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> k{
      "a4",          "a6",        "point",         "t",          "variant",     "count",
      "p",           "q",         "trial_bound",   "rho_rounds", "max_index",   "scan_bound",
      "ell_bound",   "densities", "density_bound", "relax",      "tsets_out",   "manifest_out"};
  return k;
}

void RunConfig::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "a4") {
    a4 = parse_int(key, value);
  } else if (key == "a6") {
    a6 = parse_int(key, value);
  } else if (key == "point") {
    const auto xy = split(value, ',');
    if (xy.size() != 2) fail_argument("point: expected x,y");
    x = parse_rat(key, xy[0]);
    y = parse_rat(key, xy[1]);
  } else if (key == "t") {
    const u64 v = parse_u64(key, value);
    if (v < 2 || v > 64) fail_argument("t: must be in [2, 64]");
    t = static_cast<unsigned>(v);
  } else if (key == "variant") {
    variant = parse_variant(value);
  } else if (key == "count") {
    count = parse_u64(key, value);
  } else if (key == "p") {
    p = parse_u64(key, value);
  } else if (key == "q") {
    q = parse_u64(key, value);
  } else if (key == "trial_bound") {
    trial_bound = parse_u64(key, value);
  } else if (key == "rho_rounds") {
    rho_rounds = parse_u64(key, value);
  } else if (key == "max_index") {
    max_index = parse_u64(key, value);
  } else if (key == "scan_bound") {
    scan_bound = parse_u64(key, value);
  } else if (key == "ell_bound") {
    ell_bound = parse_u64(key, value);
  } else if (key == "densities") {
    densities = split(value, ',');
    if (densities.empty()) fail_argument("densities: empty list");
  } else if (key == "density_bound") {
    density_bound = parse_u64(key, value);
  } else if (key == "relax") {
    RelaxPolicy::parse(value);
    relax = value;
  } else if (key == "tsets_out") {
    tsets_out = value;
  } else if (key == "manifest_out") {
    manifest_out = value;
  } else {
    fail_argument("unknown config key '" + key + "'");
  }
}

std::string RunConfig::get(const std::string& key) const {
  if (key == "a4") return a4.get_str();
  if (key == "a6") return a6.get_str();
  if (key == "point") return to_string(x) + "," + to_string(y);
  if (key == "t") return std::to_string(t);
  if (key == "variant") return variant_name(variant);
  if (key == "count") return std::to_string(count);
  if (key == "p") return std::to_string(p);
  if (key == "q") return std::to_string(q);
  if (key == "trial_bound") return std::to_string(trial_bound);
  if (key == "rho_rounds") return std::to_string(rho_rounds);
  if (key == "max_index") return std::to_string(max_index);
  if (key == "scan_bound") return std::to_string(scan_bound);
  if (key == "ell_bound") return std::to_string(ell_bound);
  if (key == "densities") return join(densities, ',');
  if (key == "density_bound") return std::to_string(density_bound);
  if (key == "relax") return relax;
  if (key == "tsets_out") return tsets_out;
  if (key == "manifest_out") return manifest_out;
  fail_argument("unknown config key '" + key + "'");
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  u64 lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail_argument("config line " + std::to_string(lineno) + ": expected key=value");
    cfg.set(trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_argument("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string RunConfig::canonical() const {
  std::string out;
  for (const auto& k : keys()) out += k + "=" + get(k) + "\n";
  return out;
}

FactorBudget RunConfig::budget() const {
  FactorBudget b;
  b.trial_bound = trial_bound;
  b.rho_rounds = rho_rounds;
  return b;
}

BuildOptions RunConfig::build_options() const {
  BuildOptions o;
  o.variant = variant;
  o.t = t;
  o.count = count;
  o.scan_bound = scan_bound;
  o.ell_bound = ell_bound;
  o.max_index = max_index;
  o.p = p;
  o.q = q;
  o.workers = default_workers();
  o.budget = budget();
  return o;
}

}  // namespace edsq
