#include "edsq/density.hpp"

#include <algorithm>
#include <iterator>
#include <sstream>

#include "edsq/error.hpp"

namespace edsq {

namespace {

using u128 = unsigned __int128;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

Rat parse_rational(const std::string& text) {
  const std::string s = trim(text);
  if (auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = trim(s.substr(0, slash)), den = trim(s.substr(slash + 1));
    if (!all_digits(num) || !all_digits(den)) fail_argument("not a rational: '" + text + "'");
    Int d(den);
    if (d == 0) fail_argument("zero denominator: '" + text + "'");
    Rat r{Int(num), d};
    r.canonicalize();
    return r;
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac))) fail_argument("not a decimal: '" + text + "'");
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Rat r{Int(whole) * scale + (frac.empty() ? Int(0) : Int(frac)), scale};
    r.canonicalize();
    return r;
  }
  if (!all_digits(s)) fail_argument("not a number: '" + text + "'");
  return Rat(Int(s));
}

bool ratio_less(u64 a, u64 z, const Rat& r) {
  // a / z < r
  return Int(to_int(a)) * r.get_den() < r.get_num() * Int(to_int(z));
}

bool frac_less(u64 a1, u64 z1, u64 a2, u64 z2) { return static_cast<u128>(a1) * z2 < static_cast<u128>(a2) * z1; }

unsigned bit_length(u64 n) {
  unsigned b = 0;
  while (n) {
    ++b;
    n >>= 1;
  }
  return b;
}

}  // namespace

// ---- ComputableReal ----

ComputableReal::ComputableReal(Stream stream, std::string description, std::optional<Rat> exact)
    : stream_(std::move(stream)), description_(std::move(description)), exact_(std::move(exact)) {}

ComputableReal ComputableReal::constant(const Rat& v) {
  return ComputableReal([v](u64) { return v; }, to_string(v), v);
}

ComputableReal ComputableReal::sqrt_of(const Rat& v) {
  if (v < 0) fail_argument("sqrt of a negative rational");
  std::optional<Rat> exact;
  if (mpz_perfect_square_p(v.get_num().get_mpz_t()) && mpz_perfect_square_p(v.get_den().get_mpz_t())) {
    exact = Rat(sqrt(v.get_num()), sqrt(v.get_den()));
  }
  auto stream = [v](u64 n) {
    const unsigned digits = 2 + bit_length(n);
    Int scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    Int scaled = v.get_num() * scale * scale / v.get_den();
    Rat r(sqrt(scaled), scale);
    r.canonicalize();
    return r;
  };
  return ComputableReal(stream, "sqrt(" + to_string(v) + ")", exact);
}

ComputableReal ComputableReal::parse(const std::string& text) {
  const std::string s = trim(text);
  if (s.rfind("sqrt(", 0) == 0 && s.size() > 6 && s.back() == ')') {
    return sqrt_of(parse_rational(s.substr(5, s.size() - 6)));
  }
  return constant(parse_rational(s));
}

ComputableReal ComputableReal::one_minus_sum(const std::vector<ComputableReal>& terms) {
  std::optional<Rat> exact = Rat(1);
  std::string desc = "1";
  for (const auto& t : terms) {
    if (exact && t.exact()) {
      *exact -= *t.exact();
    } else {
      exact.reset();
    }
    desc += "-" + t.description();
  }
  auto stream = [terms](u64 n) {
    Rat r = 1;
    for (const auto& t : terms) r -= t.at(n);
    return r;
  };
  return ComputableReal(stream, desc, exact);
}

// ---- greedy construction ----

NormBuckets NormBuckets::over_q(const PrimeSet& z) {
  NormBuckets b;
  b.norms = z;
  b.primes.reserve(z.size());
  for (u64 p : z) b.primes.push_back({p});
  return b;
}

PartitionState subset_of_density(const NormBuckets& Z, const ComputableReal& gamma, const ComputableReal& delta,
                                 u64 N) {
  PartitionState st;
  const u64 steps = std::min<u64>(N, Z.size());
  if (steps == 0) return st;

  auto collect = [&](PrimeSet& out, u64 upto) {
    for (u64 b = 0; b < upto; ++b) out.insert(out.end(), Z.primes[b].begin(), Z.primes[b].end());
    std::sort(out.begin(), out.end());
  };

  const bool zero = delta.exact() && *delta.exact() == 0;
  const bool full = delta.exact() && gamma.exact() && *delta.exact() == *gamma.exact();
  if (zero || full) {
    st.step = steps;
    collect(st.Z, steps);
    st.z = st.Z.size();
    if (full) {
      st.A = st.Z;
      st.a = st.z;
    }
    st.special = zero ? "empty" : "all";
    return st;
  }

  st.A = Z.primes[0];
  st.Z = Z.primes[0];
  st.a = st.z = Z.primes[0].size();
  st.step = 1;
  for (u64 i = 1; i < steps; ++i) {
    const Rat g = gamma.at(i);
    const Rat d = delta.at(i);
    if (g == 0) fail_argument("density stream: gamma approximant is zero at step " + std::to_string(i));
    Rat r = d / g;
    if (r < 0 || r > 1) {
      fail_argument("density stream: ratio approximant " + to_string(r) + " outside [0,1] at step " +
                    std::to_string(i));
    }
    const Rat lo(1, static_cast<long>(i + 2));
    const Rat hi = 1 - lo;
    if (r < lo) r = lo;
    if (r > hi) r = hi;
    const bool include = ratio_less(st.a, st.z, r);
    st.history.push_back({i, st.a, st.z, r, include});
    const auto& bucket = Z.primes[i];
    st.Z.insert(st.Z.end(), bucket.begin(), bucket.end());
    st.z += bucket.size();
    if (include) {
      st.A.insert(st.A.end(), bucket.begin(), bucket.end());
      st.a += bucket.size();
    }
    st.step = i + 1;
  }
  std::sort(st.A.begin(), st.A.end());
  std::sort(st.Z.begin(), st.Z.end());
  return st;
}

bool replay_matches(const PartitionState& state) {
  for (const auto& h : state.history) {
    if (ratio_less(h.a, h.z, h.r) != h.include) return false;
  }
  return true;
}

namespace {

// (a_i, z_i) for i = 1 .. step
std::vector<std::pair<u64, u64>> ratios(const PartitionState& state) {
  std::vector<std::pair<u64, u64>> q;
  q.reserve(state.history.size() + 1);
  for (const auto& h : state.history) q.emplace_back(h.a, h.z);
  q.emplace_back(state.a, state.z);
  return q;
}

}  // namespace

ExtremaTrace extrema(const PartitionState& state) {
  ExtremaTrace t;
  if (state.step == 0 || !state.special.empty()) return t;
  const auto q = ratios(state);
  t.j.push_back(1);
  for (std::size_t i = 1; i + 1 < q.size(); ++i) {
    const auto [a0, z0] = q[i - 1];
    const auto [a1, z1] = q[i];
    const auto [a2, z2] = q[i + 1];
    if (frac_less(a0, z0, a1, z1) && frac_less(a2, z2, a1, z1)) t.j.push_back(i + 1);
    if (frac_less(a1, z1, a0, z0) && frac_less(a1, z1, a2, z2)) t.k.push_back(i + 1);
  }
  return t;
}

Rat ratio_at(const PartitionState& state, u64 i) {
  const auto q = ratios(state);
  if (i < 1 || i > q.size()) fail_argument("ratio_at: position out of range");
  const auto [a, z] = q[i - 1];
  if (z == 0) fail_argument("ratio_at: empty prefix");
  Rat r(to_int(a), to_int(z));
  r.canonicalize();
  return r;
}

bool alternates(const ExtremaTrace& trace) {
  if (trace.j.empty()) return trace.k.empty();
  if (trace.j.front() != 1) return false;
  if (trace.k.size() != trace.j.size() && trace.k.size() + 1 != trace.j.size()) return false;
  u64 prev_k = 0;
  for (std::size_t i = 0; i < trace.j.size(); ++i) {
    if (!(prev_k < trace.j[i])) return false;
    if (i < trace.k.size()) {
      if (!(trace.j[i] < trace.k[i])) return false;
      prev_k = trace.k[i];
    }
  }
  return true;
}

u64 terminal_run(const PartitionState& state) {
  if (state.history.empty()) return 0;
  const bool last = state.history.back().include;
  u64 run = 0;
  for (auto it = state.history.rbegin(); it != state.history.rend() && it->include == last; ++it) ++run;
  return run;
}

// ---- partition and assembly ----

PrimeSet set_union(const PrimeSet& a, const PrimeSet& b) {
  PrimeSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PrimeSet set_intersection(const PrimeSet& a, const PrimeSet& b) {
  PrimeSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PrimeSet set_difference(const PrimeSet& a, const PrimeSet& b) {
  PrimeSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PartitionResult partition(const std::vector<ComputableReal>& deltas, u64 X) {
  if (deltas.empty()) fail_argument("partition: need at least one density");
  bool all_exact = true;
  Rat exact_sum = 0;
  Rat late_sum = 0;
  for (const auto& d : deltas) {
    if (d.exact()) {
      exact_sum += *d.exact();
    } else {
      all_exact = false;
    }
    late_sum += d.at(1'000'000);
  }
  if (all_exact && exact_sum != 1) fail_argument("partition: densities sum to " + to_string(exact_sum) + ", not 1");
  if (late_sum > Rat(1) + Rat(1, 1'000'000)) fail_argument("partition: approximants sum above 1");

  PartitionResult out;
  PrimeSet Z = primes_up_to(X);
  for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
    const std::vector<ComputableReal> before(deltas.begin(), deltas.begin() + static_cast<long>(i));
    const ComputableReal gamma = ComputableReal::one_minus_sum(before);
    PartitionState st = subset_of_density(NormBuckets::over_q(Z), gamma, deltas[i], Z.size());
    Z = set_difference(Z, st.A);
    out.parts.push_back(st.A);
    out.states.push_back(std::move(st));
  }
  out.parts.push_back(std::move(Z));
  return out;
}

Assembly assemble_rings(const std::vector<PrimeSet>& W, const std::vector<RingTSets>& tsets, u64 X,
                        double density_tolerance) {
  const std::size_t t = W.size();
  if (t == 0 || tsets.size() != t) fail_argument("assemble: need one T-set pair per part");
  const PrimeSet universe = primes_up_to(X);
  {
    PrimeSet all;
    std::size_t total = 0;
    for (const auto& w : W) {
      all = set_union(all, w);
      total += w.size();
    }
    if (all != universe || total != universe.size()) fail_argument("assemble: W does not partition the primes <= X");
  }
  std::vector<PrimeSet> T1(t), T2(t);
  PrimeSet all_t1;
  for (std::size_t r = 0; r < t; ++r) {
    T1[r] = set_intersection(tsets[r].T1, universe);
    T2[r] = set_intersection(tsets[r].T2, universe);
    all_t1 = set_union(all_t1, T1[r]);
  }

  Assembly out;
  for (std::size_t i = 0; i < t; ++i) {
    const std::size_t j = (i + t - 1) % t;
    PrimeSet other_t1;
    for (std::size_t r = 0; r < t; ++r) {
      if (r != i) other_t1 = set_union(other_t1, T1[r]);
    }
    PrimeSet S = set_union(set_union(W[i], T1[i]), T2[j]);
    S = set_difference(S, set_union(T2[i], other_t1));
    out.S.push_back(std::move(S));
  }

  const Rat pi(static_cast<long>(universe.size()));
  for (std::size_t i = 0; i < t; ++i) {
    const Json in = {{"part", i + 1}, {"X", X}};
    const auto missing = set_difference(T1[i], out.S[i]).size();
    out.report.add("assembly.contains-t1", "assembly:contains-t1-omits-t2", in, missing, 0, missing == 0);
    const auto hit = set_intersection(out.S[i], T2[i]).size();
    out.report.add("assembly.omits-t2", "assembly:contains-t1-omits-t2", in, hit, 0, hit == 0);
    const auto moved = set_difference(out.S[i], W[i]).size() + set_difference(W[i], out.S[i]).size();
    const double frac = universe.empty() ? 0.0 : static_cast<double>(moved) / static_cast<double>(universe.size());
    Json din = in;
    din["moved"] = moved;
    out.report.add("assembly.density", "assembly:density-unchanged", din, frac, density_tolerance,
                   frac <= density_tolerance);
  }
  std::size_t overlaps = 0, total = 0;
  PrimeSet all;
  for (std::size_t i = 0; i < t; ++i) {
    total += out.S[i].size();
    overlaps += set_intersection(all, out.S[i]).size();
    all = set_union(all, out.S[i]);
  }
  const Json in = {{"t", t}, {"X", X}};
  out.report.add("assembly.disjoint", "assembly:partition", in, overlaps, 0, overlaps == 0);
  const bool covers = all == universe;
  out.report.add("assembly.cover", "assembly:partition", in, all.size(), universe.size(), covers);
  (void)total;
  return out;
}

Rat empirical_density(const PrimeSet& S, u64 X) {
  const u64 pi = prime_pi(X);
  if (pi == 0) return 0;
  const auto count = static_cast<u64>(std::upper_bound(S.begin(), S.end(), X) - S.begin());
  Rat r(static_cast<long>(count), static_cast<long>(pi));
  r.canonicalize();
  return r;
}

std::vector<Rat> density_stream(const PrimeSet& S, const std::vector<u64>& grid) {
  std::vector<Rat> out;
  out.reserve(grid.size());
  for (u64 X : grid) out.push_back(empirical_density(S, X));
  return out;
}

// ---- files ----

PrimeSet read_prime_set(std::istream& in) {
  PrimeSet out;
  std::string line;
  u64 lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    if (!all_digits(s)) fail_argument("prime set line " + std::to_string(lineno) + ": not a number");
    const u64 p = std::stoull(s);
    if (!is_prime_u64(p)) fail_argument("prime set line " + std::to_string(lineno) + ": " + s + " is not prime");
    if (!out.empty() && p <= out.back()) fail_argument("prime set line " + std::to_string(lineno) + ": not ascending");
    out.push_back(p);
  }
  return out;
}

void write_prime_set(std::ostream& out, const PrimeSet& s) {
  for (u64 p : s) out << p << '\n';
}

void write_manifest(std::ostream& out, const std::vector<PrimeSet>& parts) {
  std::vector<std::pair<u64, std::size_t>> rows;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (u64 p : parts[i]) rows.emplace_back(p, i + 1);
  }
  std::sort(rows.begin(), rows.end());
  for (const auto& [p, i] : rows) {
    Json j;
    j["prime"] = p;
    j["part"] = i;
    out << j.dump() << '\n';
  }
}

std::vector<PrimeSet> read_manifest(std::istream& in) {
  std::vector<PrimeSet> parts;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const std::exception& e) {
      fail_argument(std::string("manifest: ") + e.what());
    }
    if (!j.contains("prime") || !j.contains("part")) fail_argument("manifest: record needs prime and part");
    const u64 p = j["prime"].get<u64>();
    const std::size_t part = j["part"].get<std::size_t>();
    if (part == 0) fail_argument("manifest: parts are numbered from 1");
    if (parts.size() < part) parts.resize(part);
    parts[part - 1].push_back(p);
  }
  for (auto& s : parts) std::sort(s.begin(), s.end());
  return parts;
}

}  // namespace edsq
