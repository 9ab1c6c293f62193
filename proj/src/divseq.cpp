#include "edsq/divseq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <thread>

#include "edsq/eds.hpp"
#include "edsq/error.hpp"

namespace edsq {

namespace {

constexpr u64 kPiLimit = 10'000'000;

[[noreturn]] void falsified(const std::string& what) { throw Error(ErrorKind::Falsified, what); }

void sort_desc_unique(std::vector<Int>& v) {
  std::sort(v.begin(), v.end(), [](const Int& a, const Int& b) { return a > b; });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Square root of a perfect square, else the number itself. The prime set is the same.
Int radical_hint(const Int& v) {
  if (v > 1 && mpz_perfect_square_p(v.get_mpz_t())) return sqrt(v);
  return v;
}

bool divides(u64 p, const Int& v) { return mpz_divisible_ui_p(v.get_mpz_t(), p) != 0; }

void strip_u64(Int& v, u64 p) {
  while (divides(p, v)) mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
}

template <class F>
void parallel_for(std::size_t count, unsigned workers, F&& body) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

const char* mode_name(Mode m) { return m == Mode::Exact ? "exact" : "scan"; }

std::vector<u64> prime_divisors_u64(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  for (const auto& f : factor_u64(n).factors) out.push_back(to_u64(f.prime));
  return out;
}

std::vector<u64> divisors_u64(u64 n) {
  std::vector<u64> out{1};
  if (n < 2) return out;
  for (const auto& f : factor_u64(n).factors) {
    const u64 p = to_u64(f.prime);
    const std::size_t size = out.size();
    u64 pk = 1;
    for (unsigned e = 1; e <= f.exponent; ++e) {
      pk *= p;
      for (std::size_t i = 0; i < size; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- ApparitionTable ----

std::optional<u64> ApparitionTable::rank(u64 p) const {
  if (auto it = entries.find(p); it != entries.end()) return it->second;
  if (auto it = bad.find(p); it != bad.end()) return it->second;
  return std::nullopt;
}

bool ApparitionTable::is_bad(u64 p) const {
  return std::binary_search(bad_primes.begin(), bad_primes.end(), p);
}

void ApparitionTable::index() {
  by_rank_.clear();
  for (const auto& [p, r] : entries) by_rank_[r].push_back(p);
  for (const auto& [p, r] : bad) by_rank_[r].push_back(p);
  for (auto& [r, v] : by_rank_) std::sort(v.begin(), v.end());
}

std::vector<u64> ApparitionTable::with_rank(u64 n) const {
  auto it = by_rank_.find(n);
  return it == by_rank_.end() ? std::vector<u64>{} : it->second;
}

std::vector<u64> ApparitionTable::with_rank_dividing(u64 n) const {
  std::vector<u64> out;
  for (u64 k : divisors_u64(n)) {
    auto it = by_rank_.find(k);
    if (it != by_rank_.end()) out.insert(out.end(), it->second.begin(), it->second.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- DivisionSequence ----

namespace {

void check_sequence_point(const Curve& c, const Point& P) {
  if (!on_curve(c, P)) fail_argument("division sequence: point not on curve");
  if (P.is_infinity() || !P.is_integral()) fail_argument("division sequence: point must be affine and integral");
  if (is_torsion(c, P)) fail_argument("division sequence: point is torsion");
}

}  // namespace

DivisionSequence::DivisionSequence(Curve c, Point P, FactorBudget budget)
    : curve_(std::move(c)), point_(std::move(P)), budget_(budget) {
  check_sequence_point(curve_, point_);
}

DivisionSequence::DivisionSequence(Curve c, Point Q, u64 z, FactorBudget budget)
    : curve_(c), z_(z), budget_(budget) {
  if (z == 0) fail_argument("division sequence: multiplier must be positive");
  base_ = std::make_unique<DivisionSequence>(c, Q, budget);
  point_ = scalar_mul(curve_, Int(to_int(z)), Q);
  if (!point_.is_integral()) fail_argument("division sequence: zQ is not integral");
  check_sequence_point(curve_, point_);
}

void DivisionSequence::attach_table(std::shared_ptr<const ApparitionTable> table) {
  table_ = std::move(table);
  if (base_) base_->attach_table(table_ ? table_->base_table : nullptr);
}

Rat DivisionSequence::x(u64 n) const {
  if (n == 0) fail_argument("x: index must be >= 1");
  return x_multiple(curve_, point_, n);
}

Int DivisionSequence::d(u64 n) const {
  {
    std::lock_guard lock(mu_);
    if (auto it = d_cache_.find(n); it != d_cache_.end()) return it->second;
  }
  Int value = x(n).get_den();
  std::lock_guard lock(mu_);
  return d_cache_.emplace(n, std::move(value)).first->second;
}

Int DivisionSequence::primitive_part(u64 n) const {
  Int part = d(n);
  for (u64 q : prime_divisors_u64(n)) {
    Int g = gcd(part, d(n / q));
    while (g > 1) {
      part /= g;
      g = gcd(part, g);
    }
  }
  return part;
}

const PrimitiveInfo& DivisionSequence::primitive(u64 n, Mode mode) const { return primitive_impl(n, mode, false); }

const PrimitiveInfo& DivisionSequence::certified(u64 n) const { return primitive_impl(n, Mode::Exact, true); }

const PrimitiveInfo& DivisionSequence::primitive_impl(u64 n, Mode mode, bool lenient) const {
  const auto key = std::make_pair(n, static_cast<int>(mode) * 2 + (lenient ? 1 : 0));
  {
    std::lock_guard lock(mu_);
    if (auto it = prim_cache_.find(key); it != prim_cache_.end()) return it->second;
  }
  PrimitiveInfo info = compute_primitive(n, mode, lenient);
  if (mode == Mode::Exact && !lenient && !info.complete()) {
    fail_budget("primitive divisors of d_" + std::to_string(n) + ": factorization incomplete within budget");
  }
  std::lock_guard lock(mu_);
  return prim_cache_.emplace(key, std::move(info)).first->second;
}

PrimitiveInfo DivisionSequence::compute_primitive(u64 n, Mode mode, bool lenient) const {
  if (n == 0) fail_argument("primitive: index must be >= 1");
  if (mode == Mode::Scan && !table_) fail_argument("scan mode needs an apparition table");
  PrimitiveInfo info;
  info.n = n;
  info.part = primitive_part(n);

  if (base_) {
    // Primes with r_p(P) = n are those with r_p(Q) = n e, e | z, gcd(n e, z) = e.
    Int rem = info.part;
    bool first = true;
    for (u64 e : divisors_u64(z_)) {
      if (std::gcd(n * e, z_) != e) continue;
      const PrimitiveInfo& piece = base_->primitive_impl(n * e, mode, lenient);
      if (!mpz_divisible_p(info.part.get_mpz_t(), piece.part.get_mpz_t())) {
        falsified("piece d_" + std::to_string(n * e) + " of the base sequence does not divide the primitive part");
      }
      for (Int g = gcd(rem, piece.part); g > 1; g = gcd(rem, g)) rem /= g;
      info.route.push_back(n * e);
      info.primes.insert(info.primes.end(), piece.primes.begin(), piece.primes.end());
      info.cofactors.insert(info.cofactors.end(), piece.cofactors.begin(), piece.cofactors.end());
      info.cofactor_primes += piece.cofactor_primes;
      info.cofactor_exact = info.cofactor_exact && piece.cofactor_exact;
      if (!piece.cofactors.empty()) {
        info.floor = first ? piece.floor : std::min(info.floor, piece.floor);
        first = false;
      }
    }
    if (rem != 1) {
      falsified("primitive part of d_" + std::to_string(n) + " disagrees with the base-point decomposition");
    }
    sort_desc_unique(info.primes);
    return info;
  }

  Int rest = radical_hint(info.part);
  if (table_) {
    for (u64 p : table_->with_rank(n)) {
      if (!divides(p, rest)) {
        falsified("prime " + std::to_string(p) + " with rank " + std::to_string(n) + " does not divide d_n");
      }
      strip_u64(rest, p);
      info.primes.push_back(to_int(p));
    }
    for (u64 p : table_->bad_primes) {
      if (divides(p, rest)) {
        strip_u64(rest, p);
        info.primes.push_back(to_int(p));
      }
    }
  }

  if (mode == Mode::Scan) {
    info.floor = to_int(table_->scan_bound);
  } else {
    FactorBudget b = budget_;
    if (table_) b.trial_bound = std::max<u64>(b.trial_bound, 1);
    PartialFactorization f = factor(rest, b);
    for (const auto& pp : f.factors) info.primes.push_back(pp.prime);
    rest = f.cofactor;
    info.floor = to_int(std::max<u64>(b.trial_bound, table_ ? table_->scan_bound : 0));
  }

  if (rest > 1) {
    const DistinctPrimeBound bound = distinct_prime_bound(rest, budget_.classify_bits);
    info.cofactors.push_back(rest);
    info.cofactor_primes = bound.at_least;
    info.cofactor_exact = bound.exact;
  }
  sort_desc_unique(info.primes);
  return info;
}

// ---- terms ----

DivTerm div_term(const DivisionSequence& seq, u64 n, Mode mode) {
  DivTerm t;
  t.n = n;
  t.x = seq.x(n);
  t.d = t.x.get_den();
  Int rest = t.d;
  std::vector<Int> primes;

  if (mode == Mode::Exact) {
    for (u64 k : divisors_u64(n)) {
      if (k == 1) continue;
      const auto& info = seq.primitive(k, Mode::Exact);
      primes.insert(primes.end(), info.primes.begin(), info.primes.end());
    }
  } else {
    const ApparitionTable* table = seq.table();
    if (!table) fail_argument("scan mode needs an apparition table");
    for (u64 p : table->with_rank_dividing(n)) {
      if (!table->is_bad(p) && !divides(p, t.d)) {
        falsified("table prime " + std::to_string(p) + " does not divide d_" + std::to_string(n));
      }
      primes.push_back(to_int(p));
    }
    for (u64 p : table->bad_primes) {
      if (divides(p, t.d)) primes.push_back(to_int(p));
    }
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  for (const Int& p : primes) {
    const unsigned e = strip_prime(rest, p);
    if (e == 0) continue;
    t.factorization.factors.push_back({p, e});
    t.support.push_back(p);
  }
  t.factorization.cofactor = rest;
  t.factorization.complete = (rest == 1);
  if (mode == Mode::Exact && rest != 1) {
    falsified("d_" + std::to_string(n) + " has primes outside the primitive parts of its divisors");
  }
  t.support_complete = t.factorization.complete;

  const auto& info = seq.primitive(n, mode);
  t.primitive_part = info.part;
  t.primitive_primes = info.primes;
  t.primitive_complete = info.complete();
  return t;
}

unsigned default_workers() {
  if (const char* env = std::getenv("EDS_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

ApparitionTable scan_one(const DivisionSequence& seq, const std::vector<u64>& primes, u64 X, u64 cap,
                         unsigned workers, const ApparitionTable* base, u64 z) {
  ApparitionTable table;
  table.scan_bound = X;
  table.bad_index_cap = cap;
  const Int disc = seq.curve().discriminant();
  std::vector<u64> good;
  for (u64 p : primes) {
    if (divides(p, disc)) {
      table.bad_primes.push_back(p);
    } else {
      good.push_back(p);
    }
  }
  std::vector<u64> ranks(good.size());
  if (base) {
    for (std::size_t i = 0; i < good.size(); ++i) {
      const u64 r = base->entries.at(good[i]);
      ranks[i] = r / std::gcd(r, z);
    }
  } else {
    parallel_for(good.size(), workers,
                 [&](std::size_t i) { ranks[i] = point_order_mod_p(seq.curve(), seq.point(), good[i]); });
  }
  for (std::size_t i = 0; i < good.size(); ++i) table.entries.emplace(good[i], ranks[i]);

  std::vector<u64> pending = table.bad_primes;
  for (u64 n = 1; n <= cap && !pending.empty(); ++n) {
    const Int dn = seq.d(n);
    std::vector<u64> still;
    for (u64 p : pending) {
      if (divides(p, dn)) {
        table.bad.emplace(p, n);
      } else {
        still.push_back(p);
      }
    }
    pending.swap(still);
  }
  table.index();
  return table;
}

}  // namespace

ApparitionTable apparition_scan(const DivisionSequence& seq, u64 X, u64 bad_index_cap, unsigned workers) {
  const auto primes = primes_up_to(X);
  if (const DivisionSequence* base = seq.base()) {
    auto base_table = std::make_shared<ApparitionTable>(
        scan_one(*base, primes, X, bad_index_cap * seq.multiplier(), workers, nullptr, 1));
    ApparitionTable table = scan_one(seq, primes, X, bad_index_cap, workers, base_table.get(), seq.multiplier());
    table.base_table = std::move(base_table);
    return table;
  }
  return scan_one(seq, primes, X, bad_index_cap, workers, nullptr, 1);
}

PrimitiveList primitive_divisors(const DivisionSequence& seq, u64 n, Mode mode) {
  const auto& info = seq.primitive(n, mode);
  return {info.primes, info.complete()};
}

KthResult kth_largest_primitive(const DivisionSequence& seq, u64 n, unsigned k, Mode mode, const Int& threshold) {
  if (k == 0) fail_argument("kth_largest_primitive: k must be >= 1");
  const auto& info = seq.primitive(n, mode);
  KthResult r;
  for (const Int& p : info.primes) {
    if (p > threshold) r.witness_primes.push_back(p);
  }
  r.witnesses = static_cast<unsigned>(r.witness_primes.size());
  if (!info.cofactors.empty() && info.floor >= threshold) r.witnesses += info.cofactor_primes;
  r.threshold_certified = r.witnesses >= k;
  if (info.complete() && k <= info.primes.size()) r.prime = info.primes[k - 1];
  return r;
}

KthInUniverse kth_in_universe(const DivisionSequence& seq, u64 n, unsigned k) {
  const auto& info = seq.primitive(n, Mode::Scan);
  KthInUniverse out;
  const unsigned c = info.cofactors.empty() ? 0 : info.cofactor_primes;
  if (c >= k) {
    out.kind = KthInUniverse::Beyond;
    return out;
  }
  if (!info.cofactor_exact) return out;  // Unresolved
  const std::size_t idx = k - c - 1;
  if (idx < info.primes.size()) {
    out.kind = KthInUniverse::Prime;
    out.prime = info.primes[idx];
  } else {
    out.kind = KthInUniverse::Absent;
  }
  return out;
}

ALTable compute_aL(const DivisionSequence& seq, unsigned t, u64 ell_bound, Mode mode, u64 max_index) {
  if (t < 2) fail_argument("compute_aL: t must be >= 2");
  ALTable table;
  table.t = t;
  for (u64 ell : primes_up_to(ell_bound)) {
    ALEntry entry;
    u64 n = ell;
    for (u64 a = 1; n <= max_index; ++a) {
      try {
        const auto& info = mode == Mode::Exact ? seq.certified(n) : seq.primitive(n, mode);
        if (info.count_at_least() >= t) {
          entry = {a, true};
          break;
        }
        if (!info.count_exact()) break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::BudgetExhausted) throw;
        break;
      }
      if (n > max_index / ell) break;
      n *= ell;
    }
    table.a[ell] = entry;
    if (!entry.resolved) {
      table.complete = false;
    } else if (entry.a > 1) {
      table.L_set.push_back(ell);
      Int pe;
      mpz_ui_pow_ui(pe.get_mpz_t(), ell, entry.a - 1);
      table.L_value *= pe;
    }
  }
  return table;
}

MuValue mu_of_support(const std::vector<Int>& support_in) {
  std::vector<Int> support = support_in;
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  MuValue out;
  out.exact = true;
  out.lower = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Int& p = support[i];
    if (p > kPiLimit) {
      // Remaining ratios are at most |S| / pi(limit).
      Rat cap(static_cast<long>(support.size()), static_cast<long>(prime_pi(kPiLimit)));
      if (cap > out.lower) out.exact = false;
      out.upper = std::max(out.lower, cap);
      return out;
    }
    Rat ratio(static_cast<long>(i + 1), static_cast<long>(prime_pi(to_u64(p))));
    ratio.canonicalize();
    if (ratio > out.lower) {
      out.lower = ratio;
      out.attained_at = to_u64(p);
    }
  }
  out.upper = out.lower;
  return out;
}

MuValue mu(const DivisionSequence& seq, u64 ell, Mode mode) {
  if (mode == Mode::Exact) return mu_of_support(div_term(seq, ell, Mode::Exact).support);
  const ApparitionTable* table = seq.table();
  if (!table) fail_argument("scan mode needs an apparition table");
  const DivTerm term = div_term(seq, ell, Mode::Scan);
  MuValue out = mu_of_support(term.support);
  if (term.factorization.cofactor == 1) return out;
  // Primes above the scan bound: at most log(cofactor) / log(X) of them.
  const Int rest = radical_hint(term.factorization.cofactor);
  const double bits = static_cast<double>(mpz_sizeinbase(rest.get_mpz_t(), 2));
  const u64 X = table->scan_bound;
  const u64 large = static_cast<u64>(bits / std::log2(static_cast<double>(X)));
  Rat tail(static_cast<long>(term.support.size() + large), static_cast<long>(prime_pi(X)));
  tail.canonicalize();
  out.upper = std::max(out.upper, tail);
  out.exact = false;
  return out;
}

u64 primitive_onset(const DivisionSequence& seq, unsigned t, u64 n_max, Mode mode) {
  for (u64 n = n_max; n >= 1; --n) {
    const PrimitiveInfo& info = mode == Mode::Exact ? seq.certified(n) : seq.primitive(n, mode);
    if (info.count_at_least() < t) return n + 1;
  }
  return 1;
}

}  // namespace edsq
