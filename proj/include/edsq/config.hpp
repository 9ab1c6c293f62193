#pragma once

// Run configuration: key=value text, one key per line, '#' comments.

#include <string>
#include <vector>

#include "edsq/seq_builder.hpp"

namespace edsq {

struct RunConfig {
  Int a4 = -16;
  Int a6 = 16;
  Rat x = 0;  // generator Q
  Rat y = 4;
  unsigned t = 2;
  Variant variant = Variant::Discrete;
  u64 count = 2;
  u64 p = 3;
  u64 q = 5;
  u64 trial_bound = 1'000'000;
  u64 rho_rounds = 200'000;
  u64 max_index = 20'000;
  u64 scan_bound = 100'000;
  u64 ell_bound = 50;
  std::vector<std::string> densities{"1/2", "1/2"};
  u64 density_bound = 1'000'000;
  std::string relax = "strict";
  std::string tsets_out;     // prime-set files <prefix>.T1.<r> / <prefix>.T2.<r>
  std::string manifest_out;  // partition manifest

  static const std::vector<std::string>& keys();

  /// Unknown keys and malformed values throw InvalidArgument.
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  /// Every key in keys() order; parse(canonical()) reproduces *this.
  std::string canonical() const;

  Curve curve() const { return Curve(a4, a6); }
  Point generator() const { return Point(x, y); }
  FactorBudget budget() const;
  BuildOptions build_options() const;
  RelaxPolicy relax_policy() const { return RelaxPolicy::parse(relax); }

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

u64 parse_u64(const std::string& key, const std::string& text);
Rat parse_rat(const std::string& key, const std::string& text);
std::vector<std::string> split(const std::string& text, char sep);

}  // namespace edsq
