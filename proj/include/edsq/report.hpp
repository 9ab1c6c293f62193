#pragma once

// Claim records: one line per checked item, JSON-lines or TSV.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "edsq/arith.hpp"

namespace edsq {

using Json = nlohmann::ordered_json;

struct ClaimRecord {
  std::string claim;   // short id, e.g. "divisibility"
  std::string anchor;  // the statement being checked, e.g. "lemma:divisibility-sequence"
  Json inputs = Json::object();
  Json lhs;
  Json rhs;
  bool pass = false;
  bool hard = true;  // false: a failure is flagged for inspection, not counted
};

/// Big integers and rationals travel as decimal strings.
inline Json big(const Int& v) { return v.get_str(); }
inline Json big(const Rat& v) { return to_string(v); }

class Report {
 public:
  void add(ClaimRecord r) { records_.push_back(std::move(r)); }
  void add(std::string claim, std::string anchor, Json inputs, Json lhs, Json rhs, bool pass) {
    records_.push_back({std::move(claim), std::move(anchor), std::move(inputs), std::move(lhs), std::move(rhs), pass});
  }
  void append(const Report& other) {
    records_.insert(records_.end(), other.records_.begin(), other.records_.end());
  }

  const std::vector<ClaimRecord>& records() const { return records_; }
  /// Hard records only.
  bool all_pass() const { return failures() == 0; }
  std::size_t failures() const;

  void write_jsonl(std::ostream& out) const;
  void write_tsv(std::ostream& out) const;

 private:
  std::vector<ClaimRecord> records_;
};

Json to_json(const ClaimRecord& r);

}  // namespace edsq
