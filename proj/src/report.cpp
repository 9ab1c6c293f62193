#include "edsq/report.hpp"

#include <algorithm>

namespace edsq {

namespace {

std::string cell(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

}  // namespace

std::size_t Report::failures() const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const ClaimRecord& r) { return r.hard && !r.pass; }));
}

Json to_json(const ClaimRecord& r) {
  Json j;
  j["claim"] = r.claim;
  j["anchor"] = r.anchor;
  j["inputs"] = r.inputs;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["pass"] = r.pass;
  if (!r.hard) j["hard"] = false;
  return j;
}

void Report::write_jsonl(std::ostream& out) const {
  for (const auto& r : records_) out << to_json(r).dump() << '\n';
}

void Report::write_tsv(std::ostream& out) const {
  out << "claim\tanchor\tinputs\tlhs\trhs\tpass\n";
  for (const auto& r : records_) {
    out << r.claim << '\t' << r.anchor << '\t' << r.inputs.dump() << '\t' << cell(r.lhs) << '\t' << cell(r.rhs)
        << '\t' << (r.pass ? "pass" : r.hard ? "FAIL" : "flag") << '\n';
  }
}

}  // namespace edsq
