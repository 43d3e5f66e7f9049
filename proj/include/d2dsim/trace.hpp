#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "d2dsim/errors.hpp"

namespace d2dsim {

// One encounter between two UEs, in seconds. end > start, node_a != node_b.
struct EncounterRecord {
  std::string node_a;
  std::string node_b;
  double start = 0.0;
  double end = 0.0;

  double duration() const { return end - start; }
};

// Unordered pair of UE identifiers, canonicalized so that (i,j) == (j,i).
struct PairKey {
  std::string first;
  std::string second;

  static PairKey canonical(const std::string& a, const std::string& b) {
    return a <= b ? PairKey{a, b} : PairKey{b, a};
  }

  auto operator<=>(const PairKey&) const = default;
};

// Per-pair contact statistics: encounter count N, mean duration M and
// population variance I (denominator N).
struct ContactStats {
  PairKey pair;
  std::size_t n_encounters = 0;
  double mean_duration = 0.0;
  double var_duration = 0.0;
};

// Parses the canonical CSV trace format. The first line must be exactly
// `node_a,node_b,start,end`; every data line yields one record, in file
// order, identifiers kept verbatim. Malformed lines raise ParseError with
// the 1-based line number; a bad header raises FormatError.
std::vector<EncounterRecord> parse_trace(std::istream& in);
std::vector<EncounterRecord> parse_trace_file(const std::filesystem::path& p);

// Aggregates records into per-pair statistics. Durations are sorted before
// the moment computation, so the result is bit-identical under any
// permutation of the input.
std::map<PairKey, ContactStats> aggregate_contacts(
    const std::vector<EncounterRecord>& records);

}  // namespace d2dsim
