#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cubeadv/codes.hpp"
#include "cubeadv/packing.hpp"
#include "cubeadv/serialize.hpp"

namespace cubeadv {

/// One dimension's certified construction summary.
struct ReportRow {
  int d = 0;
  int S = 0;
  bool constructed = false;  // false when F-family sampling gave up
  Weight certified;
  LemmaOutcome outcome = LemmaOutcome::Inconclusive;
  std::string target_decimal;  // d / (5 ln d)
  Rat ratio_lb;                // certified weight / 2
  int max_intersection = 0;
  std::uint64_t attempts = 0;
};

/// "start:stop:step" (inclusive stop) or a single value. Empty when start > stop.
std::vector<int> parse_range(std::string_view text);

/// Rows in the order of `ds`; rows are computed on up to `threads` workers
/// without affecting the output.
std::vector<ReportRow> build_report(const std::vector<int>& ds, std::uint64_t seed,
                                    const BuildOptions& opts = {}, unsigned threads = 1);

/// Columns d,S,certifiedWeight,targetD5lnD,centralLemmaHolds,ratioLB; decimal renderings.
std::string report_csv(const std::vector<ReportRow>& rows);
/// Exact rationals for the same rows.
Json report_json(const std::vector<ReportRow>& rows, std::uint64_t seed);

}  // namespace cubeadv
