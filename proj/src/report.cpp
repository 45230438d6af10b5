#include "cubeadv/report.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "cubeadv/errors.hpp"

namespace cubeadv {

std::vector<int> parse_range(std::string_view text) {
  std::vector<BigInt> parts;
  std::size_t start = 0;
  while (true) {
    const auto colon = text.find(':', start);
    parts.push_back(parse_bigint(text.substr(start, colon == std::string_view::npos ? colon : colon - start)));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() > 3) throw InvalidArgument("range must be start:stop[:step]");
  const BigInt lo = parts[0];
  const BigInt hi = parts.size() > 1 ? parts[1] : lo;
  const BigInt step = parts.size() > 2 ? parts[2] : BigInt(1);
  if (step < 1) throw InvalidArgument("range step must be positive");
  if (lo < 2 && lo <= hi) throw InvalidArgument("report needs d >= 2");
  if (hi > 1'000'000) throw InvalidArgument("range too large");
  std::vector<int> out;
  for (BigInt d = lo; d <= hi; d += step) out.push_back(static_cast<int>(d.get_si()));
  return out;
}

namespace {

ReportRow compute_row(int d, std::uint64_t seed, const BuildOptions& opts) {
  ReportRow row;
  row.d = d;
  row.S = S_of(d);
  row.target_decimal = target_decimal(d);
  try {
    BuildOptions implicit_opts = opts;
    implicit_opts.mode = CodeMode::Implicit;
    const CodeFamily fam = build_separated_family(d, seed, implicit_opts);
    const Rat eps(BigInt(1), BigInt(d) * d);
    const EpsilonPacking pk = assemble(fam, eps, PackingMode::Counted, opts.caps);
    row.constructed = true;
    row.certified = weight(pk);
    row.max_intersection = fam.max_intersection;
    row.attempts = fam.attempts;
    long bits = 0;
    row.outcome = compare_weight_to_target(row.certified.value, d, bits);
  } catch (const RetriesExhausted&) {
    row.constructed = false;
    row.certified = {Rat(0), CountKind::LowerBound};
    row.outcome = LemmaOutcome::Inconclusive;
    row.attempts = opts.max_attempts;
  }
  row.ratio_lb = row.certified.value / Rat(2);
  return row;
}

std::string outcome_label(const ReportRow& r) {
  return r.constructed ? to_string(r.outcome) : "retriesExhausted";
}

}  // namespace

std::vector<ReportRow> build_report(const std::vector<int>& ds, std::uint64_t seed,
                                    const BuildOptions& opts, unsigned threads) {
  std::vector<ReportRow> rows(ds.size());
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(ds.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ds.size(); i = next++) rows[i] = compute_row(ds[i], seed, opts);
  };
  if (threads <= 1) {
    worker();
    return rows;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return rows;
}

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = "d,S,certifiedWeight,targetD5lnD,centralLemmaHolds,ratioLB\n";
  for (const auto& r : rows) {
    out += std::to_string(r.d) + "," + std::to_string(r.S) + "," + r.certified.value.to_decimal(12) +
           "," + r.target_decimal + "," + outcome_label(r) + "," + r.ratio_lb.to_decimal(12) + "\n";
  }
  return out;
}

Json report_json(const std::vector<ReportRow>& rows, std::uint64_t seed) {
  Json j;
  j["seed"] = seed;
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json row;
    row["d"] = r.d;
    row["S"] = r.S;
    row["constructed"] = r.constructed;
    row["certifiedWeight"] = r.certified.value.to_string();
    row["weightKind"] = to_string(r.certified.kind);
    row["targetD5lnD"] = r.target_decimal;
    row["centralLemma"] = outcome_label(r);
    row["ratioLB"] = r.ratio_lb.to_string();
    row["maxIntersection"] = r.max_intersection;
    row["attempts"] = r.attempts;
    arr.push_back(std::move(row));
  }
  j["rows"] = std::move(arr);
  return j;
}

}  // namespace cubeadv
