#include "cubeadv/serialize.hpp"

#include "cubeadv/errors.hpp"

namespace cubeadv {

namespace {

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidArgument(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("field '") + key + "': " + e.what());
  }
}

BigInt get_bigint(const Json& j, const char* key) { return parse_bigint(get<std::string>(j, key)); }
Rat get_rat(const Json& j, const char* key) { return Rat::parse(get<std::string>(j, key)); }

}  // namespace

std::string to_string(CountKind k) { return k == CountKind::Exact ? "exact" : "lowerBound"; }

CountKind count_kind_from_string(std::string_view s) {
  if (s == "exact") return CountKind::Exact;
  if (s == "lowerBound") return CountKind::LowerBound;
  throw InvalidArgument("count kind must be 'exact' or 'lowerBound'");
}

Json to_json(const CodeFamily& family) {
  Json j;
  j["d"] = family.d;
  j["S"] = family.S;
  j["kind"] = family.kind == FamilyKind::Warmup ? "warmup" : "probabilistic";
  j["seed"] = family.seed;
  Json fs = Json::array();
  for (const auto& f : family.F) {
    Json row = Json::array();
    for (int i : f) row.push_back(i + 1);
    fs.push_back(std::move(row));
  }
  j["F"] = std::move(fs);
  j["maxIntersection"] = family.max_intersection;
  j["attempts"] = family.attempts;
  Json codes = Json::array();
  for (const auto& c : family.codes) {
    Json cj;
    cj["k"] = c.k;
    cj["repr"] = c.is_explicit() ? "explicit" : "implicit";
    if (c.is_explicit()) cj["words"] = c.words();
    cj["count"] = c.size.count.get_str();
    cj["countKind"] = to_string(c.size.kind);
    cj["certified1011"] = c.certified_threshold;
    if (!c.empty_j.empty()) cj["emptyJ"] = c.empty_j;
    codes.push_back(std::move(cj));
  }
  j["codes"] = std::move(codes);
  return j;
}

CodeFamily family_from_json(const Json& j) {
  CodeFamily fam;
  fam.d = get<int>(j, "d");
  fam.S = get<int>(j, "S");
  if (fam.d < 2 || fam.S < 2) throw InvalidArgument("family needs d >= 2 and S >= 2");
  const auto kind = get<std::string>(j, "kind");
  if (kind == "warmup") {
    fam.kind = FamilyKind::Warmup;
  } else if (kind == "probabilistic") {
    fam.kind = FamilyKind::Probabilistic;
  } else {
    throw InvalidArgument("family kind must be 'warmup' or 'probabilistic'");
  }
  fam.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("maxIntersection")) fam.max_intersection = get<int>(j, "maxIntersection");
  if (j.contains("attempts")) fam.attempts = get<std::uint64_t>(j, "attempts");
  for (const auto& row : get<Json>(j, "F")) {
    IndexSet f;
    for (const auto& v : row) {
      const int i = v.get<int>() - 1;
      if (i < 0 || i >= fam.d || (!f.empty() && i <= f.back())) {
        throw InvalidArgument("F-sets must be increasing indices in [1,d]");
      }
      f.push_back(i);
    }
    fam.F.push_back(std::move(f));
  }
  if (fam.F.size() != static_cast<std::size_t>(fam.S - 1)) throw InvalidArgument("need one F-set per class 2..S");
  const auto codes = get<Json>(j, "codes");
  if (codes.size() != static_cast<std::size_t>(fam.S - 1)) throw InvalidArgument("need one code per class 2..S");
  int expect_k = 2;
  for (const auto& cj : codes) {
    const int k = get<int>(cj, "k");
    if (k != expect_k++) throw InvalidArgument("codes must list classes 2..S in order");
    Code c = implicit_code(k, fam.d, fam.F);
    const auto repr = get<std::string>(cj, "repr");
    if (repr == "explicit") {
      auto words = get<std::vector<Letters>>(cj, "words");
      for (const auto& w : words) {
        if (static_cast<int>(w.size()) != fam.d) throw InvalidArgument("word length differs from d");
        for (int v : w) {
          if (v < 1 || v > k) throw InvalidArgument("letter outside [1,k]");
        }
      }
      std::sort(words.begin(), words.end());
      words.erase(std::unique(words.begin(), words.end()), words.end());
      c.repr = std::move(words);
    } else if (repr != "implicit") {
      throw InvalidArgument("code repr must be 'explicit' or 'implicit'");
    }
    c.size = {count_kind_from_string(get<std::string>(cj, "countKind")), get_bigint(cj, "count")};
    c.certified_threshold = get<bool>(cj, "certified1011");
    fam.codes.push_back(std::move(c));
  }
  return fam;
}

Json to_json(const EpsilonPacking& p) {
  Json j;
  j["d"] = p.d;
  j["eps"] = p.eps.to_string();
  j["mode"] = p.mode == PackingMode::Materialized ? "materialized" : "counted";
  Json cubes = Json::array();
  for (const auto& c : p.cubes) cubes.push_back(Json{{"k", c.k}, {"word", c.word}});
  j["cubes"] = std::move(cubes);
  Json nu = Json::object();
  Json nu_kind = Json::object();
  for (const auto& [k, c] : p.nu) {
    nu[std::to_string(k)] = c.count.get_str();
    nu_kind[std::to_string(k)] = to_string(c.kind);
  }
  j["nu"] = std::move(nu);
  j["nuKind"] = std::move(nu_kind);
  const Weight w = weight(p);
  j["weight"] = w.value.to_string();
  j["weightKind"] = to_string(w.kind);
  j["provenance"] = p.provenance;
  return j;
}

EpsilonPacking packing_from_json(const Json& j) {
  EpsilonPacking p;
  p.d = get<int>(j, "d");
  if (p.d < 1) throw InvalidArgument("packing needs d >= 1");
  p.eps = get_rat(j, "eps");
  const auto mode = get<std::string>(j, "mode");
  if (mode == "materialized") {
    p.mode = PackingMode::Materialized;
  } else if (mode == "counted") {
    p.mode = PackingMode::Counted;
  } else {
    throw InvalidArgument("packing mode must be 'materialized' or 'counted'");
  }
  if (j.contains("provenance")) p.provenance = get<std::string>(j, "provenance");
  for (const auto& cj : get<Json>(j, "cubes")) {
    const int k = get<int>(cj, "k");
    const auto word = get<Letters>(cj, "word");
    if (static_cast<int>(word.size()) != p.d) throw InvalidArgument("cube word length differs from d");
    p.cubes.push_back(place(k, word, p.eps));
  }
  const auto nu = get<Json>(j, "nu");
  const Json nu_kind = j.contains("nuKind") ? j.at("nuKind") : Json::object();
  for (auto it = nu.begin(); it != nu.end(); ++it) {
    const int k = static_cast<int>(parse_bigint(it.key()).get_si());
    if (k < 2) throw InvalidArgument("nu keyed by k >= 2");
    ClassCount c;
    c.count = parse_bigint(it.value().get<std::string>());
    c.kind = nu_kind.contains(it.key()) ? count_kind_from_string(nu_kind.at(it.key()).get<std::string>())
                                        : CountKind::Exact;
    p.nu[k] = std::move(c);
  }
  if (p.mode == PackingMode::Materialized) {
    std::map<int, BigInt> seen;
    for (const auto& c : p.cubes) seen[c.k] += 1;
    for (const auto& [k, n] : seen) {
      if (!p.nu.contains(k) || p.nu.at(k).count != n) {
        throw InvalidArgument("nu disagrees with the cube list for k=" + std::to_string(k));
      }
    }
  }
  return p;
}

Json to_json(const InstanceStream& inst) {
  Json j;
  j["d"] = inst.d;
  j["eps"] = inst.eps.to_string();
  j["M"] = inst.M.get_str();
  j["mult"] = inst.multiplier.get_str();
  Json segs = Json::array();
  for (const auto& s : inst.segments) segs.push_back(Json{{"k", s.k}, {"count", s.count.get_str()}});
  j["segments"] = std::move(segs);
  return j;
}

InstanceStream instance_from_json(const Json& j) {
  InstanceStream inst;
  inst.d = get<int>(j, "d");
  inst.eps = get_rat(j, "eps");
  inst.M = get_bigint(j, "M");
  inst.multiplier = get_bigint(j, "mult");
  for (const auto& s : get<Json>(j, "segments")) {
    inst.segments.push_back({get<int>(s, "k"), get_bigint(s, "count")});
  }
  return inst;
}

Json to_json(const SimReport& r) {
  Json j;
  j["alg"] = r.alg;
  j["M"] = r.M.get_str();
  j["totalBins"] = r.total_bins.get_str();
  j["offlineBound"] = r.offline_bound.get_str();
  j["universalLB"] = r.universal_lb.get_str();
  j["ratio"] = r.ratio.to_string();
  j["ratioDecimal"] = r.ratio.to_decimal(12);
  Json segs = Json::array();
  for (const auto& s : r.per_segment) {
    segs.push_back(Json{{"k", s.k}, {"binsOpened", s.bins_opened.get_str()}});
  }
  j["perSegment"] = std::move(segs);
  return j;
}

SimReport report_from_json(const Json& j) {
  SimReport r;
  r.alg = get<std::string>(j, "alg");
  r.M = get_bigint(j, "M");
  r.total_bins = get_bigint(j, "totalBins");
  r.offline_bound = get_bigint(j, "offlineBound");
  r.universal_lb = get_bigint(j, "universalLB");
  r.ratio = get_rat(j, "ratio");
  for (const auto& s : get<Json>(j, "perSegment")) {
    r.per_segment.push_back({get<int>(s, "k"), get_bigint(s, "binsOpened")});
  }
  return r;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace cubeadv
